"""Bergman kernel geometry of the egg domains E_{p,lambda} and the unit-disk gradient bounds."""

from .config import TOL, GridSpec, ScanSpec
from .diffengine import DiffConfig, wirtinger_jet
from .domain import DomainParams, NuPoint, SlicePoint, bergman_kernel, kernel_factored, u_constants
from .errors import BergmanError, InvalidParams
from .frame import hsc_report, ke_residual, ricci
from .metric import a_factors, inverse_metric_closed, metric_closed, metric_numeric
from .curvature import curvature_closed_slice, curvature_numeric

__all__ = [
    "TOL", "GridSpec", "ScanSpec", "DiffConfig", "wirtinger_jet", "DomainParams", "NuPoint", "SlicePoint",
    "bergman_kernel", "kernel_factored", "u_constants", "BergmanError", "InvalidParams", "hsc_report",
    "ke_residual", "ricci", "a_factors", "inverse_metric_closed", "metric_closed", "metric_numeric",
    "curvature_closed_slice", "curvature_numeric",
]
__version__ = "0.1.0"
