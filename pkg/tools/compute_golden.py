"""Regenerate src/bergman_epl/data/golden.json from independent oracles.

Run once before wiring assertions; the committed file is the frozen result.

* KE thresholds: Ricci by the curvature-trace route (not the log det route
  the library reports), five slice sample points, threshold = half the
  oracle residual.
* Heat bound golden number: direct substitution in 40-digit mpmath.
"""

import json
import pathlib

import mpmath

from bergman_epl.domain import DomainParams
from bergman_epl.frame import KE_SAMPLE, ke_residual

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "bergman_epl" / "data" / "golden.json"
KE_WITNESSES = ((2.0, 1.0), (1.0, 2.0))


def heat_oracle(n, b, t, r):
    mpmath.mp.dps = 40
    n, b, t, r = (mpmath.mpf(v) for v in (n, b, t, r))
    m = 2 * n - 1
    return (2 * mpmath.pi * t) ** (-n) * mpmath.exp(-r**2 / (2 * t) - m**2 * b**2 * t / 8 - m * b * r / 2) * (
        1 + b * r + b**2 * t / 2
    ) ** (m / 2 - 1) * (1 + b * r)


def main():
    ke = []
    for p, lam in KE_WITNESSES:
        c, res = ke_residual(DomainParams(p, lam), KE_SAMPLE, route="trace")
        ke.append({"p": p, "lambda": lam, "oracle_c": c, "oracle_residual": res, "threshold": res / 2})
    heat = {"n": 1, "b": 1.0, "t": 1.0, "r": 1.0, "value": float(heat_oracle(1, 1, 1, 1))}
    data = {"ke_sample": [list(pt) for pt in KE_SAMPLE], "ke_thresholds": ke, "heat": heat}
    OUT.write_text(json.dumps(data, indent=2) + "\n")
    print(OUT.read_text())


if __name__ == "__main__":
    main()
