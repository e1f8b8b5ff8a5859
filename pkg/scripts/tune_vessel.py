"""Tune the default vessel's sway damping to a target Y_min / X_max ratio.

d22 only enters Y, so the ratio is monotone in it and a bracketing root
finder settles it. The result is written back to the packaged vessel file.

    python scripts/tune_vessel.py --target 0.0882
"""
from __future__ import annotations

import argparse
import json
import logging
from dataclasses import replace
from pathlib import Path

from scipy.optimize import brentq

from formsim.analysis import mu_bound
from formsim.vessel_model import default_vessel_params, validate_params

_LOGGER = logging.getLogger("tune_vessel")

VESSEL_FILE = Path(__file__).resolve().parents[1] / "formsim" / "data" / "default_vessel.json"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--target", type=float, default=0.0882, help="Y_min / X_max")
    parser.add_argument("--u-d", type=float, default=3.0)
    parser.add_argument("--v-max", type=float, default=1.0)
    parser.add_argument("--kappa-max", type=float, default=0.0075)
    parser.add_argument("--bracket", type=float, nargs=2, default=(1000.0, 5000.0))
    parser.add_argument("--write", action="store_true", help="update the packaged vessel file")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")

    base = default_vessel_params()

    def residual(d22: float) -> float:
        report = validate_params(replace(base, d22=d22), args.u_d, args.v_max, du=1e-2, dc=1e-1)
        return report.ratio - args.target

    d22 = round(brentq(residual, *args.bracket, xtol=1e-6), 4)
    tuned = replace(base, d22=d22)
    report = validate_params(tuned, args.u_d, args.v_max)
    _LOGGER.info(
        "[tune] d22=%.4f ratio=%.7g mu_bound=%.6g",
        d22,
        report.ratio,
        mu_bound(report, args.kappa_max),
    )
    if args.write:
        VESSEL_FILE.write_text(json.dumps(tuned.to_dict(), indent=2) + "\n", encoding="utf-8")
        _LOGGER.info("[tune] Wrote %s", VESSEL_FILE)


if __name__ == "__main__":
    main()
