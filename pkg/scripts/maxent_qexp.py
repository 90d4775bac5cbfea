"""Maximum-entropy weights for every family on a fixed spectrum, with q-exponential fits."""

import argparse
from dataclasses import dataclass

import numpy as np

from groupentropy import EnergyConstraint, EntropySpec, maximize, verify_qexponential_form


@dataclass
class Config:
    levels: tuple = (0.0, 0.5, 1.0, 2.0, 3.0, 4.0)
    mean: float = 1.2


SPECS = [
    EntropySpec("BGS"),
    EntropySpec("Tsallis", q=0.5),
    EntropySpec("Tsallis", q=2.0),
    EntropySpec("Renyi", alpha=0.5),
    EntropySpec("NonTraceI", alpha=0.5, a=2.0),
    EntropySpec("NonTraceII", alpha=0.7, k=3.0),
    EntropySpec("NonTraceIII", alpha=0.7, gamma=1.5),
    EntropySpec("ZEntropy", alpha=0.5, gamma=1.0),
    EntropySpec("TraceI", a=2.0),
    EntropySpec("TraceII", k=2.0),
    EntropySpec("TraceIII", gamma=1.0),
]


def main(cfg: Config) -> None:
    con = EnergyConstraint(cfg.levels, cfg.mean)
    np.set_printoptions(precision=5, suppress=True)
    for spec in SPECS:
        res = maximize(spec, con)
        fit = verify_qexponential_form(res, spec)
        params = {k: v for k, v in spec.to_json().items()
                  if v is not None and k != "kind" and not (k in ("lambda", "k_scale") and v == 1.0)}
        print(f"{spec.kind.value} {params}")
        print(f"  p* = {res.p_star.probs}  converged={res.converged}  stationarity={res.stationarity_norm:.1e}")
        if fit.applicable:
            print(f"  q-exp fit: q={fit.q:.6f}  residual={fit.residual:.1e}  {'yes' if fit.is_qexp else 'no'}")
        else:
            print(f"  q-exp fit not applicable: {fit.reason}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mean", type=float, default=Config.mean)
    main(Config(mean=ap.parse_args().mean))
