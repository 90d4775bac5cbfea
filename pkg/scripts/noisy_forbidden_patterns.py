"""Observational noise fills in the forbidden patterns of the logistic map.

For each noise amplitude, count allowed patterns A_L and report the
complexity class picked by the growth fit.
"""

import argparse
from dataclasses import dataclass, field

from groupentropy import add_observational_noise, estimate_complexity_class, logistic_seeded, pattern_distribution


@dataclass
class Config:
    n: int = 200_000
    seed: int = 3
    amplitudes: list = field(default_factory=lambda: [0.0, 1e-4, 1e-3, 1e-2, 1e-1])
    L_values: tuple = (3, 4, 5, 6, 7)


def main(cfg: Config) -> None:
    clean = logistic_seeded(cfg.n, cfg.seed)
    print(f"{'noise':>8}" + "".join(f"{f'A_{L}':>8}" for L in cfg.L_values) + "  fitted class")
    for amp in cfg.amplitudes:
        x = add_observational_noise(clean, amp, cfg.seed + 100)
        counts = [pattern_distribution(x, L).allowed_count for L in cfg.L_values]
        fit = estimate_complexity_class(x, cfg.L_values)
        label = fit.best_class.describe() if fit.best_class else fit.best
        flag = " (low confidence)" if fit.low_confidence else ""
        print(f"{amp:>8g}" + "".join(f"{c:>8}" for c in counts) + f"  {label}{flag}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    main(Config(n=args.n, seed=args.seed))
