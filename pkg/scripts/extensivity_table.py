"""Entropy per component on uniform ensembles, matched and mismatched growth classes.

Prints S/N at a few system sizes for every (family, growth model) pair; the
matched pairs settle to a constant while the others drift to 0 or infinity.
"""

import argparse
from dataclasses import dataclass, field

from groupentropy import Algebraic, EntropySpec, Exponential, SuperExponential, extensivity_scan


@dataclass
class Config:
    alpha: float = 2.0
    sizes: list = field(default_factory=lambda: [10, 100, 1000, 10_000])


def main(cfg: Config) -> None:
    specs = {
        "BGS": EntropySpec("BGS"),
        "NonTraceI(a=2)": EntropySpec("NonTraceI", alpha=cfg.alpha, a=2.0),
        "NonTraceII(k=2)": EntropySpec("NonTraceII", alpha=cfg.alpha, k=2.0),
        "ZEntropy(g=1)": EntropySpec("ZEntropy", alpha=cfg.alpha, gamma=1.0),
    }
    models = {"N^2": Algebraic(2.0), "2^N": Exponential(2.0), "N^N": SuperExponential(1.0)}
    header = f"{'entropy':<18}{'W(N)':<6}" + "".join(f"{f'N={n}':>14}" for n in cfg.sizes)
    print(header)
    for sname, spec in specs.items():
        for mname, model in models.items():
            rows = extensivity_scan(spec, model, cfg.sizes)
            print(f"{sname:<18}{mname:<6}" + "".join(f"{r.S_over_N:>14.6g}" for r in rows))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=Config.alpha)
    main(Config(alpha=ap.parse_args().alpha))
