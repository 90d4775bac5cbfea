"""Batch command-line interface.

Every subcommand prints one JSON run record on stdout::

    {"command", "parameters", "input_digest", "outputs", "version"}

Per-N and per-L tables are also written as CSV when ``--csv`` is given.
Exit codes: 0 success, 2 input or parse error, 3 domain or precondition
error, 4 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .complexity_delta import JointSystem, delta_terms
from .entropies import EntropySpec, evaluate, evaluate_limit, group_law
from .errors import InputFormatError
from .maxent import EnergyConstraint, MaxEntOptions, maximize, verify_qexponential_form
from .ordinal import (
    DEFAULT_MAX_L, MAX_L, estimate_complexity_class, extrapolate_rate, group_rates,
    parse_class, pattern_distribution, permutation_entropy, renyi_of_patterns,
)
from .prob_core import Distribution
from .process_gen import add_observational_noise, logistic_map, logistic_seeded, white_noise
from .state_space import StateSpaceModel, extensivity_scan, has_converged

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_NONCONVERGED = 0, 2, 3, 4
DIGITS = 12


class _Usage(Exception):
    """argparse failure surfaced as an exception instead of ``SystemExit``."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


# ---------------------------------------------------------------- formatting

def fmt(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def _round(obj):
    """Round floats to 12 significant digits; non-finite values become strings."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return float(fmt(x))
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_round(v) for v in obj]
    return obj


def dump_record(record: dict) -> str:
    return json.dumps(_round(record), sort_keys=True, separators=(",", ":")) + "\n"


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    Path(path).write_bytes(buf.getvalue().encode("utf-8"))


# ---------------------------------------------------------------- inputs

class _Inputs:
    """Collects the bytes of every input file for the run digest."""

    def __init__(self):
        self._h = hashlib.blake2b(digest_size=8)
        self.used = False

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None
        self._h.update(len(data).to_bytes(8, "little"))
        self._h.update(data)
        self.used = True
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            raise InputFormatError(f"{path} is not UTF-8 text") from None

    @property
    def digest(self) -> str | None:
        return self._h.hexdigest() if self.used else None


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{what}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _json_arg(value, inputs: _Inputs, what: str):
    """Inline JSON text, an already parsed object (from --config), or a file path."""
    if isinstance(value, (dict, list)):
        return value
    text = str(value).strip()
    if text[:1] in "{[":
        return _load_json(text, what)
    return _load_json(inputs.read(text), what)


def _float(token: str, where: str) -> float:
    try:
        x = float(token)
    except ValueError:
        raise InputFormatError(f"{where}: {token!r} is not a number") from None
    if not math.isfinite(x):
        raise InputFormatError(f"{where}: non-finite value {token!r}")
    return x


def _csv_rows(text: str, what: str) -> list[list[str]]:
    try:
        return [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    except csv.Error as exc:
        raise InputFormatError(f"{what}: {exc}") from None


def parse_column(text: str, what: str) -> np.ndarray:
    """Newline-delimited floats or a single-column CSV, optional header line."""
    rows = _csv_rows(text, what)
    if not rows:
        raise InputFormatError(f"{what}: no values")
    if any(len(r) != 1 for r in rows):
        raise InputFormatError(f"{what}: expected a single column")
    start = 0
    try:
        float(rows[0][0])
    except ValueError:
        start = 1
    return np.array([_float(r[0].strip(), f"{what} line {i + 1}") for i, r in enumerate(rows) if i >= start])


def parse_distribution(text: str, what: str = "distribution") -> np.ndarray:
    stripped = text.strip()
    if stripped.startswith("["):
        arr = _load_json(stripped, what)
        if not isinstance(arr, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                                                for v in arr):
            raise InputFormatError(f"{what}: expected a JSON array of numbers")
        return np.array(arr, dtype=float)
    return parse_column(text, what)


def parse_matrix(text: str, what: str = "joint") -> np.ndarray:
    rows = _csv_rows(text, what)
    if not rows:
        raise InputFormatError(f"{what}: empty matrix")
    if len({len(r) for r in rows}) != 1:
        raise InputFormatError(f"{what}: rows have different lengths")
    return np.array([[_float(c.strip(), f"{what} row {i + 1}") for c in r] for i, r in enumerate(rows)])


def parse_int_list(text, what: str) -> list[int]:
    """``3-7``, ``3:7`` or ``3,4,5`` (also accepts a JSON list from config)."""
    if isinstance(text, list):
        return [int(v) for v in text]
    text = str(text).strip()
    try:
        for sep in ("-", ":"):
            if sep in text:
                lo, hi = text.split(sep)
                return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputFormatError(f"{what}: cannot parse {text!r}") from None


def parse_float_list(text, what: str) -> list[float]:
    if isinstance(text, list):
        return [float(v) for v in text]
    return [_float(v.strip(), what) for v in str(text).split(",") if v.strip()]


def _spec(args, inputs: _Inputs) -> tuple[dict, EntropySpec | None]:
    data = _json_arg(args.spec, inputs, "spec")
    if not isinstance(data, dict):
        raise InputFormatError("spec: expected a JSON object")
    limit = getattr(args, "limit", False)
    at_limit = data.get("alpha") == 1 or data.get("q") == 1
    if limit and at_limit:
        return data, None
    return data, EntropySpec.from_json(data)


# ---------------------------------------------------------------- commands

def cmd_entropy(args, inputs):
    data, spec = _spec(args, inputs)
    p = Distribution(parse_distribution(inputs.read(args.dist)), renormalize=args.renormalize)
    value = evaluate_limit(data, p) if spec is None else evaluate(spec, p)
    params = {"spec": data if spec is None else spec.to_json(), "limit": spec is None,
              "dist": args.dist, "renormalize": args.renormalize}
    return params, {"value": value, "W": p.W}, EXIT_OK


def cmd_compose(args, inputs):
    _, spec = _spec(args, inputs)
    law = group_law(spec)
    value = law.compose(args.x, args.y)
    return {"spec": spec.to_json(), "x": args.x, "y": args.y}, {"value": value, "law": law.name}, EXIT_OK


def cmd_extensivity(args, inputs):
    _, spec = _spec(args, inputs)
    model = StateSpaceModel.from_json(_json_arg(args.model, inputs, "model"))
    if args.N_max < 1:
        raise ValueError(f"N_max must be >= 1, got {args.N_max}")
    rows = extensivity_scan(spec, model, list(range(1, args.N_max + 1)))
    if args.csv:
        write_csv(args.csv, ["N", "S", "S_over_N"], [(r.N, r.S, r.S_over_N) for r in rows])
    out = {"rows": [[r.N, r.S, r.S_over_N] for r in rows], "columns": ["N", "S", "S_over_N"]}
    if args.N_max >= 10:
        out["converged"] = has_converged(rows)
    params = {"spec": spec.to_json(), "model": model.to_json(), "N_max": args.N_max}
    return params, out, EXIT_OK


def cmd_maxent(args, inputs):
    _, spec = _spec(args, inputs)
    if args.constraint is not None:
        c = _json_arg(args.constraint, inputs, "constraint")
        if not isinstance(c, dict) or "levels" not in c or "mean" not in c:
            raise InputFormatError("constraint: expected {\"levels\": [...], \"mean\": x}")
        levels, mean = c["levels"], c["mean"]
    else:
        if args.levels is None or args.mean is None:
            raise InputFormatError("maxent needs --constraint or both --levels and --mean")
        levels, mean = parse_float_list(args.levels, "levels"), args.mean
    try:
        levels, mean = [float(e) for e in levels], float(mean)
    except (TypeError, ValueError):
        raise InputFormatError("constraint: levels and mean must be numbers") from None
    options = MaxEntOptions(tol=args.tol, max_iter=args.max_iter)
    res = maximize(spec, EnergyConstraint(tuple(levels), mean), options)
    out = res.to_json()
    if args.fit_qexp:
        fit = verify_qexponential_form(res, spec)
        out["qexp_fit"] = {"applicable": fit.applicable, "is_qexp": fit.is_qexp, "c": fit.c,
                           "beta": fit.beta, "q": fit.q, "residual": fit.residual, "reason": fit.reason}
    params = {"spec": spec.to_json(), "levels": levels, "mean": mean, "tol": args.tol,
              "max_iter": args.max_iter}
    return params, out, EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_delta(args, inputs):
    _, spec = _spec(args, inputs)
    sys_ = JointSystem.from_matrix(parse_matrix(inputs.read(args.joint)), renormalize=args.renormalize)
    t = delta_terms(spec, sys_)
    out = {"delta": t.delta, "S_A": t.S_A, "S_B": t.S_B, "S_AB": t.S_AB, "composed": t.composed,
           "shape": [sys_.W_A, sys_.W_B]}
    return {"spec": spec.to_json(), "joint": args.joint, "renormalize": args.renormalize}, out, EXIT_OK


def _read_series(args, inputs):
    return parse_column(inputs.read(args.series), "series")


def cmd_ordinal(args, inputs):
    x = _read_series(args, inputs)
    Ls = parse_int_list(args.L, "L")
    alphas = parse_float_list(args.alpha, "alpha")
    if not Ls or not alphas:
        raise InputFormatError("need at least one L and one alpha")
    cls = parse_class(args.cls)
    max_L = args.max_L
    if max_L > MAX_L:
        raise ValueError(f"--max-L cannot exceed {MAX_L}")
    pds = [pattern_distribution(x, L, stride=args.stride, workers=args.workers, max_L=max_L) for L in Ls]
    header = ["L", "windows", "A_L", "H_star", "ln_A_L", "ln_L_factorial"]
    for a in alphas:
        header += [f"R_{a:g}", f"Z_{a:g}", f"z_{a:g}"]
    rows = []
    for pd in pds:
        row = [pd.L, pd.total_windows, pd.allowed_count, permutation_entropy(pd),
               math.log(pd.allowed_count), math.lgamma(pd.L + 1.0)]
        for a in alphas:
            R = renyi_of_patterns(pd, a)
            Z = cls.g_inv(R) - cls.g_inv(0.0)
            row += [R, Z, cls.g_inv(R) / pd.L]
        rows.append(row)
    if args.csv:
        write_csv(args.csv, header, rows)
    if args.histograms:
        folder = Path(args.histograms)
        folder.mkdir(parents=True, exist_ok=True)
        for pd in pds:
            (folder / f"L{pd.L}.json").write_text(
                json.dumps(pd.to_json(), sort_keys=True, separators=(",", ":")) + "\n")
    out = {"columns": header, "rows": rows, "class": cls.describe()}
    if args.extrapolate:
        if len(pds) < 2:
            raise ValueError("extrapolation needs at least two pattern lengths")
        out["extrapolation"] = {f"{a:g}": extrapolate_rate(group_rates(pds, cls, a)) for a in alphas}
    params = {"series": args.series, "L": Ls, "alpha": alphas, "class": cls.describe(),
              "stride": args.stride, "max_L": max_L, "extrapolate": args.extrapolate}
    return params, out, EXIT_OK


def cmd_classify(args, inputs):
    x = _read_series(args, inputs)
    Ls = parse_int_list(args.L, "L")
    fit = estimate_complexity_class(x, Ls, max_L=args.max_L)
    out = {"best": fit.best, "class": None if fit.best_class is None else fit.best_class.describe(),
           "residuals": fit.residuals, "coefficients": fit.coefficients,
           "low_confidence": fit.low_confidence, "reason": fit.reason, "ln_A_L": fit.log_counts}
    return {"series": args.series, "L": Ls, "max_L": args.max_L}, out, EXIT_OK


def cmd_gen(args, inputs):
    if args.process == "white":
        x = white_noise(args.n, args.seed)
    elif args.x0 is not None:
        x = logistic_map(args.n, args.x0, r=args.r, transient=args.transient)
    else:
        x = logistic_seeded(args.n, args.seed, r=args.r, transient=args.transient)
    if args.noise:
        x = add_observational_noise(x, args.noise, args.seed + 1)
    text = "".join(f"{v:.{DIGITS}g}\n" for v in x)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_bytes(text.encode("utf-8"))
    params = {"process": args.process, "n": args.n, "seed": args.seed, "noise": args.noise}
    if args.process == "logistic":
        params.update(r=args.r, transient=args.transient, x0=args.x0)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).hexdigest()
    return params, {"n": int(x.size), "output": args.out, "output_digest": digest}, EXIT_OK


# ---------------------------------------------------------------- parser

def _add_spec(p, limit=False):
    p.add_argument("--spec", help="entropy spec as inline JSON or a JSON file path")
    if limit:
        p.add_argument("--limit", action="store_true",
                       help="accept alpha = 1 or q = 1 and substitute the BGS limit")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="groupentropy", description="Group entropies and ordinal analysis.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("entropy", help="evaluate an entropy on a distribution file")
    _add_spec(p, limit=True)
    p.add_argument("--dist", help="JSON array or single-column CSV of probabilities")
    p.add_argument("--renormalize", action="store_true")
    p.set_defaults(func=cmd_entropy, required=("spec", "dist"))

    p = sub.add_parser("compose", help="compose two entropy values with the family's group law")
    _add_spec(p)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.set_defaults(func=cmd_compose, required=("spec", "x", "y"))

    p = sub.add_parser("extensivity", help="S/N on the uniform ensemble of a growth model")
    _add_spec(p)
    p.add_argument("--model", help="model JSON, e.g. {\"kind\": \"exponential\", \"k\": 2}")
    p.add_argument("--N-max", dest="N_max", type=int, default=100)
    p.add_argument("--csv", help="write N,S,S_over_N rows here")
    p.set_defaults(func=cmd_extensivity, required=("spec", "model"))

    p = sub.add_parser("maxent", help="maximize an entropy under normalization and a mean energy")
    _add_spec(p)
    p.add_argument("--constraint", help="JSON {\"levels\": [...], \"mean\": x} inline or as a file")
    p.add_argument("--levels", help="comma-separated energy levels")
    p.add_argument("--mean", type=float)
    p.add_argument("--tol", type=float, default=MaxEntOptions.tol)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=MaxEntOptions.max_iter)
    p.add_argument("--fit-qexp", dest="fit_qexp", action="store_true",
                   help="also fit the q-exponential form to the maximizer")
    p.set_defaults(func=cmd_maxent, required=("spec",))

    p = sub.add_parser("delta", help="interdependence measure of a joint distribution")
    _add_spec(p)
    p.add_argument("--joint", help="CSV matrix with W_A rows and W_B columns")
    p.add_argument("--renormalize", action="store_true")
    p.set_defaults(func=cmd_delta, required=("spec", "joint"))

    p = sub.add_parser("ordinal", help="ordinal-pattern entropies of a series")
    p.add_argument("--series", help="newline-delimited floats or single-column CSV")
    p.add_argument("--L", default="3-6", help="pattern lengths, e.g. 3-7 or 3,5,7")
    p.add_argument("--alpha", default="0,1,2", help="comma-separated Renyi orders")
    p.add_argument("--class", dest="cls", default="factorial",
                   help="exponential[:c], factorial, scaled_factorial:c or iterated_log:k")
    p.add_argument("--max-L", dest="max_L", type=int, default=DEFAULT_MAX_L)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--workers", type=int, default=None,
                   help="counting threads (default from GROUPENTROPY_THREADS)")
    p.add_argument("--csv", help="write the per-L table here")
    p.add_argument("--histograms", help="directory for per-L pattern histograms as JSON")
    p.add_argument("--extrapolate", action="store_true",
                   help="fit z(L) = z_inf + b/L to each rate curve")
    p.set_defaults(func=cmd_ordinal, required=("series",))

    p = sub.add_parser("classify", help="estimate the complexity class from pattern counts")
    p.add_argument("--series")
    p.add_argument("--L", default="3-7")
    p.add_argument("--max-L", dest="max_L", type=int, default=DEFAULT_MAX_L)
    p.set_defaults(func=cmd_classify, required=("series",))

    p = sub.add_parser("gen", help="generate a synthetic series")
    p.add_argument("process", choices=("white", "logistic"))
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=float, default=4.0)
    p.add_argument("--x0", type=float, default=None, help="logistic start (default drawn from the seed)")
    p.add_argument("--transient", type=int, default=1000)
    p.add_argument("--noise", type=float, default=0.0, help="uniform observational noise amplitude")
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.set_defaults(func=cmd_gen, required=())

    for p in sub.choices.values():
        p.add_argument("--config", help="JSON file of option defaults (flags take precedence)")
    return parser


def _apply_config(parser, argv):
    """Re-parse with defaults taken from ``--config``: flags > config > defaults."""
    args = parser.parse_args(argv)
    if args.command is None:
        raise _Usage("groupentropy: a subcommand is required")
    if not args.config:
        return args, None
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputFormatError(f"cannot read config {args.config}: {exc}") from None
    cfg = _load_json(text, "config")
    if not isinstance(cfg, dict):
        raise InputFormatError("config: expected a JSON object")
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    # keys may be flag names ("max-L", "class") or destinations ("max_L", "cls")
    names = {}
    for action in subparser._actions:
        if action.dest in ("help", "config"):
            continue
        names[action.dest] = action.dest
        for opt in action.option_strings:
            names[opt.lstrip("-").replace("-", "_")] = action.dest
    unknown = sorted(k for k in cfg if k.replace("-", "_") not in names)
    if unknown:
        raise InputFormatError(f"config: unknown options for {args.command}: {unknown}")
    subparser.set_defaults(**{names[k.replace("-", "_")]: v for k, v in cfg.items()})
    return parser.parse_args(argv), text


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, cfg_text = _apply_config(parser, argv)
        missing = [name for name in args.required if getattr(args, name, None) is None]
        if missing:
            raise _Usage(f"groupentropy {args.command}: missing " + ", ".join("--" + m for m in missing))
        inputs = _Inputs()
        params, outputs, code = args.func(args, inputs)
    except (_Usage, InputFormatError, TypeError) as exc:
        # TypeError: a JSON value of the wrong type, e.g. a list where a number belongs
        stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (ValueError, ArithmeticError) as exc:
        # domain and precondition errors (InvalidArgument, DomainError, ...) derive from ValueError
        stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except np.linalg.LinAlgError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_NONCONVERGED
    record = {"command": args.command, "parameters": params, "input_digest": inputs.digest,
              "outputs": outputs, "version": __version__}
    text = dump_record(record)
    # keep stdout clean when gen streams the series there
    (stderr if args.command == "gen" and args.out == "-" else stdout).write(text)
    if code == EXIT_NONCONVERGED:
        stderr.write("error: solver did not converge\n")
    return code


def main() -> None:
    sys.exit(run())
