"""Command-line tests: exit codes, input formats and byte-identical golden outputs.

Set GROUPENTROPY_REGEN=1 to rewrite the golden files after an intended change.
"""

import io
import json
import math
import os
import shutil
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from groupentropy import EntropySpec, evaluate, uniform
from groupentropy.cli import parse_column, parse_distribution, parse_int_list, run

GOLDEN = Path(__file__).parent / "golden"
INPUTS = GOLDEN / "inputs"
REGEN = os.environ.get("GROUPENTROPY_REGEN") == "1"

# name -> argv; every file argument is relative to a copy of the inputs directory
CASES = {
    "entropy_bgs": ["entropy", "--spec", '{"kind": "BGS"}', "--dist", "uniform4.json"],
    "entropy_z_file_spec": ["entropy", "--spec", "zspec.json", "--dist", "p3.csv"],
    "entropy_limit": ["entropy", "--spec", '{"kind": "NonTraceI", "alpha": 1, "a": 2}', "--dist", "p3.csv",
                      "--limit"],
    "compose_algebraic": ["compose", "--spec", '{"kind": "NonTraceI", "alpha": 0.5, "a": 1}', "--x", "1",
                          "--y", "1"],
    "extensivity_z": ["extensivity", "--spec", "zspec.json", "--model",
                      '{"kind": "superexponential", "gamma": 1}', "--N-max", "20", "--csv", "out.csv"],
    "extensivity_bgs_diverges": ["extensivity", "--spec", '{"kind": "BGS"}', "--model",
                                 '{"kind": "superexponential", "gamma": 1}', "--N-max", "12", "--csv", "out.csv"],
    "maxent_tsallis": ["maxent", "--spec", '{"kind": "Tsallis", "q": 0.5}', "--constraint", "constraint.json",
                       "--fit-qexp"],
    "maxent_bgs_symmetric": ["maxent", "--spec", '{"kind": "BGS"}', "--levels", "0,1", "--mean", "0.5"],
    "delta_correlated": ["delta", "--spec", '{"kind": "BGS"}', "--joint", "joint.csv"],
    "delta_independent": ["delta", "--spec", '{"kind": "NonTraceI", "alpha": 0.5, "a": 2}', "--joint",
                          "joint_indep.csv"],
    "ordinal_white": ["ordinal", "--series", "white.txt", "--L", "3-5", "--alpha", "0,1,2", "--csv", "out.csv"],
    "ordinal_config": ["ordinal", "--series", "logistic.txt", "--config", "ordinal_cfg.json", "--alpha", "0,1",
                       "--extrapolate", "--csv", "out.csv"],
    "classify_logistic": ["classify", "--series", "logistic.txt", "--L", "3-6"],
    "gen_logistic": ["gen", "logistic", "--n", "50", "--seed", "3", "--out", "out.txt"],
    "gen_white_noisy": ["gen", "white", "--n", "50", "--seed", "9", "--noise", "0.1", "--out", "out.txt"],
}


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    for f in INPUTS.iterdir():
        shutil.copy(f, tmp_path / f.name)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, workdir):
    code, out, err = invoke(CASES[name])
    assert code == 0, err
    produced = {f"{name}.json": out.encode()}
    for extra in ("out.csv", "out.txt"):
        if (workdir / extra).exists():
            produced[f"{name}.{extra.split('.')[1]}"] = (workdir / extra).read_bytes()
    for fname, data in produced.items():
        path = GOLDEN / fname
        if REGEN:
            path.write_bytes(data)
        assert path.read_bytes() == data, f"{fname} differs from golden"
    # a second run is byte-identical as well
    assert invoke(CASES[name])[1] == out


def test_record_shape(workdir):
    code, out, _ = invoke(CASES["entropy_bgs"])
    rec = json.loads(out)
    assert set(rec) == {"command", "parameters", "input_digest", "outputs", "version"}
    assert rec["outputs"]["value"] == pytest.approx(math.log(4), rel=1e-11)
    assert len(rec["input_digest"]) == 16


def test_digest_tracks_input_bytes(workdir):
    d1 = json.loads(invoke(CASES["entropy_bgs"])[1])["input_digest"]
    Path("uniform4.json").write_text("[0.25,0.25,0.25,0.25]")
    d2 = json.loads(invoke(CASES["entropy_bgs"])[1])["input_digest"]
    assert d1 != d2


def test_z_entropy_matches_library(workdir):
    rec = json.loads(invoke(["entropy", "--spec", "zspec.json", "--dist", "uniform4.json"])[1])
    lib = evaluate(EntropySpec("ZEntropy", alpha=2.0, gamma=1.0), uniform(4))
    assert rec["outputs"]["value"] == float(f"{lib:.12g}")


def test_extensivity_csv(workdir):
    invoke(CASES["extensivity_z"])
    lines = Path("out.csv").read_text().splitlines()
    assert lines[0] == "N,S,S_over_N"
    for line in lines[1:]:
        N, S, ratio = map(float, line.split(","))
        assert ratio == pytest.approx((N - 1) / N, rel=1e-11)


def test_ordinal_monotone_zero_columns(workdir):
    Path("mono.txt").write_text("\n".join(str(i) for i in range(40)))
    code, out, _ = invoke(["ordinal", "--series", "mono.txt", "--L", "3-4", "--alpha", "0,2"])
    rec = json.loads(out)
    cols = rec["outputs"]["columns"]
    for row in rec["outputs"]["rows"]:
        for name in ("H_star", "ln_A_L", "R_0", "Z_0", "R_2", "Z_2"):
            assert row[cols.index(name)] == 0


def test_delta_product_is_zero(workdir):
    rec = json.loads(invoke(CASES["delta_independent"])[1])
    assert abs(rec["outputs"]["delta"]) < 1e-10


@pytest.mark.parametrize("argv, expected", [
    (["entropy", "--spec", '{"kind": "Renyi", "alpha": 1}', "--dist", "p3.csv"], 3),
    (["entropy", "--spec", '{"kind": ', "--dist", "p3.csv"], 2),
    (["entropy", "--spec", '{"kind": "BGS"}', "--dist", "missing.json"], 2),
    (["entropy", "--spec", '{"kind": "BGS"}'], 2),
    (["entropy", "--spec", '{"kind": "Tsallis", "q": -1}', "--dist", "p3.csv"], 3),
    (["frobnicate"], 2),
    ([], 2),
    (["compose", "--spec", '{"kind": "TraceIII", "gamma": 1}', "--x", "1", "--y", "1"], 3),
    (["maxent", "--spec", '{"kind": "BGS"}', "--levels", "0,1", "--mean", "2"], 3),
    (["maxent", "--spec", '{"kind": "NonTraceI", "alpha": 0.5, "a": 2}', "--levels", "0,1,2,5", "--mean", "1.5",
      "--max-iter", "1"], 4),
    (["ordinal", "--series", "p3.csv", "--L", "5"], 3),
    (["ordinal", "--series", "white.txt", "--L", "12"], 3),
    (["ordinal", "--series", "joint.csv"], 2),
    (["delta", "--spec", '{"kind": "BGS"}', "--joint", "constraint.json"], 2),
    (["gen", "logistic", "--x0", "0.5", "--transient", "3", "--out", "o.txt"], 3),
    (["classify", "--series", "white.txt", "--config", "nope.json"], 2),
])
def test_exit_codes(workdir, argv, expected):
    code, out, err = invoke(argv)
    assert code == expected, err
    assert err.startswith("error:")


def test_limit_flag_substitutes_bgs(workdir):
    rec = json.loads(invoke(["entropy", "--spec", '{"kind": "Renyi", "alpha": 1}', "--dist", "p3.csv",
                             "--limit"])[1])
    bgs = -(0.5 * math.log(0.5) + 0.3 * math.log(0.3) + 0.2 * math.log(0.2))
    assert rec["outputs"]["value"] == pytest.approx(bgs, rel=1e-11)


def test_config_precedence(workdir):
    Path("cfg.json").write_text('{"L": "3-4", "alpha": "0", "max-L": 6}')
    rec = json.loads(invoke(["ordinal", "--series", "white.txt", "--config", "cfg.json", "--L", "3-5"])[1])
    assert rec["parameters"]["L"] == [3, 4, 5]
    assert rec["parameters"]["alpha"] == [0.0]
    assert rec["parameters"]["max_L"] == 6
    Path("bad.json").write_text('{"colour": 1}')
    assert invoke(["ordinal", "--series", "white.txt", "--config", "bad.json"])[0] == 2


def test_gen_stdout_keeps_series_clean(capsys):
    code = run(["gen", "white", "--n", "3", "--seed", "1"])
    captured = capsys.readouterr()
    assert code == 0
    assert len(captured.out.splitlines()) == 3
    assert json.loads(captured.err)["command"] == "gen"


def test_parallel_cli_identical(workdir, monkeypatch):
    argv = ["ordinal", "--series", "white.txt", "--L", "3-5"]
    base = invoke(argv)[1]
    monkeypatch.setenv("GROUPENTROPY_THREADS", "4")
    assert invoke(argv)[1] == base
    assert invoke(argv + ["--workers", "3"])[1] == base


def test_parsers():
    assert parse_column("1\n2\n\n3\n", "s").tolist() == [1.0, 2.0, 3.0]
    assert parse_column("x\n1\n2\n", "s").tolist() == [1.0, 2.0]
    assert parse_distribution("[0.5, 0.5]").tolist() == [0.5, 0.5]
    assert parse_int_list("3-5", "L") == [3, 4, 5]
    assert parse_int_list("3,7", "L") == [3, 7]


@settings(max_examples=60)
@given(st.text(max_size=60))
def test_malformed_distribution_never_crashes(tmp_path_factory, text):
    d = tmp_path_factory.mktemp("fuzz")
    path = d / "dist.txt"
    path.write_text(text, encoding="utf-8")
    code, _, _ = invoke(["entropy", "--spec", '{"kind": "BGS"}', "--dist", str(path)])
    assert code in (0, 2, 3)


@settings(max_examples=60)
@given(st.text(max_size=40))
def test_malformed_spec_never_crashes(text):
    code, _, _ = invoke(["compose", "--spec", text, "--x", "1", "--y", "2"])
    assert code in (0, 2, 3)


json_values = st.recursive(
    st.none() | st.booleans() | st.floats(allow_nan=False, allow_infinity=False) | st.text(max_size=5),
    lambda inner: st.lists(inner, max_size=3) | st.dictionaries(st.text(max_size=5), inner, max_size=3),
    max_leaves=6,
)


@settings(max_examples=100)
@given(kind=st.sampled_from(["BGS", "Tsallis", "NonTraceI", "ZEntropy", "TraceIII", 7]),
       extra=st.dictionaries(st.sampled_from(["alpha", "q", "a", "k", "gamma", "lambda"]), json_values, max_size=3))
def test_structured_spec_never_crashes(kind, extra):
    spec = json.dumps({"kind": kind, **extra})
    code, _, _ = invoke(["compose", "--spec", spec, "--x", "0.5", "--y", "0.25"])
    assert code in (0, 2, 3)
