import csv
import io
import json

import pytest

from macloc import __version__, macdonald
from macloc.kernels import PolyFrac
from macloc.limitlab.cli import main
from macloc.limitlab.experiments import ConfigError, ExperimentConfig, growth_check, run
from macloc.limitlab.parse import ParseError, parse_E, parse_kernel, parse_poly, parse_symfn, parse_Z
from macloc.limitlab.selftest import run_selftest
from macloc.symfun import SymFn


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_poly_examples():
    one_minus_z = parse_poly("1 - z")
    assert one_minus_z.terms == {(0,): 1, (1,): -1}
    s = parse_poly("(1-t)*(1+q+q^2)")
    assert s.ctx.names == ("q", "t")
    assert s.terms == {(0, 0): 1, (1, 0): 1, (2, 0): 1, (0, 1): -1, (1, 1): -1, (2, 1): -1}
    with pytest.raises(ParseError, match="division"):
        parse_poly("1/z")


@pytest.mark.parametrize("text", ["1 - z", "(1-t)*(1+q+q^2)", "z^-3 + 2*z", "-(1+u)^3", "0"])
def test_parse_poly_round_trip(text):
    s = parse_poly(text)
    assert parse_poly(str(s), s.ctx.names) == s


@pytest.mark.parametrize("bad,where", [("1 +", 3), ("2*/z", 2), ("x + 1", 0), ("(1-z", 4), ("z^q", 2)])
def test_parse_errors_carry_positions(bad, where):
    with pytest.raises(ParseError) as info:
        parse_poly(bad)
    assert info.value.pos == where


def test_parse_symfn():
    assert parse_symfn("e[1]*e[1] - 2*m[1,1]") == SymFn.m(2)
    assert parse_symfn("P[2,1]").basis == "P"
    assert parse_symfn("3") == SymFn.one("m", 3)
    assert parse_symfn("h[2]^2") == SymFn.h(2, 2)
    with pytest.raises(ParseError):
        parse_symfn("x[1]")


def test_parse_kernel_Z_E():
    assert parse_kernel("hall") == ("hall", None)
    assert parse_kernel("poly: 1-z")[1] == parse_poly("1-z")
    with pytest.raises(ValueError):
        parse_kernel("weird")
    assert parse_Z("k=2") == {0: 1, 1: 1, 2: 1}
    assert parse_Z("1+z^3") == {0: 1, 3: 1}
    assert parse_E("A=0;B=geom;C=-z") == {"A": None, "B": ("geom", 1), "C": {1: -1}}
    with pytest.raises(ValueError):
        parse_E("D=1")


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig("nope").validate()
    with pytest.raises(ConfigError):
        ExperimentConfig("theorem1", m_from=3, m_to=1).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig("norm-ns", n=1, mu="1,1").validate()
    with pytest.raises(ConfigError):
        ExperimentConfig("theorem1", zdeg=-1).validate()


def test_reports_embed_config_caps_version():
    r = run(ExperimentConfig("theorem1", n=1, kernel="poly:1-z", m_from=0, m_to=2, zdeg=6))
    assert r["version"] == __version__
    assert r["config"]["zdeg"] == 6 and r["caps"]["zdeg"] == 6
    assert "window cap" in r["note"]


def test_theorem1_telescoping_report():
    r = run(ExperimentConfig("theorem1", n=1, kernel="poly:1-z", m_from=0, m_to=4))
    assert all(row["saturated"] and row["display"] == ">=16" for row in r["rows"])
    assert r["verdict"] == "pass"


def test_theorem1_rejects_hall_kernel(capsys):
    code, _, err = cli(capsys, "theorem1", "--n", "2", "--kernel", "poly:1")
    assert code == 2 and "dim_0(E) = 1" in err


def test_byte_identical_reports(capsys, tmp_path):
    args = ["theorem1", "--n", "2", "--kernel", "poly: 1-z-z^2", "--m-from", "0", "--m-to", "3", "--zdeg", "10"]
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert cli(capsys, *args, "--out", str(path))[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["rows"][0]["m"] == 0


def test_parallel_cells_match_serial():
    base = dict(n=2, kernel="poly: 1-z-z^2", m_from=0, m_to=3, zdeg=10)
    assert run(ExperimentConfig("theorem1", **base)) == run(ExperimentConfig("theorem1", jobs=2, **base))


def test_timing_is_opt_in():
    r = run(ExperimentConfig("theorem1", n=1, m_from=0, m_to=1, timing=True))
    assert all("seconds" in row for row in r["rows"])
    r = run(ExperimentConfig("theorem1", n=1, m_from=0, m_to=1))
    assert not any("seconds" in row for row in r["rows"])


def test_csv_projection(capsys):
    code, out, _ = cli(capsys, "theorem1", "--n", "1", "--m-to", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["m"] for r in rows] == ["0", "1", "2"]


def test_norm_ns_cli(capsys):
    code, out, _ = cli(capsys, "norm-ns", "--n", "1", "--mu", "2", "--qtdeg", "4")
    rep = json.loads(out)
    assert code == 0 and rep["equal"] and rep["rhs"]["terms"] == [[[0, 0], "1"]]


def test_norm_ns_warns_on_small_cap():
    r = run(ExperimentConfig("norm-ns", n=2, mu="1", qtdeg=2))
    assert r["warnings"]


def test_norm_nsa_report():
    r = run(ExperimentConfig("norm-nsa", n=2, mu="1,0", qtdeg=8, m_from=4, m_to=8, m_step=2))
    degs = [row["agreement_degree"] for row in r["rows"]]
    assert degs == sorted(degs) and degs[-1] >= 6
    assert "stabilization_degree" in r["rows"][1]


def test_chi_gap_examples():
    r = run(ExperimentConfig("chi-gap", n=1, Z="1+z", m_from=0, m_to=3))
    assert r["verdict"] == "pass" and all(row["gap_is_zero"] for row in r["rows"])
    r = run(ExperimentConfig("chi", n=1, Z="1+z", m=-2, mode="gap"))
    assert r["gap"]["terms"] == [[[-1], "-1"]] and r["leading"] == {"0": -1}


def test_chi_gap_precondition_exit_code(capsys):
    code, out, _ = cli(capsys, "chi-gap", "--n", "2", "--Z", "k=2", "--E", "C=1+z")
    assert code == 2 and json.loads(out)["conditions"]["c"]["pass"] is False


def test_growth_rules():
    ok, per = growth_check({1: {0: 3}, 2: {0: 6}, 3: {0: None}}, 3)
    assert ok and per["0"]["increments"] == [3, "vanished"]
    ok, _ = growth_check({1: {0: None}, 2: {0: 5}}, 3)
    assert not ok
    ok, _ = growth_check({1: {0: 3}, 2: {0: 5}}, 3)
    assert not ok
    _, per = growth_check({1: {0: 2}, 2: {0: 5}, 3: {0: 8}}, 3)
    assert per["0"]["fit"] == {"slope": "3", "intercept": "-1"}


def test_macdonald_cli(capsys):
    code, out, _ = cli(capsys, "macdonald", "P[2,1]", "--nvars", "3", "--exact")
    assert code == 0
    assert out.splitlines()[-1] == "1 * m[2, 1]"
    code, out, _ = cli(capsys, "macdonald", "P[2,1]", "--nvars", "2")
    assert out.strip() == "1 * m[2, 1]"


def test_selftest_passes(capsys):
    assert cli(capsys, "selftest")[0] == 0


def test_selftest_small_cap_warns():
    r = run_selftest(zdeg=2)
    assert r["verdict"] == "pass" and r["warnings"]


def test_selftest_catches_corrupted_a_coeff(monkeypatch):
    good = macdonald.a_coeff
    monkeypatch.setattr(macdonald, "a_coeff", lambda mu: good(mu) * (1 + PolyFrac.var("q")))
    r = run_selftest(suites=["macdonald"])
    assert r["verdict"] == "fail"
    assert any("a_coeff expansion oracle" in f for f in r["suites"]["macdonald"]["failures"])
