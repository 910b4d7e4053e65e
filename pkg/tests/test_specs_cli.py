"""Spec-string parsing and the command-line front end."""

import hashlib
import json
import sys

import numpy as np
import pytest

from siftlab import cli, specs
from siftlab import __version__
from siftlab.errors import ResourceBudgetError
from siftlab.primesets import ALL_PRIMES, Complement, Explicit
from siftlab.sift import NO_SIEVE


# ------------------------------------------------------------------- specs

def test_parse_weight_names():
    assert specs.parse_weight("one").name == "one"
    assert specs.parse_weight("musq").name == "mu_sq"
    assert specs.parse_weight("zomega:2.5").params == (2.5,)
    assert specs.parse_weight("tauk:3").params == (3,)
    assert specs.parse_weight("r4").name == "r_over_4"
    assert specs.parse_weight("s2s").name == "sum2sq_indicator"
    assert specs.parse_weight("phioverN").name == "phi_over_n"
    assert specs.parse_weight("Noverphi").name == "n_over_phi"


def test_parse_weight_round_trip():
    for s in ("one", "musq", "zomega:2.5", "tauk:3", "r4", "s2s", "phioverN", "Noverphi"):
        assert specs.parse_weight(s).spec_string() == s


def test_parse_weight_warns_on_large_multiplicity_base():
    with pytest.warns(UserWarning):
        specs.parse_weight("zbigomega:2")


def test_parse_weight_errors():
    for bad in ("one:5", "zomega", "zomega:abc", "tauk:1.5", "nope", ""):
        with pytest.raises(ValueError):
            specs.parse_weight(bad)


def test_parse_primeset_kinds(t1e5):
    assert specs.parse_primeset("all") is ALL_PRIMES
    assert specs.parse_primeset("pmin:11").p0 == 11
    E = specs.parse_primeset("mod:4:1,3")
    assert E.modulus == 4 and set(E.residues) == {1, 3}
    K = specs.parse_primeset("kron:-4:+1")
    assert K.disc == -4 and K.sign == 1
    assert specs.parse_primeset("kron:5:-1").sign == -1
    I = specs.parse_primeset("interval:10:20")
    assert I.lo == 10 and I.hi == 20
    C = specs.parse_primeset("not:mod:4:1")
    assert isinstance(C, Complement)
    L = specs.parse_primeset("list:3,7,31")
    assert isinstance(L, Explicit) and L.members == frozenset({3, 7, 31})
    assert specs.parse_primeset("list:7").members == frozenset({7})


def test_parse_primeset_round_trip(t1e5):
    cases = [
        "all", "pmin:11", "mod:4:1", "mod:10:1,9", "kron:-4:+1", "kron:5:-1",
        "interval:3:9", "not:mod:3:1", "list:3,7,31",
    ]
    for s in cases:
        E = specs.parse_primeset(s)
        assert E.spec_string() == s
        again = specs.parse_primeset(E.spec_string())
        arr = t1e5.primes[:100]
        assert np.array_equal(E.mask(arr), again.mask(arr))


def test_parse_primeset_from_file(tmp_path):
    path = tmp_path / "members.txt"
    path.write_text("3\n7\n")
    E = specs.parse_primeset(f"list:{path}")
    assert E.members == frozenset({3, 7})


def test_parse_primeset_errors():
    for bad in ("kron:5:2", "weird:1", "mod:4:x", "pmin:abc", "list:/no/such/file"):
        with pytest.raises(ValueError):
            specs.parse_primeset(bad)


def test_parse_set_spec_none_and_sp():
    ss = specs.parse_set_spec("none")
    assert ss.kind == "cond" and ss.cond is NO_SIEVE
    assert ss.spec_string() == "none"
    sp = specs.parse_set_spec("sp:2,-1")
    assert (sp.kind, sp.a, sp.b) == ("sp", 2, -1)
    assert sp.spec_string() == "sp:2,-1"


def test_parse_set_spec_qf():
    q = specs.parse_set_spec("qf:1,0,1")
    assert (q.kind, q.a, q.b, q.c, q.shift) == ("qf", 1, 0, 1, None)
    assert q.spec_string() == "qf:1,0,1"
    qs = specs.parse_set_spec("qf:1,0,1,shift=-1")
    assert qs.shift == -1
    assert qs.spec_string() == "qf:1,0,1,shift=-1"


def test_parse_set_spec_avoid():
    ss = specs.parse_set_spec("avoid:1/modp<=5", 100)
    assert ss.cond.support == (2, 3, 5)
    assert ss.spec_string() == "avoid:1/modp<=5"
    co = specs.parse_set_spec("avoid:1/modp<=10,coprime=6", 10**4)
    assert co.cond.support == (5, 7)
    with pytest.raises(ValueError):
        specs.parse_set_spec("avoid:1/modp<=5")  # needs x


def test_parse_set_spec_explicit_inline_and_file(tmp_path):
    ss = specs.parse_set_spec("explicit:3:1,2;5:2")
    assert ss.cond.support == (3, 5)
    assert ss.cond.residues_at(3) == (1, 2)
    assert ss.spec_string() == "explicit:3:1,2;5:2"
    path = tmp_path / "cond.txt"
    path.write_text("3:1,2\n5:2\n")
    sf = specs.parse_set_spec(f"explicit:{path}")
    assert sf.cond == ss.cond


def test_parse_set_spec_errors():
    for bad in ("avoid:1/xx", "sp:1", "qf:1,0", "mystery:1", "explicit:4:1"):
        with pytest.raises(ValueError):
            specs.parse_set_spec(bad, 100)


def test_set_spec_realize(t1e5):
    from siftlab.sift import exact_shifted_primes, sift

    ss = specs.parse_set_spec("explicit:2:1")
    assert np.array_equal(
        ss.realize(50, t1e5).bitmap, sift(50, ss.cond).bitmap
    )
    sp = specs.parse_set_spec("sp:1,1")
    assert np.array_equal(
        sp.realize(50, t1e5).bitmap, exact_shifted_primes(1, 1, 50, t1e5).bitmap
    )
    qs = specs.parse_set_spec("qf:1,0,1,shift=-1")
    got = qs.realize(50, t1e5)
    assert got.count > 0


# --------------------------------------------------------------------- cli

def _run(capsys, argv):
    code = cli.dispatch(argv)
    assert code == 0
    return capsys.readouterr().out


def test_cli_primes_golden(capsys):
    out = _run(capsys, ["primes", "--x", "1000"])
    assert out == (
        "x,pi,mertens,hr_constant\n"
        "1000,168,2.198080127175088,0.8665129205816644\n"
    )


def test_cli_hist_golden(capsys):
    out = _run(capsys, ["hist", "--x", "10"])
    lines = out.splitlines()
    assert lines[0] == "experiment,x,f,g,E,sieve,k,mass,bound,ratio"
    assert len(lines) == 4
    assert lines[1].startswith("hist,10,one,omega,all,none,0,1.0,")
    k, mass, bound, ratio = lines[2].split(",")[6:]
    assert (k, mass) == ("1", "7.0")
    assert float(mass) / float(bound) == pytest.approx(float(ratio), rel=1e-12)


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_cli_headers_all_subcommands(capsys):
    cases = {
        ("primes", "--x", "100"): "x,pi,mertens,hr_constant",
        ("hist", "--x", "10"): "experiment,x,f,g,E,sieve,k,mass,bound,ratio",
        ("hr-check", "--x", "10"): "experiment,x,f,g,E,sieve,k,mass,bound,ratio",
        ("mgf", "--x", "10", "--z", "1.0"): "x,f,g,E,sieve,z,value,bound,ratio",
        ("tails", "--x", "100", "--delta", "0.5"): (
            "x,f,g,E,sieve,delta,M,mass_low,mass_high,"
            "bound_low,bound_high,ratio_low,ratio_high"
        ),
        ("dev", "--x", "100", "--lambda", "0.4"): (
            "x,lambda,M,mass_low,mass_high,normalized,gauss_ref"
        ),
        ("table", "--n", "10"): "N,A,ford_ratio",
        ("table", "--n", "10", "--shift", "1"): "N,A,ford_ratio,s,A_shifted",
        ("table-sifted", "--x", "100"): (
            "x,f,sieve,value,R,M,regime,bound_le_half,ratio_le_half,"
            "bound_mid,ratio_mid"
        ),
        ("spd", "--a", "1", "--u", "1", "--v", "-1", "--x", "20", "--y", "3"): (
            "a,u,v,x,y,count,normalized,bound_ratio"
        ),
        ("lambda-image", "--u", "1", "--v", "0", "--x", "100"): (
            "u,v,x,count,pi,normalized"
        ),
        ("sp-dev", "--a", "1", "--b", "1", "--x", "100", "--lambda", "0.4"): (
            "x,lambda,M,mass_low,mass_high,normalized,gauss_ref"
        ),
        ("qf-dev", "--form", "1,0,1", "--e", "kron:-4:+1", "--x", "100",
         "--lambda", "0.4"): "x,lambda,M,mass_low,mass_high,normalized,gauss_ref",
        ("jointpoly", "--q", "1,1", "--x", "100", "--y", "97", "--k", "2"): (
            "x,y,polys,targets,count"
        ),
        ("apcount", "--x", "100", "--d", "4", "--a", "1", "--k", "2"): (
            "x,d,a,g,k,count"
        ),
        ("egps", "--x", "100", "--lambda", "1.0"): (
            "x,f,lambda,mass,total,normalized,excluded,unfactored"
        ),
        ("sigma-div", "--x", "100", "--p", "3"): "x,p,f,eps,value,bound,ratio",
        ("s-div", "--x", "100", "--y", "20", "--z", "10", "--d", "5"): (
            "x,y,z,d,f,value"
        ),
        ("omega-gcd", "--x", "100"): "x,f,value,bound,ratio",
        ("constants", "--x", "100"): "name,value,note",
    }
    for argv, header in cases.items():
        out = _run(capsys, list(argv))
        assert out.splitlines()[0] == header, argv


def test_cli_table_values(capsys):
    out = _run(capsys, ["table", "--n", "50"])
    assert out.splitlines()[1].split(",")[:2] == ["50", "800"]
    out2 = _run(capsys, ["table", "--n", "30", "--shift", "1"])
    row = out2.splitlines()[1].split(",")
    assert row[0] == "30" and int(row[4]) <= int(row[1])


def test_cli_jointpoly_value(capsys):
    out = _run(capsys, ["jointpoly", "--q", "1,1", "--x", "100", "--y", "97", "--k", "2"])
    assert out.splitlines()[1] == '100,97,"1,1",2,16'


def test_cli_lambda_image_value(capsys):
    out = _run(capsys, ["lambda-image", "--u", "1", "--v", "0", "--x", "100"])
    assert out.splitlines()[1] == "1,0,100,1,25,0.04"


def test_cli_egps_rows(capsys):
    out = _run(capsys, ["egps", "--x", "100", "--lambda", "1.0"])
    lines = out.splitlines()
    assert len(lines) == 8  # requested threshold plus six grid rows
    first = lines[1].split(",")
    assert first[3] == "31.0" and first[4] == "100.0"


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_cli_dev_thread_invariant(capsys):
    a = _run(capsys, ["dev", "--x", "5000", "--lambda", "2.0", "--threads", "1"])
    b = _run(capsys, ["dev", "--x", "5000", "--lambda", "2.0", "--threads", "8"])
    assert a == b


def test_cli_out_matches_stdout(capsys, tmp_path):
    stdout_text = _run(capsys, ["primes", "--x", "1000"])
    path = tmp_path / "t.csv"
    _run(capsys, ["primes", "--x", "1000", "--out", str(path)])
    assert path.read_text() == stdout_text


def test_cli_manifest(capsys, tmp_path):
    out_path = tmp_path / "t.csv"
    man_path = tmp_path / "m.json"
    _run(capsys, [
        "primes", "--x", "100", "--out", str(out_path), "--manifest", str(man_path),
    ])
    man = json.loads(man_path.read_text())
    assert man["subcommand"] == "primes"
    assert man["params"]["x"] == 100
    assert man["version"] == __version__
    assert man["threads"] == 1
    assert man["rows"] == 1
    digest = hashlib.sha256(out_path.read_bytes()).hexdigest()
    assert man["output_sha256"] == digest


def test_cli_jsonl(capsys):
    out = _run(capsys, ["primes", "--x", "1000", "--format", "jsonl"])
    lines = out.splitlines()
    assert len(lines) == 1
    rec = json.loads(lines[0])
    assert rec["x"] == 1000 and rec["pi"] == 168
    assert rec["hr_constant"] == pytest.approx(0.8665129205816644)


def test_cli_budget_sec(tmp_path):
    out_path = tmp_path / "never.csv"
    with pytest.raises(ResourceBudgetError):
        cli.dispatch(["primes", "--x", "1000", "--budget-sec", "0.0",
                      "--out", str(out_path)])
    assert not out_path.exists()


def test_cli_budget_mb():
    with pytest.raises(ResourceBudgetError):
        cli.dispatch(["table", "--n", "100000", "--budget-mb", "1"])


def test_cli_exit_codes(capsys, monkeypatch):
    monkeypatch.setattr(sys, "argv", ["siftlab", "mgf", "--x", "100", "--z", "0"])
    with pytest.raises(SystemExit) as ei:
        cli.main()
    assert ei.value.code == 2
    assert "error:" in capsys.readouterr().err

    monkeypatch.setattr(sys, "argv", ["siftlab", "primes", "--x", "1000",
                                      "--budget-sec", "0.0"])
    with pytest.raises(SystemExit) as ei:
        cli.main()
    assert ei.value.code == 3
    assert "budget" in capsys.readouterr().err

    def boom(header, rows, fmt):
        raise OverflowError("forced")

    monkeypatch.setattr(cli, "render", boom)
    monkeypatch.setattr(sys, "argv", ["siftlab", "primes", "--x", "100"])
    with pytest.raises(SystemExit) as ei:
        cli.main()
    assert ei.value.code == 4
    assert "overflow" in capsys.readouterr().err


def test_cli_unknown_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as ei:
        cli.build_parser().parse_args(["primes", "--nope"])
    assert ei.value.code == 2


def test_cli_version_flag(capsys):
    with pytest.raises(SystemExit) as ei:
        cli.build_parser().parse_args(["--version"])
    assert ei.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_cli_constants_rows(capsys):
    out = _run(capsys, ["constants", "--x", "1000"])
    lines = out.splitlines()
    assert lines[1].split(",")[0] == "eta0"
    from siftlab.table import eta0

    assert float(lines[1].split(",")[1]) == pytest.approx(eta0(), rel=1e-15)
    names = [ln.split(",")[0] for ln in lines[1:]]
    assert "C2_partial" in names
    assert "s_1" in names and "s_5" in names
    assert "Q(0)" in names and "Q(3)" in names


def test_cli_render_formats():
    text = cli.render(["a", "b"], [[True, 0.1], [False, 2]], "csv")
    assert text == "a,b\n1,0.1\n0,2\n"
    jl = cli.render(["a"], [[1]], "jsonl")
    assert jl == '{"a": 1}\n'
