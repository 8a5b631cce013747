import io
import json

import numpy as np
import pytest

from corrframes import _backend, catalog
from corrframes.cli import EXIT_ERROR, EXIT_OK, EXIT_USAGE, execute
from corrframes.frameio import read_frame


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = execute(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def emitted(tmp_path):
    def emit(name):
        path = tmp_path / f"{name.replace(':', '_')}.txt"
        code, _, _ = run("catalog", "emit", name, "-o", str(path))
        assert code == EXIT_OK
        return str(path)

    return emit


def test_catalog_list():
    code, out, _ = run("catalog", "list")
    assert code == EXIT_OK
    for name in catalog.names():
        assert name in out
    code, out, _ = run("catalog", "list", "--json")
    data = json.loads(out)
    assert [e["name"] for e in data["entries"]] == catalog.names()


def test_catalog_emit_stdout():
    code, out, _ = run("catalog", "emit", "cube4")
    assert code == EXIT_OK
    assert out.startswith("# corrframes frame file\n# generator: catalog:cube4\n4 3\n")


def test_analyze_cube(emitted):
    path = emitted("cube4")
    code, out, _ = run("analyze", path)
    assert code == EXIT_OK
    assert "max_correlation: 0.333333333333" in out
    assert "equiangular: true" in out
    assert "min_angle_deg: 70.5287793655" in out
    assert "_rad" not in out


def test_analyze_json_matches_human(emitted):
    path = emitted("pentagon-complement5")
    _, human, _ = run("analyze", path)
    _, js, _ = run("analyze", path, "--json")
    data = json.loads(js)
    assert data["min_angle_deg"] == pytest.approx(57.361, abs=1e-3)
    assert "min_angle_rad" in data
    for key in ("max_correlation", "min_angle_deg", "welch_bound", "parseval_defect"):
        assert f"{key}: {format(data[key], '.12g')}" in human
    assert data["tightness"]["is_tight"] is True


def test_equiv_complement(emitted, tmp_path):
    p5 = emitted("pentagon-complement5")
    h5 = emitted("harmonic2:5")
    comp = str(tmp_path / "comp.txt")
    assert run("complement", h5, "-o", comp)[0] == EXIT_OK
    code, out, _ = run("equiv", p5, comp)
    assert code == EXIT_OK
    assert "status: equivalent" in out
    code, out, _ = run("equiv", p5, comp, "--json")
    data = json.loads(out)
    assert data["status"] == "equivalent"
    assert sorted(data["witness"]["perm"]) == list(range(5))


def test_union_reproduces_7_3(emitted, tmp_path):
    out_path = tmp_path / "u.txt"
    code, _, _ = run("union", emitted("cube4"), emitted("onb:3"), "-o", str(out_path))
    assert code == EXIT_OK
    # double-precision scaling vs. the catalog's single rounding: equal to an ulp
    np.testing.assert_allclose(read_frame(out_path).V, catalog.build("cube-plus-onb7").V, atol=1e-15)


def test_optimize_square(tmp_path):
    path = tmp_path / "opt.txt"
    code, out, _ = run("optimize", "3", "3", "--seed", "1", "--json", "-o", str(path))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["achieved"] <= 1e-6
    assert data["certified"] == "matches-known"
    assert read_frame(path).N == 3
    assert f"optimizer:{data['config_digest']}" in path.read_text()


def test_optimize_human_hides_history():
    code, out, _ = run("optimize", "4", "3", "--restarts", "2")
    assert code == EXIT_OK
    assert "history" not in out and "certified: matches-known" in out


def test_outputs_feed_every_reader(emitted, tmp_path):
    # frames written by complement, union and optimize all parse again
    written = []
    c = tmp_path / "c.txt"
    run("complement", emitted("icosahedron6"), "-o", str(c))
    written.append(c)
    u = tmp_path / "u.txt"
    run("union", emitted("icosahedron6"), emitted("cube4"), "-o", str(u))
    written.append(u)
    o = tmp_path / "o.txt"
    run("optimize", "5", "2", "--restarts", "2", "-o", str(o))
    written.append(o)
    for path in written:
        assert run("analyze", str(path))[0] == EXIT_OK
        assert run("equiv", str(path), str(path))[0] == EXIT_OK


def test_rattle():
    code, out, _ = run("rattle", "--json")
    data = json.loads(out)
    assert code == EXIT_OK and data["infeasible"] is True
    assert data["system_residual"] >= 0.30


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["catalog"], ["analyze"], ["optimize", "4"], ["optimize", "x", "3"], ["analyze", "f", "--nope"]],
)
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == EXIT_USAGE
    assert "usage:" in err


def test_help_exits_zero():
    code, out, _ = run("--help")
    assert code == EXIT_OK and "optimize" in out


def test_operational_errors(tmp_path, emitted):
    assert run("analyze", str(tmp_path / "missing.txt"))[0] == EXIT_ERROR
    code, _, err = run("catalog", "emit", "nope")
    assert code == EXIT_ERROR and "unknown catalog entry" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n1 0\n")
    code, _, err = run("analyze", str(bad))
    assert code == EXIT_ERROR and "line 2: expected 2 rows, found 1" in err
    assert run("complement", emitted("hexakis-lines10"))[0] == EXIT_ERROR
    assert run("equiv", emitted("cube4"), emitted("icosahedron6"))[0] == EXIT_ERROR
    assert run("optimize", "2", "3")[0] == EXIT_ERROR


@pytest.mark.skipif(len(_backend.available_backends()) < 2, reason="compiled kernels not built")
def test_backend_flag_is_scoped(emitted):
    code, _, _ = run("--backend", "python", "analyze", emitted("cube4"))
    assert code == EXIT_OK
    assert _backend.backend_name() == "cython"


def test_determinism():
    argv = ("optimize", "6", "3", "--seed", "9", "--restarts", "3", "--json")
    assert run(*argv) == run(*argv)
