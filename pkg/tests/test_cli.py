import json

import pytest

from oriflag.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ideals_sl3(capsys):
    code, out, _ = call(capsys, "ideals", "--n", "3", "--w0", "antidiag:+,-,+", "--verify")
    assert code == 0
    assert "count=21 classes=7" in out
    assert "verify: ok" in out


def test_ideals_case_ii(capsys, tmp_path):
    path = tmp_path / "census.json"
    code, out, _ = call(capsys, "ideals", "--n", "3", "--w0", "antidiag:-,+,+",
                        "--R", "E=+--", "--json", str(path))
    assert code == 0
    assert out.startswith("count=1 ")
    assert json.loads(path.read_text())["count"] == 1


def test_ideals_sphere_list(capsys):
    code, out, _ = call(capsys, "ideals", "--n", "3", "--w0", "antidiag:+,-,+", "--sphere", "--list")
    assert code == 0
    assert "count=2" in out
    assert "{+1 +2 +3, +2 +1 -3}" in out


def test_ideals_bad_w0_is_usage_error(capsys):
    code, _, err = call(capsys, "ideals", "--n", "3", "--w0", "+2 +3 +1")
    assert code != 0
    assert "oriflag:" in err


def test_grassmannian_table(capsys):
    code, out, _ = call(capsys, "grassmannian", "--n", "5")
    assert code == 0
    assert out.splitlines() == ["k=1: no", "k=2: exists", "k=3: exists", "k=4: no"]


def test_grassmannian_small_n(capsys):
    code, _, _ = call(capsys, "grassmannian", "--n", "2")
    assert code == 2


def test_relpos(capsys, tmp_path):
    a = tmp_path / "a.mat"
    b = tmp_path / "b.mat"
    a.write_text("1 0 0\n0 1 0\n0 0 1\n")
    b.write_text("# a 3-cycle\n0 0 1\n1 0 0\n0 1 0\n")
    code, out, _ = call(capsys, "relpos", "--n", "3", str(a), str(a))
    assert code == 0 and out.strip() == "identity"
    code, out, _ = call(capsys, "relpos", "--n", "3", str(a), str(b))
    assert code == 0 and out.strip() == "+2 +3 +1"


def test_relpos_missing_file(capsys, tmp_path):
    code, _, err = call(capsys, "relpos", "--n", "3", str(tmp_path / "nope"), str(tmp_path / "nope"))
    assert code == 1
    assert "error" in err


def test_wk(capsys):
    code, out, _ = call(capsys, "wk", "--n", "7", "--k", "2")
    assert code == 0
    assert "verdict: match" in out
    code, _, _ = call(capsys, "wk", "--n", "6", "--k", "2")
    assert code == 2


def test_weyl_order_dot_and_json(capsys, tmp_path):
    code, out, _ = call(capsys, "weyl", "order", "--n", "3", "--w0", "antidiag:+,-,+")
    assert code == 0 and out.startswith("digraph")
    path = tmp_path / "order.json"
    code, _, _ = call(capsys, "weyl", "order", "--n", "3", "--format", "json", "--out", str(path))
    assert code == 0
    assert len(json.loads(path.read_text())["classes"]) == 24


def test_weyl_order_needs_force(capsys):
    code, _, err = call(capsys, "weyl", "order", "--n", "5")
    assert code != 0
    assert "force" in err


def test_positions_text(capsys):
    code, out, _ = call(capsys, "positions", "--n", "3", "--sphere")
    assert code == 0
    assert len([line for line in out.splitlines() if line.strip()]) >= 4


def test_bad_type_spec(capsys):
    code, _, err = call(capsys, "positions", "--n", "3", "--R", "theta=1,2")
    assert code != 0
    assert err


def test_unknown_subcommand(capsys):
    assert call(capsys, "frobnicate")[0] == 2


def test_help_exits_cleanly(capsys):
    assert call(capsys, "--help")[0] == 0


def test_domain_render(capsys, tmp_path):
    out_path = tmp_path / "k.ppm"
    code, out, _ = call(capsys, "domain", "render", "--L", "3", "--width", "40", "--height", "20",
                        "--out", str(out_path))
    assert code == 0
    data = out_path.read_bytes()
    assert data.startswith(b"P6\n40 20\n255\n")
    assert len(data) == len(b"P6\n40 20\n255\n") + 40 * 20 * 3


@pytest.mark.parametrize("eps", ["1e-6", "1e-12"])
def test_eps_env(capsys, tmp_path, monkeypatch, eps):
    monkeypatch.setenv("ORIFLAG_EPS", eps)
    a = tmp_path / "a.mat"
    a.write_text("2 1 0\n0 1 0\n0 0 0.5\n")
    code, out, _ = call(capsys, "relpos", "--n", "3", str(a), str(a))
    assert code == 0 and out.strip() == "identity"
