import json

import pytest

from quiverrep.cli import main
from quiverrep.exactlin import GF, QQ
from quiverrep.fixtures import d4_x, kronecker3_g, kronecker3_m
from quiverrep.quiver import a_n, save_quiver
from quiverrep.rep import Representation, load_morphism, load_rep, save_rep, simple


def write_rep(tmp_path, name, rep):
    path = tmp_path / name
    save_rep(rep, path)
    return str(path)


@pytest.fixture()
def fixture_dir(tmp_path):
    rc = main(["fixtures", "--out", str(tmp_path / "fx"), "--field", "F_2"])
    assert rc == 0
    return tmp_path / "fx"


def test_fixtures_emission_bit_exact(tmp_path):
    out = tmp_path / "fx"
    assert main(["fixtures", "--out", str(out)]) == 0
    m = load_rep(out / "kronecker3.m.json")
    assert m == kronecker3_m(QQ)
    data = json.loads((out / "kronecker3.m.json").read_text())
    assert data["matrices"][0] == [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "-1"]]
    g = load_morphism(out / "kronecker3.g.json")
    assert g == kronecker3_g(QQ)
    x = load_rep(out / "d4.x.json")
    assert x == d4_x(QQ)


def test_check_sub_holds(tmp_path, fixture_dir):
    s1 = simple(a_n(2), GF(2), 0)
    p = write_rep(tmp_path, "s1.json", s1)
    assert main(["check-sub", p, "--e", "1,0"]) == 0
    assert main(["check-sub", p, "--e", "0,1"]) == 1
    assert main(["check-sub", p, "--e", "9,9"]) == 1


def test_check_sub_rejects_non_dynkin(tmp_path, fixture_dir, capsys):
    rc = main(["check-sub", str(fixture_dir / "kronecker3.m.json"), "--e", "1,1"])
    assert rc == 3
    assert "Dynkin" in capsys.readouterr().err


def test_check_embed_kronecker(fixture_dir):
    rc = main(
        [
            "check-embed",
            str(fixture_dir / "kronecker3.pi.json"),
            str(fixture_dir / "kronecker3.m.json"),
            "--stable",
            "--rmax",
            "2",
        ]
    )
    assert rc == 0


def test_check_embed_failing_pair(tmp_path):
    from quiverrep.dynkin import assemble, build_table
    from quiverrep.rep import direct_sum

    f2 = GF(2)
    t = build_table(a_n(2), f2, seed=0)
    u12 = assemble(t, {(1, 1): 1})
    m = direct_sum([simple(a_n(2), f2, 0), simple(a_n(2), f2, 1)])
    pn = write_rep(tmp_path, "n.json", u12)
    pm = write_rep(tmp_path, "m.json", m)
    assert main(["check-embed", pn, pm]) == 1


def test_check_embed_json_output(tmp_path, fixture_dir):
    out = tmp_path / "verdict.json"
    rc = main(
        [
            "check-embed",
            str(fixture_dir / "kronecker3.pi.json"),
            str(fixture_dir / "kronecker3.m.json"),
            "--format",
            "json",
            "--output",
            str(out),
        ]
    )
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["result"]["nc2"]["holds"] is True
    assert data["config"]["seed"] == 0
    # the ledger is recomputable: each entry repeats the compared sides
    for entry in data["result"]["nc2"]["details"]:
        assert entry["ok"] == (entry["lhs"] <= entry["rhs"])


def test_roots_and_decompose(tmp_path, capsys):
    qpath = tmp_path / "a3.json"
    save_quiver(a_n(3), qpath)
    assert main(["roots", str(qpath)]) == 0
    out = capsys.readouterr().out
    assert len(out.strip().splitlines()) == 6

    from quiverrep.dynkin import assemble, build_table

    t = build_table(a_n(3), GF(5), seed=0)
    m = assemble(t, {(1, 1, 0): 2, (0, 0, 1): 1})
    p = write_rep(tmp_path, "m.json", m)
    assert main(["decompose", p]) == 0
    out = capsys.readouterr().out
    assert "[1, 1, 0] x 2" in out


def test_hom_ext_commands(tmp_path, capsys):
    f5 = GF(5)
    s1 = write_rep(tmp_path, "s1.json", simple(a_n(2), f5, 0))
    s2 = write_rep(tmp_path, "s2.json", simple(a_n(2), f5, 1))
    assert main(["hom", s1, s2]) == 0
    assert "[N,M] = 0" in capsys.readouterr().out
    assert main(["ext", s1, s2, "--cross-check"]) == 0
    assert "= 1" in capsys.readouterr().out


def test_enum_and_count_poly(tmp_path, capsys):
    one_vertex = __import__("quiverrep.quiver", fromlist=["Quiver"]).Quiver(1, ())
    m = Representation(one_vertex, QQ, (2,), [])
    p = write_rep(tmp_path, "p1.json", m)
    csv_path = tmp_path / "counts.csv"
    assert main(["count-poly", p, "--e", "1", "--qs", "2,3,5", "--csv", str(csv_path)]) == 0
    assert "q + 1" in capsys.readouterr().out.replace("*", " ").replace("1 q", "q")
    assert csv_path.exists()

    m2 = Representation(one_vertex, GF(2), (2,), [])
    p2 = write_rep(tmp_path, "p2.json", m2)
    assert main(["enum-gr", p2, "--e", "1"]) == 0
    assert "3 subrepresentation(s)" in capsys.readouterr().out


def test_semistable_command(tmp_path, fixture_dir):
    mpath = str(fixture_dir / "kronecker3.m.json")
    assert main(["semistable", mpath, "--e", "2,1", "--q-enum", "2"]) == 0
    assert main(["semistable", mpath, "--e", "1,1", "--q-enum", "2"]) == 1


def test_stabilize_command(tmp_path, fixture_dir):
    mpath = str(fixture_dir / "kronecker3.m.json")
    rc = main(["stabilize", mpath, "--e", "2,1", "--r-range", "1:4", "--samples", "16", "--q-enum", "2"])
    assert rc in (0, 2)


def test_check_an_command(tmp_path):
    f2 = GF(2)
    s2 = write_rep(tmp_path, "s2.json", simple(a_n(2), f2, 1))
    from quiverrep.dynkin import assemble, build_table

    t = build_table(a_n(2), f2, seed=0)
    u12 = write_rep(tmp_path, "u12.json", assemble(t, {(1, 1): 1}))
    assert main(["check-an", s2, u12]) == 0
    assert main(["check-an", u12, s2]) == 1


def test_dual_surj_command(tmp_path):
    f2 = GF(2)
    x = write_rep(tmp_path, "x.json", simple(a_n(2), f2, 0))
    assert main(["dual-surj", x, x]) == 0


def test_check_embed_inconclusive_exit(fixture_dir):
    rc = main(
        [
            "check-embed",
            str(fixture_dir / "kronecker3.pi.json"),
            str(fixture_dir / "kronecker3.m.json"),
            "--stable",
            "--rmax",
            "1",
        ]
    )
    assert rc == 2  # the criterion holds but no embedding exists at r = 1


def test_check_embed_exhaustive_q_reduction(tmp_path):
    out = tmp_path / "fxq"
    assert main(["fixtures", "--out", str(out)]) == 0  # rational fixtures
    rc = main(
        [
            "check-embed",
            str(out / "kronecker3.pi.json"),
            str(out / "kronecker3.m.json"),
            "--exhaustive-q",
            "3",
        ]
    )
    assert rc == 0


def test_input_errors(tmp_path):
    assert main(["check-sub", str(tmp_path / "missing.json"), "--e", "1"]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["hom", str(bad), str(bad)]) == 3
    assert main(["no-such-command"]) == 3
