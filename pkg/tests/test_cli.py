import json

import numpy as np
import pytest

from bgcsense.cli import format_signal, main, parse_signal, CliError
from bgcsense.graph import BipartiteGraph
from bgcsense.mmio import read_graph, read_matrix, write_graph


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split(" ", 1) for line in text.strip().splitlines())


def test_no_command(capsys):
    code, _, err = run(capsys)
    assert code == 2 and "error[usage]" in err


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "estimate", "--rows", 5, "--cols", 5, "--bogus")
    assert code == 2


def test_help(capsys):
    code, out, _ = run(capsys, "construct", "--help")
    assert code == 0 and "--balance-checks" in out


def test_estimate(capsys):
    code, out, _ = run(capsys, "estimate", "--rows", 50, "--cols", 100)
    assert code == 0
    assert kv(out) == {"d_real": "3.39", "d_int": "3"}


def test_construct_then_verify(capsys, tmp_path):
    path = tmp_path / "g.mtx"
    code, out, _ = run(capsys, "construct", "--rows", 30, "--cols", 60, "--seed", 4, "--out", path)
    assert code == 0 and int(kv(out)["edges"]) > 0
    code, out, _ = run(capsys, "verify", path)
    info = kv(out)
    assert code == 0
    assert info["has_four_cycle"] == "false" and info["girth"] == "6" and info["maximal"] == "true"
    graph, manifest = read_graph(path)
    assert manifest["command"] == "construct" and manifest["params"]["seed"] == 4
    assert "out" not in manifest["params"]


@pytest.mark.parametrize("adj,girth", [([[0, 1], [0, 1]], "4"), ([[0], [1]], "acyclic")])
def test_verify_small_patterns(capsys, tmp_path, adj, girth):
    path = tmp_path / "g.mtx"
    write_graph(path, BipartiteGraph(2, 2, adj))
    code, out, _ = run(capsys, "verify", path)
    assert code == 0 and kv(out)["girth"] == girth


def test_verify_matrix_file(capsys, tmp_path):
    g = tmp_path / "g.mtx"
    a = tmp_path / "a.mtx"
    run(capsys, "construct", "--rows", 10, "--cols", 20, "--out", g)
    assert run(capsys, "matrix", "--graph", g, "--type", "ternary", "--seed", 1, "--out", a)[0] == 0
    code, out, _ = run(capsys, "verify", a, "--skip-maximality")
    assert code == 0 and kv(out)["has_four_cycle"] == "false" and kv(out)["maximal"] == "skipped"


def test_malformed_file(capsys, tmp_path):
    path = tmp_path / "bad.mtx"
    path.write_text("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 9\n")
    code, _, err = run(capsys, "verify", path)
    assert code == 3 and "line 3" in err and "error[input-format]" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", tmp_path / "nope.mtx")
    assert code == 5 and "error[io]" in err


def test_peg(capsys, tmp_path):
    path = tmp_path / "p.mtx"
    code, out, _ = run(capsys, "peg", "--rows", 50, "--cols", 100, "--degree", 4, "--retries", 20,
                       "--seed", 0, "--out", path)
    assert code == 0 and kv(out)["succeeded"] == "true"
    assert (read_graph(path)[0].var_degrees() == 4).all()


def test_peg_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "p.mtx"
    code, _, err = run(capsys, "peg", "--rows", 4, "--cols", 5, "--degree", 3, "--retries", 1,
                       "--out", path)
    assert code == 4 and "solver-failure" in err and path.exists()


def test_matrix_and_analyze(capsys, tmp_path):
    g, a, gm = tmp_path / "g.mtx", tmp_path / "a.mtx", tmp_path / "gauss.mtx"
    run(capsys, "construct", "--rows", 50, "--cols", 100, "--seed", 3, "--out", g)
    assert run(capsys, "matrix", "--graph", g, "--type", "binary", "--out", a)[0] == 0
    code, out, _ = run(capsys, "analyze", "--matrix", a)
    info = kv(out)
    assert code == 0 and info["kind"] == "binary"
    assert float(info["mu"]) == pytest.approx(0.25) and info["k_bound"] == "2"
    assert run(capsys, "matrix", "--type", "gaussian", "--rows", 4, "--cols", 6, "--seed", 2,
               "--out", gm)[0] == 0
    assert read_matrix(gm)[0].kind == "gaussian"
    assert run(capsys, "matrix", "--type", "gaussian", "--out", gm)[0] == 2


def test_recover_and_oracle(capsys, tmp_path):
    a, s, out = tmp_path / "a.mtx", tmp_path / "x.txt", tmp_path / "xhat.txt"
    run(capsys, "matrix", "--type", "gaussian", "--rows", 6, "--cols", 10, "--seed", 1, "--out", a)
    s.write_text("2:1.5 7:-1\n")
    code, text, _ = run(capsys, "recover", "--matrix", a, "--signal", s, "--out", out)
    info = kv(text)
    assert code == 0 and info["status"] == "optimal" and float(info["relative_error"]) < 1e-6
    xhat = parse_signal(out.read_text(), 10)
    np.testing.assert_allclose(xhat, parse_signal(s.read_text(), 10), atol=1e-8)
    code, text2, _ = run(capsys, "oracle", "--matrix", a, "--signal", s)
    assert code == 0
    assert float(kv(text2)["l1_objective"]) == pytest.approx(float(info["l1_objective"]), abs=1e-6)


def test_bad_signal_file(capsys, tmp_path):
    a, s = tmp_path / "a.mtx", tmp_path / "x.txt"
    run(capsys, "matrix", "--type", "gaussian", "--rows", 3, "--cols", 4, "--out", a)
    s.write_text("0:1\n3=2\n")
    code, _, err = run(capsys, "recover", "--matrix", a, "--signal", s)
    assert code == 3 and "line 2" in err


def test_signal_format_roundtrip():
    x = np.zeros(8)
    x[[1, 5]] = [0.1, -3.0]
    np.testing.assert_array_equal(parse_signal(format_signal(x), 8), x)
    with pytest.raises(CliError):
        parse_signal("9:1", 8)


def test_bench_csv_and_json(capsys, tmp_path):
    out = tmp_path / "r.csv"
    args = ["bench", "--n", 20, "--delta", "0.5,1.0", "--trials", 3, "--signal", "unsigned",
            "--ensembles", "bgc-binary,gaussian", "--seed", 7, "--k-max", 3]
    code, text, _ = run(capsys, *args, "--out", out)
    assert code == 0 and text.startswith("bgc-binary ")
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest: ")
    assert lines[1] == "ensemble,delta,m,k,trials,successes,rate"
    summary = (tmp_path / "r_summary.csv").read_text().splitlines()
    assert summary[1] == "ensemble,delta,k_star" and len(summary) == 2 + 4
    jout = tmp_path / "r.json"
    assert run(capsys, *args, "--json", "--out", jout)[0] == 0
    doc = json.loads(jout.read_text())
    assert doc["plan"]["m_values"] == [10, 20] and doc["manifest"]["command"] == "bench"


def test_bench_bad_delta(capsys, tmp_path):
    code, _, err = run(capsys, "bench", "--delta", "0.5:x", "--out", tmp_path / "r.csv")
    assert code == 2


def test_env_seed(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BGCSENSE_SEED", "42")
    path = tmp_path / "g.mtx"
    run(capsys, "construct", "--rows", 5, "--cols", 9, "--out", path)
    assert read_graph(path)[1]["params"]["seed"] == 42


@pytest.mark.parametrize("argv", [
    ["construct", "--rows", 20, "--cols", 45, "--seed", 6],
    ["peg", "--rows", 20, "--cols", 40, "--degree", 2, "--retries", 5, "--seed", 1],
    ["matrix", "--type", "gaussian", "--rows", 5, "--cols", 7, "--seed", 3],
    ["bench", "--n", 16, "--delta", "0.5", "--trials", 2, "--k-max", 2, "--seed", 5],
])
def test_replay_is_byte_identical(capsys, tmp_path, argv):
    first, second = tmp_path / "first.out", tmp_path / "second.out"
    assert run(capsys, *argv, "--out", first)[0] == 0
    assert run(capsys, "replay", first, "--out", second)[0] == 0
    assert first.read_bytes() == second.read_bytes()


def test_replay_without_manifest(capsys, tmp_path):
    path = tmp_path / "g.mtx"
    write_graph(path, BipartiteGraph(2, 2, [[0], [1]]))
    code, _, err = run(capsys, "replay", path, "--out", tmp_path / "x")
    assert code == 3
