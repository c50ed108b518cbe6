from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutwidth.cli import ParseError, main, parse_graph, parse_ordering, render, render_ordering
from cutwidth.multigraph import LoopEdge, binary_tree, build, canonical_code, complete, cycle, path

from graphs import random_multigraph


def write_graph(tmp_path, g, name="g.txt"):
    f = tmp_path / name
    f.write_text("c test graph\n" + render(g))
    return str(f)


def write_order(tmp_path, sigma, name="o.txt"):
    f = tmp_path / name
    f.write_text(render_ordering(sigma))
    return str(f)


def run_json(capsys, argv):
    capsys.readouterr()
    code = main(["--json", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out.splitlines()[0]) if out.strip() else None


def test_parse_examples():
    assert parse_graph("p cw 3 3\ne 1 2\ne 2 3\ne 1 3\n") == complete(3)
    assert parse_graph("p cw 2 1\ne 1 2 2\n") == build(2, [(0, 1, 2)])
    with pytest.raises(LoopEdge) as info:
        parse_graph("p cw 2 1\ne 1 1\n")
    assert "line 2" in str(info.value)


@pytest.mark.parametrize(
    "text,line",
    [
        ("e 1 2\n", 1),
        ("p cw 2 1\np cw 2 1\n", 2),
        ("p cw 2 1\ne 1 3\n", 2),
        ("p cw 2 1\ne 1 2 0\n", 2),
        ("p cw 2 1\nx 1 2\n", 2),
        ("p cw 2 1\ne 1 b\n", 2),
        ("c nothing\n", None),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    assert info.value.line == line


def test_ordering_format():
    assert parse_ordering("c order\n3 1\n2\n") == [2, 0, 1]
    assert render_ordering([2, 0, 1]) == "3 1 2\n"


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10), st.randoms())
def test_render_round_trip(n, extra, rnd):
    g = random_multigraph(random.Random(rnd.random()), n, extra)
    h = parse_graph(render(g))
    assert h == g and canonical_code(h) == canonical_code(g)


def test_solve_exit_codes(tmp_path, capsys):
    assert main(["solve", write_graph(tmp_path, path(100)), "--k", "1"]) == 0
    assert main(["solve", write_graph(tmp_path, complete(4)), "--k", "3"]) == 1
    assert main(["solve", write_graph(tmp_path, binary_tree(4)), "--k", "1"]) == 1
    code, out = run_json(capsys, ["solve", write_graph(tmp_path, complete(4))])
    assert code == 0 and out["format"] == 1 and out["cutwidth"] == 4
    assert sorted(out["ordering"]) == [1, 2, 3, 4] and max(out["cuts"]) == 4
    assert "states_visited" in out["report"]


def test_verify_exit_codes(tmp_path, capsys):
    gfile = write_graph(tmp_path, complete(4))
    ofile = write_order(tmp_path, [2, 0, 3, 1])
    assert main(["verify", gfile, "--ordering", ofile, "--k", "4"]) == 0
    assert main(["verify", gfile, "--ordering", ofile, "--k", "3"]) == 1
    bad = write_order(tmp_path, [0, 1, 2], "bad.txt")
    assert main(["verify", gfile, "--ordering", bad, "--k", "4"]) == 2


def test_solve_then_verify(tmp_path, capsys):
    rng = random.Random(5)
    for i in range(15):
        g = random_multigraph(rng, rng.randint(1, 9), rng.randint(0, 9))
        gfile = write_graph(tmp_path, g, f"g{i}.txt")
        code, out = run_json(capsys, ["solve", gfile])
        assert code == 0
        ofile = tmp_path / f"o{i}.txt"
        ofile.write_text(" ".join(map(str, out["ordering"])) + "\n")
        assert main(["verify", gfile, "--ordering", str(ofile), "--k", str(out["cutwidth"])]) == 0


def test_usage_and_input_errors(tmp_path, capsys):
    loop = tmp_path / "loop.txt"
    loop.write_text("p cw 2 1\ne 1 1\n")
    assert main(["solve", str(loop)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "missing.txt")]) == 2
    assert main(["solve", write_graph(tmp_path, path(3)), "--k", "-1"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == 2


def test_state_limit_env(tmp_path, capsys, monkeypatch):
    gfile = write_graph(tmp_path, cycle(8))
    ofile = write_order(tmp_path, [0, 4, 1, 5, 2, 6, 3, 7])
    monkeypatch.setenv("CW_STATE_LIMIT", "1")
    assert main(["compress", gfile, "--ordering", ofile, "--k", "2"]) == 2
    assert "CW_STATE_LIMIT" in capsys.readouterr().err
    monkeypatch.setenv("CW_STATE_LIMIT", "lots")
    assert main(["compress", gfile, "--ordering", ofile, "--k", "2"]) == 2
    monkeypatch.delenv("CW_STATE_LIMIT")
    assert main(["compress", gfile, "--ordering", ofile, "--k", "2"]) == 0


def test_other_commands(tmp_path, capsys):
    gfile = write_graph(tmp_path, cycle(5))
    code, out = run_json(capsys, ["oracle", gfile])
    assert code == 0 and out["cutwidth"] == 2
    code, out = run_json(capsys, ["dcw", gfile, "--k", "1"])
    assert code == 0 and out["dcw"] == 1 and len(out["deleted"]) == 1
    ofile = write_order(tmp_path, [0, 2, 4, 1, 3])
    code, out = run_json(capsys, ["linked", gfile, "--ordering", ofile])
    assert code == 0 and out["linked"] and out["width"] == 4
    code, out = run_json(capsys, ["compress", gfile, "--ordering", ofile, "--k", "1"])
    assert code == 1 and out["decision"] is False
    code, out = run_json(capsys, ["reduce", write_graph(tmp_path, path(60), "p.txt"), "--k", "1"])
    assert code == 0 and out["progress"]
    assert parse_graph(out["graph"]).num_edges == 1
    assert out["trace"]["events"][0]["type"] == "dissolved"


def test_obstructions_command(tmp_path, capsys):
    assert main(["obstructions", "--k", "1", "--max-n", "4", "--max-mult", "2"]) == 0
    assert capsys.readouterr().out.startswith("2 obstructions for k = 1")
    cat = tmp_path / "cat.jsonl"
    assert main(["--json", "obstructions", "--k", "0", "--max-n", "3", "--catalog", str(cat)]) == 0
    recs = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert len(recs) == 1 and recs[0]["format"] == 1 and recs[0]["graph"]["n"] == 2


def test_table_output(tmp_path, capsys):
    assert main(["oracle", write_graph(tmp_path, path(4))]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["cutwidth", "1"]
