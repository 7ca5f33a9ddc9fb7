import io
import json
import subprocess
import sys

import pytest

from unicover.cli import main
from unicover.core import dump_tower
from unicover.corpus import cycle_space, twin_points


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


@pytest.fixture
def files(tmp_path):
    c12 = tmp_path / "cycle12.json"
    c12.write_text(dump_tower(cycle_space(12, [1])))
    src, fold = twin_points()
    twin = tmp_path / "twin.json"
    twin.write_text(dump_tower(src))
    pt = tmp_path / "pt.json"
    pt.write_text(dump_tower(fold.target))
    fmap = tmp_path / "fold.json"
    fmap.write_text(json.dumps(fold.to_dict()))
    return {"c12": str(c12), "twin": str(twin), "pt": str(pt), "fold": str(fmap),
            "dir": tmp_path}


def test_pi1_from_file(files, capsys):
    code, rep = run(["pi1", files["c12"], "--level", "1", "--basepoint", "0"], capsys)
    assert code == 0
    assert rep["schema"] == 1 and rep["result"]["generators"] == 1
    assert rep["result"]["relators"] == 0
    assert rep["header"]["command"][1] == "<input>"
    assert len(rep["header"]["inputs_sha256"]) == 1


def test_piped_input_matches_file(files, capsys, monkeypatch):
    text = open(files["c12"]).read()
    _, a = run(["pi1", files["c12"], "--level", "1"], capsys)
    _, b = run(["pi1", "-", "--level", "1"], capsys, stdin=text, monkeypatch=monkeypatch)
    for r in (a, b):
        r["header"].pop("timestamp")
    assert a == b


def test_corpus_emit_is_raw_tower(capsys):
    code, out = run(["corpus", "emit", "cycle", "12", "1"], capsys)
    assert code == 0 and out["points"] == [str(i) for i in range(12)]


def test_cover_build_and_lift(files, capsys):
    out = str(files["dir"] / "cover.json")
    code, rep = run(["cover", "build", files["c12"], "--subgroup", "g1^3", "--write", out], capsys)
    assert code == 0 and rep["result"]["points"] == 36 and rep["result"]["index"] == 3
    code, rep = run(["cover", "lift", out, "--chain", ",".join(map(str, list(range(12)) + [0]))],
                    capsys)
    assert code == 0 and rep["result"]["end_coset"] != 0 and rep["result"]["unique"]


def test_cover_overflow_exit_code(capsys):
    from unicover.corpus import hawaiian_tower
    import tempfile, os
    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "h.json")
        open(p, "w").write(dump_tower(hawaiian_tower(2)))
        code, rep = run(["cover", "build", p, "--subgroup", "g1", "--max-cosets", "50"], capsys)
    assert code == 3 and "overflow" in rep["result"]


def test_verify_map_classify(files, capsys):
    code, rep = run(["verify", "map", files["twin"], files["pt"], "--map", files["fold"],
                     "--classify"], capsys)
    assert code == 0 and rep["result"]["label"] == "GeneralizedUniformCovering"
    code, rep = run(["verify", "map", files["twin"], files["pt"], "--map", files["fold"]], capsys)
    assert code == 2
    assert {r["check"] for r in rep["result"]["reports"]} >= {"chain-lifting"}


def test_analyze_tower_gapped(tmp_path, capsys):
    from unicover.corpus import gapped_cycle
    p = tmp_path / "g.json"
    p.write_text(dump_tower(gapped_cycle(8, 1)))
    code, rep = run(["analyze", "tower", str(p)], capsys)
    assert code == 2
    assert rep["result"]["ranks"] == [1, 0]
    assert rep["header"]["bounds"]["word_bound"] == 16


def test_usage_errors(capsys, tmp_path):
    code, rep = run(["pi1"], capsys)
    assert code == 1 and rep["error"]["type"] == "usage"
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": ["a"],\n "levels": [{"pairs": [[0, 4]]}]}')
    code, rep = run(["space", "validate", str(bad)], capsys)
    assert code == 1 and "line 2" in rep["error"]["message"]
    code, rep = run(["corpus", "emit", "nope"], capsys)
    assert code == 1


def test_verify_laws_small(capsys):
    code, rep = run(["verify", "laws", "--suite", "composition", "--seed", "3",
                     "--instances", "3", "--no-corpus"], capsys)
    assert code == 0 and rep["result"]["conclusion_failures"] == 0


def test_console_script_pipeline():
    emit = subprocess.run([sys.executable, "-m", "unicover.cli", "corpus", "emit", "cycle", "12",
                           "1"], capture_output=True, text=True, check=True)
    res = subprocess.run([sys.executable, "-m", "unicover.cli", "--summary", "pi1", "-",
                          "--level", "1", "--basepoint", "0"],
                         input=emit.stdout, capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["result"]["generators"] == 1
    assert "exit 0" in res.stderr
