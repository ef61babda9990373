import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from segtri import io
from segtri.cli import main
from segtri.fixtures import EXAMPLE2_SEGMENTS

EX1 = {"valuations": ["1", "2"], "aggregate": ["1/2", "1/2"]}
EX2 = {"valuations": ["1", "2", "3"], "aggregate": ["1/2", "1/3", "1/6"]}
TWO_SEG = {"valuations": ["1", "2", "3"], "aggregate": ["7/12", "1/12", "1/3"]}
MIX = {"valuations": ["1", "2"], "aggregate": ["3/4", "1/4"]}


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze(capsys, write):
    code, out, _ = run(capsys, "analyze", write("ex2.json", EX2))
    assert code == 0
    assert "pi* = 1" in out and "w* = 5/3" in out and "{1, 2}" in out and "x* = x^V: no" in out
    code, out, _ = run(capsys, "analyze", write("ex1.json", EX1), "--format", "json")
    info = json.loads(out)
    assert info["unit_elastic"] is True and info["prop3_points"] == ["1/2", "0"]


@pytest.mark.parametrize(
    "doc",
    [
        {"valuations": ["1", "2"], "aggregate": ["1/0", "1"]},
        {"valuations": ["1", "2"], "aggregate": [0.5, 0.5]},
        {"valuations": ["1", "2"], "aggregate": ["1/3", "1/3"]},
        {"valuations": ["2", "1"], "aggregate": ["1/2", "1/2"]},
        {"aggregate": ["1/2", "1/2"]},
        "not json",
    ],
)
def test_invalid_instance_exits_4(capsys, write, doc):
    code, _, err = run(capsys, "analyze", write("bad.json", doc))
    assert code == 4 and "error" in err


def test_missing_file_and_bad_args(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "nope.json"))[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 4


def test_synthesize_examples(capsys, write, tmp_path):
    inst = write("mix.json", MIX)
    out_path = str(tmp_path / "d.json")
    code, out, _ = run(capsys, "synthesize", inst, "--u", "1/8", "--pi", "9/8", "--out", out_path)
    assert code == 0 and "achieved u = 1/8, pi = 9/8" in out
    d = io.load_segmentation(out_path).direct()
    assert [e.price for e in d.entries] == [0, 1]

    code, out, _ = run(capsys, "synthesize", write("ex1.json", EX1), "--u", "1/4", "--pi", "1")
    assert code == 2 and out.strip() == "infeasible: prop3-gap"
    code, out, _ = run(capsys, "synthesize", inst, "--u", "-1", "--pi", "1")
    assert code == 2 and out.strip() == "infeasible: outside-triangle"
    assert run(capsys, "synthesize", inst, "--u", "1/0", "--pi", "1")[0] == 4
    assert run(capsys, "synthesize", inst, "--u", "0.5", "--pi", "1")[0] == 4


def test_synthesize_then_verify_round_trip(capsys, write, tmp_path):
    inst = write("two.json", TWO_SEG)
    out_path = str(tmp_path / "d.json")
    assert run(capsys, "synthesize", inst, "--u", "1/2", "--pi", "1", "--out", out_path)[0] == 0
    text = open(out_path).read()
    doc = io.load_segmentation(out_path)
    assert io.dumps(io.direct_to_doc(doc.direct())) == text
    code, _, err = run(capsys, "verify", out_path)
    assert code == 0 and "overall: pass" in err
    # already direct: convert is the identity
    code, out, _ = run(capsys, "convert", out_path)
    assert code == 0 and out == text


def test_verify_negatives(capsys, write, tmp_path):
    inst = write("two.json", TWO_SEG)
    out_path = str(tmp_path / "d.json")
    run(capsys, "synthesize", inst, "--u", "1/2", "--pi", "1", "--out", out_path)
    doc = json.loads(open(out_path).read())
    doc["segments"][0]["weight"] = "1/3"
    code, _, err = run(capsys, "verify", write("edited.json", doc))
    assert code == 1 and "FAIL weights-sum" in err

    seg_doc = dict(EX2)
    seg_doc["revised"] = False
    seg_doc["segments"] = [
        {"market": [io.format_rational(m) for m in x], "weight": io.format_rational(w), "price_index": k}
        for (x, w, k) in zip((s[0] for s in EXAMPLE2_SEGMENTS), (s[1] for s in EXAMPLE2_SEGMENTS), (0, 2, 1))
    ]
    code, _, err = run(capsys, "verify", write("nonopt.json", seg_doc))
    assert code == 1 and "FAIL optimal[2]" in err and "(1/2, 1/2, 0)" in err


def test_demo_and_convert(capsys, write):
    code, out, _ = run(capsys, "demo", "example1")
    assert code == 0 and "collision: x^1 = x^2 = (1/2, 1/2)" in out
    code, out, _ = run(capsys, "demo", "example2")
    assert code == 0
    assert out.count("= (1/2, 1/3, 1/6)") >= 3
    assert run(capsys, "demo", "example9")[0] == 4

    code, doc_text, _ = run(capsys, "demo", "example1", "--format", "json")
    path = write("e1.json", doc_text)
    code, out, _ = run(capsys, "convert", path)
    assert code == 3 and out.strip() == "collision: x^1 = x^2 = (1/2, 1/2)"
    code, out, _ = run(capsys, "convert", path, "--revised")
    assert code == 0
    rho = io.segmentation_from_doc(json.loads(out)).revised()
    assert [(a.price, a.weight) for a in rho.atoms] == [(0, F(1, 2)), (1, F(1, 2))]
    code, _, err = run(capsys, "verify", path)
    assert code == 0


def test_convert_from_stdin():
    demo = subprocess.run([sys.executable, "-m", "segtri", "demo", "example1", "--format", "json"],
                          capture_output=True, text=True, check=True)
    conv = subprocess.run([sys.executable, "-m", "segtri", "convert", "-"], input=demo.stdout,
                          capture_output=True, text=True)
    assert conv.returncode == 3
    assert conv.stdout == "collision: x^1 = x^2 = (1/2, 1/2)\n"


EX2_CSV = """kind,name,u,pi,u_end,pi_end
vertex,uniform,0,1,,
vertex,consumer-optimal,2/3,1,,
vertex,full-extraction,0,5/3,,
edge,bottom,0,1,2/3,1
edge,hypotenuse,2/3,1,0,5/3
edge,left,0,5/3,0,1
"""


def test_triangle_outputs(capsys, write, tmp_path):
    inst = write("ex2.json", EX2)
    code, out, _ = run(capsys, "triangle", inst)
    assert code == 0 and out == EX2_CSV
    empty = write("empty.json", "")
    assert run(capsys, "triangle", inst, "--points", empty)[1] == EX2_CSV

    pts = write("pts.json", [["1/3", "1"], ["0", "4/3"]])
    svg1 = str(tmp_path / "a.svg")
    svg2 = str(tmp_path / "b.svg")
    run(capsys, "triangle", inst, "--emit", "svg", "--points", pts, "--out", svg1)
    run(capsys, "triangle", inst, "--emit", "svg", "--points", pts, "--out", svg2)
    a, b = open(svg1, "rb").read(), open(svg2, "rb").read()
    assert a == b and a.startswith(b"<svg") and a.count(b'r="3"') == 2

    code, out, _ = run(capsys, "triangle", write("ex1.json", EX1))
    assert "unit-elastic,k=1,1/2,1,," in out and "unit-elastic,k=2,0,1,," in out
    assert run(capsys, "triangle", inst, "--points", write("bad.json", [[1, 2, 3]]))[0] == 4


def test_search(capsys, write):
    code, out, _ = run(capsys, "search", write("ex1.json", EX1), "--trials", "40", "--seed", "3")
    assert code == 0 and "0 violations" in out
    again = run(capsys, "search", write("ex1b.json", EX1), "--trials", "40", "--seed", "3")[1]
    assert again == out
    assert run(capsys, "search", write("ex2.json", EX2))[0] == 4
