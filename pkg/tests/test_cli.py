import io
import json

import pytest

from filiform.cli import main
from filiform.liealg import loads_algebra


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def bratz_file(tmp_path):
    path = tmp_path / "b.json"
    assert run("generate", "bratzlavsky", "--n", "7", "--lambda", "1,0,2", "-o", str(path))[0] == 0
    return path


def test_generate_general_symbolic():
    code, text = run("generate", "general", "--z1", "4", "--z2", "6", "--n", "10")
    assert code == 0
    g = loads_algebra(text)
    assert len(g.parameters) == 18


def test_generate_with_params(tmp_path):
    params = tmp_path / "p.json"
    params.write_text('{"a_1": "1"}')
    out = tmp_path / "g.json"
    code, _ = run("generate", "general", "--z1", "4", "--z2", "4", "--n", "5", "--params", str(params), "-o", str(out))
    assert code == 0
    code, text = run("analyze", str(out), "--json")
    assert code == 0
    d = json.loads(text)
    assert (d["z1"], d["z2"], d["derived_length"]) == (4, 4, 2)


def test_generate_fag():
    code, text = run("generate", "general", "--z1", "4", "--z2", "6", "--n", "10", "--fag")
    assert code == 0
    assert not any(p.startswith("b_") for p in loads_algebra(text).parameters)


def test_analyze_text(bratz_file):
    code, text = run("analyze", str(bratz_file))
    assert code == 0
    assert "derived_length" in text and "filiform" in text


def test_adapted(bratz_file):
    code, text = run("adapted", str(bratz_file), "--json")
    assert code == 0
    d = json.loads(text)
    assert d["verified"] and not d["already_adapted"]


def test_adapted_already(tmp_path):
    path = tmp_path / "a.json"
    run("generate", "bratzlavsky", "--n", "6", "--lambda", "1,1", "--adapted", "-o", str(path))
    code, text = run("adapted", str(path))
    assert code == 0 and text.startswith("basis is adapted")


def test_constraints(tmp_path):
    path = tmp_path / "s.json"
    run("generate", "general", "--z1", "4", "--z2", "5", "--n", "7", "-o", str(path))
    code, text = run("constraints", str(path), "--json")
    assert code == 0
    assert json.loads(text)["constraints"] == ["a_1^2"]


def test_region():
    code, text = run("region", "--n", "10", "--empty")
    assert code == 0
    assert text.splitlines() == ["(4,6,10)", "count 1"]
    code, text = run("region", "--n", "12", "--empty", "--json")
    assert json.loads(text)["count"] == 4


def test_certify():
    code, text = run("certify", "--z1", "4", "--z2", "6", "--n", "10")
    assert code == 0
    assert "conclusion    true" in text
    code, text = run("certify", "--z1", "4", "--z2", "6", "--n", "10", "--json")
    assert json.loads(text)["coefficients"]["relation"] == {"lhs": "392", "rhs": "-7575", "violated": True}


def test_search():
    code, text = run("search", "--z1", "4", "--z2", "4", "--n", "5", "--grid", "0,1", "--json")
    assert code == 0
    d = json.loads(text)
    assert d["instances"] == [{"a_1": "1"}] and d["mode"] == "exhaustive"


def test_paper15(tmp_path):
    path = tmp_path / "p15.json"
    assert run("paper15", "--beta33", "1/858", "-o", str(path))[0] == 0
    code, text = run("analyze", str(path), "--json")
    d = json.loads(text)
    assert (d["derived_length"], d["z1"], d["z2"]) == (4, 4, 9)


def test_paper31():
    code, text = run("paper31", "--json")
    assert code == 0
    assert len(json.loads(text)["parameters"]) == 14


def test_lemma_check():
    code, text = run("lemma-check", "--z1", "4", "--z2", "6", "--n", "10")
    assert code == 3
    assert "FAIL" in text
    code, text = run("lemma-check", "--z1", "4", "--z2", "6", "--n", "10", "--corrected", "--m", "0", "--k", "1")
    assert code == 0
    code, text = run("lemma-check", "--z1", "4", "--z2", "6", "--n", "10", "--m", "9", "--k", "1", "--corrected", "--json")
    d = json.loads(text)
    assert "skipped" in d["verdicts"][1]


def test_exit_codes(tmp_path, capsys):
    assert run("certify", "--z1", "4", "--z2", "5", "--n", "8")[0] == 2
    assert run("certify", "--z1", "4", "--z2", "4", "--n", "9")[0] == 2
    assert run("analyze", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("analyze", str(bad))[0] == 2
    sym = tmp_path / "sym.json"
    run("generate", "general", "--z1", "4", "--z2", "4", "--n", "5", "-o", str(sym))
    assert run("analyze", str(sym))[0] == 2
    assert run("search", "--z1", "4", "--z2", "4", "--n", "5", "--grid", "1/0")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["certify", "--z1", "4"])
    assert exc.value.code == 1
