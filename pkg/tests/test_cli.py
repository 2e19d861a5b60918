import json
import subprocess
import sys

import pytest

from resalg import io
from resalg.cli import main
from resalg.enumeration import enumerate_algebras

from conftest import get


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    doc = json.loads(out)
    assert doc["exit_code"] == code
    return code, doc


@pytest.fixture
def h4_file(tmp_path):
    return str(io.save(get("H4"), tmp_path / "h4.json"))


@pytest.fixture
def srl_dir(tmp_path):
    d = tmp_path / "srl"
    d.mkdir()
    for n in range(1, 5):
        for A in enumerate_algebras(n, variety="SRL"):
            io.save(A, d / f"{A.name}.json")
    return str(d)


def test_validate(capsys, h4_file, tmp_path):
    assert run(capsys, "validate", h4_file)[0] == 0
    doc = json.loads(open(h4_file).read())
    doc["imp"][3][0] = 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 3 and "residuation" in out
    code, doc = run_json(capsys, "validate", str(bad))
    assert code == 3 and not doc["valid"]


def test_parse_error_exit(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{")
    code, _, err = run(capsys, "classify", str(p))
    assert code == 4 and "parse error" in err
    doc = json.loads(io.dumps(get("H3")))
    del doc["join"]
    p.write_text(json.dumps(doc))
    assert run(capsys, "radical", str(p))[0] == 4


def test_usage_errors(capsys):
    assert run(capsys, "classify", "no-such-algebra")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "hom", "H4", "H3", "--pin", "x")[0] == 2
    assert run(capsys, "catalog", "get")[0] == 2
    assert run(capsys, "enumerate", "--size", "9", "--count-only")[0] == 2
    assert run(capsys, "enumerate", "--size", "3")[0] == 2  # no -o
    assert run(capsys, "paper-suite", "--only", "nope")[0] == 2
    assert run(capsys, "quotient", "H4", "--filter", "1,7")[0] == 2


def test_classify(capsys, h4_file):
    code, out, _ = run(capsys, "classify", h4_file)
    assert code == 0 and "GODEL" in out and "✓" in out
    code, doc = run_json(capsys, "classify", "L3")
    assert code == 0
    assert "MV" in doc["memberships"] and doc["equations"]["GODEL"] is False


def test_text_and_json_agree(capsys):
    code, out, _ = run(capsys, "filters", "H4")
    _, doc = run_json(capsys, "filters", "H4")
    assert [tuple(f) for f in doc["filters"]] == [(3,), (2, 3), (1, 2, 3), (0, 1, 2, 3)]
    for f in doc["filters"]:
        assert str(set(f)) in out
    _, doc = run_json(capsys, "filters", "H4", "--maximal")
    assert doc["filters"] == [[1, 2, 3]]
    # --json may come before or after the subcommand
    code2, out2, _ = run(capsys, "filters", "H4", "--json")
    assert json.loads(out2)["filters"] == run_json(capsys, "filters", "H4")[1]["filters"]


def test_radical(capsys):
    code, doc = run_json(capsys, "radical", "I4")
    assert code == 0
    assert doc["radical"] == [2, 3] and doc["dense"] == [3] and doc["principal_unity"] == 2
    assert not doc["radical_dense"]


def test_quotient_product_diamond(capsys, tmp_path):
    out = tmp_path / "q.json"
    assert run(capsys, "quotient", "H4", "--filter", "1,2,3", "-o", str(out))[0] == 0
    code, doc = run_json(capsys, "quotient", "H4", "--filter", "1")
    assert code == 1 and doc["is_filter"] is False
    assert io.load(out).size == 2
    code, doc = run_json(capsys, "product", "2", "2")
    assert code == 0 and doc["document"]["size"] == 4
    out = tmp_path / "d.json"
    assert run(capsys, "diamond", "2", "-o", str(out))[0] == 0
    assert io.load(out).size == 3
    assert run(capsys, "subalgebras", "L3")[1].startswith("2 subalgebras")


def test_hom(capsys):
    code, doc = run_json(capsys, "hom", "H4", "H3")
    assert code == 0 and doc["morphisms"] == [[0, 1, 2, 2], [0, 2, 2, 2]]
    code, out, _ = run(capsys, "hom", "H4", "H3", "--pin", "2=1", "--count")
    assert (code, out.strip()) == (1, "0")
    code, out, _ = run(capsys, "hom", "H4", "H3", "--count")
    assert (code, out.strip()) == (0, "2")
    code, out, _ = run(capsys, "hom", "H4", "H3", "--pin", "2=1", "--exists")
    assert (code, out.strip()) == (1, "false")
    assert run(capsys, "hom", "H3", "H4", "--mono")[0] == 0
    assert run(capsys, "hom", "H3", "H4", "--iso")[0] == 1
    assert run(capsys, "hom", "luk:4", "I6", "--mono")[0] == 1


def test_retract(capsys):
    code, out, _ = run(capsys, "retract", "H3", "H4")
    assert code == 0 and out.startswith("true")
    assert run(capsys, "retract", "L3", "H4")[0] == 1


def test_relative_properties(capsys, srl_dir, tmp_path):
    code, out, _ = run(capsys, "injective", "2", "--class", srl_dir)
    assert code == 0 and "relative to class" in out
    code, doc = run_json(capsys, "absretract", "2", "--class", srl_dir)
    assert code == 0 and doc["note"] == "relative to class"
    d = tmp_path / "h"
    d.mkdir()
    io.save(get("H3"), d / "H3.json")
    io.save(get("H4"), d / "H4.json")
    assert run(capsys, "injective", "H3", "--class", str(d))[0] == 1
    assert run(capsys, "absretract", "H3", "--class", str(d))[0] == 1
    assert run(capsys, "injective", "H3", "--class", str(tmp_path / "none"))[0] == 2


def test_enumerate(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--size", "4", "--count-only")
    assert (code, out.strip()) == (0, "7")
    assert run(capsys, "enumerate", "--size", "4", "--chains", "--variety", "MV", "--count-only")[1].strip() == "1"
    assert run(capsys, "enumerate", "--size", "4", "--signature", "bounded_hoop", "--count-only")[1].strip() == "5"
    d = tmp_path / "out"
    assert run(capsys, "enumerate", "--size", "4", "-o", str(d))[0] == 0
    index = json.loads((d / io.INDEX_NAME).read_text())
    algs = io.load_class(d)
    assert len(algs) == 7 == len(index["algebras"])
    assert sorted(A.name for A in algs) == sorted(e["name"] for e in index["algebras"])
    assert len({e["key"] for e in index["algebras"]}) == 7


def test_catalog(capsys, tmp_path):
    code, doc = run_json(capsys, "catalog", "list")
    assert code == 0 and {"H3", "H4", "L3", "I4", "I6", "2"} <= set(doc["catalog"])
    code, out, _ = run(capsys, "catalog", "get", "I6")
    assert code == 0 and io.tables_equal(io.loads(out), get("I6"))
    p = tmp_path / "i4.json"
    assert run(capsys, "catalog", "get", "I4", "-o", str(p))[0] == 0
    assert io.tables_equal(io.load(p), get("I4"))
    assert run(capsys, "catalog", "get", "nothing")[0] == 2


def test_paper_suite(capsys):
    code, out, _ = run(capsys, "paper-suite", "--only", "diamond", "--no-timing")
    assert code == 0
    assert "A05" in out and "A06" in out and "A07" not in out
    code, doc = run_json(capsys, "paper-suite", "--only", "A01,a14", "--no-timing")
    assert code == 0 and [c["id"] for c in doc["checks"]] == ["A01", "A14"]
    assert "seconds" not in doc["checks"][0]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "resalg.cli", "classify", "H3"], capture_output=True, text=True)
    assert r.returncode == 0 and "HEYTING" in r.stdout
