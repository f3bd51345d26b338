import io
import json
import subprocess
import sys

import pytest

from conftest import DATA
from hsjet.cli import main
from hsjet.fileformat import load_presentation
from hsjet.parser import parse_poly
from hsjet.presentation import jet_presentation


def run(*argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


def structured(*argv):
    code, text = run(*argv, "--format", "structured")
    data = json.loads(text)
    assert data["exit_code"] == code
    return code, data


CUSP = DATA / "cusp.json"
LINE = DATA / "line.json"
PLANE = DATA / "plane.json"


class TestJet:
    def test_cusp(self):
        code, text = run("jet", CUSP, "-m", 2)
        assert code == 0
        assert "relations (3):" in text
        assert "-3*x*d1x^2 - 3*x^2*d2x + d1y^2 + 2*y*d2y" in text

    def test_free(self):
        code, data = structured("jet", PLANE, "-m", 3)
        assert code == 0
        assert data["presentation"]["relations"] == []
        assert len(data["presentation"]["generators"]) == 4 * 2

    def test_zero_echoes_input(self):
        code, data = structured("jet", CUSP, "-m", 0)
        assert data["presentation"]["relations"] == [str(r) for r in load_presentation(CUSP).relations]

    def test_round_trip(self):
        _, data = structured("jet", CUSP, "-m", 2)
        P = load_presentation(CUSP)
        J = jet_presentation(P, 2)
        names = [g["name"] for g in data["presentation"]["generators"]]
        assert names == [str(g) for g in J.generators]
        back = [parse_poly(s, P.base_names, P.ring) for s in data["presentation"]["relations"]]
        assert back == list(J.relations)


class TestVerify:
    def test_desideratum(self):
        code, data = structured("verify", "desideratum", CUSP, "--q", 2, "-m", 1)
        assert code == 0 and data["jet_points"] == data["arcs"] == 6

    def test_truncation_expected_failure(self):
        code, text = run("verify", "truncation", CUSP, "--q", 3, "--i", 1, "--j", 2)
        assert code == 0
        assert "EXPECTED" in text and "witness: (x=0, y=0" in text
        _, data = structured("verify", "truncation", CUSP, "--q", 3, "--i", 1, "--j", 2)
        assert data["not_lifted"] == 6
        assert all(w["x"] == 0 and w["y"] == 0 and w["d1y"] != 0 for w in data["witnesses"])

    def test_truncation_free(self):
        code, text = run("verify", "truncation", LINE, "--q", 3)
        assert code == 0 and "EXPECTED" not in text and "FAIL" not in text

    def test_leibniz(self):
        code, data = structured("verify", "leibniz", CUSP, "--seed", 3)
        assert code == 0 and data["cases_passed"] == data["cases"] == 200

    def test_product(self):
        code, data = structured("verify", "product", CUSP, "--other", LINE, "--q", 3, "-m", 1)
        assert code == 0 and data["left"] * data["right"] == data["product"]

    def test_localization(self):
        code, data = structured("verify", "localization", LINE, "--q", 3, "-m", 1)
        assert code == 0 and data["localized_jets"] == 2 * 3

    def test_base_change(self):
        code, data = structured("verify", "base-change", DATA / "cusp_zz.json", "--q", 3, "-m", 2)
        assert code == 0 and data["jet_then_reduce"] == data["reduce_then_jet"]

    def test_first_sequence(self):
        code, text = run("verify", "first-sequence", DATA / "cusp_over_line.json", "-m", 1)
        assert code == 0 and text.startswith("PASS")

    def test_first_sequence_needs_tower(self):
        assert run("verify", "first-sequence", CUSP)[0] == 3

    def test_dilation(self):
        code, text = run("verify", "dilation", CUSP, "-m", 2, "--q", 3)
        assert code == 0 and text.count("PASS") == 8

    def test_functoriality(self):
        code, text = run("verify", "functoriality", LINE, "--map", "x -> x^2 + x", "-m", 2)
        assert code == 0 and text.count("PASS") == 2


class TestOtherCommands:
    def test_count(self):
        code, data = structured("count", CUSP, "--q", 3, "-m", 2, "--fiber", "x=0,y=0")
        assert code == 0 and data["count"] == 27

    def test_fiber(self):
        code, data = structured("fiber", CUSP, "-m", 2, "--fiber", "x=0,y=0", "--q", 3)
        assert data["presentation"]["relations"] == ["d1y^2"] and data["count"] == 27

    def test_orbits(self):
        code, data = structured("orbits", LINE, "--q", 3, "-m", 1, "--fiber", "x=0")
        assert code == 0 and data["orbit_count"] == 1 and data["orbits"][0]["size"] == 2

    def test_induced(self):
        code, data = structured("induced", LINE, "--map", "x -> x^2", "--q", 3, "-m", 1)
        assert code == 0
        assert data["images"]["d1x"] == "2*x*d1x"
        assert {"x": 0, "d1x": 1} in data["not_in_image"]
        assert data["routes_agree"] and not data["surjective"]

    def test_leading_form(self):
        code, text = run("leading-form", LINE, "--b", "x^2", "--E", "x", "-m", 2)
        assert code == 0 and text.strip() == "d1x^2"

    def test_leading_form_not_in_power(self):
        assert run("leading-form", LINE, "--b", "x", "--E", "x", "-m", 2)[0] == 3


class TestExitCodes:
    @pytest.fixture
    def write(self, tmp_path):
        def _write(text):
            p = tmp_path / "in.json"
            p.write_text(text)
            return p
        return _write

    @pytest.mark.parametrize("text", [
        "{not json",
        '{"ring": "QQ", "variables": ["x"], "relations": [], "colour": 1}',
        '{"ring": "QQ", "variables": ["x"], "relations": ["x^^2"]}',
        '{"ring": "QQ", "variables": ["x"], "relations": ["y"]}',
        '{"ring": "Q", "variables": ["x"]}',
        '[1, 2]',
    ])
    def test_parse_errors(self, write, text):
        assert run("jet", write(text), "-m", 1)[0] == 2

    def test_missing_file(self, tmp_path):
        assert run("jet", tmp_path / "nope.json", "-m", 1)[0] == 2

    @pytest.mark.parametrize("argv", [
        ("jet", CUSP, "-m", -1),
        ("count", CUSP, "--q", 4),
        ("fiber", CUSP, "-m", 1, "--fiber", "x=1,y=0"),
        ("fiber", CUSP, "-m", 1, "--fiber", "x"),
        ("induced", DATA / "double_point_f2.json", "--map", "x -> x + 1"),
        ("orbits", CUSP, "--q", 3, "-m", 1, "--fiber", "x=0"),
    ])
    def test_semantic_errors(self, argv):
        assert run(*argv)[0] == 3

    def test_budget(self):
        code, data = structured("count", PLANE, "--q", 5, "-m", 2, "--budget", 1000)
        assert code == 4 and data["kind"] == "budget" and data["partial_points"] >= 0

    def test_decreasing_truncation_levels(self, write):
        p = write('{"ring": {"Fp": 2}, "variables": ["x"], "relations": ["x^2 - x"]}')
        assert run("verify", "truncation", p, "--q", 2, "--i", 2, "--j", 1)[0] == 3

    def test_argparse_usage(self):
        with pytest.raises(SystemExit) as err:
            main(["jet"])
        assert err.value.code == 2


def test_fail_exit_code(monkeypatch):
    import hsjet.cli as cli
    from hsjet.verdict import Verdict

    monkeypatch.setattr(cli, "desideratum_check", lambda *a, **k: Verdict(False, "forced", {}))
    assert run("verify", "desideratum", CUSP, "--q", 2)[0] == 1


def test_byte_identical_runs():
    argv = [sys.executable, "-m", "hsjet", "orbits", str(CUSP), "--q", "3", "-m", "2", "--fiber", "x=0,y=0",
            "--format", "structured"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["orbit_count"] == 17
