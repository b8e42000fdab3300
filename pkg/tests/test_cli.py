import json

import pytest

import circumlab.cli as cli
import circumlab.interp as interp_mod
from circumlab.mesh import gen_uniform, write_mesh


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestTriangleCommand:
    def test_needle_report(self, capsys):
        code, out = run(capsys, "triangle", "--needle", "0.5", "1.5")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == "circumlab/1"
        assert doc["results"]["metrics"]["R_K"] == pytest.approx(0.265165, abs=5e-7)

    def test_vertices_report(self, capsys):
        code, out = run(capsys, "triangle", "0,0", "1,0", "0,1")
        doc = json.loads(out)
        m = doc["results"]["metrics"]
        assert m["C_K"] == pytest.approx(0.491596, abs=5e-7)
        assert m["C_K"] < m["R_K"]
        assert code == 0

    def test_collinear_exit_3(self, capsys):
        code, _ = run(capsys, "triangle", "0,0", "1,0", "2,0")
        assert code == 3

    def test_bad_vertex_exit_2(self, capsys):
        code, _ = run(capsys, "triangle", "0,0", "1,0")
        assert code == 2
        code, _ = run(capsys, "triangle", "0,0", "1,0", "zero,one")
        assert code == 2


class TestInterpCommand:
    def test_needle_study_writes_reports(self, capsys, tmp_path):
        code, out = run(
            capsys, "interp", "--needle-study", "1.5", "--field", "sinsin",
            "--p", "2", "--levels", "4", "--out", str(tmp_path),
        )
        assert code == 0
        csv = (tmp_path / "interp.csv").read_text().splitlines()
        assert csv[0].split(",") == list(interp_mod.NEEDLE_CSV_COLUMNS)
        assert len(csv) == 5
        doc = json.loads((tmp_path / "interp.json").read_text())
        ratios = [row["ratio_1"] for row in doc["results"]["rows"]]
        assert ratios == sorted(ratios, reverse=True)

    def test_unknown_field_exit_2(self, capsys):
        code, _ = run(capsys, "interp", "--field", "nope", "0,0", "1,0", "0,1")
        assert code == 2

    def test_bound_failure_exit_1(self, capsys, monkeypatch):
        real = interp_mod.error_report

        def fail_report(*args, **kwargs):
            rep = real(*args, **kwargs)
            object.__setattr__(rep, "bound_satisfied", False)
            return rep

        monkeypatch.setattr(cli.interp, "error_report", fail_report)
        code, _ = run(capsys, "interp", "--field", "x2", "0,0", "1,0", "0,1")
        assert code == 1


class TestConstantsCommand:
    def test_ill_conditioned_exit_4(self, capsys):
        # sliver canonical triangle: the gradient Gram on the constrained
        # subspace exceeds the condition limit
        code, _ = run(
            capsys, "constants", "--kind", "B", "--degree", "8", "--",
            "-1,0", "1,0", "0,0.000001",
        )
        assert code == 4

    def test_babuska_aziz(self, capsys):
        code, out = run(capsys, "constants", "--babuska-aziz")
        assert code == 0
        doc = json.loads(out)
        assert doc["results"]["root"] == pytest.approx(0.49291, abs=5e-6)
        assert abs(doc["results"]["residual"]) <= 1e-9

    def test_estimate_with_history(self, capsys):
        code, out = run(
            capsys, "constants", "--kind", "D", "--degree", "6", "0,0", "1,0", "0,1"
        )
        assert code == 0
        doc = json.loads(out)
        hist = [h["value"] for h in doc["results"]["history"]]
        assert hist == sorted(hist, reverse=True)

    def test_audit_small_sweep(self, capsys, tmp_path):
        code, _ = run(
            capsys, "constants", "--audit", "--right", "2", "--canonical", "2",
            "--degree", "5", "--seed", "3", "--out", str(tmp_path),
        )
        assert code == 0
        lines = (tmp_path / "constants_audit.csv").read_text().splitlines()
        assert lines[0] == "label,lemma,computed,bound,pass"
        assert all(line.endswith(",1") for line in lines[1:])


class TestMeshCommand:
    def test_generate_and_check(self, capsys, tmp_path):
        code, _ = run(
            capsys, "mesh", "--family", "crisscross", "--n", "3", "--alpha", "1.5",
            "--out", str(tmp_path),
        )
        assert code == 0
        mesh_file = tmp_path / "mesh_crisscross_3.txt"
        assert mesh_file.exists()
        code, out = run(capsys, "mesh", "--check", str(mesh_file))
        assert code == 0
        assert json.loads(out)["results"]["stats"]["n_triangles"] == 3 * 6 * 4

    def test_bad_family_exit_2(self, capsys):
        code, _ = run(capsys, "mesh", "--family", "hexes")
        assert code == 2


class TestFemCommand:
    def test_study_outputs_and_determinism(self, capsys, tmp_path):
        argv = [
            "fem", "--family", "crisscross", "--alpha", "1.5", "--field", "sinsin",
            "--levels", "2", "--n0", "4", "--svg",
        ]
        code, _ = run(capsys, *argv, "--out", str(tmp_path / "a"))
        assert code == 0
        code, _ = run(capsys, *argv, "--out", str(tmp_path / "b"))
        assert code == 0
        for name in ("fem.csv", "fem.json", "fem.svg"):
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes()
        svg = (tmp_path / "a" / "fem.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg


def test_mesh_file_from_library_round_trips_through_cli(tmp_path, capsys):
    path = tmp_path / "m.txt"
    path.write_text(write_mesh(gen_uniform(2)))
    code, out = run(capsys, "mesh", "--check", str(path))
    assert code == 0
    assert json.loads(out)["results"]["stats"]["n_vertices"] == 9
