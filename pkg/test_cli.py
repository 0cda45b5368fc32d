"""
Тесты командной строки: коды выхода, формат отчета и детерминированность
"""

import json

import numpy as np
import pytest

import main
from config import settings
from utils.middleware import EXIT_FAILED_CHECKS, EXIT_INPUT_ERROR, EXIT_OK
from utils.schemas import MatrixPayload


@pytest.fixture(autouse=True)
def no_log_files(monkeypatch):
    monkeypatch.setattr(settings, "LOG_TO_FILE", False)


def _matrix(A) -> dict:
    return MatrixPayload.from_array(np.asarray(A)).model_dump()


def _run(capsys, *argv):
    code = main.run(["--quiet", *argv])
    report = json.loads(capsys.readouterr().out)
    return code, report


def test_spectral_decompose(capsys, write_json):
    path = write_json("diag.json", _matrix(np.diag([1.0, 1.0, 2.0])))
    code, report = _run(capsys, "spectral", "decompose", "--matrix", path)
    assert code == EXIT_OK
    assert report["command"] == "spectral decompose"
    assert report["pass"] is True
    assert report["results"]["multiplicities"] == [1, 2]
    assert report["results"]["eigenvalues"] == pytest.approx([2.0, 1.0])
    assert set(report["checks"]) == set(report["residuals"]) == set(report["tolerances"])


def test_transpose_map_fails_cp_check(capsys, write_json):
    swap = np.eye(4)[[0, 2, 1, 3]]
    path = write_json("transpose.json", _matrix(swap))
    code, report = _run(capsys, "cp", "verify", "--choi", path)
    assert code == EXIT_FAILED_CHECKS
    assert report["pass"] is False
    assert report["checks"]["completely_positive"] is False
    assert report["results"]["min_choi_eigenvalue"] == pytest.approx(-1.0)
    assert report["results"]["witness"]["value"] < 0


def test_stinespring_of_kraus_map(capsys, write_json, rng):
    from services.cpmaps import random_unital_cp_map

    phi = random_unital_cp_map(2, 2, rng)
    path = write_json("map.json", {"in_dim": 2, "out_dim": 2, "kraus": [_matrix(V) for V in phi.kraus()]})
    code, report = _run(capsys, "cp", "stinespring", "--map", path)
    assert code == EXIT_OK
    assert report["results"]["rank"] == 2
    assert report["checks"]["minimality"] is True


def test_commutant_of_block_matrix(capsys, write_json):
    path = write_json("generators.json", [_matrix(np.diag([1.0, 1.0, 2.0]))])
    code, report = _run(capsys, "commutant", "compute", "--generators", path, "--with-adjoints")
    assert code == EXIT_OK
    assert report["results"]["dimension"] == 5
    assert report["results"]["irreducible"] is False


def test_group_induce_cyclic(capsys):
    code, report = _run(capsys, "group", "induce", "--group", "cyclic:4", "--subgroup", "0,2", "--phases", "0,1/2")
    assert code == EXIT_OK
    assert report["results"]["dim"] == 2
    assert report["results"]["character_inner_products"] == pytest.approx([0, 1, 0, 1], abs=1e-12)


def test_extension(capsys):
    code, report = _run(capsys, "extension", "--grid", "128", "--theta", "0.5")
    assert code == EXIT_OK
    assert (report["results"]["d_plus"], report["results"]["d_minus"]) == (1, 1)


def test_wavelet_matrix(capsys):
    code, report = _run(capsys, "wavelet", "mt-matrix", "--level", "2")
    assert code == EXIT_OK
    assert report["results"]["size"] == 8


def test_parse_error_exits_with_input_error(capsys):
    code = main.run(["spectral", "decompose"])
    captured = capsys.readouterr()
    assert code == EXIT_INPUT_ERROR
    assert "ошибка" in captured.err
    assert json.loads(captured.out)["error"]


def test_non_hermitian_input(capsys, write_json):
    path = write_json("nilpotent.json", _matrix([[0.0, 1.0], [0.0, 0.0]]))
    code, report = _run(capsys, "spectral", "decompose", "--matrix", path)
    assert code == EXIT_INPUT_ERROR
    assert report["error"]
    assert report["pass"] is False


def test_missing_file(capsys):
    code, report = _run(capsys, "spectral", "decompose", "--matrix", "/nonexistent/matrix.json")
    assert code == EXIT_INPUT_ERROR
    assert report["error"]


def test_reports_are_deterministic(capsys, write_json):
    path = write_json("diag.json", _matrix(np.diag([3.0, -1.0])))
    _, first = _run(capsys, "spectral", "decompose", "--matrix", path)
    _, second = _run(capsys, "spectral", "decompose", "--matrix", path)
    assert first["inputs_digest"] == second["inputs_digest"]
    assert first["results"] == second["results"]
    _, other = _run(capsys, "spectral", "decompose", "--matrix", path, "--method", "jacobi")
    assert other["inputs_digest"] != first["inputs_digest"]


@pytest.mark.parametrize(
    "density, field",
    [
        ({"rows": 2, "cols": 3, "data": [1, 0, 0, 0, 1, 0]}, "density_square"),
        ({"rows": 2, "cols": 2, "data": [float("nan"), 0, 0, 1]}, "density_finite"),
    ],
)
def test_gns_rejects_bad_density(capsys, write_json, density, field):
    path = write_json("state.json", {"density": density})
    code, report = _run(capsys, "gns", "construct", "--state", path)
    assert code == EXIT_INPUT_ERROR
    assert field in report["error"]
