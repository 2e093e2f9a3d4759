import json
import subprocess
import sys

import numpy as np
import pytest

from photonsums.cli import main
from photonsums.linalg import haar_unitary, save_matrix


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_factorize_json(capsys):
    code, out = run(capsys, "factorize", "--haar", "4", "--seed", "7")
    assert code == 0
    data = json.loads(out.out)
    assert data["n"] == 4 and data["removed_parameter_count"] == 8
    assert data["zero_pattern"]["max_abs"] < 1e-12
    assert len(data["rotations"]) == 3


def test_factorize_is_deterministic(capsys):
    _, a = run(capsys, "factorize", "--haar", "5", "--seed", "3", "--side", "input")
    _, b = run(capsys, "factorize", "--haar", "5", "--seed", "3", "--side", "input")
    assert a.out == b.out


def test_factorize_from_file(tmp_path, capsys):
    path = tmp_path / "u.json"
    save_matrix(haar_unitary(3, 2), path)
    code, out = run(capsys, "factorize", "--matrix", str(path), "--format", "csv")
    assert code == 0
    assert out.out.splitlines()[0] == "i,j,alpha,beta,gamma"


def test_matrix_source_required(capsys):
    code, out = run(capsys, "factorize")
    assert code == 2


def test_bad_matrix_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"rows": 2, "cols": 2, "data": [[1, 0]]}')
    assert run(capsys, "factorize", "--matrix", str(path))[0] == 2


def test_rate_hom(tmp_path, capsys):
    path = tmp_path / "bs.json"
    save_matrix(np.array([[1, 1], [1, -1]]) / np.sqrt(2), path)
    code, out = run(capsys, "rate", "--matrix", str(path), "--input", "1,2", "--output", "1,2")
    assert code == 0 and abs(json.loads(out.out)["value"]) < 1e-15


def test_rate_dimension_error(capsys):
    code, _ = run(capsys, "rate", "--haar", "3", "--input", "1,2", "--output", "1,5")
    assert code == 3
    code, _ = run(capsys, "rate", "--haar", "3", "--input", "1,2", "--output", "1", "--tau", "0,0")
    assert code == 3


def test_bad_number_list(capsys):
    assert run(capsys, "rate", "--haar", "3", "--input", "1,x", "--output", "1,2")[0] == 2


def test_sumcheck(capsys):
    code, out = run(capsys, "sumcheck", "--haar", "3", "--seed", "9", "--input", "2,3")
    data = json.loads(out.out)
    assert code == 0 and data["invariant"]
    assert [t["config"] for t in data["terms"]] == [[1, 3], [2, 3]]


def test_sumcheck_both_and_input_side(capsys):
    code, out = run(capsys, "sumcheck", "--haar", "4", "--input", "2,3,4", "--method", "both")
    assert code == 0 and "sum_coset_ryser" in json.loads(out.out)
    code, out = run(capsys, "sumcheck", "--haar", "4", "--side", "input", "--output", "2,3,4",
                    "--format", "csv")
    assert code == 0 and out.out.startswith("config,rate_full,rate_coset,method")


def test_sumcheck_invariance_failure_exit(capsys):
    # a vanishing tolerance turns rounding noise into a failure
    code, out = run(capsys, "sumcheck", "--haar", "5", "--seed", "1", "--input", "2,3,4,5",
                    "--tolerance", "1e-300")
    assert code == 4 and json.loads(out.out)["invariant"] is False


def test_sumcheck_rejects_unequal_input_delays(capsys):
    code, out = run(capsys, "sumcheck", "--haar", "4", "--side", "input", "--output", "1,2,3",
                    "--tau", "0,1,0")
    assert code == 3


def test_bench(capsys):
    code, out = run(capsys, "bench", "--n-min", "4", "--n-max", "5", "--repeats", "1")
    lines = out.out.splitlines()
    assert code == 0 and lines[0] == "n,method,mean_ns,result_checksum"
    assert len(lines) == 5
    ryser, det = lines[1].split(","), lines[2].split(",")
    assert ryser[3] == det[3]


def test_bench_empty_range(capsys):
    code, out = run(capsys, "bench", "--n-min", "6", "--n-max", "5")
    assert code == 0 and out.out == "n,method,mean_ns,result_checksum\n"


def test_selftest(capsys):
    code, out = run(capsys, "selftest", "--filter", "hom")
    assert code == 0 and out.out.startswith("[PASS] hom")
    code, out = run(capsys, "selftest", "--filter", "total", "--tolerance", "1e-300")
    assert code == 1 and "[FAIL]" in out.out


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["factorize", "--side", "diagonal", "--haar", "3"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "photonsums", "bench", "--n-min", "3", "--n-max", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.count("\n") == 3
