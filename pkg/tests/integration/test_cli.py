"""End-to-end tests for the fastcp command line."""

import numpy as np
import pandas as pd
import pytest

from fastcp.bench.harness import CSV_COLUMNS
from fastcp.bench.problems import generate_problem, synthetic_problem
from fastcp.interface.cli.main import build_parser, main
from fastcp.io.kruskal_io import read_kruskal
from fastcp.io.tensor_io import write_tensor


@pytest.fixture
def tensor_file(tmp_path):
    y, _, _ = synthetic_problem([4, 5, 3], 2, seed=0)
    return write_tensor(tmp_path / "y.tns", y)


class TestParser:
    def test_subcommand_required(self) -> None:
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_unknown_algorithm(self, tensor_file) -> None:
        with pytest.raises(SystemExit):
            main(["decompose", "--input", str(tensor_file), "--rank", "2", "--algo", "cg"])


class TestBench:
    def test_single_cell_csv(self, capsys) -> None:
        code = main(
            ["bench", "--dims", "4,4,4", "--rank", "2", "--iters", "2", "--reps", "1",
             "--format", "csv"]
        )
        out = capsys.readouterr().out
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("3,4x4x4,2,2,1,")

    def test_writes_out_file(self, tmp_path, capsys) -> None:
        out = tmp_path / "bench.csv"
        code = main(
            ["bench", "--dims", "3,5", "--rank", "1", "--iters", "1", "--reps", "1",
             "--format", "csv", "--out", str(out), "--match-order"]
        )
        assert code == 0
        assert "Wrote 1 records" in capsys.readouterr().out
        frame = pd.read_csv(out)
        assert frame.loc[0, "status"] == "ok"
        assert frame.loc[0, "factor_diff"] < 1e-8

    def test_bad_dims(self, capsys) -> None:
        assert main(["bench", "--dims", "4,x,4"]) == 1
        assert "Error:" in capsys.readouterr().err

    def test_bad_algos(self, capsys) -> None:
        assert main(["bench", "--dims", "4,4", "--algos", "als-fast,als-fast"]) == 1
        assert "Error:" in capsys.readouterr().err


class TestDecompose:
    def test_writes_factors_and_trace(self, tmp_path, tensor_file, capsys) -> None:
        factors = tmp_path / "a.krus"
        trace = tmp_path / "trace.csv"
        code = main(
            ["decompose", "--input", str(tensor_file), "--rank", "2", "--iters", "30",
             "--out", str(factors), "--trace", str(trace)]
        )
        assert code == 0
        assert "als-fast: 30 sweeps" in capsys.readouterr().out
        model = read_kruskal(factors)
        assert model.dims == (4, 5, 3)
        frame = pd.read_csv(trace)
        assert list(frame["iteration"]) == list(range(1, 31))
        costs = frame["cost"].to_numpy()
        assert np.all(np.diff(costs) <= 1e-9 * costs[:-1] + 1e-20)

    def test_tolerance_reports_convergence(self, tmp_path, capsys) -> None:
        y, _ = generate_problem([4, 5, 3], 2, seed=1)
        path = write_tensor(tmp_path / "noise.tnb", y, binary=True)
        code = main(
            ["decompose", "--input", str(path), "--rank", "2", "--iters", "500",
             "--tol", "1e-4", "--algo", "als-direct"]
        )
        assert code == 0
        assert "(converged)" in capsys.readouterr().out

    def test_missing_input(self, tmp_path, capsys) -> None:
        assert main(["decompose", "--input", str(tmp_path / "none.tns"), "--rank", "1"]) == 1
        assert "Error:" in capsys.readouterr().err

    def test_malformed_input(self, tmp_path, capsys) -> None:
        bad = tmp_path / "bad.tns"
        bad.write_text("TDNS 2 2 2 1 2 3")
        assert main(["decompose", "--input", str(bad), "--rank", "1"]) == 1
        assert "end of file" in capsys.readouterr().err

    def test_oversized_header(self, tmp_path, capsys) -> None:
        bad = tmp_path / "huge.tns"
        bad.write_text("TDNS 3 100000 100000 100000\n1 2 3\n")
        assert main(["decompose", "--input", str(bad), "--rank", "1"]) == 1
        assert "declares" in capsys.readouterr().err


class TestGradCheck:
    def test_passes(self, capsys) -> None:
        code = main(["gradcheck", "--dims", "2,3,4", "--rank", "2", "--trials", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert "All 2 trials passed" in out
