import numpy as np
import pytest

from nmfinit.cli import main
from nmfinit.fileio import read_pgm, write_pgm
from nmfinit.dense import DenseMatrix


def write_csv(path, rows):
    path.write_text("\n".join(",".join(str(v) for v in row) for row in rows) + "\n")


@pytest.fixture
def diag_csv(tmp_path):
    path = tmp_path / "diag.csv"
    write_csv(path, [[4, 0], [0, 3]])
    return path


@pytest.fixture
def identity10_csv(tmp_path):
    path = tmp_path / "eye.csv"
    write_csv(path, np.eye(10, dtype=int).tolist())
    return path


@pytest.fixture
def random_image(tmp_path):
    rng = np.random.default_rng(99)
    path = tmp_path / "img.pgm"
    write_pgm(DenseMatrix(rng.integers(0, 256, (12, 10)).astype(float)), path)
    return path


class TestRankCommand:
    def test_identity_ten(self, identity10_csv, capsys):
        assert main(["rank", str(identity10_csv)]) == 0
        out = capsys.readouterr().out
        assert "p = 9" in out
        assert "energy ratio" in out

    def test_basic_rule_warning(self, identity10_csv, capsys):
        main(["rank", str(identity10_csv)])
        captured = capsys.readouterr()
        assert "violated" in captured.out
        assert "warning" in captured.err

    def test_threshold_flag(self, identity10_csv, capsys):
        assert main(["rank", str(identity10_csv), "--threshold", "0.45"]) == 0
        assert "p = 5" in capsys.readouterr().out


class TestSvdCommand:
    def test_prints_spectrum(self, diag_csv, capsys):
        assert main(["svd", str(diag_csv)]) == 0
        out = capsys.readouterr().out
        assert "sigma[1] = 4" in out
        assert "sigma[2] = 3" in out

    def test_writes_spectrum_csv(self, diag_csv, tmp_path, capsys):
        out_csv = tmp_path / "sigma.csv"
        assert main(["svd", str(diag_csv), "--out", str(out_csv)]) == 0
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "k,sigma"
        assert lines[1] == "1,4"


class TestRunCommand:
    def test_exact_rank_two_factorization(self, diag_csv, capsys):
        code = main(
            ["run", str(diag_csv), "--algo", "mm", "--init", "svdnmf", "--rank", "2"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "final error 0.000000" in out
        assert "p = 2" in out

    def test_trace_files_byte_identical(self, random_image, tmp_path, capsys):
        args = [
            "run", str(random_image), "--init", "random", "--seed", "11",
            "--rank", "3", "--iters", "20", "--no-timing",
        ]
        t1 = tmp_path / "t1.csv"
        t2 = tmp_path / "t2.csv"
        assert main(args + ["--trace", str(t1)]) == 0
        assert main(args + ["--trace", str(t2)]) == 0
        assert t1.read_bytes() == t2.read_bytes()
        header = t1.read_text().splitlines()[0]
        assert header == "iter,error,elapsed_ms"

    def test_csv_and_pgm_inputs_trace_identically(self, tmp_path, capsys):
        rng = np.random.default_rng(23)
        grid = rng.integers(0, 256, (8, 6)).astype(float)
        pgm = tmp_path / "m.pgm"
        write_pgm(DenseMatrix(grid), pgm)
        csv = tmp_path / "m.csv"
        write_csv(csv, read_pgm(pgm).matrix.array.astype(int).tolist())
        tp = tmp_path / "tp.csv"
        tc = tmp_path / "tc.csv"
        base = ["run", "--rank", "2", "--iters", "10", "--no-timing"]
        assert main(["run", str(pgm)] + base[1:] + ["--trace", str(tp)]) == 0
        assert main(["run", str(csv)] + base[1:] + ["--trace", str(tc)]) == 0
        assert tp.read_bytes() == tc.read_bytes()

    def test_reconstruction_output(self, diag_csv, tmp_path, capsys):
        recon = tmp_path / "recon.pgm"
        assert main(["run", str(diag_csv), "--rank", "2", "--recon", str(recon)]) == 0
        img = read_pgm(recon)
        assert img.matrix.tolist() == [[4.0, 0.0], [0.0, 3.0]]

    def test_plot_output(self, diag_csv, tmp_path, capsys):
        fig = tmp_path / "curve.png"
        assert main(["run", str(diag_csv), "--rank", "2", "--plot", str(fig)]) == 0
        assert fig.stat().st_size > 0

    def test_rank_zero_is_usage_error(self, diag_csv, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["run", str(diag_csv), "--rank", "0"])
        assert excinfo.value.code == 2

    def test_unknown_algo_is_usage_error(self, diag_csv, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["run", str(diag_csv), "--algo", "als"])
        assert excinfo.value.code == 2

    def test_missing_file_is_runtime_error(self, tmp_path, capsys):
        code = main(["run", str(tmp_path / "nope.csv")])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_negative_input_is_runtime_error(self, tmp_path, capsys):
        path = tmp_path / "neg.csv"
        write_csv(path, [[-1, 2], [3, 4]])
        assert main(["run", str(path)]) == 1

    def test_rank_exceeding_input_is_runtime_error(self, diag_csv, capsys):
        assert main(["run", str(diag_csv), "--rank", "5"]) == 1


class TestCompareCommand:
    def test_table_and_csv(self, random_image, tmp_path, capsys):
        out_csv = tmp_path / "report.csv"
        code = main(
            [
                "compare", str(random_image), "--iters", "10", "--rank", "3",
                "--seeds", "1,2", "--out", str(out_csv), "--no-timing",
            ]
        )
        assert code == 0
        table = capsys.readouterr().out
        for label in ("svdnmf", "nndsvd", "nndsvd-abs", "random(seed=1)"):
            assert label in table
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "method,p,error,elapsed_ms"
        assert len(lines) == 6  # header + 3 deterministic + 2 seeds

    def test_deterministic_outputs_byte_identical(self, random_image, tmp_path, capsys):
        paths = [tmp_path / "r1.csv", tmp_path / "r2.csv"]
        for path in paths:
            assert main(
                [
                    "compare", str(random_image), "--iters", "5", "--rank", "2",
                    "--out", str(path), "--no-timing",
                ]
            ) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_mean_flag(self, random_image, capsys):
        code = main(
            ["compare", str(random_image), "--iters", "3", "--rank", "2",
             "--seeds", "1,2,3", "--mean"]
        )
        assert code == 0
        assert "random(mean of 3)" in capsys.readouterr().out

    def test_plot_output(self, random_image, tmp_path, capsys):
        fig = tmp_path / "cmp.png"
        code = main(
            ["compare", str(random_image), "--iters", "3", "--rank", "2",
             "--plot", str(fig)]
        )
        assert code == 0
        assert fig.stat().st_size > 0


class TestThreadCap:
    def test_env_cap_propagates_to_blas_vars(self, diag_csv, capsys, monkeypatch):
        monkeypatch.delenv("OMP_NUM_THREADS", raising=False)
        monkeypatch.setenv("NMFINIT_THREADS", "1")
        assert main(["rank", str(diag_csv)]) == 0
        import os

        assert os.environ["OMP_NUM_THREADS"] == "1"

    def test_existing_settings_win(self, diag_csv, capsys, monkeypatch):
        monkeypatch.setenv("OMP_NUM_THREADS", "4")
        monkeypatch.setenv("NMFINIT_THREADS", "1")
        assert main(["rank", str(diag_csv)]) == 0
        import os

        assert os.environ["OMP_NUM_THREADS"] == "4"
