"""
命令行测试

每次调用都传入 --config-dir，避免读取用户目录下的配置。
"""

import numpy as np
import pytest

from cli.main import build_parser, main
from src.kernels import EigSolver
from src.sparse_core import CscMatrix, csc_from_triplets, load_matrix
from src.utils import MatrixCache, parse_reports
from conftest import make_dense_spd, make_tridiagonal


@pytest.fixture
def run_cli(config_dir, capsys):
    """运行 CLI，返回 (退出码, stdout)"""

    def _run(*argv: str) -> tuple[int, str]:
        code = main(["--config-dir", str(config_dir), *argv])
        return code, capsys.readouterr().out

    return _run


def _fields(line: str) -> dict[str, str]:
    return dict(token.split("=", 1) for token in line.split())


class TestParser:
    """参数解析测试"""

    def test_commands_registered(self):
        """测试所有子命令已注册"""
        parser = build_parser()
        for command in ("gen", "invroot", "precond", "fetch", "bench", "energy", "cache"):
            args = parser.parse_args(
                {
                    "gen": ["gen", "--n", "4", "--density", "0.5", "--out", "x"],
                    "invroot": ["invroot", "--in", "x"],
                    "precond": ["precond", "--in", "x"],
                    "fetch": ["fetch", "--group", "g", "--name", "n"],
                    "bench": ["bench", "--mode", "cores"],
                    "energy": ["energy", "--s", "s", "--p-matrix", "p", "--h", "h"],
                    "cache": ["cache", "list"],
                }[command]
            )
            assert callable(args.handler)

    def test_missing_command(self):
        """测试缺少子命令时退出码为 2"""
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args([])
        assert exc.value.code == 2

    @pytest.mark.parametrize("command", [["bench", "--mode", "cores"], ["invroot", "--in", "x"]])
    def test_eig_solver_choices(self, command):
        """测试 --eig-solver 的取值与特征分解实现一致"""
        parser = build_parser()
        for solver in EigSolver:
            assert parser.parse_args([*command, "--eig-solver", solver.value]).eig_solver == solver.value
        with pytest.raises(SystemExit) as exc:
            parser.parse_args([*command, "--eig-solver", "arpack"])
        assert exc.value.code == 2

    def test_invalid_workers(self):
        """测试非法线程数"""
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["invroot", "--in", "x", "--workers", "0"])
        assert exc.value.code == 2


class TestGen:
    """gen 命令测试"""

    def test_generates_file(self, run_cli, tmp_path):
        """测试生成矩阵文件并输出摘要"""
        out = tmp_path / "a.mtx"
        code, stdout = run_cli("gen", "--n", "100", "--density", "0.05", "--kappa", "3", "--seed", "1", "--out", str(out))
        assert code == 0
        fields = _fields(stdout.strip())
        assert fields["n"] == "100"
        assert float(fields["kappa_est"]) == pytest.approx(3.0, rel=0.05)
        a = load_matrix(out)
        assert a.n == 100
        assert a.symmetric
        assert int(fields["nnz"]) == a.nnz

    def test_infeasible(self, run_cli, tmp_path):
        """测试不可行参数退出码为 2"""
        with pytest.raises(SystemExit) as exc:
            run_cli("gen", "--n", "10", "--density", "0.05", "--out", str(tmp_path / "a.mtx"))
        assert exc.value.code == 2


class TestInvroot:
    """invroot 命令测试"""

    def test_report_to_stdout(self, run_cli, write_mtx):
        """测试报告输出到 stdout"""
        path = write_mtx(make_tridiagonal(30))
        code, stdout = run_cli("invroot", "--in", str(path), "--p", "2", "--residual", "--check")
        assert code == 0
        (report,) = parse_reports(stdout)
        assert report.command == "invroot"
        assert report.n == 30
        assert report.p == 2
        assert report.oracle_max_abs_diff == 0.0
        assert 0.0 < report.residual_norm < 1.0
        assert report.max_submatrix_dim == 3
        assert set(report.phase_times) == {"build", "solve", "assemble"}

    def test_output_independent_of_workers(self, run_cli, write_mtx, tmp_path):
        """测试输出文件与线程数和策略无关"""
        path = write_mtx(make_tridiagonal(40))
        outputs = []
        for workers, strategy in (("1", "static"), ("3", "dynamic"), ("4", "shuffled")):
            out = tmp_path / f"x{workers}.mtx"
            code, _ = run_cli(
                "invroot", "--in", str(path), "--workers", workers, "--strategy", strategy, "--out", str(out)
            )
            assert code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]

    def test_report_file(self, run_cli, write_mtx, tmp_path):
        """测试报告写入文件"""
        path = write_mtx(CscMatrix.from_dense(make_dense_spd(5), symmetric=True))
        report_path = tmp_path / "r.txt"
        code, stdout = run_cli("invroot", "--in", str(path), "--kernel", "lu", "--report", str(report_path))
        assert code == 0
        assert stdout == ""
        (report,) = parse_reports(report_path.read_text())
        assert report.kernel == "lu"

    def test_lu_requires_p1(self, run_cli, write_mtx):
        """测试 LU 核只接受 p = 1"""
        path = write_mtx(make_tridiagonal(5))
        with pytest.raises(SystemExit) as exc:
            run_cli("invroot", "--in", str(path), "--kernel", "lu", "--p", "2")
        assert exc.value.code == 2

    def test_missing_file(self, run_cli, tmp_path):
        """测试输入文件不存在"""
        code, _ = run_cli("invroot", "--in", str(tmp_path / "absent.mtx"))
        assert code == 1

    def test_nonsymmetric_input(self, run_cli, write_mtx):
        """测试非对称输入退出码为 1"""
        a = csc_from_triplets([(0, 0, 2.0), (1, 0, 1.0), (1, 1, 2.0)], 2)
        code, _ = run_cli("invroot", "--in", str(write_mtx(a)))
        assert code == 1

    def test_not_positive_definite(self, run_cli, write_mtx):
        """测试子矩阵非正定退出码为 1"""
        a = CscMatrix.from_dense(np.array([[1.0, 2.0], [2.0, 1.0]]))
        code, _ = run_cli("invroot", "--in", str(write_mtx(a)), "--p", "2")
        assert code == 1


class TestPrecond:
    """precond 命令测试"""

    def test_ilu0(self, run_cli, write_mtx):
        """测试 ILU(0) 预条件"""
        path = write_mtx(make_tridiagonal(50), "tri.mtx")
        code, stdout = run_cli("precond", "--in", str(path), "--preconditioner", "ilu0")
        assert code == 0
        fields = _fields(stdout.strip())
        assert fields["name"] == "tri"
        assert fields["preconditioner"] == "ilu0"
        assert fields["iterations"] == "1"

    def test_sm_with_report(self, run_cli, write_mtx, tmp_path):
        """测试子矩阵预条件并写报告"""
        path = write_mtx(make_tridiagonal(50))
        report_path = tmp_path / "r.txt"
        code, stdout = run_cli(
            "precond", "--in", str(path), "--preconditioner", "sm", "--name", "tri50", "--report", str(report_path)
        )
        assert code == 0
        assert _fields(stdout.strip())["name"] == "tri50"
        (report,) = parse_reports(report_path.read_text())
        assert report.preconditioner == "sm"
        assert report.converged is True
        assert report.p == 2

    def test_not_converged(self, run_cli, write_mtx):
        """测试未收敛输出 DNC"""
        path = write_mtx(make_tridiagonal(50, diag=2.0))
        code, stdout = run_cli("precond", "--in", str(path), "--maxiter", "2", "--skip-kappa")
        assert code == 0
        assert _fields(stdout.strip())["iterations"] == "DNC"

    def test_ilu0_breakdown(self, run_cli, write_mtx):
        """测试 ILU(0) 失败输出 BREAKDOWN"""
        a = csc_from_triplets([(0, 0, 1.0), (1, 0, 1.0), (0, 1, 1.0)], 2)
        code, stdout = run_cli("precond", "--in", str(write_mtx(a)), "--preconditioner", "ilu0", "--skip-kappa")
        assert code == 0
        assert _fields(stdout.strip())["iterations"] == "BREAKDOWN"


class TestEnergy:
    """energy 命令测试"""

    def test_identity_overlap(self, run_cli, write_mtx):
        """测试单位重叠矩阵误差为零"""
        s = write_mtx(CscMatrix.identity(6), "s.mtx")
        p = write_mtx(make_tridiagonal(6, diag=1.0, off=0.5), "p.mtx")
        h = write_mtx(make_tridiagonal(6, diag=-1.0, off=0.25), "h.mtx")
        code, stdout = run_cli("energy", "--s", str(s), "--p-matrix", str(p), "--h", str(h))
        assert code == 0
        values = dict(line.split("=", 1) for line in stdout.split())
        assert float(values["e_bs"]) == pytest.approx(-6.0 + 10 * 0.125)
        assert float(values["delta_rel"]) < 1e-12


class TestBench:
    """bench 命令测试"""

    def test_cores(self, run_cli, tmp_path):
        """测试 cores 模式的报告、CSV 和图"""
        csv_path = tmp_path / "b.csv"
        plot_path = tmp_path / "b.png"
        code, stdout = run_cli(
            "bench", "--mode", "cores", "--n", "200", "--density", "0.05",
            "--workers-list", "2,1", "--repeats", "2", "--baseline-dense",
            "--csv", str(csv_path), "--plot", str(plot_path),
        )
        assert code == 0
        assert "# speedup relative to workers=1" in stdout
        reports = parse_reports(stdout)
        assert [r.workers for r in reports] == [1, 2]
        assert reports[0].speedup == 1.0
        assert all(r.repeats == 2 and r.wall_time_min_ms <= r.wall_time_max_ms for r in reports)
        assert all(r.dense_baseline_ms is not None for r in reports)
        assert csv_path.exists()
        assert plot_path.stat().st_size > 0

    def test_sizes_linear_density(self, run_cli):
        """测试 sizes-linear-d 模式输出斜率"""
        code, stdout = run_cli("bench", "--mode", "sizes-linear-d", "--sizes-list", "256,512")
        assert code == 0
        reports = parse_reports(stdout)
        assert [r.n for r in reports] == [256, 512]
        assert any(line.startswith("# loglog_slope=") for line in stdout.splitlines())

    def test_error_surface(self, run_cli):
        """测试 error-surface 模式"""
        code, stdout = run_cli(
            "bench", "--mode", "error-surface", "--sizes-list", "64,128", "--kappa-list", "2,10", "--p", "2"
        )
        assert code == 0
        reports = parse_reports(stdout)
        assert len(reports) == 4
        assert {r.kappa for r in reports} == {2.0, 10.0}
        assert all(r.residual_norm is not None for r in reports)


class TestFetchAndCache:
    """fetch / cache 命令测试"""

    def test_cache_hit_without_network(self, run_cli, tmp_path, write_mtx):
        """测试缓存命中时不访问网络"""
        cache_dir = tmp_path / "ss"
        source = write_mtx(make_tridiagonal(4), "dl.mtx")
        cached = MatrixCache(cache_dir).put("HB", "tri4", "u", source)
        code, stdout = run_cli(
            "fetch", "--group", "HB", "--name", "tri4", "--cache-dir", str(cache_dir), "--base-url", "http://127.0.0.1:9"
        )
        assert code == 0
        assert stdout.strip() == str(cached)

    def test_network_error_exit_code(self, run_cli, tmp_path):
        """测试网络错误退出码为 3"""
        code, _ = run_cli(
            "fetch", "--group", "HB", "--name", "x", "--cache-dir", str(tmp_path / "ss"), "--base-url", "http://127.0.0.1:9"
        )
        assert code == 3

    def test_list_and_clear(self, run_cli, tmp_path, write_mtx):
        """测试缓存列表与清除"""
        cache_dir = tmp_path / "ss"
        MatrixCache(cache_dir).put("HB", "tri4", "u", write_mtx(make_tridiagonal(4), "dl.mtx"))
        code, stdout = run_cli("cache", "list", "--cache-dir", str(cache_dir))
        assert code == 0
        assert "name=tri4" in stdout
        assert "# entries=1" in stdout
        code, stdout = run_cli("cache", "clear", "--cache-dir", str(cache_dir))
        assert code == 0
        assert stdout.strip() == "removed=2"

    def test_default_cache_dir_from_config(self, run_cli):
        """测试默认缓存目录来自配置"""
        code, stdout = run_cli("cache", "list")
        assert code == 0
        assert stdout.strip() == "# entries=0 total_size_bytes=0"
