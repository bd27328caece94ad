"""
运行报告测试
"""

import csv

import pytest

from src.errors import ParseError
from src.utils.report import (
    HEADER,
    RunReport,
    dump_report,
    dump_reports,
    export_reports_csv,
    parse_reports,
    read_reports,
    summarize_times,
    write_reports,
)


def _report(**overrides) -> RunReport:
    fields = {
        "command": "invroot",
        "matrix_id": "data/a b.mtx",
        "n": 1024,
        "density": 0.05,
        "p": 2,
        "wall_time_ms": 12.345678901234567,
        "phase_times": {"build": 1.5, "solve": 10.25},
        "workers": 4,
    }
    fields.update(overrides)
    return RunReport(**fields)


class TestDump:
    """输出格式测试"""

    def test_fields_and_phases(self):
        """测试字段与阶段耗时"""
        line = dump_report(_report(residual_norm=None, converged=True))
        tokens = dict(t.split("=", 1) for t in line.split())
        assert tokens["command"] == "invroot"
        assert tokens["matrix_id"] == "data/a%20b.mtx"
        assert tokens["phase.solve"] == "10.25"
        assert tokens["converged"] == "true"
        assert "residual_norm" not in tokens

    def test_precision(self):
        """测试浮点精度"""
        line = dump_report(_report(), precision=4)
        assert "wall_time_ms=12.35" in line.split()

    def test_header_and_comments(self):
        """测试文件头与注释行"""
        text = dump_reports([_report()], comments=["speedup relative to\nworkers=1"])
        lines = text.splitlines()
        assert lines[0] == HEADER
        assert lines[1] == "# speedup relative to workers=1"
        assert len(lines) == 3


class TestParse:
    """解析测试"""

    def test_lossless(self):
        """测试浮点数无损"""
        original = [_report(), _report(command="bench", speedup=3.25, kappa=10.0, iterations=7)]
        parsed = parse_reports(dump_reports(original, comments=["note"]))
        assert parsed == original

    def test_bad_header(self):
        """测试非法文件头"""
        with pytest.raises(ParseError) as exc:
            parse_reports("command=x\n")
        assert exc.value.line == 1

    def test_bad_token(self):
        """测试非法字段"""
        with pytest.raises(ParseError) as exc:
            parse_reports(f"{HEADER}\n\ncommand\n")
        assert exc.value.line == 3

    def test_unknown_field(self):
        """测试未知字段"""
        text = dump_reports([_report()]).rstrip("\n") + " colour=blue\n"
        with pytest.raises(ParseError):
            parse_reports(text)

    def test_duplicate_field(self):
        """测试重复字段"""
        with pytest.raises(ParseError):
            parse_reports(f"{HEADER}\ncommand=a command=b\n")

    def test_empty_body(self):
        """测试空报告"""
        assert parse_reports(f"{HEADER}\n# nothing\n") == []

    def test_file_round_trip(self, tmp_path):
        """测试文件读写"""
        path = write_reports([_report()], tmp_path / "out" / "r.txt")
        assert read_reports(path) == [_report()]


class TestSummaries:
    """重复测量与 CSV 导出"""

    def test_summarize_times(self):
        """测试耗时统计"""
        assert summarize_times([3.0, 1.0, 2.0]) == {
            "wall_time_ms": 2.0,
            "wall_time_min_ms": 1.0,
            "wall_time_max_ms": 3.0,
        }
        with pytest.raises(ValueError):
            summarize_times([])

    def test_export_csv(self, tmp_path):
        """测试导出 CSV"""
        reports = [_report(), _report(workers=8, speedup=1.9)]
        path = tmp_path / "r.csv"
        assert export_reports_csv(reports, path)
        rows = list(csv.DictReader(path.open(encoding="utf-8")))
        assert len(rows) == 2
        assert rows[1]["speedup"] == "1.9"
        assert rows[0]["speedup"] == ""
        assert rows[0]["phase.build"] == "1.5"

    def test_export_csv_failure(self, tmp_path):
        """测试导出失败返回 False"""
        blocker = tmp_path / "file"
        blocker.write_text("x")
        assert not export_reports_csv([_report()], blocker / "r.csv")
