"""
运行报告

文本格式（每行一条记录）：

    # submatrix-report schema=1
    command=invroot matrix_id=a.mtx n=1024 density=0.05 p=1 ... phase.solve=12.5

- 首行为带版本号的注释头，其余以 # 开头的行是注释
- 字段之间以空格分隔，键值之间以 = 连接
- 浮点数用 repr 输出，可无损解析；值为 None 的字段省略
- 字符串做百分号编码，不含空格与 =
"""

from __future__ import annotations

import csv
import logging
import math
import statistics
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any
from urllib.parse import quote, unquote

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.errors import ParseError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
HEADER = f"# submatrix-report schema={SCHEMA_VERSION}"
PHASE_PREFIX = "phase."


class RunReport(BaseModel):
    """一次运行（或一组重复运行）的测量结果，时间单位为毫秒"""

    model_config = ConfigDict(extra="forbid")

    command: str
    matrix_id: str
    n: int = Field(ge=0)
    density: float = Field(ge=0.0)
    p: int = Field(ge=1)
    kernel: str | None = None
    eig_solver: str | None = None
    strategy: str = "static"
    workers: int = Field(default=1, ge=1)
    repeats: int = Field(default=1, ge=1)
    wall_time_ms: float = Field(ge=0.0)
    wall_time_min_ms: float | None = Field(default=None, ge=0.0)
    wall_time_max_ms: float | None = Field(default=None, ge=0.0)
    phase_times: dict[str, float] = Field(default_factory=dict)
    residual_norm: float | None = None
    max_submatrix_dim: int = Field(default=0, ge=0)
    arrowhead_columns: int = Field(default=0, ge=0)
    warnings: int = Field(default=0, ge=0)
    speedup: float | None = None
    dense_baseline_ms: float | None = Field(default=None, ge=0.0)
    kappa: float | None = None
    kappa_est: float | None = None
    preconditioner: str | None = None
    iterations: int | None = None
    converged: bool | None = None
    oracle_max_abs_diff: float | None = None

    def flat(self) -> dict[str, Any]:
        """展开 phase_times，去掉 None 字段"""
        out: dict[str, Any] = {}
        for key, value in self.model_dump().items():
            if key == "phase_times":
                for phase, ms in value.items():
                    out[f"{PHASE_PREFIX}{phase}"] = ms
            elif value is not None:
                out[key] = value
        return out


def summarize_times(samples_ms: Sequence[float]) -> dict[str, float]:
    """重复测量的 min / median / max"""
    if not samples_ms:
        raise ValueError("没有测量数据")
    return {
        "wall_time_ms": float(statistics.median(samples_ms)),
        "wall_time_min_ms": float(min(samples_ms)),
        "wall_time_max_ms": float(max(samples_ms)),
    }


def _format_value(value: Any, precision: int) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if precision >= 17 or not math.isfinite(value):
            return repr(value)
        return format(value, f".{precision}g")
    return quote(str(value), safe="/:._-+,()")


def dump_report(report: RunReport, precision: int = 17) -> str:
    return " ".join(f"{k}={_format_value(v, precision)}" for k, v in report.flat().items())


def dump_reports(
    reports: Iterable[RunReport], precision: int = 17, comments: Iterable[str] = ()
) -> str:
    """输出完整报告文本（含首行），comments 作为 # 注释行写在首行之后"""
    notes = (f"# {' '.join(c.split())}" for c in comments)
    lines = [HEADER, *notes, *(dump_report(r, precision) for r in reports)]
    return "\n".join(lines) + "\n"


def _parse_line(line: str, lineno: int) -> RunReport:
    fields: dict[str, Any] = {}
    phases: dict[str, str] = {}
    for token in line.split():
        key, sep, raw = token.partition("=")
        if not sep or not key:
            raise ParseError(f"无法解析字段 {token!r}", line=lineno)
        value = unquote(raw)
        if key.startswith(PHASE_PREFIX):
            phases[key[len(PHASE_PREFIX) :]] = value
        elif key in fields:
            raise ParseError(f"重复字段 {key}", line=lineno)
        else:
            fields[key] = value
    if phases:
        fields["phase_times"] = phases
    try:
        return RunReport.model_validate(fields)
    except ValidationError as e:
        raise ParseError(f"记录无效: {e.errors()[0]['msg']}", line=lineno) from e


def parse_reports(text: str) -> list[RunReport]:
    """
    解析报告文本

    Raises:
        ParseError: 缺少或不支持的首行、字段无法解析
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ParseError(f"首行应为 {HEADER!r}", line=1)
    reports = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        reports.append(_parse_line(line, lineno))
    return reports


def write_reports(
    reports: Iterable[RunReport],
    path: str | Path,
    precision: int = 17,
    comments: Iterable[str] = (),
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_reports(reports, precision, comments), encoding="utf-8")
    return path


def read_reports(path: str | Path) -> list[RunReport]:
    return parse_reports(Path(path).read_text(encoding="utf-8"))


def export_reports_csv(reports: Sequence[RunReport], filepath: str | Path) -> bool:
    """
    导出报告到 CSV（列为所有记录中出现过的字段）

    Returns:
        bool: 导出成功返回 True，失败返回 False
    """
    try:
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        rows = [r.flat() for r in reports]
        fieldnames: list[str] = []
        for row in rows:
            fieldnames.extend(k for k in row if k not in fieldnames)
        with open(filepath, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        return True
    except (OSError, csv.Error) as e:
        logger.warning(f"导出报告到CSV失败: {e}")
        return False
