"""
Results of evaluation runs and their presentation as tables

.. autosummary::
   :nosignatures:

   CellResult
   Report
   format_percentage
   render_report
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..tools.misc import write_text_atomic

CHECK_MARK = "✓"
CROSS_MARK = "✗"


@dataclass
class CellResult:
    """outcome for one model, task, and prompt mode"""

    model: str
    task: int
    mode: str
    """ str: one of `ZS`, `OS`, `ZS+SA`, and `OS+SA` """
    syntactic: bool = False
    """ bool: whether the tree parsed and linted without errors """
    passed: bool = False
    """ bool: whether the tree passed the validation of the task """
    failure_class: Optional[str] = None
    reasons: List[str] = field(default_factory=list)
    latency: Optional[float] = None
    finish_reason: Optional[str] = None
    attempt: int = 0
    """ int: the attempt whose answer was kept, counted from 1 """
    attempts: int = 0
    error: Optional[str] = None
    artifacts: Dict[str, str] = field(default_factory=dict)
    """ dict: paths of the stored artifacts relative to the output folder """

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def format_percentage(passes: int, total: int) -> str:
    """format a success rate with one decimal, rounding halves up

    Args:
        passes (int): Number of successes
        total (int): Number of trials

    Returns:
        str: e.g. `88.9%`, or `-` if there were no trials
    """
    if total == 0:
        return "-"
    value = Decimal(100 * passes) / Decimal(total)
    return f"{value.quantize(Decimal('0.1'), rounding=ROUND_HALF_UP)}%"


@dataclass
class Report:
    """all cells of an evaluation run"""

    models: List[str] = field(default_factory=list)
    tasks: List[int] = field(default_factory=list)
    columns: List[str] = field(default_factory=list)
    cells: List[CellResult] = field(default_factory=list)
    params: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    """ dict: generation parameters of each model """

    def cell(self, model: str, task: int, column: str) -> Optional[CellResult]:
        for cell in self.cells:
            if cell.model == model and cell.task == task and cell.mode == column:
                return cell
        return None

    def counts(self, model: str, column: str, kind: str = "passed") -> Tuple[int, int]:
        """number of successful cells and of all cells of a table entry

        Args:
            model (str): Label of the model
            column (str): The prompt mode
            kind (str): `syntactic` or `passed`
        """
        values = [
            getattr(cell, kind)
            for cell in self.cells
            if cell.model == model and cell.mode == column
        ]
        return sum(values), len(values)

    def mean_latency(self, model: str, column: str) -> Optional[float]:
        latencies = [
            cell.latency
            for cell in self.cells
            if cell.model == model and cell.mode == column and cell.latency is not None
        ]
        if not latencies:
            return None
        return float(np.mean(latencies))

    def summary(self) -> Dict[str, Dict[str, Dict[str, str]]]:
        result: Dict[str, Dict[str, Dict[str, str]]] = {}
        for model in self.models:
            result[model] = {}
            for column in self.columns:
                result[model][column] = {
                    kind: format_percentage(*self.counts(model, column, kind))
                    for kind in ("syntactic", "passed")
                }
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "models": self.models,
            "tasks": self.tasks,
            "columns": self.columns,
            "params": self.params,
            "summary": self.summary(),
            "cells": [cell.to_dict() for cell in self.cells],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Report:
        cells = [CellResult(**cell) for cell in data.get("cells", [])]
        return cls(
            data.get("models", []),
            data.get("tasks", []),
            data.get("columns", []),
            cells,
            data.get("params", {}),
        )

    def write(self, folder: Union[str, Path]) -> List[Path]:
        """store the markdown and the JSON rendering in a folder

        Returns:
            list: the paths of the written files
        """
        folder = Path(folder)
        paths = [folder / "report.md", folder / "report.json"]
        write_text_atomic(paths[0], render_report(self, "markdown"))
        write_text_atomic(paths[1], render_report(self, "json"))
        return paths


def _table(header: List[str], rows: List[List[str]]) -> List[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("|" + "|".join("---" for _ in header) + "|")
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return lines


def _rate_table(report: Report, kind: str) -> List[str]:
    rows = [
        [model]
        + [format_percentage(*report.counts(model, c, kind)) for c in report.columns]
        for model in report.models
    ]
    return _table(["Model"] + report.columns, rows)


def _validation_table(report: Report) -> List[str]:
    header = ["Task"]
    for model in report.models:
        header.extend(f"{model} {column}" for column in report.columns)
    rows = []
    for task in report.tasks:
        row = [str(task)]
        for model in report.models:
            for column in report.columns:
                cell = report.cell(model, task, column)
                if cell is None:
                    row.append("")
                else:
                    row.append(CHECK_MARK if cell.passed else CROSS_MARK)
        rows.append(row)
    return _table(header, rows)


def _latency_table(report: Report) -> List[str]:
    modes = [column for column in report.columns if "+" not in column]
    rows = []
    for model in report.models:
        row = [model]
        for mode in modes:
            latency = report.mean_latency(model, mode)
            row.append("-" if latency is None else f"{latency:.2f} s")
        rows.append(row)
    return _table(["Model"] + modes, rows)


def _markdown(report: Report) -> str:
    lines = ["# Evaluation report", ""]
    if report.params:
        lines.append("Generation parameters:")
        lines.append("")
        for model, params in report.params.items():
            values = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
            lines.append(f"* {model}: {values}")
        lines.append("")

    lines += ["## Syntactic correctness", ""] + _rate_table(report, "syntactic")
    lines += ["", "## Validation", ""] + _validation_table(report)
    lines += ["", "## Validation rate", ""] + _rate_table(report, "passed")
    lines += ["", "## Time", ""] + _latency_table(report)
    return "\n".join(lines) + "\n"


def render_report(report: Report, fmt: str = "markdown") -> str:
    """render a report as document

    Args:
        report (:class:`Report`): The report
        fmt (str): `markdown` for tables or `json` for the machine-readable form,
            which contains every cell with the paths to its artifacts

    Returns:
        str: the document
    """
    if fmt == "markdown":
        return _markdown(report)
    elif fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    else:
        raise ValueError(f"Unknown report format `{fmt}`")
