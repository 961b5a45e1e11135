"""
Aggregation of run reports into shifted-geometric-mean tables
"""

import csv
import logging
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
from scipy.stats import gmean

from fixprop.models.report import RunReport

from .config import BEST_LABEL, GAP_CAP_PERCENT, GAP_SHIFT, TIME_SHIFT
from .models import AggregateRow

logger = logging.getLogger(__name__)

CSV_HEADER = ["label", "runs", "found", "sgm_gap", "sgm_time"]


def shifted_geomean(values: Iterable[float], shift: float = 1.0) -> Optional[float]:
    """
    exp(mean(log(v + shift))) - shift

    Returns None for an empty input.

    Raises:
        ValueError: a negative value or a non-positive shift
    """
    if not shift > 0:
        raise ValueError(f"shift must be positive, got {shift}")
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        return None
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("shifted geometric mean needs nonnegative values")
    return float(gmean(arr + shift) - shift)


def load_reports(path: Union[str, Path]) -> List[RunReport]:
    """Read a JSON-lines report file; blank lines are ignored"""
    reports = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                reports.append(RunReport.model_validate_json(line))
    return reports


def _sort_key(report: RunReport) -> Tuple:
    return (report.instance, report.permutation, report.config_label, report.seed)


def _summarize(label: str, reports: Sequence[RunReport]) -> AggregateRow:
    found = [r for r in reports if r.found]
    gaps = [min(r.gap, GAP_CAP_PERCENT) for r in found]
    times = [r.timings.total for r in found]
    return AggregateRow(
        label=label,
        runs=len(reports),
        found=len(found),
        sgm_gap=shifted_geomean(gaps, GAP_SHIFT),
        sgm_time=shifted_geomean(times, TIME_SHIFT),
    )


def _preference(report: RunReport) -> Tuple:
    if report.found:
        return (0, report.gap, report.timings.total, report.config_label, report.seed)
    return (1, 0.0, report.timings.total, report.config_label, report.seed)


def best_per_instance(reports: Iterable[RunReport]) -> List[RunReport]:
    """Best run per (instance, permutation): found first, then smallest gap, then time"""
    groups: Dict[Tuple[str, int], List[RunReport]] = defaultdict(list)
    for report in reports:
        groups[(report.instance, report.permutation)].append(report)
    return [min(groups[key], key=_preference) for key in sorted(groups)]


def aggregate_reports(reports: Iterable[RunReport]) -> List[AggregateRow]:
    """One row per config label in sorted order, then the best-of row"""
    reports = sorted(reports, key=_sort_key)
    by_label: Dict[str, List[RunReport]] = defaultdict(list)
    for report in reports:
        by_label[report.config_label].append(report)

    rows = [_summarize(label, by_label[label]) for label in sorted(by_label)]
    if reports:
        rows.append(_summarize(BEST_LABEL, best_per_instance(reports)))
    return rows


def write_aggregate_csv(rows: Sequence[AggregateRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())


def aggregate_file(report_path: Union[str, Path], csv_path: Union[str, Path]) -> List[AggregateRow]:
    """Aggregate a JSON-lines report file into a CSV table"""
    rows = aggregate_reports(load_reports(report_path))
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        write_aggregate_csv(rows, fh)
    logger.info("aggregated %d config rows into %s", len(rows), csv_path)
    return rows
