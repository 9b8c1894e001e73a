"""Heuristic stabilization scanner for jump names.

A row is declared stable from column ``B`` when it is constant on
``[B, 2B+64]``.  This is a debugging aid: a finite scan can never certify a
limit, so reports are labeled heuristic.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

from .kernel import Sequence, pair

SLACK = 64


@dataclass
class RowScan:
    row: int
    bound: Optional[int]  # None: no bound found within the scan
    value: Optional[int]
    window: int  # length of the constant stretch from bound to the scan limit


@dataclass
class ScanReport:
    rows: list = field(default_factory=list)
    max_column: int = 0
    denotation: Optional[bool] = None
    heuristic: bool = True

    def to_dict(self):
        return asdict(self)


def scan_row(q: Sequence, n: int, max_column: int) -> RowScan:
    values: list[int] = []
    last_change = 0  # last column c with values[c] != values[c-1]

    def extend(upto):
        nonlocal last_change
        while len(values) <= upto:
            c = len(values)
            v = q.at(pair(n, c))
            if values and v != values[-1]:
                last_change = c
            values.append(v)

    B = 0
    while 2 * B + SLACK <= max_column:
        extend(2 * B + SLACK)
        if last_change <= B:
            # constant on [B, 2B+64]; report the full constant stretch
            extend(max_column)
            if last_change <= B:
                return RowScan(n, B, values[B], max_column - B + 1)
            B = last_change
            continue
        B = max(B + 1, last_change)
    return RowScan(n, None, None, 0)


def scan(q: Sequence, rows: int = 8, max_column: int = 1 << 10) -> ScanReport:
    """Scan rows ``0 .. rows-1``.  The denotation is top when some row is stable
    at a nonzero value, bottom when every row is stable at 0, else unknown."""
    report = ScanReport(max_column=max_column)
    for n in range(rows):
        report.rows.append(scan_row(q, n, max_column))
    if any(r.bound is not None and r.value for r in report.rows):
        report.denotation = True
    elif all(r.bound is not None for r in report.rows):
        report.denotation = False
    return report


def limit_prefix(q: Sequence, rows: int, max_column: int) -> list[Optional[int]]:
    """Estimated row limits (``None`` where no bound was found)."""
    return [scan_row(q, n, max_column).value for n in range(rows)]
