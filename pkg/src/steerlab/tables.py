"""CSV-ready sweep tables and deterministic parallel evaluation.

Tables serialize numbers with the shortest round-trip decimal
representation, and campaign rows are always assembled in sample order,
so identical seeds give byte-identical files regardless of how many
worker threads computed them.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import UsageError


def format_cell(value) -> str:
    """Shortest round-trip decimal for floats, plain text otherwise."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class SweepTable:
    """Ordered rows under a fixed header, ready for CSV emission."""

    columns: tuple
    rows: list

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            if len(row) != len(self.columns):
                raise UsageError(
                    f"row width {len(row)} does not match header width {len(self.columns)}"
                )
            lines.append(",".join(format_cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_csv_text())


def ordered_map(fn, items, threads: int = 1) -> list:
    """Map ``fn`` over ``items``, returning results in input order.

    With ``threads`` > 1 the work is fanned out to a thread pool;
    results are still assembled in order, so output is independent of
    scheduling.
    """
    if threads < 1:
        raise UsageError(f"thread count must be >= 1, got {threads}")
    items = list(items)
    if threads == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
