"""CSV input/output for mortality tables and graduation results.

Input: header ``age,qx[,ex]``, UTF-8, '.' decimal separator, ages contiguous
from 0 after sorting.  Output: one row per age with fitted values, bounds and
leave-one-out residuals, rates at 9+ significant digits, byte-deterministic.
"""

import csv
from pathlib import Path

import numpy as np

from gradkit.graduation import GraduationResult, MortalityTable


class TableIOError(ValueError):
    pass


def read_table(path, omega: int | None = None) -> MortalityTable:
    """Read a mortality CSV, optionally truncating to ages <= omega first."""
    path = Path(path)
    if not path.exists():
        raise TableIOError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TableIOError(f"{path}: empty file") from None
        header = [c.strip() for c in header]
        if header not in (["age", "qx"], ["age", "qx", "ex"]):
            raise TableIOError(
                f"{path}: header must be 'age,qx' or 'age,qx,ex', got {','.join(header)!r}"
            )
        has_ex = len(header) == 3
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise TableIOError(f"{path}: row {lineno} has {len(row)} fields, expected {len(header)}")
            try:
                age = int(row[0])
            except ValueError:
                raise TableIOError(f"{path}: row {lineno}, column 'age': not an integer: {row[0]!r}") from None
            try:
                qx = float(row[1])
            except ValueError:
                raise TableIOError(f"{path}: row {lineno}, column 'qx': not a number: {row[1]!r}") from None
            if not 0.0 <= qx <= 1.0:
                raise TableIOError(f"{path}: row {lineno}, column 'qx': rate {qx!r} outside [0, 1]")
            ex = None
            if has_ex:
                try:
                    ex = float(row[2])
                except ValueError:
                    raise TableIOError(f"{path}: row {lineno}, column 'ex': not a number: {row[2]!r}") from None
                if ex <= 0:
                    raise TableIOError(f"{path}: row {lineno}, column 'ex': exposure {ex!r} must be > 0")
            rows.append((age, qx, ex))

    if not rows:
        raise TableIOError(f"{path}: no data rows")
    rows.sort(key=lambda r: r[0])
    if omega is not None:
        rows = [r for r in rows if r[0] <= omega]
        if not rows:
            raise TableIOError(f"{path}: no ages remain after truncating at omega={omega}")
    ages = [r[0] for r in rows]
    for i, age in enumerate(ages):
        if age != i:
            if age in ages[:i]:
                raise TableIOError(f"{path}: duplicate age {age}")
            raise TableIOError(f"{path}: ages must be contiguous from 0; expected {i}, found {age}")
    qx = np.array([r[1] for r in rows])
    ex = np.array([r[2] for r in rows]) if has_ex else None
    return MortalityTable(omega=len(rows) - 1, crude_rates=qx, exposures=ex)


def _fmt_rate(v) -> str:
    return f"{float(v):.9e}"


def _fmt_exposure(v) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def write_result(result: GraduationResult, table: MortalityTable, path) -> None:
    """Write the graduation result table; unavailable columns stay empty."""
    n = table.omega + 1
    lower = result.lower if result.lower is not None else [None] * n
    upper = result.upper if result.upper is not None else [None] * n
    res = result.residuals if result.residuals is not None else [None] * n
    pres = result.prop_residuals if result.prop_residuals is not None else [None] * n
    ex = table.exposures if table.exposures is not None else [None] * n

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["age", "obsqx", "fitted", "exposed",
                         "lowerbound", "upperbound", "residual", "propresidual"])
        for x in range(n):
            writer.writerow([
                x,
                _fmt_rate(table.crude_rates[x]),
                _fmt_rate(result.fitted[x]),
                _fmt_exposure(ex[x]) if ex[x] is not None else "",
                _fmt_rate(lower[x]) if lower[x] is not None else "",
                _fmt_rate(upper[x]) if upper[x] is not None else "",
                _fmt_rate(res[x]) if res[x] is not None else "",
                _fmt_rate(pres[x]) if pres[x] is not None else "",
            ])


def read_result(path):
    """Parse a result CSV back into a dict of numpy arrays (empty cells -> nan)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        cols = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in cols:
                val = row[name]
                cols[name].append(float(val) if val != "" else np.nan)
    return {name: np.array(vals) for name, vals in cols.items()}
