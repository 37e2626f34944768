"""File formats: banks, signals, simulation outputs and CSV cost reports.

Bank files come in two flavours, detected from content:

* JSON ``{"filters": [[1, -1, ...], ...]}``
* text, one filter per line, ``+`` and ``-`` per tap

Signal files hold one decimal integer per line.  All writers go through
:func:`atomic_write_text` (temp file in the target directory, then rename).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import FilterBank, validate_bank
from .errors import BadFormat, NonUnitCoefficient, WriteFailure

CSV_COLUMNS = (
    "G", "mode", "inner_macs", "outer_macs", "outer_adds",
    "total_macs", "total_ops", "feasible", "ratio",
)


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise WriteFailure(f"cannot write {path}: {exc}") from exc


def parse_bank(text: str) -> FilterBank:
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
            rows = doc["filters"]
        except (ValueError, KeyError, TypeError) as exc:
            raise BadFormat(f"bad JSON bank: {exc}") from exc
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise BadFormat('"filters" must be a list of lists')
        return validate_bank(rows)
    rows = []
    for k, line in enumerate((ln.strip() for ln in stripped.splitlines() if ln.strip()), start=1):
        row = []
        for m, ch in enumerate(line):
            if ch == "+":
                row.append(1)
            elif ch == "-":
                row.append(-1)
            else:
                raise NonUnitCoefficient(k, m, ch)
        rows.append(row)
    return validate_bank(rows)


def bank_to_text(bank: FilterBank) -> str:
    return "".join(
        "".join("+" if c > 0 else "-" for c in row) + "\n" for row in bank.coefficients.tolist()
    )


def bank_to_json(bank: FilterBank) -> str:
    return json.dumps({"filters": bank.tolist()}) + "\n"


def read_bank(path) -> FilterBank:
    return parse_bank(Path(path).read_text())


def write_bank(bank: FilterBank, path) -> None:
    text = bank_to_json(bank) if str(path).endswith(".json") else bank_to_text(bank)
    atomic_write_text(path, text)


def parse_signal(text: str) -> np.ndarray:
    values = []
    for i, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(int(line))
        except ValueError:
            raise BadFormat(f"line {i}: {line!r} is not an integer") from None
    return np.array(values, dtype=np.int64)


def read_signal(path) -> np.ndarray:
    return parse_signal(Path(path).read_text())


def signal_to_text(samples) -> str:
    return "".join(f"{int(v)}\n" for v in np.asarray(samples).tolist())


def outputs_to_text(outputs: np.ndarray) -> str:
    """One line per time step, the K filter outputs comma-separated."""
    return "".join(",".join(str(v) for v in row) + "\n" for row in np.asarray(outputs).T.tolist())


def _num(v):
    if isinstance(v, (int, np.integer)) or float(v).is_integer():
        return int(v)
    return v


def curve_rows(result) -> list[dict]:
    rows = []
    for p in result.curve:
        r = p.report
        rows.append({
            "G": _num(p.G),
            "mode": result.mode.value,
            "inner_macs": _num(r.inner_macs),
            "outer_macs": _num(r.outer_macs),
            "outer_adds": _num(r.outer_adds),
            "total_macs": _num(r.total_macs),
            "total_ops": _num(r.total_ops),
            "feasible": int(p.feasible),
            "ratio": format(p.ratio, ".6g"),
        })
    return rows


def curve_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(curve_rows(result))
    return buf.getvalue()
