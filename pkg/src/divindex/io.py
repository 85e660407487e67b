"""Region CSV and weight-triplet files, group recoding specs, report output.

Region CSV layout (UTF-8, header row required)::

    unit_id[,district_id][,x,y],<group columns...>

Every column other than the unit id, the district column and ``x``/``y``
is a group count column; groups keep header order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DuplicateUnitId, InputError, NegativeCount, ParseError
from .popcore import GroupSet, Hierarchy, UnitTable, recode_groups
from .spatial import WeightMatrix

UNIT_COL = "unit_id"
COORD_COLS = ("x", "y")


@dataclass(frozen=True)
class RegionFile:
    path: Path
    table: UnitTable
    hierarchy: Hierarchy | None = None


def _number(text, line, path, what):
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", line, path) from None
    if not math.isfinite(v):
        raise ParseError(f"{what} {text!r} is not finite", line, path)
    return v


def parse_region_csv(path, district_col: str = "district_id") -> RegionFile:
    """Read a region CSV into a table (and a hierarchy if districts are given).

    Raises
    ------
    ParseError
        Malformed header or row; the message carries the line number.
    NegativeCount, DuplicateUnitId
        Subclasses of ParseError for those specific row problems.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read file: {exc}", path=path) from None
    return parse_region_text(text, district_col=district_col, path=path)


def parse_region_text(text: str, district_col: str = "district_id", path=None) -> RegionFile:
    reader = csv.reader(io.StringIO(text))
    header = None
    for row in reader:
        if any(cell.strip() for cell in row):
            header = [c.strip() for c in row]
            break
    if header is None:
        raise ParseError("file is empty", 1, path)
    header_line = reader.line_num
    if not header or header[0] != UNIT_COL:
        raise ParseError(f"first column must be {UNIT_COL!r}, got {header[0]!r}", header_line, path)
    if len(set(header)) != len(header):
        raise ParseError("duplicate column names in header", header_line, path)
    has_xy = all(c in header for c in COORD_COLS)
    if not has_xy and any(c in header for c in COORD_COLS):
        raise ParseError("coordinates need both 'x' and 'y' columns", header_line, path)
    special = {UNIT_COL, district_col} | (set(COORD_COLS) if has_xy else set())
    group_cols = [k for k, c in enumerate(header) if c not in special]
    if not group_cols:
        raise ParseError("no group count columns in header", header_line, path)
    d_idx = header.index(district_col) if district_col in header else None
    x_idx = header.index("x") if has_xy else None
    y_idx = header.index("y") if has_xy else None

    ids, counts, districts, coords = [], [], [], []
    seen = {}
    for row in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line, path)
        row = [c.strip() for c in row]
        uid = row[0]
        if not uid:
            raise ParseError("empty unit_id", line, path)
        if uid in seen:
            raise DuplicateUnitId(f"duplicate unit_id {uid!r} (first on line {seen[uid]})", line, path)
        seen[uid] = line
        vals = []
        for k in group_cols:
            v = _number(row[k], line, path, f"count for {header[k]!r}")
            if v < 0:
                raise NegativeCount(f"negative count {row[k]} for group {header[k]!r}", line, path)
            vals.append(v)
        ids.append(uid)
        counts.append(vals)
        districts.append((row[d_idx] or None) if d_idx is not None else None)
        if has_xy:
            coords.append((_number(row[x_idx], line, path, "x"), _number(row[y_idx], line, path, "y")))
    if not ids:
        raise ParseError("no data rows", header_line, path)

    have_d = [d is not None for d in districts]
    if any(have_d) and not all(have_d):
        missing = ids[have_d.index(False)]
        raise ParseError(f"unit {missing!r} has a blank district while others are assigned",
                         seen[missing], path)
    try:
        table = UnitTable(
            GroupSet(tuple(header[k] for k in group_cols)),
            tuple(ids),
            np.array(counts, dtype=float),
            district_ids=tuple(districts) if all(have_d) else None,
            coords=coords if has_xy else None,
        )
    except InputError as exc:
        raise ParseError(str(exc), path=path) from None
    hierarchy = Hierarchy.from_table(table) if table.district_ids is not None else None
    return RegionFile(Path(path) if path is not None else Path("<memory>"), table, hierarchy)


def _fmt_number(v: float) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def format_region_csv(table: UnitTable, district_col: str = "district_id") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = [UNIT_COL]
    if table.district_ids is not None:
        header.append(district_col)
    if table.coords is not None:
        header.extend(COORD_COLS)
    header.extend(table.groups.names)
    w.writerow(header)
    for i, uid in enumerate(table.unit_ids):
        row = [uid]
        if table.district_ids is not None:
            row.append(table.district_ids[i] or "")
        if table.coords is not None:
            row.extend(_fmt_number(c) for c in table.coords[i])
        row.extend(_fmt_number(c) for c in table.counts[i])
        w.writerow(row)
    return buf.getvalue()


def write_region_csv(table: UnitTable, path, district_col: str = "district_id") -> None:
    Path(path).write_text(format_region_csv(table, district_col), encoding="utf-8")


def read_weight_triplets(path, table: UnitTable) -> WeightMatrix:
    """Read ``row_unit_id,col_unit_id,weight`` rows into a weight matrix."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=path) from None
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [c.strip() for c in header] != ["row_unit_id", "col_unit_id", "weight"]:
        raise ParseError("header must be row_unit_id,col_unit_id,weight", 1, path)
    known = set(table.unit_ids)
    triplets = []
    for row in reader:
        line = reader.line_num
        if not any(c.strip() for c in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line, path)
        r, c, v = (x.strip() for x in row)
        for u in (r, c):
            if u not in known:
                raise ParseError(f"unknown unit {u!r}", line, path)
        v = _number(v, line, path, "weight")
        if v < 0:
            raise ParseError(f"negative weight {v}", line, path)
        triplets.append((r, c, v))
    return WeightMatrix.from_triplets(triplets, table.unit_ids)


def write_weight_triplets(w: WeightMatrix, path) -> None:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["row_unit_id", "col_unit_id", "weight"])
    for r, c, v in w.triplets():
        out.writerow([r, c, _fmt_number(v)])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def parse_group_spec(spec: str) -> dict[str, list[str]]:
    """Parse a group subset/merge spec.

    ``"white,black"`` keeps two groups; ``"white,nonwhite=black+hispanic+asian"``
    keeps ``white`` and sums three columns into ``nonwhite``.
    """
    mapping: dict[str, list[str]] = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" in part:
            new, src = (s.strip() for s in part.split("=", 1))
            olds = [s.strip() for s in src.split("+") if s.strip()]
        else:
            new, olds = part, [part]
        if not new or not olds:
            raise InputError(f"bad group spec entry {part!r}")
        if new in mapping:
            raise InputError(f"group {new!r} defined twice in group spec")
        mapping[new] = olds
    if not mapping:
        raise InputError("empty group spec")
    return mapping


def apply_group_spec(table: UnitTable, spec: str | None) -> UnitTable:
    if not spec:
        return table
    return recode_groups(table, parse_group_spec(spec))


def round_sig(obj, digits: int = 12):
    """Recursively round floats to ``digits`` significant digits; NaN becomes None."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return float(f"{v:.{digits}g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [round_sig(x, digits) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(x, digits) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    return json.dumps(round_sig(report), indent=2, allow_nan=False) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}" if math.isfinite(v) else ""
    return v


def format_csv_rows(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()
