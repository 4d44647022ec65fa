"""Placement delivery arrays.

A (K,F,Z,S) placement delivery array is an F x K grid whose cells are
either a star or one of S distinct non-negative integers, subject to:

  C1: every column contains exactly Z stars;
  C2: the integer cells use S distinct values;
  C3: if two cells (j1,k1) and (j2,k2) hold the same integer, then
      (a) j1 != j2 and k1 != k2, and
      (b) cells (j1,k2) and (j2,k1) are both stars.

Stars mark packets a user caches; each shared integer names one coded
server transmission, so the delivery rate is R = S/F.

The canonical integer alphabet is 0..S-1, but published figures and the
construction formulas produce 1-based labels, so the verifier accepts any
distinct non-negative integers, reports S as the count of distinct values,
and flags non-canonical labelings; normalize() remaps to 0..S-1.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

STAR = None  # grid cell value for the star symbol


class PdaError(ValueError):
    """Malformed grid or document, or an operation's precondition failed."""


@dataclass(frozen=True)
class Pda:
    """Immutable F x K grid.  Cells are None (star) or a non-negative int."""

    grid: tuple
    row_labels: tuple = None
    col_labels: tuple = None

    def __post_init__(self):
        if not self.grid or not self.grid[0]:
            raise PdaError("grid must have at least one row and one column")
        width = len(self.grid[0])
        for j, row in enumerate(self.grid):
            if len(row) != width:
                raise PdaError(f"row {j} has {len(row)} cells, expected {width}")
            for k, cell in enumerate(row):
                if cell is STAR:
                    continue
                if not isinstance(cell, int) or isinstance(cell, bool) or cell < 0:
                    raise PdaError(f"cell ({j},{k}) must be null or a "
                                   f"non-negative integer, got {cell!r}")
        if self.row_labels is not None and len(self.row_labels) != self.F:
            raise PdaError("row_labels length must equal F")
        if self.col_labels is not None and len(self.col_labels) != self.K:
            raise PdaError("col_labels length must equal K")

    @classmethod
    def from_rows(cls, rows, row_labels=None, col_labels=None) -> "Pda":
        grid = tuple(tuple(row) for row in rows)
        rl = tuple(row_labels) if row_labels is not None else None
        cl = tuple(col_labels) if col_labels is not None else None
        return cls(grid=grid, row_labels=rl, col_labels=cl)

    @property
    def F(self) -> int:
        return len(self.grid)

    @property
    def K(self) -> int:
        return len(self.grid[0])

    def integer_values(self) -> set:
        return {cell for row in self.grid for cell in row if cell is not STAR}

    def positions_by_value(self) -> dict:
        """value -> list of (row, col), scanned row-major."""
        out = {}
        for j, row in enumerate(self.grid):
            for k, cell in enumerate(row):
                if cell is not STAR:
                    out.setdefault(cell, []).append((j, k))
        return out


@dataclass(frozen=True)
class Violation:
    condition: str  # "C1" | "C2" | "C3a" | "C3b"
    cells: tuple    # offending (row, col) coordinates
    message: str


@dataclass(frozen=True)
class PdaParams:
    K: int
    F: int
    Z: int
    S: int
    R: Fraction
    g: int = None               # present iff every integer occurs g times
    row_star_count: int = None  # present iff all rows have equal stars
    canonical_labels: bool = True  # integer values are exactly {0..S-1}


@dataclass(frozen=True)
class PdaReport:
    params: "PdaParams"  # None when violations exist
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_pda(p: Pda) -> PdaReport:
    """Check C1 and C3 and extract parameters.

    C2 cannot fail under the accept-any-labels policy: S is defined as the
    number of distinct integer values, and non-canonical labelings are
    flagged on PdaParams rather than reported as violations.
    """
    violations = []

    star_counts = [sum(1 for j in range(p.F) if p.grid[j][k] is STAR)
                   for k in range(p.K)]
    z_modal = Counter(star_counts).most_common(1)[0][0]
    for k, count in enumerate(star_counts):
        if count != z_modal:
            violations.append(Violation(
                "C1", ((None, k),),
                f"column {k} has {count} stars, expected {z_modal}"))

    by_value = p.positions_by_value()
    for value in sorted(by_value):
        positions = by_value[value]
        if len(positions) == 1:
            continue
        for (j1, k1), (j2, k2) in combinations(positions, 2):
            if j1 == j2 or k1 == k2:
                violations.append(Violation(
                    "C3a", ((j1, k1), (j2, k2)),
                    f"integer {value} repeats in the same "
                    f"{'row' if j1 == j2 else 'column'}"))
                continue
            for cross in ((j1, k2), (j2, k1)):
                if p.grid[cross[0]][cross[1]] is not STAR:
                    violations.append(Violation(
                        "C3b", ((j1, k1), (j2, k2), cross),
                        f"integer {value} at ({j1},{k1}) and ({j2},{k2}) "
                        f"requires a star at {cross}"))

    if violations:
        return PdaReport(params=None, violations=tuple(violations))

    values = set(by_value)
    s_count = len(values)
    multiplicities = {len(pos) for pos in by_value.values()}
    g = multiplicities.pop() if len(multiplicities) == 1 and by_value else None
    row_counts = {sum(1 for cell in row if cell is STAR) for row in p.grid}
    row_star = row_counts.pop() if len(row_counts) == 1 else None
    params = PdaParams(
        K=p.K, F=p.F, Z=z_modal, S=s_count,
        R=Fraction(s_count, p.F),
        g=g,
        row_star_count=row_star,
        canonical_labels=values == set(range(s_count)),
    )
    return PdaReport(params=params, violations=())


def regularity(p: Pda) -> int:
    """g if every integer occurs exactly g times, else None."""
    counts = Counter(cell for row in p.grid for cell in row if cell is not STAR)
    mults = set(counts.values())
    return mults.pop() if len(mults) == 1 and counts else None


def normalize(p: Pda) -> Pda:
    """Remap integer values onto 0..S-1 by ascending value."""
    remap = {v: i for i, v in enumerate(sorted(p.integer_values()))}
    rows = [[STAR if cell is STAR else remap[cell] for cell in row]
            for row in p.grid]
    return Pda.from_rows(rows, p.row_labels, p.col_labels)


def transpose(p: Pda) -> Pda:
    """Swap the roles of rows and columns.

    Requires a verified array whose rows all have the same star count Z';
    the result is then a PDA with F'=K, K'=F, Z'=K*Z/F and the same S.
    """
    report = verify_pda(p)
    if not report.ok:
        raise PdaError("transpose requires an array with no violations")
    if report.params.row_star_count is None:
        raise PdaError("transpose requires equal star counts in all rows")
    rows = [[p.grid[j][k] for j in range(p.F)] for k in range(p.K)]
    return Pda.from_rows(rows, row_labels=p.col_labels, col_labels=p.row_labels)


# Serialization.  The JSON document is
#   {"F": int, "K": int, "grid": [[cell...]...]}
# with null for stars; row/col labels are optional.  Serialization is
# deterministic so that serialize -> parse -> serialize is byte-identical.

def pda_to_document(p: Pda) -> dict:
    doc = {"F": p.F, "K": p.K,
           "grid": [list(row) for row in p.grid]}
    if p.row_labels is not None:
        doc["row_labels"] = list(p.row_labels)
    if p.col_labels is not None:
        doc["col_labels"] = list(p.col_labels)
    return doc


def pda_from_document(doc: dict) -> Pda:
    if not isinstance(doc, dict):
        raise PdaError("pda document must be a JSON object")
    for key in ("F", "K", "grid"):
        if key not in doc:
            raise PdaError(f"pda document missing key {key!r}")
    grid = doc["grid"]
    if not isinstance(grid, list) or not all(isinstance(r, list) for r in grid):
        raise PdaError("grid must be a list of rows")
    p = Pda.from_rows(grid,
                      row_labels=doc.get("row_labels"),
                      col_labels=doc.get("col_labels"))
    if p.F != doc["F"] or p.K != doc["K"]:
        raise PdaError(f"declared dimensions {doc['F']}x{doc['K']} do not "
                       f"match grid {p.F}x{p.K}")
    return p


def dumps_pda(p: Pda) -> str:
    return json.dumps(pda_to_document(p), indent=1) + "\n"


def save_pda(p: Pda, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_pda(p))


def load_pda(path) -> Pda:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PdaError(f"{path}: invalid JSON: {exc}") from None
    return pda_from_document(doc)


def pda_to_csv(p: Pda) -> str:
    """One CSV line per grid row, stars rendered as '*'."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in p.grid:
        writer.writerow(["*" if cell is STAR else cell for cell in row])
    return buf.getvalue()
