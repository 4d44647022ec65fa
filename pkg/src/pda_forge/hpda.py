"""Hierarchical placement delivery arrays.

An HPDA models a two-layer network: a server, K1 mirror sites, and K2
users behind each mirror.  It consists of a mirror placement grid Q0
(F x K1, cells star or null) and K1 user subarrays (each F x K2, cells
star or integer), with a distinguished integer set Sm, subject to:

  B1: every Q0 column has exactly Z1 stars;
  B2: every subarray is a (K2, F, Z2, |S_k1|) PDA;
  B3: every s in Sm occurs in exactly one subarray, and wherever it
      occurs at row j of subarray k1, Q0[j][k1] is a star (the mirror
      caches everything needed to serve s by itself);
  B4: if an integer occurs in two different subarrays k1 != k1' at
      (j, k2) and (j', k2'), then subarray k1 may hold an integer at
      (j', k2) only if Q0[j', k1] is a star, and symmetrically subarray
      k1' may hold an integer at (j, k2') only if Q0[j, k1'] is a star.

Transmission loads: the server sends one signal per integer outside Sm,
R1 = (|union of S_k1| - |Sm|)/F; each mirror sends one signal per integer
in its own subarray, R2 = max |S_k1| / F.

Both lift constructions take a scheme-built PDA whose columns are grouped
by block, cut it into K1 = b subarrays, mark Q0[j][k1] with a star exactly
when row j of subarray k1 is all stars, and replace the stars in those
all-star rows with fresh integers (row-major within each subarray, in
contiguous ranges starting at S).  The fresh integers form Sm, and the
surviving original integers are exactly the source PDA's alphabet, so
R1 = S/F of the source PDA.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .design import Design, lambda_s
from .pda import STAR, Pda, verify_pda
from .schemes import SchemeSpec, scheme1_construct, scheme2_construct


class HpdaError(ValueError):
    """Malformed HPDA document or failed construction precondition."""


@dataclass(frozen=True)
class Hpda:
    """Immutable hierarchical array.

    q0 is an F x K1 grid of booleans (True = star, False = null); subs
    holds K1 grids, each F x K2 with None for stars.  The per-subarray
    integer sets are always recomputed from the grids, never cached, so
    the verifier cannot be fooled by stale bookkeeping.
    """

    K1: int
    K2: int
    F: int
    Z1: int
    Z2: int
    q0: tuple    # F rows x K1 booleans
    subs: tuple  # K1 grids, each F x K2 of (None | int)
    sm: frozenset

    def sub_pda(self, k1: int) -> Pda:
        return Pda.from_rows(self.subs[k1])

    def sub_integer_sets(self) -> list:
        out = []
        for grid in self.subs:
            out.append(frozenset(cell for row in grid for cell in row
                                 if cell is not STAR))
        return out

    def positions_by_value(self) -> dict:
        """value -> list of (k1, row, col) across all subarrays."""
        out = {}
        for k1, grid in enumerate(self.subs):
            for j, row in enumerate(grid):
                for k2, cell in enumerate(row):
                    if cell is not STAR:
                        out.setdefault(cell, []).append((k1, j, k2))
        return out


@dataclass(frozen=True)
class HpdaViolation:
    condition: str  # "B1" | "B2" | "B3" | "B4" | "shape"
    subarray: int   # k1 index, or None for Q0/global conditions
    cells: tuple
    message: str


@dataclass(frozen=True)
class HpdaReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class HpdaLoads:
    R1: Fraction
    R2: Fraction

    @property
    def serial_delay(self) -> Fraction:
        return self.R1 + self.R2

    @property
    def parallel_delay(self) -> Fraction:
        return max(self.R1, self.R2)


def verify_hpda(q: Hpda) -> HpdaReport:
    """Check B1-B4 exhaustively; B2 delegates to the flat PDA verifier."""
    violations = []

    # structural consistency of the declared dimensions
    if len(q.q0) != q.F or any(len(row) != q.K1 for row in q.q0):
        violations.append(HpdaViolation(
            "shape", None, (), f"Q0 must be {q.F}x{q.K1}"))
    if len(q.subs) != q.K1:
        violations.append(HpdaViolation(
            "shape", None, (), f"expected {q.K1} subarrays, got {len(q.subs)}"))
    for k1, grid in enumerate(q.subs):
        if len(grid) != q.F or any(len(row) != q.K2 for row in grid):
            violations.append(HpdaViolation(
                "shape", k1, (), f"subarray {k1} must be {q.F}x{q.K2}"))
    if violations:
        return HpdaReport(violations=tuple(violations))

    # B1: Z1 stars per mirror column
    for k1 in range(q.K1):
        count = sum(1 for j in range(q.F) if q.q0[j][k1])
        if count != q.Z1:
            violations.append(HpdaViolation(
                "B1", None, ((None, k1),),
                f"Q0 column {k1} has {count} stars, expected Z1={q.Z1}"))

    # B2: each subarray is a (K2,F,Z2,|S_k1|) PDA
    for k1 in range(q.K1):
        report = verify_pda(q.sub_pda(k1))
        if not report.ok:
            for viol in report.violations:
                violations.append(HpdaViolation(
                    "B2", k1, viol.cells,
                    f"subarray {k1}: {viol.condition}: {viol.message}"))
        elif report.params.Z != q.Z2:
            violations.append(HpdaViolation(
                "B2", k1, (),
                f"subarray {k1} has {report.params.Z} stars per column, "
                f"expected Z2={q.Z2}"))

    by_value = q.positions_by_value()

    # B3: Sm integers live in one subarray, under mirror stars
    for s in sorted(q.sm):
        positions = by_value.get(s, [])
        subarrays = {k1 for (k1, _, _) in positions}
        if len(subarrays) != 1:
            violations.append(HpdaViolation(
                "B3", None, tuple(positions),
                f"integer {s} in Sm occurs in {len(subarrays)} subarrays, "
                "expected exactly 1"))
        for (k1, j, k2) in positions:
            if not q.q0[j][k1]:
                violations.append(HpdaViolation(
                    "B3", k1, ((k1, j, k2),),
                    f"integer {s} in Sm at subarray {k1} row {j} "
                    f"needs Q0[{j}][{k1}] to be a star"))

    # B4: cross-subarray repeats force mirror stars over integer cells
    for s in sorted(by_value):
        positions = by_value[s]
        for a in range(len(positions)):
            k1a, ja, k2a = positions[a]
            for bidx in range(a + 1, len(positions)):
                k1b, jb, k2b = positions[bidx]
                if k1a == k1b:
                    continue
                for (k1x, jx, k2x) in ((k1a, jb, k2a), (k1b, ja, k2b)):
                    if (q.subs[k1x][jx][k2x] is not STAR
                            and not q.q0[jx][k1x]):
                        violations.append(HpdaViolation(
                            "B4", k1x, ((k1a, ja, k2a), (k1b, jb, k2b),
                                        (k1x, jx, k2x)),
                            f"integer {s} repeats across subarrays {k1a} and "
                            f"{k1b}; cell ({jx},{k2x}) of subarray {k1x} is "
                            f"an integer but Q0[{jx}][{k1x}] is null"))
    return HpdaReport(violations=tuple(violations))


def hpda_loads(q: Hpda) -> HpdaLoads:
    """Exact transmission loads; requires a verified array."""
    sets = q.sub_integer_sets()
    union = frozenset().union(*sets) if sets else frozenset()
    r1 = Fraction(len(union - q.sm), q.F)
    r2 = Fraction(max(len(s) for s in sets), q.F)
    return HpdaLoads(R1=r1, R2=r2)


def _lift_by_blocks(p: Pda, K1: int) -> Hpda:
    """Cut a verified block-grouped PDA into K1 subarrays and lift it."""
    report = verify_pda(p)
    if not report.ok:
        raise HpdaError("lift requires a valid PDA")
    if not report.params.canonical_labels:
        raise HpdaError("lift requires canonical 0-based integer labels")
    if p.K % K1:
        raise HpdaError(f"cannot split {p.K} columns into {K1} subarrays")
    K2 = p.K // K1
    S = report.params.S

    star_rows = []
    for k1 in range(K1):
        lo = k1 * K2
        rows = [j for j in range(p.F)
                if all(cell is STAR for cell in p.grid[j][lo:lo + K2])]
        star_rows.append(rows)
    z1_counts = {len(rows) for rows in star_rows}
    if len(z1_counts) != 1:
        raise HpdaError("subarrays have unequal all-star row counts; "
                        "the array does not lift")
    Z1 = z1_counts.pop()
    Z2 = report.params.Z - Z1

    q0 = [[False] * K1 for _ in range(p.F)]
    subs = []
    fresh = S
    for k1 in range(K1):
        lo = k1 * K2
        grid = [list(p.grid[j][lo:lo + K2]) for j in range(p.F)]
        for j in star_rows[k1]:
            q0[j][k1] = True
            for k2 in range(K2):
                grid[j][k2] = fresh
                fresh += 1
        subs.append(tuple(tuple(row) for row in grid))
    return Hpda(K1=K1, K2=K2, F=p.F, Z1=Z1, Z2=Z2,
                q0=tuple(tuple(row) for row in q0),
                subs=tuple(subs),
                sm=frozenset(range(S, fresh)))


def hpda_from_scheme1(d: Design, i: int) -> Hpda:
    """Lift the Scheme I PDA of (d, i): one mirror per block, K2=C(k,k-i)
    users per mirror, Z1=v-k, Z2=k-i."""
    p = scheme1_construct(SchemeSpec("I", d, i))
    q = _lift_by_blocks(p, K1=d.b)
    expected = (comb(d.k, d.k - i), d.v - d.k, d.k - i)
    if (q.K2, q.Z1, q.Z2) != expected:
        raise HpdaError(f"lift produced (K2,Z1,Z2)={(q.K2, q.Z1, q.Z2)}, "
                        f"expected {expected}")
    return q


def hpda_from_scheme2(d: Design, i: int) -> Hpda:
    """Lift the Scheme II PDA of (d, i): one mirror per block, K2=C(k,i+1)
    users per mirror, Z1=C(v,i)-C(k,i), Z2=C(k,i)-(i+1)."""
    p = scheme2_construct(SchemeSpec("II", d, i))
    q = _lift_by_blocks(p, K1=d.b)
    expected = (comb(d.k, i + 1),
                comb(d.v, i) - comb(d.k, i),
                comb(d.k, i) - (i + 1))
    if (q.K2, q.Z1, q.Z2) != expected:
        raise HpdaError(f"lift produced (K2,Z1,Z2)={(q.K2, q.Z1, q.Z2)}, "
                        f"expected {expected}")
    return q


def scheme1_r2_bound(d: Design, i: int) -> Fraction:
    """Closed-form upper bound on R2 for scheme1 lifts; met with equality
    when lam=1 and i=t."""
    return Fraction(comb(d.k, i - 1) * lambda_s(d, i)
                    + (d.v - d.k) * comb(d.k, d.k - i), d.v)


def scheme2_r2_bound(d: Design, i: int) -> Fraction:
    """Closed-form upper bound on R2 for scheme2 lifts; met with equality
    when lam=1 and i=t-1."""
    return Fraction(d.k * lambda_s(d, i + 1)
                    + (comb(d.v, i) - comb(d.k, i)) * comb(d.k, i + 1),
                    comb(d.v, i))


# Serialization: {"K1","K2","F","Z1","Z2","Q0","subs","Sm"} with Q0 cells
# "*" (star) or null, subarray cells null (star) or int, Sm sorted.

def hpda_to_document(q: Hpda) -> dict:
    return {
        "K1": q.K1, "K2": q.K2, "F": q.F, "Z1": q.Z1, "Z2": q.Z2,
        "Q0": [["*" if cell else None for cell in row] for row in q.q0],
        "subs": [[list(row) for row in grid] for grid in q.subs],
        "Sm": sorted(q.sm),
    }


def hpda_from_document(doc: dict) -> Hpda:
    if not isinstance(doc, dict):
        raise HpdaError("hpda document must be a JSON object")
    for key in ("K1", "K2", "F", "Z1", "Z2", "Q0", "subs", "Sm"):
        if key not in doc:
            raise HpdaError(f"hpda document missing key {key!r}")
    q0 = []
    for j, row in enumerate(doc["Q0"]):
        cells = []
        for k1, cell in enumerate(row):
            if cell == "*":
                cells.append(True)
            elif cell is None:
                cells.append(False)
            else:
                raise HpdaError(f"Q0[{j}][{k1}] must be \"*\" or null, "
                                f"got {cell!r}")
        q0.append(tuple(cells))
    subs = tuple(tuple(tuple(row) for row in grid) for grid in doc["subs"])
    return Hpda(K1=doc["K1"], K2=doc["K2"], F=doc["F"],
                Z1=doc["Z1"], Z2=doc["Z2"],
                q0=tuple(q0), subs=subs, sm=frozenset(doc["Sm"]))


def dumps_hpda(q: Hpda) -> str:
    return json.dumps(hpda_to_document(q), indent=1) + "\n"


def save_hpda(q: Hpda, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_hpda(q))


def load_hpda(path) -> Hpda:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise HpdaError(f"{path}: invalid JSON: {exc}") from None
    return hpda_from_document(doc)
