"""PDA constructions from t-(v,k,lam) designs.

Two constructions are provided, both parameterized by a design and an
integer i.

Scheme I (1 <= i <= t).  Rows are the v points.  Columns are the pairs
(A, B) with A a block (in design order) and B a (k-i)-subset of A (in
lexicographic order).  The cell at row x, column (A, B) is a star unless
x is in A and not in B, in which case it holds the (i-1)-subset
T = A \\ (B + {x}), tagged with alpha = the number of times T has already
appeared in row x scanning columns left to right.  The tagged subsets are
relabeled to integers

    (alpha - 1) * C(v, i-1) + subset_rank(T)

which yields exactly the values 1..S with S = C(v, i-1) * lambda_i.  The
result is a (b*C(k,i), v, v-i, C(v,i-1)*lambda_i) PDA in which every
integer occurs exactly v-i+1 times.

Scheme II (1 <= i <= t-1).  Rows are the i-subsets X of points in
lexicographic order; columns are the pairs (A, Y) with Y an (i+1)-subset
of A.  The cell at row X, column (A, Y) is a star unless X is contained
in Y, in which case it holds the single point Y \\ X tagged with its
occurrence count alpha in row X, relabeled to (alpha - 1) * v +
subset_rank(Y \\ X).  The result is a (b*C(k,i+1), C(v,i), C(v,i)-(i+1),
v*lambda_{i+1}) PDA in which every integer occurs exactly C(v-1,i) times,
and every row has the same number of stars, so the transpose is again a
PDA.

Construction output is normalized to the canonical 0-based alphabet by
default; pass normalize=False to keep the 1-based labels the relabeling
formulas produce.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .design import Design, lambda_s
from .pda import STAR, Pda
from . import pda as pda_mod

DEFAULT_CELL_BUDGET = 10 ** 8
CELL_BUDGET_ENV = "PDA_FORGE_CELL_BUDGET"


class CellBudgetError(ValueError):
    """Construction refused: the output grid would exceed the cell budget."""


def _cell_budget(override=None) -> int:
    if override is not None:
        return override
    env = os.environ.get(CELL_BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{CELL_BUDGET_ENV} must be an integer, "
                             f"got {env!r}") from None
    return DEFAULT_CELL_BUDGET


def _check_budget(F: int, K: int, budget) -> None:
    limit = _cell_budget(budget)
    if F * K > limit:
        raise CellBudgetError(f"grid would have {F}x{K} = {F * K} cells, "
                              f"over the budget of {limit}")


@dataclass(frozen=True)
class SchemeSpec:
    scheme: str  # "I" or "II"
    design: Design
    i: int

    def __post_init__(self):
        if self.scheme not in ("I", "II"):
            raise ValueError(f"scheme must be 'I' or 'II', got {self.scheme!r}")
        hi = self.design.t if self.scheme == "I" else self.design.t - 1
        if not 1 <= self.i <= hi:
            raise ValueError(f"scheme {self.scheme} requires 1 <= i <= {hi}, "
                             f"got i={self.i}")


@dataclass(frozen=True)
class PredictedParams:
    K: int
    F: int
    Z: int
    S: int
    g: int
    M_over_N: Fraction
    R: Fraction


def subset_rank(subset, universe) -> int:
    """1-based rank of subset among same-size subsets of universe, in
    lexicographic order by element position.  Bijective onto
    [1, C(|universe|, |subset|)]."""
    order = {e: pos for pos, e in enumerate(universe)}
    missing = [e for e in subset if e not in order]
    if missing:
        raise ValueError(f"{missing[0]!r} is not in the universe")
    return _rank_of_positions(sorted(order[e] for e in subset), len(order))


def _rank_of_positions(positions, v: int) -> int:
    # positions: strictly increasing 0-based indices into the universe
    m = len(positions)
    rank = 1
    prev = -1
    for slot, e in enumerate(positions):
        for skipped in range(prev + 1, e):
            rank += comb(v - 1 - skipped, m - 1 - slot)
        prev = e
    return rank


def _exact_int(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise ValueError(f"{what} = {num}/{den} is not an integer")
    return q


def scheme1_params(spec: SchemeSpec) -> PredictedParams:
    """Closed-form parameters of Scheme I; no construction."""
    if spec.scheme != "I":
        raise ValueError("scheme1_params requires scheme='I'")
    d, i = spec.design, spec.i
    v, k, t, lam = d.v, d.k, d.t, d.lam
    K = _exact_int(lam * comb(v, t) * comb(k, i), comb(k, t), "K")
    S = comb(v, i - 1) * lambda_s(d, i)
    return PredictedParams(K=K, F=v, Z=v - i, S=S, g=v - i + 1,
                           M_over_N=Fraction(v - i, v), R=Fraction(S, v))


def scheme2_params(spec: SchemeSpec) -> PredictedParams:
    """Closed-form parameters of Scheme II; no construction."""
    if spec.scheme != "II":
        raise ValueError("scheme2_params requires scheme='II'")
    d, i = spec.design, spec.i
    v, k, t, lam = d.v, d.k, d.t, d.lam
    K = _exact_int(lam * comb(v, t) * comb(k, i + 1), comb(k, t), "K")
    F = comb(v, i)
    S = v * lambda_s(d, i + 1)
    return PredictedParams(K=K, F=F, Z=F - (i + 1), S=S, g=comb(v - 1, i),
                           M_over_N=Fraction(F - (i + 1), F), R=Fraction(S, F))


def _fmt_set(d: Design, ranks) -> str:
    return "{" + ",".join(str(d.label_of(r)) for r in ranks) + "}"


def scheme1_construct(spec: SchemeSpec, *, normalize: bool = True,
                      cell_budget: int = None) -> Pda:
    if spec.scheme != "I":
        raise ValueError("scheme1_construct requires scheme='I'")
    d, i = spec.design, spec.i
    v, k = d.v, d.k

    cols = []
    col_labels = []
    for block in d.blocks:
        for B in combinations(block, k - i):
            cols.append((block, set(B)))
            col_labels.append(f"({_fmt_set(d, block)},{_fmt_set(d, B)})")
    _check_budget(v, len(cols), cell_budget)

    base = comb(v, i - 1)
    grid = [[STAR] * len(cols) for _ in range(v)]
    seen = [{} for _ in range(v)]  # per row: (i-1)-subset -> occurrences so far
    for c, (block, B) in enumerate(cols):
        for x in block:
            if x in B:
                continue
            # block is sorted, so T comes out sorted
            T = tuple(e for e in block if e != x and e not in B)
            alpha = seen[x].get(T, 0) + 1
            seen[x][T] = alpha
            grid[x][c] = (alpha - 1) * base + _rank_of_positions(T, v)

    p = Pda.from_rows(grid,
                      row_labels=[str(d.label_of(x)) for x in range(v)],
                      col_labels=col_labels)
    return pda_mod.normalize(p) if normalize else p


def scheme2_construct(spec: SchemeSpec, *, normalize: bool = True,
                      cell_budget: int = None) -> Pda:
    if spec.scheme != "II":
        raise ValueError("scheme2_construct requires scheme='II'")
    d, i = spec.design, spec.i
    v = d.v

    rows = list(combinations(range(v), i))
    row_index = {X: j for j, X in enumerate(rows)}
    cols = []
    col_labels = []
    for block in d.blocks:
        for Y in combinations(block, i + 1):
            cols.append(Y)
            col_labels.append(f"({_fmt_set(d, block)},{_fmt_set(d, Y)})")
    _check_budget(len(rows), len(cols), cell_budget)

    grid = [[STAR] * len(cols) for _ in range(len(rows))]
    seen = [{} for _ in rows]  # per row: left-out point y -> occurrences
    for c, Y in enumerate(cols):
        for y in Y:
            X = tuple(e for e in Y if e != y)
            j = row_index[X]
            alpha = seen[j].get(y, 0) + 1
            seen[j][y] = alpha
            # subset_rank of the singleton {y} is y+1
            grid[j][c] = (alpha - 1) * v + y + 1

    p = Pda.from_rows(grid,
                      row_labels=[_fmt_set(d, X) for X in rows],
                      col_labels=col_labels)
    return pda_mod.normalize(p) if normalize else p


def construct(spec: SchemeSpec, *, normalize: bool = True,
              cell_budget: int = None) -> Pda:
    """Dispatch to the construction named by spec.scheme."""
    fn = scheme1_construct if spec.scheme == "I" else scheme2_construct
    return fn(spec, normalize=normalize, cell_budget=cell_budget)


def predicted_params(spec: SchemeSpec) -> PredictedParams:
    fn = scheme1_params if spec.scheme == "I" else scheme2_params
    return fn(spec)
