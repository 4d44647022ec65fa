"""Combinatorial t-(v,k,lambda) designs.

A t-(v,k,lam) design is a set of v points together with a collection of
k-subsets (blocks) such that every t-subset of points is contained in
exactly lam blocks.  The block collection may be a multiset (repeated
blocks are legal; simplicity is reported, not required).

Point labels are arbitrary (all-int or all-str) and are canonicalized to
ranks 0..v-1 by sorted label order.  Blocks are stored as sorted rank
tuples, but their ORDER is the document order and is never changed:
downstream array constructions index columns and mirror sites by block
position, so block order is part of the design's identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb


class DesignError(ValueError):
    """Malformed design document or inconsistent design parameters."""


@dataclass(frozen=True)
class Design:
    """Immutable t-(v,k,lam) design over canonical point ranks 0..v-1."""

    name: str
    v: int
    k: int
    t: int
    lam: int
    points: tuple  # original labels, sorted ascending; rank r <-> points[r]
    blocks: tuple  # tuples of ranks, each sorted; tuple order = document order

    @property
    def b(self) -> int:
        """Number of blocks."""
        return len(self.blocks)

    def label_of(self, rank: int):
        return self.points[rank]

    def rank_of(self, label) -> int:
        # points is sorted, but v is small; a linear scan keeps labels opaque
        for r, p in enumerate(self.points):
            if p == label:
                return r
        raise DesignError(f"unknown point label {label!r}")

    def block_labels(self, idx: int) -> tuple:
        """Block idx as a tuple of original labels."""
        return tuple(self.points[r] for r in self.blocks[idx])


@dataclass(frozen=True)
class DesignReport:
    valid: bool
    violations: tuple  # ((t-subset of ranks), observed count) where count != lam
    size_violations: tuple  # (block index, observed size) where size != k
    is_simple: bool
    b: int


def load_design(document: dict) -> Design:
    """Build a Design from a parsed JSON document.

    Performs structural validation only; the design axioms are checked
    separately by verify_design.
    """
    if not isinstance(document, dict):
        raise DesignError("design document must be a JSON object")
    required = ("v", "k", "t", "lambda", "points", "blocks")
    for key in required:
        if key not in document:
            raise DesignError(f"design document missing key {key!r}")
    name = document.get("name", "")
    if not isinstance(name, str):
        raise DesignError("design name must be a string")
    v, k, t, lam = (document[key] for key in ("v", "k", "t", "lambda"))
    for sym, val in (("v", v), ("k", k), ("t", t), ("lambda", lam)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise DesignError(f"design parameter {sym} must be an integer")
    if not (v > k >= t >= 1):
        raise DesignError(f"need v > k >= t >= 1, got v={v} k={k} t={t}")
    if lam < 1:
        raise DesignError(f"need lambda >= 1, got {lam}")

    raw_points = document["points"]
    if not isinstance(raw_points, list) or len(raw_points) != v:
        raise DesignError(f"points must be a list of v={v} labels")
    if len(set(raw_points)) != len(raw_points):
        raise DesignError("duplicate point labels")
    try:
        points = tuple(sorted(raw_points))
    except TypeError:
        raise DesignError("point labels must be mutually comparable "
                          "(all integers or all strings)") from None
    rank = {label: r for r, label in enumerate(points)}

    raw_blocks = document["blocks"]
    if not isinstance(raw_blocks, list):
        raise DesignError("blocks must be a list")
    blocks = []
    for idx, blk in enumerate(raw_blocks):
        if not isinstance(blk, list):
            raise DesignError(f"block {idx} must be a list of point labels")
        ranks = []
        for label in blk:
            if label not in rank:
                raise DesignError(f"block {idx}: point label {label!r} "
                                  "not in points")
            ranks.append(rank[label])
        if len(set(ranks)) != len(ranks):
            raise DesignError(f"block {idx}: duplicate point")
        blocks.append(tuple(sorted(ranks)))
    return Design(name=name, v=v, k=k, t=t, lam=lam,
                  points=points, blocks=tuple(blocks))


def design_to_document(d: Design) -> dict:
    return {
        "name": d.name,
        "v": d.v,
        "k": d.k,
        "t": d.t,
        "lambda": d.lam,
        "points": list(d.points),
        "blocks": [list(d.block_labels(i)) for i in range(d.b)],
    }


def load_design_file(path) -> Design:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            document = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DesignError(f"{path}: invalid JSON: {exc}") from None
    return load_design(document)


def verify_design(d: Design) -> DesignReport:
    """Exhaustively check the design axioms.

    Counts, for every t-subset of points, the blocks containing it; a
    design is valid iff every count equals lam and every block has size k.
    """
    block_sets = [frozenset(blk) for blk in d.blocks]
    violations = []
    for subset in combinations(range(d.v), d.t):
        wanted = set(subset)
        count = sum(1 for bs in block_sets if wanted <= bs)
        if count != d.lam:
            violations.append((subset, count))
    size_violations = [(idx, len(blk)) for idx, blk in enumerate(d.blocks)
                       if len(blk) != d.k]
    return DesignReport(
        valid=not violations and not size_violations,
        violations=tuple(violations),
        size_violations=tuple(size_violations),
        is_simple=len(set(block_sets)) == len(block_sets),
        b=d.b,
    )


def lambda_s_formula(v: int, k: int, t: int, lam: int, s: int) -> int:
    """lam * C(v-s, t-s) / C(k-s, t-s) with an exactness check."""
    if not 0 <= s <= t:
        raise ValueError(f"s must lie in [0, t={t}], got {s}")
    num = lam * comb(v - s, t - s)
    den = comb(k - s, t - s)
    q, r = divmod(num, den)
    if r:
        raise DesignError(f"lambda_{s} = {num}/{den} is not an integer; "
                          "design parameters are inconsistent")
    return q


def lambda_s(d: Design, s: int) -> int:
    """Number of blocks containing any fixed s-subset, for 0 <= s <= t.

    The count is the same for every s-subset of a valid design.
    """
    return lambda_s_formula(d.v, d.k, d.t, d.lam, s)


# Built-in catalog.  Block listings and their order are fixed; array
# constructions and regression tests depend on both.
_CATALOG_DOCS = (
    {
        "name": "fano_2_7_3_1",
        "v": 7, "k": 3, "t": 2, "lambda": 1,
        "points": [1, 2, 3, 4, 5, 6, 7],
        "blocks": [[1, 2, 7], [1, 4, 5], [1, 3, 6], [4, 6, 7],
                   [2, 5, 6], [3, 5, 7], [2, 3, 4]],
    },
    {
        "name": "des_2_6_3_2",
        "v": 6, "k": 3, "t": 2, "lambda": 2,
        "points": [1, 2, 3, 4, 5, 6],
        "blocks": [[1, 2, 4], [1, 2, 6], [1, 3, 4], [1, 3, 5], [1, 5, 6],
                   [2, 3, 5], [2, 3, 6], [2, 4, 5], [3, 4, 6], [4, 5, 6]],
    },
    {
        "name": "des_3_8_4_1",
        "v": 8, "k": 4, "t": 3, "lambda": 1,
        "points": [1, 2, 3, 4, 5, 6, 7, 8],
        "blocks": [[1, 2, 5, 6], [1, 2, 7, 8], [1, 3, 5, 7], [1, 3, 6, 8],
                   [1, 4, 5, 8], [1, 4, 6, 7], [1, 2, 3, 4], [3, 4, 5, 6],
                   [3, 4, 7, 8], [2, 4, 5, 7], [2, 4, 6, 8], [2, 3, 5, 8],
                   [2, 3, 6, 7], [5, 6, 7, 8]],
    },
)


def catalog() -> dict:
    """Built-in designs by name, in a stable order."""
    return {doc["name"]: load_design(doc) for doc in _CATALOG_DOCS}


def get_design(name: str) -> Design:
    designs = catalog()
    if name not in designs:
        known = ", ".join(designs)
        raise DesignError(f"unknown catalog design {name!r} (known: {known})")
    return designs[name]
