"""Lower bounds on the integer count S of a (K,F,Z,S) PDA, and the
optimality classification built on them.

Two bounds are implemented, both in exact integer arithmetic:

  * a nested-ceiling bound: S >= sum of F-Z terms where
      term_1     = ceil((F-Z)*K / F)
      term_{j+1} = ceil((F-Z-j)/(F-j) * term_j)      for j = 1..F-Z-1,
    with a fresh ceiling applied at every level;
  * a closed-form bound: S >= ceil(K*(F-Z) / (Z+1)), together with the
    necessary condition K > (Z+1)(F-Z-1)/(F-Z) for it to be achievable
    with equality.

The nested-ceiling bound dominates the closed-form one for every
admissible (K,F,Z).  An array is classified by which bound it meets.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .pda import Pda, verify_pda


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _check_kfz(K: int, F: int, Z: int) -> None:
    if K < 1:
        raise ValueError(f"need K >= 1, got {K}")
    if not 0 < Z < F:
        raise ValueError(f"need 0 < Z < F, got Z={Z}, F={F}")


def cheng_bound(K: int, F: int, Z: int) -> int:
    """Nested-ceiling lower bound on S (the tighter of the two)."""
    _check_kfz(K, F, Z)
    term = _ceil_div((F - Z) * K, F)
    total = term
    for j in range(1, F - Z):
        term = _ceil_div((F - Z - j) * term, F - j)
        total += term
    return total


def wei_bound(K: int, F: int, Z: int) -> int:
    """Closed-form lower bound ceil(K*(F-Z)/(Z+1))."""
    _check_kfz(K, F, Z)
    return _ceil_div(K * (F - Z), Z + 1)


def wei_equality_possible(K: int, F: int, Z: int) -> bool:
    """Necessary condition for a PDA to meet wei_bound with equality:
    K > (Z+1)(F-Z-1)/(F-Z), evaluated by cross-multiplication."""
    _check_kfz(K, F, Z)
    return K * (F - Z) > (Z + 1) * (F - Z - 1)


def _smallest_divisor_at_least(n: int, lo: int) -> int:
    divisors = set()
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            divisors.add(d)
            divisors.add(n // d)
    return min(d for d in divisors if d >= lo)


@dataclass(frozen=True)
class BoundReport:
    cheng: int
    wei: int
    wei_equality_possible: bool
    classification: str  # rpda | minimal_load | optimal_regular | bound_gap
    caveat: str = None


def classify(p: Pda) -> BoundReport:
    """Classify a verified PDA against both bounds.

      rpda            S equals the closed-form bound
      minimal_load    S equals the nested-ceiling bound
      optimal_regular the array is g-regular and S is the smallest divisor
                      of K*(F-Z) that is >= the nested-ceiling bound; for a
                      g-regular array S*g = K*(F-Z), so no regular array
                      with the same (K,F,Z) can do better
      bound_gap       none of the above
    """
    report = verify_pda(p)
    if not report.ok:
        raise ValueError("classify requires an array with no violations")
    params = report.params
    K, F, Z, S = params.K, params.F, params.Z, params.S
    cheng = cheng_bound(K, F, Z)
    wei = wei_bound(K, F, Z)
    possible = wei_equality_possible(K, F, Z)

    caveat = None
    if S == wei:
        label = "rpda"
    elif S == cheng:
        label = "minimal_load"
    elif (params.g is not None
          and S == _smallest_divisor_at_least(K * (F - Z), cheng)):
        label = "optimal_regular"
        caveat = ("optimal among g-regular arrays only; a non-regular array "
                  "with smaller S is not ruled out")
    else:
        label = "bound_gap"
    return BoundReport(cheng=cheng, wei=wei, wei_equality_possible=possible,
                       classification=label, caveat=caveat)
