"""(S, pi, rho)-independence: conflict predicate, counting, greedy selection.

Two elements conflict when, in some star A_s, the sets containing both make up
more than a rho fraction of the smaller of their incidence counts.  rho is a
Fraction and every comparison is done by cross-multiplication, so there are no
floating-point tolerances anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Instance
from .errors import QuotaInvalid


@dataclass(frozen=True)
class IndependenceContext:
    S: frozenset
    stars: dict[int, tuple[int, ...]]
    rho: Fraction

    def __post_init__(self):
        seen: set[int] = set()
        for idxs in self.stars.values():
            for j in idxs:
                if j in seen:
                    raise ValueError(f"set index {j} appears in two stars")
                seen.add(j)


def _incidence(inst: Instance, idxs, x: int) -> list[int]:
    return [j for j in idxs if x in inst.family[j]]


def is_conflicting(ctx: IndependenceContext, x: int, y: int, inst: Instance) -> bool:
    """True iff some star witnesses |A_s(x) ∩ A_s(y)| > rho * min(|A_s(x)|, |A_s(y)|)."""
    for s in sorted(ctx.stars):
        ax = _incidence(inst, ctx.stars[s], x)
        ay = _incidence(inst, ctx.stars[s], y)
        both = len(set(ax) & set(ay))
        if both == 0:
            continue
        if Fraction(both) > ctx.rho * min(len(ax), len(ay)):
            return True
    return False


def count_conflicting_pairs(ctx: IndependenceContext, X, inst: Instance, k: int | None = None) -> int:
    """Number of unordered conflicting pairs within X.

    When k is given, the |X| * d * k / rho upper bound is enforced as a hard
    assertion.
    """
    xs = sorted(set(X))
    count = 0
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            if is_conflicting(ctx, xs[a], xs[b], inst):
                count += 1
    if k is not None:
        bound = Fraction(len(xs) * inst.d * k) / ctx.rho
        assert Fraction(count) <= bound, f"conflict count {count} beats the {bound} bound"
    return count


def find_independent_set(ctx: IndependenceContext, parts, quotas, inst: Instance):
    """Greedy pairwise-independent pick meeting per-part quotas.

    Parts are processed by ascending index; within a part, candidates by
    ascending conflict degree (over the union of all parts), ties by id.
    Returns the chosen ids as a sorted tuple, or None when some part runs out
    before its quota is met.

    Raises:
        QuotaInvalid: a quota is outside {1, 2} or the lists have different
            lengths.
    """
    if len(quotas) != len(parts):
        raise QuotaInvalid("one quota per part is required")
    for q in quotas:
        if q not in (1, 2):
            raise QuotaInvalid(f"quota {q} not in {{1, 2}}")
    pool = sorted({v for part in parts for v in part})
    cache: dict[tuple[int, int], bool] = {}

    def conflicting(a: int, b: int) -> bool:
        key = (a, b) if a < b else (b, a)
        if key not in cache:
            cache[key] = is_conflicting(ctx, key[0], key[1], inst)
        return cache[key]

    degree = {v: sum(1 for u in pool if u != v and conflicting(v, u)) for v in pool}
    chosen: list[int] = []
    for part, quota in zip(parts, quotas):
        need = quota
        for v in sorted(part, key=lambda v: (degree[v], v)):
            if need == 0:
                break
            if all(not conflicting(v, u) for u in chosen):
                chosen.append(v)
                need -= 1
        if need > 0:
            return None
    return tuple(sorted(chosen))
