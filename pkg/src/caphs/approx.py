"""Annotated-tuple search: the 4/3-approximation on top of the exact oracle.

The solver walks tuples (S, X_1..X_r, pi, gamma): a committed partial solution
S, disjoint candidate parts covering the undecided picks, a plurality map on
the equivalence classes of S, and bucketed coverage demands.  Tuples are
extended one element at a time; a leaf is closed either because S is complete
or through a red-blue dominating set plus a quota-respecting independent set
over the candidate parts.  Two drivers share the machinery: a full enumeration
(budgeted) and a guided descent that follows an exact solution and checks the
approximation guarantee on the way down.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from .colorweights import default_trials, random_colorings, weight_estimates
from .core import (
    Assignment,
    EquivalenceClasses,
    Instance,
    Solution,
    equivalence_classes,
    stars,
)
from .domset import BipartiteGraph, min_dominator_forced
from .errors import (
    BudgetExceeded,
    NoColoringSeparates,
    OracleInconsistent,
    PreconditionViolated,
)
from .exact import solve_exact, solve_exact_weighted
from .feasibility import check_feasible, coverage
from .independence import IndependenceContext, find_independent_set

ENUMERATE = "enumerate"
GUIDED = "guided"

# Reasons a closing attempt on an extended tuple can give up.
TAU_CLASH = "tau-clash"
NO_DOMINATOR = "no-dominator"
INDEPENDENCE_FAIL = "independence-fail"
INFEASIBLE_OR_TOO_BIG = "infeasible-or-too-big"


@dataclass(frozen=True)
class Guided:
    """Descent mode: follow a known optimum (and its assignment) downward."""

    opt: Solution
    asg: Assignment


@dataclass(frozen=True)
class SolverConfig:
    """Search constants.  None fields are derived from (k, d) by resolved().

    The theory constants are enormous (top_t = d*k^10 and so on); stress tests
    override them downward, which only ever shrinks the search space.
    """

    k: int
    rho: Fraction | None = None
    top_t: int | None = None
    small_class_threshold: int | None = None
    bucket_base: Fraction | None = None
    tuple_budget: int = 200_000
    recursion_budget: int = 20_000
    seed: int = 0
    epsilon: Fraction | None = None
    max_coloring_trials: int = 10_000

    def resolved(self, d: int, k: int | None = None) -> "SolverConfig":
        kk = int(self.k if k is None else k)
        if kk < 1:
            raise ValueError("k must be at least 1")
        if d < 1:
            raise ValueError("d must be at least 1")
        rho = self.rho if self.rho is not None else Fraction(1, kk ** 4)
        rho = Fraction(rho)
        if not 0 < rho <= 1:
            raise ValueError("rho must lie in (0, 1]")
        top_t = self.top_t if self.top_t is not None else d * kk ** 10
        thr = (
            self.small_class_threshold
            if self.small_class_threshold is not None
            else d * kk ** 11
        )
        base = (
            Fraction(self.bucket_base)
            if self.bucket_base is not None
            else 1 + Fraction(1, 3 * kk)
        )
        if base <= 1:
            raise ValueError("bucket_base must exceed 1")
        if top_t < 1 or thr < 0:
            raise ValueError("top_t must be positive and the threshold nonnegative")
        if self.tuple_budget < 0 or self.recursion_budget < 0:
            raise ValueError("budgets must be nonnegative")
        return replace(
            self,
            k=kk,
            rho=rho,
            top_t=top_t,
            small_class_threshold=thr,
            bucket_base=base,
        )


def ceil43(k: int) -> int:
    """The size target ceil(4k/3)."""
    return (4 * k + 2) // 3


def _ceil(fr: Fraction) -> int:
    return -((-fr.numerator) // fr.denominator)


_POWER_CACHE: dict[Fraction, list[Fraction]] = {}


def _powers(base: Fraction, upto: int) -> list[Fraction]:
    """Power table [base^0, base^1, ...] extended until it exceeds upto."""
    tab = _POWER_CACHE.setdefault(base, [Fraction(1)])
    while tab[-1] <= upto:
        tab.append(tab[-1] * base)
    return tab


def _rung(c: int, base) -> tuple[list[Fraction], int]:
    """(power table, largest p with base^p <= c).  The table ends above c."""
    if c < 1:
        raise ValueError("bucket values need c >= 1")
    base = Fraction(base)
    if base <= 1:
        raise ValueError("bucket base must exceed 1")
    tab = _powers(base, c)
    lo, hi = 0, len(tab) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if tab[mid] <= c:
            lo = mid
        else:
            hi = mid - 1
    return tab, lo


def bucket_value(c: int, base) -> int:
    """ceil(base^p) for the largest p with base^p <= c.  Exact arithmetic."""
    tab, p = _rung(c, base)
    return _ceil(tab[p])


def bucket_value_next(c: int, base) -> int:
    """ceil(base^(p+1)) for the same p as bucket_value: the next rung up."""
    tab, p = _rung(c, base)
    return _ceil(tab[p + 1])


def bucket_values_upto(limit: int, base) -> list[int]:
    """Distinct rung values ceil(base^p) that are <= limit, ascending."""
    if limit < 1:
        return []
    tab, _ = _rung(limit, base)
    out: list[int] = []
    for pw in tab:
        v = _ceil(pw)
        if v > limit:
            break
        if not out or out[-1] != v:
            out.append(v)
    return out


@dataclass(frozen=True)
class AnnotatedTuple:
    """(S, X_1..X_r, pi, gamma) with sparse gamma rows.

    gamma_part is keyed by (part index, class); gamma_s by (s, class).  Keys
    absent from the dicts mean zero demand.  pi maps each realized class of S
    to an element of S, including the empty class when S is nonempty.
    """

    S: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    pi: dict
    gamma_part: dict
    gamma_s: dict

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(sorted(self.S)))
        object.__setattr__(
            self, "parts", tuple(tuple(sorted(p)) for p in self.parts)
        )
        seen = set(self.S)
        for p in self.parts:
            for v in p:
                if v in seen:
                    raise ValueError("parts must be disjoint from S and each other")
                seen.add(v)
        for s in self.pi.values():
            if s not in set(self.S):
                raise ValueError("pi must map into S")

    @property
    def r(self) -> int:
        return len(self.parts)

    def gamma_of_part(self, i: int, cls: tuple[int, ...]) -> int:
        return self.gamma_part.get((i, tuple(cls)), 0)

    def gamma_of_s(self, s: int, cls: tuple[int, ...]) -> int:
        return self.gamma_s.get((s, tuple(cls)), 0)

    def star_demand(self, i: int, s: int) -> int:
        """gamma(i, s): summed demand of part i over the classes pi sends to s."""
        return sum(
            g for (j, cls), g in self.gamma_part.items() if j == i and self.pi.get(cls) == s
        )

    def total_demand(self, i: int) -> int:
        return sum(g for (j, _), g in self.gamma_part.items() if j == i)


@dataclass(frozen=True)
class InfoTuple:
    """Filtered parts with per-class counts and per-star scores.

    xprime[i] keeps the part-i candidates whose capacity and class incidence
    meet the gamma demands; n_of[(v, cls)] caps the useful incidence and
    score[(v, s)] is the residual value of v toward star s.
    """

    xprime: tuple[tuple[int, ...], ...]
    n_of: dict
    score: dict


@dataclass(frozen=True)
class ExtendedTuple:
    """Annotated tuple plus the two part-pointer maps tau1, tau2 on S."""

    base: AnnotatedTuple
    tau1: dict
    tau2: dict


@dataclass(frozen=True)
class ExtendedResult:
    solution: Solution | None
    reason: str | None = None


@dataclass(frozen=True)
class ApproxResult:
    solution: Solution
    assignment: Assignment
    weight: int


@dataclass(frozen=True)
class Expansion:
    instance: Instance
    back: dict


class _Budget:
    """Shared mutable counters for one solve call tree."""

    def __init__(self, tuples: int, recursions: int):
        self.tuples = tuples
        self.recursions = recursions

    def charge_tuple(self):
        if self.tuples <= 0:
            raise BudgetExceeded("annotated-tuple budget exhausted")
        self.tuples -= 1

    def charge_recursion(self):
        if self.recursions <= 0:
            raise BudgetExceeded("recursion budget exhausted")
        self.recursions -= 1


def _class_incidence(inst: Instance, classes: EquivalenceClasses):
    """incidence[(v, cls)] = how many sets of that class contain v."""
    inc: dict = {}
    for cls, idxs in classes.by_class.items():
        for j in idxs:
            for v in inst.family[j]:
                key = (v, cls)
                inc[key] = inc.get(key, 0) + 1
    return inc


def info_tuple(t: AnnotatedTuple, inst: Instance, cfg: SolverConfig) -> InfoTuple:
    """Filter each part by capacity and incidence; compute n(v, cls) and scores."""
    cfg = cfg.resolved(inst.d)
    classes = equivalence_classes(inst, t.S)
    realized = sorted(classes.by_class)
    inc = _class_incidence(inst, classes)
    base = cfg.bucket_base
    xprime: list[tuple[int, ...]] = []
    n_of: dict = {}
    score: dict = {}
    for i, part in enumerate(t.parts):
        demand = t.total_demand(i)
        kept = []
        for v in part:
            el = inst.element(v)
            if el.cap < demand:
                continue
            if any(
                inc.get((v, cls), 0) < t.gamma_of_part(i, cls) for cls in realized
            ):
                continue
            kept.append(v)
        kept = tuple(sorted(kept))
        xprime.append(kept)
        for v in kept:
            el = inst.element(v)
            for cls in realized:
                g = t.gamma_of_part(i, cls)
                n_of[(v, cls)] = min(_ceil(base * g), inc.get((v, cls), 0))
            for s in t.S:
                n_vs = sum(
                    n_of[(v, cls)] for cls in realized if t.pi.get(cls) == s
                )
                other = demand - t.star_demand(i, s)
                score[(v, s)] = max(0, min(n_vs, el.cap - other))
    return InfoTuple(xprime=tuple(xprime), n_of=n_of, score=score)


def candidate_set(
    e: ExtendedTuple, it: InfoTuple, cfg: SolverConfig, d: int
) -> tuple[tuple[int, ...], ...]:
    """X''_i: the whole filtered part when small, else top scorers per tau1 star."""
    cfg = cfg.resolved(d)
    t = e.base
    out = []
    for i, xp in enumerate(it.xprime):
        if len(xp) <= cfg.small_class_threshold:
            out.append(xp)
            continue
        chosen: set[int] = set()
        for s in sorted(t.S):
            if e.tau1.get(s) != i:
                continue
            ranked = sorted(xp, key=lambda v: (-it.score.get((v, s), 0), v))
            chosen.update(ranked[: cfg.top_t])
        out.append(tuple(sorted(chosen)))
    return tuple(out)


def solve_extended(
    e: ExtendedTuple, inst: Instance, cfg: SolverConfig
) -> ExtendedResult:
    """Close an extended tuple: dominate the stars, pick an independent set.

    Returns a solution only when the combined pick is flow-feasible and within
    ceil(4k/3).
    """
    cfg = cfg.resolved(inst.d)
    t = e.base
    if len(t.S) + t.r != cfg.k:
        raise ValueError("tuple arity does not match k")
    if t.r == 0:
        sol = Solution({s: 1 for s in t.S})
        asg = check_feasible(inst, sol)
        if asg is not None and sol.size() <= ceil43(cfg.k):
            return ExtendedResult(solution=sol)
        return ExtendedResult(solution=None, reason=INFEASIBLE_OR_TOO_BIG)
    for s in t.S:
        if e.tau1.get(s) is None or e.tau2.get(s) is None:
            raise ValueError("tau1/tau2 must be total on S")
        if t.r >= 2 and e.tau1[s] == e.tau2[s]:
            return ExtendedResult(solution=None, reason=TAU_CLASH)

    classes = equivalence_classes(inst, t.S)
    st = stars(classes, t.pi)
    graph = BipartiteGraph(
        reds=tuple(range(t.r)),
        blues=tuple(sorted(t.S)),
        adj={s: (e.tau1[s], e.tau2[s]) for s in t.S},
    )
    forced = frozenset(
        i for i in range(t.r) if sum(1 for s in t.S if e.tau1[s] == i) >= 2
    )
    dom = min_dominator_forced(graph, forced)
    if dom is None:
        return ExtendedResult(solution=None, reason=NO_DOMINATOR)

    it = info_tuple(t, inst, cfg)
    xpp = candidate_set(e, it, cfg, inst.d)
    ctx = IndependenceContext(S=frozenset(t.S), stars=st, rho=cfg.rho)
    quotas = tuple(2 if i in dom else 1 for i in range(t.r))
    picked = find_independent_set(ctx, xpp, quotas, inst)
    if picked is None:
        return ExtendedResult(solution=None, reason=INDEPENDENCE_FAIL)
    sol = Solution({x: 1 for x in set(t.S) | set(picked)})
    if sol.size() > ceil43(cfg.k):
        return ExtendedResult(solution=None, reason=INFEASIBLE_OR_TOO_BIG)
    asg = check_feasible(inst, sol)
    if asg is None:
        return ExtendedResult(solution=None, reason=INFEASIBLE_OR_TOO_BIG)
    return ExtendedResult(solution=sol)


def enumerate_tuples(S, parts, inst: Instance, cfg: SolverConfig, budget: _Budget):
    """Yield every annotated tuple on (S, parts): all pi maps, all gamma rows.

    gamma rows range over {0} plus the bucket rungs up to the class size; the
    s rows stay zero (they are bookkeeping the closing step never reads).
    Each yielded tuple is charged against the shared budget.
    """
    cfg = cfg.resolved(inst.d)
    S = tuple(sorted(S))
    parts = tuple(tuple(sorted(p)) for p in parts)
    classes = equivalence_classes(inst, S)
    realized = sorted(classes.by_class)
    if len(S) == cfg.k:
        pi = {cls: min(S) for cls in realized} if S else {}
        budget.charge_tuple()
        yield AnnotatedTuple(S=S, parts=parts, pi=pi, gamma_part={}, gamma_s={})
        return
    nonempty = [cls for cls in realized if cls]
    if S:
        pi_choices = itertools.product(sorted(S), repeat=len(nonempty))
    else:
        pi_choices = iter([()])
    keys = [(i, cls) for i in range(len(parts)) for cls in realized]
    value_lists = [
        [0] + bucket_values_upto(len(classes.by_class[cls]), cfg.bucket_base)
        for (_, cls) in keys
    ]
    for choice in pi_choices:
        pi = dict(zip(nonempty, choice))
        if S and () in classes.by_class:
            pi[()] = min(S)
        for combo in itertools.product(*value_lists):
            gamma = {k: v for k, v in zip(keys, combo) if v}
            budget.charge_tuple()
            yield AnnotatedTuple(
                S=S, parts=parts, pi=pi, gamma_part=gamma, gamma_s={}
            )


def good_tuple_from_opt(
    S, parts, opt: Solution, asg: Assignment, inst: Instance, cfg: SolverConfig
) -> AnnotatedTuple:
    """The annotated tuple an optimal pair (opt, asg) induces on (S, parts).

    pi follows the majority coverage, gamma buckets the actual coverage of the
    representative opt element in each part (and of each s in S).
    """
    cfg = cfg.resolved(inst.d)
    S = tuple(sorted(S))
    parts = tuple(tuple(sorted(p)) for p in parts)
    opt_ids = set(opt.copies)
    if not set(S) <= opt_ids:
        raise PreconditionViolated("S must be contained in the oracle solution")
    rep = []
    for p in parts:
        inside = [v for v in p if v in opt_ids]
        if len(inside) != 1:
            raise PreconditionViolated(
                "each part must contain exactly one oracle element"
            )
        rep.append(inside[0])
    classes = equivalence_classes(inst, S)
    base = cfg.bucket_base
    pi: dict = {}
    for cls in sorted(classes.by_class):
        if not S:
            break
        if cls == ():
            pi[cls] = min(S)
            continue
        idxs = classes.by_class[cls]
        best_s, best_c = None, -1
        for s in S:
            c = coverage(asg, s, idxs)
            if c > best_c:
                best_s, best_c = s, c
        pi[cls] = best_s if best_c > 0 else min(S)
    gamma_part: dict = {}
    for i, v in enumerate(rep):
        for cls, idxs in classes.by_class.items():
            c = coverage(asg, v, idxs)
            if c >= 1:
                gamma_part[(i, cls)] = bucket_value(c, base)
    gamma_s: dict = {}
    for s in S:
        for cls, idxs in classes.by_class.items():
            c = coverage(asg, s, idxs)
            if c >= 1:
                gamma_s[(s, cls)] = bucket_value(c, base)
    return AnnotatedTuple(S=S, parts=parts, pi=pi, gamma_part=gamma_part, gamma_s=gamma_s)


def solve_annotated(
    t: AnnotatedTuple,
    inst: Instance,
    cfg: SolverConfig,
    mode,
    _budget: _Budget | None = None,
) -> Solution | None:
    """Search below one annotated tuple, in enumerate or guided mode."""
    cfg = cfg.resolved(inst.d)
    if len(t.S) + t.r != cfg.k:
        raise ValueError("tuple arity does not match k")
    budget = _budget if _budget is not None else _Budget(
        cfg.tuple_budget, cfg.recursion_budget
    )
    if t.r == 0:
        sol = Solution({s: 1 for s in t.S})
        return sol if check_feasible(inst, sol) is not None else None

    if isinstance(mode, Guided):
        return _solve_guided(t, inst, cfg, mode, budget)
    if mode != ENUMERATE:
        raise ValueError("mode must be ENUMERATE or a Guided value")

    it = info_tuple(t, inst, cfg)
    r = t.r
    order = sorted(t.S)
    for m1 in itertools.product(range(r), repeat=len(order)):
        for m2 in itertools.product(range(r), repeat=len(order)):
            budget.charge_tuple()
            tau1 = dict(zip(order, m1))
            tau2 = dict(zip(order, m2))
            e = ExtendedTuple(base=t, tau1=tau1, tau2=tau2)
            xpp = candidate_set(e, it, cfg, inst.d)
            for i in range(r):
                for v in xpp[i]:
                    s2 = t.S + (v,)
                    parts2 = t.parts[:i] + t.parts[i + 1 :]
                    for child in enumerate_tuples(s2, parts2, inst, cfg, budget):
                        budget.charge_recursion()
                        got = solve_annotated(child, inst, cfg, ENUMERATE, budget)
                        if got is not None:
                            return got
            res = solve_extended(e, inst, cfg)
            if res.solution is not None:
                return res.solution
    return None


def _solve_guided(
    t: AnnotatedTuple,
    inst: Instance,
    cfg: SolverConfig,
    mode: Guided,
    budget: _Budget,
) -> Solution | None:
    opt_ids = set(mode.opt.copies)
    if not set(t.S) <= opt_ids:
        raise OracleInconsistent("committed picks left the oracle solution")
    rep = []
    for p in t.parts:
        inside = [v for v in p if v in opt_ids]
        if len(inside) != 1:
            raise OracleInconsistent("a part lost its oracle representative")
        rep.append(inside[0])
    classes = equivalence_classes(inst, t.S)
    st = stars(classes, t.pi)
    r = t.r
    tau1: dict = {}
    tau2: dict = {}
    for s in sorted(t.S):
        idxs_per_i = [coverage(mode.asg, rep[i], st.get(s, ())) for i in range(r)]
        best = max(range(r), key=lambda i: (idxs_per_i[i], -i))
        tau1[s] = best
        if r == 1:
            tau2[s] = best
        else:
            rest = [i for i in range(r) if i != best]
            tau2[s] = max(rest, key=lambda i: (idxs_per_i[i], -i))
    e = ExtendedTuple(base=t, tau1=tau1, tau2=tau2)
    it = info_tuple(t, inst, cfg)
    xpp = candidate_set(e, it, cfg, inst.d)
    hit = next((i for i in range(r) if rep[i] in xpp[i]), None)
    if hit is not None:
        s2 = t.S + (rep[hit],)
        parts2 = t.parts[:hit] + t.parts[hit + 1 :]
        child = good_tuple_from_opt(s2, parts2, mode.opt, mode.asg, inst, cfg)
        return solve_annotated(child, inst, cfg, mode, budget)
    res = solve_extended(e, inst, cfg)
    return res.solution


def expand_multiplicities(inst: Instance, k: int) -> Expansion:
    """Clone each element min(k, mult) times with multiplicity one.

    Set membership is inherited by every clone, so sets grow up to d*k wide.
    back maps clone ids to originals.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    from .core import Element

    new_elements = []
    back: dict = {}
    copy_ids: dict = {}
    nxt = 0
    for el in inst.elements:
        copies = min(k, el.mult) if el.mult is not None else k
        copy_ids[el.id] = []
        for _ in range(copies):
            new_elements.append(
                Element(id=nxt, cap=el.cap, mult=1, weight=el.weight)
            )
            back[nxt] = el.id
            copy_ids[el.id].append(nxt)
            nxt += 1
    family2 = []
    for fs in inst.family:
        members: list[int] = []
        for x in fs:
            members.extend(copy_ids[x])
        family2.append(tuple(sorted(members)))
    widest = max((len(fs) for fs in family2), default=inst.d)
    d2 = max(1, min(inst.d * k, widest))
    inst2 = Instance(elements=tuple(new_elements), family=tuple(family2), d=d2)
    return Expansion(instance=inst2, back=back)


def _map_back(inst: Instance, sol2: Solution, back: dict) -> Solution:
    counts: dict = {}
    for x in sol2.copies:
        orig = back[x]
        counts[orig] = counts.get(orig, 0) + 1
    return Solution(counts)


def _lift_oracle(
    inst2: Instance, copy_ids: dict, opt: Solution, asg: Assignment
) -> tuple[Solution, Assignment]:
    """Spread an original-instance optimum over clones, one copy each."""
    copies2: dict = {}
    target2: dict = {}
    for x in sorted(opt.copies):
        ids = copy_ids[x][: opt.copies[x]]
        for cid in ids:
            copies2[cid] = 1
        assigned = sorted(j for j, tgt in asg.target.items() if tgt == x)
        cap = inst2.element(ids[0]).cap if ids else 0
        pos = 0
        for cid in ids:
            chunk = assigned[pos : pos + cap]
            pos += cap
            for j in chunk:
                target2[j] = cid
        if pos < len(assigned):
            raise OracleInconsistent("oracle assignment overloads an element")
    return Solution(copies2), Assignment(target2)


def solve_approx(
    inst: Instance, k: int, cfg: SolverConfig | None = None, mode: str = GUIDED
) -> ApproxResult | None:
    """Find a capacitated hitting set of size at most ceil(4k/3), or None.

    mode is ENUMERATE for the self-contained search or GUIDED for the
    oracle-backed descent.  With cfg.epsilon set the weighted variant runs:
    parts are additionally sliced into weight windows and the guarantee traded
    for weight at most 2(1+epsilon) times the optimum.
    """
    if cfg is None:
        cfg = SolverConfig(k=k)
    if cfg.k != k:
        cfg = replace(cfg, k=k)
    if k < 1:
        raise ValueError("k must be at least 1")
    if mode not in (GUIDED, ENUMERATE):
        raise ValueError("mode must be GUIDED or ENUMERATE")
    exp = expand_multiplicities(inst, k)
    inst2, back = exp.instance, exp.back
    copy_ids: dict = {}
    for cid, orig in back.items():
        copy_ids.setdefault(orig, []).append(cid)
    for orig in copy_ids:
        copy_ids[orig].sort()
    n2 = inst2.n
    ids2 = [e.id for e in inst2.elements]

    if mode == GUIDED:
        if cfg.epsilon is not None:
            got = solve_exact_weighted(inst, k)
        else:
            got = solve_exact(inst, k)
        if got is None:
            return None
        opt, asg = got.solution, got.assignment
        ell = opt.size()
        if ell == 0:
            sol = Solution({})
            asg0 = check_feasible(inst, sol)
            assert asg0 is not None
            return ApproxResult(solution=sol, assignment=asg0, weight=0)
        opt2, asg2 = _lift_oracle(inst2, copy_ids, opt, asg)
        cfg2 = cfg.resolved(inst2.d, k=ell)
        trials = min(default_trials(n2, ell), cfg.max_coloring_trials)
        colorings = random_colorings(ids2, ell, trials, cfg.seed)
        opt2_ids = sorted(opt2.copies)
        parts0 = None
        for cand in colorings:
            where = {}
            for i, part in enumerate(cand):
                for v in part:
                    where[v] = i
            if len({where[v] for v in opt2_ids}) == ell:
                parts0 = [tuple(sorted(p)) for p in cand]
                break
        if parts0 is None:
            raise NoColoringSeparates(
                f"no coloring among {trials} separated the oracle solution"
            )
        rep_of = {}
        for i, p in enumerate(parts0):
            inside = [v for v in p if v in opt2.copies]
            rep_of[i] = inside[0]
        if cfg.epsilon is not None:
            w_star = opt2.weight(inst2)
            west = weight_estimates(inst2, ell)
            W = next(w for w in west if w >= w_star)
            log_n = max(1, (n2 - 1).bit_length())
            delta = max(1, _ceil(Fraction(cfg.epsilon) * W / (ell * log_n)))
            parts = []
            for i, p in enumerate(parts0):
                b = inst2.element(rep_of[i]).weight // delta
                lo, hi = b * delta, b * delta + delta
                parts.append(
                    tuple(
                        v for v in p if lo <= inst2.element(v).weight <= hi
                    )
                )
        else:
            parts = parts0
        root = good_tuple_from_opt((), tuple(parts), opt2, asg2, inst2, cfg2)
        sol2 = solve_annotated(root, inst2, cfg2, Guided(opt2, asg2))
        if sol2 is None:
            return None
        sol = _map_back(inst, sol2, back)
        final = check_feasible(inst, sol)
        assert final is not None
        return ApproxResult(solution=sol, assignment=final, weight=sol.weight(inst))

    budget = _Budget(cfg.tuple_budget, cfg.recursion_budget)
    for ell in range(1, k + 1):
        cfg2 = cfg.resolved(inst2.d, k=ell)
        trials = min(default_trials(n2, ell), cfg.max_coloring_trials)
        colorings = random_colorings(ids2, ell, trials, cfg.seed)
        for cand in colorings:
            parts0 = tuple(tuple(sorted(p)) for p in cand)
            if any(not p for p in parts0):
                continue
            if cfg.epsilon is not None:
                max_w = max(e.weight for e in inst2.elements)
                log_n = max(1, (n2 - 1).bit_length())
                for W in weight_estimates(inst2, ell):
                    delta = max(
                        1, _ceil(Fraction(cfg.epsilon) * W / (ell * log_n))
                    )
                    top_b = max_w // delta
                    for bvec in itertools.product(range(top_b + 1), repeat=ell):
                        parts = tuple(
                            tuple(
                                v
                                for v in parts0[i]
                                if bvec[i] * delta
                                <= inst2.element(v).weight
                                <= bvec[i] * delta + delta
                            )
                            for i in range(ell)
                        )
                        if any(not p for p in parts):
                            continue
                        got = _enumerate_from_root(
                            parts, inst2, cfg2, budget
                        )
                        if got is not None:
                            return _finish(inst, got, back)
            else:
                got = _enumerate_from_root(parts0, inst2, cfg2, budget)
                if got is not None:
                    return _finish(inst, got, back)
    return None


def _enumerate_from_root(parts, inst2, cfg2, budget) -> Solution | None:
    for root in enumerate_tuples((), parts, inst2, cfg2, budget):
        budget.charge_recursion()
        got = solve_annotated(root, inst2, cfg2, ENUMERATE, budget)
        if got is not None:
            return got
    return None


def _finish(inst: Instance, sol2: Solution, back: dict) -> ApproxResult:
    sol = _map_back(inst, sol2, back)
    asg = check_feasible(inst, sol)
    assert asg is not None
    return ApproxResult(solution=sol, assignment=asg, weight=sol.weight(inst))
