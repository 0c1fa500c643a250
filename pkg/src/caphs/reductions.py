"""Gap-preserving reductions: 2-CSP to knapsack to capacitated vertex cover.

The chain demonstrates hardness transfer empirically: a binary CSP over domain
[n] turns into a multi-dimensional knapsack whose guard dimensions force one
vector per variable and per constraint, and the knapsack in turn becomes a
degree-2 capacitated cover instance whose dummy vertices absorb exactly the
slack between column sums and targets.  A covering-family variant batches
variables to amplify the gap.  Everything here is exact integer arithmetic;
randomness only enters when sampling covering families.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import FORMAT_VERSION, Element, Instance
from .errors import (
    BudgetExceeded,
    EnumerationBudgetExceeded,
    MalformedInput,
    NotThreeRegular,
    ParameterViolation,
    TargetExceedsColumnSum,
    ValidationError,
)


def _ceil(fr: Fraction) -> int:
    return -((-fr.numerator) // fr.denominator)


@dataclass(frozen=True)
class Constraint:
    """One binary constraint: (value(u), value(v)) must be an allowed pair."""

    u: int
    v: int
    allowed: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "allowed", tuple(sorted(set(tuple(p) for p in self.allowed)))
        )


@dataclass(frozen=True)
class CspInstance:
    """Binary CSP: k variables (ids 0..k-1) over values 1..n.

    Constraints form a multigraph; parallel edges are distinct constraints.
    """

    k: int
    n: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.k < 1 or self.n < 1:
            raise ValidationError("csp needs k >= 1 and n >= 1")
        for c in self.constraints:
            if not (0 <= c.u < self.k and 0 <= c.v < self.k):
                raise ValidationError(f"constraint names unknown variable: {c}")
            if c.u == c.v:
                raise ValidationError(f"constraint loops on variable {c.u}")
            for a, b in c.allowed:
                if not (1 <= a <= self.n and 1 <= b <= self.n):
                    raise ValidationError(f"allowed pair {(a, b)} out of range")

    @property
    def m(self) -> int:
        return len(self.constraints)


def csp_value(csp: CspInstance, assignment) -> Fraction:
    """Fraction of satisfied constraints under a total assignment.

    assignment maps variable id to a value in 1..n (dict or sequence).  An
    instance with no constraints has value 1.
    """
    if csp.m == 0:
        return Fraction(1)
    sat = 0
    for c in csp.constraints:
        if (assignment[c.u], assignment[c.v]) in c.allowed:
            sat += 1
    return Fraction(sat, csp.m)


def is_three_regular(csp: CspInstance) -> bool:
    deg = [0] * csp.k
    for c in csp.constraints:
        deg[c.u] += 1
        deg[c.v] += 1
    return all(x == 3 for x in deg)


def serialize_csp(csp: CspInstance) -> str:
    doc = {
        "format": FORMAT_VERSION,
        "k": csp.k,
        "n": csp.n,
        "constraints": [
            {"u": c.u, "v": c.v, "allowed": [list(p) for p in c.allowed]}
            for c in csp.constraints
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_csp(text: str) -> CspInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedInput("csp document must be a JSON object")
    if doc.get("format") != FORMAT_VERSION:
        raise ValidationError(f"unsupported format {doc.get('format')!r}")
    for key in ("k", "n", "constraints"):
        if key not in doc:
            raise MalformedInput(f"csp document misses key {key!r}")
    if not isinstance(doc["k"], int) or not isinstance(doc["n"], int):
        raise MalformedInput("k and n must be integers")
    if not isinstance(doc["constraints"], list):
        raise MalformedInput("constraints must be a list")
    cons = []
    for ent in doc["constraints"]:
        if not isinstance(ent, dict) or not {"u", "v", "allowed"} <= set(ent):
            raise MalformedInput(f"bad constraint entry: {ent!r}")
        if not isinstance(ent["u"], int) or not isinstance(ent["v"], int):
            raise MalformedInput("constraint endpoints must be integers")
        if not isinstance(ent["allowed"], list):
            raise MalformedInput("allowed must be a list of pairs")
        pairs = []
        for p in ent["allowed"]:
            if not (isinstance(p, list) and len(p) == 2 and all(isinstance(x, int) for x in p)):
                raise MalformedInput(f"bad allowed pair: {p!r}")
            pairs.append((p[0], p[1]))
        cons.append(Constraint(u=ent["u"], v=ent["v"], allowed=tuple(pairs)))
    return CspInstance(k=doc["k"], n=doc["n"], constraints=tuple(cons))


@dataclass(frozen=True)
class MdkInstance:
    """Multi-dimensional knapsack: pick at most k vectors whose sum covers target.

    labels, when present, name each vector for debugging; they are never
    serialized and never affect semantics.
    """

    d: int
    k: int
    target: tuple[int, ...]
    vectors: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(
            self, "vectors", tuple(tuple(v) for v in self.vectors)
        )
        if self.d < 1:
            raise ValidationError("mdk needs d >= 1")
        if self.k < 0:
            raise ValidationError("mdk needs k >= 0")
        if len(self.target) != self.d:
            raise ValidationError("target length must equal d")
        for v in self.vectors:
            if len(v) != self.d:
                raise ValidationError("every vector must have d entries")
            if any(not isinstance(x, int) or x < 0 for x in v):
                raise ValidationError("vector entries must be nonnegative ints")
        if any(not isinstance(x, int) or x < 0 for x in self.target):
            raise ValidationError("target entries must be nonnegative ints")
        if self.labels is not None and len(self.labels) != len(self.vectors):
            raise ValidationError("labels must match vectors one to one")


def serialize_mdk(mdk: MdkInstance) -> str:
    doc = {
        "format": FORMAT_VERSION,
        "d": mdk.d,
        "k": mdk.k,
        "target": list(mdk.target),
        "vectors": [list(v) for v in mdk.vectors],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_mdk(text: str) -> MdkInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedInput("mdk document must be a JSON object")
    if doc.get("format") != FORMAT_VERSION:
        raise ValidationError(f"unsupported format {doc.get('format')!r}")
    for key in ("d", "k", "target", "vectors"):
        if key not in doc:
            raise MalformedInput(f"mdk document misses key {key!r}")
    if not isinstance(doc["d"], int) or not isinstance(doc["k"], int):
        raise MalformedInput("d and k must be integers")
    if not isinstance(doc["target"], list) or not isinstance(doc["vectors"], list):
        raise MalformedInput("target and vectors must be lists")
    for row in [doc["target"]] + doc["vectors"]:
        if not all(isinstance(x, int) for x in row):
            raise MalformedInput("entries must be integers")
    return MdkInstance(
        d=doc["d"],
        k=doc["k"],
        target=tuple(doc["target"]),
        vectors=tuple(tuple(v) for v in doc["vectors"]),
    )


def verify_mdk(mdk: MdkInstance, picks) -> bool:
    """Do the (deduplicated) picked vectors cover the target within budget k?"""
    idxs = sorted(set(picks))
    for j in idxs:
        if not 0 <= j < len(mdk.vectors):
            raise ValidationError(f"pick {j} out of range")
    if len(idxs) > mdk.k:
        return False
    return all(
        sum(mdk.vectors[j][i] for j in idxs) >= mdk.target[i]
        for i in range(mdk.d)
    )


def _incident(csp: CspInstance, u: int) -> list[int]:
    return [e for e, c in enumerate(csp.constraints) if u in (c.u, c.v)]


def csp_to_mdk(csp: CspInstance, Q: int | None = None) -> MdkInstance:
    """Encode a 3-regular binary CSP as an MDK with guard and matching dims.

    Guard dims force one vector per variable and per constraint; the four
    matching dims per constraint pay off at 2Q exactly when the variable
    vector and the constraint vector agree on the chosen value.  The CSP is
    satisfiable iff the MDK has a solution of size k + m = 5k/2.
    """
    if not is_three_regular(csp):
        raise NotThreeRegular("every variable must occur in exactly 3 constraints")
    if Q is None:
        Q = 10 * csp.n
    if Q <= csp.n:
        raise ValidationError("Q must exceed the domain size")
    k, m = csp.k, csp.m
    d = k + m + 4 * m

    def block(e: int) -> int:
        return k + m + 4 * e

    vectors: list[tuple[int, ...]] = []
    labels: list[str] = []
    for u in range(k):
        inc = _incident(csp, u)
        for a in range(1, csp.n + 1):
            vec = [0] * d
            vec[u] = 1
            for e in inc:
                c = csp.constraints[e]
                off = 0 if c.u == u else 2
                vec[block(e) + off] = Q + a
                vec[block(e) + off + 1] = Q - a
            vectors.append(tuple(vec))
            labels.append(f"var:{u}={a}")
    for e, c in enumerate(csp.constraints):
        for a, b in c.allowed:
            vec = [0] * d
            vec[k + e] = 1
            vec[block(e) + 0] = Q - a
            vec[block(e) + 1] = Q + a
            vec[block(e) + 2] = Q - b
            vec[block(e) + 3] = Q + b
            vectors.append(tuple(vec))
            labels.append(f"edge:{e}:{a},{b}")
    target = [1] * (k + m) + [2 * Q] * (4 * m)
    return MdkInstance(
        d=d,
        k=k + m,
        target=tuple(target),
        vectors=tuple(vectors),
        labels=tuple(labels),
    )


def solve_mdk_exact(
    mdk: MdkInstance, kmax: int | None = None, node_budget: int = 2_000_000
):
    """Smallest vector subset covering the target, or None.

    Iterative deepening over the solution size with branching on the unmet
    dimension that has fewest remaining candidates, plus a disjoint-support
    lower bound.  Deterministic; raises BudgetExceeded past node_budget.
    """
    if kmax is None:
        kmax = mdk.k
    nvec = len(mdk.vectors)
    cols = [sum(v[i] for v in mdk.vectors) for i in range(mdk.d)]
    if any(cols[i] < mdk.target[i] for i in range(mdk.d)):
        return None
    nodes = [0]

    def dfs(used: list[int], sums: list[int], limit: int):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise BudgetExceeded(f"mdk search exceeded {node_budget} nodes")
        unmet = [i for i in range(mdk.d) if sums[i] < mdk.target[i]]
        if not unmet:
            return list(used)
        if len(used) == limit:
            return None
        in_use = set(used)
        cands: dict[int, list[int]] = {}
        for i in unmet:
            cands[i] = [
                j for j in range(nvec) if j not in in_use and mdk.vectors[j][i] > 0
            ]
            if not cands[i]:
                return None
        order = sorted(unmet, key=lambda i: (len(cands[i]), i))
        covered: set[int] = set()
        lb = 0
        for i in order:
            cs = set(cands[i])
            if not cs & covered:
                lb += 1
                covered |= cs
        if len(used) + lb > limit:
            return None
        pivot = order[0]
        for j in cands[pivot]:
            used.append(j)
            new_sums = [sums[i] + mdk.vectors[j][i] for i in range(mdk.d)]
            got = dfs(used, new_sums, limit)
            if got is not None:
                return got
            used.pop()
        return None

    for s in range(0, kmax + 1):
        got = dfs([], [0] * mdk.d, s)
        if got is not None:
            return tuple(sorted(got))
    return None


def _cvc_skeleton(mdk: MdkInstance):
    nvec = len(mdk.vectors)
    cols = [sum(v[i] for v in mdk.vectors) for i in range(mdk.d)]
    for i in range(mdk.d):
        if mdk.target[i] > cols[i]:
            raise TargetExceedsColumnSum(
                f"dimension {i}: target {mdk.target[i]} > column sum {cols[i]}"
            )
    m_cvc = mdk.d + sum(cols)
    family: list[tuple[int, int]] = []
    for i in range(mdk.d):
        family.append((nvec + i, nvec + mdk.d + i))
    for v in range(nvec):
        for i in range(mdk.d):
            for _ in range(mdk.vectors[v][i]):
                family.append((v, nvec + i))
    return nvec, cols, m_cvc, family


def mdk_to_cvc(mdk: MdkInstance) -> Instance:
    """Degree-2 capacitated cover instance solvable at size k + d iff the MDK is.

    Vector vertices get capacity m (effectively unbounded); each dimension i
    contributes a forced vertex of capacity cols[i] - target[i] + 1 paired
    with a zero-capacity twin, so the forced vertex can absorb exactly the
    copies the picked vectors may leave uncovered.
    """
    nvec, cols, m_cvc, family = _cvc_skeleton(mdk)
    elements = (
        [Element(id=v, cap=m_cvc, mult=1, weight=1) for v in range(nvec)]
        + [
            Element(id=nvec + i, cap=cols[i] - mdk.target[i] + 1, mult=1, weight=1)
            for i in range(mdk.d)
        ]
        + [Element(id=nvec + mdk.d + i, cap=0, mult=1, weight=1) for i in range(mdk.d)]
    )
    return Instance(elements=tuple(elements), family=tuple(family), d=2)


def mdk_to_wcvc(mdk: MdkInstance) -> Instance:
    """Weighted twin of mdk_to_cvc: weight budget k separates yes from no.

    Vector vertices cost 1, forced dimension vertices are free, and the
    zero-capacity twins are priced above any feasible budget so no solution
    ever buys one.
    """
    nvec, cols, m_cvc, family = _cvc_skeleton(mdk)
    n_cvc = nvec + 2 * mdk.d
    heavy = n_cvc * m_cvc + 1
    elements = (
        [Element(id=v, cap=m_cvc, mult=1, weight=1) for v in range(nvec)]
        + [
            Element(
                id=nvec + i,
                cap=cols[i] - mdk.target[i] + 1,
                mult=1,
                weight=0,
            )
            for i in range(mdk.d)
        ]
        + [
            Element(id=nvec + mdk.d + i, cap=0, mult=1, weight=heavy)
            for i in range(mdk.d)
        ]
    )
    return Instance(elements=tuple(elements), family=tuple(family), d=2)


def verify_covering_family(
    family,
    n: int,
    alpha,
    beta,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
    budget: int = 10 ** 6,
) -> bool:
    """Check that every ceil(alpha*|F|)-subfamily covers (1-beta)n ground elements.

    Exhaustive mode walks all subfamilies of exactly that size (BudgetExceeded
    when there are more than budget); sampled mode draws uniformly and can
    only refute.
    """
    fam = [frozenset(s) for s in family]
    if not fam:
        raise ValidationError("covering family must be nonempty")
    for s in fam:
        if any(not (0 <= x < n) for x in s):
            raise ValidationError("family member outside ground set")
    s_min = _ceil(Fraction(alpha) * len(fam))
    need = (1 - Fraction(beta)) * n

    def ok(idxs) -> bool:
        union: set[int] = set()
        for j in idxs:
            union |= fam[j]
        return Fraction(len(union)) >= need

    if mode == "exhaustive":
        total = math.comb(len(fam), s_min)
        if total > budget:
            raise BudgetExceeded(
                f"{total} subfamilies of size {s_min} exceed budget {budget}"
            )
        return all(ok(idxs) for idxs in itertools.combinations(range(len(fam)), s_min))
    if mode == "sampled":
        rng = np.random.default_rng(int(seed))
        for _ in range(samples):
            idxs = rng.choice(len(fam), size=s_min, replace=False)
            if not ok(idxs.tolist()):
                return False
        return True
    raise ValueError("mode must be 'exhaustive' or 'sampled'")


def build_covering_family(
    n: int, alpha, beta, r: int, seed: int = 0, trials: int = 200
):
    """Sample uniform r-subsets until the covering property verifies, or None.

    The parameter gate r > log_{1/(1-beta)}(e^2/alpha) is the regime where a
    random family of ceil(n/alpha) subsets works with constant probability.
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if not 0 < alpha <= 1 or not 0 < beta < 1:
        raise ParameterViolation("need 0 < alpha <= 1 and 0 < beta < 1")
    thr = math.log(math.e ** 2 / float(alpha)) / math.log(1.0 / (1.0 - float(beta)))
    if not r > thr:
        raise ParameterViolation(f"r={r} must exceed {thr:.3f}")
    if r > n:
        raise ParameterViolation(f"r={r} exceeds the ground set size {n}")
    size = _ceil(Fraction(n) / alpha)
    rng = np.random.default_rng(int(seed))
    for _ in range(trials):
        fam = [
            tuple(sorted(int(x) for x in rng.choice(n, size=r, replace=False)))
            for _ in range(size)
        ]
        if verify_covering_family(fam, n, alpha, beta, mode="exhaustive"):
            return tuple(fam)
    return None


def csp_to_mdk_covering(
    csp: CspInstance, family, Q: int | None = None, budget: int = 10 ** 6
) -> MdkInstance:
    """Batched CSP encoding: one vector per (family set, local assignment).

    Each family set is padded to its closed constraint neighborhood; vectors
    enumerate the assignments of that neighborhood satisfying every constraint
    inside it.  Shared variables are synchronized through paired Q-dims, so a
    size-|family| solution induces one consistent global assignment over the
    covered variables.
    """
    fam = [tuple(sorted(set(s))) for s in family]
    if not fam:
        raise ValidationError("covering family must be nonempty")
    for s in fam:
        if any(not (0 <= u < csp.k) for u in s):
            raise ValidationError("family member names unknown variable")
    kstar = len(fam)
    if Q is None:
        Q = 10 * csp.n * kstar
    if Q <= csp.n:
        raise ValidationError("Q must exceed the domain size")
    hoods: list[tuple[int, ...]] = []
    for s in fam:
        hood = set(s)
        for c in csp.constraints:
            if c.u in s:
                hood.add(c.v)
            if c.v in s:
                hood.add(c.u)
        hoods.append(tuple(sorted(hood)))
    shared: list[tuple[int, int, int]] = []
    for i in range(kstar):
        for j in range(i + 1, kstar):
            for u in sorted(set(hoods[i]) & set(hoods[j])):
                shared.append((i, j, u))
    shared.sort()
    dim_of: dict[tuple[int, int, int, str], int] = {}
    for idx, (i, j, u) in enumerate(shared):
        dim_of[(i, j, u, "+")] = kstar + 2 * idx
        dim_of[(i, j, u, "-")] = kstar + 2 * idx + 1
    d = kstar + 2 * len(shared)

    vectors: list[tuple[int, ...]] = []
    labels: list[str] = []
    for i, hood in enumerate(hoods):
        count = csp.n ** len(hood)
        if count > budget:
            raise EnumerationBudgetExceeded(
                f"neighborhood {i} has {count} assignments, budget {budget}"
            )
        local = [
            c
            for c in csp.constraints
            if c.u in set(hood) and c.v in set(hood)
        ]
        for values in itertools.product(range(1, csp.n + 1), repeat=len(hood)):
            gamma = dict(zip(hood, values))
            if any((gamma[c.u], gamma[c.v]) not in c.allowed for c in local):
                continue
            vec = [0] * d
            vec[i] = 1
            for (a, b, u) in shared:
                if u not in gamma:
                    continue
                if a == i:
                    vec[dim_of[(a, b, u, "+")]] = Q - gamma[u]
                    vec[dim_of[(a, b, u, "-")]] = Q + gamma[u]
                elif b == i:
                    vec[dim_of[(a, b, u, "+")]] = Q + gamma[u]
                    vec[dim_of[(a, b, u, "-")]] = Q - gamma[u]
            vectors.append(tuple(vec))
            labels.append(
                "cov:%d:%s" % (i, ",".join(f"{u}={gamma[u]}" for u in hood))
            )
    target = [1] * kstar + [2 * Q] * (2 * len(shared))
    return MdkInstance(
        d=d,
        k=kstar,
        target=tuple(target),
        vectors=tuple(vectors),
        labels=tuple(labels),
    )
