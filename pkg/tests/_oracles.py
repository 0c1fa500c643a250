"""Independent reference implementations used to cross-check the real modules.

Everything here is deliberately naive: straight-line enumeration and DFS with
none of the package's pruning, bucketing, or flow machinery.
"""

from __future__ import annotations

import itertools

import numpy as np

from caphs.core import Instance


def ford_fulkerson_value(cap, source: int, sink: int) -> int:
    """Max-flow value by DFS augmenting paths on a dense capacity matrix.

    Different search order than the library kernel (DFS vs BFS), same value.
    """
    n = cap.shape[0]
    res = [[int(cap[i, j]) for j in range(n)] for i in range(n)]
    total = 0
    while True:
        parent = [-1] * n
        parent[source] = source
        stack = [source]
        while stack:
            u = stack.pop()
            for v in range(n):
                if parent[v] < 0 and res[u][v] > 0:
                    parent[v] = u
                    stack.append(v)
        if parent[sink] < 0:
            return total
        path = []
        v = sink
        while v != source:
            path.append((parent[v], v))
            v = parent[v]
        push = min(res[u][v] for u, v in path)
        for u, v in path:
            res[u][v] -= push
            res[v][u] += push
        total += push


def assign_backtracking(inst: Instance, copies: dict) -> dict | None:
    """Reference feasibility: assign each set occurrence to a bought member."""
    budget = {}
    for x, c in copies.items():
        el = inst.element(x)
        if el.mult is not None and c > el.mult:
            return None
        budget[x] = el.cap * c

    def go(j: int):
        if j == len(inst.family):
            return {}
        for x in inst.family[j]:
            if budget.get(x, 0) > 0:
                budget[x] -= 1
                got = go(j + 1)
                if got is not None:
                    got[j] = x
                    return got
                budget[x] += 1
        return None

    return go(0)


def min_hitting_bruteforce(inst: Instance, k: int):
    """Smallest feasible copy vector by exhaustive search, or None."""
    limits = []
    for el in sorted(inst.elements, key=lambda e: e.id):
        cap = k if el.mult is None else min(k, el.mult)
        limits.append((el.id, cap))
    best = None
    for total in range(0, k + 1):
        for combo in _vectors_of_total(limits, total):
            copies = {x: c for (x, _), c in zip(limits, combo) if c}
            if assign_backtracking(inst, copies) is not None:
                return copies
    return best


def _vectors_of_total(limits, total):
    if not limits:
        if total == 0:
            yield ()
        return
    (_, hi) = limits[0]
    for c in range(0, min(hi, total) + 1):
        for rest in _vectors_of_total(limits[1:], total - c):
            yield (c,) + rest


def min_weight_bruteforce(inst: Instance, k: int):
    """(copies, weight) minimizing weight over feasible vectors of size <= k."""
    limits = [
        (el.id, k if el.mult is None else min(k, el.mult))
        for el in sorted(inst.elements, key=lambda e: e.id)
    ]
    best = None
    for total in range(0, k + 1):
        for combo in _vectors_of_total(limits, total):
            copies = {x: c for (x, _), c in zip(limits, combo) if c}
            if assign_backtracking(inst, copies) is None:
                continue
            w = sum(inst.element(x).weight * c for x, c in copies.items())
            if best is None or w < best[1]:
                best = (copies, w)
    return best


def min_dominator_bruteforce(reds, blues, adj, forced=frozenset()):
    """Smallest red set containing forced that dominates every blue, or None."""
    reds = sorted(reds)
    blues = sorted(blues)
    forced = set(forced)
    for size in range(len(forced), len(reds) + 1):
        for combo in itertools.combinations(reds, size):
            chosen = set(combo)
            if not forced <= chosen:
                continue
            if all(any(r in chosen for r in adj.get(v, ())) for v in blues):
                return tuple(sorted(chosen))
    return None


def mdk_min_bruteforce(vectors, target):
    """Smallest subset of vector indices covering target, or None."""
    nvec = len(vectors)
    d = len(target)
    for size in range(0, nvec + 1):
        for combo in itertools.combinations(range(nvec), size):
            if all(sum(vectors[j][i] for j in combo) >= target[i] for i in range(d)):
                return combo
    return None


def csp_satisfiable_bruteforce(csp) -> bool:
    for values in itertools.product(range(1, csp.n + 1), repeat=csp.k):
        if all((values[c.u], values[c.v]) in c.allowed for c in csp.constraints):
            return True
    return False


THREE_REGULAR_EDGES = {
    2: ((0, 1), (0, 1), (0, 1)),
    4: ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
}


def random_three_regular_csp(k: int, n: int, seed: int, satisfiable: bool):
    """Random 3-regular CSP, planted-satisfiable or rejection-sampled unsat."""
    from caphs.reductions import Constraint, CspInstance

    edges = THREE_REGULAR_EDGES[k]
    rng = np.random.default_rng(seed)
    while True:
        planted = [int(rng.integers(1, n + 1)) for _ in range(k)]
        cons = []
        for (u, v) in edges:
            pairs = set()
            for a in range(1, n + 1):
                for b in range(1, n + 1):
                    if rng.random() < 0.3:
                        pairs.add((a, b))
            if satisfiable:
                pairs.add((planted[u], planted[v]))
            if not pairs:
                pairs.add((int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))))
            cons.append(Constraint(u, v, tuple(sorted(pairs))))
        csp = CspInstance(k=k, n=n, constraints=tuple(cons))
        if csp_satisfiable_bruteforce(csp) == satisfiable:
            return csp


def random_bipartite_mindeg2(b: int, r: int, seed: int):
    """(blues, reds, adj) with every blue adjacent to >= 2 reds."""
    rng = np.random.default_rng(seed)
    blues = list(range(b))
    reds = list(range(r))
    adj = {}
    for v in blues:
        deg = int(rng.integers(2, min(3, r) + 1))
        picks = rng.choice(r, size=deg, replace=False)
        adj[v] = tuple(sorted(int(x) for x in picks))
    return blues, reds, adj
