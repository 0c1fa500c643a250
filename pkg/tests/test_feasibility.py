import numpy as np
import pytest

from caphs.core import Assignment, Element, Instance, Solution, ValidationError, generate_instance
from caphs.feasibility import (
    JIT_ENABLED,
    OracleTooLarge,
    _edmonds_karp,
    _edmonds_karp_py,
    assignment_ok,
    brute_force_assignment,
    build_network,
    check_feasible,
    coverage,
    max_flow,
)

from _oracles import assign_backtracking, ford_fulkerson_value

GEN = {
    "n": 5,
    "m": 6,
    "d": 3,
    "cap_range": (1, 2),
    "weight_range": (1, 1),
    "mult_range": (1, 2),
}


def random_network(rng, nodes):
    cap = rng.integers(0, 5, size=(nodes, nodes))
    np.fill_diagonal(cap, 0)
    return cap.astype(np.int64)


def test_flow_kernel_matches_reference_search():
    rng = np.random.default_rng(42)
    for _ in range(60):
        nodes = int(rng.integers(2, 9))
        cap = random_network(rng, nodes)
        flow = np.zeros_like(cap)
        got = _edmonds_karp(cap.copy(), flow, 0, nodes - 1)
        want = ford_fulkerson_value(cap, 0, nodes - 1)
        assert got == want


def test_python_fallback_matches_active_kernel():
    rng = np.random.default_rng(7)
    for _ in range(25):
        nodes = int(rng.integers(2, 8))
        cap = random_network(rng, nodes)
        a = _edmonds_karp(cap.copy(), np.zeros_like(cap), 0, nodes - 1)
        b = _edmonds_karp_py(cap.copy(), np.zeros_like(cap), 0, nodes - 1)
        assert a == b


def test_build_network_shape():
    inst = generate_instance(GEN, seed=3)
    sol = Solution(copies={0: 1, 2: 1})
    net = build_network(inst, sol)
    assert net.labels[0] == "source"
    assert net.labels[-1] == "sink"
    assert net.labels[1] == ("set", 0)
    assert ("elem", 0) in net.labels and ("elem", 2) in net.labels
    assert net.cap.shape == (1 + inst.m + 2 + 1,) * 2
    res = max_flow(net)
    assert 0 <= res.value <= inst.m
    for (_, _), f in res.flow.items():
        assert f >= 0


def test_check_feasible_agrees_with_backtracking():
    rng = np.random.default_rng(11)
    agree = 0
    for seed in range(40):
        inst = generate_instance(GEN, seed=seed)
        for _ in range(10):
            copies = {}
            for e in inst.elements:
                if rng.random() < 0.5:
                    hi = e.mult if e.mult is not None else 2
                    copies[e.id] = int(rng.integers(1, hi + 1))
            sol = Solution(copies=copies)
            got = check_feasible(inst, sol)
            want = assign_backtracking(inst, copies)
            assert (got is None) == (want is None)
            if got is not None:
                assert assignment_ok(inst, sol, got)
                agree += 1
    assert agree > 40  # sanity: a decent share must be feasible


def test_check_feasible_rejects_mult_violation():
    inst = Instance(elements=(Element(id=0, cap=3, mult=1),), family=((0,),), d=1)
    with pytest.raises(ValidationError):
        check_feasible(inst, Solution(copies={0: 2}))


def test_brute_force_assignment_matches_flow():
    for seed in range(30):
        inst = generate_instance(GEN, seed=100 + seed)
        sol = Solution(copies={e.id: 1 for e in inst.elements[:3]})
        flow_asg = check_feasible(inst, sol)
        brute_asg = brute_force_assignment(inst, sol)
        assert (flow_asg is None) == (brute_asg is None)
        if brute_asg is not None:
            assert assignment_ok(inst, sol, brute_asg)


def test_brute_force_assignment_guards_size():
    inst = generate_instance({**GEN, "m": 13}, seed=0)
    sol = Solution(copies={e.id: 1 for e in inst.elements})
    with pytest.raises(OracleTooLarge):
        brute_force_assignment(inst, sol)


def test_assignment_ok_rejects_bad_maps():
    inst = Instance(
        elements=(Element(id=0, cap=1), Element(id=1, cap=1)),
        family=((0, 1), (0, 1)),
        d=2,
    )
    sol = Solution(copies={0: 1})
    ok = Assignment(target={0: 0, 1: 0})
    assert not assignment_ok(inst, sol, ok)  # cap 1, load 2
    assert assignment_ok(inst, Solution(copies={0: 1, 1: 1}), Assignment(target={0: 0, 1: 1}))
    assert not assignment_ok(inst, sol, Assignment(target={0: 0}))  # partial
    assert not assignment_ok(inst, sol, Assignment(target={0: 1, 1: 0}))  # 1 unbought


def test_unbought_member_is_never_assigned():
    inst = Instance(
        elements=(Element(id=0, cap=5), Element(id=1, cap=5)),
        family=((0, 1),),
        d=2,
    )
    asg = check_feasible(inst, Solution(copies={1: 1}))
    assert asg is not None
    assert asg.target == {0: 1}


def test_coverage_counts_only_given_indices():
    asg = Assignment(target={0: 7, 1: 7, 2: 3})
    assert coverage(asg, 7, [0, 1, 2]) == 2
    assert coverage(asg, 7, [1]) == 1
    assert coverage(asg, 7, []) == 0
    assert coverage(asg, 3, [0, 1]) == 0


def test_zero_capacity_element_counts_for_nothing():
    inst = Instance(
        elements=(Element(id=0, cap=0), Element(id=1, cap=1)),
        family=((0, 1),),
        d=2,
    )
    assert check_feasible(inst, Solution(copies={0: 1})) is None
    assert check_feasible(inst, Solution(copies={0: 1, 1: 1})) is not None


def test_jit_flag_is_consistent():
    import caphs.feasibility as fz

    if JIT_ENABLED:
        assert fz._edmonds_karp is not fz._edmonds_karp_py
    else:
        assert fz._edmonds_karp is fz._edmonds_karp_py
