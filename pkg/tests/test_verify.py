import itertools
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from cutpoint.convert import gfa_to_pfa, qfa_to_pfa
from cutpoint.linearize import qfa_to_gfa
from cutpoint.lp import maximize
from cutpoint.models import GFA, PFA
from cutpoint.samplers import random_gqfa, random_rational_gfa
from cutpoint.verify import (
    AlphabetMismatch,
    check_agreement,
    enumerate_words,
    halfspace_shatter,
    machine_values,
    support_shatter,
)
from cutpoint.witness import all_subsets, build_witness, subset_signs, witness_word

F = Fraction
HALF = F(1, 2)


# ---------------------------------------------------------------- words
def test_enumerate_words_counts():
    assert len(enumerate_words("ab", 3)) == 15
    assert enumerate_words("ab", 0) == [()]
    assert len(enumerate_words("abc", 2)) == 13
    assert enumerate_words("ba", 2) == [(), ("b",), ("a",), ("b", "b"), ("b", "a"), ("a", "b"), ("a", "a")]
    with pytest.raises(ValueError):
        enumerate_words("a", -1)


def test_machine_values_match_direct(rng):
    G = random_rational_gfa(rng, 2)
    Q = random_gqfa(rng, 2)
    words = enumerate_words("ab", 3)
    assert machine_values(G, words) == [G.evaluate(w) for w in words]
    assert np.allclose(machine_values(Q, words), [Q.evaluate(w) for w in words], atol=1e-14)
    # out-of-order words still work
    assert machine_values(G, [("b", "a"), ("a",)]) == [G.evaluate("ba"), G.evaluate("a")]


# ---------------------------------------------------------------- agreement
def test_qfa_vs_linearization(rng):
    Q = random_gqfa(rng, 2)
    report = check_agreement(Q, qfa_to_gfa(Q), 5)
    assert report.words_checked == 63
    assert not report.disagreements


def test_gfa_vs_conversion(rng):
    G = random_rational_gfa(rng, 2)
    P, _ = gfa_to_pfa(G)
    report = check_agreement(G, P, 6)
    assert report.ok and report.words_checked == 127


def test_corrupted_pfa_is_caught():
    G = GFA.build([1], {"a": [[-1]]}, [1], cutpoint=0, rational=True)
    P, _ = gfa_to_pfa(G)
    mats = {"a": np.array(P.P["a"])}
    # move all of row 1's mass to the last core state; the PFA stays stochastic
    row = mats["a"][1].copy()
    mats["a"][1, :6] = F(0)
    mats["a"][1, 5] = sum(row[:6])
    bad = PFA.build(P.pi, mats, P.P_end, P.accepting, P.cutpoint, P.alphabet, rational=True)
    assert check_agreement(G, bad, 6).disagreements


def test_alphabet_mismatch():
    G = GFA.build([1], {"a": [[1]]}, [1])
    H = GFA.build([1], {"b": [[1]]}, [1])
    with pytest.raises(AlphabetMismatch):
        check_agreement(G, H, 2)


def test_boundary_values_are_flagged_not_decided():
    G = GFA.build([0.5], {"a": [[1.0]]}, [1.0], cutpoint=0.5)
    H = GFA.build([1.0], {"a": [[1.0]]}, [1.0], cutpoint=0.5)
    report = check_agreement(G, H, 2)
    assert len(report.boundary_flags) == 3 and not report.disagreements and not report.ok


def test_witness_end_to_end_agreement():
    Q = build_witness(2, tests="all")
    P, trace = qfa_to_pfa(Q)
    assert P.m == 14
    words = [witness_word(k, subset_signs(S, 3)) for S in all_subsets(3) for k in (1, 2, 3)]
    report = check_agreement(Q, P, words=words)
    assert report.words_checked == 24 and report.ok


def mutate(P, rng, delta):
    N = P.m - 2
    sym = P.alphabet[int(rng.integers(len(P.alphabet)))]
    i = int(rng.integers(N))
    j, j2 = (int(x) for x in rng.choice(N, 2, replace=False))
    mats = {s: np.array(P.P[s]) for s in P.alphabet}
    m = mats[sym].copy()
    m[i, j] -= delta
    m[i, j2] += delta
    mats[sym] = m
    return PFA.build(P.pi, mats, P.P_end, P.accepting, P.cutpoint, P.alphabet, rational=True)


@pytest.mark.xfail(strict=True, reason="mutants recognizing the same language cap detection near 90-94%")
def test_mutation_sensitivity():
    rng = np.random.default_rng(0)
    detected = total = 0
    for _ in range(20):
        alphabet = ("a", "b", "c")[: int(rng.integers(1, 4))]
        G = random_rational_gfa(rng, int(rng.integers(1, 5)), alphabet=alphabet)
        P, trace = gfa_to_pfa(G)
        if trace.degenerate:
            continue
        for _ in range(3):
            report = check_agreement(G, mutate(P, rng, F(1, 1000)), 6)
            total += 1
            detected += bool(report.disagreements)
    assert detected / total >= 0.95


# ---------------------------------------------------------------- exact LP
def test_lp_small_known():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert res.status == "optimal" and res.value == F(14, 5) and res.x == [F(8, 5), F(6, 5)]


def test_lp_infeasible_and_unbounded():
    assert maximize([1], [[1], [-1]], [1, -2]).status == "infeasible"
    assert maximize([1, 0], [[-1, 1]], [1]).status == "unbounded"


def test_lp_phase_one_needed():
    # x >= 1, y >= 2, x + y <= 5; max 2x + y -> x=3, y=2
    res = maximize([2, 1], [[-1, 0], [0, -1], [1, 1]], [-1, -2, 5])
    assert res.status == "optimal" and res.value == 8 and res.x == [3, 2]


def test_lp_matches_float_solver(rng):
    for _ in range(40):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 6))
        A = rng.integers(-4, 5, size=(m, n))
        b = rng.integers(-3, 8, size=m)
        c = rng.integers(-3, 4, size=n)
        ours = maximize(c.tolist(), A.tolist(), b.tolist())
        ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
        expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
        assert ours.status == expected
        if expected == "optimal":
            assert abs(float(ours.value) + ref.fun) < 1e-7
            x = np.array([float(v) for v in ours.x])
            assert (A @ x <= b + 1e-12).all() and (x >= 0).all()


# ---------------------------------------------------------------- shattering
E1, E2 = [1, 0], [0, 1]


def test_halfspace_vertices_shattered():
    inst = halfspace_shatter([E1, E2], HALF)
    assert inst.shattered and inst.feasible_count == 4


def test_halfspace_midpoint_blocks():
    inst = halfspace_shatter([E1, [HALF, HALF], E2], HALF)
    assert not inst.shattered
    assert not inst.results[(0, 2)][0]
    assert inst.feasible_count == 6


def test_halfspace_witness_vectors_are_valid():
    pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    inst = halfspace_shatter(pts, HALF)
    assert inst.shattered
    for Z, (ok, b) in inst.results.items():
        assert all(0 <= x <= 1 for x in b)
        for i, p in enumerate(inst.points):
            value = sum(x * y for x, y in zip(p, b))
            assert (value > HALF) == (i in Z)


def test_halfspace_guards():
    with pytest.raises(ValueError):
        halfspace_shatter([[1, 0]] * 21, HALF)
    with pytest.raises(ValueError):
        halfspace_shatter([[HALF, HALF / 2]], HALF)


def test_support_shatter_examples():
    assert support_shatter([E1, E2]).shattered
    pts = [[F(1, 3), F(2, 3)], [HALF, HALF], [F(1, 4), F(3, 4)]]
    inst = support_shatter(pts)
    assert not inst.shattered and inst.feasible_count == 2
    with pytest.raises(ValueError):
        support_shatter(pts, HALF)


def random_point(rng, m, support=None, denom=6):
    support = support if support is not None else range(m)
    weights = {j: int(rng.integers(1, denom + 1)) for j in support}
    total = sum(weights.values())
    return [F(weights.get(j, 0), total) for j in range(m)]


def test_support_matches_halfspace_at_zero(rng):
    for _ in range(15):
        m = int(rng.integers(2, 4))
        p = int(rng.integers(1, 4))
        supports = [tuple(j for j in range(m) if rng.random() < 0.6) or (0,) for _ in range(p)]
        pts = [random_point(rng, m, s) for s in supports]
        a, b = halfspace_shatter(pts, 0), support_shatter(pts)
        assert {Z: r[0] for Z, r in a.results.items()} == {Z: r[0] for Z, r in b.results.items()}


@pytest.mark.parametrize("m", [2, 3, 4])
def test_m_plus_one_points_never_shattered(rng, m):
    all_supports = [s for r in range(1, m + 1) for s in itertools.combinations(range(m), r)]
    for _ in range(4):
        idx = rng.choice(len(all_supports), size=m + 1, replace=False)
        pts = [random_point(rng, m, all_supports[i]) for i in idx]
        for mu in (0, HALF):
            assert not halfspace_shatter(pts, mu).shattered
