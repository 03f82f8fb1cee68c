"""Brute-force oracles: word-by-word agreement and simplex shattering."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .linalg import to_fraction
from .lp import maximize
from .models import GQFA, BoundaryError, apply_channel, decide

MAX_SHATTER_POINTS = 20


class AlphabetMismatch(ValueError):
    pass


def enumerate_words(alphabet, max_len: int) -> list[tuple]:
    """All words up to ``max_len``, by length then symbol-table order."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    words = []
    for length in range(max_len + 1):
        words.extend(itertools.product(alphabet, repeat=length))
    return words


def machine_values(machine, words) -> list:
    """Values on ``words``, reusing the state of each word's longest prefix.

    Words must be prefix-closed in enumeration order (as produced by
    :func:`enumerate_words`); other prefixes are recomputed from scratch.
    """
    quantum = isinstance(machine, GQFA)
    states = {}

    def state(w):
        if w in states:
            return states[w]
        if not w:
            s = machine.rho0 if quantum else machine.forward(())
        elif quantum:
            s = apply_channel(machine.channel(w[-1]), state(w[:-1]))
        else:
            s = machine.forward(w[-1:], start=state(w[:-1]))
        states[w] = s
        return s

    out = []
    if quantum:
        for w in words:
            rho = state(tuple(w))
            if machine.end_channel is not None:
                rho = apply_channel(machine.end_channel, rho)
            out.append(float(np.trace(machine.P_acc @ rho).real))
    else:
        final = machine.final_vector()
        out = [state(tuple(w)) @ final for w in words]
    return out


@dataclass
class AgreementReport:
    words_checked: int = 0
    disagreements: list = field(default_factory=list)
    boundary_flags: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.boundary_flags

    def __str__(self):
        return (f"{self.words_checked} words checked, {len(self.disagreements)} disagreements, "
                f"{len(self.boundary_flags)} boundary flags")


def check_agreement(A, B, max_len: int | None = None, tol: float = 1e-9, words=None) -> AgreementReport:
    """Compare strict-cutpoint decisions of two machines word by word."""
    if set(A.alphabet) != set(B.alphabet):
        raise AlphabetMismatch(f"alphabets differ: {sorted(A.alphabet)} vs {sorted(B.alphabet)}")
    if words is None:
        if max_len is None:
            raise ValueError("give either max_len or an explicit word list")
        words = enumerate_words(A.alphabet, max_len)
    words = [tuple(w) for w in words]
    va = machine_values(A, words)
    vb = machine_values(B, words)
    report = AgreementReport(len(words))
    for w, a, b in zip(words, va, vb):
        verdicts = []
        for value, machine in ((a, A), (b, B)):
            try:
                verdicts.append(decide(value, machine.cutpoint, tol))
            except BoundaryError:
                report.boundary_flags.append((w, value, abs(float(value) - float(machine.cutpoint))))
                verdicts.append(None)
        if None not in verdicts and verdicts[0] != verdicts[1]:
            report.disagreements.append((w, a, b))
    return report


# ----------------------------------------------------------------------------
# Shattering on the probability simplex
# ----------------------------------------------------------------------------
@dataclass
class ShatterInstance:
    points: list
    mu: Fraction
    results: dict = field(default_factory=dict)  # subset -> (feasible, witness b or support)

    @property
    def shattered(self) -> bool:
        return len(self.results) == 2 ** len(self.points) and all(r[0] for r in self.results.values())

    @property
    def feasible_count(self) -> int:
        return sum(1 for r in self.results.values() if r[0])


def _as_points(points) -> list:
    pts = [[to_fraction(x) for x in p] for p in points]
    if not pts:
        return pts
    m = len(pts[0])
    for p in pts:
        if len(p) != m:
            raise ValueError("points live in simplices of different dimension")
        if any(x < 0 for x in p) or sum(p) != 1:
            raise ValueError(f"{[str(x) for x in p]} is not a probability vector")
    return pts


def _subsets(p: int):
    for r in range(p + 1):
        yield from itertools.combinations(range(p), r)


def realize_subset(points, inside, mu):
    """Maximize the slack ``delta`` for a threshold vector ``b`` in [0,1]^m
    putting exactly ``inside`` strictly above ``mu``. Returns ``(delta, b)``."""
    m = len(points[0])
    inside = set(inside)
    A, rhs = [], []
    for i, p in enumerate(points):
        if i in inside:
            # p.b >= mu + delta
            A.append([-x for x in p] + [Fraction(1)])
            rhs.append(-mu)
        else:
            A.append(list(p) + [Fraction(0)])
            rhs.append(mu)
    for j in range(m + 1):
        row = [Fraction(0)] * (m + 1)
        row[j] = Fraction(1)
        A.append(row)
        rhs.append(Fraction(1))
    res = maximize([0] * m + [1], A, rhs)
    if res.status != "optimal":
        return Fraction(-1), None
    return res.value, res.x[:m]


def halfspace_shatter(points, mu) -> ShatterInstance:
    """Decide for each subset whether some ``{x : x.b > mu}``, ``b`` in [0,1]^m, cuts it out."""
    pts = _as_points(points)
    if len(pts) > MAX_SHATTER_POINTS:
        raise ValueError(f"at most {MAX_SHATTER_POINTS} points supported, got {len(pts)}")
    mu = to_fraction(mu)
    inst = ShatterInstance(pts, mu)
    for Z in _subsets(len(pts)):
        delta, b = realize_subset(pts, Z, mu)
        inst.results[Z] = (delta > 0, b)
    return inst


def support_shatter(points, mu=0) -> ShatterInstance:
    """Shattering at cutpoint 0, where a concept is fixed by the support of ``b``."""
    if to_fraction(mu) != 0:
        raise ValueError("support shattering only applies at cutpoint 0")
    pts = _as_points(points)
    if len(pts) > MAX_SHATTER_POINTS:
        raise ValueError(f"at most {MAX_SHATTER_POINTS} points supported, got {len(pts)}")
    m = len(pts[0]) if pts else 0
    realized = {}
    for support in _subsets(m):
        cut = tuple(i for i, p in enumerate(pts) if any(p[j] > 0 for j in support))
        realized.setdefault(cut, support)
    inst = ShatterInstance(pts, Fraction(0))
    for Z in _subsets(len(pts)):
        inst.results[Z] = (Z in realized, realized.get(Z))
    return inst
