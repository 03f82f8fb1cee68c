"""Exact conversion of a k-state GFA with cutpoint lambda into a PFA with cutpoint 1/2.

The pipeline, all in exact rational arithmetic:

1. append an inert state so the cutpoint becomes 0 (k+1 states);
2. split signed weights into a nonnegative system of twice the size;
3. border each matrix so all row and column sums vanish;
4. add ``C J`` and rescale by ``C N`` to get strictly positive stochastic matrices;
5. turn the signed final vector into end-marker acceptance probabilities
   routed to two absorbing sinks.

The result has ``2k + 6`` states, or 2 when the language is empty.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .linalg import rational_array, rational_eye, rational_zeros, to_fraction
from .models import GFA, GQFA, PFA

HALF = Fraction(1, 2)


@dataclass(frozen=True, eq=False)
class ConversionTrace:
    """Every intermediate of :func:`gfa_to_pfa`.

    Fields after the first ``None`` are unset when the input is
    degenerate; ``degenerate`` then names the reason.
    """

    shifted: GFA
    u_hat: np.ndarray
    A_hat: Mapping[str, np.ndarray]
    v_hat: np.ndarray
    B: Mapping[str, np.ndarray]
    C: Fraction
    N: int
    s: Fraction
    stochastic: Mapping[str, np.ndarray] | None = None
    g: np.ndarray | None = None
    M_dec: Fraction | None = None
    h: np.ndarray | None = None
    degenerate: str | None = None

    def predicted_acceptance(self, gfa_margin, length: int) -> Fraction:
        """Acceptance probability of the output PFA on a word of ``length``
        symbols whose GFA value exceeds the cutpoint by ``gfa_margin``."""
        if self.degenerate:
            return Fraction(0)
        scale = 2 * self.M_dec * self.s * (self.C * self.N) ** length
        return HALF + to_fraction(gfa_margin) / scale


def shift_cutpoint(G: GFA) -> GFA:
    """(k+1)-state rational GFA with cutpoint 0 and value ``f_G - lambda``."""
    k = G.k
    lam = to_fraction(G.cutpoint)
    u = rational_zeros(k + 1)
    u[:k] = rational_array(G.u)
    u[k] = -lam
    v = rational_zeros(k + 1)
    v[:k] = rational_array(G.v)
    v[k] = Fraction(1)
    A = {}
    for sym in G.alphabet:
        a = rational_zeros((k + 1, k + 1))
        a[:k, :k] = rational_array(G.A[sym])
        a[k, k] = Fraction(1)
        A[sym] = a
    return GFA.build(u, A, v, cutpoint=Fraction(0), alphabet=G.alphabet, rational=True)


def _pos(a: np.ndarray) -> np.ndarray:
    return np.vectorize(lambda x: x if x > 0 else Fraction(0), otypes=[object])(a)


def sign_split(G0: GFA):
    """Nonnegative doubled system ``(u_hat, A_hat, v_hat)`` of a zero-cutpoint GFA.

    ``u_hat A_hat_w v_hat == u A_w v`` for every word.
    """
    if to_fraction(G0.cutpoint) != 0:
        raise ValueError("sign splitting needs a GFA with cutpoint 0")
    u = rational_array(G0.u)
    v = rational_array(G0.v)
    u_hat = np.concatenate([_pos(u), _pos(-u)])
    v_hat = np.concatenate([v, -v])
    A_hat = {}
    for sym in G0.alphabet:
        a = rational_array(G0.A[sym])
        p, n = _pos(a), _pos(-a)
        A_hat[sym] = np.block([[p, n], [n, p]])
    return u_hat, A_hat, v_hat


def zero_sum_embed(A_hat: Mapping[str, np.ndarray]) -> dict:
    """Border each nonnegative d x d matrix into a (d+2) x (d+2) matrix
    whose rows and columns all sum to zero."""
    out = {}
    for sym, a in A_hat.items():
        d = a.shape[0]
        r = a.sum(axis=1)
        c = a.sum(axis=0)
        b = rational_zeros((d + 2, d + 2))
        b[1:d + 1, 0] = -r
        b[1:d + 1, 1:d + 1] = a
        b[d + 1, 0] = sum(r, Fraction(0))
        b[d + 1, 1:d + 1] = -c
        out[sym] = b
    return out


def choose_scale_constant(B: Mapping[str, np.ndarray], margin=1) -> Fraction:
    """Smallest ``max |B_ij| + margin``; strictly dominates every entry."""
    margin = to_fraction(margin)
    if margin <= 0:
        raise ValueError("scale margin must be positive")
    top = max((abs(x) for b in B.values() for x in b.flat), default=Fraction(0))
    return top + margin


def stochasticize(B: Mapping[str, np.ndarray], C, N: int) -> dict:
    """``(B + C J) / (C N)`` per symbol; each result is positive and row-stochastic."""
    C = to_fraction(C)
    out = {}
    for sym, b in B.items():
        worst = max((abs(x) for x in b.flat), default=Fraction(0))
        if worst >= C:
            raise ValueError(f"entry of magnitude {worst} in B[{sym}] is not below C = {C}")
        out[sym] = (b + C) / (C * N)
    return out


def end_marker_decision(g: np.ndarray):
    """``(h, M)`` with ``h = 1/2 + g / (2M)``; ``h`` is None when ``M == 0``."""
    M = max((abs(x) for x in g), default=Fraction(0))
    if M == 0:
        return None, Fraction(0)
    return HALF + g / (2 * M), M


def degenerate_pfa(alphabet=()) -> PFA:
    """Two-state PFA that never accepts."""
    eye = rational_eye(2)
    return PFA.build(
        rational_array([1, 0]),
        {s: eye for s in alphabet},
        eye,
        accepting=[1],
        cutpoint=HALF,
        alphabet=alphabet,
        rational=True,
    )


def _assemble(alphabet, pi_core, stoch, h) -> PFA:
    N = pi_core.shape[0]
    m = N + 2
    acc, rej = N, N + 1
    pi = rational_zeros(m)
    pi[:N] = pi_core
    P = {}
    for sym in alphabet:
        p = rational_zeros((m, m))
        p[:N, :N] = stoch[sym]
        p[acc, acc] = p[rej, rej] = Fraction(1)
        P[sym] = p
    P_end = rational_zeros((m, m))
    P_end[:N, acc] = h
    P_end[:N, rej] = 1 - h
    P_end[acc, acc] = P_end[rej, rej] = Fraction(1)
    return PFA.build(pi, P, P_end, accepting=[acc], cutpoint=HALF, alphabet=alphabet, rational=True)


def gfa_to_pfa(G: GFA, scale_margin=1) -> tuple[PFA, ConversionTrace]:
    """PFA with cutpoint 1/2 recognizing ``{w : f_G(w) > lambda}``.

    Float inputs are read as the exact dyadic rationals they store.
    """
    shifted = shift_cutpoint(G)
    u_hat, A_hat, v_hat = sign_split(shifted)
    B = zero_sum_embed(A_hat)
    d = u_hat.shape[0]
    N = d + 2
    C = choose_scale_constant(B, scale_margin)
    s = sum(u_hat, Fraction(0))
    common = dict(shifted=shifted, u_hat=u_hat, A_hat=A_hat, v_hat=v_hat, B=B, C=C, N=N, s=s)
    if s == 0:
        return degenerate_pfa(G.alphabet), ConversionTrace(**common, degenerate="zero initial vector")

    stoch = stochasticize(B, C, N)
    g = rational_zeros(N)
    g[1:d + 1] = v_hat
    h, M = end_marker_decision(g)
    if h is None:
        return degenerate_pfa(G.alphabet), ConversionTrace(
            **common, stochastic=stoch, g=g, M_dec=M, degenerate="zero final vector")

    pi_core = rational_zeros(N)
    pi_core[1:d + 1] = u_hat / s
    pfa = _assemble(G.alphabet, pi_core, stoch, h)
    return pfa, ConversionTrace(**common, stochastic=stoch, g=g, M_dec=M, h=h)


def qfa_to_pfa(Q: GQFA, scale_margin=1) -> tuple[PFA, ConversionTrace]:
    """Compose linearization with :func:`gfa_to_pfa`: at most ``2 n**2 + 6`` states."""
    from .linearize import qfa_to_gfa

    return gfa_to_pfa(qfa_to_gfa(Q), scale_margin)
