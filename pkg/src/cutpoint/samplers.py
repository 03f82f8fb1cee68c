"""Random machines for property tests and demos."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .models import GFA, GQFA, PFA, Channel


def random_rational(rng: np.random.Generator, lo=-3, hi=3, denom: int = 2) -> Fraction:
    return Fraction(int(rng.integers(lo * denom, hi * denom + 1)), denom)


def random_rational_gfa(rng, k: int, alphabet=("a", "b"), bound=3, cut_bound=2, denom: int = 2) -> GFA:
    """Entries uniform on the grid ``Z/denom`` within ``[-bound, bound]``."""
    def mat(*shape):
        out = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            out[idx] = random_rational(rng, -bound, bound, denom)
        return out

    return GFA.build(mat(k), {s: mat(k, k) for s in alphabet}, mat(k),
                     cutpoint=random_rational(rng, -cut_bound, cut_bound, denom),
                     alphabet=alphabet, rational=True)


def random_stochastic(rng, m: int) -> np.ndarray:
    p = rng.random((m, m)) + 1e-3
    return p / p.sum(axis=1, keepdims=True)


def random_pfa(rng, m: int, alphabet=("a", "b"), cutpoint=0.5) -> PFA:
    pi = rng.random(m) + 1e-3
    accepting = [i for i in range(m) if rng.random() < 0.5] or [0]
    return PFA.build(pi / pi.sum(), {s: random_stochastic(rng, m) for s in alphabet},
                     random_stochastic(rng, m), accepting, cutpoint=cutpoint, alphabet=alphabet)


def random_density(rng, n: int, rank: int | None = None) -> np.ndarray:
    g = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, n: int) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + g.conj().T) / 2


def random_channel(rng, n: int, num_kraus: int = 3) -> Channel:
    """Kraus operators cut from a random isometry C^n -> C^(n * num_kraus)."""
    g = rng.normal(size=(n * num_kraus, n)) + 1j * rng.normal(size=(n * num_kraus, n))
    q, _ = np.linalg.qr(g)
    return Channel.from_kraus([q[i * n:(i + 1) * n] for i in range(num_kraus)])


def random_projector(rng, n: int, rank: int | None = None) -> np.ndarray:
    rank = rank if rank is not None else int(rng.integers(1, n))
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(g)
    v = q[:, :rank]
    return v @ v.conj().T


def random_gqfa(rng, n: int, alphabet=("a", "b"), cutpoint=0.5) -> GQFA:
    return GQFA.build(random_density(rng, n), {s: random_channel(rng, n) for s in alphabet},
                      random_projector(rng, n), cutpoint=cutpoint, alphabet=alphabet)
