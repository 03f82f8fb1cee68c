"""Linearization of an n-state quantum automaton into an n**2-state GFA.

Density operators are expanded in the full Gell-Mann basis (``B_0 = I/sqrt(n)``);
each channel becomes a real n**2 x n**2 matrix acting on the coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .linalg import HermitianBasis, gell_mann_basis
from .models import GFA, GQFA, Channel, ValidationError, apply_channel, validate

IMAG_TOL = 1e-10


def coords(rho, basis: HermitianBasis, tol: float = IMAG_TOL) -> np.ndarray:
    """Real coordinates ``Tr(B_i rho)`` of a Hermitian operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (basis.dim, basis.dim):
        raise ValueError(f"operator of shape {rho.shape} does not match basis dimension {basis.dim}")
    skew = np.abs(rho - rho.conj().T).max()
    if skew > tol:
        raise ValueError(f"operator is not Hermitian (residual {skew:.3e})")
    # Tr(B_i rho) = sum_ab B_i[a,b] rho[b,a]
    x = np.einsum("iab,ba->i", basis.elements, rho)
    if np.abs(x.imag).max() > tol:
        raise ValueError("basis coordinates have a non-negligible imaginary part")
    return x.real


def from_coords(x, basis: HermitianBasis) -> np.ndarray:
    return np.einsum("i,iab->ab", np.asarray(x, dtype=float), basis.elements)


def channel_matrix(E: Channel, basis: HermitianBasis) -> np.ndarray:
    """Matrix M with ``E(B_j) = sum_i M[i, j] B_i``."""
    if E.dim != basis.dim:
        raise ValueError(f"channel dimension {E.dim} does not match basis dimension {basis.dim}")
    cols = [coords(apply_channel(E, b), basis) for b in basis]
    return np.column_stack(cols)


@dataclass(frozen=True, eq=False)
class LinearizationContext:
    basis: HermitianBasis
    M: Mapping[str, np.ndarray]
    nu: np.ndarray
    vfin: np.ndarray


def linearization(Q: GQFA, basis: HermitianBasis | None = None) -> LinearizationContext:
    report = validate(Q)
    if not report.ok:
        raise ValidationError(report)
    basis = basis or gell_mann_basis(Q.n)
    M = {s: channel_matrix(Q.channel(s), basis) for s in Q.alphabet}
    vfin = np.array([np.trace(Q.P_acc @ b).real for b in basis])
    if Q.end_channel is not None:
        # f = vfin . M_end x  =>  fold the end channel into the final vector
        vfin = channel_matrix(Q.end_channel, basis).T @ vfin
    return LinearizationContext(basis, M, coords(Q.rho0, basis), vfin)


def qfa_to_gfa(Q: GQFA) -> GFA:
    """n**2-state GFA with the same word function as ``Q``."""
    ctx = linearization(Q)
    return GFA.build(ctx.nu, {s: m.T for s, m in ctx.M.items()}, ctx.vfin,
                     cutpoint=Q.cutpoint, alphabet=Q.alphabet, rational=False)
