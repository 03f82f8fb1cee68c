"""Matrix kernel shared by the automaton models.

Two scalar modes are supported:

* ``float64`` -- real or complex numpy arrays, used for everything quantum;
* ``rational`` -- numpy object arrays holding :class:`fractions.Fraction`,
  used for the exact GFA -> PFA pipeline.

Complex matrices are always float64.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

HERMITIAN_TOL = 1e-10


# ----------------------------------------------------------------------------
# Scalars
# ----------------------------------------------------------------------------
def to_fraction(x) -> Fraction:
    """Exact rational value of ``x``.

    Floats are read as the dyadic rational they denote, strings may be
    ``"p/q"``, ``"p"`` or a decimal literal.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, np.integer, Rational)):
        return Fraction(int(x)) if isinstance(x, np.integer) else Fraction(x)
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise ValueError(f"non-finite scalar {x!r}")
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def rational_array(a) -> np.ndarray:
    """Object array of Fractions with the same shape as ``a``."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_fraction(x)
    return out


def is_rational_array(a: np.ndarray) -> bool:
    return a.dtype == object


def rational_eye(n: int) -> np.ndarray:
    out = np.full((n, n), Fraction(0), dtype=object)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def rational_zeros(shape) -> np.ndarray:
    return np.full(shape, Fraction(0), dtype=object)


def as_float(a) -> np.ndarray:
    """Float64 copy of a (possibly rational) array."""
    arr = np.asarray(a)
    if arr.dtype == object:
        return np.vectorize(float, otypes=[float])(arr) if arr.size else arr.astype(float)
    return arr.astype(float)


# ----------------------------------------------------------------------------
# Hilbert-Schmidt geometry
# ----------------------------------------------------------------------------
def _check_square(a: np.ndarray, name: str = "matrix") -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr(A^dagger B)."""
    a = np.asarray(a)
    b = np.asarray(b)
    _check_square(a, "A")
    _check_square(b, "B")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    # Tr(A^† B) = sum_ij conj(A_ij) B_ij
    return complex(np.sum(np.conj(a) * b))


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    return bool(np.abs(h - h.conj().T).max(initial=0.0) <= tol)


def _require_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    _check_square(h)
    resid = np.abs(h - h.conj().T).max(initial=0.0)
    if resid > tol:
        raise ValueError(f"matrix is not Hermitian (residual {resid:.3e})")
    return h


def spectral_decompose(h, tol: float = HERMITIAN_TOL) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of a Hermitian matrix, eigenvalues in descending order."""
    h = _require_hermitian(h, tol)
    # symmetrize away the sub-tolerance skew part before eigh
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    order = np.argsort(w)[::-1]
    return [(float(w[i]), v[:, i].copy()) for i in order]


def operator_norm(h, tol: float = HERMITIAN_TOL) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    h = _require_hermitian(h, tol)
    if h.size == 0:
        return 0.0
    w = np.linalg.eigvalsh((h + h.conj().T) / 2)
    return float(np.abs(w).max())


def is_density(rho, tol: float = 1e-10) -> bool:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if not is_hermitian(rho, tol):
        return False
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return bool(w.min() >= -tol and abs(np.trace(rho).real - 1.0) <= tol)


# ----------------------------------------------------------------------------
# Operator bases
# ----------------------------------------------------------------------------
class HermitianBasis:
    """Hilbert-Schmidt orthonormal basis of Hermitian n x n matrices.

    With ``traceless_only`` the basis spans the traceless subspace
    (n**2 - 1 elements); otherwise ``I/sqrt(n)`` is element 0.
    """

    def __init__(self, dim: int, elements, traceless_only: bool):
        self.dim = dim
        self.traceless_only = traceless_only
        stacked = np.array([np.asarray(e, dtype=complex) for e in elements])
        stacked.setflags(write=False)
        self.elements = stacked

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    def gram(self) -> np.ndarray:
        """Matrix of pairwise inner products Tr(B_i^dagger B_j)."""
        flat = self.elements.reshape(len(self), -1)
        return flat.conj() @ flat.T

    def __repr__(self) -> str:
        kind = "traceless" if self.traceless_only else "full"
        return f"HermitianBasis(dim={self.dim}, {kind}, {len(self)} elements)"


def gell_mann_basis(n: int, traceless_only: bool = False) -> HermitianBasis:
    """Generalized Gell-Mann matrices scaled to unit Hilbert-Schmidt norm.

    Order: symmetric pairs (j<k, lexicographic), antisymmetric pairs,
    diagonal matrices, with ``I/sqrt(n)`` prepended unless
    ``traceless_only``.
    """
    if n < 2:
        raise ValueError(f"basis dimension must be >= 2, got {n}")
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    scale = 1 / np.sqrt(2)
    elements = []
    if not traceless_only:
        elements.append(np.eye(n, dtype=complex) / np.sqrt(n))
    for j, k in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = m[k, j] = 1
        elements.append(m * scale)
    for j, k in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        elements.append(m * scale)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1
        diag[l] = -l
        elements.append(np.diag(diag).astype(complex) * np.sqrt(2 / (l * (l + 1))) * scale)
    return HermitianBasis(n, elements, traceless_only)
