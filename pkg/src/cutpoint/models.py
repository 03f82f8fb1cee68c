"""Generalized, probabilistic and quantum finite automata under strict cutpoints.

Words are sequences of symbols. A plain ``str`` is read character by
character, so multi-character symbols (``"p1"``, ``"tau:+--"``) must be
passed as a list or tuple. The PFA end-marker is implicit and never part
of an input word.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence, Union

import numpy as np

from .linalg import as_float, is_density, is_hermitian, is_rational_array, to_fraction

Word = Sequence[str]
Scalar = Union[float, Fraction]

BOUNDARY_TOL = 1e-9
STOCHASTIC_TOL = 1e-12
KRAUS_TOL = 1e-12
DENSITY_TOL = 1e-10


class UnknownSymbolError(ValueError):
    pass


class BoundaryError(ValueError):
    """A float acceptance value too close to the cutpoint to decide."""

    def __init__(self, value, cutpoint, tol):
        self.value = value
        self.cutpoint = cutpoint
        self.tol = tol
        super().__init__(
            f"value {float(value)!r} is within {tol:g} of cutpoint {float(cutpoint)!r}"
        )


class ValidationError(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(str(report))


def _symbols(word: Word, alphabet) -> tuple:
    w = tuple(word)
    for sym in w:
        if sym not in alphabet:
            raise UnknownSymbolError(f"unknown symbol {sym!r}")
    return w


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=a.dtype, copy=True)
    a.setflags(write=False)
    return a


def _as_matrix(a, rational: bool) -> np.ndarray:
    arr = np.asarray(a)
    if rational or arr.dtype == object:
        from .linalg import rational_array

        return _freeze(rational_array(arr))
    return _freeze(arr.astype(float))


# ----------------------------------------------------------------------------
# GFA
# ----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class GFA:
    """Real linear automaton with value ``u A_w v`` and cutpoint ``cutpoint``.

    Entries are float64 unless any input is an object array of Fractions
    or ``rational=True`` is passed to :meth:`build`.
    """

    alphabet: tuple
    u: np.ndarray
    A: Mapping[str, np.ndarray]
    v: np.ndarray
    cutpoint: Scalar = 0.0

    def __post_init__(self):
        k = self.u.shape[0]
        if self.u.ndim != 1 or self.v.shape != (k,):
            raise ValueError(f"u and v must be vectors of equal length, got {self.u.shape}, {self.v.shape}")
        if set(self.A) != set(self.alphabet):
            raise ValueError("transition matrices do not match the alphabet")
        for sym, a in self.A.items():
            if a.shape != (k, k):
                raise ValueError(f"A[{sym!r}] has shape {a.shape}, expected {(k, k)}")

    @classmethod
    def build(cls, u, A: Mapping, v, cutpoint=0, alphabet=None, rational: bool | None = None) -> "GFA":
        if rational is None:
            rational = any(np.asarray(x).dtype == object for x in [u, v, *A.values()]) or isinstance(
                cutpoint, Fraction
            )
        alphabet = tuple(alphabet) if alphabet is not None else tuple(A)
        cp = to_fraction(cutpoint) if rational else float(cutpoint)
        return cls(
            alphabet,
            _as_matrix(u, rational),
            {s: _as_matrix(A[s], rational) for s in alphabet},
            _as_matrix(v, rational),
            cp,
        )

    @property
    def k(self) -> int:
        return self.u.shape[0]

    @property
    def num_states(self) -> int:
        return self.k

    @property
    def scalar_mode(self) -> str:
        return "rational" if is_rational_array(self.u) else "float64"

    def forward(self, word: Word, start=None) -> np.ndarray:
        x = self.u if start is None else start
        for sym in _symbols(word, self.A):
            x = x @ self.A[sym]
        return x

    def final_vector(self) -> np.ndarray:
        return self.v

    def evaluate(self, word: Word) -> Scalar:
        return self.forward(word) @ self.v


def eval_gfa(G: GFA, word: Word) -> Scalar:
    return G.evaluate(word)


# ----------------------------------------------------------------------------
# PFA
# ----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class PFA:
    """End-marker PFA: value ``pi P_w P_end 1_F``."""

    alphabet: tuple
    pi: np.ndarray
    P: Mapping[str, np.ndarray]
    P_end: np.ndarray
    accepting: frozenset
    cutpoint: Scalar = Fraction(1, 2)

    def __post_init__(self):
        m = self.pi.shape[0]
        if self.pi.ndim != 1:
            raise ValueError("pi must be a vector")
        if set(self.P) != set(self.alphabet):
            raise ValueError("transition matrices do not match the alphabet")
        for sym, p in [*self.P.items(), ("#", self.P_end)]:
            if p.shape != (m, m):
                raise ValueError(f"P[{sym!r}] has shape {p.shape}, expected {(m, m)}")
        bad = [i for i in self.accepting if not 0 <= i < m]
        if bad:
            raise ValueError(f"accepting states {bad} out of range")

    @classmethod
    def build(cls, pi, P: Mapping, P_end, accepting, cutpoint=Fraction(1, 2), alphabet=None,
              rational: bool | None = None) -> "PFA":
        if rational is None:
            rational = any(np.asarray(x).dtype == object for x in [pi, P_end, *P.values()])
        alphabet = tuple(alphabet) if alphabet is not None else tuple(P)
        cp = to_fraction(cutpoint) if rational else float(cutpoint)
        return cls(
            alphabet,
            _as_matrix(pi, rational),
            {s: _as_matrix(P[s], rational) for s in alphabet},
            _as_matrix(P_end, rational),
            frozenset(int(i) for i in accepting),
            cp,
        )

    @property
    def m(self) -> int:
        return self.pi.shape[0]

    @property
    def num_states(self) -> int:
        return self.m

    @property
    def scalar_mode(self) -> str:
        return "rational" if is_rational_array(self.pi) else "float64"

    @cached_property
    def _final(self) -> np.ndarray:
        ind = np.zeros(self.m, dtype=object if self.scalar_mode == "rational" else float)
        ind[:] = Fraction(0) if self.scalar_mode == "rational" else 0.0
        for i in self.accepting:
            ind[i] = Fraction(1) if self.scalar_mode == "rational" else 1.0
        return self.P_end @ ind

    def forward(self, word: Word, start=None) -> np.ndarray:
        x = self.pi if start is None else start
        for sym in _symbols(word, self.P):
            x = x @ self.P[sym]
        return x

    def final_vector(self) -> np.ndarray:
        return self._final

    def evaluate(self, word: Word) -> Scalar:
        return self.forward(word) @ self._final


def eval_pfa(P: PFA, word: Word) -> Scalar:
    return P.evaluate(word)


# ----------------------------------------------------------------------------
# Quantum
# ----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Channel:
    """CPTP map given by Kraus operators; ``kraus`` may be grouped for bookkeeping."""

    kraus: tuple

    def __post_init__(self):
        if not self.kraus:
            raise ValueError("a channel needs at least one Kraus operator")
        shapes = {k.shape for k in self.kraus}
        if len(shapes) != 1:
            raise ValueError(f"Kraus operators of mixed shapes {shapes}")
        (shape,) = shapes
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ValueError(f"Kraus operators must be square, got {shape}")

    @classmethod
    def from_kraus(cls, *groups) -> "Channel":
        ops = []
        for g in groups:
            g = np.asarray(g, dtype=complex)
            ops.extend(g if g.ndim == 3 else [g])
        return cls(tuple(_freeze(np.asarray(k, dtype=complex)) for k in ops))

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    @cached_property
    def completeness_residual(self) -> float:
        total = sum(k.conj().T @ k for k in self.kraus)
        return float(np.abs(total - np.eye(self.dim)).max())

    def __call__(self, rho) -> np.ndarray:
        return apply_channel(self, rho)


def apply_channel(E: Channel, rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """``sum_i K_i rho K_i^dagger``; also valid on any operator, not only states."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (E.dim, E.dim):
        raise ValueError(f"state of shape {rho.shape} does not fit a {E.dim}-dim channel")
    if E.completeness_residual > tol:
        raise ValueError(f"channel is not trace preserving (residual {E.completeness_residual:.3e})")
    ks = np.asarray(E.kraus)
    return np.einsum("kij,jl,kml->im", ks, rho, ks.conj())


def identity_channel(n: int) -> Channel:
    return Channel.from_kraus(np.eye(n))


def replacement_channel(sigma) -> Channel:
    """Channel X -> Tr(X) sigma with Kraus ``sqrt(mu_i)|v_i><j|``."""
    sigma = np.asarray(sigma, dtype=complex)
    n = sigma.shape[0]
    w, vecs = np.linalg.eigh((sigma + sigma.conj().T) / 2)
    ops = []
    for mu, vec in zip(w, vecs.T):
        if mu <= 0:
            continue
        for j in range(n):
            k = np.zeros((n, n), dtype=complex)
            k[:, j] = np.sqrt(mu) * vec
            ops.append(k)
    return Channel.from_kraus(ops)


def stochastic_channel(P) -> Channel:
    """Classical channel of a row-stochastic matrix: Kraus ``sqrt(P[i,j])|j><i|``."""
    P = as_float(P)
    m = P.shape[0]
    ops = []
    for i in range(m):
        for j in range(m):
            if P[i, j] > 0:
                k = np.zeros((m, m), dtype=complex)
                k[j, i] = np.sqrt(P[i, j])
                ops.append(k)
    return Channel.from_kraus(ops)


@dataclass(frozen=True, eq=False)
class GQFA:
    """Measure-once mixed-state one-way QFA.

    ``end_channel``, when set, is applied once after the last input symbol
    and before measurement (used to embed end-marker PFAs).
    """

    alphabet: tuple
    rho0: np.ndarray
    channels: Mapping[str, Channel]
    P_acc: np.ndarray
    cutpoint: float = 0.5
    end_channel: Channel | None = None

    def __post_init__(self):
        n = self.rho0.shape[0]
        if self.rho0.shape != (n, n) or self.P_acc.shape != (n, n):
            raise ValueError("rho0 and P_acc must be square of equal size")
        for sym, ch in self.channels.items():
            if ch.dim != n:
                raise ValueError(f"channel {sym!r} acts on dimension {ch.dim}, expected {n}")
        if self.end_channel is not None and self.end_channel.dim != n:
            raise ValueError("end channel dimension mismatch")

    @classmethod
    def build(cls, rho0, channels: Mapping, P_acc, cutpoint=0.5, alphabet=None, end_channel=None) -> "GQFA":
        alphabet = tuple(alphabet) if alphabet is not None else tuple(channels)
        chans = {s: c if isinstance(c, Channel) else Channel.from_kraus(c) for s, c in channels.items()}
        if end_channel is not None and not isinstance(end_channel, Channel):
            end_channel = Channel.from_kraus(end_channel)
        return cls(alphabet, _freeze(np.asarray(rho0, dtype=complex)), chans,
                   _freeze(np.asarray(P_acc, dtype=complex)), float(cutpoint), end_channel)

    @property
    def n(self) -> int:
        return self.rho0.shape[0]

    @property
    def num_states(self) -> int:
        return self.n

    scalar_mode = "float64"

    def channel(self, symbol: str) -> Channel:
        try:
            return self.channels[symbol]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol {symbol!r}") from None

    def state(self, word: Word) -> np.ndarray:
        rho = self.rho0
        for sym in word:
            rho = apply_channel(self.channel(sym), rho)
        return rho

    def evaluate(self, word: Word) -> float:
        rho = self.state(word)
        if self.end_channel is not None:
            rho = apply_channel(self.end_channel, rho)
        return float(np.trace(self.P_acc @ rho).real)


def eval_qfa(Q: GQFA, word: Word) -> float:
    return Q.evaluate(word)


def pfa_as_qfa(P: PFA) -> GQFA:
    """View an m-state PFA as an m-state quantum automaton on diagonal states."""
    proj = np.zeros((P.m, P.m))
    for i in P.accepting:
        proj[i, i] = 1.0
    return GQFA.build(
        np.diag(as_float(P.pi)),
        {s: stochastic_channel(P.P[s]) for s in P.alphabet},
        proj,
        cutpoint=float(P.cutpoint),
        alphabet=P.alphabet,
        end_channel=stochastic_channel(P.P_end),
    )


# ----------------------------------------------------------------------------
# Cutpoint decisions
# ----------------------------------------------------------------------------
def decide(value, cutpoint, boundary_tol: float = BOUNDARY_TOL) -> bool:
    """Strict comparison ``value > cutpoint``.

    Exact when ``value`` is a Fraction; otherwise values within
    ``boundary_tol`` of the cutpoint raise :class:`BoundaryError`.
    """
    if isinstance(value, Fraction):
        return value > to_fraction(cutpoint)
    value = float(value)
    cp = float(cutpoint)
    if abs(value - cp) <= boundary_tol:
        raise BoundaryError(value, cp, boundary_tol)
    return value > cp


def accepts(machine, word: Word, boundary_tol: float = BOUNDARY_TOL) -> bool:
    return decide(machine.evaluate(word), machine.cutpoint, boundary_tol)


# ----------------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------------
@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    residual: float

    def __str__(self):
        return f"{self.kind} at {self.where} (residual {self.residual:.3g})"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    def add(self, kind, where, residual):
        self.violations.append(Violation(kind, where, float(residual)))

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


def _check_distribution(report, vec, where, exact):
    for j, x in enumerate(vec):
        if x < 0:
            report.add("negative probability", f"{where}[{j}]", -x)
    total = sum(vec)
    resid = abs(total - 1)
    if (resid != 0) if exact else (resid > STOCHASTIC_TOL):
        report.add("not stochastic", where, resid)


def _check_channel(report, ch: Channel, where, tol=KRAUS_TOL):
    if ch.completeness_residual > tol:
        report.add("not trace preserving", where, ch.completeness_residual)


def validate(machine, tol: float | None = None) -> ValidationReport:
    report = ValidationReport()
    if isinstance(machine, GFA):
        if machine.scalar_mode == "float64":
            for name, arr in [("u", machine.u), ("v", machine.v), *[(f"A[{s}]", a) for s, a in machine.A.items()]]:
                if not np.all(np.isfinite(arr)):
                    report.add("non-finite entry", name, float("inf"))
    elif isinstance(machine, PFA):
        exact = machine.scalar_mode == "rational"
        _check_distribution(report, machine.pi, "pi", exact)
        for sym in machine.alphabet:
            for i, row in enumerate(machine.P[sym]):
                _check_distribution(report, row, f"P[{sym}] row {i}", exact)
        for i, row in enumerate(machine.P_end):
            _check_distribution(report, row, f"P[#] row {i}", exact)
        if not 0 <= machine.cutpoint < 1:
            report.add("cutpoint outside [0,1)", "cutpoint", machine.cutpoint)
    elif isinstance(machine, Channel):
        _check_channel(report, machine, "channel", KRAUS_TOL if tol is None else tol)
    elif isinstance(machine, GQFA):
        dtol = DENSITY_TOL if tol is None else tol
        if not is_density(machine.rho0, dtol):
            w = np.linalg.eigvalsh((machine.rho0 + machine.rho0.conj().T) / 2)
            report.add("not a density matrix", "rho0",
                       max(-w.min(), abs(np.trace(machine.rho0).real - 1)))
        p = machine.P_acc
        if not is_hermitian(p, dtol):
            report.add("projector not Hermitian", "P_acc", np.abs(p - p.conj().T).max())
        idem = np.abs(p @ p - p).max()
        if idem > dtol:
            report.add("projector not idempotent", "P_acc", idem)
        for sym, ch in machine.channels.items():
            _check_channel(report, ch, f"E[{sym}]", KRAUS_TOL if tol is None else tol)
        if machine.end_channel is not None:
            _check_channel(report, machine.end_channel, "E[#]", KRAUS_TOL if tol is None else tol)
        if not 0 <= machine.cutpoint < 1:
            report.add("cutpoint outside [0,1)", "cutpoint", machine.cutpoint)
    else:
        raise TypeError(f"cannot validate {type(machine).__name__}")
    return report
