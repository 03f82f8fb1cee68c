"""Prepare-test quantum automata that shatter n**2 - 1 prepared states.

Prepare symbols ``p1 .. pd`` replace the state by ``rho_k = I/n + eps H_k``
for the traceless Gell-Mann basis ``H_1 .. H_d``; a test symbol
``tau:<signs>`` measures the effect ``E_s = I/2 + t sum_j s_j H_j`` against
the fixed projector ``|1><1|``. On ``p_k tau_s`` the acceptance probability
is ``1/2 + t eps s_k``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import HermitianBasis, gell_mann_basis, operator_norm, spectral_decompose
from .models import GQFA, Channel, UnknownSymbolError, accepts, replacement_channel

TEST_PREFIX = "tau:"


def sign_string(s) -> str:
    return "".join("+" if x > 0 else "-" for x in s)


def parse_signs(text: str) -> tuple:
    if text.startswith(TEST_PREFIX):
        text = text[len(TEST_PREFIX):]
    if not text or set(text) - {"+", "-"}:
        raise ValueError(f"malformed sign vector {text!r}")
    return tuple(1 if c == "+" else -1 for c in text)


def test_symbol(s) -> str:
    return TEST_PREFIX + sign_string(s)


def prepare_symbol(k: int) -> str:
    return f"p{k}"


def subset_signs(subset, d: int) -> tuple:
    """+1 on ``subset`` (1-based indices), -1 elsewhere."""
    subset = set(subset)
    return tuple(1 if k in subset else -1 for k in range(1, d + 1))


def choose_epsilon(basis: HermitianBasis, n: int | None = None) -> float:
    n = basis.dim if n is None else n
    return 1.0 / (2 * n * max(operator_norm(h) for h in basis))


def max_sign_norm(basis: HermitianBasis) -> float:
    """Exact ``max_s ||sum_j s_j H_j||``; enumerates 2**d sign vectors."""
    d = len(basis)
    if d > 16:
        raise ValueError(f"refusing to enumerate 2**{d} sign vectors")
    return max(operator_norm(np.tensordot(s, basis.elements, axes=1))
               for s in itertools.product((1, -1), repeat=d))


def choose_t(basis: HermitianBasis, exact_max: bool = False) -> tuple[float, float]:
    """Return ``(t, M_bound)`` with ``t * M_bound = 1/4``.

    ``M_bound`` is the triangle bound ``sum_j ||H_j||`` unless
    ``exact_max`` asks for the enumerated maximum.
    """
    bound = max_sign_norm(basis) if exact_max else sum(operator_norm(h) for h in basis)
    return 1.0 / (4 * bound), bound


@dataclass(frozen=True, eq=False)
class WitnessParams:
    n: int
    basis: HermitianBasis
    epsilon: float
    t: float
    M_bound: float

    @property
    def d(self) -> int:
        return len(self.basis)

    @property
    def margin(self) -> float:
        return self.t * self.epsilon

    def rho(self, k: int) -> np.ndarray:
        return np.eye(self.n) / self.n + self.epsilon * self.basis[k - 1]

    def observable(self, s) -> np.ndarray:
        return np.tensordot(np.asarray(s, dtype=float), self.basis.elements, axes=1)


def witness_params(n: int, exact_max: bool = False) -> WitnessParams:
    if n < 2:
        raise ValueError(f"witness dimension must be >= 2, got {n}")
    basis = gell_mann_basis(n, traceless_only=True)
    eps = choose_epsilon(basis, n)
    t, bound = choose_t(basis, exact_max)
    return WitnessParams(n, basis, eps, t, bound)


def prepare_channel(params: WitnessParams, k: int) -> Channel:
    if not 1 <= k <= params.d:
        raise IndexError(f"prepare index {k} outside 1..{params.d}")
    return replacement_channel(params.rho(k))


@dataclass(frozen=True, eq=False)
class TestSymbol:
    s: tuple
    X: np.ndarray
    E: np.ndarray
    channel: Channel

    @property
    def name(self) -> str:
        return test_symbol(self.s)


def test_channel(params: WitnessParams, s) -> TestSymbol:
    s = tuple(int(x) for x in s)
    if len(s) != params.d or any(x not in (1, -1) for x in s):
        raise ValueError(f"expected a sign vector of length {params.d}, got {s}")
    X = params.observable(s)
    E = np.eye(params.n) / 2 + params.t * X
    accept = np.zeros(params.n)
    accept[0] = 1.0
    reject = np.zeros(params.n)
    reject[1] = 1.0
    K, L = [], []
    for lam, psi in spectral_decompose(E):
        lam = min(max(lam, 0.0), 1.0)
        K.append(np.sqrt(lam) * np.outer(accept, psi.conj()))
        L.append(np.sqrt(1 - lam) * np.outer(reject, psi.conj()))
    return TestSymbol(s, X, E, Channel.from_kraus(K, L))


# library functions, not pytest cases
test_channel.__test__ = False
test_symbol.__test__ = False
TestSymbol.__test__ = False


@dataclass(frozen=True, eq=False)
class WitnessQFA(GQFA):
    """Witness automaton; test symbols not in ``alphabet`` are built on demand."""

    params: WitnessParams | None = None
    _tests: dict = field(default_factory=dict, repr=False)

    def test(self, s) -> TestSymbol:
        s = tuple(s)
        if s not in self._tests:
            self._tests[s] = test_channel(self.params, s)
        return self._tests[s]

    def channel(self, symbol: str) -> Channel:
        if symbol in self.channels:
            return self.channels[symbol]
        if symbol.startswith(TEST_PREFIX):
            try:
                s = parse_signs(symbol)
            except ValueError:
                raise UnknownSymbolError(f"unknown symbol {symbol!r}") from None
            if len(s) == self.params.d:
                return self.test(s).channel
        raise UnknownSymbolError(f"unknown symbol {symbol!r}")

    @property
    def prepare_symbols(self) -> tuple:
        return tuple(prepare_symbol(k) for k in range(1, self.params.d + 1))


def build_witness(n: int, tests=(), exact_max: bool = False) -> WitnessQFA:
    """Witness machine on C^n with the listed test sign vectors in its alphabet.

    ``tests`` may hold sign tuples or strings like ``"+--"``; pass
    ``"all"`` to materialize every one of the ``2**(n**2-1)`` tests.
    """
    params = witness_params(n, exact_max)
    d = params.d
    if isinstance(tests, str) and tests == "all":
        tests = list(itertools.product((1, -1), repeat=d))
    channels = {prepare_symbol(k): prepare_channel(params, k) for k in range(1, d + 1)}
    cache = {}
    for s in tests:
        s = parse_signs(s) if isinstance(s, str) else tuple(s)
        sym = test_channel(params, s)
        cache[sym.s] = sym
        channels[sym.name] = sym.channel
    p_acc = np.zeros((n, n), dtype=complex)
    p_acc[0, 0] = 1
    rho0 = np.eye(n, dtype=complex) / n
    for a in (rho0, p_acc):
        a.setflags(write=False)
    return WitnessQFA(tuple(channels), rho0, channels, p_acc, 0.5, None, params, cache)


def witness_word(k: int, s) -> tuple:
    return (prepare_symbol(k), test_symbol(s))


def witness_acceptance(Q: WitnessQFA, k: int, s) -> float:
    return Q.evaluate(witness_word(k, s))


def predicted_acceptance(params: WitnessParams, k: int, s) -> float:
    return 0.5 + params.t * params.epsilon * s[k - 1]


@dataclass
class ShatterReport:
    checks: int = 0
    failures: list = field(default_factory=list)
    min_margin: float = float("inf")

    @property
    def passed(self) -> int:
        return self.checks - len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        return f"{self.passed}/{self.checks} checks passed"


def verify_shattering(Q: WitnessQFA, subsets) -> ShatterReport:
    """Check that the test for each subset accepts exactly the prepared states in it."""
    d = Q.params.d
    report = ShatterReport()
    for S in subsets:
        S = set(S)
        if not S <= set(range(1, d + 1)):
            raise ValueError(f"subset {sorted(S)} is not inside 1..{d}")
        s = subset_signs(S, d)
        for k in range(1, d + 1):
            word = witness_word(k, s)
            value = Q.evaluate(word)
            decision = accepts(Q, word)
            report.checks += 1
            report.min_margin = min(report.min_margin, abs(value - Q.cutpoint))
            if decision != (k in S):
                report.failures.append((sorted(S), k, value))
    return report


def all_subsets(d: int):
    for r in range(d + 1):
        yield from itertools.combinations(range(1, d + 1), r)
