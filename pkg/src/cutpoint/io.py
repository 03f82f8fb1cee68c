"""JSON machine documents.

Layout::

    {"kind": "gfa" | "pfa" | "gqfa",
     "scalar_mode": "rational" | "float64",
     "alphabet": [...],
     "cutpoint": ...,
     "payload": {...}}

Rational scalars are ``"p/q"`` strings, floats are JSON numbers, complex
entries are ``[re, im]`` pairs. Payloads:

* gfa  -- ``u``, ``A`` (symbol -> matrix), ``v``
* pfa  -- ``pi``, ``P`` (symbol -> matrix), ``P_end``, ``accepting`` (state indices)
* gqfa -- ``rho0``, ``channels`` (symbol -> list of Kraus matrices), ``P_acc``,
  optional ``end_channel``
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .convert import ConversionTrace
from .linalg import to_fraction
from .models import GFA, GQFA, PFA, Channel, ValidationError, validate

KINDS = ("gfa", "pfa", "gqfa")


class ParseError(ValueError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


# ----------------------------------------------------------------------------
# scalars and arrays
# ----------------------------------------------------------------------------
def _enc_scalar(x, rational: bool):
    if rational:
        return str(to_fraction(x))
    return float(x)


def _enc_real(a, rational: bool):
    a = np.asarray(a, dtype=object if rational else float)
    if a.ndim == 0:
        return _enc_scalar(a.item(), rational)
    return [_enc_real(x, rational) for x in a]


def _enc_complex(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        z = complex(a)
        return [z.real, z.imag]
    return [_enc_complex(x) for x in a]


def _dec_scalar(x, rational: bool, where: str):
    try:
        if rational:
            if isinstance(x, float):
                raise ParseError(where, f"float {x!r} in a rational document; write it as 'p/q'")
            if isinstance(x, bool):
                raise TypeError
            return to_fraction(x)
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise TypeError
        return float(x)
    except ParseError:
        raise
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError(where, f"malformed scalar {x!r}") from None


def _dec_real(x, rational: bool, where: str, ndim: int) -> np.ndarray:
    def rec(y, depth, path):
        if depth == 0:
            return _dec_scalar(y, rational, path)
        if not isinstance(y, list):
            raise ParseError(path, f"expected a list, got {type(y).__name__}")
        return [rec(z, depth - 1, f"{path}[{i}]") for i, z in enumerate(y)]

    data = rec(x, ndim, where)
    try:
        arr = np.array(data, dtype=object if rational else float)
    except ValueError:
        raise ParseError(where, "ragged array") from None
    if arr.ndim != ndim:
        raise ParseError(where, f"expected a {ndim}-d array")
    return arr


def _dec_complex(x, where: str) -> np.ndarray:
    def rec(y, depth, path):
        if depth == 0:
            if (not isinstance(y, list) or len(y) != 2
                    or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in y)):
                raise ParseError(path, f"complex entries must be [re, im], got {y!r}")
            return complex(y[0], y[1])
        if not isinstance(y, list):
            raise ParseError(path, f"expected a list, got {type(y).__name__}")
        return [rec(z, depth - 1, f"{path}[{i}]") for i, z in enumerate(y)]

    data = rec(x, 2, where)
    try:
        arr = np.array(data, dtype=complex)
    except ValueError:
        raise ParseError(where, "ragged matrix") from None
    if arr.ndim != 2:
        raise ParseError(where, "expected a matrix")
    return arr


def _field(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(where, f"missing field {key!r}")
    return doc[key]


# ----------------------------------------------------------------------------
# machines
# ----------------------------------------------------------------------------
def to_document(machine) -> dict:
    if isinstance(machine, GFA):
        rational = machine.scalar_mode == "rational"
        payload = {
            "u": _enc_real(machine.u, rational),
            "A": {s: _enc_real(machine.A[s], rational) for s in machine.alphabet},
            "v": _enc_real(machine.v, rational),
        }
        kind = "gfa"
    elif isinstance(machine, PFA):
        rational = machine.scalar_mode == "rational"
        payload = {
            "pi": _enc_real(machine.pi, rational),
            "P": {s: _enc_real(machine.P[s], rational) for s in machine.alphabet},
            "P_end": _enc_real(machine.P_end, rational),
            "accepting": sorted(machine.accepting),
        }
        kind = "pfa"
    elif isinstance(machine, GQFA):
        rational = False
        payload = {
            "rho0": _enc_complex(machine.rho0),
            "channels": {s: [_enc_complex(k) for k in machine.channel(s).kraus] for s in machine.alphabet},
            "P_acc": _enc_complex(machine.P_acc),
        }
        if machine.end_channel is not None:
            payload["end_channel"] = [_enc_complex(k) for k in machine.end_channel.kraus]
        kind = "gqfa"
    else:
        raise TypeError(f"cannot serialize {type(machine).__name__}")
    return {
        "kind": kind,
        "scalar_mode": "rational" if rational else "float64",
        "alphabet": list(machine.alphabet),
        "cutpoint": _enc_scalar(machine.cutpoint, rational),
        "payload": payload,
    }


def _symbol_map(x, alphabet, where):
    if not isinstance(x, dict):
        raise ParseError(where, "expected an object keyed by symbol")
    if set(x) != set(alphabet):
        raise ParseError(where, f"keys {sorted(x)} do not match alphabet {sorted(alphabet)}")
    return x


def from_document(doc: dict, check: bool = True):
    """Build a machine from a parsed document; ``check`` runs :func:`validate`."""
    kind = _field(doc, "kind", "$")
    if kind not in KINDS:
        raise ParseError("$.kind", f"unknown kind {kind!r}")
    mode = _field(doc, "scalar_mode", "$")
    if mode not in ("rational", "float64"):
        raise ParseError("$.scalar_mode", f"unknown scalar mode {mode!r}")
    if kind == "gqfa" and mode != "float64":
        raise ParseError("$.scalar_mode", "quantum machines are float64 only")
    rational = mode == "rational"
    alphabet = _field(doc, "alphabet", "$")
    if not isinstance(alphabet, list) or not all(isinstance(s, str) for s in alphabet):
        raise ParseError("$.alphabet", "expected a list of symbol strings")
    if len(set(alphabet)) != len(alphabet):
        raise ParseError("$.alphabet", "duplicate symbols")
    cutpoint = _dec_scalar(_field(doc, "cutpoint", "$"), rational, "$.cutpoint")
    payload = _field(doc, "payload", "$")

    try:
        if kind == "gfa":
            A = _symbol_map(_field(payload, "A", "$.payload"), alphabet, "$.payload.A")
            machine = GFA.build(
                _dec_real(_field(payload, "u", "$.payload"), rational, "$.payload.u", 1),
                {s: _dec_real(A[s], rational, f"$.payload.A.{s}", 2) for s in alphabet},
                _dec_real(_field(payload, "v", "$.payload"), rational, "$.payload.v", 1),
                cutpoint=cutpoint, alphabet=alphabet, rational=rational,
            )
        elif kind == "pfa":
            P = _symbol_map(_field(payload, "P", "$.payload"), alphabet, "$.payload.P")
            acc = _field(payload, "accepting", "$.payload")
            if not isinstance(acc, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in acc):
                raise ParseError("$.payload.accepting", "expected a list of state indices")
            machine = PFA.build(
                _dec_real(_field(payload, "pi", "$.payload"), rational, "$.payload.pi", 1),
                {s: _dec_real(P[s], rational, f"$.payload.P.{s}", 2) for s in alphabet},
                _dec_real(_field(payload, "P_end", "$.payload"), rational, "$.payload.P_end", 2),
                accepting=acc, cutpoint=cutpoint, alphabet=alphabet, rational=rational,
            )
        else:
            chans = _symbol_map(_field(payload, "channels", "$.payload"), alphabet, "$.payload.channels")

            def channel(ops, where):
                if not isinstance(ops, list) or not ops:
                    raise ParseError(where, "expected a non-empty list of Kraus matrices")
                return Channel.from_kraus([_dec_complex(k, f"{where}[{i}]") for i, k in enumerate(ops)])

            end = payload.get("end_channel") if isinstance(payload, dict) else None
            machine = GQFA.build(
                _dec_complex(_field(payload, "rho0", "$.payload"), "$.payload.rho0"),
                {s: channel(chans[s], f"$.payload.channels.{s}") for s in alphabet},
                _dec_complex(_field(payload, "P_acc", "$.payload"), "$.payload.P_acc"),
                cutpoint=cutpoint, alphabet=alphabet,
                end_channel=None if end is None else channel(end, "$.payload.end_channel"),
            )
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError("$.payload", f"dimension mismatch: {exc}") from None

    if check:
        report = validate(machine)
        if not report.ok:
            raise ValidationError(report)
    return machine


def dumps(machine) -> str:
    return json.dumps(to_document(machine), indent=2) + "\n"


def loads(text: str, check: bool = True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from None
    return from_document(doc, check)


def load(path, check: bool = True):
    return loads(Path(path).read_text(), check)


def save(machine, path) -> None:
    Path(path).write_text(dumps(machine))


def trace_to_document(trace: ConversionTrace) -> dict:
    """Audit record of a conversion; every scalar is an exact ``"p/q"`` string."""

    def enc(a):
        return None if a is None else _enc_real(a, True)

    def enc_map(m):
        return None if m is None else {s: enc(x) for s, x in m.items()}

    doc = {
        "degenerate": trace.degenerate,
        "shifted": to_document(trace.shifted),
        "u_hat": enc(trace.u_hat),
        "A_hat": enc_map(trace.A_hat),
        "v_hat": enc(trace.v_hat),
        "B": enc_map(trace.B),
        "C": str(trace.C),
        "N": trace.N,
        "s": str(trace.s),
        "stochastic": enc_map(trace.stochastic),
        "g": enc(trace.g),
        "M_dec": None if trace.M_dec is None else str(trace.M_dec),
        "h": enc(trace.h),
    }
    return doc


def fraction_or_float(x):
    return str(x) if isinstance(x, Fraction) else float(x)
