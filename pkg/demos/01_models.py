# %% [markdown]
# Three kinds of automata, one word function each, all read under a strict cutpoint:
# a word is accepted when its value is strictly above the threshold.
# %%
from fractions import Fraction

import numpy as np

from cutpoint import GFA, GQFA, PFA, BoundaryError, Channel, accepts, validate

# A one-state GFA whose value flips sign on each letter.
G = GFA.build([1], {"a": [[-1]]}, [1], cutpoint=0, rational=True)
for w in ["", "a", "aa", "aaa"]:
    print(f"GFA  {w or 'ε':4} value={G.evaluate(w)!s:3} accepted={accepts(G, w)}")

# %%
# A two-state PFA: each 'a' moves to the accepting state with probability 1/2.
P = PFA.build(
    ["1", "0"],
    {"a": [["1/2", "1/2"], ["0", "1"]]},
    [[1, 0], [0, 1]],  # end-marker matrix
    accepting=[1],
    cutpoint=Fraction(1, 3),
    rational=True,
)
for w in ["", "a", "aa"]:
    print(f"PFA  {w or 'ε':4} value={P.evaluate(w)!s:5} accepted={accepts(P, w)}")

# Rational machines compare exactly; a value equal to the cutpoint is rejected.
at_cut = PFA.build(["1", "0"], {"a": P.P["a"]}, P.P_end, [1], cutpoint=Fraction(1, 2), rational=True)
print("exactly at the cutpoint ->", accepts(at_cut, "a"))

# %%
# A qubit automaton: 'h' is a Hadamard gate, 'z' dephases.
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
Z = np.diag([1.0, -1.0])
Q = GQFA.build(
    np.diag([1.0, 0.0]),
    {"h": Channel.from_kraus([H]), "z": Channel.from_kraus([np.eye(2) / np.sqrt(2), Z / np.sqrt(2)])},
    np.diag([1.0, 0.0]),
    cutpoint=0.5,
)
for w in ["", "hh", "h", "hzh"]:
    value = Q.evaluate(w)
    try:
        verdict = accepts(Q, w)
    except BoundaryError:
        # float values this close to the cutpoint are reported, never guessed
        verdict = "undecidable in float64"
    print(f"QFA  {w or 'ε':4} value={value:.6f} accepted={verdict}")

# %%
# validate() lists every broken invariant with its location.
broken = PFA.build([1, 0], {"a": [[0.5, 0.4], [0, 1]]}, np.eye(2), accepting=[0])
print(validate(broken))
print(validate(Q))
