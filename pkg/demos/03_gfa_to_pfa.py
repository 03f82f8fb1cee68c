# %% [markdown]
# Exact conversion of a k-state GFA with cutpoint lambda into a (2k+6)-state PFA with
# cutpoint 1/2. Every intermediate is kept on the returned trace.
# %%
from fractions import Fraction

import numpy as np

from cutpoint import GFA, eval_gfa, eval_pfa, gfa_to_pfa
from cutpoint.samplers import random_rational_gfa
from cutpoint.verify import check_agreement, enumerate_words

G = GFA.build([1], {"a": [[-1]]}, [1], cutpoint=0, rational=True)
P, trace = gfa_to_pfa(G)
print(f"{G.k} state -> {P.m} states; C = {trace.C}, N = {trace.N}, s = {trace.s}, M = {trace.M_dec}")
print("zero-sum matrix B:")
for row in trace.B["a"]:
    print("  ", " ".join(f"{x!s:>3}" for x in row))
print("row-stochastic core, first row:", [str(x) for x in trace.stochastic["a"][0]])
print("end-marker acceptance h:", [str(x) for x in trace.h])

# %%
# The PFA keeps the sign of f_G - lambda, shrunk by a known factor per letter.
for w in ["", "a", "aa", "aaa"]:
    fp = eval_pfa(P, w)
    predicted = trace.predicted_acceptance(eval_gfa(G, w) - G.cutpoint, len(w))
    print(f"{w or 'ε':4} f_P = {fp!s:>12}  closed form = {predicted!s:>12}")

# %%
rng = np.random.default_rng(3)
G = random_rational_gfa(rng, 3, alphabet=("a", "b", "c"))
P, trace = gfa_to_pfa(G)
print(f"random 3-state GFA, cutpoint {G.cutpoint} -> {P.m}-state PFA")
print(check_agreement(G, P, max_len=5))
