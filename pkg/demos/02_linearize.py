# %% [markdown]
# Any n-state quantum automaton is a GFA on n**2 states: expand density matrices in
# an orthonormal basis of Hermitian matrices and each channel becomes a real matrix.
# %%
import numpy as np

from cutpoint import channel_matrix, coords, eval_gfa, eval_qfa, gell_mann_basis, qfa_to_gfa
from cutpoint.samplers import random_channel, random_gqfa
from cutpoint.verify import enumerate_words

basis = gell_mann_basis(2)
for b in basis:
    print(np.round(b, 3))

# |1><1| has coordinates (1/sqrt2, 0, 0, 1/sqrt2)
print(coords(np.diag([1.0, 0.0]), basis))

# %%
rng = np.random.default_rng(0)
E = random_channel(rng, 2)
M = channel_matrix(E, basis)
print("channel matrix, first row is (1, 0, 0, 0) since channels preserve trace:")
print(np.round(M, 4))

# %%
Q = random_gqfa(rng, 3)
G = qfa_to_gfa(Q)
print(f"{Q.n}-state QFA -> {G.k}-state GFA")
words = enumerate_words(Q.alphabet, 5)
worst = max(abs(eval_gfa(G, w) - eval_qfa(Q, w)) for w in words)
print(f"max |f_G - f_Q| over {len(words)} words: {worst:.2e}")
