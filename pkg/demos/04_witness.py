# %% [markdown]
# Prepare-test machines: an n-state quantum automaton whose two-letter words
# p_k tau_s carve out every subset of n**2 - 1 prepared states.
# %%
from cutpoint import qfa_to_pfa
from cutpoint.verify import check_agreement
from cutpoint.witness import all_subsets, build_witness, subset_signs, verify_shattering, witness_word

Q = build_witness(2, tests="all")
p = Q.params
print(f"n = {p.n}, d = {p.d}, epsilon = {p.epsilon:.6f}, t = {p.t:.6f}, t*epsilon = {p.margin:.6f}")
for S in [(), (1,), (1, 3), (1, 2, 3)]:
    s = subset_signs(S, p.d)
    values = [Q.evaluate(witness_word(k, s)) for k in range(1, p.d + 1)]
    print(f"subset {set(S) or '{}'}: " + "  ".join(f"p{k}: {v:.4f}" for k, v in enumerate(values, 1)))

print(verify_shattering(Q, all_subsets(p.d)))

# %%
# Larger n: test symbols are built on demand, so 2**(n**2 - 1) never has to be enumerated.
Q3 = build_witness(3)
print("n = 3:", verify_shattering(Q3, [(1, 4, 8), (2, 3), ()]), f"margin {Q3.params.margin:.5f}")

# %%
# The full pipeline on the n = 2 witness: 2*2**2 + 6 = 14 probabilistic states.
P, trace = qfa_to_pfa(Q)
words = [witness_word(k, subset_signs(S, 3)) for S in all_subsets(3) for k in (1, 2, 3)]
print(f"{P.m}-state PFA:", check_agreement(Q, P, words=words))
