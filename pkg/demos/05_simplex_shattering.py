# %% [markdown]
# The states of an m-state PFA live in a probability simplex, and end-marker
# acceptance is a threshold cut x.b > mu. Such cuts shatter the m vertices but
# never m + 1 points, which is why n**2 - 1 shattered quantum states force a PFA
# with at least n**2 - 1 states.
# %%
from fractions import Fraction

from cutpoint.cli import bounds_table
from cutpoint.verify import halfspace_shatter, support_shatter

half = Fraction(1, 2)
vertices = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
inst = halfspace_shatter(vertices, half)
print(f"3 vertices: {inst.feasible_count}/8 subsets realizable, shattered = {inst.shattered}")
for Z, (ok, b) in sorted(inst.results.items()):
    print(f"  {Z}: b = {[str(x) for x in b]}")

# %%
four = vertices + [[Fraction(1, 3)] * 3]
inst = halfspace_shatter(four, half)
blocked = [Z for Z, (ok, _) in inst.results.items() if not ok]
print(f"3 vertices + barycentre: shattered = {inst.shattered}; unrealizable subsets: {blocked}")
print("cutpoint 0, support concepts only:", support_shatter(four).feasible_count, "of 16 subsets")

# %%
print(f"{'n':>3} {'PFA upper':>10} {'PFA lower':>10}")
for row in bounds_table(2, 6):
    print(f"{row['n']:>3} {row['upper']:>10} {row['lower']:>10}")
