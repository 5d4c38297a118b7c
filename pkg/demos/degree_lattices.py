"""Degree posets, tower censuses, and the self-coding recipe.

A tower recipe is a list of step kinds, single or pair.  Singles extend
a chain of degrees; pairs splice in a diamond of two incomparable
intermediates.  The resulting poset is a lattice, and its shape alone
recovers the recipe, which is what the self-coding round trip below
exploits.
"""

from sacksforcing import (Ordinal2, TowerRecipe, bits, bits_str,
                          census_decode, census_encode, poset_dot,
                          sc_census_decode, sc_census_encode, sc_decode,
                          sc_pattern, sc_schedule, tower_degrees)

# a three-step recipe with one pair step in the middle
recipe = TowerRecipe(("single", "pair", "single"))
poset = tower_degrees(recipe)
print(f"recipe {recipe.kinds} gives {len(poset.nodes)} degrees:")
print(f"  nodes: {', '.join(sorted(poset.nodes))}")
print(f"  bottom: {poset.bottom}")

# the pair step at beta=1 contributes the incomparable sides d1.0, d1.1
a, b = "d1.0", "d1.1"
print(f"\n{a} <= {b}? {poset.leq(a, b)};  {b} <= {a}? {poset.leq(b, a)}")
print(f"meet({a}, {b}) = {poset.meet(a, b)}")
print(f"join({a}, {b}) = {poset.join(a, b)}")

print("\nas DOT (feed to graphviz if you want a picture):")
print(poset_dot(poset))

# tower censuses: a bit function on a limits x offsets grid forces a
# one/many verdict at every successor height, and nothing is lost
x = {Ordinal2(a_, n_): (a_ + n_) % 2 for a_ in range(2) for n_ in range(2)}
census = census_encode(x, limit_bound=2, n_bound=2)
print("census forced by x(a, n) = (a + n) mod 2 on the 2 x 2 grid:")
for height, verdict in census.entries:
    print(f"  height w*{height.a} + {height.b}: {verdict}")
print(f"decoding recovers x: {census_decode(census) == x}")

# the self-coding recipe: singles up to the base n, a marker pair at
# n+1, then one step per data bit
g = bits("10")
schedule = sc_schedule(1, g, 5)
pattern = sc_pattern(schedule)
print(f"\nsc_schedule(n=1, g={bits_str(g)}, K=5) = {schedule.kinds}")
print(f"its degree poset draws as: {pattern.levels}")
n, g_back = sc_decode(pattern)
print(f"reading the picture back: n = {n}, g = {bits_str(g_back)}")

# censuses over all bases at once: one survivor where h is 1
h = bits("101")
census = sc_census_encode(h, alpha_bound=9)
print(f"\nsc census of h = {bits_str(h)}: {census}")
print(f"decoded: {bits_str(sc_census_decode(census))}")
