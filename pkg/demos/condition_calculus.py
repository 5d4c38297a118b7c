"""Conditions over trees: iterations, guards, and products.

A two-coordinate iteration pairs a tree with a second tree that is only
consulted after the first one has answered; restricting at an
interleaved index splits the index into one half per coordinate.
Amalgamation grafts a stronger condition into one cell and records, in
guard tables, that the later coordinates now depend on which cell the
first coordinate landed in.
"""

from sacksforcing import (ProductCondition, SkeletonTree, bits, bits_str,
                          full_tree, iter_amalgamate, iter_equal,
                          iter_leq_n, iter_restrict, join_pair, plain_iter,
                          prod_amalgamate, prod_restrict)

PAIRWISE = "pairwise"
COLUMN = "column"

full = full_tree()
t_prime = SkeletonTree(1, {bits(""): bits("1"),
                           bits("0"): bits("10"),
                           bits("1"): bits("11")})
s = full.restrict_cell(bits("00"))
s_prime = SkeletonTree(0, {bits(""): bits("100")})

p = plain_iter(["single", "single"], [full, t_prime])
q = plain_iter(["single", "single"], [s, s_prime])

# graft q into the cell addressed by (0) in each coordinate
sigma = join_pair(bits("0"), bits("0"))
r = iter_amalgamate(p, sigma, q, PAIRWISE)

print("restrictions of the amalgam r, one line per interleaved index:")
for left in ("0", "1"):
    for right in ("0", "1"):
        tau = join_pair(bits(left), bits(right))
        rt = iter_restrict(r, tau, PAIRWISE)
        if iter_equal(rt, q):
            verdict = "the graft q"
        elif iter_equal(rt, iter_restrict(p, tau, PAIRWISE)):
            verdict = "p's own restriction (untouched)"
        else:
            verdict = "a mix: q's first coordinate, p's second"
        print(f"  r_({left} (+) {right}) = {verdict}")

assert iter_leq_n(r, p, 2, PAIRWISE)
print("r extends p without moving the first two splitting levels")

# the second coordinate of r is now a guard table: which tree it holds
# depends on the cell the first coordinate chose
print("\nguard table of r's second coordinate:")
for guard, payload in r.coords[1]:
    where = ", ".join(f"coord {k} in cell {bits_str(a)}"
                      for k, a in sorted(guard.items()))
    print(f"  [{where or 'always'}] -> stem {bits_str(payload.stem())}, "
          f"0-cell stem {bits_str(payload.restrict_cell(bits('0')).stem())}")

# products: finitely many iterations, one per index; an index sequence
# sbar says which coordinate reads which column of the address
pp = ProductCondition({0: plain_iter(["single"], [full]),
                       1: plain_iter(["single"], [t_prime])})
sbar = [0, 1]
addr = bits("011")
qq = prod_restrict(pp, addr, sbar)
print(f"\nrestricting the product at {bits_str(addr)} sends column 0 "
      f"to coordinate 0 and column 1 to coordinate 1:")
for i in qq.support:
    print(f"  coordinate {i}: stem "
          f"{bits_str(qq.coordinate(i).coordinate(0).stem())}")

rr = prod_amalgamate(pp, bits("01"), sbar, qq)
back = prod_restrict(rr, bits("01"), sbar)
print("amalgamating and restricting returns the graft:",
      all(iter_equal(back.coordinate(i), qq.coordinate(i))
          for i in qq.support))
