"""Perfect binary trees as finite skeletons.

A tree is presented by a depth d and one node entry per index of length
at most d; the entry at index sigma-then-i must extend the entry at
sigma followed by the branch bit i.  The script builds a lopsided tree,
reads off its splitting structure, restricts it, glues a graft into one
cell, and fuses a stabilizing sequence.
"""

from sacksforcing import (SkeletonTree, amalgamate, bits, bits_str,
                          full_tree, fusion_prefix, leq_n, subtree_leq,
                          tree_dot)


def show(label, tree):
    print(f"{label}: depth {tree.depth}")
    for sigma, entry in sorted(tree.skeleton.items()):
        print(f"  e({bits_str(sigma) or 'root'}) = {bits_str(entry)}")


# stem 0; the 0-side splits again at 00, the 1-side not until 011
t = SkeletonTree(1, {bits(""): bits("0"),
                     bits("0"): bits("00"),
                     bits("1"): bits("011")})
show("a lopsided tree", t)

print("\nsplitting nodes by index:")
for sigma in (bits(""), bits("0"), bits("1")):
    print(f"  rt({bits_str(sigma) or 'root'}) = {bits_str(t.rt(sigma))}")
print(f"splitting level 1: "
      f"{sorted(bits_str(v) for v in t.splitting_level(1))}")

# restriction keeps one cell
r = t.restrict_cell(bits("1"))
show("\nrestriction to the 1-cell", r)
assert subtree_leq(r, t)

# amalgamation: replace exactly the 0-cell, keep the 1-cell verbatim
graft = t.restrict_cell(bits("00"))
a = amalgamate(t, bits("0"), graft)
show("\namalgamated tree (0-cell pinned to its own 00-cell)", a)
assert a.restrict_cell(bits("0")) == graft
assert a.restrict_cell(bits("1")) == t.restrict_cell(bits("1"))
assert leq_n(a, t, 1)
print("cell equations hold; the glue is a level-1 extension")

# fusion: a sequence that settles level 0 from step 0 on and level 1
# from step 1 on has a well-defined prefix at every stage
seq = [full_tree(), t, t]
fused = fusion_prefix(seq, [0, 1, 1], 2)
show("\nfusion prefix of (full, t, t)", fused)

print("\nDOT output for the lopsided tree:")
print(tree_dot(t))
