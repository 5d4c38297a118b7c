"""A tour of the bit-sequence codec.

Everything downstream leans on three coding tricks: the Cantor pairing
of two naturals, the column decomposition a single sequence induces
through that pairing, and the two-way interleave.  This script prints
small tables for each so the conventions are visible at a glance.
"""

from sacksforcing import (bits, bits_str, column, join_family, join_pair,
                          pair_index, pair_split, split_pair, width)

# pairing: walk the diagonals
print("pair_index over the corner:")
for m in range(5):
    print("  " + " ".join(f"{pair_index(m, n):3d}" for n in range(5)))

print("\nand back again:")
for k in range(10):
    print(f"  {k} -> {pair_split(k)}")

# a single sequence holds one column per pairing row: position
# pair_index(n, m) belongs to column n
sigma = bits("110100101100")
print(f"\nsigma = {bits_str(sigma)}  (length {len(sigma)},",
      f"width {width(len(sigma))})")
cols = [column(sigma, n) for n in range(width(len(sigma)))]
for n, col in enumerate(cols):
    print(f"  column {n}: {bits_str(col) or '(empty)'}")

# the columns tile the sequence exactly
assert join_family(cols, len(sigma)) == sigma
print("columns reassemble to sigma: ok")

# interleave two sequences; the second may be one shorter
x, y = bits("101"), bits("01")
z = join_pair(x, y)
print(f"\njoin_pair({bits_str(x)}, {bits_str(y)}) = {bits_str(z)}")
assert split_pair(z) == (x, y)
print("split_pair undoes it: ok")
