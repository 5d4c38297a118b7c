"""Finite binary sequences and the position codec used to pack families of
them into a single sequence.

A bit string is a plain tuple of 0/1 ints.  Two packing schemes live here:

* the pairwise interleave ``join_pair``, which alternates two sequences
  bit by bit, and
* the indexed family join ``join_family``, which places bit m of the n-th
  sequence at position ``pair_index(n, m)`` of the result.

``pair_index`` is the classic diagonal pairing (m + n)(m + n + 1)/2 + m.
It is a bijection from pairs of naturals onto the naturals, is strictly
increasing in each argument, and satisfies pair_index(0, 0) == 0,
pair_index(0, 1) == 1, and pair_index(m, n) > max(m, n) everywhere else.
Those facts are what make the column decomposition below well behaved, so
the test suite checks them explicitly.
"""

from __future__ import annotations

from math import isqrt

from .errors import PreconditionError

Bits = tuple[int, ...]


def bits(text: str) -> Bits:
    """Parse a string over {0,1} into a bit tuple ("" gives the empty one)."""
    out = []
    for ch in text:
        if ch not in "01":
            raise PreconditionError(f"not a bit string: {text!r}")
        out.append(int(ch))
    return tuple(out)


def bits_str(b: Bits) -> str:
    return "".join(str(x) for x in b)


def check_bits(b) -> Bits:
    b = tuple(b)
    if any(x not in (0, 1) for x in b):
        raise PreconditionError(f"not a bit sequence: {b!r}")
    return b


def join_pair(x: Bits, y: Bits) -> Bits:
    """Interleave x and y, x on even positions and y on odd ones.

    The lengths must satisfy len(y) in {len(x), len(x) - 1}; those are the
    only two shapes a strict alternation x(0), y(0), x(1), y(1), ... can
    end in.
    """
    x, y = check_bits(x), check_bits(y)
    if len(y) not in (len(x), len(x) - 1):
        raise PreconditionError(
            f"join_pair needs len(y) in {{len(x), len(x)-1}}, "
            f"got {len(x)} and {len(y)}")
    out = [0] * (len(x) + len(y))
    out[0::2] = x
    out[1::2] = y
    return tuple(out)


def split_pair(z: Bits) -> tuple[Bits, Bits]:
    """Undo join_pair: return (even positions, odd positions)."""
    z = check_bits(z)
    return z[0::2], z[1::2]


def pair_index(m: int, n: int) -> int:
    """Diagonal pairing of (m, n); see the module docstring for its laws."""
    if m < 0 or n < 0:
        raise PreconditionError("pair_index takes naturals")
    return (m + n) * (m + n + 1) // 2 + m


def pair_split(p: int) -> tuple[int, int]:
    """Inverse of pair_index."""
    if p < 0:
        raise PreconditionError("pair_split takes a natural")
    w = (isqrt(8 * p + 1) - 1) // 2
    m = p - w * (w + 1) // 2
    return m, w - m


def column(sigma: Bits, n: int) -> Bits:
    """The n-th column of sigma: bit m is sigma[pair_index(n, m)].

    Because the pairing is increasing in each argument the defined
    positions of a column are an initial segment, so the result is again
    a plain bit tuple.
    """
    sigma = check_bits(sigma)
    if n < 0:
        raise PreconditionError("column index must be a natural")
    out = []
    m = 0
    while pair_index(n, m) < len(sigma):
        out.append(sigma[pair_index(n, m)])
        m += 1
    return tuple(out)


def width(k: int) -> int:
    """Number of nonempty columns of a length-k sequence.

    Equivalently the least n with pair_index(n, 0) >= k; columns at or
    beyond it are empty for every sigma of length k.
    """
    if k < 0:
        raise PreconditionError("width takes a natural")
    n = 0
    while pair_index(n, 0) < k:
        n += 1
    return n


def join_family(xs, length: int) -> Bits:
    """Pack the family xs into one sequence of the given length.

    Position p of the result is bit m of xs[n] where (n, m) is the pairing
    split of p.  Every position below ``length`` must be covered, i.e. the
    family has to supply column n up to the length the codec demands.
    """
    xs = [check_bits(x) for x in xs]
    if length < 0:
        raise PreconditionError("length must be a natural")
    out = []
    for p in range(length):
        n, m = pair_split(p)
        if n >= len(xs) or m >= len(xs[n]):
            raise PreconditionError(
                f"family is missing bit {m} of member {n} "
                f"(needed at position {p})")
        out.append(xs[n][m])
    return tuple(out)
