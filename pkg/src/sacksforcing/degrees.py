"""Degree lattices at desk scale.

A single-step extension stacks one new degree on the old top; a
two-sided step inserts a pair of mutually incomparable degrees between
consecutive chain points (a diamond).  This module builds the resulting
finite posets from step recipes, and implements the two bit-codings that
ride on them:

* the tower census, recording for each tower height whether the model
  keeps ONE maximal tower of that height or unboundedly MANY;
* the line/diamond pattern of a self-coding recipe, which stores a base
  n (the level of the first diamond, minus one) and a bit string g (one
  bit per level after the base block).

Uncountable multiplicities are collapsed to the symbolic count MANY:
the codings only ever consume the one/many distinction, and removing
half of an unbounded family leaves it unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitseq import Bits, check_bits
from .conditions import PAIR, SINGLE
from .errors import DecodeError, PreconditionError

ONE = "one"
MANY = "many"

LINE = "line"
DIAMOND = "diamond"


@dataclass(frozen=True, order=True)
class Ordinal2:
    """w*a + b with naturals a, b; lexicographic order is ordinal order."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise PreconditionError("ordinal parts must be naturals")

    @property
    def is_zero(self):
        return self.a == 0 and self.b == 0

    @property
    def is_limit(self):
        return self.b == 0 and self.a > 0

    def plus(self, k: int) -> "Ordinal2":
        return Ordinal2(self.a, self.b + k)

    def to_json(self):
        return [self.a, self.b]

    @classmethod
    def from_json(cls, data):
        return cls(int(data[0]), int(data[1]))


@dataclass(frozen=True)
class TowerRecipe:
    kinds: tuple

    def __post_init__(self):
        kinds = tuple(self.kinds)
        object.__setattr__(self, "kinds", kinds)
        if any(k not in (SINGLE, PAIR) for k in kinds):
            raise PreconditionError(f"bad kinds: {kinds!r}")
        if kinds and kinds[0] != SINGLE:
            raise PreconditionError("step 0 must be single")

    @property
    def length(self):
        return len(self.kinds)

    def to_json(self):
        return {"kinds": list(self.kinds)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["kinds"]))


class DegreePoset:
    """Finite poset given by Hasse edges; must be acyclic with a unique
    minimal node."""

    def __init__(self, nodes, edges):
        self.nodes = tuple(nodes)
        self.edges = tuple((lo, hi) for lo, hi in edges)
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise PreconditionError("duplicate node labels")
        for lo, hi in self.edges:
            if lo not in node_set or hi not in node_set:
                raise PreconditionError(f"edge ({lo}, {hi}) off the node set")
        self._up = self._reachability()
        minimal = [v for v in self.nodes
                   if not any(hi == v for _, hi in self.edges)]
        if len(minimal) != 1:
            raise PreconditionError(f"expected a unique bottom, got {minimal}")
        self.bottom = minimal[0]

    def _reachability(self):
        succ = {v: [] for v in self.nodes}
        for lo, hi in self.edges:
            succ[lo].append(hi)
        up = {}

        def visit(v, trail):
            if v in trail:
                raise PreconditionError("order relation has a cycle")
            if v in up:
                return up[v]
            reach = set()
            for w in succ[v]:
                reach.add(w)
                reach |= visit(w, trail | {v})
            up[v] = reach
            return reach

        for v in self.nodes:
            visit(v, frozenset())
        return up

    def leq(self, x, y) -> bool:
        return x == y or y in self._up[x]

    def _unique_extreme(self, candidates, prefer_high):
        picked = [c for c in candidates
                  if not any(d != c
                             and (self.leq(c, d) if prefer_high else self.leq(d, c))
                             for d in candidates)]
        return picked[0] if len(picked) == 1 else None

    def meet(self, x, y):
        lower = [z for z in self.nodes if self.leq(z, x) and self.leq(z, y)]
        return self._unique_extreme(lower, prefer_high=True)

    def join(self, x, y):
        upper = [z for z in self.nodes if self.leq(x, z) and self.leq(y, z)]
        return self._unique_extreme(upper, prefer_high=False)


def tower_degrees(recipe: TowerRecipe) -> DegreePoset:
    """The chain d0 < d1 < ... with a diamond spliced into every pair
    step."""
    nodes = [f"d{beta}" for beta in range(recipe.length + 1)]
    edges = []
    for beta, kind in enumerate(recipe.kinds):
        if kind == SINGLE:
            edges.append((f"d{beta}", f"d{beta + 1}"))
        else:
            for i in (0, 1):
                side = f"d{beta}.{i}"
                nodes.append(side)
                edges.append((f"d{beta}", side))
                edges.append((side, f"d{beta + 1}"))
    return DegreePoset(nodes, edges)


def _label_key(label):
    body = label[1:] if label.startswith("d") else label
    try:
        parts = tuple(int(x) for x in body.split("."))
        return (0, parts, "")
    except ValueError:
        return (1, (), label)


def poset_dot(poset: DegreePoset) -> str:
    lines = ["digraph degrees {", "  rankdir=BT;"]
    for v in sorted(poset.nodes, key=_label_key):
        lines.append(f'  "{v}";')
    for lo, hi in sorted(poset.edges, key=lambda e: (_label_key(e[0]),
                                                     _label_key(e[1]))):
        lines.append(f'  "{lo}" -> "{hi}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- tower censuses -------------------------------------------------------------

@dataclass(frozen=True)
class TowerCensus:
    """ONE/MANY verdicts keyed by tower height."""

    entries: tuple  # sorted ((height, verdict), ...)

    def __post_init__(self):
        cooked = tuple(sorted(dict(self.entries).items()))
        object.__setattr__(self, "entries", cooked)
        for height, verdict in cooked:
            if not isinstance(height, Ordinal2) or height.is_zero:
                raise PreconditionError(f"bad census height {height!r}")
            if verdict not in (ONE, MANY):
                raise PreconditionError(f"bad census verdict {verdict!r}")

    def as_dict(self):
        return dict(self.entries)

    def to_json(self):
        return {"entries": [[h.to_json(), v] for h, v in self.entries]}

    @classmethod
    def from_json(cls, data):
        return cls(tuple((Ordinal2.from_json(h), v)
                         for h, v in data["entries"]))


def census_encode(x, limit_bound: int, n_bound: int) -> TowerCensus:
    """Turn a bit function on limit-plus-natural indices into the tower
    census it forces: at height base+2n+1 a unique tower survives exactly
    when the bit at base+n is 0, and heights base+2n+2 always keep many."""
    want = {Ordinal2(a, n) for a in range(limit_bound) for n in range(n_bound)}
    if set(x) != want:
        raise PreconditionError(
            f"x must be defined on exactly {limit_bound} limits x "
            f"{n_bound} offsets")
    entries = {}
    for key, bit in x.items():
        if bit not in (0, 1):
            raise PreconditionError(f"bit function value {bit!r}")
        entries[Ordinal2(key.a, 2 * key.b + 1)] = ONE if bit == 0 else MANY
        entries[Ordinal2(key.a, 2 * key.b + 2)] = MANY
    return TowerCensus(tuple(entries.items()))


def census_decode(census: TowerCensus):
    """Inverse of census_encode on its range; anything else is rejected."""
    table = census.as_dict()
    x = {}
    for height, verdict in table.items():
        if height.b % 2 == 0:
            if verdict != MANY:
                raise DecodeError(
                    f"height {height} must report many towers")
            partner = Ordinal2(height.a, height.b - 1)
            if partner not in table:
                raise DecodeError(f"height {height} has no odd partner")
        else:
            n = (height.b - 1) // 2
            if Ordinal2(height.a, height.b + 1) not in table:
                raise DecodeError(f"height {height} has no even partner")
            x[Ordinal2(height.a, n)] = 0 if verdict == ONE else 1
    if not x:
        raise DecodeError("empty census")
    n_bounds = {key.b for key in x}
    per_limit = {}
    for key in x:
        per_limit.setdefault(key.a, set()).add(key.b)
    shape = {frozenset(v) for v in per_limit.values()}
    if len(shape) != 1 or shape.pop() != set(range(max(n_bounds) + 1)):
        raise DecodeError("census heights do not form a full grid")
    if set(per_limit) != set(range(max(per_limit) + 1)):
        raise DecodeError("census limits do not form an initial segment")
    return x


# -- self-coding patterns --------------------------------------------------------

@dataclass(frozen=True)
class ScPattern:
    levels: tuple

    def __post_init__(self):
        levels = tuple(self.levels)
        object.__setattr__(self, "levels", levels)
        if any(v not in (LINE, DIAMOND) for v in levels):
            raise PreconditionError(f"bad pattern levels: {levels!r}")
        if levels and levels[0] != LINE:
            raise PreconditionError("level 0 must be a line")

    def to_json(self):
        return {"levels": list(self.levels)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["levels"]))


def sc_schedule(n: int, g, K: int) -> TowerRecipe:
    """Step kinds of the self-coding recipe with base n and data g,
    truncated to K steps."""
    g = check_bits(g)
    if n < 0 or K < 0:
        raise PreconditionError("n and K must be naturals")
    if K > n + 2 + len(g):
        raise PreconditionError(
            f"K={K} needs {K - n - 2} data bits, g has {len(g)}")
    kinds = []
    for k in range(K):
        if k <= n:
            kinds.append(SINGLE)
        elif k == n + 1:
            kinds.append(PAIR)
        else:
            kinds.append(PAIR if g[k - n - 2] else SINGLE)
    return TowerRecipe(tuple(kinds))


def sc_pattern(recipe: TowerRecipe) -> ScPattern:
    return ScPattern(tuple(
        LINE if kind == SINGLE else DIAMOND for kind in recipe.kinds))


def sc_decode(pattern: ScPattern):
    """Read (n, g) back off a line/diamond pattern: n is one less than
    the first diamond level, g has one bit per level past n+1."""
    levels = pattern.levels
    first = next((k for k, v in enumerate(levels) if v == DIAMOND), None)
    if first is None:
        raise DecodeError("pattern has no diamond level")
    if first == 0:
        raise DecodeError("diamond at level 0")
    n = first - 1
    g = tuple(1 if levels[n + 2 + j] == DIAMOND else 0
              for j in range(len(levels) - n - 2))
    return n, g


def sc_census_encode(h, alpha_bound: int):
    """One surviving self-coding real per base n with h(n)=1, many
    otherwise; alpha_bound is how many copies 'many' stands for."""
    h = check_bits(h)
    if alpha_bound < 2:
        raise PreconditionError("alpha_bound must be at least 2")
    return {n: (ONE if h[n] else MANY) for n in range(len(h))}


def sc_census_decode(census) -> Bits:
    keys = sorted(census)
    if keys != list(range(len(keys))):
        raise DecodeError("bases must form an initial segment of naturals")
    for v in census.values():
        if v not in (ONE, MANY):
            raise DecodeError(f"bad verdict {v!r}")
    return tuple(1 if census[n] == ONE else 0 for n in keys)
