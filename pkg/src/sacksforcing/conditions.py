"""Conditions built from perfect trees: pairs, finite iterations, and
finite-support products of iterations.

The restriction calculus threads one index string sigma through a whole
condition.  Two distribution modes exist:

* COLUMN: coordinate k of an iteration receives column(sigma, k); this is
  the general scheme and works for any length.
* PAIRWISE: only for length-2 iterations; the left/right halves of the
  interleave go to the two coordinates.

A coordinate of an iteration may be *conditional*: its value can depend
on which cells the generics of earlier coordinates go through.  We keep
each coordinate as a guarded table, a finite list of (guard, payload)
rows whose guards are pairwise incompatible and jointly exhaustive.  A
guard maps earlier coordinate positions to cell addresses, read as "the
generic of that coordinate passes through this cell of its own payload".
Restriction specializes guards (dropping rows that die), and
amalgamation creates them: grafting q onto the sigma-cell of p yields
rows that use q's payloads inside the sigma-cells and keep p's payloads
on the complementary cells.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitseq import Bits, bits, bits_str, check_bits, column, join_pair, \
    split_pair, pair_split, width
from .errors import AmalgamationError, IncompatibleError, PreconditionError
from .trees import SkeletonTree, amalgamate, full_tree, subtree_leq

SINGLE = "single"
PAIR = "pair"

COLUMN = "column"
PAIRWISE = "pairwise"


def _is_prefix(a: Bits, b: Bits) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


# -- pair conditions ---------------------------------------------------------

@dataclass(frozen=True)
class PairCondition:
    left: SkeletonTree
    right: SkeletonTree

    def to_json(self):
        return {"kind": "pair", "left": self.left.to_json(),
                "right": self.right.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(SkeletonTree.from_json(data["left"]),
                   SkeletonTree.from_json(data["right"]))


def full_pair() -> PairCondition:
    return PairCondition(full_tree(), full_tree())


def pair_restrict(p: PairCondition, sigma) -> PairCondition:
    """Split sigma into its interleave halves and restrict componentwise."""
    left_addr, right_addr = split_pair(check_bits(sigma))
    return PairCondition(p.left.restrict_cell(left_addr),
                         p.right.restrict_cell(right_addr))


def pair_leq(q: PairCondition, p: PairCondition) -> bool:
    return subtree_leq(q.left, p.left) and subtree_leq(q.right, p.right)


def pair_leq_n(q: PairCondition, p: PairCondition, n: int) -> bool:
    """Cellwise order at every interleaved index of length n."""
    from .trees import all_bitstrings
    return all(pair_leq(pair_restrict(q, sigma), pair_restrict(p, sigma))
               for sigma in all_bitstrings(n))


def pair_amalgamate(p: PairCondition, sigma, q: PairCondition) -> PairCondition:
    sigma = check_bits(sigma)
    if not pair_leq(q, pair_restrict(p, sigma)):
        raise AmalgamationError("q does not extend the sigma cell of p")
    left_addr, right_addr = split_pair(sigma)
    return PairCondition(amalgamate(p.left, left_addr, q.left),
                         amalgamate(p.right, right_addr, q.right))


# -- schedules and generic contexts ------------------------------------------

class FixedSchedule:
    """A schedule with an explicit list of coordinate kinds."""

    def __init__(self, kinds):
        kinds = tuple(kinds)
        if any(k not in (SINGLE, PAIR) for k in kinds):
            raise PreconditionError(f"bad kinds: {kinds!r}")
        if kinds and kinds[0] != SINGLE:
            raise PreconditionError("coordinate 0 must be single")
        self.kinds = kinds
        self.length = len(kinds)

    def kind(self, beta, context_view):
        return self.kinds[beta]

    def to_json(self):
        return {"kinds": list(self.kinds)}


class ScSchedule:
    """The self-coding schedule with base n.

    Coordinates up to n are single, coordinate n+1 is a pair, and
    coordinate n+2+j is a pair exactly when bit j of the packed join of
    the earlier generics is 1.  That bit lives at position (src, m) =
    pair_split(j) of the family, i.e. it is bit m of the real committed
    for coordinate src, which is strictly below the coordinate asking.
    """

    def __init__(self, n: int, length: int):
        if n < 0 or length < 0:
            raise PreconditionError("ScSchedule takes naturals")
        self.n = n
        self.length = length

    def kind(self, beta, context_view):
        if beta >= self.length:
            raise PreconditionError("coordinate outside the schedule")
        if beta <= self.n:
            return SINGLE
        if beta == self.n + 1:
            return PAIR
        j = beta - self.n - 2
        src, m = pair_split(j)
        committed = context_view.get(src)
        if committed is None or len(committed) <= m:
            raise PreconditionError(
                f"schedule at coordinate {beta} needs bit {m} of the "
                f"generic for coordinate {src}")
        return PAIR if committed[m] else SINGLE

    def to_json(self):
        return {"sc": self.n, "length": self.length}


class GenericContext:
    """Finite commitments about coordinate generics: for coordinate k, a
    prefix of the real that coordinate contributes (for a pair coordinate,
    of the interleave of its two reals)."""

    def __init__(self, commitments=None):
        self.commitments = {
            int(k): check_bits(v) for k, v in (commitments or {}).items()}

    def view_below(self, beta: int):
        return {k: v for k, v in self.commitments.items() if k < beta}

    def to_json(self):
        return {str(k): bits_str(v) for k, v in sorted(self.commitments.items())}

    @classmethod
    def from_json(cls, data):
        return cls({int(k): bits(v) for k, v in data.items()})


def schedule_from_json(data):
    if "kinds" in data:
        return FixedSchedule(data["kinds"])
    if "sc" in data:
        return ScSchedule(data["sc"], data["length"])
    raise PreconditionError("schedule JSON needs 'kinds' or 'sc'")


# -- guard calculus -----------------------------------------------------------

def _check_guard(guard, beta):
    out = {}
    for k, addr in guard.items():
        k = int(k)
        addr = check_bits(addr)
        if not 0 <= k < beta:
            raise PreconditionError(
                f"guard mentions coordinate {k}, not below {beta}")
        if not addr:
            raise PreconditionError("guard addresses must be nonempty")
        out[k] = addr
    return out


def _guards_compatible(g1, g2) -> bool:
    for k in g1.keys() & g2.keys():
        a, b = g1[k], g2[k]
        if not (_is_prefix(a, b) or _is_prefix(b, a)):
            return False
    return True


def _guard_meet(g1, g2):
    out = dict(g1)
    for k, b in g2.items():
        a = out.get(k)
        out[k] = b if a is None or len(b) >= len(a) else a
    return out


def _complement_guards(guard):
    """Pairwise-incompatible guards jointly covering the complement of
    ``guard``, by first point of difference."""
    items = sorted(guard.items())
    out = []
    for i, (k, addr) in enumerate(items):
        prefix = dict(items[:i])
        for other in _cells_of_length(len(addr)):
            if other != addr:
                out.append({**prefix, k: other})
    return out


def _cells_of_length(n):
    from .trees import all_bitstrings
    return all_bitstrings(n)


def _table_is_partition(rows, beta):
    """Rows must be pairwise incompatible and jointly exhaustive over the
    cells they mention."""
    if not rows:
        raise PreconditionError(f"coordinate {beta} has an empty table")
    for i, (g1, _) in enumerate(rows):
        for g2, _ in rows[i + 1:]:
            if _guards_compatible(g1, g2):
                raise PreconditionError(
                    f"coordinate {beta}: rows with compatible guards "
                    f"{g1} and {g2}")
    mention = {}
    for g, _ in rows:
        for k, addr in g.items():
            mention[k] = max(mention.get(k, 0), len(addr))
    keys = sorted(mention)
    from itertools import product as iproduct
    for combo in iproduct(*(_cells_of_length(mention[k]) for k in keys)):
        assignment = dict(zip(keys, combo))
        hits = sum(
            all(_is_prefix(addr, assignment[k]) for k, addr in g.items())
            for g, _ in rows)
        if hits != 1:
            raise PreconditionError(
                f"coordinate {beta}: guards are not exhaustive at "
                f"{assignment} (matched {hits} rows)")


# -- iteration conditions ------------------------------------------------------

class IterCondition:
    """A finite iteration condition: one guarded table per coordinate."""

    def __init__(self, schedule, coords, context: GenericContext | None = None):
        self.schedule = schedule
        ctx = context or GenericContext()
        self.context = ctx
        self.kinds = tuple(
            schedule.kind(beta, ctx.view_below(beta))
            for beta in range(schedule.length))
        coords = [list(table) for table in coords]
        if len(coords) != schedule.length:
            raise PreconditionError(
                f"expected {schedule.length} coordinates, got {len(coords)}")
        cooked = []
        for beta, table in enumerate(coords):
            rows = []
            for guard, payload in table:
                guard = _check_guard(guard, beta)
                self._check_payload(payload, self.kinds[beta], beta)
                rows.append((guard, payload))
            _table_is_partition(rows, beta)
            cooked.append(tuple(rows))
        self.coords = tuple(cooked)
        if context is not None:
            self._check_context(context)

    @staticmethod
    def _check_payload(payload, kind, beta):
        want = SkeletonTree if kind == SINGLE else PairCondition
        if not isinstance(payload, want):
            raise PreconditionError(
                f"coordinate {beta} is {kind} but payload is "
                f"{type(payload).__name__}")

    def _check_context(self, context):
        for beta, committed in context.commitments.items():
            if not 0 <= beta < self.length or not committed:
                continue
            ok = False
            for _, payload in self.coords[beta]:
                if self.kinds[beta] == SINGLE:
                    ok = ok or payload.contains(committed)
                else:
                    lhs, rhs = split_pair(committed)
                    ok = ok or (payload.left.contains(lhs)
                                and payload.right.contains(rhs))
            if not ok:
                raise PreconditionError(
                    f"context commitment for coordinate {beta} is not a "
                    f"branch of any payload")

    @property
    def length(self):
        return len(self.kinds)

    def coordinate(self, beta):
        """The payload at an unconditional coordinate (single-row table)."""
        table = self.coords[beta]
        if len(table) != 1 or table[0][0]:
            raise PreconditionError(f"coordinate {beta} is conditional")
        return table[0][1]

    def to_json(self):
        def payload_json(payload):
            return payload.to_json()

        return {
            "kind": "iter",
            "schedule": self.schedule.to_json(),
            "context": self.context.to_json(),
            "coords": [
                [{"guard": {str(k): bits_str(v) for k, v in g.items()},
                  "payload": payload_json(pay)}
                 for g, pay in table]
                for table in self.coords],
        }

    @classmethod
    def from_json(cls, data):
        schedule = schedule_from_json(data["schedule"])
        context = GenericContext.from_json(data.get("context", {}))
        coords = []
        for table in data["coords"]:
            rows = []
            for row in table:
                guard = {int(k): bits(v) for k, v in row["guard"].items()}
                pj = row["payload"]
                if isinstance(pj, dict) and pj.get("kind") == "pair":
                    payload = PairCondition.from_json(pj)
                else:
                    payload = SkeletonTree.from_json(pj)
                rows.append((guard, payload))
            coords.append(rows)
        return cls(schedule, coords, context)


def plain_iter(kinds, payloads) -> IterCondition:
    """Iteration with unconditional coordinates."""
    return IterCondition(FixedSchedule(kinds), [[({}, p)] for p in payloads])


def full_iter(kinds) -> IterCondition:
    return plain_iter(kinds, [
        full_tree() if k == SINGLE else full_pair() for k in kinds])


def is_full_iter(p: IterCondition) -> bool:
    for beta, table in enumerate(p.coords):
        for _, payload in table:
            if p.kinds[beta] == SINGLE:
                if payload != full_tree():
                    return False
            elif payload != full_pair():
                return False
    return True


def _addresses(sigma, mode, length):
    sigma = check_bits(sigma)
    if mode == COLUMN:
        if width(len(sigma)) > length:
            raise PreconditionError(
                f"sigma has {width(len(sigma))} nonempty columns but the "
                f"iteration has length {length}")
        return [column(sigma, k) for k in range(length)]
    if mode == PAIRWISE:
        if length != 2:
            raise PreconditionError("pairwise mode needs a length-2 iteration")
        lhs, rhs = split_pair(sigma)
        return [lhs, rhs]
    raise PreconditionError(f"unknown mode {mode!r}")


def _restrict_payload(payload, addr, kind):
    if kind == SINGLE:
        return payload.restrict_cell(addr)
    return pair_restrict(payload, addr)


def _payload_leq(q_pay, p_pay, kind):
    if kind == SINGLE:
        return subtree_leq(q_pay, p_pay)
    return pair_leq(q_pay, p_pay)


def _amalg_payload(p_pay, addr, q_pay, kind):
    if kind == SINGLE:
        return amalgamate(p_pay, addr, q_pay)
    return pair_amalgamate(p_pay, addr, q_pay)


def iter_restrict(p: IterCondition, sigma, mode=COLUMN) -> IterCondition:
    """Restrict every coordinate by its share of sigma, specializing
    guards: implied guard entries drop, refined ones keep their residual
    address, incompatible rows die."""
    addrs = _addresses(sigma, mode, p.length)
    new_coords = []
    for m, table in enumerate(p.coords):
        rows = []
        for guard, payload in table:
            residual = {}
            dead = False
            for k, b in guard.items():
                a = addrs[k]
                if _is_prefix(b, a):
                    continue
                if _is_prefix(a, b):
                    residual[k] = b[len(a):]
                else:
                    dead = True
                    break
            if not dead:
                rows.append((residual,
                             _restrict_payload(payload, addrs[m], p.kinds[m])))
        new_coords.append(rows)
    return IterCondition(FixedSchedule(p.kinds), new_coords)


def iter_leq(q: IterCondition, p: IterCondition) -> bool:
    """Extension order, evaluated per shared guard refinement: wherever
    two rows can both apply, q's payload must extend p's."""
    if q.kinds != p.kinds:
        raise IncompatibleError(
            f"kind mismatch: {q.kinds} vs {p.kinds}")
    for m in range(p.length):
        for gq, pay_q in q.coords[m]:
            for gp, pay_p in p.coords[m]:
                if _guards_compatible(gq, gp):
                    if not _payload_leq(pay_q, pay_p, p.kinds[m]):
                        return False
    return True


def iter_equal(q: IterCondition, p: IterCondition) -> bool:
    return iter_leq(q, p) and iter_leq(p, q)


def iter_leq_n(q: IterCondition, p: IterCondition, n: int, mode=COLUMN) -> bool:
    from .trees import all_bitstrings
    return all(
        iter_leq(iter_restrict(q, sigma, mode), iter_restrict(p, sigma, mode))
        for sigma in all_bitstrings(n))


def iter_amalgamate(p: IterCondition, sigma, q: IterCondition,
                    mode=COLUMN) -> IterCondition:
    """Graft q onto the sigma-cell of p.

    Coordinate m uses the amalgamated payload when all earlier
    coordinates pass through their sigma-cells, and keeps p's payload on
    the complementary cells; restricting the result back to sigma gives
    q, and restricting to an index that already differs at coordinate 0
    gives p's restriction.
    """
    addrs = _addresses(sigma, mode, p.length)
    if not iter_leq(q, iter_restrict(p, sigma, mode)):
        raise AmalgamationError("q does not extend the sigma cell of p")
    new_coords = []
    for m, table in enumerate(p.coords):
        sguard = {k: addrs[k] for k in range(m) if addrs[k]}
        rows = []
        for guard, payload in table:
            if not _guards_compatible(guard, sguard):
                rows.append((guard, payload))
                continue
            inside = _guard_meet(guard, sguard)
            for gq, pay_q in q.coords[m]:
                lifted = {k: addrs[k] + b for k, b in gq.items()}
                if _guards_compatible(inside, lifted):
                    rows.append((_guard_meet(inside, lifted),
                                 _amalg_payload(payload, addrs[m], pay_q,
                                                p.kinds[m])))
            for comp in _complement_guards(sguard):
                if _guards_compatible(guard, comp):
                    rows.append((_guard_meet(guard, comp), payload))
        new_coords.append(rows)
    return IterCondition(FixedSchedule(p.kinds), new_coords)


# -- product conditions --------------------------------------------------------

def _index_sort_key(i):
    if isinstance(i, bool):
        return (3, "", repr(i))
    if isinstance(i, int):
        return (0, "", (i,))
    if isinstance(i, tuple) and all(isinstance(x, int) for x in i):
        return (1, "", i)
    if isinstance(i, str):
        return (2, i, ())
    return (3, "", repr(i))


def _sorted_indices(indices):
    return tuple(sorted(indices, key=_index_sort_key))


class ProductCondition:
    """Finite-support product of iteration conditions, indexed by opaque
    ordered labels."""

    def __init__(self, coords):
        cooked = {}
        for i, cond in dict(coords).items():
            if not isinstance(cond, IterCondition):
                raise PreconditionError(
                    f"coordinate {i!r} must be an iteration condition")
            cooked[i] = cond
        self._coords = cooked

    @property
    def support(self):
        return _sorted_indices(self._coords)

    @property
    def coords(self):
        return dict(self._coords)

    def coordinate(self, i):
        return self._coords[i]

    def to_json(self):
        def index_json(i):
            return list(i) if isinstance(i, tuple) else i

        return {
            "kind": "product",
            "coords": [{"index": index_json(i), "cond": self._coords[i].to_json()}
                       for i in self.support],
        }

    @classmethod
    def from_json(cls, data):
        coords = {}
        for item in data["coords"]:
            idx = item["index"]
            if isinstance(idx, list):
                idx = tuple(idx)
            coords[idx] = IterCondition.from_json(item["cond"])
        return cls(coords)


def prod_restrict(p: ProductCondition, sigma, sbar) -> ProductCondition:
    """Distribute the columns of sigma over the coordinates listed in
    sbar; everything else is untouched."""
    sigma = check_bits(sigma)
    sbar = list(sbar)
    if len(set(map(repr, sbar))) != len(sbar):
        raise PreconditionError("sbar entries must be pairwise distinct")
    if len(sbar) < width(len(sigma)):
        raise PreconditionError(
            f"sbar must name at least {width(len(sigma))} coordinates")
    coords = p.coords
    for k, i in enumerate(sbar):
        addr = column(sigma, k)
        if not addr:
            continue
        if i not in coords:
            raise PreconditionError(
                f"cannot restrict coordinate {i!r} outside the support")
        coords[i] = iter_restrict(coords[i], addr, COLUMN)
    return ProductCondition(coords)


def prod_extends(q: ProductCondition, p: ProductCondition) -> bool:
    """Plain coordinatewise extension; a coordinate missing from q stands
    for the weakest condition."""
    for i, cond in p.coords.items():
        if i in q.coords:
            if not iter_leq(q.coords[i], cond):
                return False
        elif not is_full_iter(cond):
            return False
    return True


def prod_equal(q: ProductCondition, p: ProductCondition) -> bool:
    return prod_extends(q, p) and prod_extends(p, q)


def prod_leq(q: ProductCondition, p: ProductCondition, n: int, sbar) -> bool:
    """The graded order: every length-n index, distributed over sbar,
    restricts q to an extension of the matching restriction of p."""
    from .trees import all_bitstrings
    return all(
        prod_extends(prod_restrict(q, sigma, sbar),
                     prod_restrict(p, sigma, sbar))
        for sigma in all_bitstrings(n))


def prod_amalgamate(p: ProductCondition, sigma, sbar,
                    q: ProductCondition) -> ProductCondition:
    """Coordinatewise amalgamation along sbar; off sbar the result simply
    takes q's coordinates."""
    sigma = check_bits(sigma)
    restricted = prod_restrict(p, sigma, sbar)
    if not prod_extends(q, restricted):
        raise AmalgamationError("q does not extend the restriction of p")
    coords = q.coords
    p_coords = p.coords
    for k, i in enumerate(list(sbar)):
        addr = column(sigma, k)
        if i in p_coords:
            qi = coords.get(i, iter_restrict(p_coords[i], addr, COLUMN))
            coords[i] = iter_amalgamate(p_coords[i], addr, qi, COLUMN)
    return ProductCondition(coords)


def permute_indices(p: ProductCondition, mapping) -> ProductCondition:
    """Relabel coordinates along an injective mapping (identity where the
    mapping is silent)."""
    mapping = dict(mapping)
    out = {}
    for i, cond in p.coords.items():
        j = mapping.get(i, i)
        if j in out:
            raise PreconditionError(f"mapping is not injective at {j!r}")
        out[j] = cond
    return ProductCondition(out)


def condition_from_json(data):
    kind = data.get("kind")
    if kind == "pair":
        return PairCondition.from_json(data)
    if kind == "iter":
        return IterCondition.from_json(data)
    if kind == "product":
        return ProductCondition.from_json(data)
    raise PreconditionError(f"unknown condition kind {kind!r}")
