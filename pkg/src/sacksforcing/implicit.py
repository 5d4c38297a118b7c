"""Implicit definability over finite membership structures.

The language has one extra unary predicate symbol S on top of membership
and equality.  A subset S0 of a finite structure X is *implicitly
defined* by a formula phi (with parameters from X) when S0 is the one
and only subset for which (X, in, S0) satisfies phi.  Collecting every
subset so definable within a formula-size budget, and iterating from the
empty structure with each level's members re-coded as sets, climbs a
hierarchy; with enough budget it walks the finite cumulative ranks level
by level, because parameters make every subset of a finite structure
pin-downable.

Hereditarily finite sets are coded by naturals: bit i of the code of b
is set exactly when the set coded by i is a member of b.  Equal codes
mean equal sets, so levels compare as plain sets of naturals.

The enumerator in implicit_subsets works with semantic tables instead of
formula syntax: one big integer per formula class, one bit per
(variable-assignment, subset) pair.  Two formulas with the same table
are interchangeable everywhere, so keeping the smallest size per table
loses nothing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, PreconditionError, ResourceError

# budgets above this may need a fourth enumeration variable (four
# mutually constrained variables take four quantifiers, three relating
# atoms and two connectives, fifteen nodes in all), which the table
# enumerator does not allocate
MAX_BUDGET = 14


# -- set codes ------------------------------------------------------------------

def set_members(code: int):
    """Member codes of the set coded by ``code``, ascending."""
    if code < 0:
        raise PreconditionError("set codes are naturals")
    out = []
    i = 0
    while code:
        if code & 1:
            out.append(i)
        code >>= 1
        i += 1
    return tuple(out)


def set_of(members) -> int:
    code = 0
    for m in members:
        if m < 0:
            raise PreconditionError("set codes are naturals")
        code |= 1 << m
    return code


def set_contains(code: int, member: int) -> bool:
    return bool((code >> member) & 1)


class FinStructure:
    """A finite universe of set codes with the induced membership
    relation.  Transitivity is reported, not required."""

    def __init__(self, universe):
        universe = tuple(sorted(universe))
        if len(set(universe)) != len(universe):
            raise PreconditionError("universe has repeated elements")
        if universe and universe[0] < 0:
            raise PreconditionError("set codes are naturals")
        self.universe = universe
        self._index = {c: i for i, c in enumerate(universe)}

    @property
    def size(self):
        return len(self.universe)

    @property
    def is_transitive(self):
        have = set(self.universe)
        return all(m in have for c in self.universe for m in set_members(c))

    def __contains__(self, code):
        return code in self._index

    def index(self, code):
        return self._index[code]


# -- formulas ---------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Param:
    index: int


@dataclass(frozen=True)
class Member:
    left: object
    right: object


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Pred:
    term: object


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


_BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
_QUANT = {Forall: "all", Exists: "ex"}


def formula_size(f) -> int:
    """AST node count; terms count as one node each."""
    if isinstance(f, (Var, Param)):
        return 1
    if isinstance(f, Pred):
        return 1 + formula_size(f.term)
    if isinstance(f, (Member, Eq)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, Not):
        return 1 + formula_size(f.body)
    if isinstance(f, (Forall, Exists)):
        return 1 + formula_size(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    raise PreconditionError(f"not a formula node: {f!r}")


def free_vars(f, bound=frozenset()):
    if isinstance(f, Var):
        return set() if f.name in bound else {f.name}
    if isinstance(f, Param):
        return set()
    if isinstance(f, Pred):
        return free_vars(f.term, bound)
    if isinstance(f, (Member, Eq, And, Or, Implies, Iff)):
        return free_vars(f.left, bound) | free_vars(f.right, bound)
    if isinstance(f, Not):
        return free_vars(f.body, bound)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body, bound | {f.var})
    raise PreconditionError(f"not a formula node: {f!r}")


def _term_text(t):
    return t.name if isinstance(t, Var) else f"#{t.index}"


def formula_text(f) -> str:
    """Parseable rendering; binary connectives are parenthesized."""
    if isinstance(f, Pred):
        return f"S({_term_text(f.term)})"
    if isinstance(f, Member):
        return f"{_term_text(f.left)} in {_term_text(f.right)}"
    if isinstance(f, Eq):
        return f"{_term_text(f.left)} = {_term_text(f.right)}"
    if isinstance(f, Not):
        return "!" + formula_text(f.body)
    if isinstance(f, (Forall, Exists)):
        # parenthesized so it survives as the left operand of a binary:
        # the parser gives quantifiers the widest possible scope
        return f"({_QUANT[type(f)]} {f.var}. {formula_text(f.body)})"
    if isinstance(f, (And, Or, Implies, Iff)):
        return (f"({formula_text(f.left)} {_BINARY[type(f)]} "
                f"{formula_text(f.right)})")
    raise PreconditionError(f"not a formula node: {f!r}")


_TOKEN = re.compile(r"\s*(?:(<->|->|[()=.&|!])|(#\d+)|([A-Za-z_][A-Za-z0-9_]*))")
_KEYWORDS = {"all", "ex", "in", "S"}


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"bad character {stripped[0]!r}", at)
        sym, hash_, name = m.groups()
        start = m.end() - len(sym or hash_ or name)
        tokens.append((sym or hash_ or name, start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k][0]

    def pos(self):
        return self.tokens[self.k][1]

    def take(self, expected=None):
        tok, pos = self.tokens[self.k]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos)
        self.k += 1
        return tok

    def formula(self):
        left = self.implication()
        while self.peek() == "<->":
            self.take()
            left = Iff(left, self.implication())
        return left

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("all", "ex"):
            self.take()
            var = self.variable()
            self.take(".")
            body = self.formula()
            return (Forall if tok == "all" else Exists)(var, body)
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if tok == "S":
            self.take()
            self.take("(")
            term = self.term()
            self.take(")")
            return Pred(term)
        left = self.term()
        op = self.peek()
        if op == "in":
            self.take()
            return Member(left, self.term())
        if op == "=":
            self.take()
            return Eq(left, self.term())
        raise ParseError(f"expected 'in' or '=', found {op!r}", self.pos())

    def variable(self):
        tok, pos = self.tokens[self.k]
        if not tok or not tok[0].isalpha() or tok in _KEYWORDS:
            raise ParseError(f"expected a variable, found {tok!r}", pos)
        self.k += 1
        return tok

    def term(self):
        tok, pos = self.tokens[self.k]
        if tok.startswith("#"):
            self.k += 1
            return Param(int(tok[1:]))
        if tok and tok[0].isalpha() and tok not in _KEYWORDS:
            self.k += 1
            return Var(tok)
        raise ParseError(f"expected a term, found {tok!r}", pos)


def parse_formula(text: str):
    parser = _Parser(text)
    out = parser.formula()
    if parser.peek() != "":
        raise ParseError(f"unexpected {parser.peek()!r} after formula",
                         parser.pos())
    return out


# -- evaluation -------------------------------------------------------------------

def eval_formula(f, structure: FinStructure, subset, params=()) -> bool:
    """Tarskian satisfaction over the structure's universe, with the
    predicate symbol read as membership in ``subset``."""
    subset = frozenset(subset)
    params = tuple(params)
    for c in subset:
        if c not in structure:
            raise PreconditionError(f"subset element {c} outside the universe")
    for c in params:
        if c not in structure:
            raise PreconditionError(f"parameter {c} outside the universe")

    def term_val(t, env):
        if isinstance(t, Var):
            if t.name not in env:
                raise PreconditionError(f"unbound variable {t.name!r}")
            return env[t.name]
        if isinstance(t, Param):
            if not 0 <= t.index < len(params):
                raise PreconditionError(f"no parameter #{t.index}")
            return params[t.index]
        raise PreconditionError(f"not a term: {t!r}")

    def sat(g, env):
        if isinstance(g, Pred):
            return term_val(g.term, env) in subset
        if isinstance(g, Member):
            return set_contains(term_val(g.right, env), term_val(g.left, env))
        if isinstance(g, Eq):
            return term_val(g.left, env) == term_val(g.right, env)
        if isinstance(g, Not):
            return not sat(g.body, env)
        if isinstance(g, And):
            return sat(g.left, env) and sat(g.right, env)
        if isinstance(g, Or):
            return sat(g.left, env) or sat(g.right, env)
        if isinstance(g, Implies):
            return (not sat(g.left, env)) or sat(g.right, env)
        if isinstance(g, Iff):
            return sat(g.left, env) == sat(g.right, env)
        if isinstance(g, Forall):
            return all(sat(g.body, {**env, g.var: c})
                       for c in structure.universe)
        if isinstance(g, Exists):
            return any(sat(g.body, {**env, g.var: c})
                       for c in structure.universe)
        raise PreconditionError(f"not a formula node: {g!r}")

    return sat(f, {})


def implicitly_defined_by(structure: FinStructure, f, params=()):
    """The unique satisfying subset, or None when zero or several
    subsets satisfy the formula."""
    found = None
    for mask in range(1 << structure.size):
        subset = frozenset(structure.universe[j]
                           for j in range(structure.size) if (mask >> j) & 1)
        if eval_formula(f, structure, subset, params):
            if found is not None:
                return None
            found = subset
    return found


# -- the budgeted enumerator --------------------------------------------------------

def _var_pool(budget: int) -> int:
    # a second variable first matters in a closed formula at size 5
    # (two quantifiers around a relating atom), a third at size 9
    return 1 + (budget >= 5) + (budget >= 9)


def implicit_subsets(structure: FinStructure, budget: int):
    """Every subset implicitly defined by some formula of AST size at
    most ``budget``, parameters included as constant-size-one terms.

    The empty structure is special-cased: it has exactly one subset, and
    that subset is returned at every budget rather than making the
    answer depend on which vacuously-true formula first fits the budget.
    """
    if budget > MAX_BUDGET:
        raise ResourceError(
            f"budget {budget} exceeds {MAX_BUDGET}, the range where the "
            f"three-variable enumeration is provably complete")
    universe = structure.universe
    u = len(universe)
    if u == 0:
        return frozenset({frozenset()})

    nvars = _var_pool(budget)
    nsub = 1 << u
    nasg = u ** nvars
    nbits = nasg * nsub
    full = (1 << nbits) - 1

    strides = [u ** i * nsub for i in range(nvars)]
    slot_masks = []
    for i in range(nvars):
        per_val = []
        for k in range(u):
            m = 0
            for a in range(nasg):
                if (a // u ** i) % u == k:
                    m |= ((1 << nsub) - 1) << (a * nsub)
            per_val.append(m)
        slot_masks.append(per_val)

    def forall(t, i):
        folded = full
        for k in range(u):
            folded &= (t & slot_masks[i][k]) >> (k * strides[i])
        out = 0
        for k in range(u):
            out |= folded << (k * strides[i])
        return out

    def exists(t, i):
        folded = 0
        for k in range(u):
            folded |= (t & slot_masks[i][k]) >> (k * strides[i])
        out = 0
        for k in range(u):
            out |= folded << (k * strides[i])
        return out

    assignments = [
        tuple(universe[(a // u ** i) % u] for i in range(nvars))
        for a in range(nasg)]
    terms = [("v", i) for i in range(nvars)] + [("c", c) for c in universe]

    def term_val(t, asg):
        return asg[t[1]] if t[0] == "v" else t[1]

    def atom_table(holds):
        t = 0
        bit = 1
        for asg in assignments:
            for s in range(nsub):
                if holds(asg, s):
                    t |= bit
                bit <<= 1
        return t

    classes = {}
    by_size = {}

    def add(table, size):
        if table not in classes:
            classes[table] = size
            by_size.setdefault(size, []).append(table)

    position = structure.index
    if budget >= 2:
        for tm in terms:
            add(atom_table(lambda asg, s, tm=tm:
                           (s >> position(term_val(tm, asg))) & 1), 2)
    if budget >= 3:
        for t1 in terms:
            for t2 in terms:
                add(atom_table(lambda asg, s, t1=t1, t2=t2: set_contains(
                    term_val(t2, asg), term_val(t1, asg))), 3)
                add(atom_table(lambda asg, s, t1=t1, t2=t2:
                               term_val(t1, asg) == term_val(t2, asg)), 3)

    for size in range(3, budget + 1):
        for t in by_size.get(size - 1, []):
            add(~t & full, size)
            for i in range(nvars):
                add(forall(t, i), size)
                add(exists(t, i), size)
        for s1 in range(2, (size - 1) // 2 + 1):
            s2 = size - 1 - s1
            for t1 in by_size.get(s1, []):
                for t2 in by_size.get(s2, []):
                    add(t1 & t2, size)
                    add(t1 | t2, size)
                    add((~t1 | t2) & full, size)
                    add((~t2 | t1) & full, size)
                    add(~(t1 ^ t2) & full, size)

    submask = (1 << nsub) - 1
    defined = set()
    for table in classes:
        if any(forall(table, i) != table for i in range(nvars)):
            continue  # open formula; its closures were enumerated too
        family = table & submask
        if family and family & (family - 1) == 0:
            s = family.bit_length() - 1
            defined.add(frozenset(universe[j] for j in range(u)
                                  if (s >> j) & 1))
    return frozenset(defined)


# -- hierarchies ---------------------------------------------------------------------

MAX_LEVEL_UNIVERSE = 4


def imp_levels(n: int, budget: int):
    """Levels 0..n of the iterated implicitly-definable powerset, each a
    set of set codes; level 0 is empty."""
    levels = [frozenset()]
    for k in range(1, n + 1):
        carrier = sorted(levels[-1])
        if len(carrier) > MAX_LEVEL_UNIVERSE:
            raise ResourceError(
                f"level {k} would enumerate formulas over {len(carrier)} "
                f"sets; {MAX_LEVEL_UNIVERSE} is the supported maximum")
        family = implicit_subsets(FinStructure(carrier), budget)
        levels.append(frozenset(set_of(s) for s in family))
    return levels


def vn_levels(n: int):
    """Levels 0..n of the plain cumulative ranks: each level is the full
    powerset of the previous one, as set codes."""
    if n > 4:
        raise PreconditionError("rank levels above 4 are too large to build")
    levels = [frozenset()]
    for _ in range(n):
        prev = sorted(levels[-1])
        levels.append(frozenset(
            set_of(prev[j] for j in range(len(prev)) if (mask >> j) & 1)
            for mask in range(1 << len(prev))))
    return levels


def levels_to_json(levels):
    return [sorted(level) for level in levels]
