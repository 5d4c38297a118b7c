import math

import pytest

from sacksforcing.bitseq import bits, column, join_family, join_pair, width
from sacksforcing.errors import (
    AmalgamationError, IncompatibleError, PreconditionError,
)
from sacksforcing.conditions import (
    COLUMN, PAIR, PAIRWISE, SINGLE,
    FixedSchedule, GenericContext, IterCondition, PairCondition,
    ProductCondition, ScSchedule,
    condition_from_json, full_iter, full_pair, full_tree, is_full_iter,
    iter_amalgamate, iter_equal, iter_leq, iter_leq_n, iter_restrict,
    pair_amalgamate, pair_leq, pair_leq_n, pair_restrict, permute_indices,
    plain_iter, prod_amalgamate, prod_equal, prod_extends, prod_leq,
    prod_restrict, schedule_from_json,
)
from sacksforcing.trees import (
    SkeletonTree, all_bitstrings, amalgamate, enumerate_trees, leq_n,
    subtree_leq,
)


def make_tree(depth, entries):
    return SkeletonTree(depth, {bits(k): bits(v) for k, v in entries.items()})


F = full_tree()
T1 = make_tree(1, {"": "0", "0": "00", "1": "011"})

# the two-step fixture: q extends the (0)-cells of both coordinates
T = F
S = F.restrict_cell(bits("00"))
TP = make_tree(1, {"": "1", "0": "10", "1": "11"})
SP = make_tree(0, {"": "100"})

P2 = plain_iter([SINGLE, SINGLE], [T, TP])
Q2 = plain_iter([SINGLE, SINGLE], [S, SP])
SIGMA00 = join_pair(bits("0"), bits("0"))


def distinct_trees(max_depth, slack):
    seen = {}
    for t in enumerate_trees(max_depth, slack):
        seen.setdefault(t.canonical(), t)
    return list(seen)


# -- pair conditions ----------------------------------------------------------

def test_pair_restrict_examples():
    p = PairCondition(T1, F)
    assert pair_restrict(p, bits("")) == p
    r = pair_restrict(PairCondition(F, F), bits("01"))
    assert r == PairCondition(F.restrict_cell(bits("0")),
                              F.restrict_cell(bits("1")))
    # an odd-length index sends nothing to the right component
    assert pair_restrict(p, bits("1")) == \
        PairCondition(T1.restrict_cell(bits("1")), F)


def test_pair_leq_n_translated_levels():
    trees = distinct_trees(1, 1)
    leq_pairs = [(a, b) for a in trees for b in trees if subtree_leq(a, b)]
    for la, lb in leq_pairs:
        for ra, rb in leq_pairs:
            q, p = PairCondition(la, ra), PairCondition(lb, rb)
            for n in range(4):
                expected = (leq_n(la, lb, math.ceil(n / 2))
                            and leq_n(ra, rb, math.floor(n / 2)))
                assert pair_leq_n(q, p, n) == expected


def test_pair_leq_n_lost_cell():
    p = PairCondition(F, F)
    assert pair_leq_n(p, p, 3)
    q = PairCondition(F.restrict_cell(bits("0")), F)
    assert pair_leq(q, p)
    assert not pair_leq_n(q, p, 1)


def test_pair_amalgamate():
    p = PairCondition(T, TP)
    sigma = bits("01")  # left cell (0), right cell (1)
    q = PairCondition(F.restrict_cell(bits("01")),
                      TP.restrict_cell(bits("1")).restrict_cell(bits("0")))
    assert pair_leq(q, pair_restrict(p, sigma))
    r = pair_amalgamate(p, sigma, q)
    assert pair_restrict(r, sigma) == q
    for n in range(3):
        for tau in all_bitstrings(n):
            rt, pt = pair_restrict(r, tau), pair_restrict(p, tau)
            assert pair_leq(rt, pt)
            if tau[0::2] != sigma[0::2][: math.ceil(len(tau) / 2)]:
                pass  # left halves incomparable only when same length
    # partial equality in the untouched component
    for tau in all_bitstrings(2):
        if tau[0::2] != sigma[0::2]:
            assert pair_restrict(r, tau).left == pair_restrict(p, tau).left
    assert pair_amalgamate(p, sigma, pair_restrict(p, sigma)) == p
    with pytest.raises(AmalgamationError):
        pair_amalgamate(p, sigma, PairCondition(F, F))


# -- iteration restriction ----------------------------------------------------

def test_iter_restrict_trivial():
    for mode in (COLUMN, PAIRWISE):
        assert iter_equal(iter_restrict(P2, bits(""), mode), P2)


def test_iter_restrict_comment_fixture():
    r = iter_restrict(P2, SIGMA00, PAIRWISE)
    assert r.coordinate(0) == T.restrict_cell(bits("0"))
    assert r.coordinate(1) == TP.restrict_cell(bits("0"))


def test_column_mode_distributes():
    trees = [T1, TP, F]
    p = plain_iter([SINGLE] * 3, trees)
    sigma = bits("101101")
    r = iter_restrict(p, sigma, COLUMN)
    for k in range(3):
        assert r.coordinate(k) == trees[k].restrict_cell(column(sigma, k))


def test_mode_preconditions():
    p3 = plain_iter([SINGLE] * 3, [F, F, F])
    with pytest.raises(PreconditionError):
        iter_restrict(p3, bits("0"), PAIRWISE)
    with pytest.raises(PreconditionError):
        iter_restrict(P2, bits("101101"), COLUMN)  # needs three columns
    with pytest.raises(PreconditionError):
        iter_restrict(P2, bits("0"), "diagonal")


# -- iteration amalgamation: the worked two-step example -----------------------

def test_amalgamation_reproduces_worked_example():
    r = iter_amalgamate(P2, SIGMA00, Q2, PAIRWISE)

    # shape: an unconditional first coordinate, a two-row table after it
    assert r.coords[0] == (({}, amalgamate(T, bits("0"), S)),)
    guards = sorted((g[0] for g, _ in r.coords[1]))
    assert guards == [bits("0"), bits("1")]

    back = iter_restrict(r, SIGMA00, PAIRWISE)
    assert iter_equal(back, Q2)

    r01 = iter_restrict(r, join_pair(bits("0"), bits("1")), PAIRWISE)
    assert iter_equal(r01, plain_iter(
        [SINGLE, SINGLE], [S, TP.restrict_cell(bits("1"))]))

    for b in ("0", "1"):
        tau = join_pair(bits("1"), bits(b))
        assert iter_equal(iter_restrict(r, tau, PAIRWISE),
                          iter_restrict(P2, tau, PAIRWISE))

    assert iter_leq_n(r, P2, 2, PAIRWISE)


def test_amalgamation_trivial_graft():
    sigma = join_pair(bits("1"), bits("0"))
    r = iter_amalgamate(P2, sigma, iter_restrict(P2, sigma, PAIRWISE),
                        PAIRWISE)
    assert iter_equal(r, P2)


def test_amalgamation_precondition():
    with pytest.raises(AmalgamationError):
        iter_amalgamate(P2, SIGMA00, P2, PAIRWISE)


def test_column_amalgamation_partial_equality():
    """Restricting the amalgam anywhere that differs in the first column
    gives back p's restriction, exhaustively over length-2 indices."""
    p = plain_iter([SINGLE, SINGLE], [T1, TP])
    for sigma in all_bitstrings(2):
        for ext in all_bitstrings(2):
            q = iter_restrict(p, sigma + ext, COLUMN)
            r = iter_amalgamate(p, sigma, q, COLUMN)
            assert iter_equal(iter_restrict(r, sigma, COLUMN), q)
            for tau in all_bitstrings(2):
                rt = iter_restrict(r, tau, COLUMN)
                pt = iter_restrict(p, tau, COLUMN)
                assert iter_leq(rt, pt)
                if column(tau, 0) != column(sigma, 0):
                    assert iter_equal(rt, pt)


def test_iter_leq_n_detects_shrunk_cell():
    p = plain_iter([SINGLE, SINGLE], [F, F])
    shrunk = amalgamate(F, bits("1"), F.restrict_cell(bits("11")))
    q = plain_iter([SINGLE, SINGLE], [shrunk, F])
    assert iter_leq(q, p)
    assert iter_leq_n(q, p, 1, COLUMN)
    assert not iter_leq_n(q, p, 2, COLUMN)


def test_iter_leq_kind_mismatch():
    p3 = plain_iter([SINGLE, PAIR], [F, full_pair()])
    with pytest.raises(IncompatibleError):
        iter_leq(P2, p3)


# -- restriction composition and mode agreement --------------------------------

def guarded_fixture():
    sigma = bits("10")
    q = iter_restrict(P2, sigma + bits("11"), COLUMN)
    return iter_amalgamate(P2, sigma, q, COLUMN)


def test_restriction_composes_pairwise():
    r = iter_amalgamate(P2, SIGMA00, Q2, PAIRWISE)
    for sigma in all_bitstrings(2):
        first = iter_restrict(r, sigma, PAIRWISE)
        for tau in all_bitstrings(2):
            merged = join_pair(sigma[0::2] + tau[0::2],
                               sigma[1::2] + tau[1::2])
            assert iter_equal(iter_restrict(first, tau, PAIRWISE),
                              iter_restrict(r, merged, PAIRWISE))


def test_restriction_composes_columns():
    r = guarded_fixture()
    for sigma in all_bitstrings(1):
        first = iter_restrict(r, sigma, COLUMN)
        for tau in all_bitstrings(3):
            cols = [column(sigma, k) + column(tau, k) for k in range(2)]
            merged = join_family(cols, 4)
            assert iter_equal(iter_restrict(first, tau, COLUMN),
                              iter_restrict(r, merged, COLUMN))


def test_modes_agree_on_balanced_indices():
    r = guarded_fixture()
    for n in (0, 1, 3, 5):
        for sigma in all_bitstrings(n):
            via_pair = join_pair(column(sigma, 0), column(sigma, 1))
            assert iter_equal(iter_restrict(r, sigma, COLUMN),
                              iter_restrict(r, via_pair, PAIRWISE))


# -- guarded tables and schedules ----------------------------------------------

def test_guard_table_validation():
    sched = FixedSchedule([SINGLE, SINGLE])
    with pytest.raises(PreconditionError):  # overlapping guards
        IterCondition(sched, [
            [({}, F)],
            [({0: bits("0")}, F), ({}, F)],
        ])
    with pytest.raises(PreconditionError):  # gap at cell (1)
        IterCondition(sched, [[({}, F)], [({0: bits("0")}, F)]])
    with pytest.raises(PreconditionError):  # guard on a later coordinate
        IterCondition(sched, [[({1: bits("0")}, F)], [({}, F)]])
    with pytest.raises(PreconditionError):  # empty address
        IterCondition(sched, [[({}, F)], [({0: bits("")}, F)]])
    with pytest.raises(PreconditionError):  # payload kind mismatch
        IterCondition(sched, [[({}, full_pair())], [({}, F)]])
    with pytest.raises(PreconditionError):  # empty table
        IterCondition(sched, [[({}, F)], []])
    with pytest.raises(PreconditionError):  # first coordinate must be single
        FixedSchedule([PAIR])


def test_conditional_coordinate_accessor():
    r = iter_amalgamate(P2, SIGMA00, Q2, PAIRWISE)
    with pytest.raises(PreconditionError):
        r.coordinate(1)


def test_finer_guards_still_partition():
    sched = FixedSchedule([SINGLE, SINGLE])
    cond = IterCondition(sched, [
        [({}, T1)],
        [({0: bits("00")}, F), ({0: bits("01")}, TP), ({0: bits("1")}, F)],
    ])
    r = iter_restrict(cond, bits("0"), COLUMN)
    assert sorted(g[0] for g, _ in r.coords[1]) == [bits("0"), bits("1")]


def test_sc_schedule_kinds():
    context = GenericContext({0: bits("10")})
    payloads = [F, F, full_pair(), full_pair(), F]
    cond = IterCondition(ScSchedule(1, 5),
                         [[({}, p)] for p in payloads], context)
    assert cond.kinds == (SINGLE, SINGLE, PAIR, PAIR, SINGLE)


def test_sc_schedule_reads_pair_coordinate_bits():
    context = GenericContext({0: bits("10"), 1: bits("1")})
    payloads = [F, full_pair(), full_pair(), F, full_pair()]
    cond = IterCondition(ScSchedule(0, 5),
                         [[({}, p)] for p in payloads], context)
    assert cond.kinds == (SINGLE, PAIR, PAIR, SINGLE, PAIR)


def test_sc_schedule_needs_commitments():
    with pytest.raises(PreconditionError):
        IterCondition(ScSchedule(1, 4), [[({}, F)]] * 3 + [[({}, F)]])


def test_context_consistency_checked():
    stem0 = make_tree(0, {"": "0"})
    with pytest.raises(PreconditionError):
        IterCondition(FixedSchedule([SINGLE]), [[({}, stem0)]],
                      GenericContext({0: bits("10")}))
    # compatible commitment passes
    IterCondition(FixedSchedule([SINGLE]), [[({}, stem0)]],
                  GenericContext({0: bits("01")}))


# -- serialization --------------------------------------------------------------

def test_iter_json_round_trip():
    r = iter_amalgamate(P2, SIGMA00, Q2, PAIRWISE)
    back = condition_from_json(r.to_json())
    assert iter_equal(back, r)
    assert back.kinds == r.kinds


def test_sc_json_round_trip():
    context = GenericContext({0: bits("10")})
    payloads = [F, F, full_pair(), full_pair(), F]
    cond = IterCondition(ScSchedule(1, 5),
                         [[({}, p)] for p in payloads], context)
    data = cond.to_json()
    assert data["schedule"] == {"sc": 1, "length": 5}
    back = IterCondition.from_json(data)
    assert back.kinds == cond.kinds


def test_pair_json_round_trip():
    p = PairCondition(T1, TP)
    assert condition_from_json(p.to_json()) == p


def test_schedule_json_errors():
    with pytest.raises(PreconditionError):
        schedule_from_json({"weird": 1})
    with pytest.raises(PreconditionError):
        condition_from_json({"kind": "mystery"})


# -- products --------------------------------------------------------------------

def iter_of(tree):
    return plain_iter([SINGLE], [tree])


def test_prod_restrict_positions():
    p = ProductCondition({0: iter_of(T1), 1: iter_of(TP)})
    sigma = bits("10")
    r = prod_restrict(p, sigma, [0, 1])
    # both bits land in column 0; coordinate 1 sees the empty column
    assert iter_equal(r.coordinate(0), iter_of(T1.restrict_cell(bits("10"))))
    assert iter_equal(r.coordinate(1), p.coordinate(1))
    assert prod_equal(prod_restrict(p, bits(""), [0, 1]), p)


def test_prod_restrict_fresh_indices():
    p = ProductCondition({0: iter_of(T1)})
    r = prod_restrict(p, bits("1"), [0, 7])  # 7 gets the empty column
    assert sorted(r.coords) == [0]
    with pytest.raises(PreconditionError):
        prod_restrict(p, bits("101"), [0, 7])  # column 1 nonempty at 7
    with pytest.raises(PreconditionError):
        prod_restrict(p, bits("101101"), [0, 1])  # needs three columns
    with pytest.raises(PreconditionError):
        prod_restrict(p, bits("1"), [0, 0])


def test_prod_restrict_commutes_with_merge():
    p1 = ProductCondition({0: iter_of(T1)})
    p2 = ProductCondition({5: iter_of(TP)})
    merged = ProductCondition({**p1.coords, **p2.coords})
    for sigma in all_bitstrings(2):
        lhs = prod_restrict(merged, sigma, [0])
        rhs = ProductCondition(
            {**prod_restrict(p1, sigma, [0]).coords, **p2.coords})
        assert prod_equal(lhs, rhs)


def test_prod_leq_truncation_stability():
    p = ProductCondition({0: iter_of(F), 1: iter_of(F), 2: iter_of(F)})
    q = ProductCondition({
        0: iter_of(F.restrict_cell(bits("0"))),
        1: iter_of(F),
        2: iter_of(T1),
    })
    sbar = [0, 1, 2]
    for n in range(3):
        full_answer = prod_leq(q, p, n, sbar)
        for m in range(width(n), len(sbar) + 1):
            assert prod_leq(q, p, n, sbar[:m]) == full_answer
    assert prod_leq(p, p, 2, sbar)


def test_prod_leq_off_sbar_shrink():
    p = ProductCondition({0: iter_of(F), 9: iter_of(F)})
    q = ProductCondition({0: iter_of(F), 9: iter_of(T1)})
    assert prod_leq(q, p, 1, [0])
    assert not prod_equal(q, p)
    # dropping a nontrivial coordinate is not an extension
    assert not prod_extends(ProductCondition({0: iter_of(F)}),
                            ProductCondition({9: iter_of(T1)}))
    assert prod_extends(ProductCondition({0: iter_of(T1)}),
                        ProductCondition({9: iter_of(F)}))


def test_prod_amalgamate_basic():
    p = ProductCondition({0: iter_of(F), 1: iter_of(F)})
    sigma = bits("1")
    q = ProductCondition({
        0: iter_of(F.restrict_cell(bits("11"))),
        1: iter_of(F.restrict_cell(bits("0"))),
    })
    r = prod_amalgamate(p, sigma, [0], q)
    assert prod_equal(prod_restrict(r, sigma, [0]), q)
    assert prod_extends(r, p)
    with pytest.raises(AmalgamationError):
        prod_amalgamate(p, sigma, [0], ProductCondition({0: iter_of(T1)}))


def test_prod_amalgamate_partial_equality():
    """Whenever tau differs from sigma in the doubly-first column, the
    first listed coordinate of the amalgam restricts like p's."""
    trees = distinct_trees(1, 1)
    sbar = [0, 1]
    for t0 in trees[:4]:
        p = ProductCondition({0: iter_of(t0), 1: iter_of(F)})
        for sigma in all_bitstrings(2):
            q = prod_restrict(p, sigma + bits("1"), sbar)
            r = prod_amalgamate(p, sigma, sbar, q)
            b_sigma = column(column(sigma, 0), 0)
            for tau in all_bitstrings(2):
                if column(column(tau, 0), 0) != b_sigma:
                    assert iter_equal(
                        prod_restrict(r, tau, sbar).coordinate(0),
                        prod_restrict(p, tau, sbar).coordinate(0))


def test_permute_indices():
    p = ProductCondition({0: iter_of(T1), (1, 2): iter_of(TP)})
    assert prod_equal(permute_indices(p, {}), p)
    swap = {0: (1, 2), (1, 2): 0}
    assert prod_equal(permute_indices(permute_indices(p, swap), swap), p)
    q = ProductCondition({0: iter_of(T1.restrict_cell(bits("0"))),
                          (1, 2): iter_of(TP)})
    assert prod_extends(q, p)
    assert prod_extends(permute_indices(q, swap), permute_indices(p, swap))
    with pytest.raises(PreconditionError):
        permute_indices(p, {0: (1, 2)})


def test_support_ordering():
    p = ProductCondition({(1, 0): iter_of(F), 3: iter_of(F), 0: iter_of(F)})
    assert p.support == (0, 3, (1, 0))


def test_product_json_round_trip():
    p = ProductCondition({0: iter_of(T1), (1, 2): iter_of(TP)})
    back = condition_from_json(p.to_json())
    assert prod_equal(back, p)
    assert back.support == p.support


def test_full_iter_recognition():
    assert is_full_iter(full_iter([SINGLE, PAIR]))
    assert not is_full_iter(iter_of(T1))
