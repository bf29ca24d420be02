import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adlv.errors import BudgetExceeded, InvalidInput, InvalidParameter, UnsupportedDatum
from adlv.oracle.adlv import (FrobTwist, apply_family, block_shift, commutator, count_points,
                              delta_by_operators, delta_index, enumerate_window, family_endpoint,
                              family_limit, family_stabilizes, filtration_gap, gl5_explain,
                              gl5_family, gl5_lattice, gl5_shift, growth_exponent, invariant,
                              invariant_reference, matmul, member, operator_matrix, reduce_to_J,
                              shift, superbasic_window, unipotent_inverse)
from adlv.oracle.field import get_field
from adlv.oracle.lattice import Lattice, Window, canonicalize, relative_position

F2, F3, F4 = get_field(2), get_field(3), get_field(4)
GL5 = [(1, 2), (1, 3)]

TWISTS = [[(1, 2)], [(1, 3)], [(2, 3)], [(1, 2), (1, 3)], [(1, 1), (0, 1)], [(1, 1)] * 3,
          [(3, 4)], [(0, 1), (1, 2)], [(-1, 2), (2, 1)]]


# -- membership -------------------------------------------------------------------

def test_member_examples():
    tw = FrobTwist.from_blocks(GL5, F2)
    assert member(gl5_lattice(F2, 1, 0), tw, (2, 0, 0, 0, 0))
    assert member(gl5_lattice(F2, 1, 1), tw, (2, 0, 0, 0, 0))
    # a0 = 0 drops to the smaller stratum
    assert invariant(gl5_lattice(F2, 0, 0), tw) == (1, 1, 0, 0, 0)
    assert not member(gl5_lattice(F2, 0, 0), tw, (2, 0, 0, 0, 0))
    assert member(gl5_lattice(F2, 0, 1), tw, (2, 0, 0, 0, 0), closed=True)

    central = FrobTwist.from_blocks([(1, 1), (1, 1)], F2)
    assert member(Lattice.standard(F2, 2), central, (1, 1))

    sb = FrobTwist.from_blocks([(1, 2)], F2)
    L = canonicalize(F2, 2, [{0: 1}, {3: 1}])
    assert sb.apply(L) == canonicalize(F2, 2, [{1: 1}, {4: 1}])
    assert invariant(L, sb) == (2, -1)
    assert member(L, sb, (2, -1)) and not member(L, sb, (1, 0))
    assert member(L, sb, (3, -2), closed=True)


def test_member_rejects_bad_mu():
    tw = FrobTwist.from_blocks([(1, 2)], F2)
    with pytest.raises(InvalidInput):
        member(Lattice.standard(F2, 2), tw, (0, 1))
    with pytest.raises(InvalidInput):
        member(Lattice.standard(F2, 2), tw, (1, 0, 0))


@pytest.mark.parametrize("blocks", TWISTS)
def test_fast_invariant_matches_reference(blocks):
    rng = random.Random(len(blocks) * 31 + blocks[0][0])
    for field in (F2, F3, get_field(2, 2)):
        tw = FrobTwist.from_blocks(blocks, field)
        for _ in range(25):
            L = Lattice.random(field, tw.n, rng, -1, 2)
            ref = invariant_reference(L, tw)
            assert invariant(L, tw) == ref == relative_position(L, tw.apply(L))
            assert sum(ref) == tw.det_valuation


# -- the J-action ----------------------------------------------------------------------

@pytest.mark.parametrize("blocks", [[(1, 2)], [(1, 3)], [(2, 3)], [(3, 4)]])
def test_superbasic_shift_is_j_equivariant(blocks):
    rng = random.Random(7)
    tw = FrobTwist.from_blocks(blocks, F2)
    for _ in range(30):
        L = Lattice.random(F2, tw.n, rng)
        S = shift(L)
        assert invariant(S, tw) == invariant(L, tw)
        assert S.kappa == L.kappa + 1
        # the shift commutes with b sigma
        assert tw.apply(S) == shift(tw.apply(L))


def test_block_shifts_are_j_equivariant():
    rng = random.Random(9)
    tw = FrobTwist.from_blocks(GL5, F2)
    for _ in range(30):
        L = Lattice.random(F2, 5, rng)
        for block in (0, 1):
            S = block_shift(L, (2, 3), block)
            assert invariant(S, tw) == invariant(L, tw)
            assert S.kappa == L.kappa + 1
            assert tw.apply(S) == block_shift(tw.apply(L), (2, 3), block)


# -- the delta invariant ------------------------------------------------------------------

def test_delta_index_examples():
    for h in (1, 2, 3, 5):
        O = Lattice.standard(F2, h)
        assert tuple(delta_index(O)) == (-1, None)
        for i in range(-4, 5):
            assert tuple(delta_index(shift(O, i))) == (-1, None)
    L = canonicalize(F2, 2, [{0: 1}, {3: 1}])
    d = delta_index(L)
    assert tuple(d) == (1, 0) and (d.j1, d.j2) == (0, 1)


def test_delta_index_needs_one_block():
    with pytest.raises(UnsupportedDatum):
        delta_index(Lattice.standard(F2, 3), h=2)


def test_delta_index_matches_operator_description():
    rng = random.Random(17)
    for field in (F2, F3):
        for _ in range(80):
            n = rng.randint(1, 4)
            L = Lattice.random(field, n, rng, -1, 2)
            d = delta_index(L)
            delta, movers = delta_by_operators(L)
            assert d.delta == delta
            if delta >= 0:
                assert movers == (d.residue,)


# -- the operators a_{i,delta}(x) -------------------------------------------------------------

def test_apply_family_identity_and_kappa():
    rng = random.Random(1)
    for _ in range(40):
        n = rng.randint(1, 4)
        L = Lattice.random(F3, n, rng)
        i, delta = rng.randrange(n), rng.randint(0, 4)
        assert apply_family(L, i, delta, 0) == L
        x = rng.choice([1] if delta == 0 else [1, 2])
        assert apply_family(L, i, delta, x).kappa == L.kappa


def test_apply_family_excluded_parameter():
    O = Lattice.standard(F3, 2)
    with pytest.raises(InvalidParameter):
        apply_family(O, 0, 0, int(F3.neg[1]))
    with pytest.raises(InvalidParameter):
        apply_family(O, 0, -1, 1)
    apply_family(O, 0, 0, 1)


def test_family_inverse():
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(2, 4)
        L = Lattice.random(F3, n, rng)
        i, delta = rng.randrange(n), rng.randint(1, 3)
        x = rng.randrange(1, 3)
        if delta % n == 0:
            continue  # N^2 != 0: the inverse is not a single factor
        assert apply_family(apply_family(L, i, delta, x), i, delta, int(F3.neg[x])) == L


def test_products_of_factors_modulo_higher_delta():
    rng = random.Random(6)
    lo, hi = 0, 16
    for field in (F2, F3, F4):
        for _ in range(120):
            n = rng.randint(1, 4)
            i, delta = rng.randrange(n), rng.randint(1, 5)
            x, y = rng.randrange(field.order), rng.randrange(field.order)
            a = matmul(field, operator_matrix(field, n, i, delta, x, lo, hi),
                       operator_matrix(field, n, i, delta, y, lo, hi))
            b = operator_matrix(field, n, i, delta, int(field.add(x, y)), lo, hi)
            diff = matmul(field, a, unipotent_inverse(field, b))
            gap = filtration_gap(diff)
            assert gap is None or gap > delta


def test_commutators_raise_the_filtration():
    rng = random.Random(10)
    lo, hi = 0, 18
    for field in (F2, F3):
        for _ in range(300):
            n = rng.randint(1, 4)
            i1, i2 = rng.randrange(n), rng.randrange(n)
            d1, d2 = rng.randint(1, 5), rng.randint(1, 5)
            x1, x2 = rng.randrange(field.order), rng.randrange(field.order)
            a = operator_matrix(field, n, i1, d1, x1, lo, hi)
            b = operator_matrix(field, n, i2, d2, x2, lo, hi)
            gap = filtration_gap(commutator(field, a, b))
            assert gap is None or gap >= d1 + d2 > max(d1, d2)


def test_unipotent_inverse():
    m = operator_matrix(F3, 2, 0, 1, 2, 0, 8)
    inv = unipotent_inverse(F3, m)
    assert np.array_equal(matmul(F3, m, inv), np.eye(8, dtype=np.intp))
    assert filtration_gap(np.eye(3, dtype=np.intp)) is None


# -- endpoints ---------------------------------------------------------------------------------

def test_rank_two_root_subgroup_limit():
    # U_alpha(t^{-1} x) O^2: e_1 -> e_1 + x t^{-1} e_0, whose limit is t^{-alpha^vee} O^2
    nil = lambda v: {j - 3: x for j, x in v.items() if j % 2 == 1}
    end = family_limit(Lattice.standard(F2, 2), nil, -3)
    assert end == Lattice.scaled_standard(F2, (-1, 1))
    for field in (F3, F4):
        assert family_limit(Lattice.standard(field, 2), nil, -3) == Lattice.scaled_standard(field, (-1, 1))


def test_constant_family_endpoint():
    O = Lattice.standard(F2, 3)
    assert family_stabilizes(O, 0, 2)
    e = family_endpoint(O, 0, 2)
    assert e.constant and e.lattice == O


def test_gl2_endpoint_is_a_shift_lattice():
    L = canonicalize(F2, 2, [{0: 1}, {3: 1}])
    e = family_endpoint(L, 0, 1)
    assert not e.constant
    assert delta_index(e.lattice).delta == -1
    assert e.lattice.kappa == L.kappa
    tw = FrobTwist.from_blocks([(1, 2)], F2)
    assert member(e.lattice, tw, (2, -1), closed=True)


def test_endpoint_lowers_delta_on_random_lattices():
    rng = random.Random(13)
    for field in (F2, F3):
        for _ in range(60):
            n = rng.randint(2, 4)
            L = Lattice.random(field, n, rng, -1, 2)
            d = delta_index(L)
            if d.delta < 1:
                continue
            e = family_endpoint(L, d.residue, d.delta)
            assert e.lattice.kappa == L.kappa
            assert delta_index(e.lattice).delta < d.delta
            assert not e.constant


# -- reduction to J ----------------------------------------------------------------------------

def test_reduce_trivial():
    tw = FrobTwist.from_blocks([(1, 3)], F2)
    r = reduce_to_J(Lattice.standard(F2, 3), tw, (1, 0, 0))
    assert r.path == [] and r.terminal == 0


def test_reduce_gl2():
    tw = FrobTwist.from_blocks([(1, 2)], F2)
    L = canonicalize(F2, 2, [{0: 1}, {3: 1}])
    r = reduce_to_J(L, tw, (2, -1))
    assert 1 <= len(r.path) <= 2
    end = r.path[-1]
    assert end == shift(Lattice.standard(F2, 2), r.terminal)
    assert end.kappa == L.kappa


def test_reduce_rejects_non_members():
    tw = FrobTwist.from_blocks([(1, 2)], F2)
    with pytest.raises(InvalidInput):
        reduce_to_J(canonicalize(F2, 2, [{0: 1}, {3: 1}]), tw, (1, 0))


@pytest.mark.parametrize("q", [2, 3])
def test_reduce_random_points_gl3(q):
    field = get_field(q)
    tw = FrobTwist.from_blocks([(1, 3)], field)
    mu = (2, 0, -1)
    pts = enumerate_window(tw, mu, 1, superbasic_window(tw, mu, 1), closed=True)
    rng = random.Random(q)
    sample = rng.sample(pts, min(50, len(pts)))
    assert any(delta_index(L).delta >= 0 for L in sample)
    for L in sample:
        r = reduce_to_J(L, tw, mu)
        assert all(a > b for a, b in zip(r.deltas, r.deltas[1:]))
        assert r.deltas[-1] == -1
        for P in r.path:
            assert member(P, tw, mu, closed=True) and P.kappa == L.kappa
        end = r.path[-1] if r.path else L
        assert end == shift(Lattice.standard(field, 3), r.terminal)


# -- enumeration -------------------------------------------------------------------------------

def test_enumerate_gl2_single_point():
    tw = FrobTwist.from_blocks([(1, 2)], F2)
    pts = enumerate_window(tw, (1, 0), 0, Window(-2, 3))
    assert pts == [shift(Lattice.standard(F2, 2), 0)]


def test_enumerate_central_members_are_rational():
    for q, s in [(2, 1), (2, 2), (3, 1)]:
        field = get_field(q, s)
        tw = FrobTwist.from_blocks([(1, 1), (1, 1)], field)
        pts = enumerate_window(tw, (1, 1), 2, Window(-1, 3))
        assert pts
        assert all(L.is_rational() for L in pts)
        # the members are exactly the F_q-rational lattices of the window with kappa 2
        rational = enumerate_window(tw, (1, 1), 2, Window(-1, 3), closed=True,
                                    predicate=lambda L: L.is_rational())
        assert pts == rational


def test_enumerate_window_stability():
    for blocks, mu, kappa in [([(1, 2)], (2, -1), 0), ([(1, 3)], (1, 0, 0), 0), ([(2, 3)], (1, 1, 0), 1)]:
        tw = FrobTwist.from_blocks(blocks, F2)
        w = superbasic_window(tw, mu, kappa)
        small = enumerate_window(tw, mu, kappa, w, closed=True)
        big = enumerate_window(tw, mu, kappa, w.widened(), closed=True)
        assert small == [L for L in big if w.contains(L)]
        assert small == big


def test_enumerate_is_deterministic_and_duplicate_free():
    tw = FrobTwist.from_blocks([(1, 2)], F3)
    a = enumerate_window(tw, (2, -1), 0, Window(-2, 2), closed=True)
    b = enumerate_window(tw, (2, -1), 0, Window(-2, 2), closed=True)
    assert a == b and len(set(a)) == len(a)


def test_enumerate_budget():
    tw = FrobTwist.from_blocks(GL5, F2)
    with pytest.raises(BudgetExceeded):
        enumerate_window(tw, (2, 0, 0, 0, 0), 0, Window(-2, 3), budget=1000)


def test_superbasic_window_rejects_empty_and_multi_block():
    with pytest.raises(InvalidInput):
        superbasic_window(FrobTwist.from_blocks([(1, 2)], F2), (0, 0), 0)
    with pytest.raises(UnsupportedDatum):
        superbasic_window(FrobTwist.from_blocks(GL5, F2), (2, 0, 0, 0, 0), 0)


# -- point counts ----------------------------------------------------------------------------------

def test_growth_exponent():
    assert growth_exponent(2, 8, 32) == 2
    assert growth_exponent(3, 5, 5) == 0
    assert growth_exponent(2, 0, 0) is None
    assert growth_exponent(2, 0, 4) == math.inf
    assert growth_exponent(2, 2, 12) == pytest.approx(math.log2(6))


def test_count_points_examples():
    pc = count_points([(1, 2)], (1, 0), 0, 2, [1, 2])
    assert pc.counts == [1, 1] and pc.exponent == 0
    pc = count_points([(1, 1), (1, 1)], (1, 1), 2, 2, [1, 2], window=Window(0, 2))
    assert pc.counts[0] == pc.counts[1] > 0 and pc.exponent == 0
    pc = count_points([(4, 3)], (3, 1, 0), 0, 2, [1, 2])
    assert pc.counts == [8, 32] and pc.exponent == 2
    assert pc.to_json()["exponents"] == [2]


# -- the GL_5 family ------------------------------------------------------------------------------

def test_gl5_family_shifts_are_explained():
    fam = gl5_family(F2)
    assert len(fam) == 4
    L = gl5_lattice(F2, 1, 1)
    for k1, k2 in [(0, 0), (1, -1), (2, 3), (-2, 1)]:
        S = gl5_shift(L, k1, k2)
        assert gl5_explain(S, fam) == (k1, k2, 1, 1)


def test_gl5_window_members_are_translates():
    tw = FrobTwist.from_blocks(GL5, F2)
    fam = gl5_family(F2)
    pts = enumerate_window(tw, (2, 0, 0, 0, 0), 2, Window(0, 1))
    assert len(pts) == 2
    for L in pts:
        e = gl5_explain(L, fam)
        assert e is not None and e[2] != 0


@given(st.integers(0, 2 ** 31), st.sampled_from(TWISTS), st.sampled_from([(2, 1), (3, 1), (2, 2)]))
@settings(max_examples=60, deadline=None)
def test_invariant_is_dominant_with_det_sum(seed, blocks, qs):
    field = get_field(*qs)
    tw = FrobTwist.from_blocks(blocks, field)
    L = Lattice.random(field, tw.n, random.Random(seed))
    lam = invariant(L, tw)
    assert list(lam) == sorted(lam, reverse=True)
    assert sum(lam) == tw.det_valuation
    assert invariant(L.sigma(), tw) == lam
