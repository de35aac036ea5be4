import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skeingram.exact_algebra import A, DELTA, LaurentPoly, RationalFunc, delta
from skeingram.tl_core import (
    PlanarMatching,
    TangleWord,
    TLElement,
    all_matchings,
    bracket_evaluate,
    cap,
    compose,
    compose_via_generators,
    cup,
    generator_e,
    identity,
    jones_wenzl,
    mirror,
    tensor,
    trace_closure,
)

CATALAN = [1, 1, 2, 5, 14, 42, 132]


def el(m, c=1):
    return TLElement.from_matching(m, c)


def random_element(draw, n):
    ms = all_matchings(n, n)
    picks = draw(st.lists(st.sampled_from(ms), min_size=1, max_size=3))
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(picks), max_size=len(picks)))
    out = TLElement(n, n)
    for m, c in zip(picks, coeffs):
        out = out + el(m, RationalFunc(LaurentPoly({c % 3 - 1: c})))
    return out


@st.composite
def elements(draw, n=None):
    n = draw(st.integers(1, 4)) if n is None else n
    return random_element(draw, n)


@st.composite
def triples(draw):
    n = draw(st.integers(1, 4))
    return tuple(random_element(draw, n) for _ in range(3))


class TestPlanarMatching:
    def test_crossing_rejected(self):
        with pytest.raises(ValueError, match="crossing"):
            PlanarMatching.from_pairs(2, 2, [(1, 4), (2, 3)])

    def test_unmatched_rejected(self):
        with pytest.raises(ValueError):
            PlanarMatching(1, 1, (0, 0))

    def test_odd_boundary_rejected(self):
        with pytest.raises(ValueError):
            PlanarMatching(1, 0, (0,))

    @pytest.mark.parametrize("n", range(0, 7))
    def test_square_counts_are_catalan(self, n):
        assert len(all_matchings(n, n)) == CATALAN[n]

    def test_rectangular_counts(self):
        # a boundary of 2m points carries Catalan(m) matchings however it is split
        assert len(all_matchings(3, 1)) == 2
        assert len(all_matchings(4, 0)) == 2
        assert len(all_matchings(5, 1)) == 5

    def test_statistics(self):
        e = generator_e(4, 2).terms()[0][0]
        assert e.through_strands() == 2
        assert e.top_arcs() == 1
        assert e.pairs() == [(1, 5), (2, 3), (4, 8), (6, 7)]

    @pytest.mark.parametrize("nb,nt", [(0, 0), (2, 0), (3, 1), (4, 4), (5, 3)])
    def test_text_and_json_round_trip(self, nb, nt):
        for m in all_matchings(nb, nt):
            assert PlanarMatching.from_text(m.to_text()) == m
            assert PlanarMatching.from_json(m.to_json()) == m

    def test_identity_text(self):
        assert identity(2).terms()[0][0].to_text() == "[t1,t2|b1,b2]"


class TestProducts:
    def test_generator_relations(self):
        e1, e2 = generator_e(3, 1), generator_e(3, 2)
        assert compose(e1, e1) == e1.scale(DELTA)
        assert compose(compose(e1, e2), e1) == e1
        assert compose(compose(e2, e1), e2) == e2
        f1, f3 = generator_e(4, 1), generator_e(4, 3)
        assert compose(f1, f3) == compose(f3, f1)

    def test_cup_cap_loop(self):
        loop = compose(cap(), cup())
        assert loop == identity(0).scale(DELTA)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            compose(identity(2), identity(3))

    def test_identity_is_neutral(self):
        for m in all_matchings(3, 3):
            x = el(m, 2)
            assert compose(identity(3), x) == x == compose(x, identity(3))

    @given(triples())
    def test_associative(self, xyz):
        x, y, z = xyz
        assert compose(compose(x, y), z) == compose(x, compose(y, z))

    @given(elements(), st.data())
    def test_generator_route_agrees(self, x, data):
        y = data.draw(elements(x.n_top))
        assert compose_via_generators(x, y) == compose(x, y)

    @given(elements(), st.data())
    def test_mirror_reverses_products(self, x, data):
        y = data.draw(elements(x.n_top))
        assert mirror(compose(x, y)) == compose(mirror(y), mirror(x))
        assert mirror(mirror(x)) == x

    @given(elements(), st.data())
    def test_trace_is_cyclic(self, x, data):
        y = data.draw(elements(x.n_top))
        assert trace_closure(compose(x, y)) == trace_closure(compose(y, x))

    def test_trace_of_identity(self):
        for n in range(5):
            assert trace_closure(identity(n)) == RationalFunc(DELTA**n)

    def test_tensor_interchange(self):
        x, y = generator_e(2, 1), generator_e(3, 1)
        left = compose(tensor(x, y), tensor(x, y))
        right = tensor(compose(x, x), compose(y, y))
        assert left == right


class TestJonesWenzl:
    def test_f2_expansion(self):
        f2 = jones_wenzl(2)
        e = generator_e(2, 1).terms()[0][0]
        assert f2.coefficient(e) == RationalFunc(-delta(0), delta(1))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_idempotent_and_killed(self, n):
        f = jones_wenzl(n)
        assert compose(f, f) == f
        for i in range(1, n):
            assert compose(f, generator_e(n, i)).is_zero()
        assert trace_closure(f) == RationalFunc(delta(n))

    @pytest.mark.parametrize("n", range(1, 6))
    def test_mirror_symmetric(self, n):
        assert mirror(jones_wenzl(n)) == jones_wenzl(n)

    @pytest.mark.parametrize("n", range(2, 6))
    def test_absorbs_smaller(self, n):
        f = jones_wenzl(n)
        assert compose(tensor(jones_wenzl(n - 1), identity(1)), f) == f

    def test_support_is_all_diagrams(self):
        assert len(jones_wenzl(4)) == CATALAN[4]


class TestBracket:
    def test_reidemeister_two(self):
        for kinds in (("S+", "S-"), ("S-", "S+")):
            w = TangleWord(2, [(kinds[0], 1), (kinds[1], 1)])
            assert bracket_evaluate(w) == identity(2)

    def test_reidemeister_three(self):
        left = TangleWord(3, [("S+", 1), ("S+", 2), ("S+", 1)])
        right = TangleWord(3, [("S+", 2), ("S+", 1), ("S+", 2)])
        assert bracket_evaluate(left) == bracket_evaluate(right)

    def test_kink_closure(self):
        # a closed crossing is an unknot with one kink: -A^(+-3) times the loop value
        w = TangleWord(2, [("S+", 1)])
        closed = compose(compose(cap(), bracket_evaluate(w)), cup())
        value = closed.coefficient(identity(0).terms()[0][0])
        assert value in (RationalFunc(-(A**3) * DELTA), RationalFunc(-(A**-3) * DELTA))

    @given(st.lists(st.tuples(st.sampled_from(["S+", "S-"]), st.integers(1, 2)), max_size=4))
    def test_mirror_word_inverts_braids(self, letters):
        w = TangleWord(3, letters)
        assert compose(bracket_evaluate(w), bracket_evaluate(w.mirror_word())) == identity(3)

    def test_bad_letters(self):
        with pytest.raises(ValueError):
            TangleWord(2, [("X", 1)])
        with pytest.raises(ValueError):
            TangleWord(2, [("E", 2)])
