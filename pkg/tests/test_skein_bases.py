import pytest
from hypothesis import given
from hypothesis import strategies as st

from skeingram.dyck_paths import count_paths_closed, iter_paths
from skeingram.exact_algebra import DELTA, RationalFunc, delta
from skeingram.skein_bases import (
    Comparison,
    StepTuple,
    b_element,
    b_prime_element,
    compare_tuples,
    cup_coefficients,
    d_coordinates,
    d_element,
    dimension,
    enumerate_tuples,
    matching_to_tuple,
    tuple_to_matching,
)
from skeingram.tl_core import PlanarMatching, TLElement, all_matchings, cup, identity, jones_wenzl

T = StepTuple.of


def valid_nh(max_n):
    return [(n, h) for n in range(1, max_n + 1) for h in range(n % 2, n + 1, 2)]


class TestStepTuple:
    def test_validation(self):
        for bad in [(2, 1), (1, 3), (1, 0, -1), (1, 1)]:
            with pytest.raises(ValueError):
                T(bad)
        with pytest.raises(ValueError):
            StepTuple(2, 2, (1, 0))

    def test_text_and_json(self):
        t = StepTuple.from_text("1,2,1")
        assert t == T((1, 2, 1))
        assert t.to_text() == "1,2,1"
        assert t.to_json() == {"n": 3, "h": 1, "a": [1, 2, 1]}
        assert StepTuple.from_json(t.to_json()) == t
        assert t.heights() == (0, 1, 2, 1)


class TestEnumeration:
    def test_examples(self):
        assert enumerate_tuples(2, 0) == [T((1, 0))]
        assert enumerate_tuples(3, 1) == [T((1, 2, 1)), T((1, 0, 1))]
        assert enumerate_tuples(4, 2) == [T((1, 2, 3, 2)), T((1, 2, 1, 2)), T((1, 0, 1, 2))]

    def test_empty_cases(self):
        assert enumerate_tuples(3, 0) == []
        assert enumerate_tuples(2, 4) == []

    def test_dimension_examples(self):
        assert (dimension(2, 0), dimension(3, 1), dimension(6, 0)) == (1, 2, 5)
        assert dimension(5, 2) == 0

    @pytest.mark.parametrize("n,h", valid_nh(14))
    def test_size_and_order(self, n, h):
        ts = enumerate_tuples(n, h)
        assert len(ts) == dimension(n, h) == count_paths_closed(n, h)
        assert all(compare_tuples(s, t) == Comparison.GREATER for s, t in zip(ts, ts[1:]))

    @pytest.mark.parametrize("n,h", valid_nh(10))
    def test_heights_are_dyck_paths(self, n, h):
        from_paths = {tuple(_heights(s)) for s in iter_paths(n, h)}
        assert {t.heights() for t in enumerate_tuples(n, h)} == from_paths

    def test_compare_examples(self):
        assert compare_tuples(T((1, 2, 1)), T((1, 0, 1))) == Comparison.GREATER
        assert compare_tuples(T((1, 2, 1)), T((1, 2, 1))) == Comparison.EQUAL
        assert compare_tuples(T((1, 0, 1, 2)), T((1, 2, 3, 2))) == Comparison.LESS
        with pytest.raises(ValueError):
            compare_tuples(T((1, 0)), T((1, 2)))


def _heights(steps):
    out = [0]
    for s in steps:
        out.append(out[-1] + (1 if s == "U" else -1))
    return out


class TestMatchings:
    def test_examples(self):
        assert tuple_to_matching(T((1, 0))) == PlanarMatching.from_pairs(2, 0, [(1, 2)])
        assert tuple_to_matching(T((1, 2, 1))) == PlanarMatching.from_pairs(3, 1, [(2, 3), (1, 4)])
        assert tuple_to_matching(T((1, 0, 1))) == PlanarMatching.from_pairs(3, 1, [(1, 2), (3, 4)])
        assert tuple_to_matching(T((1, 2, 1, 2))) == PlanarMatching.from_pairs(4, 2, [(2, 3), (1, 5), (4, 6)])

    @pytest.mark.parametrize("n,h", [(n, h) for n, h in valid_nh(12) if n + h <= 12])
    def test_image_is_matchings_without_top_arcs(self, n, h):
        image = [tuple_to_matching(t) for t in enumerate_tuples(n, h)]
        expected = {m for m in all_matchings(n, h) if m.top_arcs() == 0}
        assert len(set(image)) == len(image)
        assert set(image) == expected
        for t in enumerate_tuples(n, h):
            assert matching_to_tuple(tuple_to_matching(t)) == t

    def test_matching_with_top_arc_rejected(self):
        m = PlanarMatching.from_pairs(0, 2, [(1, 2)])
        with pytest.raises(ValueError):
            matching_to_tuple(PlanarMatching.from_pairs(2, 2, [(1, 2), (3, 4)]))
        assert m.top_arcs() == 1


class TestElements:
    def test_b_examples(self):
        assert b_element(T((1, 0))) == cup()
        assert b_element(T((1, 2, 1))) == b_prime_element(T((1, 2, 1)))
        assert b_element(T((1, 2))) == jones_wenzl(2)
        assert b_prime_element(T((1, 2))) == identity(2)

    def test_d_examples(self):
        assert d_element(T((1, 0))) == cup()
        assert d_element(T((1, 0, 1))) == b_prime_element(T((1, 0, 1)))
        expected = b_element(T((1, 2, 1))) - b_element(T((1, 0, 1))).scale(RationalFunc(1, DELTA))
        assert d_element(T((1, 2, 1))) == expected

    @pytest.mark.parametrize("h", range(1, 6))
    def test_d_of_increasing_tuple_is_jones_wenzl(self, h):
        assert d_element(T(tuple(range(1, h + 1)))) == jones_wenzl(h)

    @pytest.mark.parametrize("a", range(1, 7))
    def test_cup_weights(self, a):
        w = cup_coefficients(a)
        for j, c in enumerate(w, start=1):
            sign = -1 if (a - j) % 2 else 1
            assert c == RationalFunc(delta(j - 1) * sign, delta(a - 1))

    @pytest.mark.parametrize("n,h", valid_nh(7))
    def test_coordinates_match_literal_expansion(self, n, h):
        coords = d_coordinates(n, h)
        for t in enumerate_tuples(n, h):
            built = TLElement(n, h)
            for s, c in coords[t].items():
                built = built + b_element(s).scale(c)
            assert built == d_element(t)

    @given(st.sampled_from(valid_nh(9)))
    def test_coordinates_are_unitriangular(self, nh):
        n, h = nh
        coords = d_coordinates(n, h)
        for t, row in coords.items():
            assert row[t] == RationalFunc(1)
            assert all(compare_tuples(s, t) != Comparison.GREATER for s in row)
