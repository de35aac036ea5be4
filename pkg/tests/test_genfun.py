import pytest
from flint import fmpz_poly
from hypothesis import given
from hypothesis import strategies as st

from skeingram.dyck_paths import DyckPath, alpha_enumerate, count_paths_closed, down_steps, iter_paths
from skeingram.genfun import (
    TruncSeries,
    catalan_series,
    chebyshev_u,
    ck_closed_series,
    ck_series,
    ckh_recurrence_series,
    ckh_series,
    corollary_count,
    derivative_identity_series,
    down_step_count_gf,
    histogram,
)

q = fmpz_poly([0, 1])
ORDER = 16

series = st.integers(0, 8).flatmap(
    lambda order: st.lists(st.lists(st.integers(-4, 4), max_size=3).map(fmpz_poly), max_size=order + 1).map(
        lambda cs: TruncSeries(order, cs)
    )
)


class TestTruncSeries:
    def test_order_checked(self):
        with pytest.raises(ValueError):
            TruncSeries(-1)
        with pytest.raises(ValueError):
            TruncSeries(2) + TruncSeries(3)

    def test_non_unit_inverse(self):
        with pytest.raises(ZeroDivisionError):
            TruncSeries(3, [2, 1]).inverse()

    def test_geometric(self):
        s = TruncSeries(5, [1, -1]).inverse()
        assert s.at_q(7) == [1] * 6

    @given(series)
    def test_inverse(self, s):
        unit = TruncSeries.constant(s.order) + s.shift(1)
        assert unit * unit.inverse() == TruncSeries.constant(s.order)

    @given(series, series)
    def test_commutative(self, s, t):
        if s.order == t.order:
            assert s * t == t * s

    def test_json(self):
        s = TruncSeries(2, [1, 0, q * 3 + 1])
        assert s.to_json() == {"order": 2, "coeffs": [{"q_terms": [[0, "1"]]}, {"q_terms": []}, {"q_terms": [[0, "1"], [1, "3"]]}]}


class TestChebyshev:
    def test_examples(self):
        assert chebyshev_u(-1) == 0
        assert chebyshev_u(0) == 1
        assert chebyshev_u(1) == fmpz_poly([0, 2])
        assert chebyshev_u(2) == fmpz_poly([-1, 0, 4])
        with pytest.raises(ValueError):
            chebyshev_u(-2)

    @pytest.mark.parametrize("m", range(0, 15))
    def test_matches_flint(self, m):
        assert chebyshev_u(m) == fmpz_poly.chebyshev_u(m)


class TestSeries:
    def test_catalan(self):
        c = catalan_series(ORDER)
        assert c.coefficient(0) == 1 and c.coefficient(4) == 2 and c.coefficient(3) == 0
        assert c.at_q(1)[::2] == [1, 1, 2, 5, 14, 42, 132, 429, 1430]

    def test_ck_examples(self):
        c1 = ck_series(1, ORDER)
        assert c1.coefficient(2) == q
        assert c1.coefficient(4) == q + q * q
        for k in range(2, 6):
            assert ck_series(k, ORDER).coefficient(2) == 1
        with pytest.raises(ValueError):
            ck_series(0, ORDER)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_closed_form(self, k):
        assert ck_series(k, ORDER) == ck_closed_series(k, ORDER)
        assert ck_series(k, ORDER).at_q(1) == catalan_series(ORDER).at_q(1)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_derivative_identity(self, k):
        assert ck_series(k, ORDER).d_dq_at_1() == derivative_identity_series(k, ORDER).at_q(1)

    def test_ckh_example(self):
        assert ckh_series(1, 1, ORDER).coefficient(3) == 1 + q

    @pytest.mark.parametrize("k", range(0, 5))
    @pytest.mark.parametrize("h", range(0, 5))
    def test_product_form_matches_recurrence(self, k, h):
        assert ckh_series(k, h, ORDER) == ckh_recurrence_series(k, h, ORDER)

    @pytest.mark.parametrize("k", range(1, 5))
    @pytest.mark.parametrize("h", range(0, 5))
    def test_q_one_counts_paths(self, k, h):
        got = ckh_series(k, h, ORDER).at_q(1)
        assert got == [count_paths_closed(n, h) for n in range(ORDER + 1)]

    @pytest.mark.parametrize("n", range(0, 11))
    def test_histograms(self, n):
        for h in range(n % 2, n + 1, 2):
            for k in range(1, n + 2):
                want = {}
                for s in iter_paths(n, h):
                    m = len(down_steps(DyckPath(s), k))
                    want[m] = want.get(m, 0) + 1
                assert histogram(n, h, k) == want


class TestCounts:
    def test_gf_examples(self):
        assert down_step_count_gf(4, 0, 1) == 3
        assert down_step_count_gf(3, 1, 2) == 1
        assert all(down_step_count_gf(n, n, 2) == 0 for n in range(6))
        with pytest.raises(ValueError):
            down_step_count_gf(4, 0, 0)

    def test_corollary_examples(self):
        assert corollary_count(2, 1) == 3
        assert corollary_count(2, 2) == 1
        assert corollary_count(3, 5) == 0

    @pytest.mark.parametrize("n", range(0, 8))
    def test_corollary_matches_enumeration(self, n):
        for k in range(1, n + 2):
            assert corollary_count(n, k) == alpha_enumerate(2 * n, 0, k)
            assert corollary_count(n, k) == down_step_count_gf(2 * n, 0, k)
