from fractions import Fraction

import pytest

from ltdirac import (ConnectionMatrix, DiffOperator, ExpForm, FieldHandle,
                     LaurentSeries, companion, direct_sum, exp_module,
                     newton_polygon, parse_operator, push_forward, ramify,
                     regular_module, restrict_scalars, slopes, twist)
from ltdirac.errors import PrecisionTooLow, RamificationMismatch
from ltdirac.exactalg import UniPoly

from catalog import OPERATOR_CATALOG, catalog_operator, rational_form

Q = FieldHandle.rationals()


class TestNewtonPolygon:
    def test_regular(self):
        poly = newton_polygon(parse_operator("x*D - 5"))
        assert poly.slopes() == [(0, 1)]

    def test_simple_pole(self):
        poly = newton_polygon(parse_operator("x^2*D - 1"))
        assert poly.slopes() == [(1, 1)]
        (slope, length, ep), = poly.edges
        assert ep == UniPoly(Q, [1, -1])  # l - 1

    def test_half_slope(self):
        poly = newton_polygon(parse_operator("x^3*D^2 - 1"))
        assert poly.slopes() == [(Fraction(1, 2), 2)]

    def test_catalog_slopes(self):
        for name, expr, expected, irr in OPERATOR_CATALOG:
            got = slopes(parse_operator(expr))
            assert got == sorted(expected), name
            assert newton_polygon(parse_operator(expr)).irregularity() == irr

    def test_constant_coefficient_operator_is_regular_free(self):
        # D + 1 has solutions of moderate pole order: slope 0 is absent,
        # the single edge has slope 0 length... the hull point is (1,-1)
        poly = newton_polygon(parse_operator("D + 1"))
        assert poly.slopes() == [(0, 1)]

    def test_sum_of_multiplicities_is_order(self):
        for _, expr, _, _ in OPERATOR_CATALOG:
            op = parse_operator(expr)
            assert sum(m for _, m in slopes(op)) == op.order()

    def test_monomial_scaling_invariance(self):
        op = parse_operator("x^3*D^2 - x*D + 1")
        scaled = op.scale(LaurentSeries(Q, {-2: 3}))
        assert slopes(scaled) == slopes(op)

    def test_operator_product_slopes_merge(self):
        a = parse_operator("x^2*D - 1")
        b = parse_operator("x*D - 5")
        assert slopes(a.compose(b)) == [(0, 1), (1, 1)]


class TestRamify:
    def test_identity(self):
        mat = ConnectionMatrix(Q, [[LaurentSeries(Q, {-2: -1})]])
        assert ramify(mat, 1) is mat

    def test_rank_one_pullback(self):
        mat = ConnectionMatrix(Q, [[LaurentSeries(Q, {-2: -1})]])
        out = ramify(mat, 2)
        assert out.rows[0][0] == LaurentSeries(Q, {-3: -2})
        assert out.ram == 2

    def test_zero_matrix(self):
        mat = ConnectionMatrix.zero(Q, 2)
        out = ramify(mat, 3)
        assert all(e.is_zero() for row in out.rows for e in row)


class TestTwist:
    def test_zero_form_is_identity(self):
        mat = ConnectionMatrix(Q, [[LaurentSeries(Q, {5: 2})]])
        assert twist(mat, ExpForm.zero(Q)) == mat

    def test_regular_by_pole(self):
        mat = regular_module(Q, 1)
        out = twist(mat, rational_form({1: 1}))
        assert out.rows[0][0] == LaurentSeries(Q, {-2: -1})

    def test_group_law(self):
        w = rational_form({2: 3, 1: -1})
        mat = ConnectionMatrix(Q, [[LaurentSeries(Q, {0: 1, -1: 2})]])
        assert twist(twist(mat, w), -w) == mat

    def test_ramification_mismatch(self):
        mat = regular_module(Q, 1)  # lives over x
        with pytest.raises(RamificationMismatch):
            twist(mat, rational_form({1: 1}, m=2))

    def test_ramified_twist_uses_t_exponents(self):
        mat = ConnectionMatrix.zero(Q, 1, "t", 2)
        out = twist(mat, rational_form({1: 1}, m=2))  # form 1/t
        assert out.rows[0][0] == LaurentSeries(Q, {-2: -1})

    def test_unramified_form_on_ramified_matrix(self):
        mat = ConnectionMatrix.zero(Q, 1, "t", 2)
        out = twist(mat, rational_form({1: 1}))  # 1/x = 1/t^2
        assert out.rows[0][0] == LaurentSeries(Q, {-3: -2})


class TestCompanion:
    def test_first_order_derivation(self):
        out = companion(parse_operator("D"), 10)
        assert out.size == 1
        assert out.rows[0][0].is_zero_to_precision()

    def test_first_order_pole(self):
        out = companion(parse_operator("x^2*D - 1"), 10)
        assert out.rows[0][0].coeffs == {-2: Q.element(1)}

    def test_second_order(self):
        out = companion(parse_operator("x^3*D^2 - 1"), 10)
        assert out.rows[1][0].coeffs == {-3: Q.element(1)}
        assert out.rows[1][1].is_zero_to_precision()
        assert out.rows[0][1].coeffs == {0: Q.element(1)}

    def test_precision_too_low(self):
        with pytest.raises(PrecisionTooLow):
            companion(parse_operator("x^3*D^2 - 1"), 1)


class TestConstructors:
    def test_push_forward_of_trivial_rank_one(self):
        mat = ConnectionMatrix.zero(Q, 1, "t", 2)
        out = push_forward(mat, 2)
        assert out.size == 2
        assert out.rows[0][0].is_zero()
        assert out.rows[1][1] == LaurentSeries(Q, {-1: Fraction(1, 2)})

    def test_exp_module_unramified_matches_twist_by_negative(self):
        w = rational_form({1: 1})
        out = exp_module(w, 1, Q)
        assert out.rows[0][0] == LaurentSeries(Q, {-2: 1})

    def test_direct_sum_block_structure(self):
        a = ConnectionMatrix(Q, [[LaurentSeries(Q, {0: 1})]])
        b = ConnectionMatrix(Q, [[LaurentSeries(Q, {0: 2})]])
        out = direct_sum(a, b)
        assert out.size == 2
        assert out.rows[0][0].coeffs == {0: Q.element(1)}
        assert out.rows[1][1].coeffs == {0: Q.element(2)}
        assert out.rows[0][1].is_zero()

    def test_restrict_scalars_doubles_size(self):
        F = Q.extend(UniPoly(Q, [1, 0, 1]), "i")
        i = F.gen()
        mat = ConnectionMatrix(F, [[LaurentSeries(F, {-1: i})]])
        out = restrict_scalars(mat, Q)
        assert out.size == 2
        assert out.field.is_rationals()
        # multiplication by i in the basis (1, i): 1 -> i, i -> -1
        assert out.rows[0][1] == LaurentSeries(Q, {-1: 1})
        assert out.rows[1][0] == LaurentSeries(Q, {-1: -1})
