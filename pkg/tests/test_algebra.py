"""Exact-arithmetic kernel: graded rings with rewrite rules, truncated
power series, and rational linear algebra.

Oracles: hand-reduced normal forms for a small quotient ring, classical
power-series identities, and sympy (test-only) for matrix ranks.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ellcob.algebra import (
    GradedElement,
    QSeries,
    RationalMatrix,
    RingSpec,
    as_rational,
    interpolate_polynomial,
    series_mul,
)

F = Fraction


def small_ring() -> RingSpec:
    """Rank-2 projectivization shape over a one-generator base:
    a has a^2 -> -2ab (head rewrite), degrees above 8 truncate to zero."""
    return RingSpec(
        generators=(("a", 2), ("b", 2)),
        truncation_dimension=8,
        rewrite_rules={"a": (2, {(1, 1): F(-2)})},
    )


class TestAsRational:
    def test_int_and_fraction_pass(self):
        assert as_rational(3) == F(3)
        assert as_rational(F(1, 2)) == F(1, 2)

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            as_rational(0.5)

    def test_bool_coerces_like_int(self):
        # bool is an int subclass; it rides along as 0/1
        assert as_rational(True) == F(1)


class TestRingSpecValidation:
    def test_odd_degree_rejected(self):
        with pytest.raises(ValueError):
            RingSpec(generators=(("a", 3),), truncation_dimension=8, rewrite_rules={})

    def test_rule_must_preserve_degree(self):
        with pytest.raises(ValueError):
            RingSpec(
                generators=(("a", 2), ("b", 2)),
                truncation_dimension=8,
                rewrite_rules={"a": (2, {(0, 1): F(1)})},
            )

    def test_rule_head_exponent_must_drop(self):
        with pytest.raises(ValueError):
            RingSpec(
                generators=(("a", 2), ("b", 2)),
                truncation_dimension=8,
                rewrite_rules={"a": (2, {(2, 0): F(1)})},
            )


class TestNormalization:
    def test_head_rewrite_chain(self):
        # a^2 -> -2ab, so a^3 -> 4ab^2 and a^4 -> -8ab^3 (degree 8, inside truncation)
        ring = small_ring()
        a = ring.gen("a")
        assert (a * a).terms == {(1, 1): F(-2)}
        assert (a * a * a).terms == {(1, 2): F(4)}
        assert (a ** 4).terms == {(1, 3): F(-8)}
        assert (a ** 5).terms == {}

    def test_truncation(self):
        ring = small_ring()
        b = ring.gen("b")
        assert (b ** 3).terms == {(0, 3): F(1)}
        assert (b ** 4).terms == {(0, 4): F(1)}
        assert (b ** 5).terms == {}

    def test_idempotent(self):
        ring = small_ring()
        a, b = ring.gen("a"), ring.gen("b")
        x = (a + 2 * b) ** 3
        again = GradedElement(ring, dict(x.terms))
        assert again.terms == x.terms

    def test_scalar_arithmetic(self):
        ring = small_ring()
        a = ring.gen("a")
        assert (3 * a - a - a - a).terms == {}
        assert (F(1, 2) * (a + a)).terms == a.terms


@st.composite
def ring_elements(draw):
    ring = small_ring()
    coeffs = draw(
        st.lists(
            st.tuples(
                st.integers(0, 2),
                st.integers(0, 3),
                st.integers(-4, 4),
            ),
            max_size=5,
        )
    )
    terms = {}
    for i, j, c in coeffs:
        terms[(i, j)] = terms.get((i, j), F(0)) + F(c)
    return ring.element(terms)


class TestRingProperties:
    @settings(max_examples=60, deadline=None)
    @given(ring_elements(), ring_elements())
    def test_commutative(self, x, y):
        assert (x * y).terms == (y * x).terms

    @settings(max_examples=60, deadline=None)
    @given(ring_elements(), ring_elements(), ring_elements())
    def test_associative(self, x, y, z):
        assert ((x * y) * z).terms == (x * (y * z)).terms

    @settings(max_examples=60, deadline=None)
    @given(ring_elements(), ring_elements(), ring_elements())
    def test_distributive(self, x, y, z):
        assert (x * (y + z)).terms == (x * y + x * z).terms

    @settings(max_examples=60, deadline=None)
    @given(ring_elements())
    def test_one_is_identity(self, x):
        ring = x.ring
        assert (x * ring.one()).terms == x.terms


class TestHomogeneousParts:
    def test_split_and_reassemble(self):
        ring = small_ring()
        a, b = ring.gen("a"), ring.gen("b")
        x = (ring.one() + a + b) ** 2
        pieces = [x.homogeneous_part(d) for d in range(0, 10, 2)]
        total = pieces[0]
        for piece in pieces[1:]:
            total = total + piece
        assert total.terms == x.terms

    def test_coefficient_lookup(self):
        ring = small_ring()
        a, b = ring.gen("a"), ring.gen("b")
        x = a * b + 5 * b * b
        assert x.coefficient((1, 1)) == F(1)
        assert x.coefficient((0, 2)) == F(5)
        assert x.coefficient((2, 0)) == F(0)


class TestQSeries:
    def test_geometric_inverse(self):
        # (1 - q)^-1 = 1 + q + q^2 + ...
        one_minus_q = QSeries([F(1), F(-1), F(0), F(0), F(0), F(0)])
        inv = one_minus_q.inverse()
        assert [inv.coefficient(j) for j in range(6)] == [F(1)] * 6

    def test_product_truncates_to_min_order(self):
        s = QSeries([F(1), F(1), F(0), F(0)])
        t = QSeries([F(1), F(0), F(0)])
        assert (s * t).order == 2

    def test_pow_matches_repeated_mul(self):
        s = QSeries([F(1), F(2), F(-1), F(0), F(0)])
        assert (s ** 3).coeffs == (s * s * s).coeffs

    def test_negative_power(self):
        s = QSeries([F(2), F(1), F(0), F(0), F(0)])
        assert (s ** -1 * s).coeffs == QSeries.constant(F(1), 4).coeffs

    def test_series_mul_function(self):
        s = QSeries([F(1), F(1), F(0), F(0), F(0)])
        assert series_mul(s, s, 4).coefficient(2) == F(1)

    def test_scalar_multiplication(self):
        s = QSeries([F(0), F(3), F(0), F(0), F(0)])
        assert (2 * s).coefficient(1) == F(6)
        assert (s * F(1, 3)).coefficient(1) == F(1)


class TestRationalMatrix:
    def test_rank_oracle_sympy(self):
        import sympy

        rows = [
            [F(1), F(2), F(3)],
            [F(2), F(4), F(6)],
            [F(0), F(1), F(1)],
        ]
        ours = RationalMatrix(rows).rank()
        theirs = sympy.Matrix([[sympy.Rational(x) for x in r] for r in rows]).rank()
        assert ours == theirs == 2

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(
            st.lists(st.integers(-5, 5), min_size=3, max_size=3),
            min_size=1,
            max_size=4,
        )
    )
    def test_rank_matches_sympy(self, int_rows):
        import sympy

        rows = [[F(x) for x in r] for r in int_rows]
        assert RationalMatrix(rows).rank() == sympy.Matrix(int_rows).rank()

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3),
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
    )
    def test_solve_round_trip(self, int_rows, int_sol):
        rows = [[F(x) for x in r] for r in int_rows]
        sol = [F(x) for x in int_sol]
        rhs = RationalMatrix(rows).matvec(sol)
        found = RationalMatrix(rows).solve(rhs)
        assert found is not None
        assert RationalMatrix(rows).matvec(found) == rhs

    def test_inconsistent_system_returns_none(self):
        m = RationalMatrix([[F(1), F(1)], [F(1), F(1)]])
        assert m.solve([F(0), F(1)]) is None

    def test_solve_exact_values(self):
        m = RationalMatrix([[F(2), F(0)], [F(0), F(4)]])
        assert m.solve([F(1), F(1)]) == [F(1, 2), F(1, 4)]


class TestInterpolation:
    def test_cubic(self):
        # f(c) = -8c^3 sampled at 1..4
        pts = [(F(c), F(-8 * c ** 3)) for c in range(1, 5)]
        assert interpolate_polynomial(pts) == [F(0), F(0), F(0), F(-8)]

    def test_constant(self):
        assert interpolate_polynomial([(F(1), F(7))]) == [F(7)]

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-9, 9), min_size=1, max_size=5))
    def test_round_trip(self, int_coeffs):
        coeffs = [F(x) for x in int_coeffs]
        pts = []
        for c in range(1, len(coeffs) + 1):
            val = sum((coeffs[j] * F(c) ** j for j in range(len(coeffs))), F(0))
            pts.append((F(c), val))
        found = interpolate_polynomial(pts)
        padded = found + [F(0)] * (len(coeffs) - len(found))
        assert padded[: len(coeffs)] == coeffs
