"""
Unit tests for exact cyclotomic arithmetic and q-combinatorics.

Key Concepts Demonstrated:
- Known-value assertions on small fields (no floating point anywhere)
- Parametrized edge cases for the literal parser
- Exhaustive sweeps as tests (the q-binomial identity for small N)
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from services.twist.twist_app.errors import ConductorOverflowError, QFactorialVanishesError
from services.twist.twist_app.scalar import (
    Cyclotomic,
    conductor_limit,
    cyclotomic_field,
    primitive_roots,
    q_binomial,
    q_binomial_identity_check,
    q_binomial_identity_sum,
    q_factorial,
    q_identity_sweep,
    q_int,
    q_int_vanishes,
    set_conductor_limit,
)

pytestmark = pytest.mark.unit


class TestCyclotomicArithmetic:
    def test_root_of_unity_powers_wrap(self):
        """Test that zeta_n^n == 1 and zeta_n^(n/2) == -1 for even n."""
        # Arrange
        z = Cyclotomic.root(6)

        # Act & Assert
        assert z**6 == 1
        assert z**3 == -1

    def test_cyclotomic_relation_for_cube_roots(self):
        """Test that 1 + w + w^2 == 0 for a primitive cube root w."""
        w = Cyclotomic.root(3)
        assert 1 + w + w**2 == 0

    def test_mixed_conductors_promote_to_lcm(self):
        """Test that i * zeta_3 lives in conductor 12 and has order 12."""
        # Arrange
        i = Cyclotomic.root(4)
        w = Cyclotomic.root(3)

        # Act
        product = i * w

        # Assert
        assert product.conductor == 12
        assert product.multiplicative_order() == 12

    def test_inverse_of_non_unit(self):
        """Test that (1 + zeta_5)^-1 * (1 + zeta_5) == 1 via the Galois norm."""
        x = 1 + Cyclotomic.root(5)
        assert x * x.inverse() == 1

    def test_division_by_zero_raises(self):
        """Test that inverting zero raises ZeroDivisionError."""
        with pytest.raises(ZeroDivisionError):
            Cyclotomic.from_rational(0, 4).inverse()

    def test_rational_coefficients_are_exact(self):
        """Test that 1/3 + 2/3 is exactly 1."""
        assert Cyclotomic.from_rational(Fraction(1, 3)) + Fraction(2, 3) == 1

    @pytest.mark.parametrize(
        "value, order",
        [
            (Cyclotomic.from_rational(-1), 2),
            (Cyclotomic.from_rational(1), 1),
            (-Cyclotomic.root(3), 6),
            (Cyclotomic.from_rational(2), None),
        ],
    )
    def test_multiplicative_order(self, value, order):
        """Test that roots of unity report their order, including -1 stored over Q."""
        assert value.multiplicative_order() == order

    def test_equal_values_compare_across_conductors(self):
        """Test that -1 in Q and zeta_4^2 in Q(i) compare equal."""
        assert Cyclotomic.root(4) ** 2 == Cyclotomic.from_rational(-1)

    def test_galois_conjugate_of_i(self):
        """Test that the automorphism z -> z^3 of Q(i) sends i to -i."""
        i = Cyclotomic.root(4)
        assert i.galois(3) == -i


class TestLiteralParsing:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("1", Cyclotomic.from_rational(1)),
            ("-1/2", Cyclotomic.from_rational(Fraction(-1, 2))),
            ("z (conductor 4)", Cyclotomic.root(4)),
            ("-z (conductor 4)", -Cyclotomic.root(4)),
            ("z^5 (conductor 4)", Cyclotomic.root(4)),
            ("1 + 1*z^1 (conductor 6)", 1 + Cyclotomic.root(6)),
        ],
    )
    def test_parse_known_literals(self, text, expected):
        """Test that literals parse to the expected field element."""
        assert Cyclotomic.parse(text) == expected

    def test_to_text_round_trips_through_parse(self):
        """Test that the canonical literal parses back to the same value."""
        value = Cyclotomic.root(9, 4) - Fraction(3, 7)
        assert Cyclotomic.parse(value.to_text()) == value

    @pytest.mark.parametrize("text", ["", "z^ (conductor 4)", "1 + (conductor 4)", "abc"])
    def test_malformed_literals_raise(self, text):
        """Test that malformed literals raise ValueError."""
        with pytest.raises(ValueError):
            Cyclotomic.parse(text)


class TestConductorLimit:
    def test_exceeding_the_limit_raises(self):
        """Test that building a field above the cap raises ConductorOverflowError."""
        # Arrange
        previous = conductor_limit()
        set_conductor_limit(30)
        try:
            # Act & Assert
            with pytest.raises(ConductorOverflowError):
                cyclotomic_field(31)
        finally:
            set_conductor_limit(previous)

    def test_field_degree_is_totient(self):
        """Test that Q(zeta_12) has degree phi(12) = 4."""
        assert cyclotomic_field(12).degree == 4


class TestQCombinatorics:
    def test_q_int_at_one_is_ordinary_integer(self):
        """Test that (n)_1 == n."""
        assert q_int(5, Cyclotomic.from_rational(1)) == 5

    def test_q_int_vanishes_at_order(self):
        """Test that (N)_q == 0 for q a primitive N-th root and not below N."""
        q = Cyclotomic.root(5)
        assert q_int_vanishes(5, q)
        assert not q_int_vanishes(4, q)
        assert q_int(5, q) == 0

    def test_q_factorial_of_two_at_minus_one_vanishes(self):
        """Test that (2)!_{-1} == 0."""
        assert q_factorial(2, Cyclotomic.from_rational(-1)) == 0

    def test_q_binomial_matches_factorial_quotient(self):
        """Test that (4 choose 2)_q equals (4)!_q / ((2)!_q (2)!_q) off roots of unity."""
        q = Cyclotomic.from_rational(2)
        expected = q_factorial(4, q) / (q_factorial(2, q) * q_factorial(2, q))
        assert q_binomial(4, 2, q) == expected

    def test_q_binomial_refuses_vanishing_denominator(self):
        """Test that (4 choose 2)_q at q = -1 raises QFactorialVanishesError."""
        with pytest.raises(QFactorialVanishesError):
            q_binomial(4, 2, Cyclotomic.from_rational(-1))

    def test_q_binomial_out_of_range(self):
        """Test that k > n is rejected."""
        with pytest.raises(ValueError):
            q_binomial(2, 3, Cyclotomic.root(5))

    def test_primitive_roots_count(self):
        """Test that there are phi(12) = 4 primitive 12th roots."""
        assert len(primitive_roots(12)) == 4


class TestQBinomialIdentity:
    def test_identity_sum_is_one(self):
        """Test that the identity holds for N = 3, a = 1, i = j = 2."""
        q = Cyclotomic.root(3)
        assert q_binomial_identity_sum(3, q, 1, 2, 2) == 1

    def test_identity_rejects_inadmissible_indices(self):
        """Test that i + j != N + a names the violated precondition."""
        with pytest.raises(ValueError, match="i \\+ j = N \\+ a"):
            q_binomial_identity_check(4, Cyclotomic.root(4), 0, 1, 1)

    def test_identity_rejects_non_primitive_root(self):
        """Test that q of the wrong order is rejected."""
        with pytest.raises(ValueError, match="primitive"):
            q_binomial_identity_check(4, Cyclotomic.root(2), 0, 2, 2)

    def test_sweep_up_to_seven_passes(self):
        """Test that the exhaustive sweep up to N = 7 has no failures."""
        # Act
        result = q_identity_sweep(7)

        # Assert
        assert result.passed
        assert result.checked > 0

    def test_sweep_counts_instances_for_n_two(self):
        """Test that N = 2 has exactly one admissible instance (a = 0, i = j = 1)."""
        assert q_identity_sweep(2).checked == 1
