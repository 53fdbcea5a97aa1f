"""
Unit tests for the Nichols algebra B(V), the group algebra and the sparse
element kernel they plug into.

Key Concepts Demonstrated:
- Defining relations checked on the PBW basis
- Braided tensor products against hand-computed scalars
- Braided bialgebra compatibility checked exhaustively on small data
"""

from __future__ import annotations

from itertools import product as cartesian

import pytest

from services.twist.twist_app.errors import NilpotencyError
from services.twist.twist_app.group import cyclic_group
from services.twist.twist_app.nichols import (
    GroupAlgebra,
    b_dual_pairing,
    braided_tensor_multiply,
    parse_b_terms,
    parse_tensor_terms,
)
from services.twist.twist_app.scalar import Cyclotomic, q_int
from services.twist.twist_app.sparse import (
    Element,
    TensorElement,
    invert_by_elimination,
    invert_unipotent,
    solve_linear,
)

pytestmark = pytest.mark.unit


class TestRelations:
    def test_dimension_is_product_of_orders(self, e1_nichols, e2_nichols):
        """Test that dim B(V) = prod N_i."""
        assert e1_nichols.dimension == 2
        assert e2_nichols.dimension == 9

    def test_generator_is_nilpotent_of_order_n(self, e2_nichols):
        """Test that x_1^3 == 0 while x_1^2 != 0 for N = 3."""
        x = e2_nichols.generator(0)
        assert not x.power(2).is_zero()
        assert x.power(3).is_zero()

    def test_q_commutation(self, e2_nichols, e2_datum):
        """Test that x_2 x_1 = q_21 x_1 x_2."""
        # Arrange
        x1, x2 = e2_nichols.generator(0), e2_nichols.generator(1)

        # Act
        lhs = x2 * x1
        rhs = (x1 * x2).scale(e2_datum.q[1][0])

        # Assert
        assert lhs == rhs

    def test_monomial_outside_basis_raises(self, e1_nichols):
        """Test that x^2 is not a PBW key when N = 2."""
        with pytest.raises(ValueError):
            e1_nichols.monomial([2])

    def test_degree_and_action(self, e2_nichols):
        """Test that x_1 x_2 has degree h^6 = e and h acts by zeta_6^2."""
        assert e2_nichols.degree((1, 1)) == 0
        assert e2_nichols.action(1, (1, 1)) == Cyclotomic.root(6, 2)

    def test_format_key(self, e2_nichols):
        """Test the human-readable monomial labels."""
        assert e2_nichols.format_key((0, 0)) == "1"
        assert e2_nichols.format_key((2, 1)) == "x1^2 x2"


class TestBraidedCoproduct:
    def test_generator_is_primitive(self, e1_nichols):
        """Test that Delta(x) = x (x) 1 + 1 (x) x."""
        x = e1_nichols.generator(0)
        expected = TensorElement(e1_nichols, 2, {((1,), (0,)): 1, ((0,), (1,)): 1})
        assert x.coproduct() == expected

    def test_square_has_q_binomial_middle_term(self, e2_nichols, e2_datum):
        """Test that Delta(x_1^2) has middle coefficient (2)_q."""
        coproduct = e2_nichols.monomial([2, 0]).coproduct()
        middle = coproduct.coefficient(((1, 0), (1, 0)))
        assert middle == q_int(2, e2_datum.q_i(0))

    def test_braided_product_picks_up_q(self, e1_nichols):
        """Test that (1 (x) x)(x (x) 1) = chi(g) x (x) x = -x (x) x."""
        # Arrange
        one, x = Element.one(e1_nichols), e1_nichols.generator(0)
        left = TensorElement.pure(one, x)
        right = TensorElement.pure(x, one)

        # Act
        product = braided_tensor_multiply(left, right)

        # Assert
        assert product == TensorElement(e1_nichols, 2, {((1,), (1,)): -1})

    def test_coproduct_is_multiplicative_on_basis(self, e2_nichols):
        """Test that Delta(uv) = Delta(u) Delta(v) for every pair of PBW monomials."""
        basis = [Element.basis_element(e2_nichols, r) for r in e2_nichols.basis()]
        for u, v in cartesian(basis, repeat=2):
            assert (u * v).coproduct() == u.coproduct() * v.coproduct()

    def test_counit(self, e2_nichols):
        """Test that epsilon kills every monomial of positive length."""
        assert e2_nichols.generator(1).counit() == 0
        assert Element.one(e2_nichols).counit() == 1


class TestPairingAndParsing:
    def test_dual_pairing_includes_q_factorials(self, e2_nichols, e2_datum):
        """Test that <X^(2,0), x_1^2> = (2)!_q."""
        x_sq = e2_nichols.monomial([2, 0])
        assert b_dual_pairing(e2_nichols, (2, 0), x_sq) == 1 + e2_datum.q_i(0)

    def test_parse_b_terms_accumulates(self, e1_nichols):
        """Test that repeated keys add up."""
        u = parse_b_terms(e1_nichols, [[[1], "1"], [[1], "2"], [[0], "1"]])
        assert u.coefficient((1,)) == 3
        assert u.counit() == 1

    def test_parse_tensor_terms_rejects_bad_keys(self, e1_nichols):
        """Test that a monomial outside the basis is refused."""
        with pytest.raises(ValueError):
            parse_tensor_terms(e1_nichols, [[[2], [0], "1"]])

    def test_group_algebra_keys(self):
        """Test that kF rejects elements outside F and is group-like."""
        kF = GroupAlgebra(cyclic_group(4), [0, 2])
        with pytest.raises(ValueError):
            parse_tensor_terms(kF, [[1, 0, "1"]])
        g = Element.basis_element(kF, 2)
        assert g.coproduct() == TensorElement.pure(g, g)


class TestSparseKernel:
    def test_invert_unipotent(self, e2_nichols):
        """Test that (1 + x_1)^-1 (1 + x_1) == 1."""
        u = Element.one(e2_nichols) + e2_nichols.generator(0)
        assert invert_unipotent(u) * u == Element.one(e2_nichols)

    def test_invert_unipotent_refuses_non_unipotent(self, e1_nichols):
        """Test that 2 * 1 is not of the form 1 + nilpotent."""
        with pytest.raises(NilpotencyError):
            invert_unipotent(Element.one(e1_nichols).scale(2), max_steps=8)

    def test_invert_by_elimination(self, e1_nichols):
        """Test that elimination inverts 2 + x."""
        u = Element.one(e1_nichols).scale(2) + e1_nichols.generator(0)
        assert invert_by_elimination(u) * u == Element.one(e1_nichols)

    def test_solve_linear_singular(self):
        """Test that a singular system raises ZeroDivisionError."""
        zero, one = Cyclotomic.from_rational(0), Cyclotomic.from_rational(1)
        with pytest.raises(ZeroDivisionError):
            solve_linear([[one, one, one], [one, one, zero]])

    def test_combining_contexts_raises(self, e1_nichols, e2_nichols):
        """Test that elements of different algebras cannot be added."""
        with pytest.raises(ValueError):
            Element.one(e1_nichols) + Element.one(e2_nichols)

    def test_witness_names_first_differing_key(self, e1_nichols):
        """Test that witness_against reports the key and both coefficients."""
        actual = e1_nichols.generator(0).scale(3)
        expected = e1_nichols.generator(0)
        witness = actual.witness_against(expected, "u")
        assert witness is not None
        assert (witness.key, witness.expected, witness.actual) == ("x1", "1 (conductor 1)", "3 (conductor 1)")
