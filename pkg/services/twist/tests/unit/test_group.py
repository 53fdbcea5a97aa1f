"""
Unit tests for finite groups, subgroups, cosets and characters.

Key Concepts Demonstrated:
- Negative tests for every group axiom the table validator enforces
- Deterministic ordering contracts (coset representatives, character lists)
- Parametrized construction through the config-level ``group_from_spec``
"""

from __future__ import annotations

import pytest

from services.twist.twist_app.errors import GroupAxiomError
from services.twist.twist_app.group import (
    Character,
    character_group,
    character_validate,
    coset_representatives,
    cyclic_group,
    group_from_spec,
    group_from_table,
    product_group,
    subgroup_from_members,
    subgroup_generated,
)
from services.twist.twist_app.scalar import Cyclotomic

pytestmark = pytest.mark.unit


class TestFiniteGroup:
    def test_cyclic_group_arithmetic(self):
        """Test that Z6 multiplies and inverts modulo 6."""
        # Arrange
        group = cyclic_group(6)

        # Act & Assert
        assert group.mul(4, 5) == 3
        assert group.inverse(2) == 4
        assert group.power(2, 3) == 0
        assert group.element_order(4) == 3
        assert group.exponent() == 6

    def test_cyclic_labels(self):
        """Test that elements are labelled e, h, h^2, ..."""
        group = cyclic_group(4)
        assert [group.label(a) for a in group.elements()] == ["e", "h", "h^2", "h^3"]

    def test_product_group_is_lexicographic(self):
        """Test that Z2 x Z2 lists (0,0), (0,1), (1,0), (1,1) in that order."""
        group = product_group([2, 2])
        assert [group.label(a) for a in group.elements()] == ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]
        assert group.mul(1, 2) == 3
        assert group.is_abelian()

    @pytest.mark.parametrize(
        "spec, order",
        [({"cyclic": 5}, 5), ({"product": [2, 3]}, 6), ({"table": [[0, 1], [1, 0]]}, 2)],
    )
    def test_group_from_spec(self, spec, order):
        """Test that each config shape builds a group of the right order."""
        assert group_from_spec(spec).order == order

    def test_group_from_spec_needs_exactly_one_kind(self):
        """Test that a spec naming two kinds is rejected."""
        with pytest.raises(ValueError):
            group_from_spec({"cyclic": 2, "product": [2]})

    @pytest.mark.parametrize(
        "table",
        [
            [[0, 1], [1, 1]],  # not a Latin square
            [[1, 0], [0, 1]],  # index 0 is not the identity
            [[0, 1, 2], [1, 2, 0]],  # not square
        ],
    )
    def test_invalid_tables_raise(self, table):
        """Test that tables violating a group axiom raise GroupAxiomError."""
        with pytest.raises(GroupAxiomError):
            group_from_table(table)

    def test_non_associative_latin_square_raises(self):
        """Test that a Latin square with identity but no associativity is rejected."""
        # Arrange: the smallest non-associative loop has order 5
        table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]

        # Act & Assert
        with pytest.raises(GroupAxiomError):
            group_from_table(table)


class TestSubgroupsAndCosets:
    def test_generated_subgroup(self):
        """Test that <h^2> in Z6 is {e, h^2, h^4}."""
        sub = subgroup_generated(cyclic_group(6), [2])
        assert sub.members == (0, 2, 4)

    def test_subgroup_from_members_checks_closure(self):
        """Test that {e, h} in Z4 is rejected as not closed."""
        with pytest.raises(GroupAxiomError):
            subgroup_from_members(cyclic_group(4), [0, 1])

    def test_coset_representatives_lowest_first(self):
        """Test that Z6 / <h^2> has representatives e and h."""
        group = cyclic_group(6)
        sub = subgroup_generated(group, [2])
        assert coset_representatives(group, sub) == [0, 1]

    def test_coset_is_aligned_with_members(self):
        """Test that s.Gamma lists s*gamma in the order of Gamma's members."""
        group = cyclic_group(6)
        sub = subgroup_generated(group, [2])
        assert sub.coset(1) == [1, 3, 5]

    def test_cosets_partition_the_group(self):
        """Test that the cosets of <(1,0)> cover Z2 x Z2 exactly once."""
        group = product_group([2, 2])
        sub = subgroup_generated(group, [2])
        covered = [a for s in coset_representatives(group, sub) for a in sub.coset(s)]
        assert sorted(covered) == list(group.elements())


class TestCharacters:
    def test_character_from_generator_images(self):
        """Test that h -> i extends to h^k -> i^k on Z4."""
        # Arrange
        group = cyclic_group(4)
        i = Cyclotomic.root(4)

        # Act
        chi = Character.from_generator_images(group, {1: i})

        # Assert
        assert [chi(k) == i**k for k in range(4)] == [True] * 4
        assert character_validate(chi)

    def test_inconsistent_generator_images_raise(self):
        """Test that h -> zeta_3 is inconsistent on Z4."""
        with pytest.raises(ValueError):
            Character.from_generator_images(cyclic_group(4), {1: Cyclotomic.root(3)})

    def test_non_multiplicative_values_fail_validation(self):
        """Test that a value table that is not a homomorphism is invalid."""
        group = cyclic_group(4)
        chi = Character(group, [1, Cyclotomic.root(4), 1, -Cyclotomic.root(4)])
        assert not character_validate(chi)

    def test_character_group_trivial_first(self):
        """Test that the dual of Z3 has three characters, the trivial one first."""
        group = cyclic_group(6)
        sub = subgroup_generated(group, [2])
        chars = character_group(sub)
        assert len(chars) == 3
        assert chars[0].is_trivial()
        assert not chars[1] == chars[2]

    def test_character_product_and_power(self):
        """Test that chi * chi == chi^2 and chi^4 is trivial on Z4."""
        chi = Character.from_generator_images(cyclic_group(4), {1: Cyclotomic.root(4)})
        assert chi * chi == chi.power(2)
        assert chi.power(4).is_trivial()
