"""
Shared pytest fixtures for twistlab tests.

Provides the reference data used across the unit, integration and
contract suites: the small quantum linear space data (E1, E2, E3, the
cubic and the G-invariant one-dimensional cases), a factory for cyclic
data, and the paths of the shipped configs and contracts.

Key Concepts Demonstrated:
- Fixture scoping (session for expensive algebras, function for cheap data)
- Factory-pattern fixtures for data with chosen g_i and characters
- Environment variable overrides for deterministic test configuration
"""

from __future__ import annotations

import os
from collections.abc import Callable
from pathlib import Path

import pytest

os.environ["TWISTLAB_ENV"] = "testing"

from services.twist.twist_app import configure
from services.twist.twist_app.group import Character, cyclic_group, product_group
from services.twist.twist_app.hopf import HopfAlgebra, build_twisted
from services.twist.twist_app.nichols import NicholsAlgebra
from services.twist.twist_app.qls import QlsDatum, ScalarFamily
from services.twist.twist_app.scalar import Cyclotomic

REPO_ROOT = Path(__file__).resolve().parents[3]

configure("testing")


def _cyclic_datum(n: int, g: list[int], chi_exponents: list[int]) -> QlsDatum:
    """Datum over Z_n with chi_i(h^k) = zeta_n^(e_i k)."""
    group = cyclic_group(n)
    chi = [Character(group, [Cyclotomic.root(n, e * k) for k in range(n)]) for e in chi_exponents]
    return QlsDatum(group, g, chi)


@pytest.fixture
def cyclic_datum() -> Callable[[int, list[int], list[int]], QlsDatum]:
    """
    Provide a factory building data over Z_n.

    ``cyclic_datum(4, [2], [1])`` is the E1 datum: g = h^2, chi(h) = i.
    """
    return _cyclic_datum


@pytest.fixture(scope="session")
def e1_datum() -> QlsDatum:
    """Z4, g = h^2, chi(h) = i, so q = -1 and N = 2."""
    return _cyclic_datum(4, [2], [1])


@pytest.fixture(scope="session")
def e1_family() -> ScalarFamily:
    return ScalarFamily.from_entries(1, xi=[(0, 1)])


@pytest.fixture(scope="session")
def e1_algebras(e1_datum, e1_family) -> tuple[HopfAlgebra, HopfAlgebra]:
    """H = B(V)#kZ4 and its twist A by the lift of J_xi, built once."""
    return build_twisted(e1_datum, e1_family)


@pytest.fixture(scope="session")
def e2_datum() -> QlsDatum:
    """Z6, g1 = h^2, g2 = h^4, chi1 = chi2 with chi(h) = zeta_6, N = 3."""
    return _cyclic_datum(6, [2, 4], [1, 1])


@pytest.fixture(scope="session")
def e2_family() -> ScalarFamily:
    return ScalarFamily.from_entries(2, a=[(0, 1, 1)])


@pytest.fixture(scope="session")
def e2_algebras(e2_datum, e2_family) -> tuple[HopfAlgebra, HopfAlgebra]:
    return build_twisted(e2_datum, e2_family)


@pytest.fixture(scope="session")
def e3_datum() -> QlsDatum:
    """Exterior datum: Z4, g1 = g2 = h^2, chi1 = chi2 with chi(h) = i."""
    return _cyclic_datum(4, [2, 2], [1, 1])


@pytest.fixture
def e3_family() -> Callable[[int], ScalarFamily]:
    """Provide a factory for the E3 family a12 = a, a21 = -a."""

    def make(a: int) -> ScalarFamily:
        return ScalarFamily.from_entries(2, a=[(0, 1, a), (1, 0, -a)])

    return make


@pytest.fixture(scope="session")
def cubic_datum() -> QlsDatum:
    """Z9, u = h^3, chi(h) = zeta_9, so q = zeta_3 and N = 3."""
    return _cyclic_datum(9, [3], [1])


@pytest.fixture(scope="session")
def invariant_datum() -> QlsDatum:
    """Z2 x Z2, u = (1,0), chi(a,b) = (-1)^a; chi^2 is trivial."""
    group = product_group([2, 2])
    chi = Character(group, [1, 1, -1, -1])
    return QlsDatum(group, [2], [chi])


@pytest.fixture(scope="session")
def e1_nichols(e1_datum) -> NicholsAlgebra:
    return NicholsAlgebra(e1_datum)


@pytest.fixture(scope="session")
def e2_nichols(e2_datum) -> NicholsAlgebra:
    return NicholsAlgebra(e2_datum)


@pytest.fixture(scope="session")
def contracts_dir() -> Path:
    return REPO_ROOT / "contracts"


@pytest.fixture(scope="session")
def configs_dir() -> Path:
    return REPO_ROOT / "configs"
