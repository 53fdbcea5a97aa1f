"""
Quantum Linear Space Data and Scalar Families.

A datum is a finite group G with central elements g_1..g_theta and
characters chi_1..chi_theta.  From it derive the braiding matrix
q_ij = chi_j(g_i), the orders N_i of q_i = q_ii, and the abelian subgroup
Gamma generated by the g_i.  A scalar family D = {a_ij} u {xi_i}
parameterises the twists built in ``twist.py``; this module holds every
predicate on D (compatibility, F-invariance, q-symmetry) and the family
operations (sum, G-action, hat).

Key Concepts Demonstrated:
- Derived data computed once at construction (braiding exponents, N_i, Gamma)
- Validation that reports every violated condition instead of raising
- Two independent invariance predicates whose agreement is itself tested
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import DatumError
from .group import (
    Character,
    FiniteGroup,
    Subgroup,
    character_validate,
    subgroup_generated,
)
from .report import VerificationReport, Witness
from .scalar import Cyclotomic, as_cyclotomic

logger = logging.getLogger(__name__)


class QlsDatum:
    """
    The datum (G, g_i, chi_i) of a quantum linear space.

    Attributes:
        group: The finite group G.
        g: Generator indices g_1..g_theta (0-based list positions).
        chi: Characters chi_1..chi_theta on all of G.
        theta: Number of generators.
        conductor: Conductor of the session field, the lcm of every
            character conductor and the exponent of G.
        q: theta x theta matrix q_ij = chi_j(g_i).
        q_exp: Discrete logs of q_ij in Q(zeta_conductor), or None.
        N: Orders of q_i (None when q_i is not a root of unity).
        gamma: The subgroup generated by the g_i.
    """

    def __init__(self, group: FiniteGroup, g: Sequence[int], chi: Sequence[Character]) -> None:
        if not g or len(g) != len(chi):
            raise DatumError(f"Datum needs matching nonempty g and chi, got {len(g)} and {len(chi)}")
        for i, gi in enumerate(g):
            if not 0 <= gi < group.order:
                raise DatumError(f"g_{i + 1} = {gi} is not an element index of {group.name}")
        for i, c in enumerate(chi):
            if c.group is not group or c.members != tuple(range(group.order)):
                raise DatumError(f"chi_{i + 1} is not a character on all of {group.name}")
        self.group = group
        self.g = tuple(g)
        self.chi = tuple(chi)
        self.theta = len(g)
        self.conductor = math.lcm(group.exponent(), *(c.conductor() for c in chi))
        self.q = tuple(tuple(chi[j](g[i]) for j in range(self.theta)) for i in range(self.theta))
        exps = [c.exponents(self.conductor) for c in chi]
        self.roots_of_unity = all(e is not None for e in exps)
        self.chi_exp: tuple[tuple[int, ...], ...] | None = (
            tuple(exps) if self.roots_of_unity else None  # type: ignore[arg-type]
        )
        if self.chi_exp is not None:
            self.q_exp = tuple(
                tuple(self.chi_exp[j][g[i]] for j in range(self.theta)) for i in range(self.theta)
            )
        else:
            self.q_exp = None
        self.N = tuple(self.q[i][i].multiplicative_order() for i in range(self.theta))
        self.gamma = subgroup_generated(group, self.g)

    def q_i(self, i: int) -> Cyclotomic:
        return self.q[i][i]

    def root(self, k: int) -> Cyclotomic:
        """zeta_conductor**k."""
        return Cyclotomic.root(self.conductor, k)

    def chi_at(self, i: int, g: int) -> Cyclotomic:
        return self.chi[i](g)

    def label(self, i: int) -> str:
        return f"x{i + 1}"

    def require_valid(self) -> None:
        """
        Raise unless every datum condition holds.

        Raises:
            DatumError: Naming the first failing condition.
        """
        report = datum_validate(self)
        if not report.passed:
            first = report.failures()[0]
            raise DatumError(f"Invalid datum: {first.name}: {first.detail}")

    def to_dict(self) -> dict:
        return {
            "group": self.group.name,
            "order": self.group.order,
            "theta": self.theta,
            "g": [self.group.label(gi) for gi in self.g],
            "q": [[v.to_text() for v in row] for row in self.q],
            "N": list(self.N),
            "gamma": [self.group.label(a) for a in self.gamma.members],
            "conductor": self.conductor,
        }


def datum_validate(d: QlsDatum) -> VerificationReport:
    """
    Check characters, centrality of the g_i, q_ij q_ji = 1 and 1 < N_i < oo.

    Returns:
        A report with one check per condition; failures name the indices.
    """
    report = VerificationReport("datum")
    bad_chars = [i + 1 for i, c in enumerate(d.chi) if not character_validate(c)]
    report.add(
        "characters_multiplicative",
        not bad_chars,
        f"invalid characters: {bad_chars}" if bad_chars else "",
    )

    witness = None
    for i, gi in enumerate(d.g):
        for b in range(d.group.order):
            if not d.group.commutes(gi, b):
                witness = Witness(f"g_{i + 1}", d.group.label(b), "g_i h = h g_i", "does not commute")
                break
        if witness:
            break
    report.add("qsp1_central", witness is None, witness.element if witness else "", witness)

    witness = None
    for i in range(d.theta):
        for j in range(i + 1, d.theta):
            product = d.q[i][j] * d.q[j][i]
            if product != 1:
                witness = Witness(f"q_{i + 1}{j + 1} q_{j + 1}{i + 1}", f"({i + 1},{j + 1})", "1", product.to_text())
                break
        if witness:
            break
    report.add("qsp2_symmetric", witness is None, witness.key if witness else "", witness)

    bad_orders = [i + 1 for i, n in enumerate(d.N) if n is None or n <= 1]
    report.add(
        "finite_order",
        not bad_orders,
        f"q_i of infinite order or equal to 1 for i in {bad_orders}" if bad_orders else "",
    )
    report.data["datum"] = d.to_dict()
    return report


@dataclass
class ScalarFamily:
    """
    A family D = {a_ij : i != j} u {xi_i} (0-based indices, zeros dropped).

    Attributes:
        theta: Number of generators.
        a: Off-diagonal entries keyed by (i, j).
        xi: Diagonal entries keyed by i.
    """

    theta: int
    a: dict[tuple[int, int], Cyclotomic] = field(default_factory=dict)
    xi: dict[int, Cyclotomic] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (i, j) in self.a:
            if i == j or not (0 <= i < self.theta and 0 <= j < self.theta):
                raise ValueError(f"Invalid a-index ({i + 1},{j + 1}) for theta={self.theta}")
        for i in self.xi:
            if not 0 <= i < self.theta:
                raise ValueError(f"Invalid xi-index {i + 1} for theta={self.theta}")
        self.a = {k: as_cyclotomic(v) for k, v in sorted(self.a.items()) if not as_cyclotomic(v).is_zero()}
        self.xi = {k: as_cyclotomic(v) for k, v in sorted(self.xi.items()) if not as_cyclotomic(v).is_zero()}

    @classmethod
    def zero(cls, theta: int) -> ScalarFamily:
        return cls(theta)

    @classmethod
    def from_entries(
        cls,
        theta: int,
        a: Iterable[tuple[int, int, object]] = (),
        xi: Iterable[tuple[int, object]] = (),
    ) -> ScalarFamily:
        """Build from 0-based (i, j, value) and (i, value) entries; repeats add up."""
        a_map: dict[tuple[int, int], Cyclotomic] = {}
        for i, j, value in a:
            a_map[(i, j)] = a_map.get((i, j), Cyclotomic.from_rational(0)) + as_cyclotomic(value)
        xi_map: dict[int, Cyclotomic] = {}
        for i, value in xi:
            xi_map[i] = xi_map.get(i, Cyclotomic.from_rational(0)) + as_cyclotomic(value)
        return cls(theta, a_map, xi_map)

    def a_ij(self, i: int, j: int) -> Cyclotomic:
        return self.a.get((i, j), Cyclotomic.from_rational(0))

    def xi_i(self, i: int) -> Cyclotomic:
        return self.xi.get(i, Cyclotomic.from_rational(0))

    def is_zero(self) -> bool:
        return not self.a and not self.xi

    def support(self) -> set[int]:
        """Indices touched by a nonzero entry."""
        return {i for pair in self.a for i in pair} | set(self.xi)

    def __add__(self, other: ScalarFamily) -> ScalarFamily:
        if self.theta != other.theta:
            raise ValueError(f"theta mismatch: {self.theta} vs {other.theta}")
        a = dict(self.a)
        for k, v in other.a.items():
            a[k] = a.get(k, Cyclotomic.from_rational(0)) + v
        xi = dict(self.xi)
        for k, v in other.xi.items():
            xi[k] = xi.get(k, Cyclotomic.from_rational(0)) + v
        return ScalarFamily(self.theta, a, xi)

    def __sub__(self, other: ScalarFamily) -> ScalarFamily:
        return self + other.scaled(-1)

    def scaled(self, c: object) -> ScalarFamily:
        c = as_cyclotomic(c)
        return ScalarFamily(
            self.theta,
            {k: v * c for k, v in self.a.items()},
            {k: v * c for k, v in self.xi.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarFamily):
            return NotImplemented
        return (
            self.theta == other.theta
            and self.a.keys() == other.a.keys()
            and self.xi.keys() == other.xi.keys()
            and all(v == other.a[k] for k, v in self.a.items())
            and all(v == other.xi[k] for k, v in self.xi.items())
        )

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict:
        return {
            "a": [[i + 1, j + 1, v.to_text()] for (i, j), v in sorted(self.a.items())],
            "xi": [[i + 1, v.to_text()] for i, v in sorted(self.xi.items())],
        }


def _check_theta(d: QlsDatum, D: ScalarFamily) -> None:
    if d.theta != D.theta:
        raise ValueError(f"theta mismatch: datum has {d.theta}, family has {D.theta}")


def family_act(d: QlsDatum, D: ScalarFamily, g: int) -> ScalarFamily:
    """g.D with entries chi_i chi_j(g) a_ij and chi_i^N_i(g) xi_i."""
    _check_theta(d, D)
    a = {(i, j): d.chi[i](g) * d.chi[j](g) * v for (i, j), v in D.a.items()}
    xi = {i: (d.chi[i](g) ** d.N[i]) * v for i, v in D.xi.items()}
    return ScalarFamily(D.theta, a, xi)


def family_hat(d: QlsDatum, D: ScalarFamily) -> ScalarFamily:
    """D-hat: b_ij = q_ij a_ji - a_ij for every i != j, same xi."""
    _check_theta(d, D)
    b = {}
    for i in range(d.theta):
        for j in range(d.theta):
            if i != j:
                b[(i, j)] = d.q[i][j] * D.a_ij(j, i) - D.a_ij(i, j)
    return ScalarFamily(D.theta, b, dict(D.xi))


def is_q_symmetric(d: QlsDatum, D: ScalarFamily) -> bool:
    """True iff a_ij = -q_ij a_ji for all i != j."""
    _check_theta(d, D)
    return all(
        D.a_ij(i, j) == -(d.q[i][j] * D.a_ij(j, i))
        for i in range(d.theta)
        for j in range(d.theta)
        if i != j
    )


def compatibility_violations(d: QlsDatum, D: ScalarFamily) -> list[str]:
    """Entries that break a_ij = 0 unless g_i g_j = 1, and xi_i = 0 unless g_i^N_i = 1."""
    _check_theta(d, D)
    group = d.group
    out = []
    for (i, j) in D.a:
        if group.mul(d.g[i], d.g[j]) != 0:
            out.append(f"a_{i + 1}{j + 1}: g_{i + 1} g_{j + 1} != 1")
    for i in D.xi:
        if d.N[i] is None or group.power(d.g[i], d.N[i]) != 0:
            out.append(f"xi_{i + 1}: g_{i + 1}^N_{i + 1} != 1")
    return out


def family_compatible(d: QlsDatum, D: ScalarFamily) -> bool:
    return not compatibility_violations(d, D)


def invariance_violations(d: QlsDatum, D: ScalarFamily, F: Subgroup | Iterable[int]) -> list[str]:
    """Elements g of F and entries where the literal F-invariance equations fail."""
    _check_theta(d, D)
    members = F.members if isinstance(F, Subgroup) else tuple(F)
    out = []
    for g in members:
        for (i, j), v in D.a.items():
            if d.chi[i](g) * d.chi[j](g) * v != v:
                out.append(f"a_{i + 1}{j + 1} at {d.group.label(g)}")
        for i, v in D.xi.items():
            if (d.chi[i](g) ** d.N[i]) * v != v:
                out.append(f"xi_{i + 1} at {d.group.label(g)}")
    return out


def family_invariant(d: QlsDatum, D: ScalarFamily, F: Subgroup | Iterable[int]) -> bool:
    """chi_i chi_j(g) a_ij = a_ij and chi_i^N_i(g) xi_i = xi_i for all g in F."""
    return not invariance_violations(d, D, F)


def family_invariant_bilinear(d: QlsDatum, D: ScalarFamily) -> bool:
    """
    The restated predicate: a_ij = 0 if q_ik q_jk != 1 for some k, and
    xi_i = 0 if q_ij^N_i != 1 for some j.
    """
    _check_theta(d, D)
    for (i, j) in D.a:
        if any(d.q[i][k] * d.q[j][k] != 1 for k in range(d.theta)):
            return False
    for i in D.xi:
        if any(d.q[i][j] ** d.N[i] != 1 for j in range(d.theta)):
            return False
    return True


def invariance_agreement(d: QlsDatum, D: ScalarFamily) -> dict[str, bool]:
    """
    Evaluate compatibility, literal Gamma-invariance and the bilinear
    predicate side by side.

    Returns:
        Flags ``compatible``, ``gamma_invariant``, ``bilinear`` and
        ``agree`` (literal and bilinear verdicts coincide), plus
        ``implied`` (compatibility implies Gamma-invariance here).
    """
    compatible = family_compatible(d, D)
    literal = family_invariant(d, D, d.gamma)
    bilinear = family_invariant_bilinear(d, D)
    flags = {
        "compatible": compatible,
        "gamma_invariant": literal,
        "bilinear": bilinear,
        "agree": literal == bilinear,
        "implied": (not compatible) or literal,
    }
    if not flags["agree"]:
        logger.warning("Literal and bilinear invariance predicates disagree: %s", flags)
    return flags


@dataclass
class SubDatum:
    """
    The optional (W, F, J_F) data.

    Attributes:
        W: 0-based coordinate indices spanning W.
        F: A subgroup containing Gamma.
        JF: Coefficients of the group-algebra twist on F x F, or None for 1 (x) 1.
    """

    W: tuple[int, ...]
    F: Subgroup
    JF: dict[tuple[int, int], Cyclotomic] | None = None


def sub_datum_validate(d: QlsDatum, D: ScalarFamily, sub: SubDatum) -> VerificationReport:
    """Check Gamma <= F, W in range, D supported on W and F-invariant, J_F on F x F."""
    report = VerificationReport("sub_datum")
    report.add("gamma_in_F", d.gamma.issubset(sub.F), f"|F| = {sub.F.order}")
    report.add(
        "W_in_range",
        all(0 <= i < d.theta for i in sub.W),
        f"W = {[i + 1 for i in sub.W]}",
    )
    outside = sorted(i + 1 for i in D.support() - set(sub.W))
    report.add("family_supported_on_W", not outside, f"entries outside W: {outside}" if outside else "")
    violations = invariance_violations(d, D, sub.F)
    report.add("family_F_invariant", not violations, "; ".join(violations[:3]))
    if sub.JF is not None:
        bad = [k for k in sub.JF if k[0] not in sub.F or k[1] not in sub.F]
        report.add("JF_on_F", not bad, f"keys outside F x F: {bad[:3]}" if bad else "")
    return report


def family_from_mapping(theta: int, spec: Mapping) -> ScalarFamily:
    """Parse ``{"a": [[i, j, lit]], "xi": [[i, lit]]}`` with 1-based indices."""
    a_entries = [(int(i) - 1, int(j) - 1, Cyclotomic.parse(str(v))) for i, j, v in spec.get("a", [])]
    xi_entries = [(int(i) - 1, Cyclotomic.parse(str(v))) for i, v in spec.get("xi", [])]
    return ScalarFamily.from_entries(theta, a_entries, xi_entries)
