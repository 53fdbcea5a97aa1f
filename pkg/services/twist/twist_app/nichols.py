"""
The Nichols Algebra of a Quantum Linear Space.

B(V) is the algebra generated by x_1..x_theta with x_i^N_i = 0 and
x_i x_j = q_ij x_j x_i.  The PBW monomials x_1^r_1 ... x_theta^r_theta
(0 <= r_i < N_i) form a basis; a basis key is the exponent tuple ``r``.
Each monomial is homogeneous for the Yetter-Drinfeld structure, with
degree g^r = prod g_i^r_i and action h . x^r = prod chi_i(h)^r_i x^r, so
every braiding and every reordering contributes a single root of unity.

``NicholsAlgebra`` is the ``AlgebraContext`` for B(V) (braided);
``GroupAlgebra`` is the context for kF (trivially braided).  Both plug
into the kernel in ``sparse.py``.

Key Concepts Demonstrated:
- Structure constants computed lazily and memoised per basis pair
- Braided coproduct of a monomial as the braided product of q-binomial expansions
- Integer root-of-unity exponents in the hot path, ``Cyclotomic`` only at the edges
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import product as cartesian

from .errors import DatumError
from .group import FiniteGroup, Subgroup
from .qls import QlsDatum
from .scalar import Cyclotomic, as_cyclotomic, q_binomial, q_factorial
from .sparse import Element, TensorElement

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]
BElement = Element


@dataclass(frozen=True)
class YDStructure:
    """Degree and action character of a homogeneous element."""

    degree: int
    action: Callable[[int], Cyclotomic]


class NicholsAlgebra:
    """
    Basis-level structure of B(V) for a quantum linear space datum.

    Attributes:
        datum: The underlying ``QlsDatum``.
        theta: Number of generators.
        N: Nilpotency orders N_i.
        conductor: Session conductor; every braiding scalar is a power of
            zeta_conductor.
    """

    braided = True

    def __init__(self, datum: QlsDatum) -> None:
        if datum.q_exp is None or any(n is None or n < 2 for n in datum.N):
            raise DatumError("B(V) needs characters with root-of-unity values and every N_i > 1")
        self.datum = datum
        self.group: FiniteGroup = datum.group
        self.theta = datum.theta
        self.N: tuple[int, ...] = tuple(datum.N)  # type: ignore[arg-type]
        self.conductor = datum.conductor
        self.name = "B(V)"
        self._q_exp = datum.q_exp
        self._basis: tuple[Monomial, ...] = tuple(cartesian(*(range(n) for n in self.N)))
        self._one: Monomial = (0,) * self.theta
        self._mult: dict[tuple[Monomial, Monomial], tuple] = {}
        self._braid: dict[tuple[Monomial, Monomial], int] = {}
        self._coproduct: dict[Monomial, dict] = {}
        self._degree: dict[Monomial, int] = {}
        self._factorial: dict[Monomial, Cyclotomic] = {}
        logger.debug("B(V) context with dim %d over conductor %d", len(self._basis), self.conductor)

    # -- AlgebraContext -----------------------------------------------------

    def basis(self) -> tuple[Monomial, ...]:
        return self._basis

    @property
    def dimension(self) -> int:
        return len(self._basis)

    def one_key(self) -> Monomial:
        return self._one

    def multiply_basis(self, r: Monomial, s: Monomial) -> tuple:
        cached = self._mult.get((r, s))
        if cached is not None:
            return cached
        t = tuple(a + b for a, b in zip(r, s))
        if any(t_i >= n for t_i, n in zip(t, self.N)):
            result: tuple = ()
        else:
            q = self._q_exp
            e = 0
            for i in range(self.theta):
                if r[i]:
                    for j in range(i):
                        if s[j]:
                            e += r[i] * s[j] * q[i][j]
            result = ((t, e % self.conductor),)
        self._mult[(r, s)] = result
        return result

    def braiding(self, left: Monomial, right: Monomial) -> int:
        """Exponent of the scalar picked up when ``right`` moves past ``left``."""
        cached = self._braid.get((left, right))
        if cached is None:
            q = self._q_exp
            cached = sum(
                left[i] * right[j] * q[i][j]
                for i in range(self.theta)
                if left[i]
                for j in range(self.theta)
                if right[j]
            ) % self.conductor
            self._braid[(left, right)] = cached
        return cached

    def coproduct_basis(self, r: Monomial) -> dict:
        cached = self._coproduct.get(r)
        if cached is None:
            result = TensorElement.one(self, 2)
            for i, n in enumerate(r):
                if n:
                    result = result * self._power_coproduct(i, n)
            cached = result.terms
            self._coproduct[r] = cached
        return cached

    def counit_basis(self, r: Monomial) -> int:
        return 1 if r == self._one else 0

    def format_key(self, r: Monomial) -> str:
        if r == self._one:
            return "1"
        return " ".join(
            f"x{i + 1}" if n == 1 else f"x{i + 1}^{n}" for i, n in enumerate(r) if n
        )

    # -- Yetter-Drinfeld structure ------------------------------------------

    def unit_vector(self, i: int, n: int = 1) -> Monomial:
        return tuple(n if k == i else 0 for k in range(self.theta))

    def _power_coproduct(self, i: int, n: int) -> TensorElement:
        q = self.datum.q_i(i)
        return TensorElement(
            self,
            2,
            {
                (self.unit_vector(i, k), self.unit_vector(i, n - k)): q_binomial(n, k, q)
                for k in range(n + 1)
            },
        )

    def degree(self, r: Monomial) -> int:
        """prod g_i^r_i as a group element index."""
        cached = self._degree.get(r)
        if cached is None:
            cached = 0
            for gi, n in zip(self.datum.g, r):
                if n:
                    cached = self.group.mul(cached, self.group.power(gi, n))
            self._degree[r] = cached
        return cached

    def action_exponent(self, g: int, r: Monomial) -> int:
        """Exponent of prod chi_i(g)^r_i."""
        chi_exp = self.datum.chi_exp
        return sum(n * chi_exp[i][g] for i, n in enumerate(r) if n) % self.conductor  # type: ignore[index]

    def action(self, g: int, r: Monomial) -> Cyclotomic:
        return Cyclotomic.root(self.conductor, self.action_exponent(g, r))

    def yd_structure(self, r: Monomial) -> YDStructure:
        if len(r) != self.theta or any(not 0 <= n < N for n, N in zip(r, self.N)):
            raise ValueError(f"Monomial {r!r} is outside the PBW basis")
        return YDStructure(self.degree(r), lambda g: self.action(g, r))

    def tensor_degree(self, key: Sequence[Monomial]) -> int:
        total = 0
        for r in key:
            total = self.group.mul(total, self.degree(r))
        return total

    def act(self, g: int, element: Element | TensorElement) -> Element | TensorElement:
        """The diagonal G-action on elements and tensors."""
        if isinstance(element, TensorElement):
            return element._new(
                {
                    key: v * Cyclotomic.root(self.conductor, sum(self.action_exponent(g, r) for r in key))
                    for key, v in element.terms.items()
                }
            )
        return element._new(
            {r: v * self.action(g, r) for r, v in element.terms.items()}
        )

    # -- element helpers ----------------------------------------------------

    def factorial(self, r: Monomial) -> Cyclotomic:
        """prod (r_i)!_{q_i}."""
        cached = self._factorial.get(r)
        if cached is None:
            cached = Cyclotomic.from_rational(1)
            for i, n in enumerate(r):
                cached = cached * q_factorial(n, self.datum.q_i(i))
            self._factorial[r] = cached
        return cached

    def generator(self, i: int) -> BElement:
        return Element.basis_element(self, self.unit_vector(i))

    def monomial(self, r: Sequence[int], coef: object = 1) -> BElement:
        r = tuple(r)
        self.yd_structure(r)
        return Element.basis_element(self, r, as_cyclotomic(coef))

    def element(self, terms: Mapping[Sequence[int], object]) -> BElement:
        return Element(self, {tuple(r): as_cyclotomic(v) for r, v in terms.items()})

    def tensor(self, terms: Mapping[tuple, object], arity: int = 2) -> TensorElement:
        return TensorElement(
            self, arity, {tuple(tuple(r) for r in key): as_cyclotomic(v) for key, v in terms.items()}
        )

    def cache_sizes(self) -> dict[str, int]:
        return {"products": len(self._mult), "braidings": len(self._braid), "coproducts": len(self._coproduct)}


def _require_same(ctx: NicholsAlgebra, *elements: Element) -> None:
    for e in elements:
        if e.ctx is not ctx:
            raise ValueError("Element belongs to a different datum")


def b_multiply(u: BElement, v: BElement) -> BElement:
    """Product in B(V)."""
    if u.ctx is not v.ctx:
        raise ValueError("Cannot multiply elements of different Nichols algebras")
    return u * v


def b_coproduct(u: BElement) -> TensorElement:
    """Braided coproduct, an algebra map into the braided tensor square."""
    return u.coproduct()


def b_counit(u: BElement) -> Cyclotomic:
    return u.counit()


def braided_tensor_multiply(s: TensorElement, t: TensorElement) -> TensorElement:
    """Product in the braided tensor power; arity 3 associates left."""
    if s.arity != t.arity:
        raise ValueError(f"Arity mismatch: {s.arity} vs {t.arity}")
    return s * t


def b_dual_pairing(ctx: NicholsAlgebra, r: Monomial, u: BElement) -> Cyclotomic:
    """<X^r, u> = coefficient of x^r in u times prod (r_i)!_{q_i}."""
    _require_same(ctx, u)
    return u.coefficient(tuple(r)) * ctx.factorial(tuple(r))


def parse_b_terms(ctx: NicholsAlgebra, terms: Iterable[Sequence]) -> BElement:
    """Parse ``[[r, literal], ...]`` into an element of B(V)."""
    acc: dict = {}
    for r, lit in terms:
        key = tuple(int(n) for n in r)
        ctx.yd_structure(key)
        value = Cyclotomic.parse(str(lit))
        acc[key] = acc[key] + value if key in acc else value
    return Element(ctx, acc)


def parse_tensor_terms(ctx: NicholsAlgebra | GroupAlgebra, terms: Iterable[Sequence]) -> TensorElement:
    """Parse ``[[left, right, literal], ...]`` into an arity-2 tensor."""
    acc: dict = {}
    for left, right, lit in terms:
        key = (_parse_key(ctx, left), _parse_key(ctx, right))
        value = Cyclotomic.parse(str(lit))
        acc[key] = acc[key] + value if key in acc else value
    return TensorElement(ctx, 2, acc)


def _parse_key(ctx: NicholsAlgebra | GroupAlgebra, raw: object):
    if isinstance(ctx, NicholsAlgebra):
        key = tuple(int(n) for n in raw)  # type: ignore[union-attr]
        ctx.yd_structure(key)
        return key
    key = int(raw)  # type: ignore[arg-type]
    if key not in ctx.members:
        raise ValueError(f"Group element {key} is not in {ctx.name}")
    return key


class GroupAlgebra:
    """
    The group algebra kF of a subgroup, with g (x) g coproduct and trivial braiding.

    Basis keys are group element indices.
    """

    braided = False
    conductor = 1

    def __init__(self, group: FiniteGroup, members: Subgroup | Iterable[int] | None = None) -> None:
        self.group = group
        if members is None:
            self.members = tuple(range(group.order))
        elif isinstance(members, Subgroup):
            self.members = members.members
        else:
            self.members = tuple(sorted(set(members)))
        self._set = frozenset(self.members)
        self.name = f"k[{len(self.members)}]"

    def basis(self) -> tuple[int, ...]:
        return self.members

    def one_key(self) -> int:
        return 0

    def multiply_basis(self, a: int, b: int) -> tuple:
        return ((self.group.mul(a, b), 0),)

    def coproduct_basis(self, a: int) -> dict:
        return {(a, a): Cyclotomic.from_rational(1)}

    def counit_basis(self, a: int) -> int:
        return 1

    def braiding(self, left: int, right: int) -> int:
        return 0

    def degree(self, a: int) -> int:
        return 0

    def tensor_degree(self, key: Sequence[int]) -> int:
        return 0

    def format_key(self, a: int) -> str:
        return self.group.label(a)
