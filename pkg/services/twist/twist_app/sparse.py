"""
Sparse Elements and Tensors over a Basis-Level Algebra Context.

Every algebra in twistlab (the Nichols algebra B(V), a group algebra kF,
the bosonization H = B(V)#kG and its twisted form) exposes the same small
basis-level interface, ``AlgebraContext``.  This module implements the
linear algebra on top of it once: sparse elements, tensor powers with an
optional braiding, coproduct and counit legs, inverses, and witnesses
for coefficient mismatches.

Products of basis elements return terms whose scalars are either an
``int`` (an exponent of the context's root of unity) or a general
``Cyclotomic``.  Root-of-unity exponents are summed as integers and turned
into one field multiplication per term, which keeps the inner loops cheap.

Key Concepts Demonstrated:
- A ``Protocol`` describing the basis-level structure constants
- Dict-of-terms sparse storage with eager removal of zero coefficients
- Braided tensor products via per-pair scalar bookkeeping
- Unipotent inversion by truncated geometric series and exact Gaussian elimination
"""

from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Mapping, Sequence
from itertools import product as cartesian
from typing import Protocol, Union

from .errors import NilpotencyError
from .report import Witness
from .scalar import Cyclotomic, Scalar, as_cyclotomic

logger = logging.getLogger(__name__)

Key = Hashable
BasisScalar = Union[int, Cyclotomic]
Terms = dict


class AlgebraContext(Protocol):
    """Basis-level structure of a finite-dimensional (braided) bialgebra."""

    name: str
    conductor: int
    braided: bool

    def basis(self) -> Sequence[Key]: ...

    def one_key(self) -> Key: ...

    def multiply_basis(self, a: Key, b: Key) -> tuple[tuple[Key, BasisScalar], ...]: ...

    def coproduct_basis(self, a: Key) -> Mapping[tuple[Key, Key], Cyclotomic]: ...

    def counit_basis(self, a: Key) -> Cyclotomic | int: ...

    def braiding(self, left: Key, right: Key) -> int: ...

    def format_key(self, a: Key) -> str: ...


def _accumulate(acc: dict, key: Key, value: Cyclotomic) -> None:
    current = acc.get(key)
    acc[key] = value if current is None else current + value


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if not v.is_zero()}


def _root(ctx: AlgebraContext, exponent: int) -> Cyclotomic | None:
    exponent %= ctx.conductor
    if exponent == 0:
        return None
    return Cyclotomic.root(ctx.conductor, exponent)


class _SparseBase:
    __slots__ = ("ctx", "terms")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, ctx: AlgebraContext, terms: Mapping | None = None) -> None:
        self.ctx = ctx
        self.terms: dict = _clean({k: as_cyclotomic(v) for k, v in (terms or {}).items()})

    def _new(self, terms: Mapping) -> _SparseBase:
        raise NotImplementedError

    def rebase(self, ctx: AlgebraContext) -> _SparseBase:
        """The same terms read in another context with the same basis."""
        clone = self._new(self.terms)
        clone.ctx = ctx
        return clone

    def _compatible(self, other: _SparseBase) -> None:
        if type(other) is not type(self) or other.ctx is not self.ctx:
            raise ValueError(f"Cannot combine elements of different algebras ({self.ctx.name} vs {other.ctx.name})")

    def __add__(self, other: _SparseBase) -> _SparseBase:
        self._compatible(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(acc, k, v)
        return self._new(acc)

    def __neg__(self) -> _SparseBase:
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: _SparseBase) -> _SparseBase:
        return self + (-other)

    def scale(self, c: Scalar) -> _SparseBase:
        c = as_cyclotomic(c)
        if c.is_zero():
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: Key) -> Cyclotomic:
        return self.terms.get(key, Cyclotomic.from_rational(0))

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, _SparseBase):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(v == other.terms[k] for k, v in self.terms.items())

    def first_difference(self, other: _SparseBase) -> tuple[Key, Cyclotomic, Cyclotomic] | None:
        """First key (in sorted order) where the coefficients differ."""
        keys = sorted(set(self.terms) | set(other.terms))
        for key in keys:
            mine, theirs = self.coefficient(key), other.coefficient(key)
            if mine != theirs:
                return key, mine, theirs
        return None

    def witness_against(self, expected: _SparseBase, element: str) -> Witness | None:
        """Witness describing where ``self`` (actual) departs from ``expected``."""
        diff = expected.first_difference(self)
        if diff is None:
            return None
        key, want, got = diff
        return Witness(element, self.format_key(key), want.to_text(), got.to_text())

    def format_key(self, key: Key) -> str:
        raise NotImplementedError

    def sorted_terms(self) -> list[tuple[Key, Cyclotomic]]:
        return sorted(self.terms.items(), key=lambda item: item[0])

    def to_list(self) -> list[list[str]]:
        """Deterministic ``[[key, literal], ...]`` form for reports."""
        return [[self.format_key(k), v.to_text()] for k, v in self.sorted_terms()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({v.to_text()}) {self.format_key(k)}" for k, v in self.sorted_terms())


class Element(_SparseBase):
    """A sparse element of an algebra context: basis key -> coefficient."""

    __slots__ = ()

    @classmethod
    def basis_element(cls, ctx: AlgebraContext, key: Key, coef: Scalar = 1) -> Element:
        return cls(ctx, {key: as_cyclotomic(coef)})

    @classmethod
    def one(cls, ctx: AlgebraContext) -> Element:
        return cls(ctx, {ctx.one_key(): Cyclotomic.from_rational(1)})

    @classmethod
    def zero(cls, ctx: AlgebraContext) -> Element:
        return cls(ctx, {})

    def _new(self, terms: Mapping) -> Element:
        return Element(self.ctx, terms)

    def format_key(self, key: Key) -> str:
        return self.ctx.format_key(key)

    def __mul__(self, other: object) -> Element:
        if isinstance(other, Element):
            self._compatible(other)
            return Element(self.ctx, multiply_terms(self.ctx, 1, self.terms, other.terms))
        if isinstance(other, (Cyclotomic, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: object) -> Element:
        if isinstance(other, (Cyclotomic, int)):
            return self.scale(other)
        return NotImplemented

    def counit(self) -> Cyclotomic:
        total = Cyclotomic.from_rational(0)
        for k, v in self.terms.items():
            e = self.ctx.counit_basis(k)
            if e:
                total = total + v * e
        return total

    def coproduct(self) -> TensorElement:
        """Linear extension of the context coproduct."""
        acc: dict = {}
        for k, v in self.terms.items():
            for pair, c in self.ctx.coproduct_basis(k).items():
                _accumulate(acc, pair, v * c)
        return TensorElement(self.ctx, 2, acc)

    def power(self, n: int) -> Element:
        result = Element.one(self.ctx)
        for _ in range(n):
            result = result * self
        return result


class TensorElement(_SparseBase):
    """
    A sparse element of the k-fold tensor power of a context.

    Products use the context braiding: for basis tensors, every leg of the
    right factor moves past each later leg of the left factor and picks up
    ``ctx.braiding(left_leg, right_leg)``.  Unbraided contexts skip this.
    """

    __slots__ = ("arity",)

    def __init__(self, ctx: AlgebraContext, arity: int, terms: Mapping | None = None) -> None:
        super().__init__(ctx, terms)
        self.arity = arity
        for key in self.terms:
            if len(key) != arity:
                raise ValueError(f"Tensor key {key!r} does not have arity {arity}")

    @classmethod
    def one(cls, ctx: AlgebraContext, arity: int = 2) -> TensorElement:
        return cls(ctx, arity, {(ctx.one_key(),) * arity: Cyclotomic.from_rational(1)})

    @classmethod
    def pure(cls, *elements: Element) -> TensorElement:
        """The tensor e_1 (x) ... (x) e_k of elements of one context."""
        ctx = elements[0].ctx
        acc: dict = {}
        for combo in cartesian(*(e.terms.items() for e in elements)):
            coef = Cyclotomic.from_rational(1)
            for _, c in combo:
                coef = coef * c
            _accumulate(acc, tuple(k for k, _ in combo), coef)
        return cls(ctx, len(elements), acc)

    def _new(self, terms: Mapping) -> TensorElement:
        return TensorElement(self.ctx, self.arity, terms)

    def _compatible(self, other: _SparseBase) -> None:
        super()._compatible(other)
        if other.arity != self.arity:  # type: ignore[attr-defined]
            raise ValueError(f"Arity mismatch: {self.arity} vs {other.arity}")  # type: ignore[attr-defined]

    def format_key(self, key: Key) -> str:
        return " ⊗ ".join(self.ctx.format_key(k) for k in key)

    def __mul__(self, other: object) -> TensorElement:
        if isinstance(other, TensorElement):
            self._compatible(other)
            return TensorElement(self.ctx, self.arity, multiply_terms(self.ctx, self.arity, self.terms, other.terms))
        if isinstance(other, (Cyclotomic, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: object) -> TensorElement:
        if isinstance(other, (Cyclotomic, int)):
            return self.scale(other)
        return NotImplemented

    def is_one(self) -> bool:
        return self == TensorElement.one(self.ctx, self.arity)

    def apply_coproduct(self, leg: int) -> TensorElement:
        """Apply Delta to leg ``leg``, producing arity + 1."""
        acc: dict = {}
        for key, v in self.terms.items():
            for pair, c in self.ctx.coproduct_basis(key[leg]).items():
                _accumulate(acc, key[:leg] + pair + key[leg + 1 :], v * c)
        return TensorElement(self.ctx, self.arity + 1, acc)

    def apply_counit(self, leg: int) -> TensorElement | Element:
        """Apply epsilon to leg ``leg``; arity 2 collapses to an ``Element``."""
        acc: dict = {}
        for key, v in self.terms.items():
            e = self.ctx.counit_basis(key[leg])
            if e:
                _accumulate(acc, key[:leg] + key[leg + 1 :], v * e)
        if self.arity == 2:
            return Element(self.ctx, {k[0]: v for k, v in acc.items()})
        return TensorElement(self.ctx, self.arity - 1, acc)

    def extend(self, position: int) -> TensorElement:
        """Insert a unit leg at ``position`` (e.g. J (x) 1 is ``extend(2)``)."""
        one = self.ctx.one_key()
        return TensorElement(
            self.ctx,
            self.arity + 1,
            {key[:position] + (one,) + key[position:]: v for key, v in self.terms.items()},
        )

    def power(self, n: int) -> TensorElement:
        result = TensorElement.one(self.ctx, self.arity)
        for _ in range(n):
            result = result * self
        return result


def multiply_terms(ctx: AlgebraContext, arity: int, left: Mapping, right: Mapping) -> dict:
    """
    Product of two sparse term maps in the ``arity``-fold tensor power.

    Arity 1 keys are bare basis keys; higher arities use key tuples.
    """
    acc: dict = {}
    mult = ctx.multiply_basis
    braided = ctx.braided and arity > 1
    conductor = ctx.conductor
    for lk, lc in left.items():
        for rk, rc in right.items():
            if arity == 1:
                legs = (mult(lk, rk),)
                exponent = 0
            else:
                legs = tuple(mult(lk[p], rk[p]) for p in range(arity))
                if not all(legs):
                    continue
                exponent = 0
                if braided:
                    for p in range(1, arity):
                        for q in range(p):
                            exponent += ctx.braiding(lk[p], rk[q])
            if not legs[0]:
                continue
            base = lc * rc
            for combo in cartesian(*legs):
                e = exponent
                coef = base
                for _, s in combo:
                    if isinstance(s, int):
                        e += s
                    else:
                        coef = coef * s
                e %= conductor
                if e:
                    coef = coef * Cyclotomic.root(conductor, e)
                key = combo[0][0] if arity == 1 else tuple(k for k, _ in combo)
                _accumulate(acc, key, coef)
    return _clean(acc)


def invert_unipotent(u: Element | TensorElement, max_steps: int = 4096) -> Element | TensorElement:
    """
    Inverse of u = 1 + n with n nilpotent: sum_k (-n)^k.

    Raises:
        NilpotencyError: If u - 1 is not nilpotent within ``max_steps``.
    """
    one = TensorElement.one(u.ctx, u.arity) if isinstance(u, TensorElement) else Element.one(u.ctx)
    minus_n = one - u
    result = one
    term = one
    for _ in range(max_steps):
        term = term * minus_n
        if term.is_zero():
            return result
        result = result + term
    raise NilpotencyError(f"Element minus one is not nilpotent within {max_steps} steps")


def invert_by_elimination(u: Element | TensorElement) -> Element | TensorElement:
    """
    Exact inverse by solving u * y = 1 over the full (tensor) basis.

    Raises:
        ZeroDivisionError: If u is not invertible.
    """
    ctx = u.ctx
    if isinstance(u, TensorElement):
        keys = list(cartesian(*(ctx.basis() for _ in range(u.arity))))
        make = lambda terms: TensorElement(ctx, u.arity, terms)  # noqa: E731
        one = TensorElement.one(ctx, u.arity)
    else:
        keys = list(ctx.basis())
        make = lambda terms: Element(ctx, terms)  # noqa: E731
        one = Element.one(ctx)
    index = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    # column c of the matrix is u * basis[c]
    rows = [[Cyclotomic.from_rational(0)] * (n + 1) for _ in range(n)]
    for c, key in enumerate(keys):
        column = u * make({key: 1})
        for k, v in column.terms.items():
            rows[index[k]][c] = v
    rows[index[one.sorted_terms()[0][0]]][n] = Cyclotomic.from_rational(1)
    solution = solve_linear(rows)
    inverse = make({keys[i]: v for i, v in enumerate(solution)})
    if not (inverse * u == one):
        raise ZeroDivisionError("Left and right inverses disagree")
    return inverse


def solve_linear(augmented: list[list[Cyclotomic]]) -> list[Cyclotomic]:
    """
    Gauss-Jordan elimination on a square augmented system.

    Raises:
        ZeroDivisionError: If the system is singular.
    """
    n = len(augmented)
    rows = [list(r) for r in augmented]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not rows[r][col].is_zero()), None)
        if pivot is None:
            raise ZeroDivisionError(f"Singular system at column {col}")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and not rows[r][col].is_zero():
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


def terms_from_pairs(pairs: Iterable[tuple[Key, Scalar]]) -> dict:
    """Accumulate ``(key, scalar)`` pairs into a term map."""
    acc: dict = {}
    for key, value in pairs:
        _accumulate(acc, key, as_cyclotomic(value))
    return _clean(acc)
