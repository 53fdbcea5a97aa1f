"""
Exact Cyclotomic Arithmetic and q-Combinatorics.

Every structure constant handled by twistlab lives in a cyclotomic field
Q(zeta_n).  An element is stored as a polynomial in ``z = zeta_n`` of degree
below phi(n), reduced modulo the n-th cyclotomic polynomial, with integer
numerators over one positive common denominator.  Arithmetic between
different conductors promotes both operands to the least common conductor,
up to a configurable cap.

On top of the field sits the q-combinatorics layer: q-integers,
q-factorials, Gaussian binomials and the q-binomial identity used by the
one-dimensional twists.

Key Concepts Demonstrated:
- Immutable value objects with ``__slots__`` and operator overloading
- Per-conductor caches (``lru_cache``) for power and discrete-log tables
- Galois-norm inversion (no floating point anywhere)
- sympy for cyclotomic polynomials and Euler's totient
"""

from __future__ import annotations

import logging
import math
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from .errors import ConductorOverflowError, QFactorialVanishesError

logger = logging.getLogger(__name__)

DEFAULT_CONDUCTOR_LIMIT = 360

_conductor_limit = DEFAULT_CONDUCTOR_LIMIT

_LITERAL_RE = re.compile(r"^\s*(?P<body>.*?)\s*(?:\(\s*conductor\s+(?P<n>\d+)\s*\))?\s*$")


def set_conductor_limit(limit: int) -> None:
    """Set the largest conductor that implicit promotion may reach."""
    global _conductor_limit
    if limit < 1:
        raise ValueError(f"Conductor limit must be positive, got {limit}")
    _conductor_limit = limit


def conductor_limit() -> int:
    """Return the active conductor cap."""
    return _conductor_limit


class CyclotomicField:
    """
    The field Q(zeta_n) with its reduction data.

    Attributes:
        conductor: n.
        degree: phi(n), the length of every coefficient vector.
        modulus: low-order coefficients of the monic n-th cyclotomic
            polynomial (the leading 1 is implicit).
    """

    __slots__ = ("conductor", "degree", "modulus", "_powers", "_logs", "_roots", "_units")

    def __init__(self, n: int) -> None:
        x = sympy.Symbol("x")
        low_to_high = [int(c) for c in reversed(sympy.cyclotomic_poly(n, x, polys=True).all_coeffs())]
        self.conductor = n
        self.degree = int(sympy.totient(n))
        self.modulus = tuple(low_to_high[:-1])

        powers: list[tuple[int, ...]] = []
        vec = [0] * self.degree
        vec[0] = 1
        for _ in range(n):
            powers.append(tuple(vec))
            vec = self._times_z(vec)
        self._powers = tuple(powers)
        self._logs = {power: k for k, power in enumerate(powers)}
        self._roots: dict[int, Cyclotomic] = {}
        self._units = tuple(k for k in range(1, n + 1) if math.gcd(k, n) == 1)

    def _times_z(self, vec: list[int]) -> list[int]:
        top = vec[-1]
        shifted = [0] + vec[:-1]
        if top:
            for t, m in enumerate(self.modulus):
                shifted[t] -= top * m
        return shifted

    def reduce(self, poly: list[int]) -> list[int]:
        """Reduce an integer polynomial (low-to-high) modulo the cyclotomic polynomial."""
        d = self.degree
        if len(poly) <= d:
            return poly + [0] * (d - len(poly))
        for deg in range(len(poly) - 1, d - 1, -1):
            c = poly[deg]
            if c:
                base = deg - d
                for t, m in enumerate(self.modulus):
                    if m:
                        poly[base + t] -= c * m
                poly[deg] = 0
        return poly[:d]

    def power_vector(self, k: int) -> tuple[int, ...]:
        """Return the reduced coefficient vector of zeta_n**k."""
        return self._powers[k % self.conductor]

    def discrete_log(self, vec: tuple[int, ...]) -> int | None:
        """Return k with zeta_n**k == vec, or None when vec is not a root of unity."""
        return self._logs.get(vec)

    def root(self, k: int) -> Cyclotomic:
        """Return zeta_n**k as a cached ``Cyclotomic``."""
        k %= self.conductor
        cached = self._roots.get(k)
        if cached is None:
            cached = Cyclotomic._make(self, list(self._powers[k]), 1)
            self._roots[k] = cached
        return cached

    @property
    def galois_units(self) -> tuple[int, ...]:
        """Exponents k coprime to n, indexing the Galois automorphisms."""
        return self._units


@lru_cache(maxsize=None)
def _field(n: int) -> CyclotomicField:
    logger.debug("Building cyclotomic field tables for conductor %d", n)
    return CyclotomicField(n)


def cyclotomic_field(n: int) -> CyclotomicField:
    """
    Return the cached field Q(zeta_n).

    Raises:
        ValueError: If ``n`` is not positive.
        ConductorOverflowError: If ``n`` exceeds the configured limit.
    """
    if n < 1:
        raise ValueError(f"Conductor must be positive, got {n}")
    if n > _conductor_limit:
        raise ConductorOverflowError(
            f"Conductor {n} exceeds the configured limit {_conductor_limit}"
        )
    return _field(n)


def _common(a: Cyclotomic, b: Cyclotomic) -> tuple[Cyclotomic, Cyclotomic]:
    if a._field is b._field:
        return a, b
    n = math.lcm(a._field.conductor, b._field.conductor)
    return a.promote(n), b.promote(n)


class Cyclotomic:
    """
    An exact element of Q(zeta_n).

    Values are immutable.  Equality is exact and works across conductors;
    instances are unhashable because equal values may carry different
    conductors.  Use ``key()`` for a hashable canonical-in-conductor key.
    """

    __slots__ = ("_field", "_num", "_den")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, coeffs: Iterable[int | Fraction | str] = (), conductor: int = 1) -> None:
        fld = cyclotomic_field(conductor)
        fractions = [Fraction(c) for c in coeffs]
        den = math.lcm(*(f.denominator for f in fractions)) if fractions else 1
        poly = [0] * fld.degree
        for i, f in enumerate(fractions):
            if f:
                scaled = f.numerator * (den // f.denominator)
                for t, c in enumerate(fld.power_vector(i)):
                    if c:
                        poly[t] += scaled * c
        self._field, self._num, self._den = Cyclotomic._normalise(fld, poly, den)

    @staticmethod
    def _normalise(fld: CyclotomicField, num: list[int], den: int) -> tuple:
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = math.gcd(den, *num)
        if g == 0 or not any(num):
            return fld, (0,) * fld.degree, 1
        if g != 1:
            num = [c // g for c in num]
            den //= g
        return fld, tuple(num), den

    @classmethod
    def _make(cls, fld: CyclotomicField, num: list[int], den: int) -> Cyclotomic:
        obj = object.__new__(cls)
        obj._field, obj._num, obj._den = cls._normalise(fld, num, den)
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, value: int | Fraction, conductor: int = 1) -> Cyclotomic:
        """Embed an integer or rational into Q(zeta_n)."""
        fld = cyclotomic_field(conductor)
        value = Fraction(value)
        num = [0] * fld.degree
        num[0] = value.numerator
        return cls._make(fld, num, value.denominator)

    @classmethod
    def root(cls, n: int, k: int = 1) -> Cyclotomic:
        """Return zeta_n**k."""
        return cyclotomic_field(n).root(k)

    @classmethod
    def parse(cls, text: str) -> Cyclotomic:
        """
        Parse the literal form ``c0 + c1*z^1 + ... (conductor n)``.

        Bare ``z^k`` terms (coefficient 1), ``-z^k`` and literals without a
        conductor suffix (rationals) are also accepted.  Exponents at or
        above phi(n) are reduced.

        Raises:
            ValueError: If the literal is malformed.
        """
        match = _LITERAL_RE.match(text)
        if match is None:
            raise ValueError(f"Invalid cyclotomic literal: {text!r}")
        n = int(match.group("n")) if match.group("n") else 1
        body = match.group("body")
        if not body:
            raise ValueError(f"Invalid cyclotomic literal: {text!r}")
        fld = cyclotomic_field(n)
        acc = [Fraction(0)] * fld.degree
        for raw_term in body.split("+"):
            term = raw_term.strip().replace(" ", "")
            if not term:
                raise ValueError(f"Empty term in cyclotomic literal: {text!r}")
            coef_text, has_z, power_text = term.partition("z")
            coef_text = coef_text.rstrip("*")
            try:
                if coef_text in ("", "+"):
                    coef = Fraction(1)
                elif coef_text == "-":
                    coef = Fraction(-1)
                else:
                    coef = Fraction(coef_text)
                if not has_z:
                    power = 0
                elif power_text == "":
                    power = 1
                elif power_text.startswith("^"):
                    power = int(power_text[1:])
                else:
                    raise ValueError(power_text)
            except ValueError as exc:
                raise ValueError(f"Invalid term {raw_term.strip()!r} in {text!r}") from exc
            for t, c in enumerate(fld.power_vector(power)):
                if c:
                    acc[t] += coef * c
        den = math.lcm(*(f.denominator for f in acc))
        return cls._make(fld, [f.numerator * (den // f.denominator) for f in acc], den)

    # -- inspection ---------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self._field.conductor

    @property
    def field(self) -> CyclotomicField:
        return self._field

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Reduced coefficients in the power basis 1, z, ..., z^(phi(n)-1)."""
        return tuple(Fraction(c, self._den) for c in self._num)

    def key(self) -> tuple[int, tuple[int, ...], int]:
        """Hashable key, canonical within one conductor."""
        return (self._field.conductor, self._num, self._den)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def root_exponent(self) -> int | None:
        """Return k with self == zeta_n**k, or None if self is not a root of unity."""
        if self._den != 1:
            return None
        return self._field.discrete_log(self._num)

    def multiplicative_order(self) -> int | None:
        """Order of self as a root of unity, or None."""
        k = self.root_exponent()
        n = self._field.conductor
        if k is None:
            # -zeta_n^j for odd n is a root of unity only in Q(zeta_2n)
            if n % 2 == 0 or self._den != 1:
                return None
            n *= 2
            k = self.promote(n).root_exponent()
            if k is None:
                return None
        return n // math.gcd(n, k)

    # -- conversions --------------------------------------------------------

    def promote(self, n: int) -> Cyclotomic:
        """
        Re-express self in Q(zeta_n).

        Raises:
            ValueError: If the current conductor does not divide ``n``.
        """
        m = self._field.conductor
        if n == m:
            return self
        if n % m:
            raise ValueError(f"Cannot promote conductor {m} to {n}")
        target = cyclotomic_field(n)
        step = n // m
        out = [0] * target.degree
        for i, c in enumerate(self._num):
            if c:
                for t, p in enumerate(target.power_vector(i * step)):
                    if p:
                        out[t] += c * p
        return Cyclotomic._make(target, out, self._den)

    def _coerce(self, other: object) -> Cyclotomic | None:
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(other, self._field.conductor)
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: object) -> Cyclotomic:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        a, b = _common(self, rhs)
        if a._den == b._den:
            return Cyclotomic._make(a._field, [x + y for x, y in zip(a._num, b._num)], a._den)
        return Cyclotomic._make(
            a._field,
            [x * b._den + y * a._den for x, y in zip(a._num, b._num)],
            a._den * b._den,
        )

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic._make(self._field, [-c for c in self._num], self._den)

    def __sub__(self, other: object) -> Cyclotomic:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> Cyclotomic:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> Cyclotomic:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        a, b = _common(self, rhs)
        fld = a._field
        if b.is_rational():
            s = b._num[0]
            return Cyclotomic._make(fld, [c * s for c in a._num], a._den * b._den)
        if a.is_rational():
            s = a._num[0]
            return Cyclotomic._make(fld, [c * s for c in b._num], a._den * b._den)
        prod = [0] * (2 * fld.degree - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic._make(fld, fld.reduce(prod), a._den * b._den)

    __rmul__ = __mul__

    def galois(self, k: int) -> Cyclotomic:
        """Apply the automorphism zeta_n -> zeta_n**k (k coprime to n)."""
        fld = self._field
        out = [0] * fld.degree
        for i, c in enumerate(self._num):
            if c:
                for t, p in enumerate(fld.power_vector(i * k)):
                    if p:
                        out[t] += c * p
        return Cyclotomic._make(fld, out, self._den)

    def inverse(self) -> Cyclotomic:
        """
        Multiplicative inverse via the Galois norm.

        Raises:
            ZeroDivisionError: If self is zero.
        """
        if self.is_zero():
            raise ZeroDivisionError(f"Division by zero in Q(zeta_{self.conductor})")
        fld = self._field
        if self.is_rational():
            num = [0] * fld.degree
            num[0] = self._den
            return Cyclotomic._make(fld, num, self._num[0])
        k = self.root_exponent()
        if k is not None:
            return fld.root(-k)
        conjugates = Cyclotomic.from_rational(1, fld.conductor)
        for unit in fld.galois_units:
            if unit % fld.conductor != 1:
                conjugates = conjugates * self.galois(unit)
        norm = self * conjugates
        # norm is rational by construction
        return conjugates * Fraction(norm._den, norm._num[0])

    def __truediv__(self, other: object) -> Cyclotomic:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self * rhs.inverse()

    def __rtruediv__(self, other: object) -> Cyclotomic:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs * self.inverse()

    def __pow__(self, exponent: int) -> Cyclotomic:
        k = self.root_exponent()
        if k is not None:
            return self._field.root(k * exponent)
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Cyclotomic.from_rational(1, self._field.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        a, b = _common(self, rhs)
        return a._num == b._num and a._den == b._den

    # -- text form ----------------------------------------------------------

    def to_text(self) -> str:
        """Canonical literal, e.g. ``-1 + 1*z^1 (conductor 6)``."""
        terms = []
        for i, c in enumerate(self._num):
            if c:
                coef = Fraction(c, self._den)
                terms.append(str(coef) if i == 0 else f"{coef}*z^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} (conductor {self._field.conductor})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Cyclotomic({self.to_text()!r})"


Scalar = Cyclotomic | int | Fraction


def as_cyclotomic(value: Scalar | str) -> Cyclotomic:
    """Coerce ints, Fractions and literals to ``Cyclotomic``."""
    if isinstance(value, Cyclotomic):
        return value
    if isinstance(value, str):
        return Cyclotomic.parse(value)
    return Cyclotomic.from_rational(value)


ONE = Cyclotomic.from_rational(1)
ZERO = Cyclotomic.from_rational(0)


def primitive_roots(n: int) -> list[Cyclotomic]:
    """All primitive n-th roots of unity, ordered by exponent."""
    return [Cyclotomic.root(n, k) for k in range(1, n + 1) if math.gcd(k, n) == 1]


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

_PASCAL_CACHE: dict[tuple, list[list[Cyclotomic]]] = {}


def q_int(n: int, q: Cyclotomic) -> Cyclotomic:
    """The q-integer (n)_q = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise ValueError(f"q-integers need n >= 0, got {n}")
    total = Cyclotomic.from_rational(0, q.conductor)
    power = Cyclotomic.from_rational(1, q.conductor)
    for _ in range(n):
        total = total + power
        power = power * q
    return total


def q_int_vanishes(n: int, q: Cyclotomic) -> bool:
    """Return whether (n)_q is zero, using the order of q when it is a root of unity."""
    order = q.multiplicative_order()
    if order is not None:
        return order > 1 and n > 0 and n % order == 0
    return q_int(n, q).is_zero()


def q_factorial(n: int, q: Cyclotomic) -> Cyclotomic:
    """The q-factorial (n)!_q = (1)_q (2)_q ... (n)_q."""
    result = Cyclotomic.from_rational(1, q.conductor)
    for m in range(1, n + 1):
        result = result * q_int(m, q)
    return result


def _pascal_rows(n: int, q: Cyclotomic) -> list[list[Cyclotomic]]:
    cache_key = q.key()
    rows = _PASCAL_CACHE.get(cache_key)
    if rows is None:
        rows = [[Cyclotomic.from_rational(1, q.conductor)]]
    if len(rows) <= n:
        rows = list(rows)
        powers = [q**t for t in range(n + 1)]
        while len(rows) <= n:
            prev = rows[-1]
            m = len(rows)
            row = [prev[0]]
            for t in range(1, m):
                row.append(prev[t - 1] + powers[t] * prev[t])
            row.append(prev[-1])
            rows.append(row)
        _PASCAL_CACHE[cache_key] = rows
    return rows


def q_binomial(n: int, k: int, q: Cyclotomic) -> Cyclotomic:
    """
    Gaussian binomial (n choose k)_q = (n)!_q / ((n-k)!_q (k)!_q).

    The value is produced by the Pascal recurrence, which agrees with the
    factorial quotient whenever the denominator is nonzero.

    Raises:
        ValueError: If not ``0 <= k <= n``.
        QFactorialVanishesError: If a q-integer in the denominator is zero.
    """
    if not 0 <= k <= n:
        raise ValueError(f"q_binomial needs 0 <= k <= n, got n={n}, k={k}")
    for m in range(1, max(k, n - k) + 1):
        if q_int_vanishes(m, q):
            raise QFactorialVanishesError(
                f"({m})_q vanishes for q = {q}; ({n} choose {k})_q is out of range"
            )
    return _pascal_rows(n, q)[n][k]


def _require_primitive(n: int, q: Cyclotomic) -> None:
    if n <= 1:
        raise ValueError(f"N must exceed 1, got {n}")
    if q.multiplicative_order() != n:
        raise ValueError(f"q = {q} is not a primitive {n}-th root of unity")


def q_binomial_identity_sum(n: int, q: Cyclotomic, a: int, i: int, j: int) -> Cyclotomic:
    """
    Evaluate sum_{k=0..a} q^(k(k-j)) (j choose k)_q (i choose a-k)_q.

    Raises:
        ValueError: On any precondition violation; the message names the
            offending index.
    """
    _require_primitive(n, q)
    for label, value in (("a", a), ("i", i), ("j", j)):
        if not 0 <= value < n:
            raise ValueError(f"Index {label}={value} outside 0..{n - 1}")
    if i + j != n + a:
        raise ValueError(f"Indices violate i + j = N + a: i={i}, j={j}, N={n}, a={a}")
    total = Cyclotomic.from_rational(0, q.conductor)
    for k in range(a + 1):
        if k > j or a - k > i:
            continue
        total = total + (q ** (k * (k - j))) * q_binomial(j, k, q) * q_binomial(i, a - k, q)
    return total


def q_binomial_identity_check(n: int, q: Cyclotomic, a: int, i: int, j: int) -> bool:
    """Return whether the q-binomial identity sum equals 1."""
    return q_binomial_identity_sum(n, q, a, i, j) == 1


@dataclass
class SweepResult:
    """Outcome of the exhaustive q-binomial identity sweep."""

    max_n: int
    checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def q_identity_sweep(max_n: int, roots: Sequence[int] | None = None) -> SweepResult:
    """
    Check the q-binomial identity for every N in 2..max_n, every primitive
    N-th root and every admissible (a, i, j).

    Args:
        max_n: Largest N to sweep.
        roots: Optional restriction of the exponents k of zeta_N^k.

    Returns:
        A ``SweepResult`` with the number of checked instances and the
        failing instances, if any.
    """
    result = SweepResult(max_n=max_n)
    for n in range(2, max_n + 1):
        for k in range(1, n):
            if math.gcd(k, n) != 1 or (roots is not None and k not in roots):
                continue
            q = Cyclotomic.root(n, k)
            for i in range(n):
                for j in range(n):
                    a = i + j - n
                    if not 0 <= a < n:
                        continue
                    result.checked += 1
                    if not q_binomial_identity_check(n, q, a, i, j):
                        result.failures.append({"N": n, "root": k, "a": a, "i": i, "j": j})
    logger.info("q-binomial identity sweep up to N=%d: %d instances", max_n, result.checked)
    return result
