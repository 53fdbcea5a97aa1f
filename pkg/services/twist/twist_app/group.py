"""
Finite Groups, Subgroups, Cosets and Exact Characters.

Groups are extensional: a validated Cayley table with index 0 as the
identity.  Every check downstream (centrality, cosets, character
multiplicativity) is a brute-force scan over element indices, which is
exact and cheap at desk scale.

Key Concepts Demonstrated:
- Validating factories (``group_from_spec``) that fail loudly on axiom violations
- Light's associativity test over a generating set instead of all m^3 triples
- Characters stored as full value vectors, checked through discrete logs
- Enumeration of the character group of an abelian subgroup
"""

from __future__ import annotations

import logging
import math
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from itertools import product as cartesian

from .errors import ConductorOverflowError, GroupAxiomError
from .scalar import Cyclotomic, as_cyclotomic

logger = logging.getLogger(__name__)

MAX_GROUP_ORDER = 512


class FiniteGroup:
    """
    A finite group given by its Cayley table.

    Attributes:
        order: Number of elements m.
        table: m x m tuple of product indices, ``table[a][b] = a*b``.
        identity: Always 0.
        inv: Two-sided inverse of each element.
        labels: Display names of the elements.
    """

    __slots__ = ("order", "table", "identity", "inv", "labels", "name", "_orders", "_abelian")

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        labels: Sequence[str] | None = None,
        name: str | None = None,
    ) -> None:
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        self.order = len(self.table)
        self.identity = 0
        self.name = name or f"table[{self.order}]"
        self.labels = tuple(labels) if labels is not None else tuple(f"g{a}" for a in range(self.order))
        _validate_table(self.table)
        self.inv = tuple(self.table[a].index(0) for a in range(self.order))
        for a, b in enumerate(self.inv):
            if self.table[b][a] != 0:
                raise GroupAxiomError(f"Element {a} has no two-sided inverse")
        _check_associative(self.table, _table_generators(self.table))
        self._orders: dict[int, int] = {}
        self._abelian: bool | None = None

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def power(self, a: int, k: int) -> int:
        """Return a**k for any integer k."""
        if k < 0:
            a, k = self.inv[a], -k
        result = 0
        for _ in range(k % self.element_order(a)):
            result = self.table[result][a]
        return result

    def element_order(self, a: int) -> int:
        cached = self._orders.get(a)
        if cached is None:
            cached, current = 1, a
            while current != 0:
                current = self.table[current][a]
                cached += 1
            self._orders[a] = cached
        return cached

    def exponent(self) -> int:
        return math.lcm(*(self.element_order(a) for a in range(self.order)))

    def commutes(self, a: int, b: int) -> bool:
        return self.table[a][b] == self.table[b][a]

    def is_central(self, a: int) -> bool:
        return all(self.commutes(a, b) for b in range(self.order))

    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = all(
                self.table[a][b] == self.table[b][a]
                for a in range(self.order)
                for b in range(a + 1, self.order)
            )
        return self._abelian

    def label(self, a: int) -> str:
        return self.labels[a]

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def _validate_table(table: tuple[tuple[int, ...], ...]) -> None:
    m = len(table)
    if m == 0:
        raise GroupAxiomError("Cayley table is empty")
    if m > MAX_GROUP_ORDER:
        raise GroupAxiomError(f"Group order {m} exceeds the cap {MAX_GROUP_ORDER}")
    full = set(range(m))
    for a, row in enumerate(table):
        if len(row) != m:
            raise GroupAxiomError(f"Row {a} has length {len(row)}, expected {m}")
        if set(row) != full:
            raise GroupAxiomError(f"Row {a} is not a permutation of 0..{m - 1}")
    for b in range(m):
        if {table[a][b] for a in range(m)} != full:
            raise GroupAxiomError(f"Column {b} is not a permutation of 0..{m - 1}")
    for a in range(m):
        if table[0][a] != a or table[a][0] != a:
            raise GroupAxiomError(f"Index 0 is not an identity (fails on element {a})")


def _closure(table: tuple[tuple[int, ...], ...], gens: Iterable[int]) -> set[int]:
    gens = list(gens)
    span = {0, *gens}
    queue = deque(span)
    while queue:
        a = queue.popleft()
        for g in gens:
            for b in (table[a][g], table[g][a]):
                if b not in span:
                    span.add(b)
                    queue.append(b)
    return span


def _table_generators(table: tuple[tuple[int, ...], ...]) -> list[int]:
    gens: list[int] = []
    span = {0}
    for a in range(len(table)):
        if a not in span:
            gens.append(a)
            span = _closure(table, gens)
    return gens


def _check_associative(table: tuple[tuple[int, ...], ...], gens: Sequence[int]) -> None:
    # Middle elements satisfying (xa)y = x(ay) are closed under products,
    # so checking a generating set covers every triple.
    m = len(table)
    for s in gens:
        row_s = table[s]
        for x in range(m):
            row_x = table[x]
            row_xs = table[row_x[s]]
            for y in range(m):
                if row_xs[y] != row_x[row_s[y]]:
                    raise GroupAxiomError(
                        f"Table is not associative: ({x}*{s})*{y} != {x}*({s}*{y})"
                    )


def cyclic_group(n: int) -> FiniteGroup:
    """Z_n = <h> with element k labelled h^k."""
    if n < 1:
        raise ValueError(f"Cyclic group order must be positive, got {n}")
    labels = ["e", "h"] + [f"h^{k}" for k in range(2, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, labels=labels[:n], name=f"Z{n}")


def product_group(orders: Sequence[int]) -> FiniteGroup:
    """Z_n1 x ... x Z_nk with lexicographic element order (first factor slowest)."""
    if not orders or any(n < 1 for n in orders):
        raise ValueError(f"Product orders must be positive, got {list(orders)}")
    elements = list(cartesian(*(range(n) for n in orders)))
    index = {e: k for k, e in enumerate(elements)}
    table = [
        [index[tuple((x + y) % n for x, y, n in zip(a, b, orders))] for b in elements]
        for a in elements
    ]
    labels = ["(" + ",".join(map(str, e)) + ")" for e in elements]
    return FiniteGroup(table, labels=labels, name="x".join(f"Z{n}" for n in orders))


def group_from_table(table: Sequence[Sequence[int]]) -> FiniteGroup:
    """Validate an explicit Cayley table (0-based, index 0 is the identity)."""
    return FiniteGroup(table)


def group_from_spec(spec: Mapping) -> FiniteGroup:
    """
    Build a group from its config description.

    Args:
        spec: Exactly one of ``{"cyclic": n}``, ``{"product": [n1, ...]}``
            or ``{"table": [[...], ...]}``.

    Returns:
        The validated ``FiniteGroup``.

    Raises:
        ValueError: If the description has the wrong shape.
        GroupAxiomError: If the resulting table violates a group axiom.
    """
    kinds = [k for k in ("cyclic", "product", "table") if k in spec]
    if len(kinds) != 1:
        raise ValueError(f"Group spec needs exactly one of cyclic/product/table, got {sorted(spec)}")
    kind = kinds[0]
    if kind == "cyclic":
        group = cyclic_group(int(spec["cyclic"]))
    elif kind == "product":
        group = product_group([int(n) for n in spec["product"]])
    else:
        group = group_from_table(spec["table"])
    logger.debug("Built %r", group)
    return group


class Subgroup:
    """
    A subgroup of a ``FiniteGroup`` given by its sorted member indices.

    Attributes:
        parent: The ambient group.
        members: Sorted member indices (identity first).
    """

    __slots__ = ("parent", "members", "_set")

    def __init__(self, parent: FiniteGroup, members: Iterable[int]) -> None:
        self.parent = parent
        self.members = tuple(sorted(set(members)))
        self._set = frozenset(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, a: object) -> bool:
        return a in self._set

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def is_closed(self) -> bool:
        table, inv = self.parent.table, self.parent.inv
        if 0 not in self._set:
            return False
        return all(
            table[a][b] in self._set for a in self.members for b in self.members
        ) and all(inv[a] in self._set for a in self.members)

    def is_abelian(self) -> bool:
        return all(self.parent.commutes(a, b) for a in self.members for b in self.members)

    def is_central(self) -> bool:
        return all(self.parent.is_central(a) for a in self.members)

    def issubset(self, other: Subgroup) -> bool:
        return self._set <= other._set

    def generators(self) -> list[int]:
        """A greedy generating set, scanning members in index order."""
        gens: list[int] = []
        span = {0}
        for a in self.members:
            if a not in span:
                gens.append(a)
                span = _closure(self.parent.table, gens)
        return gens

    def coset(self, s: int) -> list[int]:
        """The left coset s*members, aligned with ``members``."""
        return [self.parent.table[s][g] for g in self.members]

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, members={list(self.members)})"


def subgroup_generated(group: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """
    The smallest subgroup containing ``gens``.

    Raises:
        ValueError: If ``gens`` is empty or holds an invalid index.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("subgroup_generated needs at least one generator")
    for g in gens:
        if not 0 <= g < group.order:
            raise ValueError(f"Generator index {g} outside 0..{group.order - 1}")
    return Subgroup(group, _closure(group.table, gens))


def subgroup_from_members(group: FiniteGroup, members: Iterable[int]) -> Subgroup:
    """
    Wrap an explicit member list, checking closure.

    Raises:
        GroupAxiomError: If the members do not form a subgroup.
    """
    members = list(members)
    for a in members:
        if not 0 <= a < group.order:
            raise GroupAxiomError(f"Member index {a} outside 0..{group.order - 1}")
    sub = Subgroup(group, members)
    if not sub.is_closed():
        raise GroupAxiomError(f"Members {sorted(set(members))} do not form a subgroup")
    return sub


def coset_representatives(group: FiniteGroup, sub: Subgroup) -> list[int]:
    """
    One representative per left coset s*sub, lowest index first.

    The identity represents the subgroup itself.

    Raises:
        GroupAxiomError: If ``sub`` is not a subgroup of ``group``.
    """
    if sub.parent is not group or not sub.is_closed():
        raise GroupAxiomError("coset_representatives needs a subgroup of the given group")
    if not sub.is_central():
        logger.warning("Subgroup is not central; using left cosets")
    covered: set[int] = set()
    reps: list[int] = []
    for a in range(group.order):
        if a not in covered:
            reps.append(a)
            covered.update(sub.coset(a))
    return reps


class Character:
    """
    A multiplicative map from a group (or subgroup) to roots of unity.

    Attributes:
        group: Ambient ``FiniteGroup``.
        members: Element indices in the domain (all of ``group`` by default).
        values: One ``Cyclotomic`` per member, aligned with ``members``.
    """

    __slots__ = ("group", "members", "values", "_position", "_exponents")
    __hash__ = None  # type: ignore[assignment]

    def __init__(
        self,
        group: FiniteGroup,
        values: Sequence[Cyclotomic | int | str],
        members: Sequence[int] | None = None,
    ) -> None:
        self.group = group
        self.members = tuple(members) if members is not None else tuple(range(group.order))
        if len(values) != len(self.members):
            raise ValueError(
                f"Character needs {len(self.members)} values, got {len(values)}"
            )
        self.values = tuple(as_cyclotomic(v) for v in values)
        self._position = {a: k for k, a in enumerate(self.members)}
        self._exponents: dict[int, tuple[int, ...] | None] = {}

    @classmethod
    def from_generator_images(
        cls,
        group: FiniteGroup,
        images: Mapping[int, Cyclotomic],
        members: Sequence[int] | None = None,
    ) -> Character:
        """
        Extend generator images multiplicatively over the domain.

        Raises:
            ValueError: If the images are inconsistent or do not generate
                the domain.
        """
        domain = tuple(members) if members is not None else tuple(range(group.order))
        values: dict[int, Cyclotomic] = {0: Cyclotomic.from_rational(1)}
        queue = deque([0])
        while queue:
            a = queue.popleft()
            for g, image in images.items():
                b = group.table[a][g]
                value = values[a] * image
                if b not in values:
                    values[b] = value
                    queue.append(b)
                elif values[b] != value:
                    raise ValueError(f"Generator images are inconsistent at element {b}")
        missing = [a for a in domain if a not in values]
        if missing:
            raise ValueError(f"Generator images do not reach elements {missing}")
        return cls(group, [values[a] for a in domain], members=domain)

    def __call__(self, g: int) -> Cyclotomic:
        return self.values[self._position[g]]

    def conductor(self) -> int:
        return math.lcm(*(v.conductor for v in self.values))

    def exponents(self, conductor: int) -> tuple[int, ...] | None:
        """
        Discrete logs of the values in Q(zeta_conductor), or None if some
        value is not a root of unity there.
        """
        if conductor not in self._exponents:
            logs = []
            for v in self.values:
                if conductor % v.conductor:
                    logs = None
                    break
                k = v.promote(conductor).root_exponent()
                if k is None:
                    logs = None
                    break
                logs.append(k)
            self._exponents[conductor] = tuple(logs) if logs is not None else None
        return self._exponents[conductor]

    def exponent_at(self, g: int, conductor: int) -> int:
        """Discrete log of chi(g) in Q(zeta_conductor)."""
        exps = self.exponents(conductor)
        if exps is None:
            raise ValueError(f"Character values are not roots of unity of order dividing {conductor}")
        return exps[self._position[g]]

    def __mul__(self, other: Character) -> Character:
        if self.members != other.members:
            raise ValueError("Characters have different domains")
        return Character(self.group, [a * b for a, b in zip(self.values, other.values)], self.members)

    def power(self, k: int) -> Character:
        return Character(self.group, [v**k for v in self.values], self.members)

    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Character):
            return NotImplemented
        return self.members == other.members and all(
            a == b for a, b in zip(self.values, other.values)
        )

    def to_list(self) -> list[str]:
        return [v.to_text() for v in self.values]

    def __repr__(self) -> str:
        return f"Character({self.to_list()})"


def character_validate(chi: Character) -> bool:
    """
    Check multiplicativity on all pairs of the domain, chi(e) = 1, and that
    every value is a root of unity of order dividing the group exponent.
    """
    group = chi.group
    exponent = group.exponent()
    conductor = math.lcm(chi.conductor(), exponent)
    try:
        exps = chi.exponents(conductor)
    except ConductorOverflowError:
        logger.debug("Character value conductor overflow", exc_info=True)
        return False
    if exps is None or 0 not in chi._position or exps[chi._position[0]] % conductor:
        return False
    for k in exps:
        order = conductor // math.gcd(conductor, k)
        if exponent % order:
            return False
    position = chi._position
    table = group.table
    for a, ea in zip(chi.members, exps):
        row = table[a]
        for b, eb in zip(chi.members, exps):
            c = row[b]
            pc = position.get(c)
            if pc is None or (ea + eb - exps[pc]) % conductor:
                return False
    return True


def character_group(sub: Subgroup) -> list[Character]:
    """
    All characters of an abelian subgroup, trivial character first.

    Raises:
        ValueError: If the subgroup is not abelian.
    """
    if not sub.is_abelian():
        raise ValueError("character_group needs an abelian subgroup")
    group = sub.parent
    gens = sub.generators()
    orders = [group.element_order(g) for g in gens]
    exponent = math.lcm(1, *orders)
    characters: list[Character] = []
    for images in cartesian(*(range(o) for o in orders)):
        logs = {0: 0}
        queue = deque([0])
        consistent = True
        while queue and consistent:
            a = queue.popleft()
            for g, o, t in zip(gens, orders, images):
                b = group.table[a][g]
                value = (logs[a] + t * (exponent // o)) % exponent
                if b not in logs:
                    logs[b] = value
                    queue.append(b)
                elif logs[b] != value:
                    consistent = False
                    break
        if consistent:
            values = [Cyclotomic.root(exponent, logs[a]) for a in sub.members]
            characters.append(Character(group, values, members=sub.members))
    if len(characters) != sub.order:
        raise GroupAxiomError(
            f"Found {len(characters)} characters for an abelian subgroup of order {sub.order}"
        )
    return characters
