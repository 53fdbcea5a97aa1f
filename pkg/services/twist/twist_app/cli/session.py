"""
Session Config Ingestion.

A session config is a JSON or YAML document describing one instance: the
group, the datum (g_i, chi_i), the scalar family D and the optional
sub-datum, user twist, gauge element and experiment candidates.  It is read
with ``yaml.safe_load`` (JSON is a subset of YAML), validated against
``contracts/session_config.schema.yaml`` with ``jsonschema`` and then turned
into the mathematical objects.  Every failure surfaces as a ``ConfigError``
carrying the field path or the line and column.

Key Concepts Demonstrated:
- Schema-first validation with a cached, file-backed contract
- Located diagnostics (JSON path for schema errors, line:column for syntax)
- Re-raising lower-level construction errors with config context
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any

import jsonschema
import yaml

from ..errors import ConfigError, TwistLabError
from ..group import Character, FiniteGroup, Subgroup, group_from_spec, subgroup_from_members
from ..nichols import BElement, NicholsAlgebra, parse_b_terms
from ..qls import QlsDatum, ScalarFamily, SubDatum, datum_validate, family_from_mapping
from ..scalar import Cyclotomic
from ..twist import exp_element

logger = logging.getLogger(__name__)

SESSION_SCHEMA = "session_config.schema.yaml"
REPORT_SCHEMA = "report.schema.yaml"


@lru_cache(maxsize=8)
def load_schema(contracts_dir: str, name: str) -> dict[str, Any]:
    """Load and cache a YAML JSON-schema from the contracts directory."""
    path = Path(contracts_dir) / name
    try:
        with path.open("r", encoding="utf-8") as handle:
            return yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError(f"Cannot read schema {name}: {exc.strerror}", str(path)) from exc


def _location(error: jsonschema.ValidationError) -> str:
    parts = [str(p) for p in error.absolute_path]
    return "/".join(parts) if parts else "(root)"


def validate_document(document: Any, schema: dict[str, Any]) -> None:
    """
    Raises:
        ConfigError: For the first schema violation in path order.
    """
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        first = errors[0]
        raise ConfigError(f"Invalid session config: {first.message}", _location(first))


@dataclass
class GaugeSpec:
    """A gauge element with the twists it should relate."""

    c: BElement
    source: str = "identity"
    target: str = "family"
    label: str = "c"


@dataclass
class SessionConfig:
    """
    A parsed and validated session config.

    Attributes:
        name: Instance name used as the report title.
        datum: The quantum linear space datum.
        family: The scalar family D (zero when omitted).
        B: The Nichols algebra context (None while the datum is invalid).
        sub: Optional (W, F, J_F).
        twist_terms: Optional user twist ``[[left, right, literal], ...]``.
        gauge: Optional gauge element.
        candidates: Experiment candidates.
        seed: Seed for sampled checks; None defers to the profile seed.
    """

    name: str
    datum: QlsDatum
    family: ScalarFamily
    B: NicholsAlgebra | None
    sub: SubDatum | None = None
    twist_terms: list | None = None
    gauge: GaugeSpec | None = None
    candidates: list[GaugeSpec] = field(default_factory=list)
    seed: int | None = None
    source: str = "<dict>"

    @property
    def group(self) -> FiniteGroup:
        return self.datum.group

    def require_valid(self) -> NicholsAlgebra:
        """
        Raises:
            DatumError: If the datum failed validation.
        """
        if self.B is None:
            self.datum.require_valid()
        return self.B  # type: ignore[return-value]


def read_document(path: Path) -> Any:
    """
    Read a JSON/YAML file.

    Raises:
        ConfigError: On I/O errors or syntax errors (with line and column).
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read session config: {exc.strerror}", str(path)) from exc
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark is not None else str(path)
        problem = getattr(exc, "problem", None) or "syntax error"
        raise ConfigError(f"Cannot parse session config: {problem}", where) from exc


def _parse_element(B: NicholsAlgebra, spec: dict, where: str, default_label: str) -> GaugeSpec:
    try:
        if "exp" in spec:
            c = exp_element(parse_b_terms(B, spec["exp"]))
        else:
            c = parse_b_terms(B, spec["terms"])
    except (TwistLabError, ValueError) as exc:
        raise ConfigError(f"Invalid element: {exc}", where) from exc
    return GaugeSpec(c=c, label=spec.get("label", default_label))


def _build_datum(document: dict) -> QlsDatum:
    try:
        group = group_from_spec(document["group"])
    except (TwistLabError, ValueError) as exc:
        raise ConfigError(f"Invalid group: {exc}", "group") from exc
    raw = document["datum"]
    g, chi_rows = raw["g"], raw["chi"]
    if len(chi_rows) != len(g):
        raise ConfigError(
            f"datum needs one character vector per generator ({len(g)}), got {len(chi_rows)}",
            "datum/chi",
        )
    for i, gi in enumerate(g):
        if gi >= group.order:
            raise ConfigError(f"g_{i + 1} = {gi} is not an element of a group of order {group.order}", f"datum/g/{i}")
    chi = []
    for i, row in enumerate(chi_rows):
        if len(row) != group.order:
            raise ConfigError(f"chi_{i + 1} needs {group.order} values, got {len(row)}", f"datum/chi/{i}")
        try:
            chi.append(Character(group, [Cyclotomic.parse(str(v)) for v in row]))
        except (TwistLabError, ValueError) as exc:
            raise ConfigError(f"Invalid character value: {exc}", f"datum/chi/{i}") from exc
    try:
        return QlsDatum(group, g, chi)
    except TwistLabError as exc:
        raise ConfigError(str(exc), "datum") from exc


def _build_sub(d: QlsDatum, raw: dict) -> SubDatum:
    try:
        F: Subgroup = subgroup_from_members(d.group, raw["F"])
    except (TwistLabError, ValueError) as exc:
        raise ConfigError(f"Invalid F: {exc}", "sub/F") from exc
    JF = None
    if "JF" in raw:
        try:
            JF = {(int(a), int(b)): Cyclotomic.parse(str(v)) for a, b, v in raw["JF"]}
        except ValueError as exc:
            raise ConfigError(f"Invalid J_F literal: {exc}", "sub/JF") from exc
    return SubDatum(W=tuple(int(i) - 1 for i in raw["W"]), F=F, JF=JF)


def session_from_document(
    document: Any,
    contracts_dir: Path | str,
    source: str = "<dict>",
) -> SessionConfig:
    """
    Validate a parsed document and build the session objects.

    Raises:
        ConfigError: Located at the first offending field.
    """
    validate_document(document, load_schema(str(contracts_dir), SESSION_SCHEMA))
    d = _build_datum(document)
    try:
        D = family_from_mapping(d.theta, document.get("family", {}))
    except (TwistLabError, ValueError) as exc:
        raise ConfigError(f"Invalid family: {exc}", "family") from exc
    for i, j in D.a:
        if not (0 <= i < d.theta and 0 <= j < d.theta) or i == j:
            raise ConfigError(f"a_{i + 1}{j + 1} is not an off-diagonal entry for theta = {d.theta}", "family/a")
    B = NicholsAlgebra(d) if datum_validate(d).passed else None
    if B is None and ("gauge" in document or "experiment" in document or "twist" in document):
        raise ConfigError("Element specs need a valid datum", "datum")

    session = SessionConfig(
        name=document["name"],
        datum=d,
        family=D,
        B=B,
        seed=int(document["seed"]) if "seed" in document else None,
        source=source,
    )
    if "sub" in document:
        session.sub = _build_sub(d, document["sub"])
    if "twist" in document:
        session.twist_terms = document["twist"]["terms"]
    if "gauge" in document:
        raw = document["gauge"]
        spec = _parse_element(B, raw["c"], "gauge/c", "c")
        spec.source = raw.get("source", "identity")
        spec.target = raw.get("target", "family")
        session.gauge = spec
    if "experiment" in document:
        session.candidates = [
            _parse_element(B, c, f"experiment/candidates/{k}", f"c{k + 1}")
            for k, c in enumerate(document["experiment"]["candidates"])
        ]
    logger.info("Loaded session %s from %s (theta = %d, |G| = %d)", session.name, source, d.theta, d.group.order)
    return session


def load_session(path: Path | str, contracts_dir: Path | str) -> SessionConfig:
    """Read, validate and build a session config file."""
    path = Path(path)
    return session_from_document(read_document(path), contracts_dir, source=str(path))
