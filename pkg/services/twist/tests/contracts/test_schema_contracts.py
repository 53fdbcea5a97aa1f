"""
Contract tests for the two documents twistlab exchanges with the outside
world: session configs (input) and verification reports (output).

Both contracts live as YAML JSON-schemas under ``contracts/``.  Every
shipped config must satisfy the session contract, and every report the
pipelines emit (including ones carrying witnesses and claims) must
satisfy the report contract after a JSON round trip.

Key Concepts Demonstrated:
- Schema validity of the contracts themselves (meta-schema check)
- Provider-side verification of emitted documents
- Consumer-side verification of shipped inputs
"""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Any

import pytest

yaml = pytest.importorskip("yaml", reason="Install pyyaml for contract tests.")
jsonschema = pytest.importorskip("jsonschema", reason="Install jsonschema for contract tests.")

from services.twist.twist_app.cli.pipelines import (  # noqa: E402
    Pipeline,
    RunSettings,
    run_gauge_check,
    run_qcheck,
    run_validate,
    run_verify_twist,
)
from services.twist.twist_app.cli.session import load_session  # noqa: E402
from services.twist.twist_app.hopf import corrupt, hopf_verify  # noqa: E402
from services.twist.twist_app.report import VerificationReport  # noqa: E402

pytestmark = pytest.mark.contract

REPO_ROOT = Path(__file__).resolve().parents[4]
SHIPPED_CONFIGS = sorted((REPO_ROOT / "configs").glob("*.json"))


@lru_cache(maxsize=2)
def _load_contract(name: str) -> dict[str, Any]:
    """Load and cache a contract from disk."""
    with (REPO_ROOT / "contracts" / name).open("r", encoding="utf-8") as handle:
        return yaml.safe_load(handle)


def _assert_valid(document: Any, name: str) -> None:
    """Validate against a contract, listing every violation on failure."""
    validator = jsonschema.Draft202012Validator(_load_contract(name))
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    assert not errors, "\n".join(f"{list(e.absolute_path)}: {e.message}" for e in errors)


def _emitted(report: VerificationReport) -> Any:
    return json.loads(report.to_json(include_timings=True))


@pytest.mark.parametrize("name", ["session_config.schema.yaml", "report.schema.yaml"])
def test_contracts_are_valid_schemas(name):
    """Test that each contract is itself a valid draft 2020-12 schema."""
    jsonschema.Draft202012Validator.check_schema(_load_contract(name))


@pytest.mark.parametrize("path", SHIPPED_CONFIGS, ids=lambda p: p.stem)
def test_shipped_configs_satisfy_session_contract(path):
    """Test that every config under configs/ satisfies the session contract."""
    _assert_valid(json.loads(path.read_text(encoding="utf-8")), "session_config.schema.yaml")


def test_shipped_configs_present():
    """Test that the reference configs are all shipped."""
    assert {p.stem for p in SHIPPED_CONFIGS} >= {"e1", "e2", "e3", "e1_cubic", "invariant", "untwisted"}


@pytest.fixture
def e1_pipeline(configs_dir, contracts_dir) -> Pipeline:
    session = load_session(configs_dir / "e1.json", contracts_dir)
    return Pipeline(session, RunSettings(contracts_dir=contracts_dir))


def test_validate_report_satisfies_contract(e1_pipeline):
    """Test a report with nested datum data and an invariance claim."""
    _assert_valid(_emitted(run_validate(e1_pipeline)), "report.schema.yaml")


def test_verify_twist_report_satisfies_contract(e1_pipeline):
    """Test a report with prefixed checks, claims with data and twist terms."""
    _assert_valid(_emitted(run_verify_twist(e1_pipeline)), "report.schema.yaml")


def test_qcheck_report_with_timings_satisfies_contract():
    """Test that the timings block matches the contract."""
    _assert_valid(_emitted(run_qcheck(3)), "report.schema.yaml")


def test_failing_report_with_witness_satisfies_contract(e1_algebras):
    """Test a failing report whose checks carry witnesses."""
    report = hopf_verify(corrupt(e1_algebras[0], "antipode"))
    document = _emitted(report)
    assert document["passed"] is False
    assert any("witness" in c for c in document["checks"])
    _assert_valid(document, "report.schema.yaml")


def test_gauge_report_satisfies_contract(configs_dir, contracts_dir):
    """Test the gauge-check report of the exterior config."""
    session = load_session(configs_dir / "e3.json", contracts_dir)
    report = run_gauge_check(Pipeline(session, RunSettings(contracts_dir=contracts_dir)))
    _assert_valid(_emitted(report), "report.schema.yaml")


def test_report_round_trips_through_from_dict(e1_pipeline):
    """Test that from_dict(to_dict(r)) serialises identically."""
    report = run_verify_twist(e1_pipeline)
    again = VerificationReport.from_dict(report.to_dict())
    assert again.to_json() == report.to_json()
