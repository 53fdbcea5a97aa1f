"""
Integration tests for the pipelines behind the CLI subcommands.

Each test loads a shipped session config, wraps it in a ``Pipeline`` and
runs one stage end to end.

Key Concepts Demonstrated:
- Lazily built shared state (H, T, A) reused across stages
- Gating checks versus claims in assembled reports
- Config-level errors surfacing as ``ConfigError``
"""

from __future__ import annotations

import json

import pytest

from services.twist.twist_app.cli import pipelines as pipelines_module
from services.twist.twist_app.cli.pipelines import (
    Pipeline,
    RunSettings,
    run_build,
    run_dual,
    run_experiment,
    run_gauge_check,
    run_pointed,
    run_qcheck,
    run_report,
    run_validate,
    run_verify_hopf,
    run_verify_twist,
)
from services.twist.twist_app.cli.session import load_session, session_from_document
from services.twist.twist_app.errors import ConfigError, DimensionBudgetError
from services.twist.twist_app.report import CheckStatus

pytestmark = pytest.mark.integration


@pytest.fixture
def pipeline(configs_dir, contracts_dir):
    """Provide a factory building a pipeline for a shipped config."""

    def make(name: str, **settings) -> Pipeline:
        session = load_session(configs_dir / f"{name}.json", contracts_dir)
        return Pipeline(session, RunSettings(contracts_dir=contracts_dir, random_triples=2, **settings))

    return make


class TestValidateAndBuild:
    def test_validate_e1(self, pipeline):
        """Test that E1 validates and reports dim A = 8."""
        report = run_validate(pipeline("e1"))
        assert report.passed
        assert report.data["dimension"] == 8
        assert report.data["family"] == {"a": [], "xi": [[1, "1 (conductor 1)"]]}

    def test_validate_e2_records_predicate_disagreement(self, pipeline):
        """Test that the two invariance predicates disagree on E2 as a claim only."""
        report = run_validate(pipeline("e2"))
        assert report.passed
        claim = next(c for c in report.claims if c.name == "invariance_predicates_agree")
        assert not claim.holds

    def test_validate_respects_dimension_cap(self, pipeline):
        """Test that a valid instance above max_dim raises DimensionBudgetError."""
        with pytest.raises(DimensionBudgetError):
            run_validate(pipeline("e2", max_dim=20))

    def test_build_exports_structure_constants(self, pipeline):
        """Test that build exports H and A tables over the same basis."""
        report = run_build(pipeline("e1"))
        assert report.passed
        assert report.data["H"]["dimension"] == report.data["A"]["dimension"] == 8
        assert report.data["H"]["basis"] == report.data["A"]["basis"]
        assert report.data["twist"]["label"] == "L(J_D)"

    def test_qcheck_stage(self):
        """Test that the sweep to N = 5 passes and counts its instances."""
        report = run_qcheck(5)
        assert report.passed
        assert report.data["checked"] > 0
        assert "qcheck" in report.timings


class TestVerification:
    def test_verify_twist_e1(self, pipeline):
        """Test that J_D on E1 passes, the dual oracle agrees and the power table holds."""
        report = run_verify_twist(pipeline("e1"))
        assert report.passed, report.failures()
        assert report.check("dual_oracle_agrees").passed
        assert report.check("J_D/power_table").passed
        claim = next(c for c in report.claims if c.name == "twist_G_invariant")
        assert not claim.holds

    def test_verify_hopf_e1(self, pipeline):
        """Test that H, the lifted twist and A all pass on E1."""
        report = run_verify_hopf(pipeline("e1"))
        assert report.passed, report.failures()
        assert report.check("H/antipode_left").passed
        assert report.check("lifted/twist_equation").passed
        assert report.check("A/coassociativity").passed
        assert report.check("product_unchanged").passed
        assert report.check("group_like_closed_form").passed

    def test_verify_hopf_invariant_gates_coproduct_unchanged(self, pipeline):
        """Test that a G-invariant family makes Delta^T = Delta a gating check."""
        report = run_verify_hopf(pipeline("invariant"))
        assert report.check("coproduct_unchanged").passed

    def test_dual_single_coset(self, pipeline):
        """Test that --coset 1 runs only the h coset of E1."""
        report = run_dual(pipeline("e1"), coset=1)
        assert report.passed
        assert report.data["h"]["presentation"]["xi"] == [[1, "2 (conductor 1)"]]
        assert "e" not in report.data

    def test_dual_coset_out_of_range(self, pipeline):
        """Test that a coset index beyond the representatives is a config error."""
        with pytest.raises(ConfigError, match="--coset"):
            run_dual(pipeline("e1"), coset=5)

    def test_pointed_e1(self, pipeline):
        """Test that E1 is not pointed and both oracles agree."""
        report = run_pointed(pipeline("e1"))
        assert report.passed
        assert report.data["pointed"] is False


@pytest.fixture
def e1_document(configs_dir):
    """Provide the shipped E1 session document as a dict."""
    return json.loads((configs_dir / "e1.json").read_text(encoding="utf-8"))


class TestSessionOverrides:
    def test_session_seed_zero_overrides_profile_seed(self, e1_document, contracts_dir):
        """Test that an explicit session seed of 0 wins over a nonzero profile seed."""
        session = session_from_document({**e1_document, "seed": 0}, contracts_dir)
        assert Pipeline(session, RunSettings(seed=7)).seed == 0

    def test_missing_session_seed_defers_to_profile(self, e1_document, contracts_dir):
        """Test that a session without a seed uses the profile seed."""
        session = session_from_document(e1_document, contracts_dir)
        assert Pipeline(session, RunSettings(seed=7)).seed == 7

    def test_user_twist_skips_pointedness(self, e1_document, contracts_dir):
        """Test that pointedness is not judged from D when A comes from a user twist."""
        # Arrange
        document = {**e1_document, "twist": {"terms": [[[0], [0], "1"]]}}
        p = Pipeline(session_from_document(document, contracts_dir), RunSettings(random_triples=2))

        # Act
        report = run_pointed(p)

        # Assert
        assert report.passed
        assert report.check("pointedness").status is CheckStatus.SKIP
        assert report.data["pointed"] is None
        assert not any(c.name.endswith("pointedness_oracles_agree") for c in report.checks)


class TestDualRelationsCache:
    def test_dual_and_pointed_share_coset_results(self, pipeline, monkeypatch):
        """Test that each coset's relations are computed once across dual and pointed."""
        # Arrange
        calls = []
        original = pipelines_module.verify_dual_relations

        def counting(A, s, D, **kwargs):
            calls.append(s)
            return original(A, s, D, **kwargs)

        monkeypatch.setattr(pipelines_module, "verify_dual_relations", counting)
        p = pipeline("e1")

        # Act
        dual = run_dual(p)
        pointed = run_pointed(p)

        # Assert
        assert dual.passed and pointed.passed
        assert sorted(calls) == [0, 1]
        assert p.relations(1)[1].xi[0] == 2

    def test_report_computes_each_coset_once(self, pipeline, monkeypatch):
        """Test that the full report with parallel stages still runs each coset once."""
        calls = []
        original = pipelines_module.verify_dual_relations

        def counting(A, s, D, **kwargs):
            calls.append(s)
            return original(A, s, D, **kwargs)

        monkeypatch.setattr(pipelines_module, "verify_dual_relations", counting)

        report = run_report(pipeline("e1", workers=2))

        assert report.passed, report.failures()
        assert sorted(calls) == [0, 1]


class TestGaugeAndExperiment:
    def test_gauge_check_e3(self, pipeline):
        """Test that exp(xy) relates the trivial twist to J_D on the exterior datum."""
        report = run_gauge_check(pipeline("e3"))
        assert report.passed, report.failures()
        assert report.data["source"] == "identity"

    def test_gauge_check_needs_gauge_section(self, pipeline):
        """Test that a config without a gauge section is refused."""
        with pytest.raises(ConfigError, match="gauge"):
            run_gauge_check(pipeline("e1"))

    def test_experiment_rows(self, pipeline):
        """Test that exp(-xy) undoes J_D and exp(2xy) gives a twist that h moves."""
        # Act
        rows = run_experiment(pipeline("e3")).data["candidates"]

        # Assert
        undo = rows["exp(-xy)"]
        assert undo["J_prime"] == [["1 ⊗ 1", "1 (conductor 1)"]]
        assert undo["J_prime_G_invariant"] is True
        assert undo["coproduct_unchanged"] is True
        assert rows["exp(2xy)"]["J_prime_G_invariant"] is False
        assert set(undo["preconditions"].values()) == {"pass"}

    def test_experiment_needs_candidates(self, pipeline):
        """Test that a config without candidates is refused."""
        with pytest.raises(ConfigError):
            run_experiment(pipeline("e1"))


class TestReport:
    def test_report_e1_runs_every_stage(self, pipeline):
        """Test that the full report on E1 passes and namespaces each stage."""
        report = run_report(pipeline("e1", workers=2))
        names = {c.name.split("/")[0] for c in report.checks}
        assert report.passed, report.failures()
        assert names == {"validate", "qcheck", "verify-twist", "verify-hopf", "dual", "pointed"}

    def test_report_e3_includes_gauge_and_experiment(self, pipeline):
        """Test that optional sections add their stages."""
        report = run_report(pipeline("e3"))
        assert report.passed, report.failures()
        assert "experiment" in report.data
        assert any(c.name.startswith("gauge-check/") for c in report.checks)

    def test_report_stops_after_failed_validation(self, contracts_dir):
        """Test that an invalid datum yields only the validate stage."""
        from services.twist.twist_app.cli.session import session_from_document

        document = {
            "name": "flat",
            "group": {"cyclic": 2},
            "datum": {"g": [1], "chi": [["1", "1"]]},
        }
        session = session_from_document(document, contracts_dir)
        report = run_report(Pipeline(session, RunSettings(contracts_dir=contracts_dir)))
        assert not report.passed
        assert {c.name.split("/")[0] for c in report.checks} == {"validate"}
