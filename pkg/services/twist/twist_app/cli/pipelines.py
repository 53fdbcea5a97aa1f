"""
Pipelines behind the CLI subcommands.

Each ``run_*`` function takes a ``Pipeline`` (the session plus run
settings, with the algebras built lazily and at most once) and returns a
``VerificationReport``.  ``run_report`` runs every stage; independent
stages go to a thread pool and their reports are assembled in a fixed
order so that the JSON output does not depend on completion order.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from ..dual import Presentation, coset_decomposition, pointedness_check, verify_dual_relations
from ..errors import ConfigError
from ..group import coset_representatives
from ..hopf import (
    HopfAlgebra,
    check_dimension,
    coproduct_tables_equal,
    gauge_lift_unchanged,
    group_like_closed_form,
    hopf_verify,
    lift_twist,
    remark_closed_form,
    smash_build,
    twist_hopf,
)
from ..nichols import GroupAlgebra, NicholsAlgebra, parse_tensor_terms
from ..qls import datum_validate, family_compatible, family_invariant, invariance_agreement, sub_datum_validate
from ..report import VerificationReport
from ..scalar import q_identity_sweep
from ..twist import (
    BraidedTwist,
    TwistKind,
    factor_commutation,
    gamma_invariance,
    gauge_preconditions,
    gauge_report,
    gauge_transform,
    group_twist,
    identity_twist,
    make_J_D,
    power_table_check,
    twisted_dual_associativity,
    user_twist,
    verify_twist,
)
from .session import GaugeSpec, SessionConfig

logger = logging.getLogger(__name__)


@dataclass
class RunSettings:
    """Limits and knobs resolved from the config profile and CLI flags."""

    max_dim: int = 2000
    workers: int = 1
    seed: int = 0
    random_triples: int = 6
    qcheck_max_n: int = 12
    contracts_dir: Path | None = None


class Pipeline:
    """The session with its twists and algebras, each built on first use."""

    def __init__(self, session: SessionConfig, settings: RunSettings) -> None:
        self.session = session
        self.settings = settings
        self._relations: dict[int, Future] = {}
        self._relations_lock = threading.Lock()

    @property
    def seed(self) -> int:
        return self.session.seed if self.session.seed is not None else self.settings.seed

    @cached_property
    def B(self) -> NicholsAlgebra:
        return self.session.require_valid()

    @cached_property
    def dimension(self) -> int:
        return self.B.dimension * self.session.group.order

    @cached_property
    def braided_twist(self) -> BraidedTwist:
        """The user twist when given, J_D otherwise."""
        if self.session.twist_terms is not None:
            try:
                value = parse_tensor_terms(self.B, self.session.twist_terms)
            except ValueError as exc:
                raise ConfigError(f"Invalid twist terms: {exc}", "twist/terms") from exc
            return user_twist(value, "J")
        return make_J_D(self.B, self.session.family)

    @cached_property
    def group_twist(self) -> BraidedTwist | None:
        sub = self.session.sub
        if sub is None or sub.JF is None:
            return None
        return group_twist(GroupAlgebra(self.session.group, sub.F), sub.JF)

    @property
    def uses_family(self) -> bool:
        return self.session.twist_terms is None and self.group_twist is None

    @cached_property
    def H(self) -> HopfAlgebra:
        check_dimension(self.dimension, self.settings.max_dim)
        return smash_build(self.session.datum, self.settings.max_dim)

    @cached_property
    def T(self) -> BraidedTwist:
        sub = self.session.sub
        return lift_twist(
            self.H,
            self.braided_twist,
            self.group_twist,
            D=self.session.family,
            F=sub.F if sub is not None else None,
        )

    @cached_property
    def A(self) -> HopfAlgebra:
        return twist_hopf(self.H, self.T)

    def warm(self) -> None:
        """Build everything shared before stages fan out to threads."""
        _ = self.A

    def relations(self, s: int) -> tuple[VerificationReport, Presentation]:
        """``verify_dual_relations`` on coset s, run once per pipeline."""
        with self._relations_lock:
            pending = self._relations.get(s)
            owner = pending is None
            if owner:
                pending = self._relations[s] = Future()
        if owner:
            try:
                pending.set_result(
                    verify_dual_relations(
                        self.A,
                        s,
                        self.session.family,
                        random_triples=self.settings.random_triples,
                        seed=self.seed,
                    )
                )
            except BaseException as exc:
                pending.set_exception(exc)
                raise
        return pending.result()


def _timed(report: VerificationReport, stage: str, started: float) -> None:
    report.timings[stage] = time.perf_counter() - started


def run_validate(p: Pipeline) -> VerificationReport:
    session = p.session
    d = session.datum
    report = VerificationReport(f"{session.name}/validate")
    report.extend(datum_validate(d), prefix="datum")
    D = session.family
    report.add("family_compatible", family_compatible(d, D), f"support {sorted(i + 1 for i in D.support())}")
    flags = invariance_agreement(d, D)
    report.claim("invariance_predicates_agree", flags["agree"], "literal Gamma-invariance vs bilinear predicate", **flags)
    if session.sub is not None:
        report.extend(sub_datum_validate(d, D, session.sub), prefix="sub")
    report.data["family"] = D.to_dict()
    if report.passed:
        check_dimension(p.dimension, p.settings.max_dim)
        report.data["dimension"] = p.dimension
    return report


def run_qcheck(max_n: int) -> VerificationReport:
    started = time.perf_counter()
    result = q_identity_sweep(max_n)
    report = VerificationReport("qcheck")
    report.add("q_binomial_identity", result.passed, f"{result.checked} instances up to N = {max_n}")
    report.data["max_N"] = max_n
    report.data["checked"] = result.checked
    report.data["failures"] = result.failures[:20]
    _timed(report, "qcheck", started)
    return report


def run_build(p: Pipeline) -> VerificationReport:
    started = time.perf_counter()
    report = VerificationReport(f"{p.session.name}/build")
    H, A = p.H, p.A
    report.add("dimension", H.dimension == p.dimension, f"dim = {H.dimension}")
    report.data["datum"] = p.session.datum.to_dict()
    report.data["twist"] = p.T.to_dict()
    report.data["H"] = H.structure_constants()
    report.data["A"] = A.structure_constants()
    _timed(report, "build", started)
    return report


def run_verify_twist(p: Pipeline) -> VerificationReport:
    started = time.perf_counter()
    J = p.braided_twist
    report = VerificationReport(f"{p.session.name}/verify-twist")
    axioms = verify_twist(J)
    report.extend(axioms, prefix=J.label)
    oracle = twisted_dual_associativity(J)
    report.add(
        "dual_oracle_agrees",
        oracle == axioms.passed,
        f"twist axioms {'pass' if axioms.passed else 'fail'}, dual product associative = {oracle}",
    )
    if J.kind is TwistKind.J_D:
        report.extend(factor_commutation(J), prefix=J.label)
    d = p.session.datum
    if d.theta == 1 and J.kind is TwistKind.J_D:
        report.extend(power_table_check(J, p.session.family.xi_i(0)), prefix=J.label)
    flags = gamma_invariance(J, d)
    report.claim("twist_G_invariant", flags["G_invariant"], "", **flags)
    if p.group_twist is not None:
        report.extend(verify_twist(p.group_twist), prefix="J_F")
    if p.session.sub is not None:
        report.extend(sub_datum_validate(d, p.session.family, p.session.sub), prefix="sub")
    _timed(report, "verify-twist", started)
    return report


def _products_identical(H: HopfAlgebra, A: HopfAlgebra) -> bool:
    return all(
        H.multiply_basis(a, b) == A.multiply_basis(a, b) for a in H.basis() for b in H.basis()
    )


def run_verify_hopf(p: Pipeline) -> VerificationReport:
    started = time.perf_counter()
    H, A, T = p.H, p.A, p.T
    workers = p.settings.workers
    session = p.session
    d, D = session.datum, session.family
    report = VerificationReport(f"{session.name}/verify-hopf")
    report.extend(hopf_verify(H, workers), prefix="H")
    report.extend(verify_twist(T, name="lifted"), prefix="lifted")
    report.extend(hopf_verify(A, workers), prefix="A")
    report.add("product_unchanged", _products_identical(H, A), "A and H share the product table")
    if p.uses_family:
        report.extend(remark_closed_form(H, A, D))
        if d.theta == 1:
            report.extend(group_like_closed_form(A, D))
        equal, witness = coproduct_tables_equal(H, A)
        whole = range(d.group.order)
        if family_invariant(d, D, whole) or d.gamma.order == d.group.order:
            report.add("coproduct_unchanged", equal, "D is G-invariant or G = Gamma", witness)
        else:
            report.claim("coproduct_unchanged", equal, "", witness=witness.to_dict() if witness else None)
    report.data["dimension"] = H.dimension
    _timed(report, "verify-hopf", started)
    return report


def _cosets(p: Pipeline, coset: int | None) -> list[int]:
    reps = coset_representatives(p.session.group, p.session.datum.gamma)
    if coset is None:
        return reps
    if not 0 <= coset < len(reps):
        raise ConfigError(f"--coset must be in 0..{len(reps) - 1}", "--coset")
    return [reps[coset]]


def _ordered(tasks: list[Callable[[], VerificationReport]], workers: int) -> list[VerificationReport]:
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(task) for task in tasks]
            return [f.result() for f in futures]
    return [task() for task in tasks]


def run_dual(p: Pipeline, coset: int | None = None) -> VerificationReport:
    started = time.perf_counter()
    A = p.A
    session = p.session
    report = VerificationReport(f"{session.name}/dual")
    _, decomposition = coset_decomposition(A)
    report.extend(decomposition)
    reps = _cosets(p, coset)

    def task(s: int) -> Callable[[], VerificationReport]:
        def run() -> VerificationReport:
            coset_report, _ = p.relations(s)
            return coset_report

        return run

    for s, coset_report in zip(reps, _ordered([task(s) for s in reps], p.settings.workers)):
        report.extend(coset_report, prefix=session.group.label(s))
    _timed(report, "dual", started)
    return report


def run_pointed(p: Pipeline) -> VerificationReport:
    """
    Pointedness of A from the D-hat criterion and the per-coset presentations.

    The criterion speaks about A built from J_D; for a user twist the stage
    is skipped.
    """
    started = time.perf_counter()
    session = p.session
    report = VerificationReport(f"{session.name}/pointed")
    if session.twist_terms is not None:
        report.skip("pointedness", "A is built from a user twist, not from D")
        report.data["pointed"] = None
        _timed(report, "pointed", started)
        return report
    _, inner = pointedness_check(
        session.datum,
        session.family,
        p.A,
        workers=p.settings.workers,
        random_triples=p.settings.random_triples,
        seed=p.seed,
        relations=p.relations,
    )
    report.extend(inner)
    _timed(report, "pointed", started)
    return report



def _gauge_source(p: Pipeline, which: str) -> BraidedTwist:
    return identity_twist(p.B) if which == "identity" else make_J_D(p.B, p.session.family)


def run_gauge_check(p: Pipeline) -> VerificationReport:
    gauge = p.session.gauge
    if gauge is None:
        raise ConfigError("gauge-check needs a gauge section", "gauge")
    started = time.perf_counter()
    J = _gauge_source(p, gauge.source)
    J2 = _gauge_source(p, gauge.target)
    report = VerificationReport(f"{p.session.name}/gauge-check")
    report.extend(gauge_report(J.value, J2.value, gauge.c, name=gauge.label))
    report.data["source"] = gauge.source
    report.data["target"] = gauge.target
    _timed(report, "gauge-check", started)
    return report


def _experiment_row(p: Pipeline, J: BraidedTwist, candidate: GaugeSpec) -> dict:
    pre = gauge_preconditions(candidate.c)
    row: dict = {
        "c": candidate.c.to_list(),
        "preconditions": {check.name: check.status.value for check in pre.checks},
    }
    if not pre.passed:
        return row
    transformed = gauge_transform(J.value, candidate.c)
    flags = gamma_invariance(BraidedTwist(transformed, transformed, TwistKind.GAUGED, "J'"), p.session.datum)
    equal, _ = gauge_lift_unchanged(p.H, transformed, f"J'[{candidate.label}]")
    row.update(
        {
            "J_prime": transformed.to_list(),
            "J_prime_G_invariant": flags["G_invariant"],
            "coproduct_unchanged": equal,
        }
    )
    return row


def run_experiment(p: Pipeline) -> VerificationReport:
    """
    For each candidate c: preconditions, J' = Delta(c) J_D (c^-1 (x) c^-1),
    G-invariance of J' and whether twisting H by the lift of J' leaves Delta
    unchanged.  Nothing here gates.
    """
    if not p.session.candidates:
        raise ConfigError("experiment needs an experiment section", "experiment")
    started = time.perf_counter()
    J = make_J_D(p.B, p.session.family)
    report = VerificationReport(f"{p.session.name}/experiment")
    report.data["candidates"] = {c.label: _experiment_row(p, J, c) for c in p.session.candidates}
    _timed(report, "experiment", started)
    return report


def run_report(p: Pipeline) -> VerificationReport:
    """Every stage the session supports, assembled in a fixed order."""
    report = VerificationReport(p.session.name)
    validation = run_validate(p)
    report.extend(validation, prefix="validate")
    if not validation.passed:
        return report
    report.extend(run_qcheck(max(p.session.datum.N)), prefix="qcheck")
    p.warm()
    stages: list[tuple[str, Callable[[], VerificationReport]]] = [
        ("verify-twist", lambda: run_verify_twist(p)),
        ("verify-hopf", lambda: run_verify_hopf(p)),
        ("dual", lambda: run_dual(p)),
        ("pointed", lambda: run_pointed(p)),
    ]
    if p.session.gauge is not None:
        stages.append(("gauge-check", lambda: run_gauge_check(p)))
    if p.session.candidates:
        stages.append(("experiment", lambda: run_experiment(p)))
    results = _ordered([run for _, run in stages], p.settings.workers)
    for (name, _), stage_report in zip(stages, results):
        report.extend(stage_report, prefix=name)
    logger.info("Report for %s: %s", p.session.name, "pass" if report.passed else "FAIL")
    return report
