"""Empirical validation of compositional CFT correctness on bounded instances.

For a system of a consumer ``c`` fed by a producer ``d``, the premises
are the CFT of ``c`` and the CFTs bound to its connected events, each
checked against its own component. When they hold, the composed and the
strictly composed CFT are checked against the product component.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from ._pool import parallel_map
from .cft import clauses, compose, compose_strict
from .checker import Bounds, cft_correct, check_cft, verify_counterexample
from .component import compose_components, validate_deterministic
from .equivalence import ByClauseAndEvent
from .generate import GenParams, SystemSpec, gen_system
from .model import Model


class Status(str, enum.Enum):
    PREMISES_FAILED = "PremisesFailed"
    VALIDATED = "Validated"
    VIOLATION = "VIOLATION"


@dataclass
class TheoremReport:
    premise_c: list
    premise_d: list  # (EventRef, verdicts) pairs
    conclusion: Optional[list] = None
    strict_conclusion: Optional[list] = None
    strict_vs_c: Optional[list] = None
    strict_vs_d: Optional[list] = None
    composite_violations: int = 0
    status: Status = Status.PREMISES_FAILED

    @property
    def premises_hold(self):
        return cft_correct(self.premise_c) and all(cft_correct(v) for _, v in self.premise_d)

    @property
    def strict_parts_hold(self):
        return all(cft_correct(v) for v in (self.strict_vs_c, self.strict_vs_d) if v is not None)


def system_spec(model: Model, name: str, bounds: Bounds = Bounds()) -> SystemSpec:
    system = model.system(name)
    cfts_d = tuple(sorted((e, model.cft(n)) for e, n in system.bindings))
    cft_c = model.cft(system.check)
    return SystemSpec(model.component(system.c), model.component(system.d), system.connections,
                      cft_c, cfts_d, bounds, name)


def composed_cfts(spec: SystemSpec):
    composite = compose_components(spec.c, spec.d, spec.connections)
    binding = spec.binding
    plain = compose(spec.cft_c, binding, spec.connections, owner=composite.name)
    strict = compose_strict(spec.cft_c, binding, spec.connections, owner=composite.name)
    return composite, plain, strict


def _verdict_word(verdicts):
    if verdicts is None:
        return "skipped"
    return "correct" if cft_correct(verdicts) else "refuted"


def validate_theorem_instance(spec: SystemSpec, jobs=1) -> TheoremReport:
    bounds = spec.bounds or Bounds()
    report = TheoremReport(
        premise_c=check_cft(spec.c, spec.cft_c, bounds, jobs=jobs),
        premise_d=[(e, check_cft(spec.d, cft, bounds, jobs=jobs)) for e, cft in spec.cfts_d],
    )
    composite, plain, strict = composed_cfts(spec)
    report.composite_violations = len(validate_deterministic(composite))
    if not report.premises_hold:
        return report
    report.conclusion = check_cft(composite, plain, bounds, require_deterministic=False, jobs=jobs)
    report.strict_conclusion = check_cft(composite, strict, bounds, require_deterministic=False, jobs=jobs)
    report.strict_vs_c = check_cft(spec.c, strict, bounds, jobs=jobs)
    report.strict_vs_d = check_cft(spec.d, strict, bounds, jobs=jobs)
    ok = cft_correct(report.conclusion) and cft_correct(report.strict_conclusion)
    report.status = Status.VALIDATED if ok else Status.VIOLATION
    return report


def transfer_counts(spec: SystemSpec, jobs=1):
    """(counterexamples against the composed CFT, how many also refute the strict one)."""
    bounds = spec.bounds or Bounds()
    composite, plain, strict = composed_cfts(spec)
    verdicts = check_cft(composite, plain, bounds, require_deterministic=False, jobs=jobs)
    strict_rels = [ByClauseAndEvent(c, strict.output_event) for c in clauses(strict)]
    found = transferred = 0
    for v in verdicts:
        if v.correct:
            continue
        found += 1
        if any(verify_counterexample(composite, v.counterexample, rel, bounds) is None for rel in strict_rels):
            transferred += 1
    return found, transferred


def transfer_property(spec: SystemSpec, jobs=1) -> bool:
    found, transferred = transfer_counts(spec, jobs)
    return found == transferred


@dataclass
class TrialResult:
    index: int
    seed: str
    report: TheoremReport
    counterexamples: int = 0
    transferred: int = 0

    @property
    def transfer_ok(self):
        return self.counterexamples == self.transferred

    def line(self):
        r = self.report
        premise_words = [_verdict_word(r.premise_c)] + [_verdict_word(v) for _, v in r.premise_d]
        premises = "correct" if r.premises_hold else "refuted"
        return (f"TRIAL id={self.index} seed={self.seed} status={r.status.value} premises={premises}"
                f"({','.join(premise_words)}) conclusion={_verdict_word(r.conclusion)} "
                f"strict={_verdict_word(r.strict_conclusion)} strict_c={_verdict_word(r.strict_vs_c)} "
                f"strict_d={_verdict_word(r.strict_vs_d)} transfer={self.transferred}/{self.counterexamples} "
                f"composite_nondet={r.composite_violations}")


def run_trial(args) -> TrialResult:
    index, seed, params, bounds = args
    spec = gen_system(seed, params, bounds)
    report = validate_theorem_instance(spec)
    found, transferred = transfer_counts(spec)
    return TrialResult(index, str(seed), report, found, transferred)


@dataclass
class CampaignSummary:
    trials: list = field(default_factory=list)

    def count(self, status):
        return sum(1 for t in self.trials if t.report.status is status)

    @property
    def violations(self):
        return self.count(Status.VIOLATION)

    @property
    def transfer_failures(self):
        return sum(1 for t in self.trials if not t.transfer_ok)

    @property
    def strict_failures(self):
        return sum(1 for t in self.trials if not t.report.strict_parts_hold)

    def lines(self):
        out = [t.line() for t in self.trials]
        out.append(
            f"SUMMARY trials={len(self.trials)} validated={self.count(Status.VALIDATED)} "
            f"premises_failed={self.count(Status.PREMISES_FAILED)} violations={self.violations} "
            f"transfer_checked={sum(t.counterexamples for t in self.trials)} "
            f"transfer_failures={self.transfer_failures} strict_failures={self.strict_failures}"
        )
        return out


def run_campaign(trials=100, seed=0, params: GenParams = GenParams(), bounds: Bounds = Bounds(),
                 jobs=None) -> CampaignSummary:
    """Seeded random systems; results come back in trial order whatever ``jobs`` is."""
    work = [(i, f"{seed}:{i}", params, bounds) for i in range(trials)]
    return CampaignSummary(parallel_map(run_trial, work, jobs))
