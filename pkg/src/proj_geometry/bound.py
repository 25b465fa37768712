"""Effective lower bound for the twists where the blowup computes the powers of I.

For every m in the scanned range, the sections of the Rees ring must agree
with I^m and the higher cohomology of 𝒪_Y(m) must vanish. The bound is the
first twist after the last failure.
"""

import concurrent.futures
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from algebra_core.ideals import QuotientRing
from config.config import DEFAULT_LIMITS, MAX_WORKERS, Limits, log_message
from graded.module import GradedModule
from proj_geometry.cohomology import fiber_dimension, higher_cohomology, sections_agree, twisted_sections
from rees.presentation import ReesPresentation, rees_presentation


@dataclass
class TwistEvidence:
    twist: int
    sections: str
    sections_exponent: Optional[int]
    sections_agree: bool
    higher: Dict[int, str] = field(default_factory=dict)
    higher_zero: Dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.sections_agree and all(self.higher_zero.values())

    def as_dict(self) -> dict:
        return {
            "twist": self.twist,
            "sections": self.sections,
            "exponent": self.sections_exponent,
            "agree": self.sections_agree,
            "higher": {str(i): v for i, v in sorted(self.higher.items())},
            "ok": self.ok,
        }


@dataclass
class StabilityBound:
    """``bound`` is ``None`` when the check still fails at ``limit``."""

    limit: int
    bound: Optional[int]
    evidence: List[TwistEvidence]

    def failures(self) -> List[int]:
        return [e.twist for e in self.evidence if not e.ok]


def _twist_evidence(module: GradedModule, m: int, limits: Limits, log) -> TwistEvidence:
    entry = twisted_sections(module, m, limits, log)
    evidence = TwistEvidence(m, entry.module.describe(), entry.exponent, sections_agree(module, m, limits, log))
    for i in range(1, fiber_dimension(module.ring) + 1):
        higher = higher_cohomology(module, m, i, limits, log)
        evidence.higher[i] = higher.module.describe()
        evidence.higher_zero[i] = higher.is_zero
    return evidence


def bound_from_presentation(presentation: ReesPresentation, limit: int, limits: Limits = DEFAULT_LIMITS,
                            log_function: Optional[Callable[[str], None]] = None) -> StabilityBound:
    log = log_function or log_message
    if limit < 0:
        raise ValueError("[BOUND] limit must be non-negative")
    module = presentation.module
    twists = list(range(limit + 1))
    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        evidence = list(executor.map(lambda m: _twist_evidence(module, m, limits, log), twists))
    failing = [e.twist for e in evidence if not e.ok]
    if not failing:
        bound: Optional[int] = 0
    elif failing[-1] == limit:
        bound = None
    else:
        bound = failing[-1] + 1
    log(f"[BOUND] failures at {failing}, bound {bound}")
    return StabilityBound(limit, bound, evidence)


def stability_bound(base: QuotientRing, generators: Sequence, limit: int, limits: Limits = DEFAULT_LIMITS,
                    log_function: Optional[Callable[[str], None]] = None) -> StabilityBound:
    """Smallest n ≤ ``limit`` such that every m in [n, limit] passes both checks."""
    presentation = rees_presentation(base, generators, validate=False, limits=limits, log_function=log_function)
    return bound_from_presentation(presentation, limit, limits, log_function)
