"""Check results: ratio bounds, reports, and the definition registry."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exact import INF, Ratio, is_infinite, ratio_le


class DefinitionId(str, Enum):
    """The privacy definitions this package can check.

    The first five compare conditional (associative) output distributions;
    the last four compare interventional ones.  `*_universal` variants
    quantify over every population distribution, the others take one as
    input.  `classic` quantifies over nothing but the mechanism itself.
    """

    CLASSIC = "classic"
    STRONG_ADVERSARY_UNIVERSAL = "strong_adversary_universal"
    STRONG_ADVERSARY_ONE_DIST = "strong_adversary_one_dist"
    BAYESIAN0 = "bayesian0"
    INDEPENDENT_BAYESIAN0 = "independent_bayesian0"
    WHOLE_DB_INTERVENTION = "whole_db_intervention"
    WHOLE_DB_UNIVERSAL = "whole_db_universal"
    SINGLE_POINT_INTERVENTION = "single_point_intervention"
    SINGLE_POINT_UNIVERSAL = "single_point_universal"


#: definitions that take a fixed population distribution as input
NEEDS_POPULATION = frozenset(
    {
        DefinitionId.STRONG_ADVERSARY_ONE_DIST,
        DefinitionId.BAYESIAN0,
        DefinitionId.INDEPENDENT_BAYESIAN0,
        DefinitionId.WHOLE_DB_INTERVENTION,
        DefinitionId.SINGLE_POINT_INTERVENTION,
    }
)

#: definitions whose population quantifier is discharged internally
POPULATION_FREE = frozenset(DefinitionId) - NEEDS_POPULATION


@dataclass(frozen=True)
class RatioBound:
    """A supremum of probability ratios: exact rational or infinity.

    `witness` is the first index tuple (in the documented enumeration order)
    attaining the supremum, or None when the supremum is the neutral 1.
    """

    value: Ratio
    witness: dict | None = None


@dataclass(frozen=True)
class CheckReport:
    """Outcome of checking one definition at one target ratio.

    Attributes:
      definition: which definition was checked.
      target_ratio: e^epsilon as an exact rational (or inf for trivial targets).
      achieved: the supremum ratio actually found.
      passed: achieved <= target_ratio.
      witness: first maximizer when achieved > 1, else None.
      skipped_comparisons: how many comparison instances were skipped because
        a positivity side condition failed (conditioning on a zero-probability
        event); always 0 under a full-support population.
      reduction: human-readable note naming how any universal quantifier was
        discharged or which closed form computed the distributions.
    """

    definition: DefinitionId
    target_ratio: Ratio
    achieved: Ratio
    passed: bool
    witness: dict | None
    skipped_comparisons: int
    reduction: str


def finish_report(
    definition: DefinitionId,
    target_ratio: Ratio,
    bound: RatioBound,
    skipped: int,
    reduction: str,
) -> CheckReport:
    return CheckReport(
        definition=definition,
        target_ratio=target_ratio,
        achieved=bound.value,
        passed=ratio_le(bound.value, target_ratio),
        witness=bound.witness,
        skipped_comparisons=skipped,
        reduction=reduction,
    )


class SupTracker:
    """Running supremum of ratios with a deterministic first witness.

    Suprema start at the neutral 1 (every checked family compares each pair
    in both orders, so the true supremum is never below 1 when any comparison
    exists, and 1 is the correct vacuous value otherwise).
    """

    def __init__(self):
        self.value: Ratio = Fraction(1)
        self.witness: dict | None = None

    def offer(self, ratio: Ratio | None, witness: dict) -> None:
        """Fold one comparison in; None (a 0/0 comparison) is vacuous."""
        if ratio is None or is_infinite(self.value):
            return
        if is_infinite(ratio) or ratio > self.value:
            self.value = ratio
            self.witness = witness

    def bound(self) -> RatioBound:
        return RatioBound(self.value, self.witness)
