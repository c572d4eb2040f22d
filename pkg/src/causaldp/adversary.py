"""Bayesian adversaries: posteriors over databases and the semantic gap.

An adversary with a prior over whole databases updates on the mechanism
output.  Comparing the ordinary posterior with the posterior computed as if
one data point had been forced to a chosen value measures how much the
mechanism lets participation itself matter.
"""

from __future__ import annotations

from fractions import Fraction

from .dist import Dist
from .errors import DomainMismatch, ValueOutOfDomain, ZeroEvidence
from .exact import ratio_divide
from .mechanisms import MechanismKernel, d_name, r_name
from .reports import RatioBound, SupTracker


def _data_names(kernel: MechanismKernel) -> tuple[str, ...]:
    return tuple(d_name(i) for i in range(1, kernel.n + 1))


def _as_data_prior(kernel: MechanismKernel, prior: Dist) -> Dist:
    names = _data_names(kernel)
    if prior.variables == names:
        return prior
    if prior.variables == tuple(r_name(i) for i in range(1, kernel.n + 1)):
        return Dist(names, dict(prior.weights))
    raise DomainMismatch(
        f"prior must be over {names}, got {prior.variables}"
    )


def _check_observation(kernel: MechanismKernel, observation) -> None:
    if observation not in kernel.output_domain:
        raise ValueOutOfDomain(
            f"{observation!r} is not a possible output of this mechanism"
        )


def posterior(kernel: MechanismKernel, prior: Dist, observation) -> Dist:
    """Belief over databases after seeing the output, by Bayes' rule."""
    prior = _as_data_prior(kernel, prior)
    _check_observation(kernel, observation)
    unnormalized: dict[tuple, Fraction] = {}
    total = Fraction(0)
    for db, w in prior.weights.items():
        like = kernel.table[db].get(observation, Fraction(0))
        if w * like > 0:
            unnormalized[db] = w * like
            total += w * like
    if total == 0:
        raise ZeroEvidence(
            f"output {observation!r} has probability zero under this prior"
        )
    return Dist(prior.variables, {db: w / total for db, w in unnormalized.items()})


def posterior_under_intervention(
    kernel: MechanismKernel,
    prior: Dist,
    point_index: int,
    value,
    observation,
) -> Dist:
    """Belief over the original databases, had one point been forced.

    The likelihood of database d becomes the kernel row of d with coordinate
    `point_index` overwritten by `value`: the adversary reasons about what
    the output reveals when that point's true value was cut out of the
    mechanism.  The belief is still about the original, unforced data.
    """
    prior = _as_data_prior(kernel, prior)
    _check_observation(kernel, observation)
    if not 1 <= point_index <= kernel.n:
        raise DomainMismatch(
            f"point index {point_index} out of range 1..{kernel.n}"
        )
    if value not in kernel.data_domain:
        raise ValueOutOfDomain(f"{value!r} not a data value")
    unnormalized: dict[tuple, Fraction] = {}
    total = Fraction(0)
    for db, w in prior.weights.items():
        forced = db[: point_index - 1] + (value,) + db[point_index:]
        like = kernel.table[forced].get(observation, Fraction(0))
        if w * like > 0:
            unnormalized[db] = w * like
            total += w * like
    if total == 0:
        raise ZeroEvidence(
            f"output {observation!r} has probability zero under this prior "
            f"once point {point_index} is forced to {value!r}"
        )
    return Dist(prior.variables, {db: w / total for db, w in unnormalized.items()})


def semantic_gap(
    kernel: MechanismKernel, prior: Dist, point_index: int, value
) -> RatioBound:
    """Worst-case discrepancy between the two posteriors.

    Supremum over outputs realizable in both worlds and databases in the
    prior's support of the posterior ratio, taken in both directions.  A gap
    of 1 means forcing the point teaches the adversary nothing extra.
    """
    prior = _as_data_prior(kernel, prior)
    tracker = SupTracker()
    for o in kernel.output_domain:
        try:
            plain = posterior(kernel, prior, o)
            forced = posterior_under_intervention(
                kernel, prior, point_index, value, o
            )
        except ZeroEvidence:
            continue
        for db in kernel.databases():
            if prior.weight_of(db) == 0:
                continue
            a = plain.weight_of(db)
            b = forced.weight_of(db)
            for num, den, direction in (
                (b, a, "forced_over_plain"),
                (a, b, "plain_over_forced"),
            ):
                ratio = ratio_divide(num, den)
                if ratio is None:
                    continue
                tracker.offer(
                    ratio, {"o": o, "d": db, "direction": direction}
                )
    return tracker.bound()
