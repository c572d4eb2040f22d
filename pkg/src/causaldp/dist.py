"""Exact finite joint distributions.

A `Dist` maps assignments (tuples of values, aligned with a fixed variable
list) to positive rational weights summing to exactly one.  Zero-weight
entries are dropped at construction so equality compares supports, and all
arithmetic stays in `fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

from .errors import InvalidDistribution, UnknownVariable, ZeroProbabilityEvent
from .exact import Value, value_sort_key

# An event is either a {variable: value} conjunction or a predicate over
# full assignment mappings.
Event = Union[Mapping[str, Value], Callable[[Mapping[str, Value]], bool]]


@dataclass(frozen=True)
class Dist:
    """A finite joint distribution with exact rational weights.

    Attributes:
      variables: the coordinate names, in declared order.
      weights: assignment tuple -> positive Fraction; sums to exactly 1.
    """

    variables: tuple[str, ...]
    weights: dict[tuple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned: dict[tuple, Fraction] = {}
        total = Fraction(0)
        for point, w in self.weights.items():
            if not isinstance(point, tuple) or len(point) != len(self.variables):
                raise InvalidDistribution(
                    f"assignment {point!r} does not match variables {self.variables}"
                )
            if not isinstance(w, Fraction):
                raise InvalidDistribution(f"weight {w!r} is not an exact rational")
            if w < 0:
                raise InvalidDistribution(f"negative weight {w} at {point!r}")
            total += w
            if w > 0:
                cleaned[point] = w
        if total != 1:
            raise InvalidDistribution(f"weights sum to {total}, expected exactly 1")
        object.__setattr__(self, "weights", cleaned)

    # --- constructors -----------------------------------------------------

    @staticmethod
    def point_mass(variables: Iterable[str], point: tuple) -> Dist:
        return Dist(tuple(variables), {tuple(point): Fraction(1)})

    @staticmethod
    def uniform(variables: Iterable[str], points: Iterable[tuple]) -> Dist:
        pts = [tuple(p) for p in points]
        w = Fraction(1, len(pts))
        return Dist(tuple(variables), {p: w for p in pts})

    @staticmethod
    def product(*parts: Dist) -> Dist:
        """Independent product of distributions over disjoint variables."""
        variables: tuple[str, ...] = ()
        weights: dict[tuple, Fraction] = {(): Fraction(1)}
        for part in parts:
            if set(variables) & set(part.variables):
                raise InvalidDistribution(
                    f"product factors share variables: {variables} / {part.variables}"
                )
            variables = variables + part.variables
            weights = {
                left + right: wl * wr
                for left, wl in weights.items()
                for right, wr in part.weights.items()
            }
        return Dist(variables, weights)

    # --- primitives --------------------------------------------------------

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} not among {self.variables}") from None

    def _matches(self, point: tuple, event: Event) -> bool:
        if callable(event):
            return bool(event(dict(zip(self.variables, point))))
        return all(point[self._index(name)] == want for name, want in event.items())

    def prob(self, event: Event) -> Fraction:
        return sum(
            (w for point, w in self.weights.items() if self._matches(point, event)),
            Fraction(0),
        )

    def condition(self, event: Event) -> Dist:
        """Renormalize onto an event; exact; raises on probability zero."""
        kept = {p: w for p, w in self.weights.items() if self._matches(p, event)}
        total = sum(kept.values(), Fraction(0))
        if total == 0:
            raise ZeroProbabilityEvent(f"event {event!r} has probability zero")
        return Dist(self.variables, {p: w / total for p, w in kept.items()})

    def marginal(self, names: Iterable[str]) -> Dist:
        names = tuple(names)
        idx = [self._index(n) for n in names]
        out: dict[tuple, Fraction] = {}
        for point, w in self.weights.items():
            key = tuple(point[i] for i in idx)
            out[key] = out.get(key, Fraction(0)) + w
        return Dist(names, out)

    # --- conveniences -------------------------------------------------------

    def weight_of(self, point: tuple) -> Fraction:
        return self.weights.get(tuple(point), Fraction(0))

    def entries_sorted(self) -> list[tuple[tuple, Fraction]]:
        return sorted(
            self.weights.items(), key=lambda kv: tuple(value_sort_key(v) for v in kv[0])
        )

    def factors_as_product(self) -> bool:
        """True iff the joint equals the product of its 1-D marginals exactly."""
        singles = [self.marginal((name,)) for name in self.variables]
        for point, w in self.weights.items():
            expected = Fraction(1)
            for coord, single in zip(point, singles):
                expected *= single.weight_of((coord,))
            if w != expected:
                return False
        # supports agree too: the joint support never exceeds the product
        # support, so matching sizes forces equality everywhere
        count = 1
        for single in singles:
            count *= len(single.weights)
        return count == len(self.weights)
