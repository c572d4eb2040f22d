"""Finite-domain probabilistic structural equation models.

A model is a set of variables with finite domains.  Exogenous variables have
no equation; every endogenous variable has a stochastic structural equation
given extensionally as a kernel table: each combination of parent values maps
to an exact distribution over the variable's own domain.  Randomness is drawn
independently per equation and per evaluation; correlations between variables
exist only through shared ancestors in the graph.

The semantics of a model under a fixed exogenous assignment is the joint
distribution over the endogenous variables obtained bottom-up along a
topological order.  A model paired with a distribution over its exogenous
variables lifts to a full joint by mixing these semantics, and interventions
replace an equation with a constant, yielding a sub-model that is defined
even for assignments the current input distribution gives probability zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .dist import Dist, Event
from .errors import (
    CyclicModel,
    DomainMismatch,
    ExogenousTarget,
    MissingEquation,
    UnknownVariable,
    ValueOutOfDomain,
)
from .exact import Value


@dataclass(frozen=True)
class StochasticEquation:
    """An extensional stochastic equation: target := F(parents).

    Attributes:
      target: the variable being assigned.
      parents: parent variable names, in the order the row keys use.
      rows: parent-value tuple -> {target value: positive weight}; every row
        must sum to exactly one.  Zero entries are dropped at construction so
        structurally equal equations compare equal.
    """

    target: str
    parents: tuple[str, ...]
    rows: dict[tuple, dict[Value, Fraction]]

    def __post_init__(self):
        cleaned = {}
        for key, row in self.rows.items():
            if not isinstance(key, tuple) or len(key) != len(self.parents):
                raise DomainMismatch(
                    f"equation for {self.target!r}: row key {key!r} does not "
                    f"match parents {self.parents}"
                )
            kept = {}
            total = Fraction(0)
            for value, w in row.items():
                if not isinstance(w, Fraction) or w < 0:
                    raise DomainMismatch(
                        f"equation for {self.target!r}: weight {w!r} at row "
                        f"{key!r} is not a nonnegative rational"
                    )
                total += w
                if w > 0:
                    kept[value] = w
            if total != 1:
                raise DomainMismatch(
                    f"equation for {self.target!r}: row {key!r} sums to {total}"
                )
            cleaned[key] = kept
        object.__setattr__(self, "rows", cleaned)

    def row_for(self, parent_values: tuple) -> dict[Value, Fraction]:
        try:
            return self.rows[parent_values]
        except KeyError:
            raise DomainMismatch(
                f"equation for {self.target!r} has no row for parent values "
                f"{parent_values!r}"
            ) from None


def constant_equation(target: str, value: Value) -> StochasticEquation:
    """target := value, the form interventions install."""
    return StochasticEquation(target, (), {(): {value: Fraction(1)}})


def copy_equation(target: str, source: str, domain: Iterable[Value]) -> StochasticEquation:
    """target := source (deterministic identity over the given domain)."""
    return StochasticEquation(
        target, (source,), {(v,): {v: Fraction(1)} for v in domain}
    )


def deterministic_equation(
    target: str,
    parents: Sequence[str],
    parent_domains: Sequence[Sequence[Value]],
    fn,
) -> StochasticEquation:
    """target := fn(parent values), tabulated over the parent domains."""
    rows = {
        key: {fn(*key): Fraction(1)} for key in product(*map(tuple, parent_domains))
    }
    return StochasticEquation(target, tuple(parents), rows)


@dataclass(frozen=True)
class Sem:
    """A structural model: declared variables, domains, and equations.

    Variables without an equation are exogenous.  `names` fixes the declared
    order, which drives enumeration order everywhere (reports, witnesses,
    serialization).
    """

    names: tuple[str, ...]
    domains: dict[str, tuple[Value, ...]]
    equations: dict[str, StochasticEquation]

    @property
    def exogenous(self) -> tuple[str, ...]:
        return tuple(n for n in self.names if n not in self.equations)

    @property
    def endogenous(self) -> tuple[str, ...]:
        return tuple(n for n in self.names if n in self.equations)

    def domain_of(self, name: str) -> tuple[Value, ...]:
        try:
            return self.domains[name]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} is not declared") from None

    def parents_of(self, name: str) -> tuple[str, ...]:
        eq = self.equations.get(name)
        return eq.parents if eq is not None else ()

    def ancestors_of(self, name: str) -> frozenset[str]:
        """All proper ancestors of `name` (parents, transitively)."""
        self.domain_of(name)
        seen: set[str] = set()
        frontier = list(self.parents_of(name))
        while frontier:
            p = frontier.pop()
            if p in seen:
                continue
            seen.add(p)
            frontier.extend(self.parents_of(p))
        return frozenset(seen)

    def validate(self) -> tuple[str, ...]:
        """Check structural well-formedness; return a topological order.

        The returned order lists all exogenous variables first (declared
        order), then endogenous variables, breaking ties by declared order.

        Raises:
          UnknownVariable, DomainMismatch, MissingEquation, CyclicModel.
        """
        if len(set(self.names)) != len(self.names):
            raise DomainMismatch(f"duplicate variable names in {self.names}")
        for name in self.names:
            dom = self.domains.get(name)
            if dom is None:
                raise MissingEquation(f"variable {name!r} has no declared domain")
            if len(dom) == 0 or len(set(dom)) != len(dom):
                raise DomainMismatch(f"domain of {name!r} must be nonempty, unique")
        for extra in set(self.domains) - set(self.names):
            raise UnknownVariable(f"domain declared for undeclared variable {extra!r}")
        for target, eq in self.equations.items():
            if target not in self.domains:
                raise UnknownVariable(f"equation targets undeclared {target!r}")
            if eq.target != target:
                raise DomainMismatch(
                    f"equation keyed {target!r} targets {eq.target!r}"
                )
            if target in eq.parents:
                raise CyclicModel(f"{target!r} is its own parent")
            for p in eq.parents:
                if p not in self.domains:
                    raise UnknownVariable(
                        f"equation for {target!r} uses undeclared parent {p!r}"
                    )
            expected = set(product(*(self.domains[p] for p in eq.parents)))
            got = set(eq.rows)
            if expected != got:
                raise DomainMismatch(
                    f"equation for {target!r} must have one row per parent "
                    f"combination ({len(expected)} expected, {len(got)} given)"
                )
            dom = set(self.domains[target])
            for key, row in eq.rows.items():
                for value in row:
                    if value not in dom:
                        raise ValueOutOfDomain(
                            f"equation for {target!r}, row {key!r}: value "
                            f"{value!r} outside domain"
                        )

        order = list(self.exogenous)
        placed = set(order)
        pending = [n for n in self.names if n in self.equations]
        while pending:
            progressed = False
            for n in list(pending):
                if all(p in placed for p in self.equations[n].parents):
                    order.append(n)
                    placed.add(n)
                    pending.remove(n)
                    progressed = True
                    break
            if not progressed:
                raise CyclicModel(f"no topological order: stuck at {pending}")
        return tuple(order)

    def intervene(self, name: str, value: Value) -> Sem:
        """The sub-model where `name` is forced to `value`.

        Defined regardless of how likely `value` is under any input
        distribution.  Only endogenous variables can be targeted; exogenous
        what-ifs go through ProbabilisticSem.pin_exogenous.
        """
        dom = self.domain_of(name)
        if value not in dom:
            raise ValueOutOfDomain(f"{value!r} not in domain of {name!r}")
        if name not in self.equations:
            raise ExogenousTarget(
                f"{name!r} is exogenous; replace the input distribution instead"
            )
        equations = dict(self.equations)
        equations[name] = constant_equation(name, value)
        return Sem(self.names, self.domains, equations)

    def semantics_given_exogenous(self, assignment: Mapping[str, Value]) -> Dist:
        """Joint distribution over the endogenous variables, bottom-up.

        `assignment` must give a value for every exogenous variable and for
        nothing else.
        """
        order = self.validate()
        exo = self.exogenous
        if set(assignment) != set(exo):
            raise DomainMismatch(
                f"exogenous assignment must cover exactly {exo}, got "
                f"{tuple(assignment)}"
            )
        for name, value in assignment.items():
            if value not in self.domains[name]:
                raise ValueOutOfDomain(f"{value!r} not in domain of {name!r}")
        return self._semantics_unchecked(order, assignment)

    def _semantics_unchecked(
        self, order: tuple[str, ...], assignment: Mapping[str, Value]
    ) -> Dist:
        exo = self.exogenous
        positions = {name: i for i, name in enumerate(order)}
        support: dict[tuple, Fraction] = {
            tuple(assignment[n] for n in exo): Fraction(1)
        }
        width = len(exo)
        for name in order[width:]:
            eq = self.equations[name]
            parent_idx = [positions[p] for p in eq.parents]
            grown: dict[tuple, Fraction] = {}
            for point, w in support.items():
                row = eq.row_for(tuple(point[i] for i in parent_idx))
                for value, pw in row.items():
                    grown[point + (value,)] = w * pw
            support = grown

        endo = self.endogenous
        idx = [positions[n] for n in endo]
        out: dict[tuple, Fraction] = {}
        for point, w in support.items():
            key = tuple(point[i] for i in idx)
            out[key] = out.get(key, Fraction(0)) + w
        return Dist(endo, out)


@dataclass(frozen=True)
class ProbabilisticSem:
    """A structural model paired with a distribution over its exogenous inputs."""

    sem: Sem
    exogenous_dist: Dist

    def validate(self) -> tuple[str, ...]:
        order = self.sem.validate()
        exo = self.sem.exogenous
        if self.exogenous_dist.variables != exo:
            raise DomainMismatch(
                f"input distribution is over {self.exogenous_dist.variables}, "
                f"model's exogenous variables are {exo}"
            )
        for point in self.exogenous_dist.weights:
            for name, value in zip(exo, point):
                if value not in self.sem.domains[name]:
                    raise ValueOutOfDomain(
                        f"input distribution uses {value!r} outside domain of {name!r}"
                    )
        return order

    def lift(self) -> Dist:
        """The full joint over all declared variables."""
        order = self.validate()
        exo = self.sem.exogenous
        endo = self.sem.endogenous
        joint: dict[tuple, Fraction] = {}
        for point, w in self.exogenous_dist.weights.items():
            inner = self.sem._semantics_unchecked(order, dict(zip(exo, point)))
            for endo_point, iw in inner.weights.items():
                values = dict(zip(exo, point))
                values.update(zip(endo, endo_point))
                key = tuple(values[n] for n in self.sem.names)
                joint[key] = joint.get(key, Fraction(0)) + w * iw
        return Dist(self.sem.names, joint)

    def intervene(self, name: str, value: Value) -> ProbabilisticSem:
        return ProbabilisticSem(self.sem.intervene(name, value), self.exogenous_dist)

    def pin_exogenous(self, name: str, value: Value) -> ProbabilisticSem:
        """Force an exogenous input to a value.

        The replacement distribution is the marginal over the other exogenous
        variables times a point mass: an intervention, not conditioning, so
        it is defined even for zero-probability values and never imports
        correlations with the pinned variable.
        """
        exo = self.sem.exogenous
        if name not in self.sem.names:
            raise UnknownVariable(f"variable {name!r} is not declared")
        if name not in exo:
            raise DomainMismatch(f"{name!r} is endogenous; use intervene")
        if value not in self.sem.domains[name]:
            raise ValueOutOfDomain(f"{value!r} not in domain of {name!r}")
        others = tuple(n for n in exo if n != name)
        rest = self.exogenous_dist.marginal(others)
        pinned = Dist.point_mass((name,), (value,))
        combined = Dist.product(rest, pinned)
        reordered = combined.marginal(exo)
        return ProbabilisticSem(self.sem, reordered)

    def do(self, assignments: Mapping[str, Value]) -> ProbabilisticSem:
        """Apply interventions; endogenous targets replace equations, exogenous
        targets replace their input distribution coordinate."""
        model = self
        for name, value in assignments.items():
            if name in self.sem.equations:
                model = model.intervene(name, value)
            else:
                model = model.pin_exogenous(name, value)
        return model

    def query(
        self,
        target: Event,
        interventions: Mapping[str, Value] | Sequence[tuple[str, Value]] = (),
        conditions: Event | None = None,
    ) -> Fraction:
        """Fr[target | do(interventions), conditions], exactly.

        Interventions are applied first (endogenous targets only, matching
        `Sem.intervene`); conditioning then happens in the intervened model
        and must have positive probability there.
        """
        pairs = (
            list(interventions.items())
            if isinstance(interventions, Mapping)
            else list(interventions)
        )
        model = self
        for name, value in pairs:
            model = model.intervene(name, value)
        joint = model.lift()
        if conditions is not None:
            joint = joint.condition(conditions)
        return joint.prob(target)
