"""Homogeneous dynamic multi-agent system models.

A model is a finite set of states, a shared action alphabet with a
distinguished idle action, per-state action availability, and a guard
matrix of quantifier-free arithmetic formulas over action counters.
State sets are integer bitmasks over the state order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

from .presburger import (PresFormula, FALSE, disj, evaluate, free_vars,
                         is_quantifier_free, neg, conj)
from .qe import cooper_bound, is_valid

# the idle action has no user-visible name and its counter never occurs
# in guards
IDLE = ""
IDLE_COUNTER = "#"

StateSet = int


class ModelError(Exception):
    pass


class DomainMismatch(ModelError):
    """Two action distributions over different counter domains."""


class MalformedModel(ModelError):
    """An operation relied on well-formedness that does not hold."""


def counter_name(action: str) -> str:
    return IDLE_COUNTER if action == IDLE else "#" + action


@dataclass(frozen=True)
class ActionTable:
    """Ordered action alphabet and its counter variables."""

    actions: tuple[str, ...]

    def __post_init__(self):
        if IDLE in self.actions:
            raise ValueError("the idle action is implicit")
        if len(set(self.actions)) != len(self.actions):
            raise ValueError("duplicate action names")

    def counters(self) -> tuple[str, ...]:
        return tuple(counter_name(a) for a in self.actions)

    def counter(self, action: str) -> str:
        if action != IDLE and action not in self.actions:
            raise KeyError(action)
        return counter_name(action)


@dataclass(frozen=True)
class ActionDistribution:
    """Counting abstraction of a joint action: counter -> agent count."""

    counts: tuple[tuple[str, int], ...]

    @staticmethod
    def make(counts: Mapping[str, int]) -> "ActionDistribution":
        for v in counts.values():
            if v < 0:
                raise ValueError("agent counts are naturals")
        return ActionDistribution(tuple(sorted(counts.items())))

    def domain(self) -> frozenset[str]:
        return frozenset(c for c, _ in self.counts)

    def total(self) -> int:
        return sum(v for _, v in self.counts)

    def as_dict(self) -> dict[str, int]:
        return dict(self.counts)


def oplus(a: ActionDistribution, b: ActionDistribution) -> ActionDistribution:
    """Component-wise sum of two distributions over the same domain."""
    if a.domain() != b.domain():
        raise DomainMismatch(f"{sorted(a.domain())} vs {sorted(b.domain())}")
    bd = b.as_dict()
    return ActionDistribution(tuple((c, v + bd[c]) for c, v in a.counts))


@dataclass(frozen=True)
class HdmasModel:
    """States, availability, guard matrix and labelling."""

    states: tuple[str, ...]
    table: ActionTable
    avail: Mapping[str, frozenset[str]]
    guards: Mapping[tuple[str, str], PresFormula]
    props: tuple[str, ...]
    labels: Mapping[str, frozenset[str]]

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state names")

    # -- state sets as bitmasks ----------------------------------------

    def index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise KeyError(state) from None

    def all_states(self) -> StateSet:
        return (1 << len(self.states)) - 1

    def mask_of(self, names: Iterable[str]) -> StateSet:
        out = 0
        for n in names:
            out |= 1 << self.index(n)
        return out

    def names_of(self, mask: StateSet) -> tuple[str, ...]:
        return tuple(s for i, s in enumerate(self.states) if mask >> i & 1)

    def prop_mask(self, prop: str) -> StateSet:
        if prop not in self.props:
            raise KeyError(prop)
        return self.mask_of(s for s in self.states if prop in self.labels[s])

    # -- per-state structure -------------------------------------------

    def counters_at(self, state: str) -> tuple[str, ...]:
        """Counters of available actions at a state, idle counter last."""
        av = self.avail[state]
        out = [counter_name(a) for a in self.table.actions if a in av]
        if IDLE in av:
            out.append(IDLE_COUNTER)
        return tuple(out)

    def guard(self, src: str, dst: str) -> PresFormula:
        return self.guards.get((src, dst), FALSE)

    def edges_from(self, src: str) -> list[tuple[str, PresFormula]]:
        return [(dst, g) for (s, dst), g in self.guards.items() if s == src]

    def to_json(self) -> dict:
        from .parsing import guard_to_str
        return {
            "schema": 1,
            "states": list(self.states),
            "actions": list(self.table.actions),
            "props": list(self.props),
            "avail": {s: sorted(a for a in self.avail[s] if a != IDLE)
                      for s in self.states},
            "labels": {s: sorted(self.labels[s]) for s in self.states},
            "guards": {f"{s} -> {d}": guard_to_str(g)
                       for (s, d), g in sorted(self.guards.items())},
        }


def guard_union(model: HdmasModel, state: str, targets: StateSet) -> PresFormula:
    """Disjunction of the guards from ``state`` into the target set."""
    parts = []
    for i, dst in enumerate(model.states):
        if targets >> i & 1:
            g = model.guards.get((state, dst))
            if g is not None:
                parts.append(g)
    return disj(parts)


def distributions(model: HdmasModel, state: str, m: int) -> Iterator[ActionDistribution]:
    """All ways for ``m`` agents to split over the actions available at a state.

    Yields each composition exactly once, first counter counting down from m.
    """
    if m < 0:
        raise ValueError("agent count is a natural")
    counters = model.counters_at(state)

    def split(rest: int, idx: int, acc: list[int]) -> Iterator[ActionDistribution]:
        if idx == len(counters) - 1:
            yield ActionDistribution(tuple(zip(counters, acc + [rest])))
            return
        for v in range(rest, -1, -1):
            yield from split(rest - v, idx + 1, acc + [v])

    if not counters:
        raise MalformedModel(f"state {state} has no available actions")
    yield from split(m, 0, [])


def distribution_count(model: HdmasModel, state: str, m: int) -> int:
    r = len(model.counters_at(state))
    return math.comb(m + r - 1, r - 1)


def successor(model: HdmasModel, state: str, eta: ActionDistribution) -> str:
    """The unique state whose guard the distribution satisfies."""
    expected = frozenset(model.counters_at(state))
    if eta.domain() != expected:
        raise DomainMismatch(f"distribution domain {sorted(eta.domain())} does "
                             f"not match available counters {sorted(expected)}")
    valuation = eta.as_dict()
    found = None
    for dst, g in model.edges_from(state):
        if evaluate(g, valuation):
            if found is not None:
                raise MalformedModel(f"both {found} and {dst} enabled from "
                                     f"{state} under {valuation}")
            found = dst
    if found is None:
        raise MalformedModel(f"no successor of {state} under {valuation}")
    return found


# ---------------------------------------------------------------------------
# well-formedness


@dataclass(frozen=True)
class CheckOutcome:
    ok: bool
    witness: Optional[dict[str, int]] = None
    detail: str = ""


@dataclass
class WellformednessReport:
    """Verdicts for every state and every ordered pair of successors."""

    idle: dict[str, CheckOutcome] = field(default_factory=dict)
    scoping: dict[str, CheckOutcome] = field(default_factory=dict)
    totality: dict[str, CheckOutcome] = field(default_factory=dict)
    determinism: dict[tuple[str, str, str], CheckOutcome] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        tables: list[dict] = [self.idle, self.scoping, self.totality, self.determinism]
        return all(v.ok for t in tables for v in t.values())

    def lines(self) -> list[str]:
        out = []
        for s, v in self.idle.items():
            out.append(f"idle-availability {s}: {'ok' if v.ok else 'FAIL'}")
        for s, v in self.scoping.items():
            out.append(f"guard-scoping     {s}: {'ok' if v.ok else 'FAIL ' + v.detail}")
        for s, v in self.totality.items():
            suffix = "" if v.ok else f" witness {v.witness}"
            out.append(f"totality          {s}: {'ok' if v.ok else 'FAIL' + suffix}")
        for (s, d1, d2), v in self.determinism.items():
            if v.ok:
                continue
            out.append(f"determinism       {s}: edges to {d1} and {d2} overlap,"
                       f" witness {v.witness}")
        if all(v.ok for v in self.determinism.values()):
            out.append("determinism       all ordered pairs: ok")
        return out


def _bounded_witness(phi: PresFormula, counters: tuple[str, ...],
                     want: bool) -> Optional[dict[str, int]]:
    """Search valuations up to an escalating bound for phi == want."""
    bound = max(2, cooper_bound(phi, counters))
    for b in (bound, bound * 4, bound * 16):
        def search(idx: int, acc: dict[str, int]) -> Optional[dict[str, int]]:
            if idx == len(counters):
                return dict(acc) if evaluate(phi, acc) == want else None
            for v in range(b + 1):
                acc[counters[idx]] = v
                hit = search(idx + 1, acc)
                if hit is not None:
                    return hit
            del acc[counters[idx]]
            return None

        if len(counters) == 0:
            return {} if evaluate(phi, {}) == want else None
        if (b + 1) ** len(counters) > 2_000_000:
            return None
        hit = search(0, {})
        if hit is not None:
            return hit
    return None


def check_wellformed(model: HdmasModel) -> WellformednessReport:
    """Idle availability, guard scoping, totality and determinism checks.

    Failures are reported, never raised; totality and determinism failures
    carry a concrete counterexample valuation found by bounded search.
    """
    report = WellformednessReport()
    for s in model.states:
        report.idle[s] = CheckOutcome(IDLE in model.avail[s])

        legal = set(model.counters_at(s)) - {IDLE_COUNTER}
        offending = []
        for dst, g in model.edges_from(s):
            extra = free_vars(g) - legal
            if extra or not is_quantifier_free(g):
                offending.append((dst, sorted(extra)))
        report.scoping[s] = CheckOutcome(not offending, detail=str(offending))
        if offending:
            # the arithmetic checks below would be meaningless
            report.totality[s] = CheckOutcome(False, detail="skipped: bad scoping")
            continue

        counters = tuple(c for c in model.counters_at(s) if c != IDLE_COUNTER)
        union = guard_union(model, s, model.all_states())
        if is_valid(union, counters):
            report.totality[s] = CheckOutcome(True)
        else:
            witness = _bounded_witness(union, counters, want=False)
            report.totality[s] = CheckOutcome(False, witness=witness)

        for i, d1 in enumerate(model.states):
            for d2 in model.states[i + 1:]:
                g1 = model.guards.get((s, d1))
                g2 = model.guards.get((s, d2))
                if g1 is None or g2 is None:
                    outcome = CheckOutcome(True)
                else:
                    both = conj((g1, g2))
                    if is_valid(neg(both), counters):
                        outcome = CheckOutcome(True)
                    else:
                        witness = _bounded_witness(both, counters, want=True)
                        outcome = CheckOutcome(False, witness=witness)
                report.determinism[(s, d1, d2)] = outcome
                report.determinism[(s, d2, d1)] = outcome
    return report
