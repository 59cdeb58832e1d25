"""Strategic-ability formulas over agent counts.

State formulas carry a strategic operator ``<<t1, t2>>`` whose arguments
count controllable and uncontrollable agents; they are naturals,
parameters ``z_i``, or the quantifiable agent counters ``y1``/``y2``.
``y1`` may only stand in the first position and ``y2`` only in the
second, and a quantifier may only bind occurrences of positive polarity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

EXISTS = "E"
FORALL = "A"

# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Nat:
    value: int


@dataclass(frozen=True)
class AgentVar:
    index: int  # 1 or 2


@dataclass(frozen=True)
class Param:
    index: int


Term = Union[Nat, AgentVar, Param]
Y1 = AgentVar(1)
Y2 = AgentVar(2)


def term_symbol(t: Term) -> Optional[str]:
    """Assignment key for a term, None for numerals."""
    if isinstance(t, AgentVar):
        return f"y{t.index}"
    if isinstance(t, Param):
        return f"z{t.index}"
    return None


# -- formulas ----------------------------------------------------------------


class StateFormula:
    __slots__ = ()


class PathFormula:
    __slots__ = ()


@dataclass(frozen=True)
class Top(StateFormula):
    pass


@dataclass(frozen=True)
class Prop(StateFormula):
    name: str


@dataclass(frozen=True)
class NotF(StateFormula):
    arg: StateFormula


@dataclass(frozen=True)
class AndF(StateFormula):
    lhs: StateFormula
    rhs: StateFormula


@dataclass(frozen=True)
class OrF(StateFormula):
    lhs: StateFormula
    rhs: StateFormula


@dataclass(frozen=True)
class Coop(StateFormula):
    """Strategic operator <<t1, t2>> applied to a temporal objective."""

    t1: Term
    t2: Term
    objective: "PathFormula"


QuantSpec = tuple[str, int]              # (quantifier, agent-variable index)
QuantPrefix = tuple[QuantSpec, ...]      # length 1 or 2


@dataclass(frozen=True)
class Quant(StateFormula):
    prefix: QuantPrefix
    body: StateFormula


@dataclass(frozen=True)
class Next(PathFormula):
    arg: StateFormula


@dataclass(frozen=True)
class Globally(PathFormula):
    arg: StateFormula


@dataclass(frozen=True)
class Until(PathFormula):
    lhs: StateFormula
    rhs: StateFormula


TOP = Top()
Formula = Union[StateFormula, PathFormula]


def eventually(phi: StateFormula) -> PathFormula:
    """F phi is sugar for (true U phi)."""
    return Until(TOP, phi)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Top, Prop)):
        return ()
    if isinstance(phi, NotF):
        return (phi.arg,)
    if isinstance(phi, (AndF, OrF)):
        return (phi.lhs, phi.rhs)
    if isinstance(phi, Coop):
        return (phi.objective,)
    if isinstance(phi, Quant):
        return (phi.body,)
    if isinstance(phi, (Next, Globally)):
        return (phi.arg,)
    if isinstance(phi, Until):
        return (phi.lhs, phi.rhs)
    raise TypeError(phi)


def size(phi: Formula) -> int:
    """Node count, quantifier prefixes counted per quantifier."""
    extra = len(phi.prefix) if isinstance(phi, Quant) else 1
    return extra + sum(size(c) for c in children(phi))


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    for c in children(phi):
        yield from subformulas(c)


def props_of(phi: Formula) -> frozenset[str]:
    return frozenset(f.name for f in subformulas(phi) if isinstance(f, Prop))


def params_of(phi: Formula) -> frozenset[int]:
    out = set()
    for f in subformulas(phi):
        if isinstance(f, Coop):
            for t in (f.t1, f.t2):
                if isinstance(t, Param):
                    out.add(t.index)
    return frozenset(out)


def _occurrences(phi: Formula, y: int, bound: bool, negations: int,
                 acc: list[int]) -> None:
    """Collect negation parities of free occurrences of an agent variable."""
    if isinstance(phi, Coop):
        if not bound:
            for t in (phi.t1, phi.t2):
                if isinstance(t, AgentVar) and t.index == y:
                    acc.append(negations)
        _occurrences(phi.objective, y, bound, negations, acc)
        return
    if isinstance(phi, NotF):
        _occurrences(phi.arg, y, bound, negations + 1, acc)
        return
    if isinstance(phi, Quant):
        now_bound = bound or any(i == y for _, i in phi.prefix)
        _occurrences(phi.body, y, now_bound, negations, acc)
        return
    for c in children(phi):
        _occurrences(c, y, bound, negations, acc)


def free_agent_vars(phi: Formula) -> frozenset[int]:
    out = set()
    for y in (1, 2):
        acc: list[int] = []
        _occurrences(phi, y, False, 0, acc)
        if acc:
            out.add(y)
    return frozenset(out)


def polarity(phi: Formula, y: int) -> str:
    """Polarity of the free occurrences of y1 or y2 in the formula.

    Returns one of ``all-positive``, ``all-negative``, ``mixed``, ``absent``.
    """
    acc: list[int] = []
    _occurrences(phi, y, False, 0, acc)
    if not acc:
        return "absent"
    if all(n % 2 == 0 for n in acc):
        return "all-positive"
    if all(n % 2 == 1 for n in acc):
        return "all-negative"
    return "mixed"


# -- substitution ------------------------------------------------------------


def subst_term(phi: Formula, target: Term, k: int) -> Formula:
    """Uniform substitution of the free occurrences of a term by a numeral."""
    replacement = Nat(k)

    def sub(t: Term, bound: frozenset[int]) -> Term:
        if t != target:
            return t
        if isinstance(t, AgentVar) and t.index in bound:
            return t
        return replacement

    def walk(f: Formula, bound: frozenset[int]) -> Formula:
        if isinstance(f, (Top, Prop)):
            return f
        if isinstance(f, NotF):
            return NotF(walk(f.arg, bound))
        if isinstance(f, AndF):
            return AndF(walk(f.lhs, bound), walk(f.rhs, bound))
        if isinstance(f, OrF):
            return OrF(walk(f.lhs, bound), walk(f.rhs, bound))
        if isinstance(f, Coop):
            return Coop(sub(f.t1, bound), sub(f.t2, bound),
                        walk(f.objective, bound))
        if isinstance(f, Quant):
            return Quant(f.prefix, walk(f.body, bound | {i for _, i in f.prefix}))
        if isinstance(f, Next):
            return Next(walk(f.arg, bound))
        if isinstance(f, Globally):
            return Globally(walk(f.arg, bound))
        if isinstance(f, Until):
            return Until(walk(f.lhs, bound), walk(f.rhs, bound))
        raise TypeError(f)

    return walk(phi, frozenset())


# -- vacuous quantifiers and canonical shape ---------------------------------


def simplify_vacuous(phi: Formula) -> Formula:
    """Drop quantifiers over variables with no free occurrence in their body."""
    if isinstance(phi, Quant):
        body = simplify_vacuous(phi.body)
        free = free_agent_vars(body)
        kept = tuple(q for q in phi.prefix if q[1] in free)
        return Quant(kept, body) if kept else body
    if isinstance(phi, (Top, Prop)):
        return phi
    if isinstance(phi, NotF):
        return NotF(simplify_vacuous(phi.arg))
    if isinstance(phi, AndF):
        return AndF(simplify_vacuous(phi.lhs), simplify_vacuous(phi.rhs))
    if isinstance(phi, OrF):
        return OrF(simplify_vacuous(phi.lhs), simplify_vacuous(phi.rhs))
    if isinstance(phi, Coop):
        return Coop(phi.t1, phi.t2, simplify_vacuous(phi.objective))
    if isinstance(phi, Next):
        return Next(simplify_vacuous(phi.arg))
    if isinstance(phi, Globally):
        return Globally(simplify_vacuous(phi.arg))
    if isinstance(phi, Until):
        return Until(simplify_vacuous(phi.lhs), simplify_vacuous(phi.rhs))
    raise TypeError(phi)


def merge_quantifiers(phi: Formula) -> Formula:
    """Fuse nested quantifier nodes into maximal admissible prefixes."""
    if isinstance(phi, Quant):
        body = merge_quantifiers(phi.body)
        prefix = phi.prefix
        while (isinstance(body, Quant) and len(prefix) + len(body.prefix) <= 2
               and {i for _, i in prefix}.isdisjoint(i for _, i in body.prefix)):
            prefix = prefix + body.prefix
            body = body.body
        return Quant(prefix, body)
    if isinstance(phi, (Top, Prop)):
        return phi
    if isinstance(phi, NotF):
        return NotF(merge_quantifiers(phi.arg))
    if isinstance(phi, AndF):
        return AndF(merge_quantifiers(phi.lhs), merge_quantifiers(phi.rhs))
    if isinstance(phi, OrF):
        return OrF(merge_quantifiers(phi.lhs), merge_quantifiers(phi.rhs))
    if isinstance(phi, Coop):
        return Coop(phi.t1, phi.t2, merge_quantifiers(phi.objective))
    if isinstance(phi, Next):
        return Next(merge_quantifiers(phi.arg))
    if isinstance(phi, Globally):
        return Globally(merge_quantifiers(phi.arg))
    if isinstance(phi, Until):
        return Until(merge_quantifiers(phi.lhs), merge_quantifiers(phi.rhs))
    raise TypeError(phi)


def _reassoc(phi: Formula) -> Formula:
    """Right-nest chains of the same binary connective, preserving order."""
    if isinstance(phi, (AndF, OrF)):
        ctor = AndF if isinstance(phi, AndF) else OrF
        parts: list[StateFormula] = []

        def flatten(f: StateFormula) -> None:
            if isinstance(f, ctor):
                flatten(f.lhs)
                flatten(f.rhs)
            else:
                parts.append(_reassoc(f))

        flatten(phi)
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = ctor(p, out)
        return out
    if isinstance(phi, (Top, Prop)):
        return phi
    if isinstance(phi, NotF):
        return NotF(_reassoc(phi.arg))
    if isinstance(phi, Coop):
        return Coop(phi.t1, phi.t2, _reassoc(phi.objective))
    if isinstance(phi, Quant):
        return Quant(phi.prefix, _reassoc(phi.body))
    if isinstance(phi, Next):
        return Next(_reassoc(phi.arg))
    if isinstance(phi, Globally):
        return Globally(_reassoc(phi.arg))
    if isinstance(phi, Until):
        return Until(_reassoc(phi.lhs), _reassoc(phi.rhs))
    raise TypeError(phi)


def canonical(phi: Formula) -> Formula:
    """Shape used for structural comparison: vacuous quantifiers dropped,
    prefixes merged, connective chains right-nested."""
    return _reassoc(merge_quantifiers(simplify_vacuous(phi)))


# -- syntax checking ---------------------------------------------------------


@dataclass(frozen=True)
class PositionViolation:
    path: tuple[int, ...]
    slot: int  # 1 = y2 in first position, 2 = y1 in second


@dataclass(frozen=True)
class PolarityViolation:
    path: tuple[int, ...]
    variable: int
    found: str


@dataclass(frozen=True)
class InadmissiblePrefix:
    path: tuple[int, ...]
    prefix: tuple


SyntaxIssue = Union[PositionViolation, PolarityViolation, InadmissiblePrefix]


def check_syntax(phi: StateFormula) -> list[SyntaxIssue]:
    """Positional, polarity and prefix-admissibility checks.

    Vacuous quantifiers are simplified away before the polarity checks, per
    the convention that such quantification is removed automatically.
    """
    issues: list[SyntaxIssue] = []

    def walk(f: Formula, path: tuple[int, ...]) -> None:
        if isinstance(f, Coop):
            if f.t1 == Y2:
                issues.append(PositionViolation(path, 1))
            if f.t2 == Y1:
                issues.append(PositionViolation(path, 2))
        if isinstance(f, Quant):
            admissible = (
                1 <= len(f.prefix) <= 2
                and all(q in (EXISTS, FORALL) and i in (1, 2) for q, i in f.prefix)
                and len({i for _, i in f.prefix}) == len(f.prefix))
            if not admissible:
                issues.append(InadmissiblePrefix(path, f.prefix))
            for _, i in f.prefix:
                found = polarity(f.body, i)
                if found not in ("all-positive", "absent"):
                    issues.append(PolarityViolation(path, i, found))
        for idx, c in enumerate(children(f)):
            walk(c, path + (idx,))

    walk(simplify_vacuous(phi), ())
    return issues


# -- normal form -------------------------------------------------------------


def is_normal_form(phi: StateFormula) -> bool:
    """NF1: no universal y1 or existential y2 quantifiers anywhere.
    NF2: a strategic operator using a bound y1 (or y2) alone is directly
    under its binder, which is the innermost quantifier of that node.
    NF3: one using both is directly under E y1 A y2 or A y2 E y1."""
    target = merge_quantifiers(phi)

    ok = True

    def walk(f: Formula, bound: frozenset[int],
             parent_prefix: Optional[QuantPrefix]) -> None:
        nonlocal ok
        if not ok:
            return
        if isinstance(f, Quant):
            for q, i in f.prefix:
                if (q, i) in ((FORALL, 1), (EXISTS, 2)):
                    ok = False
                    return
            inner = f.prefix if isinstance(f.body, Coop) else None
            walk(f.body, bound | {i for _, i in f.prefix}, inner)
            return
        if isinstance(f, Coop):
            b1 = f.t1 == Y1 and 1 in bound
            b2 = f.t2 == Y2 and 2 in bound
            if b1 and b2:
                if parent_prefix not in (((EXISTS, 1), (FORALL, 2)),
                                         ((FORALL, 2), (EXISTS, 1))):
                    ok = False
                    return
            elif b1:
                if not parent_prefix or parent_prefix[-1] != (EXISTS, 1):
                    ok = False
                    return
            elif b2:
                if not parent_prefix or parent_prefix[-1] != (FORALL, 2):
                    ok = False
                    return
            walk(f.objective, bound, None)
            return
        for c in children(f):
            walk(c, bound, None)

    walk(target, frozenset(), None)
    return ok
