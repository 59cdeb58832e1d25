"""Global model checking of normal-form strategic formulas.

The controllable pre-image of a state set is computed symbolically: per
state a Presburger formula states that some split of the controllable
agents over the available actions defeats every split of the
uncontrollable agents into the target set.  Temporal operators iterate
pre-images to their fixpoints; quantifier prefixes become arithmetic
quantifiers on the per-state formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .logic import (EXISTS, FORALL, AgentVar, AndF, Coop, Globally, Nat, Next,
                    NotF, OrF, Prop, Quant, QuantPrefix, StateFormula, Term,
                    Top, Until, check_syntax, free_agent_vars, is_normal_form,
                    merge_quantifiers, params_of, simplify_vacuous,
                    term_symbol)
from .model import IDLE_COUNTER, HdmasModel, StateSet, guard_union
from .normalform import nf
from .presburger import (Exists, Forall, PresFormula, atom_le, conj,
                         free_vars, implies, num, simplify, substitute, var)
from .qe import QeStats, decide

Assignment = Mapping[str, int]

PFIXES: tuple[QuantPrefix, ...] = (
    (),
    ((EXISTS, 1),),
    ((FORALL, 2),),
    ((EXISTS, 1), (FORALL, 2)),
    ((FORALL, 2), (EXISTS, 1)),
)


class EngineError(Exception):
    pass


class UnassignedParameter(EngineError):
    """A term was not closed by the assignment."""


class NotNormalForm(EngineError):
    """global_mc requires a normal-form input."""


class FormulaSyntaxError(EngineError):
    def __init__(self, issues):
        super().__init__(f"ill-formed formula: {issues}")
        self.issues = issues


def _resolve_term(t: Term, theta: Assignment, pfix: QuantPrefix) -> Union[int, str]:
    """Close a term by the assignment unless the prefix binds it."""
    if isinstance(t, Nat):
        return t.value
    if isinstance(t, AgentVar) and any(i == t.index for _, i in pfix):
        return f"y{t.index}"
    sym = term_symbol(t)
    if sym is None or sym not in theta:
        raise UnassignedParameter(sym)
    value = theta[sym]
    if value < 0:
        raise UnassignedParameter(f"{sym} must be a natural, got {value}")
    return value


def build_prf(model: HdmasModel, state: str, t1: Union[int, str],
              t2: Union[int, str], targets: StateSet,
              resolve_availability: bool = True) -> PresFormula:
    """Per-state controllability formula for a target set.

    Counters split into controllable and adversarial shares ``k``/``l``.
    With ``resolve_availability`` (the default) availability is resolved
    structurally: only counters that occur in the guard union are
    quantified, and the idle counters are folded into inequalities on the
    share sums.  Otherwise the construction keeps one quantifier per
    action plus the idle shares and equality-shaped sum constraints, with
    availability turned into constant implications.
    """
    grd = guard_union(model, state, targets)
    t1_term = var(t1) if isinstance(t1, str) else num(t1)
    t2_term = var(t2) if isinstance(t2, str) else num(t2)

    if resolve_availability:
        counters = [c for c in model.counters_at(state)
                    if c != IDLE_COUNTER and c in free_vars(grd)]
        names = [c.lstrip("#") for c in counters]
        ks = [f"k_{n}" for n in names]
        ls = [f"l_{n}" for n in names]
        shifted = grd
        for c, k, l in zip(counters, ks, ls):
            shifted = substitute(shifted, c, var(k).add(var(l)))
        k_sum = num(0)
        for k in ks:
            k_sum = k_sum.add(var(k))
        l_sum = num(0)
        for l in ls:
            l_sum = l_sum.add(var(l))
        inner: PresFormula = implies(atom_le(l_sum, t2_term), shifted)
        for l in reversed(ls):
            inner = Forall(l, inner)
        body = conj((atom_le(k_sum, t1_term), inner))
        for k in reversed(ks):
            body = Exists(k, body)
        return simplify(body)

    # faithful construction with explicit availability constants
    from .presburger import FALSE, TRUE, atom_eq, atom_ne
    available = model.avail[state]
    names = list(model.table.actions)
    ks = [f"k_{n}" for n in names]
    ls = [f"l_{n}" for n in names]
    shifted = grd
    for a, k, l in zip(names, ks, ls):
        shifted = substitute(shifted, model.table.counter(a),
                             var(k).add(var(l)))
    avail_k = conj(tuple(implies(atom_ne(var(k), 0),
                                 TRUE if a in available else FALSE)
                         for a, k in zip(names, ks)))
    avail_l = conj(tuple(implies(atom_ne(var(l), 0),
                                 TRUE if a in available else FALSE)
                         for a, l in zip(names, ls)))
    k_sum = var("k_eps")
    for k in ks:
        k_sum = k_sum.add(var(k))
    l_sum = var("l_eps")
    for l in ls:
        l_sum = l_sum.add(var(l))
    inner = implies(conj((avail_l, atom_eq(l_sum, t2_term))), shifted)
    for l in reversed(ls + ["l_eps"]):
        inner = Forall(l, inner)
    body = conj((avail_k, atom_eq(k_sum, t1_term), inner))
    for k in reversed(ks + ["k_eps"]):
        body = Exists(k, body)
    return body


@dataclass
class ModelChecker:
    """Caching evaluator for one model.

    Decisions and subformula extensions are memoised; the instance is
    reusable across formulas and assignments.
    """

    model: HdmasModel
    stats: QeStats = field(default_factory=QeStats)
    resolve_availability: bool = True
    _decisions: dict[PresFormula, bool] = field(default_factory=dict)
    _extents: dict = field(default_factory=dict)

    def _decide(self, phi: PresFormula) -> bool:
        hit = self._decisions.get(phi)
        if hit is None:
            hit = decide(phi, self.stats)
            self._decisions[phi] = hit
        return hit

    def pre_image(self, t1: Term, t2: Term, targets: StateSet,
                  theta: Assignment, pfix: QuantPrefix) -> StateSet:
        """States where the prefixed controllability formula is true."""
        if pfix not in PFIXES:
            raise EngineError(f"unsupported quantifier prefix {pfix}")
        r1 = _resolve_term(t1, theta, pfix)
        r2 = _resolve_term(t2, theta, pfix)
        out = 0
        for i, s in enumerate(self.model.states):
            phi = build_prf(self.model, s, r1, r2, targets,
                            self.resolve_availability)
            for q, y in reversed(pfix):
                name = f"y{y}"
                phi = Exists(name, phi) if q == EXISTS else Forall(name, phi)
            if self._decide(phi):
                out |= 1 << i
        return out

    def g_fixpoint(self, t1: Term, t2: Term, psi: StateFormula,
                   theta: Assignment, pfix: QuantPrefix,
                   trace: Optional[list[StateSet]] = None) -> StateSet:
        """Greatest fixpoint for invariance objectives."""
        targets = self.global_mc(psi, theta)
        w = self.model.all_states()
        z = targets
        if trace is not None:
            trace.append(z)
        while w & ~z:
            w = z
            z = self.pre_image(t1, t2, w, theta, pfix) & targets
            if trace is not None:
                trace.append(z)
        return z

    def u_fixpoint(self, t1: Term, t2: Term, psi1: StateFormula,
                   psi2: StateFormula, theta: Assignment, pfix: QuantPrefix,
                   trace: Optional[list[StateSet]] = None) -> StateSet:
        """Least fixpoint for reachability-until objectives."""
        q1 = self.global_mc(psi1, theta)
        q2 = self.global_mc(psi2, theta)
        w = 0
        z = q2
        if trace is not None:
            trace.append(z)
        while z & ~w:
            w = z
            z = q2 | (self.pre_image(t1, t2, w, theta, pfix) & q1)
            if trace is not None:
                trace.append(z)
        return z

    def global_mc(self, phi: StateFormula, theta: Assignment) -> StateSet:
        """Extension of a normal-form formula under an assignment."""
        phi = merge_quantifiers(simplify_vacuous(phi))
        if not is_normal_form(phi):
            raise NotNormalForm(phi)
        return self._extent(phi, theta)

    def check(self, state: str, phi: StateFormula, theta: Assignment) -> bool:
        """Local check of an arbitrary well-formed formula via normalisation."""
        issues = check_syntax(phi)
        if issues:
            raise FormulaSyntaxError(issues)
        mask = self.global_mc(nf(phi), theta)
        return bool(mask >> self.model.index(state) & 1)

    # -- internals -------------------------------------------------------

    def _theta_key(self, phi: StateFormula, theta: Assignment) -> tuple:
        relevant = [f"z{i}" for i in params_of(phi)]
        relevant += [f"y{i}" for i in free_agent_vars(phi)]
        return tuple(sorted((k, theta[k]) for k in relevant if k in theta))

    def _extent(self, phi: StateFormula, theta: Assignment) -> StateSet:
        key = (phi, self._theta_key(phi, theta))
        hit = self._extents.get(key)
        if hit is not None:
            return hit
        out = self._extent_raw(phi, theta)
        self._extents[key] = out
        return out

    def _extent_raw(self, phi: StateFormula, theta: Assignment) -> StateSet:
        model = self.model
        if isinstance(phi, Top):
            return model.all_states()
        if isinstance(phi, Prop):
            return model.prop_mask(phi.name)
        if isinstance(phi, NotF):
            return model.all_states() & ~self._extent(phi.arg, theta)
        if isinstance(phi, AndF):
            return self._extent(phi.lhs, theta) & self._extent(phi.rhs, theta)
        if isinstance(phi, OrF):
            return self._extent(phi.lhs, theta) | self._extent(phi.rhs, theta)
        if isinstance(phi, Coop):
            return self._temporal(phi, theta, ())
        if isinstance(phi, Quant):
            if not isinstance(phi.body, Coop):
                raise NotNormalForm(phi)
            return self._temporal(phi.body, theta, phi.prefix)
        raise TypeError(phi)

    def _temporal(self, op: Coop, theta: Assignment,
                  pfix: QuantPrefix) -> StateSet:
        objective = op.objective
        if isinstance(objective, Next):
            targets = self._extent(objective.arg, theta)
            return self.pre_image(op.t1, op.t2, targets, theta, pfix)
        if isinstance(objective, Globally):
            return self.g_fixpoint(op.t1, op.t2, objective.arg, theta, pfix)
        if isinstance(objective, Until):
            return self.u_fixpoint(op.t1, op.t2, objective.lhs,
                                   objective.rhs, theta, pfix)
        raise TypeError(objective)


# functional entry points matching the operation contracts


def pre_image(model: HdmasModel, t1: Term, t2: Term, targets: StateSet,
              theta: Assignment, pfix: QuantPrefix) -> StateSet:
    return ModelChecker(model).pre_image(t1, t2, targets, theta, pfix)


def g_fixpoint(model: HdmasModel, t1: Term, t2: Term, psi: StateFormula,
               theta: Assignment, pfix: QuantPrefix,
               trace: Optional[list[StateSet]] = None) -> StateSet:
    return ModelChecker(model).g_fixpoint(t1, t2, psi, theta, pfix, trace)


def u_fixpoint(model: HdmasModel, t1: Term, t2: Term, psi1: StateFormula,
               psi2: StateFormula, theta: Assignment, pfix: QuantPrefix,
               trace: Optional[list[StateSet]] = None) -> StateSet:
    return ModelChecker(model).u_fixpoint(t1, t2, psi1, psi2, theta, pfix, trace)


def global_mc(model: HdmasModel, phi: StateFormula,
              theta: Assignment) -> StateSet:
    return ModelChecker(model).global_mc(phi, theta)


def check(model: HdmasModel, state: str, phi: StateFormula,
          theta: Assignment) -> bool:
    return ModelChecker(model).check(state, phi, theta)
