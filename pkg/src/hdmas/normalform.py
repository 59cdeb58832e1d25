"""Quantifier-prefix normalisation of strategic formulas.

Three rewrites: ``pqe`` eliminates the quantifier patterns that collapse
by monotonicity, ``push`` distributes a quantifier prefix inward until it
sits directly on strategic operators, and ``nf`` composes the two
bottom-up.  The result of ``nf`` uses no universal y1 or existential y2
quantifier and every surviving binder stands immediately before the
operator it quantifies; it is equivalent to the input on finite models.
"""

from __future__ import annotations

from .logic import (EXISTS, FORALL, AndF, Coop, Formula, Globally, Nat,
                    Next, NotF, OrF, Prop, Quant, QuantPrefix, Top, Until,
                    Y1, Y2, subst_term)

_ZERO = Nat(0)


def _peel(phi: Formula) -> tuple[list, Formula]:
    quants = []
    while isinstance(phi, Quant):
        quants.extend(phi.prefix)
        phi = phi.body
    return quants, phi


def _rebuild(quants: list, core: Formula) -> Formula:
    out = core
    for q in reversed(quants):
        out = Quant((q,), out)
    return out


def _dual(prefix: QuantPrefix) -> QuantPrefix:
    return tuple((FORALL if q == EXISTS else EXISTS, i) for q, i in prefix)


def pqe(xi: Formula) -> Formula:
    """Replace trivialisable quantifier patterns by their closed forms."""
    if isinstance(xi, (Top, Prop)):
        return xi
    if isinstance(xi, NotF):
        return NotF(pqe(xi.arg))
    if isinstance(xi, AndF):
        return AndF(pqe(xi.lhs), pqe(xi.rhs))
    if isinstance(xi, OrF):
        return OrF(pqe(xi.lhs), pqe(xi.rhs))
    if isinstance(xi, Coop):
        return Coop(xi.t1, xi.t2, pqe(xi.objective))
    if isinstance(xi, Next):
        return Next(pqe(xi.arg))
    if isinstance(xi, Globally):
        return Globally(pqe(xi.arg))
    if isinstance(xi, Until):
        return Until(pqe(xi.lhs), pqe(xi.rhs))
    if isinstance(xi, Quant):
        quants, core = _peel(xi)
        if len(quants) == 2 and isinstance(core, Coop) \
                and core.t1 == Y1 and core.t2 == Y2:
            pair = (quants[0], quants[1])
            chi = pqe(core.objective)
            if pair in (((FORALL, 1), (EXISTS, 2)), ((EXISTS, 2), (FORALL, 1))):
                chi = subst_term(subst_term(chi, Y1, 0), Y2, 0)
                return Coop(_ZERO, _ZERO, chi)
            if pair in (((FORALL, 1), (FORALL, 2)), ((FORALL, 2), (FORALL, 1))):
                return Quant(((FORALL, 2),),
                             Coop(_ZERO, Y2, subst_term(chi, Y1, 0)))
            if pair in (((EXISTS, 1), (EXISTS, 2)), ((EXISTS, 2), (EXISTS, 1))):
                return Quant(((EXISTS, 1),),
                             Coop(Y1, _ZERO, subst_term(chi, Y2, 0)))
        if len(quants) == 1 and isinstance(core, Coop):
            q = quants[0]
            if q == (FORALL, 1) and core.t1 == Y1:
                return Coop(_ZERO, core.t2,
                            subst_term(pqe(core.objective), Y1, 0))
            if q == (EXISTS, 2) and core.t2 == Y2:
                return Coop(core.t1, _ZERO,
                            subst_term(pqe(core.objective), Y2, 0))
        return Quant((quants[0],), pqe(_rebuild(quants[1:], core)))
    raise TypeError(xi)


def push(prefix: QuantPrefix, xi: Formula) -> Formula:
    """Distribute a quantifier prefix inward onto strategic operators.

    Negation dualises the prefix; at a strategic operator the prefix keeps
    exactly the quantifiers whose variable stands in the matching slot and
    is also pushed into the temporal objective; at an inner quantifier the
    shadowed part of the prefix is dropped.
    """
    if isinstance(xi, (Top, Prop)):
        return xi
    if isinstance(xi, NotF):
        return NotF(push(_dual(prefix), xi.arg))
    if isinstance(xi, AndF):
        return AndF(push(prefix, xi.lhs), push(prefix, xi.rhs))
    if isinstance(xi, OrF):
        return OrF(push(prefix, xi.lhs), push(prefix, xi.rhs))
    if isinstance(xi, Next):
        return Next(push(prefix, xi.arg))
    if isinstance(xi, Globally):
        return Globally(push(prefix, xi.arg))
    if isinstance(xi, Until):
        return Until(push(prefix, xi.lhs), push(prefix, xi.rhs))
    if isinstance(xi, Coop):
        body = Coop(xi.t1, xi.t2, push(prefix, xi.objective))
        if len(prefix) == 1:
            q, i = prefix[0]
            matches = (xi.t1 == Y1) if i == 1 else (xi.t2 == Y2)
            return Quant(prefix, body) if matches else body
        m1 = xi.t1 == Y1
        m2 = xi.t2 == Y2
        if m1 and m2:
            return Quant(prefix, body)
        if not m1 and not m2:
            return body
        keep = 1 if m1 else 2
        entry = next(q for q in prefix if q[1] == keep)
        return Quant((entry,), body)
    if isinstance(xi, Quant):
        head = xi.prefix[0]
        rest: Formula = xi.body if len(xi.prefix) == 1 \
            else Quant(xi.prefix[1:], xi.body)
        if len(prefix) == 1:
            if prefix[0][1] == head[1]:
                return push((head,), rest)
            return push((prefix[0], head), rest)
        first, second = prefix
        if first[1] == head[1]:
            return push((second, head), rest)
        return push((first, head), rest)
    raise TypeError(xi)


def nf(xi: Formula) -> Formula:
    """Normal form: push the prefix through the recursively normalised body,
    then eliminate the trivialisable patterns."""
    if isinstance(xi, (Top, Prop)):
        return xi
    if isinstance(xi, NotF):
        return NotF(nf(xi.arg))
    if isinstance(xi, AndF):
        return AndF(nf(xi.lhs), nf(xi.rhs))
    if isinstance(xi, OrF):
        return OrF(nf(xi.lhs), nf(xi.rhs))
    if isinstance(xi, Coop):
        return Coop(xi.t1, xi.t2, nf(xi.objective))
    if isinstance(xi, Quant):
        return pqe(push(xi.prefix, nf(xi.body)))
    if isinstance(xi, Next):
        return Next(nf(xi.arg))
    if isinstance(xi, Globally):
        return Globally(nf(xi.arg))
    if isinstance(xi, Until):
        return Until(nf(xi.lhs), nf(xi.rhs))
    raise TypeError(xi)
