"""Deciding truth of Presburger formulas over the naturals.

The procedure is Cooper-style quantifier elimination over the integers
with every quantified variable relativised by ``var >= 0``.  Universal
quantifiers are handled by duality, elimination runs innermost-first, and
within a same-quantifier block variables are eliminated cheapest-first.
Between steps the formula is kept aggressively simplified; conjunctions
of literals take exact shortcuts (equality pivoting, unit-coefficient
bound combination, interval refutation) and full Cooper elimination is
the fallback.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterable, Optional

from .presburger import (DVD, EQ, FALSE, LT, TRUE, And, Atom, AtomF, Exists,
                         FalseF, Forall, FreeVariableError, Implies, LinTerm,
                         Not, Or, PresFormula, QuantifiedInput, TrueF,
                         _fold_atom, _sign_split, atom_dvd, atom_ge, atoms_of,
                         conj, disj, free_vars, implies, is_quantifier_free,
                         neg, num, simplify, to_nnf, var)

# conjunct count above which a formula is not expanded to DNF
_DNF_CAP = 4096


@dataclass
class QeStats:
    """Observability counters for a run of the decision procedure."""

    eliminated: int = 0
    peak_divisor_lcm: int = 1
    peak_atoms: int = 0
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return {
            "eliminated_quantifiers": self.eliminated,
            "peak_divisor_lcm": self.peak_divisor_lcm,
            "peak_atom_count": self.peak_atoms,
            "elapsed_seconds": self.elapsed,
        }


def _relativize(v: str) -> PresFormula:
    return atom_ge(var(v), 0)


def eliminate_exists(v: str, phi: PresFormula,
                     stats: Optional[QeStats] = None) -> PresFormula:
    """Quantifier-free formula equivalent over N to ``exists v >= 0. phi``.

    The result may contain divisibility atoms.
    """
    if not is_quantifier_free(phi):
        raise QuantifiedInput("eliminate_exists needs a quantifier-free body")
    body = simplify(to_nnf(conj((phi, _relativize(v)))))
    out = simplify(_eliminate(v, body, stats))
    if stats is not None:
        stats.eliminated += 1
        stats.peak_atoms = max(stats.peak_atoms, len(atoms_of(out)))
    return out


def decide(phi: PresFormula, stats: Optional[QeStats] = None) -> bool:
    """Truth over N of a closed formula, all quantifiers relativised to >= 0."""
    fv = free_vars(phi)
    if fv:
        raise FreeVariableError(sorted(fv))
    started = time.perf_counter()
    result = simplify(_close(rename_apart(phi), stats))
    if stats is not None:
        stats.elapsed += time.perf_counter() - started
    if isinstance(result, TrueF):
        return True
    if isinstance(result, FalseF):
        return False
    raise AssertionError("closed formula did not reduce to a constant")


def is_valid(phi: PresFormula, variables: Iterable[str],
             stats: Optional[QeStats] = None) -> bool:
    """Whether a quantifier-free formula holds for every assignment over N."""
    closed: PresFormula = phi
    for v in sorted(set(variables) | set(free_vars(phi)), reverse=True):
        closed = Forall(v, closed)
    return decide(closed, stats)


def cooper_bound(phi: PresFormula, variables: Iterable[str]) -> int:
    """Enumeration bound: lcm of divisors and coefficients of the given
    variables, plus the largest absolute constant in the formula."""
    vset = set(variables)
    l = 1
    biggest = 0
    for a in atoms_of(phi):
        if a.kind == DVD:
            l = math.lcm(l, a.divisor)
        for v, c in a.term.coeffs:
            if v in vset and c != 0:
                l = math.lcm(l, abs(c))
        biggest = max(biggest, abs(a.term.const))
    return l + biggest


def rename_apart(phi: PresFormula) -> PresFormula:
    """Alpha-rename so no bound variable is repeated or shadows a free one."""
    used = set(free_vars(phi))
    counter = [0]

    def fresh(name: str) -> str:
        candidate = name
        while candidate in used:
            counter[0] += 1
            candidate = f"{name}~{counter[0]}"
        used.add(candidate)
        return candidate

    def walk(f: PresFormula, env: dict[str, str]) -> PresFormula:
        if isinstance(f, (TrueF, FalseF)):
            return f
        if isinstance(f, AtomF):
            t = f.atom.term
            if not any(v in env for v in t.vars()):
                return f
            return AtomF(Atom(f.atom.kind, t.rename(env), f.atom.divisor))
        if isinstance(f, Not):
            return Not(walk(f.arg, env))
        if isinstance(f, And):
            return And(tuple(walk(a, env) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(walk(a, env) for a in f.args))
        if isinstance(f, Implies):
            return Implies(walk(f.lhs, env), walk(f.rhs, env))
        if isinstance(f, (Exists, Forall)):
            name = fresh(f.var)
            env2 = dict(env)
            env2[f.var] = name
            body = walk(f.body, env2)
            return Exists(name, body) if isinstance(f, Exists) else Forall(name, body)
        raise TypeError(f)

    return walk(phi, {})


# ---------------------------------------------------------------------------
# quantifier structure


def _close(phi: PresFormula, stats: Optional[QeStats]) -> PresFormula:
    """Eliminate all quantifiers bottom-up; result is quantifier-free."""
    if isinstance(phi, Exists):
        names = [phi.var]
        body = phi.body
        while isinstance(body, Exists):
            names.append(body.var)
            body = body.body
        return _eliminate_block(names, _close(body, stats), stats)
    if isinstance(phi, Forall):
        names = [phi.var]
        body = phi.body
        while isinstance(body, Forall):
            names.append(body.var)
            body = body.body
        return _forall_block(names, _close(body, stats), stats)
    if isinstance(phi, Not):
        return neg(_close(phi.arg, stats))
    if isinstance(phi, And):
        return conj(tuple(_close(a, stats) for a in phi.args))
    if isinstance(phi, Or):
        return disj(tuple(_close(a, stats) for a in phi.args))
    if isinstance(phi, Implies):
        return implies(_close(phi.lhs, stats), _close(phi.rhs, stats))
    return phi


def _block_cost(v: str, phi: PresFormula) -> tuple:
    """Elimination cost estimate; variables in a block commute freely."""
    l = 1
    occurrences = 0
    unit_eq = False
    for a in atoms_of(phi):
        c = a.term.coeff(v)
        if c == 0:
            continue
        occurrences += 1
        l = math.lcm(l, abs(c))
        if a.kind == EQ and abs(c) == 1:
            unit_eq = True
    return (0 if unit_eq else 1, l, occurrences)


def _eliminate_block(names: list[str], phi: PresFormula,
                     stats: Optional[QeStats]) -> PresFormula:
    cells = _block_via_cells(names, phi, stats, negate=False)
    if cells is not None:
        return cells
    remaining = list(names)
    out = phi
    while remaining:
        v = min(remaining, key=lambda n: _block_cost(n, out))
        remaining.remove(v)
        out = eliminate_exists(v, out, stats)
    return out


def _forall_block(names: list[str], phi: PresFormula,
                  stats: Optional[QeStats]) -> PresFormula:
    cells = _block_via_cells(names, phi, stats, negate=True)
    if cells is not None:
        return cells
    remaining = list(names)
    out = phi
    while remaining:
        v = min(remaining, key=lambda n: _block_cost(n, out))
        remaining.remove(v)
        inner = simplify(to_nnf(neg(out)))
        out = simplify(neg(eliminate_exists(v, inner, stats)))
    return out


# ---------------------------------------------------------------------------
# flat cell pipeline
#
# Inside a quantifier block the formula is a frontier of cells (window
# maps plus divisibility literals).  Eliminating a variable maps cells to
# cells and the frontier is deduplicated and subsumption-pruned globally
# after every step, which keeps alternating prefixes tractable.  A
# universal block complements into cells, eliminates existentially, and
# complements back.

_CELL_CAP = 30_000


def _smart_dnf_reps(phi: PresFormula, cap: int) -> Optional[dict]:
    items = list(phi.args) if isinstance(phi, And) else [phi]
    alternatives = []
    for child in items:
        sub = _to_dnf(child, cap)
        if sub is None:
            return None
        alternatives.append(sub)
    alternatives.sort(key=len)

    frontier: dict = {_cell_key({}, frozenset()): ({}, frozenset())}
    for alts in alternatives:
        nxt: dict = {}
        for windows, divs in frontier.values():
            for alt in alts:
                ext = _cell_extend(windows, divs, alt)
                if ext is None:
                    continue
                nxt.setdefault(_cell_key(*ext), ext)
        if len(nxt) > cap:
            return None
        if len(nxt) > 1:
            nxt = _cells_prune_reps(nxt)
        frontier = nxt
        if not frontier:
            return {}
    return frontier


def _merge_rep(target: dict, lits) -> None:
    ext = _cell_extend({}, frozenset(), lits)
    if ext is not None:
        target.setdefault(_cell_key(*ext), ext)


def _complement_reps(reps: dict, cap: int) -> Optional[dict]:
    clauses = tuple(simplify(to_nnf(neg(conj(tuple(_cell_literals(w, d))))))
                    for w, d in reps.values())
    body = conj(clauses) if len(clauses) != 1 else clauses[0]
    if isinstance(body, FalseF):
        return {}
    if isinstance(body, TrueF):
        return {_cell_key({}, frozenset()): ({}, frozenset())}
    return _smart_dnf_reps(body, cap)


def _reps_cost(v: str, lists: list[list[PresFormula]]) -> tuple:
    l = 1
    occurrences = 0
    unit_eq = False
    for lits in lists:
        for lit in lits:
            a = _literal_atom(lit)
            c = a.term.coeff(v)
            if c == 0:
                continue
            occurrences += 1
            l = math.lcm(l, abs(c))
            if a.kind == EQ and abs(c) == 1 and isinstance(lit, AtomF):
                unit_eq = True
    return (0 if unit_eq else 1, l, occurrences)


def _exists_block_reps(names: list[str], reps: dict,
                       stats: Optional[QeStats]) -> Optional[dict]:
    remaining = list(names)
    while remaining:
        lists = [_cell_literals(w, d) for w, d in reps.values()]
        v = min(remaining, key=lambda n: _reps_cost(n, lists))
        remaining.remove(v)
        rel = atom_ge(var(v), 0)
        nxt: dict = {}
        for lits in lists:
            if all(_literal_atom(l).term.coeff(v) == 0 for l in lits):
                _merge_rep(nxt, lits)
            else:
                lowered = simplify(_eliminate_conjunct(v, lits + [rel], stats))
                if isinstance(lowered, FalseF):
                    continue
                sub = _smart_dnf_reps(lowered, _CELL_CAP)
                if sub is None:
                    return None
                for w, d in sub.values():
                    nxt.setdefault(_cell_key(w, d), (w, d))
            if len(nxt) > _CELL_CAP:
                return None
        reps = _cells_prune_reps(nxt) if len(nxt) > 1 else nxt
        if stats is not None:
            stats.eliminated += 1
            stats.peak_atoms = max(stats.peak_atoms,
                                   sum(len(w) * 2 + len(d)
                                       for w, d in reps.values()))
    return reps


def _reps_formula(reps: dict) -> PresFormula:
    return simplify(disj(tuple(conj(tuple(_cell_literals(w, d)))
                               for w, d in reps.values())))


def _block_via_cells(names: list[str], phi: PresFormula,
                     stats: Optional[QeStats],
                     negate: bool) -> Optional[PresFormula]:
    body = simplify(to_nnf(neg(phi) if negate else phi))
    reps = _smart_dnf_reps(body, _CELL_CAP)
    if reps is None:
        return None
    out = _exists_block_reps(names, reps, stats)
    if out is None:
        return None
    if negate:
        flipped = _complement_reps(out, _CELL_CAP)
        if flipped is None:
            return simplify(neg(_reps_formula(out)))
        out = flipped
    return _reps_formula(out)


# ---------------------------------------------------------------------------
# single-variable elimination


_ELIM_CACHE: dict = {}
_ELIM_CACHE_LIMIT = 200_000
_CACHEABLE_ATOMS = 400


def _eliminate(v: str, phi: PresFormula, stats: Optional[QeStats]) -> PresFormula:
    """Eliminate ``exists v`` over the integers from an NNF formula.

    Naturals semantics comes from the relativisation atom conjoined by the
    caller, which mentions ``v`` and therefore travels with it.
    """
    if v not in free_vars(phi):
        return phi
    small = len(atoms_of(phi)) <= _CACHEABLE_ATOMS
    if small:
        hit = _ELIM_CACHE.get((v, phi))
        if hit is not None:
            return hit
    out = _eliminate_raw(v, phi, stats)
    if small:
        if len(_ELIM_CACHE) > _ELIM_CACHE_LIMIT:
            _ELIM_CACHE.clear()
        _ELIM_CACHE[(v, phi)] = out
    return out


def _eliminate_raw(v: str, phi: PresFormula, stats: Optional[QeStats]) -> PresFormula:
    if isinstance(phi, Or):
        return disj(tuple(_eliminate(v, d, stats) for d in phi.args))
    if isinstance(phi, And):
        outside = [a for a in phi.args if v not in free_vars(a)]
        inside = [a for a in phi.args if v in free_vars(a)]
        if outside:
            return conj(outside + [_eliminate(v, conj(inside), stats)])
    dnf = _smart_dnf(phi, _DNF_CAP)
    if dnf is not None:
        return disj(tuple(simplify(_eliminate_conjunct(v, list(lits), stats))
                          for lits in dnf))
    return _cooper(v, phi, stats)


def _to_dnf(phi: PresFormula, cap: int) -> Optional[list[list[PresFormula]]]:
    if isinstance(phi, (AtomF, Not)):
        return [[phi]]
    if isinstance(phi, TrueF):
        return [[]]
    if isinstance(phi, FalseF):
        return []
    if isinstance(phi, Or):
        out: list[list[PresFormula]] = []
        for a in phi.args:
            sub = _to_dnf(a, cap)
            if sub is None or len(out) + len(sub) > cap:
                return None
            out.extend(sub)
        return out
    if isinstance(phi, And):
        out = [[]]
        for a in phi.args:
            sub = _to_dnf(a, cap)
            if sub is None or len(out) * len(sub) > cap:
                return None
            out = [x + y for x in out for y in sub]
        return out
    raise TypeError(phi)


def _cell_key(windows: dict, divs: frozenset) -> tuple:
    return (tuple(sorted(windows.items())), divs)


def _window_add(windows: dict, kind: str, part: tuple, sign: int,
                const: int) -> bool:
    """Merge one LT/EQ constraint into the window map; False if empty."""
    lo, hi, eq = windows.get(part, (None, None, None))
    if kind == LT:
        if sign > 0:
            bound = -const
            hi = bound if hi is None else min(hi, bound)
        else:
            bound = const
            lo = bound if lo is None else max(lo, bound)
    else:
        value = -const if sign > 0 else const
        if eq is not None and eq != value:
            return False
        eq = value
    if eq is None and lo is not None and hi is not None and lo + 2 == hi:
        eq = lo + 1
    if eq is not None:
        if (lo is not None and eq <= lo) or (hi is not None and eq >= hi):
            return False
        windows[part] = (None, None, eq)
        return True
    if lo is not None and hi is not None and lo >= hi - 1:
        return False
    windows[part] = (lo, hi, eq)
    return True


def _cell_extend(windows: dict, divs: frozenset,
                 lits) -> tuple | None:
    """Add literals to a copied cell; None when it becomes empty."""
    windows = dict(windows)
    divs = set(divs)
    for lit in lits:
        if isinstance(lit, AtomF) and lit.atom.kind in (LT, EQ):
            term = lit.atom.term
            if not term.coeffs:
                if lit.atom.kind == LT and term.const >= 0:
                    return None
                if lit.atom.kind == EQ and term.const != 0:
                    return None
                continue
            part, sign, const = _sign_split(term)
            if not _window_add(windows, lit.atom.kind, part, sign, const):
                return None
        else:
            folded = lit
            if isinstance(folded, TrueF):
                continue
            if isinstance(folded, FalseF):
                return None
            complement = folded.arg if isinstance(folded, Not) else Not(folded)
            if complement in divs:
                return None
            divs.add(folded)
    return windows, frozenset(divs)


def _cell_literals(windows: dict, divs: frozenset) -> list[PresFormula]:
    out: list[PresFormula] = []
    for part, (lo, hi, eq) in sorted(windows.items()):
        if eq is not None:
            out.append(_fold_atom(Atom(EQ, LinTerm(part, -eq))))
            continue
        if hi is not None:
            out.append(_fold_atom(Atom(LT, LinTerm(part, -hi))))
        if lo is not None:
            out.append(_fold_atom(Atom(LT, LinTerm(
                tuple((v, -c) for v, c in part), lo))))
    out.extend(sorted(divs, key=repr))
    return out


def _cell_subsumed(weak: tuple, strong: tuple) -> bool:
    """Whether every constraint of ``weak`` is implied by ``strong``."""
    w_windows, w_divs = weak
    s_windows, s_divs = strong
    if len(w_windows) > len(s_windows) or len(w_divs) > len(s_divs):
        return False
    if not w_divs <= s_divs:
        return False
    for part, (lo, hi, eq) in w_windows.items():
        s = s_windows.get(part)
        if s is None:
            return False
        s_lo, s_hi, s_eq = s
        if eq is not None:
            if s_eq != eq:
                return False
            continue
        if lo is not None:
            if not ((s_eq is not None and s_eq > lo)
                    or (s_lo is not None and s_lo >= lo)):
                return False
        if hi is not None:
            if not ((s_eq is not None and s_eq < hi)
                    or (s_hi is not None and s_hi <= hi)):
                return False
    return True


_PRUNE_LIMIT = 1200


def _interval(window: tuple) -> tuple:
    lo, hi, eq = window
    if eq is not None:
        return (eq - 1, eq + 1)
    return (lo, hi)


def _mergeable(a: tuple, b: tuple) -> bool:
    # open integer intervals; None is unbounded.  Disjoint with a gap
    # exactly when one starts at or after the other ends.
    a_lo, a_hi = a
    b_lo, b_hi = b
    if a_lo is None or a_hi is None or b_lo is None or b_hi is None:
        left_ok = b_lo is None or a_hi is None or b_lo < a_hi
        right_ok = a_lo is None or b_hi is None or a_lo < b_hi
        return left_ok and right_ok
    return max(a_lo, b_lo) <= min(a_hi, b_hi) - 1


def _union_window(a: tuple, b: tuple) -> tuple:
    a_lo, a_hi = a
    b_lo, b_hi = b
    lo = None if a_lo is None or b_lo is None else min(a_lo, b_lo)
    hi = None if a_hi is None or b_hi is None else max(a_hi, b_hi)
    if lo is not None and hi is not None and lo + 2 == hi:
        return (None, None, lo + 1)
    return (lo, hi, None)


def _merge_cells(cells: dict) -> dict:
    """Union cells identical up to one adjacent or overlapping window."""
    buckets: dict = {}
    for w, d in cells.values():
        parts = tuple(sorted(w))
        buckets.setdefault((parts, d), []).append(
            tuple(w[p] for p in parts))
    out: dict = {}
    for (parts, d), rows in buckets.items():
        rows = list(dict.fromkeys(rows))
        if len(rows) > 1 and len(rows) <= 3000:
            changed = True
            while changed:
                changed = False
                for i in range(len(rows)):
                    if rows[i] is None:
                        continue
                    for j in range(i + 1, len(rows)):
                        if rows[j] is None:
                            continue
                        diff = [k for k in range(len(parts))
                                if rows[i][k] != rows[j][k]]
                        if len(diff) != 1:
                            continue
                        k = diff[0]
                        ia, ib = _interval(rows[i][k]), _interval(rows[j][k])
                        if _mergeable(ia, ib):
                            merged = list(rows[i])
                            merged[k] = _union_window(ia, ib)
                            rows[i] = tuple(merged)
                            rows[j] = None
                            changed = True
                rows = [r for r in rows if r is not None]
        for row in rows:
            w = dict(zip(parts, row))
            out[_cell_key(w, d)] = (w, d)
    return out


def _cells_prune_reps(cells: dict) -> dict:
    if len(cells) > 1:
        cells = _merge_cells(cells)
    if len(cells) > _PRUNE_LIMIT:
        return cells
    order = sorted(cells.items(),
                   key=lambda kv: len(kv[1][0]) + len(kv[1][1]))
    survivors: list[tuple] = []
    out = {}
    for key, rep in order:
        if any(_cell_subsumed(prev, rep) for prev in survivors):
            continue
        survivors.append(rep)
        out[key] = rep
    return out


def _smart_dnf(phi: PresFormula, cap: int) -> Optional[list[list[PresFormula]]]:
    """Breadth-first disjunctive decomposition into canonical cells."""
    reps = _smart_dnf_reps(phi, cap)
    if reps is None:
        return None
    return [_cell_literals(w, d) for w, d in reps.values()]


def _literal_atom(lit: PresFormula) -> Atom:
    if isinstance(lit, AtomF):
        return lit.atom
    if isinstance(lit, Not) and isinstance(lit.arg, AtomF):
        return lit.arg.atom
    raise TypeError(lit)


def _subst_literal(lit: PresFormula, v: str, replacement: LinTerm) -> PresFormula:
    a = _literal_atom(lit)
    folded = _fold_atom(Atom(a.kind, a.term.subst(v, replacement), a.divisor))
    return neg(folded) if isinstance(lit, Not) else folded


def _refute_intervals(atoms: list[Atom]) -> bool:
    """True when interval propagation proves the conjunction empty.

    Sound over the integers; divisibility atoms are ignored.
    """
    los: dict[str, int] = {}
    his: dict[str, int] = {}
    rows = []
    for a in atoms:
        if a.kind == LT:
            rows.append((a.term, -a.term.const - 1))          # sum c_i v_i <= rhs
        elif a.kind == EQ:
            rows.append((a.term, -a.term.const))
            rows.append((a.term.scale(-1), a.term.const))
    for _ in range(6):
        changed = False
        for t, rhs in rows:
            for v, c in t.coeffs:
                slack = rhs
                ok = True
                for u, cu in t.coeffs:
                    if u == v:
                        continue
                    if cu > 0:
                        if u not in los:
                            ok = False
                            break
                        slack -= cu * los[u]
                    else:
                        if u not in his:
                            ok = False
                            break
                        slack -= cu * his[u]
                if not ok:
                    continue
                if c > 0:
                    b = slack // c
                    if v not in his or b < his[v]:
                        his[v] = b
                        changed = True
                else:
                    # c*v <= slack with c < 0 gives v >= ceil(slack / c)
                    b = -(slack // (-c))
                    if v not in los or b > los[v]:
                        los[v] = b
                        changed = True
                if v in los and v in his and los[v] > his[v]:
                    return True
        if not changed:
            break
    return False


def _conjunct_atoms(phi: PresFormula) -> list[Atom]:
    """Positive atoms conjunctively implied at the top of the formula."""
    out: list[Atom] = []
    if isinstance(phi, AtomF):
        out.append(phi.atom)
    elif isinstance(phi, And):
        for a in phi.args:
            if isinstance(a, AtomF):
                out.append(a.atom)
            elif isinstance(a, And):
                out.extend(_conjunct_atoms(a))
    return out


def _eliminate_conjunct(v: str, lits: list[PresFormula],
                        stats: Optional[QeStats]) -> PresFormula:
    outside = [l for l in lits if v not in free_vars(l)]
    inside = [l for l in lits if v in free_vars(l)]
    if not inside:
        return conj(outside)
    if _refute_intervals([_literal_atom(l) for l in lits
                          if isinstance(l, AtomF)]):
        return FALSE

    # exact pivot on an equality; unit coefficients substitute directly,
    # larger ones rescale the other literals and add a divisibility atom
    for i, lit in enumerate(inside):
        if isinstance(lit, AtomF) and lit.atom.kind == EQ:
            c = lit.atom.term.coeff(v)
            rest = lit.atom.term.drop(v)
            others = inside[:i] + inside[i + 1:]
            if c in (1, -1):
                replacement = rest.scale(-1) if c == 1 else rest
                return conj(outside + [_subst_literal(l, v, replacement)
                                       for l in others])
            # c*v = -rest: scale each literal by |c|, then c*v occurrences
            # become -sign(c)*rest; solvability needs |c| to divide rest
            sign = 1 if c > 0 else -1
            absc = abs(c)
            replaced = []
            for l in others:
                a = _literal_atom(l)
                coeff = a.term.coeff(v)
                scaled = a.term.scale(absc)
                fixed = scaled.drop(v).add(rest.scale(-coeff * sign))
                folded = _fold_atom(Atom(a.kind, fixed,
                                         a.divisor * absc if a.kind == DVD else 0))
                replaced.append(neg(folded) if isinstance(l, Not) else folded)
            return conj(outside + replaced + [atom_dvd(absc, rest)])

    if all(isinstance(l, AtomF) and l.atom.kind == LT for l in inside):
        # strict bounds only: exact projection in the style of the omega
        # test.  The dark shadow a*U - b*L >= (a-1)(b-1) is exact unless a
        # solution hugs a lower bound, and those cases split into finitely
        # many equality splinters that pivot away exactly.
        lowers = []   # (a, L) meaning a*v >= L
        uppers = []   # (b, U) meaning b*v <= U
        for l in inside:
            c = l.atom.term.coeff(v)          # type: ignore[union-attr]
            rest = l.atom.term.drop(v)        # type: ignore[union-attr]
            if c < 0:
                lowers.append((-c, rest.shift(1)))
            else:
                uppers.append((c, rest.scale(-1).shift(-1)))
        if not lowers or not uppers:
            return conj(outside)
        dark = []
        for a, low in lowers:
            for b, up in uppers:
                margin = (a - 1) * (b - 1)
                dark.append(_fold_atom(Atom(
                    LT, low.scale(b).sub(up.scale(a)).shift(margin - 1))))
        branches = [conj(dark)]
        bmax = max(b for b, _ in uppers)
        for a, low in lowers:
            kmax = (a * bmax - a - bmax) // bmax
            for k in range(kmax + 1):
                eq = _fold_atom(Atom(EQ, LinTerm(((v, a),), 0)
                                     .sub(low).shift(-k)))
                branches.append(_eliminate_conjunct(v, inside + [eq], stats))
        return conj(outside + [disj(branches)])

    return conj(outside + [_cooper(v, conj(inside), stats)])


def _scale_atoms(phi: PresFormula, v: str, m: int) -> PresFormula:
    """Rescale so the coefficient of ``v`` is +-1 everywhere (v becomes m*v)."""

    def walk(f: PresFormula) -> PresFormula:
        if isinstance(f, AtomF):
            a = f.atom
            c = a.term.coeff(v)
            if c == 0:
                return f
            factor = m // abs(c)
            scaled = a.term.scale(factor)
            fixed = LinTerm.make(
                tuple((w, cc) for w, cc in scaled.coeffs if w != v)
                + ((v, 1 if c > 0 else -1),),
                scaled.const)
            divisor = a.divisor * factor if a.kind == DVD else 0
            return AtomF(Atom(a.kind, fixed, divisor))
        if isinstance(f, Not):
            return Not(walk(f.arg))
        if isinstance(f, And):
            return And(tuple(walk(x) for x in f.args))
        if isinstance(f, Or):
            return Or(tuple(walk(x) for x in f.args))
        return f

    return walk(phi)


def _subst_tree(phi: PresFormula, v: str, s: LinTerm) -> PresFormula:
    def walk(f: PresFormula) -> PresFormula:
        if isinstance(f, AtomF):
            a = f.atom
            if a.term.coeff(v) == 0:
                return f
            return _fold_atom(Atom(a.kind, a.term.subst(v, s), a.divisor))
        if isinstance(f, Not):
            return neg(walk(f.arg))
        if isinstance(f, And):
            return conj(tuple(walk(x) for x in f.args))
        if isinstance(f, Or):
            return disj(tuple(walk(x) for x in f.args))
        return f

    out = walk(phi)
    if isinstance(out, (And, AtomF)) and _refute_intervals(_conjunct_atoms(out)):
        return FALSE
    return out


def _limit_formula(phi: PresFormula, v: str, positive_large: bool) -> PresFormula:
    """Formula at v -> -inf (or +inf when positive_large)."""

    def walk(f: PresFormula) -> PresFormula:
        if isinstance(f, AtomF):
            a = f.atom
            c = a.term.coeff(v)
            if c == 0 or a.kind == DVD:
                return f
            if a.kind == EQ:
                return FALSE
            grows = (c > 0) == positive_large
            return FALSE if grows else TRUE
        if isinstance(f, Not):
            return neg(walk(f.arg))
        if isinstance(f, And):
            return conj(tuple(walk(x) for x in f.args))
        if isinstance(f, Or):
            return disj(tuple(walk(x) for x in f.args))
        return f

    return walk(phi)


def _cooper(v: str, phi: PresFormula, stats: Optional[QeStats]) -> PresFormula:
    """Full Cooper elimination of ``exists v`` (integer semantics) from NNF."""
    m = 1
    for a in atoms_of(phi):
        c = a.term.coeff(v)
        if c != 0:
            m = math.lcm(m, abs(c))
    scaled = _scale_atoms(phi, v, m)
    if m > 1:
        scaled = conj((scaled, atom_dvd(m, var(v))))

    period = 1
    lowers: dict[LinTerm, None] = {}
    uppers: dict[LinTerm, None] = {}
    for a in atoms_of(scaled):
        c = a.term.coeff(v)
        if c == 0:
            continue
        if a.kind == DVD:
            period = math.lcm(period, a.divisor)
        elif a.kind == LT:
            if c == -1:
                lowers.setdefault(a.term.drop(v))              # b < v
            else:
                uppers.setdefault(a.term.drop(v).scale(-1))    # v < b
        elif a.kind == EQ:
            rest = a.term.drop(v)
            value = rest.scale(-1) if c == 1 else rest
            lowers.setdefault(value.shift(-1))
            uppers.setdefault(value.shift(1))
    if stats is not None:
        stats.peak_divisor_lcm = max(stats.peak_divisor_lcm, period)

    # pick the smaller boundary set; both directions are exact
    from_below = len(lowers) <= len(uppers)
    boundary = lowers if from_below else uppers
    branches: list[PresFormula] = []
    residue = simplify(_limit_formula(scaled, v, positive_large=not from_below))
    if not isinstance(residue, FalseF):
        for j in range(1, period + 1):
            branches.append(_subst_tree(residue, v, num(j if from_below else -j)))
    for b in boundary:
        for j in range(1, period + 1):
            branches.append(_subst_tree(scaled, v, b.shift(j if from_below else -j)))
    return simplify(disj(branches))
