"""Shared brute-force oracles and random generators for the test suite."""

import numpy as np

from hdmas.presburger import (DVD, EQ, LT, And, AtomF, FalseF, Implies,
                              LinTerm, Not, Or, TrueF, atom_eq, atom_ge,
                              atom_gt, atom_le, atom_lt, atom_ne, conj, disj,
                              neg, num)
from hdmas.qe import cooper_bound, decide


def np_eval(phi, arrays):
    """Evaluate a quantifier-free formula over numpy arrays of naturals."""
    if isinstance(phi, TrueF):
        return np.ones(np.broadcast(*arrays.values()).shape if arrays else (), bool)
    if isinstance(phi, FalseF):
        return np.zeros(np.broadcast(*arrays.values()).shape if arrays else (), bool)
    if isinstance(phi, AtomF):
        a = phi.atom
        total = np.int64(a.term.const)
        for v, c in a.term.coeffs:
            total = total + np.int64(c) * arrays[v]
        if a.kind == LT:
            return total < 0
        if a.kind == EQ:
            return total == 0
        if a.kind == DVD:
            return total % a.divisor == 0
        raise TypeError(a)
    if isinstance(phi, Not):
        return ~np_eval(phi.arg, arrays)
    if isinstance(phi, And):
        out = np_eval(phi.args[0], arrays)
        for sub in phi.args[1:]:
            out = out & np_eval(sub, arrays)
        return out
    if isinstance(phi, Or):
        out = np_eval(phi.args[0], arrays)
        for sub in phi.args[1:]:
            out = out | np_eval(sub, arrays)
        return out
    if isinstance(phi, Implies):
        return ~np_eval(phi.lhs, arrays) | np_eval(phi.rhs, arrays)
    raise TypeError(phi)


def enum_truth(block, names, matrix, bound):
    """Truth of ``block names . matrix`` with variables enumerated in 0..bound."""
    axis = np.arange(bound + 1, dtype=np.int64)
    if len(names) <= 2:
        grids = np.meshgrid(*[axis] * len(names), indexing="ij")
        sat = np_eval(matrix, dict(zip(names, grids))) if names else \
            np_eval(matrix, {})
        return bool(sat.any()) if block == "E" else bool(sat.all())
    inner = np.meshgrid(axis, axis, indexing="ij")
    for v0 in axis:
        arrays = {names[0]: np.int64(v0), names[1]: inner[0], names[2]: inner[1]}
        sat = np_eval(matrix, arrays)
        if block == "E" and sat.any():
            return True
        if block == "A" and not sat.all():
            return False
    return block == "A"


def checked_block_truth(block, names, matrix):
    """Enumeration verdict with bound escalation on disagreement.

    The base bound can be too small for chained multi-variable constraints,
    so when the symbolic decision disagrees the search is widened before the
    comparison counts as a failure.  Returns (oracle, symbolic, bound_used).
    """
    from hdmas.presburger import Exists, Forall

    closed = matrix
    for n in reversed(names):
        closed = Exists(n, closed) if block == "E" else Forall(n, closed)
    symbolic = decide(closed)
    bound = cooper_bound(matrix, names)
    oracle = enum_truth(block, names, matrix, bound)
    used = bound
    if oracle != symbolic:
        for factor in (4, 16):
            used = bound * factor
            oracle = enum_truth(block, names, matrix, used)
            if oracle == symbolic:
                break
    return oracle, symbolic, used


def random_matrix(rng, names, max_coeff=5, max_const=20, atoms=3):
    ctors = [atom_lt, atom_le, atom_eq, atom_ge, atom_gt, atom_ne]
    parts = []
    for _ in range(atoms):
        t = LinTerm.make({n: rng.randint(-max_coeff, max_coeff) for n in names},
                         rng.randint(-max_const, max_const))
        parts.append(rng.choice(ctors)(t, num(0)))
    out = parts[0]
    for p in parts[1:]:
        out = conj((out, p)) if rng.random() < 0.5 else disj((out, p))
    if rng.random() < 0.3:
        out = neg(out)
    return out
