#!/usr/bin/env python3
"""Walk the running example end to end: well-formedness, the worked
pre-image computation, both fixpoint runs with their iteration traces,
the local membership checks, and a defender-threshold sweep on the
fortress model."""

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from hdmas.engine import ModelChecker
from hdmas.logic import (EXISTS, FORALL, Coop, Globally, Nat, Prop, Quant,
                         Y1, Y2)
from hdmas.model import check_wellformed
from hdmas.parsing import parse_formula, parse_model

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "src" / "hdmas" / "fixtures"


def banner(text):
    print(f"\n=== {text} ===")


def show(model, mask):
    return "{" + ", ".join(model.names_of(mask)) + "}"


def main():
    started = time.perf_counter()
    fig2 = parse_model((FIXTURES / "fig2.hdmas").read_text()).model
    checker = ModelChecker(fig2)

    banner("well-formedness of the six-state model")
    report = check_wellformed(fig2)
    for line in report.lines():
        print(" ", line)

    banner("controllable pre-image of the p-or-q states")
    phi = parse_formula("E y1 A y2 <<y1,y2>> X (p|q)")
    print("  extension:", show(fig2, checker.global_mc(phi, {})))

    banner("invariance fixpoint (any adversary, some coalition)")
    trace = []
    inner = checker.g_fixpoint(Y1, Y2, Prop("p"), {},
                               ((FORALL, 2), (EXISTS, 1)), trace)
    for i, step in enumerate(trace):
        print(f"  iteration {i}: {show(fig2, step)}")
    print("  result:", show(fig2, inner))
    outer = parse_formula("<<7,4>> X (A y2 E y1 <<y1,y2>> G p)")
    print("  one step earlier with 7 vs 4 agents:",
          show(fig2, checker.global_mc(outer, {})))

    banner("reachability fixpoint with a 10-agent adversary")
    trace = []
    psi1 = Quant(((FORALL, 2), (EXISTS, 1)), Coop(Y1, Y2, Globally(Prop("p"))))
    psi2 = Quant(((FORALL, 2),), Coop(Nat(0), Y2, Globally(Prop("q"))))
    until = checker.u_fixpoint(Y1, Nat(10), psi1, psi2, {}, ((EXISTS, 1),), trace)
    for i, step in enumerate(trace):
        print(f"  iteration {i}: {show(fig2, step)}")
    print("  result:", show(fig2, until))

    banner("local checks")
    for state, text in (("s1", "<<7,5>> X p"),
                        ("s1", "E y1 <<y1,11>> X p"),
                        ("s4", "<<7,4>> X (A y2 E y1 <<y1,y2>> G p)")):
        verdict = checker.check(state, parse_formula(text), {})
        print(f"  {state} |= {text}:  {verdict}")

    banner("fortress: defenders needed to hold forever")
    fortress = parse_model((FIXTURES / "fortress.hdmas").read_text()).model
    fortress_checker = ModelChecker(fortress)
    for defenders in range(0, 16):
        formula = parse_formula(f"A y2 <<{defenders},y2>> G !captured")
        held = fortress_checker.check("s1", formula, {})
        print(f"  {defenders:2d} defenders: {'holds' if held else 'falls'}")
        if held:
            break
    quantified = parse_formula("E y1 A y2 <<y1,y2>> G !captured")
    print("  some coalition holds against any adversary:",
          fortress_checker.check("s1", quantified, {}))

    print(f"\ntotal {time.perf_counter() - started:.2f}s, "
          f"qe: {checker.stats.to_json()}")


if __name__ == "__main__":
    main()
