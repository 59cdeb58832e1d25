import pytest

from hdmas.engine import (ModelChecker, NotNormalForm, UnassignedParameter,
                          build_prf, check, global_mc, pre_image)
from hdmas.logic import (EXISTS, FORALL, Coop, Globally, Nat, Next, NotF,
                         Param, Prop, Quant, Top, Y1, Y2)
from hdmas.parsing import parse_formula
from hdmas.presburger import Exists, Forall
from hdmas.qe import decide

E, A = EXISTS, FORALL
p, q = Prop("p"), Prop("q")

EY1 = ((E, 1),)
AY2 = ((A, 2),)
EA = ((E, 1), (A, 2))
AE = ((A, 2), (E, 1))


def names(model, mask):
    return set(model.names_of(mask))


def test_build_prf_tautological_guard(fig2):
    phi = build_prf(fig2, "s6", 3, 4, fig2.mask_of(["s6"]))
    assert decide(phi) is True


def test_build_prf_empty_target(fig2):
    for s in fig2.states:
        phi = build_prf(fig2, s, 4, 2, 0)
        assert decide(phi) is False


def test_build_prf_excludes_s3(fig2):
    targets = fig2.mask_of(["s2", "s3", "s4", "s5", "s6"])
    phi = build_prf(fig2, "s3", "y1", "y2", targets)
    assert decide(Exists("y1", Forall("y2", phi))) is False


def test_build_prf_verbatim_encoding_agrees(fig2):
    targets = fig2.mask_of(["s2", "s3", "s4"])
    for s in fig2.states:
        for c, n in ((0, 0), (3, 2), (7, 5)):
            fast = decide(build_prf(fig2, s, c, n, targets))
            slow = decide(build_prf(fig2, s, c, n, targets,
                                    resolve_availability=False))
            assert fast == slow, (s, c, n)


def test_pre_image_alternating_prefix(fig2):
    got = pre_image(fig2, Y1, Y2, fig2.mask_of(["s2", "s3", "s4"]), {}, AE)
    assert names(fig2, got) == {"s2", "s4", "s5"}


def test_pre_image_universal_prefix(fig2):
    got = pre_image(fig2, Nat(0), Y2, fig2.mask_of(["s5", "s6"]), {}, AY2)
    assert names(fig2, got) == {"s6"}


def test_pre_image_existential_prefix(fig2):
    got = pre_image(fig2, Y1, Nat(10), fig2.mask_of(["s6"]), {}, EY1)
    assert names(fig2, got) == {"s4", "s6"}


def test_pre_image_resolves_parameters(fig2):
    got = pre_image(fig2, Param(1), Param(2), fig2.mask_of(["s2", "s3", "s4"]),
                    {"z1": 7, "z2": 5}, ())
    assert "s1" in names(fig2, got)
    with pytest.raises(UnassignedParameter):
        pre_image(fig2, Param(1), Nat(2), fig2.all_states(), {}, ())


def test_pre_image_free_agent_variable_needs_value(fig2):
    with pytest.raises(UnassignedParameter):
        pre_image(fig2, Y1, Nat(2), fig2.all_states(), {}, ())
    got = pre_image(fig2, Y1, Nat(2), fig2.all_states(), {"y1": 3}, ())
    assert got == fig2.all_states()


def test_g_fixpoint_trace(fig2_checker):
    fig2 = fig2_checker.model
    trace = []
    got = fig2_checker.g_fixpoint(Y1, Y2, p, {}, AE, trace)
    assert names(fig2, got) == {"s2", "s4"}
    assert [set(fig2.names_of(t)) for t in trace] == \
        [{"s2", "s3", "s4"}, {"s2", "s4"}, {"s2", "s4"}]


def test_g_fixpoint_trivial(fig2_checker):
    got = fig2_checker.g_fixpoint(Nat(3), Nat(2), Top(), {}, ())
    assert got == fig2_checker.model.all_states()


def test_u_fixpoint_trace(fig2_checker):
    fig2 = fig2_checker.model
    psi1 = Quant(AE, Coop(Y1, Y2, Globally(p)))
    psi2 = Quant(AY2, Coop(Nat(0), Y2, Globally(q)))
    trace = []
    got = fig2_checker.u_fixpoint(Y1, Nat(10), psi1, psi2, {}, EY1, trace)
    assert names(fig2, got) == {"s2", "s4", "s6"}
    assert [set(fig2.names_of(t)) for t in trace] == \
        [{"s6"}, {"s4", "s6"}, {"s2", "s4", "s6"}, {"s2", "s4", "s6"}]


def test_u_fixpoint_empty_target(fig2_checker):
    got = fig2_checker.u_fixpoint(Nat(2), Nat(2), p, NotF(Top()), {}, ())
    assert got == 0


def test_u_fixpoint_true_target(fig2_checker):
    got = fig2_checker.u_fixpoint(Nat(2), Nat(2), q, Top(), {}, ())
    assert got == fig2_checker.model.all_states()


def test_fixpoints_terminate_within_state_count(fig2_checker):
    for psi in (p, q):
        trace = []
        fig2_checker.g_fixpoint(Y1, Y2, psi, {}, EA, trace)
        assert len(trace) <= len(fig2_checker.model.states) + 1
        trace = []
        fig2_checker.u_fixpoint(Nat(3), Nat(3), Top(), psi, {}, (), trace)
        assert len(trace) <= len(fig2_checker.model.states) + 1


def test_g_fixpoint_within_target(fig2_checker):
    fig2 = fig2_checker.model
    for psi in (p, q):
        got = fig2_checker.g_fixpoint(Nat(2), Nat(1), psi, {}, ())
        assert got & ~fig2_checker.global_mc(psi, {}) == 0


def test_u_fixpoint_contains_target(fig2_checker):
    got = fig2_checker.u_fixpoint(Nat(2), Nat(1), p, q, {}, ())
    assert got & fig2_checker.global_mc(q, {}) == fig2_checker.global_mc(q, {})


def test_global_mc_prf_example(fig2_checker):
    fig2 = fig2_checker.model
    phi = parse_formula("E y1 A y2 <<y1,y2>> X (p|q)")
    assert names(fig2, fig2_checker.global_mc(phi, {})) == {"s2", "s4", "s5", "s6"}


def test_global_mc_nested_example(fig2_checker):
    fig2 = fig2_checker.model
    phi = parse_formula("<<7,4>> X (A y2 E y1 <<y1,y2>> G p)")
    assert names(fig2, fig2_checker.global_mc(phi, {})) == {"s4", "s5"}


def test_global_mc_until_example(fig2_checker):
    fig2 = fig2_checker.model
    phi = parse_formula(
        "<<6,3>> X (E y1 <<y1,10>> ((A y2 E y1 <<y1,y2>> G p) U (A y2 <<0,y2>> G q)))")
    assert names(fig2, fig2_checker.global_mc(phi, {})) == {"s1", "s4", "s5", "s6"}


def test_global_mc_rejects_non_normal_form(fig2_checker):
    phi = Quant(((A, 1),), Coop(Y1, Nat(3), Next(p)))
    with pytest.raises(NotNormalForm):
        fig2_checker.global_mc(phi, {})


def test_global_mc_vacuous_quantifier_is_harmless(fig2_checker):
    fig2 = fig2_checker.model
    plain = fig2_checker.global_mc(p, {})
    wrapped = fig2_checker.global_mc(Quant(EY1, p), {})
    assert plain == wrapped == fig2.prop_mask("p")


def test_check_local_examples(fig2_checker):
    assert fig2_checker.check("s1", parse_formula("<<7,5>> X p"), {}) is True
    assert fig2_checker.check("s1", parse_formula("E y1 <<y1,11>> X p"), {}) is False
    assert fig2_checker.check(
        "s4", parse_formula("<<7,4>> X (A y2 E y1 <<y1,y2>> G p)"), {}) is True


def test_check_normalises_first(fig2_checker):
    # universally quantified first counter collapses to zero agents
    phi = Quant(((A, 1),), Coop(Y1, Nat(2), Next(OrF_pq())))
    want = fig2_checker.global_mc(Coop(Nat(0), Nat(2), Next(OrF_pq())), {})
    got = [s for s in fig2_checker.model.states if fig2_checker.check(s, phi, {})]
    assert set(got) == names(fig2_checker.model, want)


def OrF_pq():
    from hdmas.logic import OrF
    return OrF(p, q)


def test_module_level_helpers(fig2):
    phi = parse_formula("<<7,5>> X p")
    mask = global_mc(fig2, phi, {})
    assert check(fig2, "s1", phi, {}) == bool(mask & 1)


def test_memoisation_reuses_extents(fig2):
    mc = ModelChecker(fig2)
    phi = parse_formula("E y1 A y2 <<y1,y2>> X (p|q)")
    first = mc.global_mc(phi, {})
    decided = len(mc._decisions)
    second = mc.global_mc(phi, {})
    assert first == second
    assert len(mc._decisions) == decided
