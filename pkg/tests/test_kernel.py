"""Kernel: reduction, convertibility, inference.

Expected values are machine arithmetic (for numeral tests) or single
hand-derived reduction steps spelled out next to the assertion.
"""

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from lttw.errors import (
    DomainMismatch, DuplicateVariable, FuelExhausted, IllFormedKind,
    NotAProduct, UnboundVariable, UnknownConstant,
)
from lttw.kernel import (
    EMPTY_CONTEXT, check_context, check_kind_valid, convertible,
    equal_kinds, infer_kind, normalize, whnf,
)
from lttw.signature import RewriteRule, declare_constant, declare_rewrite
from lttw.syntax import (
    TYPE, App, Const, ElKind, Lam, PiKind, Var, alpha_eq, app,
)

from mini import NAT, arrow, const_nat_family, define_mult, define_plus, \
    nat_signature, numeral

CASES = settings(max_examples=500, deadline=None, derandomize=True)


@pytest.fixture(scope="module")
def sig():
    s = nat_signature()
    define_plus(s)
    define_mult(s)
    return s


# ------------------------------------------------------------- reduction

def test_whnf_beta_step(sig):
    t = App(Lam("x", NAT, Var("x")), Const("zero"))
    assert alpha_eq(whnf(sig, t), Const("zero"))


def test_whnf_stops_at_constructor(sig):
    # whnf must not reduce under succ: plus zero zero stays unreduced inside
    inner = app(Const("plus"), Const("zero"), Const("zero"))
    t = App(Const("succ"), inner)
    w = whnf(sig, t)
    assert isinstance(w, App)
    assert alpha_eq(w, t)  # already weak-head normal


def test_whnf_fires_zero_rule(sig):
    # E_Nat C a b zero -> a, one step at the head
    t = app(Const("E_Nat"), const_nat_family(), numeral(3),
            Lam("_", NAT, Lam("r", NAT, App(Const("succ"), Var("r")))),
            Const("zero"))
    assert alpha_eq(whnf(sig, t), numeral(3))


def test_whnf_fires_succ_rule_once(sig):
    # E_Nat C a b (succ zero) -> b zero (E_Nat C a b zero) -> ... whnf
    # continues to the head constructor: succ (E_Nat C a b zero)
    b = Lam("_", NAT, Lam("r", NAT, App(Const("succ"), Var("r"))))
    t = app(Const("E_Nat"), const_nat_family(), Const("zero"), b, numeral(1))
    w = whnf(sig, t)
    assert isinstance(w, App)
    head, args = w.fn, w.arg
    assert alpha_eq(head, Const("succ"))


def test_whnf_unfolds_definitions(sig):
    # plus is a definition; its unfolding exposes the E_Nat redex
    t = app(Const("plus"), numeral(0), numeral(2))
    w = whnf(sig, t)
    assert isinstance(w, App)
    assert alpha_eq(w, numeral(2))


@CASES
@given(st.integers(0, 9), st.integers(0, 9))
def test_plus_matches_machine(m, n):
    s = nat_signature()
    define_plus(s)
    assert alpha_eq(normalize(s, app(Const("plus"), numeral(m), numeral(n))),
                    numeral(m + n))


@CASES
@given(st.integers(0, 6), st.integers(0, 6))
def test_mult_matches_machine(m, n):
    s = nat_signature()
    define_plus(s)
    define_mult(s)
    assert alpha_eq(normalize(s, app(Const("mult"), numeral(m), numeral(n))),
                    numeral(m * n))


def test_fuel_exhausted_on_looping_rule():
    sig = nat_signature()
    declare_constant(sig, "omega", arrow(NAT, NAT))
    declare_rewrite(sig, RewriteRule(
        binders=(("x", NAT),),
        lhs=app(Const("omega"), Var("x")),
        rhs=app(Const("omega"), Var("x")),
        ascription=NAT))
    with pytest.raises(FuelExhausted):
        whnf(sig, app(Const("omega"), Const("zero")), fuel=1000)


def test_fuel_is_shared_across_nested_reduction(sig):
    big = app(Const("mult"), numeral(6), numeral(6))
    with pytest.raises(FuelExhausted):
        normalize(sig, big, fuel=10)
    assert alpha_eq(normalize(sig, big, fuel=100000), numeral(36))


# ------------------------------------------- well-kinded term generation

def nat_terms(depth):
    """Terms of kind Nat, well-kinded by construction."""
    if depth <= 0:
        return st.integers(0, 3).map(numeral)
    sub = nat_terms(depth - 1)
    return st.one_of(
        st.integers(0, 3).map(numeral),
        st.builds(lambda a, b: app(Const("plus"), a, b), sub, sub),
        st.builds(lambda a: App(Const("succ"), a), sub),
        st.builds(lambda a: App(Lam("q", NAT, Var("q")), a), sub),
        st.builds(lambda a, b: app(
            Const("E_Nat"), const_nat_family(), a,
            Lam("_", NAT, Lam("r", NAT, App(Const("succ"), Var("r")))), b),
            sub, sub),
    )


well_kinded = nat_terms(3)


@CASES
@given(well_kinded)
def test_generated_terms_are_well_kinded(t):
    s = nat_signature()
    define_plus(s)
    assert isinstance(infer_kind(s, EMPTY_CONTEXT, t), ElKind)


@CASES
@given(well_kinded)
def test_whnf_idempotent(t):
    s = nat_signature()
    define_plus(s)
    w = whnf(s, t)
    assert alpha_eq(whnf(s, w), w)


@CASES
@given(well_kinded)
def test_subject_reduction(t):
    s = nat_signature()
    define_plus(s)
    before = infer_kind(s, EMPTY_CONTEXT, t)
    after = infer_kind(s, EMPTY_CONTEXT, whnf(s, t))
    assert equal_kinds(s, EMPTY_CONTEXT, before, after)


@CASES
@given(well_kinded)
def test_convertibility_reflexive_and_stable_under_expansion(t):
    s = nat_signature()
    define_plus(s)
    assert convertible(s, EMPTY_CONTEXT, t, t, NAT)
    # beta-expansion preserves convertibility
    b = App(Lam("q", NAT, Var("q")), t)
    assert convertible(s, EMPTY_CONTEXT, t, b, NAT)
    assert convertible(s, EMPTY_CONTEXT, b, t, NAT)


@CASES
@given(well_kinded, well_kinded)
def test_convertibility_symmetric(a, b):
    s = nat_signature()
    define_plus(s)
    assert (convertible(s, EMPTY_CONTEXT, a, b, NAT)
            == convertible(s, EMPTY_CONTEXT, b, a, NAT))


@CASES
@given(well_kinded, well_kinded, well_kinded)
def test_convertibility_transitive(a, b, c):
    s = nat_signature()
    define_plus(s)
    if (convertible(s, EMPTY_CONTEXT, a, b, NAT)
            and convertible(s, EMPTY_CONTEXT, b, c, NAT)):
        assert convertible(s, EMPTY_CONTEXT, a, c, NAT)


# ---------------------------------------------------------------- eta

def test_eta_at_product_kind(sig):
    declare_constant(sig, "g", arrow(NAT, NAT))
    expanded = Lam("x", NAT, App(Const("g"), Var("x")))
    assert convertible(sig, EMPTY_CONTEXT, expanded, Const("g"),
                       PiKind("x", NAT, NAT))
    assert convertible(sig, EMPTY_CONTEXT, Const("g"), expanded,
                       PiKind("x", NAT, NAT))


def test_eta_nested(sig):
    two = PiKind("x", NAT, PiKind("y", NAT, NAT))
    declare_constant(sig, "g2", two)
    expanded = Lam("a", NAT, Lam("b", NAT,
                                 app(Const("g2"), Var("a"), Var("b"))))
    assert convertible(sig, EMPTY_CONTEXT, expanded, Const("g2"), two)


def test_distinct_constructors_not_convertible(sig):
    assert not convertible(sig, EMPTY_CONTEXT, Const("zero"),
                           App(Const("succ"), Const("zero")), NAT)


# ------------------------------------------------------------ inference

def test_infer_numeral(sig):
    k = infer_kind(sig, EMPTY_CONTEXT, numeral(4))
    assert equal_kinds(sig, EMPTY_CONTEXT, k, NAT)


def test_infer_plus_kind(sig):
    k = infer_kind(sig, EMPTY_CONTEXT, Const("plus"))
    assert equal_kinds(sig, EMPTY_CONTEXT, k, arrow(NAT, arrow(NAT, NAT)))


def test_infer_unbound_variable(sig):
    with pytest.raises(UnboundVariable):
        infer_kind(sig, EMPTY_CONTEXT, Var("nowhere"))


def test_infer_unknown_constant(sig):
    with pytest.raises(UnknownConstant):
        infer_kind(sig, EMPTY_CONTEXT, Const("nowhere"))


def test_infer_not_a_product(sig):
    with pytest.raises(NotAProduct):
        infer_kind(sig, EMPTY_CONTEXT, App(Const("zero"), Const("zero")))


def test_infer_domain_mismatch(sig):
    with pytest.raises(DomainMismatch):
        infer_kind(sig, EMPTY_CONTEXT, App(Const("succ"), Const("Nat")))


def test_domain_mismatch_diagnostic_names_rule(sig):
    try:
        infer_kind(sig, EMPTY_CONTEXT, App(Const("succ"), Const("Nat")))
    except DomainMismatch as e:
        assert e.diagnostic is not None
        assert e.diagnostic.rule == "app-domain"
        assert e.diagnostic.expected is not None
    else:
        raise AssertionError("expected DomainMismatch")


def test_infer_lambda_gives_product(sig):
    t = Lam("x", NAT, App(Const("succ"), Var("x")))
    k = infer_kind(sig, EMPTY_CONTEXT, t)
    assert isinstance(k, PiKind)
    assert equal_kinds(sig, EMPTY_CONTEXT, k, arrow(NAT, NAT))


def test_binder_shadowing_context_variable(sig):
    # [x : Nat][x : Nat] x is fine: inner binder is renamed internally
    t = Lam("x", NAT, Lam("x", NAT, Var("x")))
    k = infer_kind(sig, EMPTY_CONTEXT, t)
    assert equal_kinds(sig, EMPTY_CONTEXT, k, arrow(NAT, arrow(NAT, NAT)))


def test_dependent_codomain_substitution(sig):
    # E_Nat at a dependent family: (C : Nat -> Type) ... (n : Nat) C n
    k = infer_kind(sig, EMPTY_CONTEXT,
                   app(Const("E_Nat"), const_nat_family()))
    # after applying the family, every C is gone
    assert isinstance(k, PiKind)


def test_check_kind_valid_rejects_term_level_garbage(sig):
    with pytest.raises(IllFormedKind):
        check_kind_valid(sig, EMPTY_CONTEXT, ElKind(Const("zero")))


def test_check_context_duplicate(sig):
    with pytest.raises(DuplicateVariable):
        check_context(sig, [("x", NAT), ("x", NAT)])


def test_check_context_dependent_entries(sig):
    ctx = check_context(sig, [("C", arrow(NAT, TYPE)),
                              ("a", ElKind(App(Var("C"), Const("zero"))))])
    assert len(ctx) == 2


def test_equal_kinds_modulo_reduction(sig):
    # El(plus zero zero ...) vs El(zero...): kinds compare up to conversion
    k1 = ElKind(App(Var("C"), app(Const("plus"), numeral(1), numeral(1))))
    k2 = ElKind(App(Var("C"), numeral(2)))
    ctx = check_context(sig, [("C", arrow(NAT, TYPE))])
    assert equal_kinds(sig, ctx, k1, k2)
    k3 = ElKind(App(Var("C"), numeral(3)))
    assert not equal_kinds(sig, ctx, k1, k3)
