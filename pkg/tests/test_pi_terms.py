"""Name-passing-calculus tests: canonicalization (unused restrictions erased,
restriction order irrelevant, parallel flattening), one-step reduction with
single-unfold replication, barbs under restriction, and capture-free atom
substitution."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from rhopi.harness import random_pi_term
from rhopi.piterm import (
    pi_barbs,
    pi_canon,
    pi_eq,
    pi_free_names,
    pi_step,
    pin,
    pnew,
    pnil,
    pout,
    ppar,
    prepl,
    show_pi,
    subst_atom,
)


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------


def test_parallel_is_flattened_and_unit_absorbed():
    t = ppar(ppar(pout("x", "a"), pnil()), pout("y", "b"))
    u = ppar(pout("y", "b"), pout("x", "a"))
    assert pi_eq(t, u)
    assert pi_eq(ppar(pnil(), pnil()), pnil())


def test_unused_restriction_is_erased():
    assert pi_eq(pnew("z", pout("x", "a")), pout("x", "a"))
    assert pi_eq(pnew("z", pnil()), pnil())


def test_used_restriction_is_kept():
    assert not pi_eq(pnew("z", pout("z", "a")), pout("z", "a"))


def test_restriction_order_is_irrelevant():
    t = pnew("u", pnew("w", ppar(pout("u", "w"), pin("w", "y", pnil()))))
    u = pnew("w", pnew("u", ppar(pout("u", "w"), pin("w", "y", pnil()))))
    assert pi_eq(t, u)


def test_restriction_scope_normalizes_across_parallel():
    # moving a component that ignores the bound name in or out of the scope
    # does not change the canonical form
    wide = pnew("z", ppar(pout("z", "a"), pout("v", "b")))
    narrow = ppar(pnew("z", pout("z", "a")), pout("v", "b"))
    assert pi_eq(wide, narrow)


def test_overlapping_scopes_share_a_canonical_form():
    # u ranges over the first two components, w over the last two; either
    # restriction may be written outermost
    c1 = pin("u", "y", pnil())
    c2 = pout("u", "w")
    c3 = pin("w", "y", pnil())
    t = pnew("u", pnew("w", ppar(c1, c2, c3)))
    u = pnew("w", pnew("u", ppar(c3, c1, c2)))
    assert pi_eq(t, u)


def test_binder_names_are_alpha_irrelevant():
    t = pin("x", "y", pout("y", "a"))
    u = pin("x", "w", pout("w", "a"))
    assert pi_eq(t, u)
    assert pi_eq(pnew("u", pout("u", "u")), pnew("w", pout("w", "w")))


def test_replicated_copies_are_not_collapsed():
    one = prepl(pin("x", "y", pnil()))
    assert not pi_eq(ppar(one, one), one)


# ---------------------------------------------------------------------------
# Free names
# ---------------------------------------------------------------------------


def test_free_names_exclude_binders():
    t = pnew("z", ppar(pout("z", "a"), pin("x", "y", pout("y", "b"))))
    assert pi_free_names(t) == frozenset({"a", "x", "b"})


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def test_basic_communication():
    t = ppar(pout("x", "a"), pin("x", "y", pout("y", "b")))
    succs = pi_step(t)
    assert len(succs) == 1
    assert succs[0] is pi_canon(pout("a", "b"))


def test_communication_under_restriction():
    t = pnew("z", ppar(pout("z", "a"), pin("z", "y", pout("y", "b"))))
    succs = pi_step(t)
    assert succs == [pi_canon(pout("a", "b"))]


def test_no_step_without_a_matching_pair():
    assert pi_step(ppar(pout("x", "a"), pin("y", "w", pnil()))) == []
    assert pi_step(prepl(pin("x", "y", pnil()))) == []


def test_replication_unfolds_once_per_step():
    t = ppar(prepl(pin("x", "y", pnil())), pout("x", "a"), pout("x", "b"))
    succs = pi_step(t)
    # either output can be consumed; the replica survives in both reducts
    assert len(succs) == 2
    for s in succs:
        assert ("in", "x") in pi_barbs(s)
        follow = pi_step(s)
        assert len(follow) == 1
        assert ("in", "x") in pi_barbs(follow[0])


def test_two_distinct_reducts_are_kept_apart():
    t = ppar(pout("x", "a"), pin("x", "y", pout("y", "c")), pin("x", "w", pnil()))
    succs = pi_step(t)
    assert len(succs) == 2


# ---------------------------------------------------------------------------
# Barbs
# ---------------------------------------------------------------------------


def test_barbs_see_through_restriction_but_not_bound_subjects():
    t = pnew("z", ppar(pout("z", "a"), pin("x", "y", pnil())))
    assert pi_barbs(t) == frozenset({("in", "x")})


def test_barbs_include_replicated_guards_and_respect_restrict():
    t = ppar(prepl(pin("x", "y", pnil())), pout("u", "a"))
    assert pi_barbs(t) == frozenset({("in", "x"), ("out", "u")})
    assert pi_barbs(t, restrict=["u"]) == frozenset({("out", "u")})


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------


def test_subst_atom_replaces_free_occurrences():
    t = ppar(pout("x", "x"), pin("x", "y", pout("y", "x")))
    s = subst_atom(t, "w", "x")
    assert s is pi_canon(ppar(pout("w", "w"), pin("w", "y", pout("y", "w"))))


def test_subst_atom_respects_binders():
    # the bound y is untouched; only the free y under a different binder moves
    t = ppar(pin("x", "y", pout("y", "a")), pout("y", "b"))
    s = subst_atom(t, "w", "y")
    assert s is pi_canon(ppar(pin("x", "y", pout("y", "a")), pout("w", "b")))


def test_subst_atom_on_restricted_name_is_identity():
    t = pnew("z", pout("z", "a"))
    assert subst_atom(t, "w", "z") is pi_canon(t)


# ---------------------------------------------------------------------------
# Randomized invariants
# ---------------------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_canonicalization_is_idempotent_and_step_closed(seed):
    rng = random.Random(seed)
    t = random_pi_term(rng, size=rng.randrange(1, 12))
    c = pi_canon(t)
    assert pi_canon(c) is c
    assert isinstance(show_pi(c), str)
    for s in pi_step(c):
        assert pi_canon(s) is s  # reducts come back canonical


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_barbs_are_invariant_under_reassociation(seed):
    rng = random.Random(seed)
    t = random_pi_term(rng, size=rng.randrange(2, 10))
    u = ppar(pnil(), ppar(t, pnil()))
    assert pi_barbs(t) == pi_barbs(u)
    assert pi_eq(t, u)
