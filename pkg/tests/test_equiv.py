"""Behavioural-equivalence and divergence-analysis tests.

Covers the graph helpers, the bounded barbed-bisimulation checker in both
calculi, weak barb sets, the three divergence verdict rules, and the replay
matcher's unit-level behaviour.
"""

from rhopi.encode import encode_mr, encode_ns
from rhopi.equiv import (
    BisimVerdict,
    DivergenceVerdict,
    _find_cycle,
    _reach_sets,
    _replay_match,
    _sccs,
    divergence_probe,
    pi_barbed_bisim,
    pi_divergence,
    pi_weak_barb_set,
    rho_barbed_bisim,
    rho_weak_barb_set,
)
from rhopi.piterm import pin, pnew, pnil, pout, ppar, prepl
from rhopi.rhoterm import (
    NULL_NAME,
    canon_proc,
    drop,
    gen_fresh,
    inp,
    lift,
    lincr,
    nil,
    par,
)

x = NULL_NAME
y = gen_fresh([x])
z = gen_fresh([x, y])
w = gen_fresh([x, y, z])
a = gen_fresh([x, y])


def iso(p, q):
    return _replay_match(canon_proc(p), canon_proc(q), [100_000])


# ---------------------------------------------------------------------------
# Graph helpers
# ---------------------------------------------------------------------------


def test_scc_reach_and_cycle_helpers():
    # 0 -> 1 -> 2 -> 1 (cycle {1,2}), 0 -> 3
    edges = [[1, 3], [2], [1], []]
    _, comps = _sccs(4, edges)
    assert sorted(len(c) for c in comps) == [1, 1, 2]
    rs = _reach_sets(4, edges)
    assert rs[0] == {0, 1, 2, 3} and rs[1] == {1, 2} and rs[3] == {3}
    assert _find_cycle(4, edges) == [1, 2]
    assert _find_cycle(3, [[1], [2], []]) is None


# ---------------------------------------------------------------------------
# Reflective-calculus bisimulation
# ---------------------------------------------------------------------------


def test_identical_canonical_roots_are_bisimilar():
    p = lift(x, nil())
    r = rho_barbed_bisim(p, par(p, nil()))
    assert r.verdict is BisimVerdict.BISIMILAR
    assert r.states == (1, 1)


def test_silent_prefix_distinguished_strongly_but_not_weakly():
    # q1 barbs on x immediately; q2 needs one internal step first.
    q1 = lift(x, nil())
    q2 = par(inp(y, a, lift(x, nil())), lift(y, nil()))

    strong = rho_barbed_bisim(q1, q2, weak=False)
    assert strong.verdict is BisimVerdict.NOT_BISIMILAR
    assert strong.witness["reason"] == "barb"

    # Unrestricted weak comparison still separates them: q2 has a barb on y.
    assert rho_barbed_bisim(q1, q2, weak=True).verdict is BisimVerdict.NOT_BISIMILAR

    # Restricted to subject x the pair is weakly bisimilar but still strongly
    # distinct (q2 has no immediate x barb).
    assert (
        rho_barbed_bisim(q1, q2, weak=True, restrict=[x]).verdict
        is BisimVerdict.BISIMILAR
    )
    assert (
        rho_barbed_bisim(q1, q2, weak=False, restrict=[x]).verdict
        is BisimVerdict.NOT_BISIMILAR
    )


def test_commitment_to_different_barbs_distinguishes():
    # n1 can commit (weakly) to a barb on x or on y; n2 only to x.
    n1 = par(inp(z, a, lift(x, nil())), lift(z, nil()), inp(z, a, lift(y, nil())))
    n2 = par(inp(z, a, lift(x, nil())), lift(z, nil()))
    r = rho_barbed_bisim(n1, n2, weak=True, restrict=[x, y])
    assert r.verdict is BisimVerdict.NOT_BISIMILAR


def test_alpha_variant_binders_give_identical_state_graphs():
    b2 = gen_fresh([x, y, z, w])
    k1 = par(lift(z, nil()), inp(z, a, lift(x, nil())))
    k2 = par(lift(z, nil()), inp(z, b2, lift(x, nil())))
    r = rho_barbed_bisim(k1, k2, weak=True)
    assert r.verdict is BisimVerdict.BISIMILAR
    assert r.states == (1, 1)


# ---------------------------------------------------------------------------
# Name-passing-calculus bisimulation
# ---------------------------------------------------------------------------


def test_pi_silent_step_collapses_only_weakly():
    left = pnew("z", ppar(pout("z", "a"), pin("z", "y", pout("x", "b"))))
    right = pout("x", "b")
    assert (
        pi_barbed_bisim(left, right, weak=True, restrict=["x"]).verdict
        is BisimVerdict.BISIMILAR
    )
    assert (
        pi_barbed_bisim(left, right, weak=False, restrict=["x"]).verdict
        is BisimVerdict.NOT_BISIMILAR
    )


def test_pi_replication_keeps_input_barb_after_communication():
    r = pi_barbed_bisim(
        ppar(prepl(pin("x", "y", pnil())), pout("x", "a")),
        ppar(pin("x", "y", pnil()), pout("x", "a")),
        weak=True,
    )
    assert r.verdict is BisimVerdict.NOT_BISIMILAR


# ---------------------------------------------------------------------------
# Weak barb sets
# ---------------------------------------------------------------------------


def test_weak_barb_sets_respect_restriction():
    q2 = par(inp(y, a, lift(x, nil())), lift(y, nil()))
    s1, truncated1 = rho_weak_barb_set(q2, [x])
    assert truncated1 is False
    assert s1 == frozenset({("out", x)})

    left = pnew("z", ppar(pout("z", "a"), pin("z", "y", pout("x", "b"))))
    s2, truncated2 = pi_weak_barb_set(left, ["x", "z"])
    assert truncated2 is False
    assert s2 == frozenset({("out", "x")})  # the bound z never barbs


# ---------------------------------------------------------------------------
# Divergence verdicts
# ---------------------------------------------------------------------------


def test_divergence_cycle_on_self_restoring_forwarder():
    # REARM consumes a message and re-emits it along with a live copy of the
    # payload; fed its own quotation it reproduces the exact starting state.
    rearm = inp(x, a, par(drop(a), lift(x, drop(a))))
    omega = par(rearm, lift(x, rearm))
    rep = divergence_probe(omega)
    assert rep.verdict is DivergenceVerdict.DIVERGES
    assert rep.rule == "cycle"


def test_divergence_growth_on_accumulating_forwarder():
    # Like the self-restoring forwarder but each round also deposits w!(0),
    # so no state ever recurs; the truncated run shows replayable growth.
    g = inp(x, a, par(drop(a), lift(x, drop(a)), lift(w, nil())))
    rep = divergence_probe(par(g, lift(x, g)), max_states=60, max_depth=40)
    assert rep.verdict is DivergenceVerdict.DIVERGES
    assert rep.rule == "growth"


def test_divergence_terminates_on_finite_runs():
    t1 = par(lift(z, nil()), inp(z, a, lift(x, nil())))
    rep = divergence_probe(t1)
    assert rep.verdict is DivergenceVerdict.TERMINATES
    rep0 = divergence_probe(nil())
    assert rep0.verdict is DivergenceVerdict.TERMINATES
    assert rep0.states == 1


def test_divergence_replay_on_legacy_replication_machine():
    rep = divergence_probe(encode_mr(prepl(pnil())).state, max_states=300, max_depth=100)
    assert rep.verdict is DivergenceVerdict.DIVERGES
    assert rep.rule == "replay"


def test_corrected_encoding_of_terminating_term_terminates():
    enc = encode_ns(pnew("z", pout("u", "z")))
    rep = divergence_probe(enc.state, max_states=300, max_depth=100)
    assert rep.verdict is DivergenceVerdict.TERMINATES


def test_pi_divergence_both_verdicts():
    looping = ppar(prepl(pin("x", "y", pout("x", "a"))), pout("x", "a"))
    rep1 = pi_divergence(looping)
    assert rep1.verdict is DivergenceVerdict.DIVERGES
    assert rep1.rule == "cycle"

    finite = pnew("z", ppar(pout("z", "a"), pin("z", "y", pnil())))
    assert pi_divergence(finite).verdict is DivergenceVerdict.TERMINATES


# ---------------------------------------------------------------------------
# Replay matcher units
# ---------------------------------------------------------------------------


def test_replay_matching_requires_names_to_deepen():
    lx = lift(x, nil())
    ly = lift(lincr(x), nil())
    assert iso(lx, ly)
    assert not iso(ly, lx)


def test_replay_matching_rejects_swaps():
    sw1 = par(lift(x, nil()), inp(lincr(x), a, nil()))
    sw2 = par(lift(lincr(x), nil()), inp(x, a, nil()))
    assert not iso(sw1, sw2)


def test_replay_matching_is_injective_on_names():
    i1 = par(lift(x, nil()), lift(y, nil()))
    i2 = par(lift(z, nil()), lift(z, nil()))
    assert not iso(i1, i2)


def test_replay_matching_peels_output_wrapping():
    m = lincr(lincr(x))
    assert iso(lift(x, drop(m)), lift(x, lift(m, drop(m))))
    assert not iso(lift(x, lift(m, drop(m))), lift(x, drop(m)))
    # wrapping guards are unconstrained names
    assert iso(lift(x, drop(m)), lift(x, lift(y, lift(z, drop(m)))))


def test_replay_matching_keeps_binder_structure_rigid():
    assert not iso(inp(x, a, drop(a)), inp(x, a, nil()))
    assert iso(inp(x, a, drop(a)), inp(lincr(x), a, drop(a)))
