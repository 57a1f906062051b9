"""End-to-end experiments over the two encodings.

Three reproduction reports and a randomized property suite:

* ``repro_cex1`` — replication-scoped restriction versus shared restriction.
  A context that receives twice on ``u`` and then synchronizes the two
  received names distinguishes the source terms in the name-passing calculus,
  but under the legacy (machine-rebinding) encoding both translations emit a
  constant object on ``phi(u)``, so the translated context cannot tell them
  apart.

* ``repro_cex2`` — two source terms the name-passing canonicalizer already
  identifies (an unused restriction is erased), yet whose legacy encodings
  behave differently: one mints a new object every replication round, the
  other repeats the same derived name forever.

* ``repro_separation_witness`` — a reflective term with a one-step reduct
  whose output subject is a name that is neither free in, nor observable at,
  the original term: runtime-minted fresh names make observation
  non-monotonic in a way impossible in the name-passing calculus.

* ``check_criteria`` — a seed-deterministic corpus of name-passing terms run
  against five behavioural criteria of the corrected (name-server) encoding:
  parameter independence, substitution invariance, operational
  correspondence (completeness and soundness), observational correspondence,
  and divergence reflection.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .encode import (
    EncodingError,
    RenamingPolicy,
    default_mr_params,
    encode_mr,
    encode_ns,
    make_encoding_params,
    translate_mr,
)
from .equiv import (
    BisimVerdict,
    DivergenceVerdict,
    _reach_sets,
    barbed_bisim,
    divergence_probe,
    pi_barbed_bisim,
    pi_divergence,
    pi_weak_barb_set,
    restricted_weak_obs,
    rho_weak_barb_set,
)
from .lts import Verdict, explore, weak_barb_search
from .piterm import (
    PIn,
    PNew,
    PNil,
    POut,
    PPar,
    PRepl,
    PiTerm,
    _Gensym,
    _name_markers,
    pi_barbs,
    pi_canon,
    pi_free_names,
    pi_step,
    pin,
    pnew,
    pnil,
    pout,
    ppar,
    prepl,
    show_pi,
)
from .rhoreduce import barbs as rho_barbs
from .rhoreduce import components
from .rhoreduce import step as rho_step
from .rhoterm import (
    Lift,
    canon_name,
    canon_proc,
    drop,
    free_names,
    gen_fresh,
    inp,
    lift,
    lincr,
    nil,
    par,
    quote,
    show_name,
    show_proc,
    subst_syn,
    NULL_NAME,
)

__all__ = [
    "PASS",
    "FAIL",
    "UNKNOWN",
    "Check",
    "Report",
    "Corpus",
    "BoundsTooSmall",
    "random_pi_term",
    "make_corpus",
    "repro_cex1",
    "repro_cex2",
    "repro_separation_witness",
    "check_criteria",
]

PASS = "Pass"
FAIL = "Fail"
UNKNOWN = "Unknown"


class BoundsTooSmall(RuntimeError):
    """An exploration was cut off before a required check could resolve."""


@dataclass
class Check:
    label: str
    verdict: str  # PASS / FAIL / UNKNOWN
    evidence: object = None

    def to_dict(self) -> dict:
        return {"label": self.label, "verdict": self.verdict, "evidence": self.evidence}


@dataclass
class Report:
    name: str
    checks: list
    bounds_used: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.verdict == PASS for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "bounds_used": self.bounds_used,
            "elapsed_seconds": round(self.elapsed, 3),
        }

    def summary_lines(self) -> list:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"]
        for c in self.checks:
            lines.append(f"  {c.verdict:7s} {c.label}")
        return lines


# ---------------------------------------------------------------------------
# Corpus generation
# ---------------------------------------------------------------------------

_ATOM_POOL = ("a", "b", "c", "u", "w", "x")


def random_pi_term(
    rng: random.Random, size: int = 10, atoms: tuple = _ATOM_POOL
) -> PiTerm:
    """A random name-passing term with at most ``size`` grammar nodes.

    Replication is always input-guarded, so every generated term is
    encodable.  Binder names are drawn from a dedicated pool disjoint from
    the free-atom pool; generation is deterministic in ``rng``.

    Two biases keep the corpus behaviourally interesting rather than a pile
    of stuck terms: each term concentrates most subject/object choices on a
    couple of "hot" atoms, and one parallel production directly emits a
    send/receive pair on a shared subject.
    """
    counter = [0]
    hot = tuple(rng.sample(atoms, 2))

    def fresh_binder() -> str:
        counter[0] += 1
        return f"p{counter[0] - 1}"

    def go(budget: int, scope: tuple):
        names = atoms + scope

        def pick() -> str:
            if rng.random() < 0.6:
                return rng.choice(hot + scope[-1:])
            return rng.choice(names)

        options = ["out", "nil"]
        weights = [4, 1]
        if budget >= 2:
            options += ["in", "new"]
            weights += [4, 2]
        if budget >= 3:
            options += ["par", "repl"]
            weights += [4, 1]
        if budget >= 4:
            options += ["redex"]
            weights += [4]
        kind = rng.choices(options, weights)[0]

        if kind == "nil":
            return pnil(), 1
        if kind == "out":
            return pout(pick(), pick()), 1
        if kind == "in":
            b = fresh_binder()
            body, c = go(budget - 1, scope + (b,))
            return pin(pick(), b, body), c + 1
        if kind == "new":
            b = fresh_binder()
            body, c = go(budget - 1, scope + (b,))
            return pnew(b, body), c + 1
        if kind == "repl":
            b = fresh_binder()
            body, c = go(budget - 2, scope + (b,))
            return prepl(pin(pick(), b, body)), c + 2
        if kind == "redex":
            subj = pick()
            b = fresh_binder()
            body, c = go(budget - 3, scope + (b,))
            return ppar(pout(subj, pick()), pin(subj, b, body)), c + 3
        # par
        left_budget = rng.randint(1, budget - 2)
        lterm, lc = go(left_budget, scope)
        rterm, rc = go(budget - 1 - lc, scope)
        return ppar(lterm, rterm), lc + rc + 1

    term, _ = go(max(1, size), ())
    return term


@dataclass
class Corpus:
    seed: int
    size_limit: int
    terms: list


def make_corpus(seed: int = 1, count: int = 50, size_limit: int = 10) -> Corpus:
    rng = random.Random(seed)
    return Corpus(
        seed=seed,
        size_limit=size_limit,
        terms=[random_pi_term(rng, size_limit) for _ in range(count)],
    )


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _objects_on(state, subject) -> list:
    """Payload names of every output component on ``subject`` (multiset)."""
    out = []
    for c in components(state):
        if isinstance(c, Lift) and c.subject is subject:
            out.append(canon_name(quote(c.body)))
    return out


def _inclusion_verdict(sub: frozenset, sub_trunc: bool, sup: frozenset, sup_trunc: bool) -> str:
    """Verdict for a claim ``sub ⊆ sup`` when either set may be a truncated
    (lower-bound) observation."""
    if not (sub <= sup):
        return UNKNOWN if sup_trunc else FAIL
    return UNKNOWN if sub_trunc else PASS


def _rename_free_atom(t: PiTerm, old: str, new: str) -> PiTerm:
    """Replace free occurrences of atom ``old`` by ``new`` in a raw term."""

    def occ(n):
        return new if n == old else n

    def go(x):
        if isinstance(x, PNil):
            return x
        if isinstance(x, POut):
            return pout(occ(x.subject), occ(x.obj))
        if isinstance(x, PIn):
            if x.binder == old:
                return pin(occ(x.subject), x.binder, x.body)
            return pin(occ(x.subject), x.binder, go(x.body))
        if isinstance(x, PNew):
            if x.binder == old:
                return x
            return pnew(x.binder, go(x.body))
        if isinstance(x, PRepl):
            return prepl(go(x.body))
        return ppar(*(go(c) for c in x.children))

    return go(t)


def _atoms_in_raw(t: PiTerm) -> set:
    acc: set = set()

    def go(x):
        if isinstance(x, POut):
            acc.add(x.subject)
            acc.add(x.obj)
        elif isinstance(x, PIn):
            acc.add(x.subject)
            acc.add(x.binder)
            go(x.body)
        elif isinstance(x, PNew):
            acc.add(x.binder)
            go(x.body)
        elif isinstance(x, PRepl):
            go(x.body)
        elif isinstance(x, PPar):
            for c in x.children:
                go(c)

    go(t)
    return {a for a in acc if isinstance(a, str)}


# ---------------------------------------------------------------------------
# Separation witness
# ---------------------------------------------------------------------------


def repro_separation_witness(max_states: int = 64, max_depth: int = 8) -> Report:
    """A term whose one-step reduct outputs on a name the term itself neither
    contains free nor can be observed at: observation is not monotone under
    reduction because outputs mint names at runtime."""
    t0 = time.perf_counter()
    x1 = NULL_NAME
    x2 = gen_fresh([x1])
    a = gen_fresh([x1, x2])
    payload = par(drop(x1), drop(x2))
    u = canon_name(quote(payload))
    binder = gen_fresh([x1, x2, a])
    term = canon_proc(par(lift(a, payload), inp(a, binder, lift(binder, nil()))))

    checks = []
    no_barb = rho_barbs(term, [u]) == frozenset()
    checks.append(
        Check(
            "term has no barb at the minted subject",
            PASS if no_barb else FAIL,
            {"term": show_proc(term), "subject": show_name(u)},
        )
    )
    not_free = u not in free_names(term)
    checks.append(
        Check(
            "minted subject is not free in the term",
            PASS if not_free else FAIL,
            {"free_names": sorted(show_name(n) for n in free_names(term))},
        )
    )
    succs = rho_step(term)
    expected = canon_proc(lift(u, nil()))
    one_step = len(succs) == 1 and succs[0] is expected
    barb_after = one_step and ("out", u) in rho_barbs(succs[0], [u])
    checks.append(
        Check(
            "a one-step reduct barbs on the minted subject",
            PASS if (one_step and barb_after) else FAIL,
            {
                "successors": [show_proc(s) for s in succs],
                "expected_reduct": show_proc(expected),
            },
        )
    )
    return Report(
        "separation",
        checks,
        {"max_states": max_states, "max_depth": max_depth},
        time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Counter-example 1: replication-scoped vs shared restriction
# ---------------------------------------------------------------------------


def _cex_context() -> PiTerm:
    """Receive twice on u, then synchronize the two received names and flag
    on x.  Objects are a dummy atom: only the synchronization matters."""
    return pin(
        "u",
        "n1",
        pin(
            "u",
            "n2",
            ppar(pout("n1", "o"), pin("n2", "w0", pout("x", "o"))),
        ),
    )


def repro_cex1(
    q: Optional[PiTerm] = None,
    max_states: int = 20000,
    max_depth: int = 26,
    pi_max_states: int = 4000,
    pi_max_depth: int = 40,
) -> Report:
    """Fresh-per-round restriction against shared restriction, under a
    two-reception context.  The sources are distinguishable; their legacy
    encodings are not, because both emit a constant derived object on the
    image of u."""
    t0 = time.perf_counter()
    if q is None:
        q = pnil()

    inner = ppar(pnew("z", pout("u", "z")), q)  # (new z. u!z) | Q
    p1 = prepl(inner)  # fresh z each round
    p2 = pnew("z", prepl(ppar(pout("u", "z"), q)))  # one shared z
    ctx = _cex_context()
    c1 = ppar(p1, ctx)
    c2 = ppar(p2, ctx)

    checks = []

    # (i) the sources are distinguished in the name-passing calculus
    s1 = weak_barb_search(
        pi_canon(c1),
        pi_step,
        lambda s: ("out", "x") in pi_barbs(s),
        max_states=pi_max_states,
        max_depth=pi_max_depth,
    )
    if s1.verdict is Verdict.UNKNOWN:
        raise BoundsTooSmall("source-side exploration of the fresh-per-round term was cut off")
    checks.append(
        Check(
            "source side: fresh-per-round term never flags on x (exhaustive)",
            PASS if s1.verdict is Verdict.NO else FAIL,
            {"explored": s1.explored, "verdict": s1.verdict.value},
        )
    )
    s2 = weak_barb_search(
        pi_canon(c2),
        pi_step,
        lambda s: ("out", "x") in pi_barbs(s),
        max_states=pi_max_states,
        max_depth=pi_max_depth,
    )
    if s2.verdict is not Verdict.YES:
        raise BoundsTooSmall("source-side exploration of the shared-restriction term found no flag")
    checks.append(
        Check(
            "source side: shared-restriction term flags on x",
            PASS,
            {"depth": s2.depth, "trace_length": len(s2.trace or [])},
        )
    )

    # (ii) legacy encodings emit constant objects on phi(u)
    pol = RenamingPolicy()
    pol.scan(c1)
    pol.scan(c2)
    enc1 = encode_mr(c1, policy=pol)
    enc2 = encode_mr(c2, policy=pol)
    phi_u = pol.name_for("u")
    phi_x = pol.name_for("x")
    phi_o = pol.name_for("o")
    n0 = enc1.n
    side_param = lincr(n0)  # left split of the top parameter
    expected1 = canon_name(lincr(side_param))  # frozen derived name, per round
    expected2 = canon_name(side_param)  # the minted name is the side parameter

    results = {}
    for tag, enc, expected in (
        ("fresh-per-round", enc1, expected1),
        ("shared", enc2, expected2),
    ):
        g = explore(enc.state, rho_step, max_states=max_states, max_depth=max_depth)
        objs = set()
        flagged = False
        for st in g.states:
            objs.update(_objects_on(st, phi_u))
            if not flagged and ("out", phi_x) in rho_barbs(st, [phi_x]):
                flagged = True
        results[tag] = (g, objs, flagged)
        if not flagged or not objs:
            raise BoundsTooSmall(
                f"legacy exploration of the {tag} translation did not complete two rounds"
            )
        constant = objs == {expected}
        checks.append(
            Check(
                f"encoded side: {tag} translation emits one constant object on phi(u)",
                PASS if constant else FAIL,
                {
                    "objects": sorted(show_name(o) for o in objs),
                    "expected": show_name(expected),
                    "states": len(g.states),
                    "truncated": g.truncated,
                },
            )
        )
    checks.append(
        Check(
            "encoded side: both translated contexts flag on phi(x)",
            PASS if results["fresh-per-round"][2] and results["shared"][2] else FAIL,
            None,
        )
    )

    # (iii) no restricted barb separates the two encodings within bounds
    subjects = [phi_u, phi_x, phi_o]
    w1 = frozenset()
    w2 = frozenset()
    for st in results["fresh-per-round"][0].states:
        w1 |= rho_barbs(st, subjects)
    for st in results["shared"][0].states:
        w2 |= rho_barbs(st, subjects)
    checks.append(
        Check(
            "encoded side: restricted weak barbs coincide within bounds",
            PASS if w1 == w2 else FAIL,
            {
                "barbs": sorted(f"{d} {show_name(n)}" for d, n in w1),
                "only_left": sorted(f"{d} {show_name(n)}" for d, n in w1 - w2),
                "only_right": sorted(f"{d} {show_name(n)}" for d, n in w2 - w1),
            },
        )
    )

    return Report(
        "cex1",
        checks,
        {
            "max_states": max_states,
            "max_depth": max_depth,
            "pi_max_states": pi_max_states,
            "pi_max_depth": pi_max_depth,
            "q": show_pi(q),
        },
        time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Counter-example 2: canonically equal sources, distinct encodings
# ---------------------------------------------------------------------------


def repro_cex2(
    max_states: int = 6000,
    max_depth: int = 16,
    search_max_states: int = 20000,
    search_max_depth: int = 26,
) -> Report:
    """Two sources the canonicalizer identifies (erasing an unused
    restriction) whose legacy encodings differ observably: one updates its
    emitted object every round, the other repeats a single derived name."""
    t0 = time.perf_counter()
    p1 = prepl(pnew("z", pout("u", "z")))
    p2 = prepl(pnew("q", pnew("z", pout("u", "z"))))
    ctx = _cex_context()

    checks = []

    # (i) source side: the two terms are the same canonical object
    same = pi_canon(p1) is pi_canon(p2)
    checks.append(
        Check(
            "source side: canonical forms coincide (unused restriction erased)",
            PASS if same else FAIL,
            {"canonical": show_pi(pi_canon(p1))},
        )
    )
    bis = pi_barbed_bisim(ppar(p1, ctx), ppar(p2, ctx), weak=True)
    checks.append(
        Check(
            "source side: contexted terms are weakly bisimilar",
            PASS if bis.verdict is BisimVerdict.BISIMILAR else FAIL,
            {"verdict": bis.verdict.value},
        )
    )

    # shared naming for all encoded checks
    pol = RenamingPolicy()
    pol.scan(p1)
    pol.scan(p2)
    phi_u = pol.name_for("u")
    n0, p0 = default_mr_params(p1, pol)

    # micro-check: the inner translations reduce to outputs of the expected
    # objects (the round parameter vs the frozen derived name)
    t_inner1 = canon_proc(translate_mr(pnew("z", pout("u", "z")), n0, p0, pol))
    succ1 = rho_step(t_inner1)
    d_name = canon_name(lincr(n0))
    ok1 = len(succ1) == 1 and _objects_on(succ1[0], phi_u) == [canon_name(n0)]
    t_inner2 = canon_proc(
        translate_mr(pnew("q", pnew("z", pout("u", "z"))), n0, p0, pol)
    )
    g_inner2 = explore(t_inner2, rho_step, max_states=64, max_depth=8)
    finals2 = [
        s for i, s in enumerate(g_inner2.states) if not g_inner2.edges[i]
    ]
    ok2 = len(finals2) == 1 and _objects_on(finals2[0], phi_u) == [d_name]
    checks.append(
        Check(
            "encoded side: single restriction emits the round parameter, nested "
            "restriction emits the frozen derived name",
            PASS if ok1 and ok2 else FAIL,
            {
                "single": [show_name(o) for s in succ1 for o in _objects_on(s, phi_u)],
                "nested": [show_name(o) for s in finals2 for o in _objects_on(s, phi_u)],
                "expected_single": show_name(canon_name(n0)),
                "expected_nested": show_name(d_name),
            },
        )
    )

    # (ii) objects across two rounds: updating vs constant
    enc1 = encode_mr(p1, policy=pol, n=n0, p=p0)
    enc2 = encode_mr(p2, policy=pol, n=n0, p=p0)

    def collect(enc):
        g = explore(enc.state, rho_step, max_states=max_states, max_depth=max_depth)
        all_objs = set()
        best_state: list = []
        for st in g.states:
            objs = _objects_on(st, phi_u)
            all_objs.update(objs)
            if len(objs) > len(best_state):
                best_state = objs
        return g, all_objs, best_state

    g1, objs1, multi1 = collect(enc1)
    g2, objs2, multi2 = collect(enc2)
    if len(multi1) < 2 or len(multi2) < 2:
        raise BoundsTooSmall("legacy exploration did not reach a second emission")
    distinct_rounds = len(objs1) >= 2 and len(set(multi1)) >= 2
    checks.append(
        Check(
            "encoded side: fresh-per-round translation emits pairwise distinct objects",
            PASS if distinct_rounds else FAIL,
            {
                "objects": sorted(show_name(o) for o in objs1),
                "coexisting": [show_name(o) for o in multi1],
                "states": len(g1.states),
            },
        )
    )
    constant_rounds = objs2 == {d_name} and len(multi2) >= 2
    checks.append(
        Check(
            "encoded side: nested-restriction translation repeats one derived object",
            PASS if constant_rounds else FAIL,
            {
                "objects": sorted(show_name(o) for o in objs2),
                "expected": show_name(d_name),
                "coexisting": [show_name(o) for o in multi2],
                "states": len(g2.states),
            },
        )
    )

    # (iii) a translated context tells the encodings apart
    pol2 = RenamingPolicy()
    c1 = ppar(p1, ctx)
    c2 = ppar(p2, ctx)
    pol2.scan(c1)
    pol2.scan(c2)
    encc1 = encode_mr(c1, policy=pol2)
    encc2 = encode_mr(c2, policy=pol2)
    phi_x = pol2.name_for("x")
    f1 = weak_barb_search(
        encc1.state,
        rho_step,
        lambda s: ("out", phi_x) in rho_barbs(s, [phi_x]),
        max_states=search_max_states,
        max_depth=search_max_depth,
    )
    f2 = weak_barb_search(
        encc2.state,
        rho_step,
        lambda s: ("out", phi_x) in rho_barbs(s, [phi_x]),
        max_states=search_max_states,
        max_depth=search_max_depth,
    )
    separated = f1.verdict is not Verdict.YES and f2.verdict is Verdict.YES
    checks.append(
        Check(
            "encoded side: the translated context flags only the constant-object translation",
            PASS if separated else FAIL,
            {
                "fresh_per_round": f1.verdict.value,
                "constant": f2.verdict.value,
                "flag_depth": f2.depth,
            },
        )
    )

    return Report(
        "cex2",
        checks,
        {
            "max_states": max_states,
            "max_depth": max_depth,
            "search_max_states": search_max_states,
            "search_max_depth": search_max_depth,
        },
        time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Criteria suite: five behavioural properties of the corrected encoding
# ---------------------------------------------------------------------------


def _worst(verdicts: Iterable[str]) -> str:
    vs = list(verdicts)
    if FAIL in vs:
        return FAIL
    if UNKNOWN in vs:
        return UNKNOWN
    return PASS


def _weak_sets(graph, barb_of) -> list:
    """Per-state weak observation sets over an explored graph."""
    n = len(graph.states)
    base = [barb_of(s) for s in graph.states]
    reach = _reach_sets(n, graph.edges)
    out = []
    for i in range(n):
        acc: frozenset = frozenset()
        for j in reach[i]:
            acc |= base[j]
        out.append(acc)
    return out


def _prepare_term(term: PiTerm, bounds: dict) -> dict:
    """Everything the per-term property checks share."""
    pol = RenamingPolicy()
    pol.scan(term)
    canon = pi_canon(term)
    fn = sorted(pi_free_names(canon))
    phi = {a: pol.name_for(a) for a in fn}
    subjects = [phi[a] for a in fn]
    params = make_encoding_params(pol)
    enc = encode_ns(term, policy=pol, params=params)
    g_rho = explore(
        enc.state,
        rho_step,
        max_states=bounds["max_states"],
        max_depth=bounds["max_depth"],
    )
    g_pi = explore(
        canon,
        pi_step,
        max_states=bounds["pi_max_states"],
        max_depth=bounds["pi_max_depth"],
    )
    return {
        "term": term,
        "canon": canon,
        "fn": fn,
        "phi": phi,
        "subjects": subjects,
        "pol": pol,
        "params": params,
        "enc": enc,
        "g_rho": g_rho,
        "g_pi": g_pi,
    }


def _map_pi_barbs(barbs: frozenset, phi: dict) -> frozenset:
    return frozenset((d, phi[a]) for d, a in barbs if a in phi)


def _prop1_parameter_independence(b: dict, bounds: dict) -> tuple:
    """The encoding's observable behaviour does not depend on which derived
    parameter names the encoder picked (strong bisimilarity, restricted to
    the images of the source's free atoms)."""
    params2 = make_encoding_params(b["pol"], others=b["params"].all_names())
    enc2 = encode_ns(b["term"], policy=b["pol"], params=params2)
    subjects = b["subjects"]
    rep = barbed_bisim(
        b["enc"].state,
        enc2.state,
        rho_step,
        lambda s: rho_barbs(s, subjects),
        weak=False,
        max_states=bounds["bisim_max_states"],
        max_depth=bounds["max_depth"],
    )
    if rep.verdict is BisimVerdict.BISIMILAR:
        return PASS, None
    if rep.verdict is BisimVerdict.UNKNOWN:
        return UNKNOWN, {"reason": "bisim exploration truncated"}
    return FAIL, {"witness": repr(rep.witness)}


def _prop2_substitution_invariance(b: dict, rng: random.Random) -> tuple:
    """Renaming a free source atom commutes with encoding: translate the
    renamed source, or rename the translated term — same canonical result."""
    taken = _atoms_in_raw(b["term"])
    fresh = (f"v{i}" for i in range(len(taken) + 2))
    spare = [a for a in fresh if a not in taken]
    u = spare[0]
    w = rng.choice(b["fn"]) if b["fn"] else spare[1]
    pol = b["pol"]
    phi_w = pol.name_for(w)
    phi_u = pol.name_for(u)
    renamed = _rename_free_atom(b["term"], w, u)
    e_sigma = encode_ns(renamed, policy=pol, params=b["params"]).state
    e_subst = canon_proc(subst_syn(b["enc"].state, phi_u, phi_w))
    if e_sigma is e_subst:
        return PASS, None
    return FAIL, {
        "w": w,
        "u": u,
        "translated_renamed": show_proc(e_sigma)[:200],
        "renamed_translation": show_proc(e_subst)[:200],
    }


def _prop3_operational_correspondence(b: dict, bounds: dict) -> tuple:
    """Completeness: each one-step source reduct is matched by a reachable
    encoded state weakly bisimilar (restricted) to the reduct's own fresh
    encoding.  Soundness: every reachable encoded state observes like some
    reachable source term."""
    g_rho, g_pi = b["g_rho"], b["g_pi"]
    subjects = b["subjects"]
    phi = b["phi"]

    def rho_bf(s):
        return rho_barbs(s, subjects)

    rho_ws = _weak_sets(g_rho, rho_bf)
    pi_ws = _weak_sets(g_pi, lambda s: _map_pi_barbs(pi_barbs(s, b["fn"]), phi))

    verdicts = []
    evidence = {}

    # completeness over the root's direct reducts
    if g_rho.truncated:
        verdicts.append(UNKNOWN)
        evidence["completeness"] = "encoded exploration truncated"
    else:
        for j in g_pi.edges[0]:
            reduct = g_pi.states[j]
            named = _name_markers(reduct, (), _Gensym("r"))
            enc_r = encode_ns(named, policy=b["pol"], params=b["params"])
            wr, wr_trunc = rho_weak_barb_set(
                enc_r.state,
                subjects,
                max_states=bounds["max_states"],
                max_depth=bounds["max_depth"],
            )
            if wr_trunc:
                verdicts.append(UNKNOWN)
                evidence.setdefault("completeness", "reduct exploration truncated")
                continue
            candidates = sorted(
                (i for i in range(len(g_rho.states)) if rho_ws[i] == wr),
                key=lambda i: g_rho.depths[i],
            )[:3]
            outcome = None
            for i in candidates:
                rep = barbed_bisim(
                    g_rho.states[i],
                    enc_r.state,
                    rho_step,
                    rho_bf,
                    weak=True,
                    max_states=bounds["bisim_max_states"],
                    max_depth=bounds["max_depth"],
                )
                if rep.verdict is BisimVerdict.BISIMILAR:
                    outcome = PASS
                    break
                if rep.verdict is BisimVerdict.UNKNOWN:
                    outcome = UNKNOWN
            if outcome is None:
                outcome = FAIL if candidates else FAIL
                evidence.setdefault("completeness_failure", show_pi(reduct))
            verdicts.append(outcome)

    # soundness: every encoded state's weak observations match some source state
    if g_rho.truncated or g_pi.truncated:
        verdicts.append(UNKNOWN)
        evidence.setdefault("soundness", "exploration truncated")
    else:
        pi_set_pool = set(pi_ws)
        bad = [i for i in range(len(g_rho.states)) if rho_ws[i] not in pi_set_pool]
        if bad:
            verdicts.append(FAIL)
            evidence["soundness_failure"] = {
                "state": show_proc(g_rho.states[bad[0]])[:200],
                "weak_barbs": sorted(f"{d} {show_name(n)}" for d, n in rho_ws[bad[0]]),
            }
        else:
            verdicts.append(PASS)
    return _worst(verdicts), (evidence or None)


def _prop4_observational_correspondence(b: dict, bounds: dict) -> tuple:
    """Immediate source observations survive encoding (componentwise, weakly),
    and encoded observations never exceed the source's weak observations."""
    leaves = []
    stack = [b["term"]]
    while stack:
        x = stack.pop()
        if isinstance(x, PPar):
            stack.extend(reversed(x.children))
        else:
            leaves.append(x)
    parts = [encode_ns(leaf, policy=b["pol"]) for leaf in leaves]
    phi = b["phi"]
    subjects = b["subjects"]
    verdicts = []
    evidence = {}

    for d, a in pi_barbs(b["canon"], b["fn"]):
        obs = restricted_weak_obs(
            b["term"],
            (d, phi[a]),
            restrict=subjects,
            encoded_parts=parts,
            max_states=bounds["max_states"],
            max_depth=bounds["max_depth"],
        )
        if obs is Verdict.YES:
            verdicts.append(PASS)
        elif obs is Verdict.NO:
            verdicts.append(FAIL)
            evidence.setdefault("missing_barb", f"{d} {a}")
        else:
            verdicts.append(UNKNOWN)

    for leaf, part in zip(leaves, parts):
        wset, wtr = rho_weak_barb_set(
            part.state,
            subjects,
            max_states=bounds["max_states"],
            max_depth=bounds["max_depth"],
        )
        pw, ptr = pi_weak_barb_set(
            leaf,
            b["fn"],
            max_states=bounds["pi_max_states"],
            max_depth=bounds["pi_max_depth"],
        )
        v = _inclusion_verdict(wset, wtr, _map_pi_barbs(pw, phi), ptr)
        if v == FAIL:
            extra = wset - _map_pi_barbs(pw, phi)
            evidence.setdefault(
                "excess_barbs",
                {
                    "leaf": show_pi(leaf),
                    "barbs": sorted(f"{d} {show_name(n)}" for d, n in extra),
                },
            )
        verdicts.append(v)
    return _worst(verdicts or [PASS]), (evidence or None)


def _prop5_divergence_reflection(b: dict, bounds: dict) -> tuple:
    """If the source term cannot diverge, neither can its encoding."""
    from .equiv import _find_cycle

    g_pi = b["g_pi"]
    source_terminates = not g_pi.truncated and _find_cycle(
        len(g_pi.states), g_pi.edges
    ) is None
    if not source_terminates:
        return PASS, {"note": "source not shown terminating; nothing to reflect"}
    probe = divergence_probe(
        b["enc"].state,
        max_states=bounds["max_states"],
        max_depth=bounds["max_depth"],
    )
    if probe.verdict is DivergenceVerdict.TERMINATES:
        return PASS, None
    if probe.verdict is DivergenceVerdict.DIVERGES:
        return FAIL, {"rule": probe.rule, "term": show_pi(b["term"])}
    return UNKNOWN, {"reason": "encoded exploration truncated"}


_PROP_LABELS = {
    "prop1": "parameter independence",
    "prop2": "substitution invariance",
    "prop3": "operational correspondence",
    "prop4": "observational correspondence",
    "prop5": "divergence reflection",
}


def check_criteria(
    corpus: Optional[Corpus] = None,
    seed: int = 1,
    count: int = 50,
    size: int = 10,
    max_states: int = 1500,
    max_depth: int = 80,
    pi_max_states: int = 600,
    pi_max_depth: int = 60,
    bisim_max_states: int = 800,
) -> Report:
    """Run the five behavioural criteria over a deterministic corpus."""
    t0 = time.perf_counter()
    if corpus is None:
        corpus = make_corpus(seed=seed, count=count, size_limit=size)
    rng = random.Random(corpus.seed ^ 0x5EED)
    bounds = {
        "max_states": max_states,
        "max_depth": max_depth,
        "pi_max_states": pi_max_states,
        "pi_max_depth": pi_max_depth,
        "bisim_max_states": bisim_max_states,
    }

    tallies = {k: {PASS: 0, FAIL: 0, UNKNOWN: 0} for k in _PROP_LABELS}
    samples = {k: [] for k in _PROP_LABELS}

    for term in corpus.terms:
        try:
            b = _prepare_term(term, bounds)
        except EncodingError as exc:
            for k in _PROP_LABELS:
                tallies[k][UNKNOWN] += 1
                if len(samples[k]) < 8:
                    samples[k].append({"term": show_pi(term), "error": str(exc)})
            continue
        runs = {
            "prop1": lambda: _prop1_parameter_independence(b, bounds),
            "prop2": lambda: _prop2_substitution_invariance(b, rng),
            "prop3": lambda: _prop3_operational_correspondence(b, bounds),
            "prop4": lambda: _prop4_observational_correspondence(b, bounds),
            "prop5": lambda: _prop5_divergence_reflection(b, bounds),
        }
        for k, run in runs.items():
            verdict, ev = run()
            tallies[k][verdict] += 1
            if verdict != PASS and len(samples[k]) < 8:
                samples[k].append({"term": show_pi(term), "verdict": verdict, "evidence": ev})

    checks = []
    total = 0
    unknowns = 0
    for k, label in _PROP_LABELS.items():
        t = tallies[k]
        total += sum(t.values())
        unknowns += t[UNKNOWN]
        checks.append(
            Check(
                f"{k}: {label}",
                FAIL if t[FAIL] else PASS,
                {"tally": dict(t), "samples": samples[k]},
            )
        )
    rate = unknowns / total if total else 0.0
    checks.append(
        Check(
            "unknown rate below 20%",
            PASS if rate < 0.2 else FAIL,
            {"unknown_rate": round(rate, 4), "checks_run": total},
        )
    )
    return Report(
        "criteria",
        checks,
        dict(bounds, seed=corpus.seed, count=len(corpus.terms), size=corpus.size_limit),
        time.perf_counter() - t0,
    )
