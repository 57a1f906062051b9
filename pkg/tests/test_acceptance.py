"""End-to-end acceptance checks.

Each test exercises one externally stated guarantee of the package, prints a
single pass/fail line with its runtime against the allowed budget, and then
asserts both the outcome and the budget.  The checks rely only on public API
plus the independent rewrite oracle in tests/oracles.py.
"""

import itertools
import random
import time

import oracles
from rhopi.encode import encode_mr, encode_ns, make_encoding_params, name_server
from rhopi.encode import RenamingPolicy
from rhopi.equiv import DivergenceVerdict, divergence_probe, pi_divergence
from rhopi.harness import (
    check_criteria,
    make_corpus,
    random_pi_term,
    repro_cex1,
    repro_cex2,
    repro_separation_witness,
)
from rhopi.harness import _prop2_substitution_invariance, FAIL, PASS
from rhopi.lts import explore
from rhopi.piterm import pi_canon, pi_free_names, pnil, prepl, pi_step, subst_atom
from rhopi.rhoterm import (
    Lift,
    canon_name,
    canon_proc,
    drop,
    gen_fresh,
    lift,
    lincr,
    name_eq,
    par,
    quote,
    quote_depth,
)
from rhopi.rhoreduce import components, step as rho_step


def _report_line(ok: bool, label: str, elapsed: float, limit: float) -> None:
    verdict = "PASS" if ok else "FAIL"
    print(f"{verdict}  {label}  ({elapsed:.2f}s, limit {limit:.0f}s)")


def _timed(label: str, limit: float, work) -> None:
    t0 = time.perf_counter()
    ok, detail = work()
    elapsed = time.perf_counter() - t0
    _report_line(ok, label, elapsed, limit)
    assert ok, detail
    assert elapsed < limit, f"{label}: {elapsed:.2f}s exceeded the {limit:.0f}s budget"


# ---------------------------------------------------------------------------
# Counter-example reproductions
# ---------------------------------------------------------------------------


def test_legacy_encoding_confuses_replication_with_restriction():
    def work():
        rep = repro_cex1()
        bad = [c.label for c in rep.checks if c.verdict != PASS]
        return rep.passed, f"failing checks: {bad}"

    _timed("legacy encoding replication/restriction counter-example", 30.0, work)


def test_legacy_encoding_separates_source_identified_terms():
    def work():
        rep = repro_cex2()
        bad = [c.label for c in rep.checks if c.verdict != PASS]
        return rep.passed, f"failing checks: {bad}"

    _timed("legacy encoding separates source-identified terms", 30.0, work)


def test_runtime_minted_barb_separates_reflective_calculus():
    def work():
        rep = repro_separation_witness()
        if len(rep.checks) != 3:
            return False, f"expected exactly 3 checks, got {len(rep.checks)}"
        bad = [c.label for c in rep.checks if c.verdict != PASS]
        return rep.passed, f"failing checks: {bad}"

    _timed("runtime-minted barb witness (exactly three checks)", 1.0, work)


# ---------------------------------------------------------------------------
# Name-server dynamics
# ---------------------------------------------------------------------------


def test_name_server_initialization_and_served_names():
    def work():
        pol = RenamingPolicy()
        params = make_encoding_params(pol)
        state = canon_proc(name_server(params))

        # Exactly two start-up steps, each through a unique redex, then the
        # server is quiescent and ready for requests.
        for i in range(2):
            succs = rho_step(state)
            if len(succs) != 1:
                return False, f"start-up step {i + 1}: {len(succs)} redexes"
            state = succs[0]
        if rho_step(state):
            return False, "server not quiescent after two start-up steps"

        served = []
        replies = []
        expected = canon_name(params.s)
        for i in range(5):
            reply = gen_fresh(list(params.all_names()) + replies + served)
            replies.append(reply)
            req = canon_proc(par(state, lift(params.v, drop(reply))))
            g = explore(req, rho_step, max_states=64, max_depth=32)
            if g.truncated:
                return False, f"round {i + 1}: request run truncated"
            terminals = [s for k, s in enumerate(g.states) if not g.edges[k]]
            if len(terminals) != 1:
                return False, f"round {i + 1}: {len(terminals)} terminal states"
            state = terminals[0]
            got = [
                canon_name(quote(c.body))
                for c in components(state)
                if isinstance(c, Lift) and name_eq(c.subject, reply)
            ]
            if len(got) != 1:
                return False, f"round {i + 1}: {len(got)} replies on the reply channel"
            if not name_eq(got[0], expected):
                return False, f"round {i + 1}: served name is not the expected increment"
            served.append(got[0])
            expected = canon_name(lincr(expected))

        for a, b in itertools.combinations(served, 2):
            if name_eq(a, b):
                return False, "two served names are equivalent"
        return True, None

    _timed("name server start-up and first five served names", 1.0, work)


# ---------------------------------------------------------------------------
# Random-instance invariants
# ---------------------------------------------------------------------------


def test_name_equivalence_preserves_quote_depth():
    def work():
        rng = random.Random(5)
        checked = 0
        for i in range(1000):
            size = rng.randrange(1, 8)
            t = oracles.random_name(rng, size)
            if i % 2 == 0:
                u = oracles.congruent_variant(rng, t)
            else:
                u = oracles.random_name(rng, rng.randrange(1, 8))
            a = oracles.to_pkg_name(t)
            b = oracles.to_pkg_name(u)
            if name_eq(a, b) and quote_depth(a) != quote_depth(b):
                return False, f"pair {i}: equivalent names with different quote depth"
            checked += 1
        return checked == 1000, f"checked {checked} pairs"

    _timed("name equivalence preserves quote depth (1000 pairs)", 5.0, work)


def test_translation_parameter_names_pairwise_distinct():
    def work():
        rng = random.Random(6)
        for i in range(200):
            term = random_pi_term(rng, size=10)
            enc = encode_ns(term)
            names = list(enc.derivations.values())
            for a, b in itertools.combinations(names, 2):
                if name_eq(a, b):
                    return False, f"term {i}: two materialized parameters coincide"
        return True, None

    _timed("materialized translation parameters pairwise distinct (200 terms)", 10.0, work)


def test_substitution_commutes_with_translation():
    def work():
        rng = random.Random(7)
        for i in range(200):
            term = random_pi_term(rng, size=10)
            pol = RenamingPolicy()
            pol.scan(term)
            params = make_encoding_params(pol)
            bundle = {
                "term": term,
                "fn": sorted(pi_free_names(pi_canon(term))),
                "pol": pol,
                "params": params,
                "enc": encode_ns(term, policy=pol, params=params),
            }
            verdict, evidence = _prop2_substitution_invariance(bundle, rng)
            if verdict != PASS:
                return False, f"instance {i}: {evidence}"
        return True, None

    _timed("renaming commutes with translation (200 instances)", 10.0, work)


def test_reduction_stable_under_fresh_renaming():
    def work():
        rng = random.Random(8)
        for i in range(300):
            term = pi_canon(random_pi_term(rng, size=10))
            fn = sorted(pi_free_names(term))
            old = rng.choice(fn) if fn else "a"
            atoms = set(fn) | {old}
            fresh = next(f"f{k}" for k in range(len(atoms) + 1) if f"f{k}" not in atoms)
            lhs = {pi_canon(subst_atom(s, fresh, old)) for s in pi_step(term)}
            rhs = set(pi_step(subst_atom(term, fresh, old)))
            if lhs != rhs:
                return False, f"instance {i}: reduct sets differ after renaming"
        return True, None

    _timed("reduction stable under fresh renaming (300 instances)", 10.0, work)


# ---------------------------------------------------------------------------
# Behavioural-criteria suite and oracle agreement
# ---------------------------------------------------------------------------


def test_criteria_suite_default_run():
    def work():
        rep = check_criteria(seed=1, count=50, size=10)
        bad = [c.label for c in rep.checks if c.verdict == FAIL]
        return rep.passed, f"failing checks: {bad}"

    _timed("behavioural criteria suite (seed 1, 50 terms, size 10)", 120.0, work)


def test_canonical_equality_matches_rewrite_oracle():
    def work():
        procs = oracles.enumerate_procs(8)
        names = oracles.enumerate_names(8)

        pairs = 0
        for terms, convert, canon in (
            (procs, oracles.to_pkg_proc, canon_proc),
            (names, oracles.to_pkg_name, canon_name),
        ):
            oracle_classes = oracles.closure_partition(terms)
            pkg = [canon(convert(t)) for t in terms]
            for (i, a), (j, b) in itertools.combinations(enumerate(terms), 2):
                pairs += 1
                if (oracle_classes[i] == oracle_classes[j]) != (pkg[i] is pkg[j]):
                    return False, f"oracle disagrees on pair ({a!r}, {b!r})"
        return pairs >= 10_000, f"only {pairs} pairs enumerated"

    _timed("canonical equality agrees with the rewrite oracle (all pairs, size <= 8)", 120.0, work)


def test_divergence_contrast_between_encodings():
    def work():
        legacy = divergence_probe(encode_mr(prepl(pnil())).state)
        if legacy.verdict != DivergenceVerdict.DIVERGES:
            return False, f"legacy encoding of !0 probed as {legacy.verdict.name}"

        corpus = make_corpus(seed=1, count=50, size_limit=10)
        probed = 0
        for i, term in enumerate(corpus.terms):
            if pi_divergence(term).verdict != DivergenceVerdict.TERMINATES:
                continue
            probed += 1
            rep = divergence_probe(encode_ns(term).state)
            if rep.verdict != DivergenceVerdict.TERMINATES:
                return False, f"corpus term {i}: encoding probed as {rep.verdict.name}"
        return probed > 0, "no terminating corpus terms were probed"

    _timed("divergence contrast between the two encodings", 30.0, work)
