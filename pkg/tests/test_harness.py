"""Experiment-harness tests: corpus generation, the three packaged
reproductions, bound handling, report serialization, and determinism of the
behavioural-criteria suite."""

import json
import random

import pytest

from rhopi.harness import (
    FAIL,
    PASS,
    UNKNOWN,
    BoundsTooSmall,
    Check,
    Report,
    check_criteria,
    make_corpus,
    random_pi_term,
    repro_cex1,
    repro_cex2,
    repro_separation_witness,
)
from rhopi.piterm import PIn, PNew, PPar, PRepl, pi_canon, show_pi


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------


def test_corpus_is_deterministic_in_its_seed():
    a = make_corpus(seed=3, count=20, size_limit=8)
    b = make_corpus(seed=3, count=20, size_limit=8)
    assert [show_pi(t) for t in a.terms] == [show_pi(t) for t in b.terms]
    c = make_corpus(seed=4, count=20, size_limit=8)
    assert [show_pi(t) for t in a.terms] != [show_pi(t) for t in c.terms]


def test_random_terms_keep_replication_input_guarded():
    rng = random.Random(11)

    def walk(t):
        if isinstance(t, PRepl):
            assert isinstance(t.body, PIn)
            walk(t.body)
        elif isinstance(t, (PIn, PNew)):
            walk(t.body)
        elif isinstance(t, PPar):
            for c in t.children:
                walk(c)

    for _ in range(300):
        walk(random_pi_term(rng, size=rng.randrange(1, 14)))


def test_random_terms_respect_the_size_budget():
    rng = random.Random(12)

    def size(t):
        if isinstance(t, (PIn, PNew, PRepl)):
            return 1 + size(t.body)
        if isinstance(t, PPar):
            return 1 + sum(size(c) for c in t.children)
        return 1

    for _ in range(300):
        budget = rng.randrange(1, 14)
        assert size(random_pi_term(rng, size=budget)) <= budget


# ---------------------------------------------------------------------------
# Packaged reproductions
# ---------------------------------------------------------------------------


def test_separation_reproduction_has_three_named_passes():
    rep = repro_separation_witness()
    assert rep.passed
    labels = [c.label for c in rep.checks]
    assert len(labels) == 3
    assert len(set(labels)) == 3


def test_replication_restriction_reproduction_passes():
    rep = repro_cex1()
    assert rep.passed
    assert len(set(c.label for c in rep.checks)) == len(rep.checks)


def test_identified_sources_reproduction_passes():
    rep = repro_cex2()
    assert rep.passed
    assert len(set(c.label for c in rep.checks)) == len(rep.checks)


def test_too_small_bounds_raise_instead_of_failing_quietly():
    with pytest.raises(BoundsTooSmall):
        repro_cex1(pi_max_states=2, pi_max_depth=2)
    with pytest.raises(BoundsTooSmall):
        repro_cex2(max_states=4, max_depth=2)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def test_reports_serialize_to_json():
    rep = repro_separation_witness()
    d = rep.to_dict()
    assert d["name"] and d["passed"] is True
    assert all({"label", "verdict"} <= set(c) for c in d["checks"])
    json.dumps(d)  # must be JSON-clean


def test_report_passes_only_when_every_check_passes():
    good = Report("r", [Check("a", PASS), Check("b", PASS)])
    assert good.passed
    mixed = Report("r", [Check("a", PASS), Check("b", UNKNOWN)])
    assert not mixed.passed
    failed = Report("r", [Check("a", FAIL)])
    assert not failed.passed


# ---------------------------------------------------------------------------
# Criteria suite
# ---------------------------------------------------------------------------


def test_criteria_suite_small_run_is_deterministic():
    a = check_criteria(seed=5, count=12, size=8)
    b = check_criteria(seed=5, count=12, size=8)
    da, db = a.to_dict(), b.to_dict()
    da.pop("elapsed_seconds", None)
    db.pop("elapsed_seconds", None)
    assert da == db
    json.dumps(da)


def test_criteria_suite_reports_six_checks():
    rep = check_criteria(seed=5, count=6, size=6)
    assert len(rep.checks) == 6
    assert len(set(c.label for c in rep.checks)) == 6
