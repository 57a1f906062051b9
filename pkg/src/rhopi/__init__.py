"""Workbench for a reflective process calculus and the asynchronous,
choice-free name-passing calculus, built around two translations between
them: a legacy scheme whose replication machinery rebinds its own machine
names, and a corrected scheme that requests every fresh name from a runtime
name server.

Layout:

* ``rhoterm`` — reflective terms: quoted-process names, canonical forms,
  name equivalence, quote depth, the static name templates.
* ``rhoreduce`` — reduction, reachability, observables.
* ``piterm`` — name-passing terms, canonical forms, reduction, observables.
* ``encode`` — the two translations and their parameter policies.
* ``equiv`` — bounded barbed bisimulation, weak observation, divergence
  analysis.
* ``lts`` — bounded breadth-first exploration shared by the above.
* ``harness`` — packaged experiments and the randomized criteria suite.
* ``cli`` — parsers, printers, and the command-line interface.
"""

from .encode import (
    EncodingError,
    EncodingParams,
    MrEncoding,
    NsEncoding,
    RenamingPolicy,
    copier,
    derivable,
    encode_mr,
    encode_ns,
    make_encoding_params,
    name_server,
    translate_mr,
    translate_ns,
)
from .equiv import (
    BisimReport,
    BisimVerdict,
    DivergenceReport,
    DivergenceVerdict,
    barbed_bisim,
    divergence_probe,
    pi_barbed_bisim,
    pi_divergence,
    pi_weak_barb_set,
    restricted_weak_obs,
    rho_barbed_bisim,
    rho_weak_barb_set,
)
from .harness import (
    BoundsTooSmall,
    Check,
    Corpus,
    Report,
    check_criteria,
    make_corpus,
    random_pi_term,
    repro_cex1,
    repro_cex2,
    repro_separation_witness,
)
from .lts import BarbSearch, Lts, Verdict, explore, weak_barb_search
from .piterm import (
    PiTerm,
    pi_barbs,
    pi_canon,
    pi_eq,
    pi_free_names,
    pi_reduction_graph,
    pi_step,
    pin,
    pnew,
    pnil,
    pout,
    ppar,
    prepl,
    show_pi,
)
from .rhoreduce import barbs, components, reduction_graph, redexes, step
from .rhoterm import (
    NamespaceScheme,
    RhoName,
    RhoProc,
    canon_name,
    canon_proc,
    drop,
    free_names,
    gen_fresh,
    inp,
    lift,
    lincr,
    name_eq,
    ncomp,
    ncomp_power,
    nil,
    ns_member,
    par,
    quote,
    quote_depth,
    quote_depth_proc,
    rincr,
    show_name,
    show_proc,
    struct_eq,
    subst_sem,
    subst_syn,
)

__version__ = "0.1.0"
