"""Registry of whitelisted table/ledger discrepancies.

Ground truth is always the engine's direct computation.  A check may only be
whitelisted here with a derivation note explaining why the tabulated form
fails and what the derived correct statement is; unexplained mismatches must
fail.  Tests assert that every whitelisted failure in a report appears in
this registry and vice versa (the registry carries no dead entries).
"""

WHITELIST = {
    "tractor-ids/pair-op-commutator-alt-form": (
        "Two inequivalent normalizations of the pair operator's [X^M, D^N] "
        "relation circulate; the ledger form [X^M, D^N] = 2 D^{MN} - (d+2w) "
        "eta^{MN} verifies exactly on every background, while this alternative "
        "(D^{MN} = [X^M, D^N] + (d+2w) eta^{MN}) differs from it by a factor "
        "of 2 on D^{MN} and fails with residual -w f per middle slot.  Both "
        "are evaluated and reported rather than presuming one."
    ),
    "tractor-ids/d-sigma-commutator-displayed": (
        "[D^M, sigma] = (d+2w) I^M + 2 I_N D^{NM} as displayed contracts the "
        "pair operator on its first slot; expanding both sides on a flat "
        "background at unit scale gives top-slot residual 4w f.  The "
        "contraction belongs on the second slot: [D^M, sigma] = (d+2w) I^M "
        "+ 2 I_N D^{MN}, which verifies exactly (checked as "
        "tractor-ids/d-sigma-commutator-derived)."
    ),
    "spinor-ids/x-slash-projector-displayed": (
        "The tabulated X-slash exchange rule 'X-slash Pi_pm = 2 sigma - "
        "Pi_mp X-slash' is dimensionally inconsistent as an operator "
        "statement; from {Gamma.X, Gamma.I} = 2 X.I = 2 sigma one derives "
        "X-slash Pi_pm = Pi_mp X-slash +- sigma/sqrt(I.I), which verifies "
        "exactly (checked as spinor-ids/x-slash-projector-derived)."
    ),
    "spinor-ids/pair-op-x-slash-displayed": (
        "The tabulated form 'Gamma^M I^N D_MN X-slash = (1/d)(sigma (d+2) - "
        "X-slash I-slash)' fails on generic weight-w spinors (residual "
        "(2w + 9/2) s per slot at d = 4: the display lacks the w-dependence). "
        " The composition is instead pinned by the verified relation "
        "Gamma^M I^N D_MN = (sigma Gamma.D - Gamma.X I.D)/(d+2w-2) evaluated "
        "at the shifted weight of Gamma.X Psi "
        "(checked as spinor-ids/pair-op-x-slash-derived)."
    ),
    "spinor-ids/x-slash-d-slash-commutator-displayed": (
        "[Gamma.X, Gamma.D] = 2 Gamma^M Gamma^N D_MN - (d+2w)(d+2) fails on "
        "generic weight-w spinors: treating the two symbols as a closed "
        "operator algebra ignores that Gamma.D acts at shifted weight after "
        "Gamma.X.  The exact closed form, assembled from the verified "
        "component tables, is [Gamma.X, Gamma.D] Psi = "
        "(-(d+2w+2)(d+2w) psi, 2 sqrt2 (d+2w) nabla-slash psi "
        "+ (d+2w-2)(d+2w) chi) "
        "(checked as spinor-ids/x-slash-d-slash-commutator-derived)."
    ),
    "spinor-ids/x-slash-d-slash-anticommutator-displayed": (
        "{Gamma.X, Gamma.D} = [Gamma.X, Gamma.D] + 2 D.X fails for the same "
        "weight-shift reason; the exact closed form is {Gamma.X, Gamma.D} "
        "Psi = ((d+2w+2)(d+2w) psi, -4 sqrt2 nabla-slash psi + "
        "(d+2w)(d+2w-2) chi) "
        "(checked as spinor-ids/x-slash-d-slash-anticommutator-derived)."
    ),
    "spinor-ids/projector-pair-op-exchange-displayed": (
        "Gamma^M I^N D_MN Pi_pm = -Pi_mp Gamma^M I^N D_MN as displayed has "
        "the wrong sign: the operator anticommutes with Gamma.I exactly "
        "(verified directly on a parallel scale tractor), which yields "
        "+Pi_mp on the right-hand side "
        "(checked as spinor-ids/projector-pair-op-exchange-derived)."
    ),
}
