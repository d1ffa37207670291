"""Tractor operator identity ledger (the scalar/vector subset).

Every identity is verified by applying both sides to generic fields (all
components undefined functions) with a symbolic weight, on the supplied
background at the supplied scale.  `identity_suite` returns a Report; the
spinor-valued ledger lives in the spinor module.

Two inequivalent normalizations of the pair operator appear in the source
material for [X^M, D^N]; the suite evaluates both and reports which one
holds, rather than presuming either (see checks pair-op/commutator-*).
"""

from __future__ import annotations

import itertools

import sympy as sp

from .report import CheckRecord, Report, status_of
from .scalar import decide_zero
from .tensor import UP
from .tractor import TRACTOR, TractorBundle, TractorField
from .weyl import ScaleField

__all__ = ["identity_suite"]


def _check(report, name, residual_comps, detail="", whitelisted=False):
    decs = [decide_zero(c) for c in residual_comps]
    report.add(
        CheckRecord(
            name, status_of(decs), detail=detail, residuals=decs, whitelisted=whitelisted
        )
    )


def identity_suite(geo, scale: ScaleField, weight=None, report=None):
    """Run the operator-identity ledger on one background and scale."""
    tb = TractorBundle(geo)
    d, n = tb.d, tb.n
    w = sp.Symbol("w") if weight is None else sp.sympify(weight)
    rep = report if report is not None else Report(f"tractor-ids[{geo.name}]")
    sigma = scale.sigma

    X = tb.canonical_X()
    I = tb.scale_tractor(scale)
    II = tb.dot(I, I).comps[0]

    f = TractorField.generic_scalar(tb, "f", w)
    V = TractorField.generic(tb, [(TRACTOR, UP)], "V", w)

    sig0 = TractorField(tb, [], weight=1, comps=[sigma])

    # --- pair operator definitions -------------------------------------
    # (d+2w-2) D^{MN} f = X^N D^M f - X^M D^N f
    DDf = tb.double_D(f)
    Df = tb.thomas_D(f)
    res = []
    for M, N in itertools.product(range(n), repeat=2):
        res.append(
            (d + 2 * w - 2) * DDf[(M, N)] - (X[(N,)] * Df[(M,)] - X[(M,)] * Df[(N,)])
        )
    _check(rep, "tractor-ids/pair-op-from-left-x", res)

    # D^{MN} f = 2/(d+2w+2) D^{[M} X^{N]} f
    XNf = [X.outer(f), None]  # X^N f has weight w+1
    Xf = X.outer(f)
    DXf = tb.thomas_D(Xf)  # index order (M, N)
    res = []
    for M, N in itertools.product(range(n), repeat=2):
        anti = (DXf[(M, N)] - DXf[(N, M)]) / 2
        res.append(DDf[(M, N)] - 2 * anti / (d + 2 * w + 2))
    _check(rep, "tractor-ids/pair-op-from-right-x", res)

    # [X^M, D^N] f = 2 D^{MN} f - (d+2w) eta^{MN} f   (ledger normalization)
    eta = tb.eta_inv()
    commut = {}
    for M, N in itertools.product(range(n), repeat=2):
        commut[(M, N)] = X[(M,)] * Df[(N,)] - DXf[(N, M)]
    res = [
        commut[(M, N)] - (2 * DDf[(M, N)] - (d + 2 * w) * eta[M, N] * f.comps[0])
        for M, N in itertools.product(range(n), repeat=2)
    ]
    _check(rep, "tractor-ids/pair-op-commutator-ledger-form", res)

    # D^{MN} = [X^M, D^N] + (d+2w) eta^{MN}  (alternative normalization; the
    # suite reports which form the background satisfies)
    res = [
        DDf[(M, N)] - (commut[(M, N)] + (d + 2 * w) * eta[M, N] * f.comps[0])
        for M, N in itertools.product(range(n), repeat=2)
    ]
    _check(
        rep,
        "tractor-ids/pair-op-commutator-alt-form",
        res,
        detail="alternative normalization; see discrepancy registry",
        whitelisted=True,
    )

    # D_M X_N f = X_M D_N f + (d+2w)(D_{MN} + eta_{MN}) f
    Xlow = tb.lower_tractor(X, 0)
    XlowF = Xlow.outer(f)
    D_XlowF = tb.thomas_D(XlowF)  # (M up, N low)
    D_XlowF = tb.lower_tractor(D_XlowF, 0)
    Dlow = tb.lower_tractor(Df, 0)
    DDlow = tb.lower_tractor(tb.lower_tractor(DDf, 0), 1)
    etalow = tb.eta()
    res = []
    for M, N in itertools.product(range(n), repeat=2):
        lhs = D_XlowF[(M, N)]
        rhs = Xlow[(M,)] * Dlow[(N,)] + (d + 2 * w) * (
            DDlow[(M, N)] + etalow[M, N] * f.comps[0]
        )
        res.append(lhs - rhs)
    _check(rep, "tractor-ids/d-x-exchange", res)

    # --- scale and canonical tractor identities --------------------------
    # D_M sigma = d I_M
    Dsig = tb.thomas_D(sig0)
    res = [Dsig[(M,)] - d * I[(M,)] for M in range(n)]
    _check(rep, "tractor-ids/d-of-scale", res)

    # D_M X_R = d eta_{MR}  (operator on the weight-one field X_R)
    DX = tb.thomas_D(Xlow)  # (M up, R low)
    DX = tb.lower_tractor(DX, 0)
    res = [
        DX[(M, R)] - d * etalow[M, R] for M, R in itertools.product(range(n), repeat=2)
    ]
    _check(rep, "tractor-ids/d-of-x", res)

    # X . D = w (d+2w-2) on any weight-w field
    XD = tb.dot(X, Df)
    _check(rep, "tractor-ids/x-dot-d", [XD.comps[0] - w * (d + 2 * w - 2) * f.comps[0]])

    # D . X = (d+w)(d+2w+2)
    DdotX = tb.contract_tractor(DXf, 0, 1)
    _check(
        rep,
        "tractor-ids/d-dot-x",
        [DdotX.comps[0] - (d + w) * (d + 2 * w + 2) * f.comps[0]],
    )

    # D_{MN} sigma = 2 X_[N I_M]
    DDsig = tb.double_D(sig0)
    DDsig_low = tb.lower_tractor(tb.lower_tractor(DDsig, 0), 1)
    Ilow = tb.lower_tractor(I, 0)
    res = []
    for M, N in itertools.product(range(n), repeat=2):
        res.append(
            DDsig_low[(M, N)] - (Xlow[(N,)] * Ilow[(M,)] - Xlow[(M,)] * Ilow[(N,)])
        )
    _check(rep, "tractor-ids/pair-op-of-scale", res)

    # D_{MN} X_R = 2 X_[N eta_M]R
    DDX = tb.double_D(Xlow)
    DDX = tb.lower_tractor(tb.lower_tractor(DDX, 0), 1)
    res = []
    for M, N, R in itertools.product(range(n), repeat=3):
        res.append(
            DDX[(M, N, R)]
            - (Xlow[(N,)] * etalow[M, R] - Xlow[(M,)] * etalow[N, R])
        )
    _check(rep, "tractor-ids/pair-op-of-x", res)

    # D_{MN} D^N = (w-1) D_M
    DDDf = tb.double_D(Df)  # pair (M, N) then operand index R (from Df)
    DDDf_low = tb.lower_tractor(tb.lower_tractor(DDDf, 0), 1)
    # contract N with the upper index of Df: slots (M, N, R) -> contract N, R
    contr = tb.contract_tractor(tb.raise_tractor(DDDf_low, 1), 1, 2)
    res = [contr[(M,)] - (w - 1) * Dlow[(M,)] for M in range(n)]
    _check(rep, "tractor-ids/pair-op-times-d", res)

    # X^M D_{MN} = w X_N
    DDf_low = tb.lower_tractor(tb.lower_tractor(DDf, 0), 1)
    XDD = tb.dot(X, tb.raise_tractor(DDf_low, 0))
    res = [XDD[(N,)] - w * Xlow[(N,)] * f.comps[0] for N in range(n)]
    _check(rep, "tractor-ids/x-times-pair-op", res)

    # --- commutators with the scale ---------------------------------------
    # [D^M, sigma] f: the ledger displays (d+2w) I^M + 2 I_N D^{NM} with the
    # contraction on the written first slot; direct computation shows the
    # contraction belongs on the second slot, 2 I_N D^{MN} (the two differ by
    # the pair operator's antisymmetry).  Both forms are evaluated: the
    # displayed one is retained as a whitelisted discrepancy, the derived one
    # must pass exactly.
    sigf = f.map(lambda c: sigma * c).with_weight(w + 1)
    D_sigf = tb.thomas_D(sigf)
    sig_Df = Df.map(lambda c: sigma * c)
    IDD_first = tb.dot(I, DDf)  # I_N D^{NM} -> free M
    IDD_second = tb.dot(I, DDf, slot_b=1)  # I_N D^{MN} -> free M
    res = [
        D_sigf[(M,)]
        - sig_Df[(M,)]
        - (d + 2 * w) * I[(M,)] * f.comps[0]
        - 2 * IDD_first[(M,)]
        for M in range(n)
    ]
    _check(
        rep,
        "tractor-ids/d-sigma-commutator-displayed",
        res,
        detail="displayed contraction slot; see discrepancy registry",
        whitelisted=True,
    )
    res = [
        D_sigf[(M,)]
        - sig_Df[(M,)]
        - (d + 2 * w) * I[(M,)] * f.comps[0]
        - 2 * IDD_second[(M,)]
        for M in range(n)
    ]
    _check(rep, "tractor-ids/d-sigma-commutator-derived", res)

    # [I.D, sigma^k] f = I.I sigma^(k-1) k (d + 2w + k - 1) f  for k = 0,1,2,3
    for k in (0, 1, 2, 3):
        sigkf = f.map(lambda c: sigma**k * c).with_weight(w + k)
        lhs = tb.dot(I, tb.thomas_D(sigkf)).comps[0] - sigma**k * tb.dot(
            I, tb.thomas_D(f)
        ).comps[0]
        rhs = II * sigma ** (k - 1) * k * (d + 2 * w + k - 1) * f.comps[0]
        _check(rep, f"tractor-ids/i-dot-d-sigma-power-{k}", [lhs - rhs])

    # --- two-derivative structure ----------------------------------------
    # [D^M, D^N] f = 0 on conformally flat backgrounds
    if geo.is_conformally_flat():
        DDf2 = tb.thomas_D(Df)
        res = [
            DDf2[(M, N)] - DDf2[(N, M)] for M, N in itertools.product(range(n), repeat=2)
        ]
        _check(rep, "tractor-ids/thomas-d-commute", res)
    else:
        rep.skip("tractor-ids/thomas-d-commute", "background not conformally flat")

    # D^M D_M = 0 (null operator) on scalars and tractor vectors
    nullf = tb.contract_tractor(tb.thomas_D(Df), 0, 1)
    _check(rep, "tractor-ids/null-thomas-d-scalar", nullf.comps)
    DV = tb.thomas_D(V)
    nullV = tb.contract_tractor(tb.thomas_D(DV), 0, 1)
    _check(rep, "tractor-ids/null-thomas-d-vector", nullV.comps)

    # --- projector decomposition ------------------------------------------
    # V = X (Y.V) + Y (X.V) + middle, and the middle projector is idempotent
    Y = tb.Y_tractor(scale)
    XY = tb.dot(X, Y).comps[0]
    _check(rep, "tractor-ids/x-dot-y", [XY - 1])
    _check(rep, "tractor-ids/y-null", [tb.dot(Y, Y).comps[0]])
    _check(rep, "tractor-ids/x-null", [tb.dot(X, X).comps[0]])
    Pi = tb.middle_projector(scale)
    PiMat = sp.Matrix(n, n, lambda M, N: Pi[(M, N)])
    etaM = tb.eta()
    PiMix = PiMat * etaM  # Pi^M_N
    res = [(PiMix * PiMix - PiMix)[i, j] for i, j in itertools.product(range(n), repeat=2)]
    _check(rep, "tractor-ids/middle-projector-idempotent", res)
    _check(rep, "tractor-ids/middle-projector-trace", [sp.trace(PiMix) - d])
    # reassembly of a generic tractor vector from its three projections
    Vp = tb.dot(X, V).comps[0]
    Vm = tb.dot(Y, V).comps[0]
    res = []
    for M in range(n):
        mid = sum(PiMix[M, N] * V[(N,)] for N in range(n))
        res.append(V[(M,)] - (X[(M,)] * Vm + Y[(M,)] * Vp + mid))
    _check(rep, "tractor-ids/slot-projection-reassembly", res)

    # --- parallel scale tractor on Einstein backgrounds --------------------
    DI = tb.covariant_derivative(I)
    if geo.is_einstein() and scale.is_constant():
        _check(rep, "tractor-ids/scale-tractor-parallel", DI.comps)
    else:
        rep.skip(
            "tractor-ids/scale-tractor-parallel",
            "background not Einstein at constant scale",
        )
    return rep
