"""Spinor-valued identity ledger: curvature commutators, Weitzenbock
formulas, the component tables for the spinor connection / Laplacian /
weight-lowering operator, and the slashed operator identities.

Everything runs on generic spinor fields (undefined-function components)
with symbolic weight where the statement permits; identities that reference
the scale projectors need a non-null scale tractor and are skipped on
Ricci-flat scales.
"""

from __future__ import annotations

import itertools

import sympy as sp

from .clifford import SQRT2
from .geometry import GeometryError
from .report import CheckRecord, Report, status_of
from .scalar import decide_zero
from .spinor import SpinorBundle, SpinorField
from .tensor import DOWN, UP
from .tractor import CURVED, TRACTOR
from .weyl import ScaleField

__all__ = ["spinor_identity_suite"]


def _check(report, name, residuals, detail="", whitelisted=False):
    decs = [decide_zero(sp.expand(r)) for r in residuals]
    report.add(
        CheckRecord(
            name, status_of(decs), detail=detail, residuals=decs, whitelisted=whitelisted
        )
    )


def _mat_res(A):
    return [A[i, j] for i, j in itertools.product(range(A.rows), range(A.cols))]


def _nabla_col(sb, col, mu):
    coords = sb.ctx.coords
    return sp.Matrix([sp.diff(e, coords[mu]) for e in col]) + sb.nabla_spinor_matrix(
        mu
    ) * sp.Matrix(col)


def _nabla_slash(sb, col):
    s = sb.rep.dim_spinor
    ginv = sb.geo.inverse
    acc = sp.zeros(s, 1)
    for mu in range(sb.d):
        gmu = sp.zeros(s, s)
        for nu in range(sb.d):
            if ginv[mu, nu] != 0:
                gmu += ginv[mu, nu] * sb.gamma_curved(nu)
        acc += gmu * _nabla_col(sb, list(col), mu)
    return acc


def _bochner(sb, col):
    s = sb.rep.dim_spinor
    Gam = sb.geo.christoffel
    ginv = sb.geo.inverse
    acc = sp.zeros(s, 1)
    for mu, nu in itertools.product(range(sb.d), repeat=2):
        if ginv[mu, nu] == 0:
            continue
        second = _nabla_col(sb, list(_nabla_col(sb, list(col), nu)), mu)
        for lam in range(sb.d):
            if Gam[lam, mu, nu] != 0:
                second -= Gam[lam, mu, nu] * _nabla_col(sb, list(col), lam)
        acc += ginv[mu, nu] * second
    return acc


def _gamma_pair_curved(sb, mu, nu):
    """gamma_{mu nu} = (1/2)[gamma_mu, gamma_nu] with curved indices."""
    gm, gn = sb.gamma_curved(mu), sb.gamma_curved(nu)
    return (gm * gn - gn * gm) / 2


def spinor_identity_suite(geo, scale: ScaleField, weight=None, report=None):
    sb = SpinorBundle(geo)
    tb = sb.tb
    d, n, s = sb.d, sb.n, sb.rep.dim_spinor
    w = sp.Symbol("w") if weight is None else sp.sympify(weight)
    rep = report if report is not None else Report(f"spinor-ids[{geo.name}]")
    coords = geo.ctx.coords
    sigma = scale.sigma
    P = geo.schouten_trace

    Psi = SpinorField.generic(sb, [], "s", w)
    psi_col = sp.Matrix([sp.Function(f"q_{k}")(*coords) for k in range(s)])

    # --- curvature commutators and Weitzenbock -----------------------------
    if geo.is_constant_curvature():
        res = []
        for mu, nu in itertools.combinations(range(d), 2):
            lhs = _nabla_col(sb, list(_nabla_col(sb, list(psi_col), nu)), mu) - _nabla_col(
                sb, list(_nabla_col(sb, list(psi_col), mu)), nu
            )
            rhs = (P / d) * _gamma_pair_curved(sb, mu, nu) * psi_col
            res.extend(list(lhs - rhs))
        _check(rep, "spinor-ids/curvature-commutator-spinor", res)

        # vector-spinor version with the metric term
        vs = {
            rho: sp.Matrix([sp.Function(f"v{rho}_{k}")(*coords) for k in range(s)])
            for rho in range(d)
        }

        def nabla_vs(field, mu):
            out = {}
            Gam = geo.christoffel
            for rho in range(d):
                col = _nabla_col(sb, list(field[rho]), mu)
                for lam in range(d):
                    if Gam[lam, mu, rho] != 0:
                        col = col - Gam[lam, mu, rho] * field[lam]
                out[rho] = col
            return out

        res = []
        g = geo.metric
        for mu, nu in itertools.combinations(range(d), 2):
            first = nabla_vs(nabla_vs(vs, nu), mu)
            second = nabla_vs(nabla_vs(vs, mu), nu)
            for rho in range(d):
                lhs = first[rho] - second[rho]
                rhs = (P / d) * _gamma_pair_curved(sb, mu, nu) * vs[rho] + (
                    4 * P / d
                ) * (g[rho, mu] * vs[nu] - g[rho, nu] * vs[mu]) / 2
                res.extend(list(lhs - rhs))
        _check(rep, "spinor-ids/curvature-commutator-vector-spinor", res)

        lhs = _nabla_slash(sb, list(_nabla_slash(sb, list(psi_col))))
        rhs = _bochner(sb, list(psi_col)) - (P / 2) * (d - 1) * psi_col
        _check(rep, "spinor-ids/weitzenbock-spinor", list(lhs - rhs))
    else:
        rep.skip(
            "spinor-ids/curvature-commutator-spinor", "needs constant curvature"
        )
        rep.skip(
            "spinor-ids/curvature-commutator-vector-spinor",
            "needs constant curvature",
        )
        rep.skip("spinor-ids/weitzenbock-spinor", "needs constant curvature")

    # --- connection / Laplacian / weight-lowering component tables ---------
    psi = Psi.top_half()
    chi = Psi.bottom_half()
    DPsi = sb.covariant_derivative(Psi)
    res = []
    for mu in range(d):
        top = (
            _nabla_col(sb, list(psi), mu) + sb.gamma_curved(mu) * sp.Matrix(chi) / SQRT2
        )
        bot = (
            _nabla_col(sb, list(chi), mu) - sb.schouten_slash(mu) * sp.Matrix(psi) / SQRT2
        )
        expect = sp.Matrix(list(top) + list(bot))
        res.extend(list(DPsi[(mu,)] - expect))
    _check(rep, "spinor-ids/connection-components", res)

    lap = sb.laplacian(Psi)
    # P-slash_mu nabla^mu psi term assembled directly
    ginv = geo.inverse
    psl_nabla = sp.zeros(s, 1)
    for mu, nu in itertools.product(range(d), repeat=2):
        if ginv[mu, nu] != 0:
            psl_nabla += ginv[mu, nu] * sb.schouten_slash(mu) * _nabla_col(
                sb, list(psi), nu
            )
    # (nabla-slash P) psi: gradient of the curvature scalar, gamma-contracted
    gradP = [
        sum(geo.inverse_vielbein[m, mu] * sp.diff(P, coords[mu]) for mu in range(d))
        for m in range(d)
    ]
    slashed_gradP = sb.rep.gamma_slash(gradP)
    te = _bochner(sb, list(psi)) - P / 2 * sp.Matrix(psi) + SQRT2 * _nabla_slash(
        sb, list(chi)
    )
    be = (
        _bochner(sb, list(chi))
        - P / 2 * sp.Matrix(chi)
        - SQRT2 * psl_nabla
        - slashed_gradP * sp.Matrix(psi) / SQRT2
    )
    expect = sp.Matrix(list(te) + list(be))
    _check(rep, "spinor-ids/laplacian-components", list(lap[()] - expect))

    DT = sb.thomas_D(Psi)
    res = list(DT[(0,)] - w * (d + 2 * w - 2) * Psi[()])
    res.extend(list(DT[(n - 1,)] + lap[()] + w * P * Psi[()]))
    _check(rep, "spinor-ids/weight-lowering-slots", res)

    # Gamma.D table (the Dirac-type second-order pair)
    GD = sb.gamma_dot_thomas(Psi)
    top_expect = (d + 2 * w - 2) * (
        _nabla_slash(sb, list(psi)) + (d + 2 * w) * sp.Matrix(chi) / SQRT2
    )
    bot_expect = -(d + 2 * w) * _nabla_slash(sb, list(chi)) - SQRT2 * (
        _bochner(sb, list(psi)) - (P / 2) * (d - 1) * sp.Matrix(psi)
    )
    expect = sp.Matrix(list(top_expect) + list(bot_expect))
    _check(rep, "spinor-ids/gamma-dot-d-components", list(GD[()] - expect))

    # Gamma.D Gamma.X Psi = (d+2w+2)((d+2w) psi, -sqrt2 nabla-slash psi)
    GX = sb.x_slash()
    GXPsi = Psi.matmul(GX).with_weight(w + 1)
    GDGX = sb.gamma_dot_thomas(GXPsi)
    expect = sp.Matrix(
        list((d + 2 * w + 2) * (d + 2 * w) * sp.Matrix(psi))
        + list(-(d + 2 * w + 2) * SQRT2 * _nabla_slash(sb, list(psi)))
    )
    _check(rep, "spinor-ids/gamma-d-gamma-x", list(GDGX[()] - expect))

    # --- slashed operator identities ---------------------------------------
    def pair_then(gamma_first, contract_with_I, S):
        """Gamma^M K^N D_{MN} S for K in {I, Gamma}: apply the pair operator,
        contract slot 1 (N) with I or gamma-contract it, then gamma-contract
        slot 0 (M)."""
        DD = sb.double_D(S)
        if contract_with_I:
            I = tb.scale_tractor(scale)
            Ilow = tb.lower_tractor(I, 0)
            mid = SpinorField(sb, [(TRACTOR, UP)], weight=DD.weight)
            for M in range(n):
                col = sp.zeros(2 * s, 1)
                for N in range(n):
                    if Ilow[(N,)] != 0:
                        col = col + Ilow[(N,)] * DD[(M, N)]
                mid[(M,)] = col
            return sb.gamma_contract(mid, 0)
        # Gamma^M Gamma^N D_MN: gamma-contract slot 1 then slot 0
        inner = sb.gamma_contract(DD, 1)
        return sb.gamma_contract(inner, 0)

    I = tb.scale_tractor(scale)
    II = sp.cancel(tb.dot(I, I).comps[0])
    GI = sb.i_slash(scale)

    GIDD = pair_then(True, True, Psi)  # Gamma^M I^N D_MN Psi
    GGDD = pair_then(True, False, Psi)  # Gamma^M Gamma^N D_MN Psi
    GDPsi = sb.gamma_dot_thomas(Psi)
    IDPsi = SpinorField(sb, [], weight=w - 1)
    DPsi_T = sb.thomas_D(Psi)
    Ilow = tb.lower_tractor(I, 0)
    col = sp.zeros(2 * s, 1)
    for M in range(n):
        if Ilow[(M,)] != 0:
            col = col + Ilow[(M,)] * DPsi_T[(M,)]
    IDPsi[()] = col

    # [Gamma.D, sigma] = 2 Gamma^M I^N D_MN + (d+2w) Gamma.I
    sigPsi = Psi.scale_by(sigma, dweight=1)
    lhs = sb.gamma_dot_thomas(sigPsi)[()] - sigma * GDPsi[()]
    rhs = 2 * GIDD[()] + (d + 2 * w) * GI * Psi[()]
    _check(rep, "spinor-ids/slashed-d-sigma-commutator", list(lhs - rhs))

    # [Gamma.X, I.D] = 2 Gamma^M I^N D_MN - (d+2w) Gamma.I
    IDGX = SpinorField(sb, [], weight=w)
    DT_GX = sb.thomas_D(GXPsi)
    col = sp.zeros(2 * s, 1)
    for M in range(n):
        if Ilow[(M,)] != 0:
            col = col + Ilow[(M,)] * DT_GX[(M,)]
    IDGX[()] = col
    lhs = sp.Matrix(GX * IDPsi[()]) - IDGX[()]
    rhs = 2 * GIDD[()] - (d + 2 * w) * GI * Psi[()]
    _check(rep, "spinor-ids/x-slash-i-d-commutator", list(lhs - rhs))

    # [Gamma.X, Gamma.D]: displayed as 2 Gamma^M Gamma^N D_MN - (d+2w)(d+2),
    # which is the w = 0 specialization; the general statement carries an
    # extra -2w(d+2w+2) (verified at d = 3 and 4), so the displayed form is
    # whitelisted and the derived one must pass.
    GD_GXPsi = sb.gamma_dot_thomas(GXPsi)
    lhs = sp.Matrix(GX * GDPsi[()]) - GD_GXPsi[()]
    rhs = 2 * GGDD[()] - (d + 2 * w) * (d + 2) * Psi[()]
    _check(
        rep,
        "spinor-ids/x-slash-d-slash-commutator-displayed",
        list(lhs - rhs),
        detail="see discrepancy registry",
        whitelisted=True,
    )
    # derived closed component form, assembled from the two verified tables
    top_d = -(d + 2 * w + 2) * (d + 2 * w) * sp.Matrix(psi)
    bot_d = 2 * SQRT2 * (d + 2 * w) * _nabla_slash(sb, list(psi)) + (
        d + 2 * w - 2
    ) * (d + 2 * w) * sp.Matrix(chi)
    derived = sp.Matrix(list(top_d) + list(bot_d))
    _check(rep, "spinor-ids/x-slash-d-slash-commutator-derived", list(lhs - derived))

    # {Gamma.X, Gamma.D} = [Gamma.X, Gamma.D] + 2 D.X
    XPsi_field = SpinorField(sb, [(TRACTOR, UP)], weight=w + 1)
    X = tb.canonical_X()
    for M in range(n):
        XPsi_field[(M,)] = X[(M,)] * Psi[()]
    D_XPsi = sb.thomas_D(XPsi_field)  # slots (M new, R from X)
    DdotX = SpinorField(sb, [], weight=w)
    eta = tb.eta()
    col = sp.zeros(2 * s, 1)
    for M, R in itertools.product(range(n), repeat=2):
        if eta[M, R] != 0:
            col = col + eta[M, R] * D_XPsi[(M, R)]
    DdotX[()] = col
    anti = sp.Matrix(GX * GDPsi[()]) + GD_GXPsi[()]
    comm = sp.Matrix(GX * GDPsi[()]) - GD_GXPsi[()]
    _check(
        rep,
        "spinor-ids/x-slash-d-slash-anticommutator-displayed",
        list(anti - (comm + 2 * DdotX[()])),
        detail="see discrepancy registry",
        whitelisted=True,
    )
    top_d = (d + 2 * w + 2) * (d + 2 * w) * sp.Matrix(psi)
    bot_d = -4 * SQRT2 * _nabla_slash(sb, list(psi)) + (d + 2 * w) * (
        d + 2 * w - 2
    ) * sp.Matrix(chi)
    derived = sp.Matrix(list(top_d) + list(bot_d))
    _check(
        rep,
        "spinor-ids/x-slash-d-slash-anticommutator-derived",
        list(anti - derived),
    )

    # [Gamma.X, D_M] = 2 Gamma^N D_NM - (d+2w) Gamma_M
    DD = sb.double_D(Psi)
    Gammas_low = []
    for M in range(n):
        GM = sp.zeros(2 * s, 2 * s)
        for N in range(n):
            if eta[M, N] != 0:
                GM += eta[M, N] * sb.rep.Gammas[N]
        Gammas_low.append(GM)
    DletPsi = sb.thomas_D(Psi)
    DletPsi_low = SpinorField(sb, [(TRACTOR, DOWN)], weight=w - 1)
    DT_GXPsi_low = SpinorField(sb, [(TRACTOR, DOWN)], weight=w)
    for M in range(n):
        colA = sp.zeros(2 * s, 1)
        colB = sp.zeros(2 * s, 1)
        for N in range(n):
            if eta[M, N] != 0:
                colA = colA + eta[M, N] * DletPsi[(N,)]
                colB = colB + eta[M, N] * DT_GX[(N,)]
        DletPsi_low[(M,)] = colA
        DT_GXPsi_low[(M,)] = colB
    # D_{NM} (both lowered), then 2 Gamma^N D_NM - (d+2w) Gamma_M
    DD_low = {}
    for A, B in itertools.product(range(n), repeat=2):
        colD = sp.zeros(2 * s, 1)
        for M2, N2 in itertools.product(range(n), repeat=2):
            if eta[A, M2] != 0 and eta[B, N2] != 0:
                colD = colD + eta[A, M2] * eta[B, N2] * DD[(M2, N2)]
        DD_low[(A, B)] = colD
    res = []
    for M in range(n):
        lhs = sp.Matrix(GX * DletPsi_low[(M,)]) - DT_GXPsi_low[(M,)]
        rhs = sp.zeros(2 * s, 1)
        for N in range(n):
            rhs = rhs + sb.rep.Gammas[N] * DD_low[(N, M)] * 2
        rhs = rhs - (d + 2 * w) * Gammas_low[M] * Psi[()]
        res.extend(list(lhs - rhs))
    _check(rep, "spinor-ids/x-slash-d-m-commutator", res)

    # [Gamma.X, Gamma_{RS}] = 4 X_[R Gamma_S]  (matrix identity)
    Xlow = tb.lower_tractor(X, 0)
    res = []
    for R, S_ in itertools.product(range(n), repeat=2):
        GRS = sp.zeros(2 * s, 2 * s)
        for A, B in itertools.product(range(n), repeat=2):
            if eta[R, A] != 0 and eta[S_, B] != 0:
                GRS += eta[R, A] * eta[S_, B] * sb.rep.ambient_pair(A, B)
        lhs = GX * GRS - GRS * GX
        rhs = 2 * (Xlow[(R,)] * Gammas_low[S_] - Xlow[(S_,)] * Gammas_low[R])
        res.extend(_mat_res(lhs - rhs))
    _check(rep, "spinor-ids/x-slash-pair-gamma-commutator", res)

    # Gamma^M Gamma^N D_MN = 2(w - Gamma.X Gamma.D / (d+2w-2))
    lhs = GGDD[()]
    rhs = 2 * (w * Psi[()] - sp.Matrix(GX * GDPsi[()]) / (d + 2 * w - 2))
    _check(rep, "spinor-ids/double-gamma-pair-op", list(lhs - rhs))

    # Gamma^M I^N D_MN = (sigma Gamma.D - Gamma.X I.D) / (d+2w-2)
    lhs = GIDD[()]
    rhs = (sigma * GDPsi[()] - sp.Matrix(GX * IDPsi[()])) / (d + 2 * w - 2)
    _check(rep, "spinor-ids/gamma-i-pair-op", list(lhs - rhs))

    # Gamma^M I^N D_MN Gamma.D = -(1/(d+2w-4)) Gamma.X I.D Gamma.D
    GD_as_field = GDPsi.with_weight(w - 1)
    lhs = pair_then(True, True, GD_as_field)[()]
    ID_GD = SpinorField(sb, [], weight=w - 2)
    DT_GD = sb.thomas_D(GD_as_field)
    col = sp.zeros(2 * s, 1)
    for M in range(n):
        if Ilow[(M,)] != 0:
            col = col + Ilow[(M,)] * DT_GD[(M,)]
    ID_GD[()] = col
    rhs = -sp.Matrix(GX * ID_GD[()]) / (d + 2 * w - 4)
    _check(rep, "spinor-ids/gamma-i-pair-op-then-d-slash", list(lhs - rhs))

    # Gamma^M I^N D_MN Gamma.X: displayed (1/d)(sigma(d+2) - Gamma.X Gamma.I);
    # fails on generic weight-w spinors, whitelisted; the derived exchange
    # rule through the previous identities is checked instead.
    lhs = pair_then(True, True, GXPsi)[()]
    rhs_displayed = (sigma * (d + 2) * Psi[()] - sp.Matrix(GX * GI * Psi[()])) / d
    _check(
        rep,
        "spinor-ids/pair-op-x-slash-displayed",
        list(lhs - rhs_displayed),
        detail="displayed specialization; see discrepancy registry",
        whitelisted=True,
    )
    # derived: use gamma-i-pair-op on the shifted-weight field Gamma.X Psi
    GD_GX = sb.gamma_dot_thomas(GXPsi)
    ID_GX = IDGX
    rhs_derived = (sigma * GD_GX[()] - sp.Matrix(GX * ID_GX[()])) / (d + 2 * w)
    _check(rep, "spinor-ids/pair-op-x-slash-derived", list(lhs - rhs_derived))

    # Gamma.X Gamma.D = (d+2w)(d+2w-2) - ((d+2w-2)/(d+2w+2)) Gamma.D Gamma.X
    lhs = sp.Matrix(GX * GDPsi[()])
    rhs = (d + 2 * w) * (d + 2 * w - 2) * Psi[()] - sp.Rational(1, 1) * (
        d + 2 * w - 2
    ) / (d + 2 * w + 2) * GD_GXPsi[()]
    _check(rep, "spinor-ids/x-slash-d-slash-exchange", list(lhs - rhs))

    # --- scale projectors ---------------------------------------------------
    if II == 0:
        for cid in (
            "projector-algebra",
            "projector-pair-op-exchange-displayed",
            "projector-pair-op-exchange-derived",
            "x-slash-projector-displayed",
            "x-slash-projector-derived",
        ):
            rep.skip(f"spinor-ids/{cid}", "scale tractor is null")
        return rep
    Pp, Pm = sb.scale_projectors(scale)
    one = sp.eye(2 * s)
    res = (
        _mat_res(Pp + Pm - one)
        + _mat_res(sp.expand(Pp * Pp - Pp))
        + _mat_res(sp.expand(Pm * Pm - Pm))
        + _mat_res(sp.expand(Pp * Pm))
    )
    _check(rep, "spinor-ids/projector-algebra", res)

    # Gamma^M I^N D_MN Pi_pm: displayed with -Pi_mp on the right-hand side;
    # the operator anticommutes with Gamma.I (verified directly), which gives
    # +Pi_mp instead.  Displayed form whitelisted, derived form must pass.
    res_disp, res_derived = [], []
    for Pi_a, Pi_b in ((Pp, Pm), (Pm, Pp)):
        proj = Psi.matmul(Pi_a)
        lhs = pair_then(True, True, proj)[()]
        res_disp.extend(list(lhs + Pi_b * GIDD[()]))
        res_derived.extend(list(lhs - Pi_b * GIDD[()]))
    _check(
        rep,
        "spinor-ids/projector-pair-op-exchange-displayed",
        res_disp,
        detail="sign as displayed; see discrepancy registry",
        whitelisted=True,
    )
    _check(rep, "spinor-ids/projector-pair-op-exchange-derived", res_derived)

    # X-slash projector exchange: displayed vs derived
    root = sp.sqrt(II)
    res = []
    for sign, Pi_a, Pi_b in ((1, Pp, Pm), (-1, Pm, Pp)):
        lhs = GX * Pi_a
        rhs = 2 * sigma * one - Pi_b * GX
        res.extend(_mat_res(sp.expand(lhs - rhs)))
    _check(
        rep,
        "spinor-ids/x-slash-projector-displayed",
        res,
        detail="displayed form; see discrepancy registry",
        whitelisted=True,
    )
    res = []
    for sign, Pi_a, Pi_b in ((1, Pp, Pm), (-1, Pm, Pp)):
        lhs = GX * Pi_a
        rhs = Pi_b * GX + sign * sigma / root * one
        res.extend(_mat_res(sp.expand(lhs - rhs)))
    _check(rep, "spinor-ids/x-slash-projector-derived", res)
    return rep
