"""Spin-one system: a weight-w tractor vector with the divergence constraint
solved, its gauge-invariant antisymmetric curvature, and the contraction
with the scale tractor that produces the field equations.

Verified content: the algebraic solution of the constraint, the slotwise
component table of the curvature at constant scale on Einstein backgrounds,
gauge invariance under the weight-lowering transformation on conformally
flat patches, the reduced single-derivative-order field equation with its
mass term, the pure-vector theory at w = -1, the conformally invariant
vector operator at w = 1 - d/2 (which reverts to the gauge theory at d = 4),
and the residual-gauge classification.
"""

from __future__ import annotations

import itertools

import sympy as sp

from ..geometry import GeometryError, _norm
from ..report import CheckRecord, Report, status_of
from ..scalar import decide_zero
from ..tensor import DOWN, UP, TensorField
from ..tractor import TRACTOR, TractorBundle, TractorField
from ..weyl import ScaleField

__all__ = [
    "solve_vector_constraint",
    "maxwell_tractor_curvature",
    "spin1_residual_gauge",
    "spin1_system_report",
]


def _frame_vector_to_curved_up(geo, comps_frame_up):
    """V^mu = e^mu_m V^m for frame-up component list."""
    d = geo.dim
    Einv = geo.inverse_vielbein
    out = TensorField(geo.ctx, (UP,))
    for mu in range(d):
        out[mu] = sum(Einv[m, mu] * comps_frame_up[m] for m in range(d))
    return out


def _curved_up_to_frame_up(geo, t):
    d = geo.dim
    E = geo.vielbein
    return [sum(E[mu, m] * t[mu] for mu in range(d)) for m in range(d)]


def _divergence_up(geo, t):
    """nabla_mu t^mu for an upper-index vector field."""
    d = geo.dim
    coords = geo.ctx.coords
    Gam = geo.christoffel
    out = sp.Integer(0)
    for mu in range(d):
        out += sp.diff(t[mu], coords[mu])
        for lam in range(d):
            if Gam[mu, mu, lam] != 0:
                out += Gam[mu, mu, lam] * t[lam]
    return out


def solve_vector_constraint(geo, w, name="V"):
    """Weight-w tractor vector with generic top/middle slots and the bottom
    slot eliminated by the displayed solution of D.V = 0:

        V^- = -(1/(d+w-1)) [ div V - (Delta - (d+w-1) P) V^+ / (d+2w) ]

    valid away from w = -d/2 and w = 1-d (where the solve has poles)."""
    d = geo.dim
    w = sp.sympify(w)
    if sp.simplify(w + sp.Rational(d, 2)) == 0 or sp.simplify(w - 1 + d) == 0:
        raise GeometryError(
            "the bottom-slot solve has a pole at w = -d/2 and w = 1-d; "
            "those weights need their dedicated treatments"
        )
    tb = TractorBundle(geo)
    coords = geo.ctx.coords
    vp = sp.Function(f"{name}p")(*coords)
    vm = [sp.Function(f"{name}{m}")(*coords) for m in range(d)]
    v_up = _frame_vector_to_curved_up(geo, vm)
    div_v = _divergence_up(geo, v_up)
    P = geo.schouten_trace
    vminus = -(div_v - (geo.laplacian_scalar(vp) - (d + w - 1) * P * vp) / (d + 2 * w)) / (
        d + w - 1
    )
    V = TractorField(tb, [(TRACTOR, UP)], weight=w)
    V[(0,)] = vp
    for m in range(d):
        V[(1 + m,)] = vm[m]
    V[(d + 1,)] = vminus
    return V


def maxwell_tractor_curvature(geo, V):
    """F^{MN} = D^M V^N - D^N V^M."""
    tb = TractorBundle(geo)
    DV = tb.thomas_D(V)
    n = geo.dim + 2
    F = TractorField(tb, [(TRACTOR, UP), (TRACTOR, UP)], weight=V.weight - 1)
    for M, N in itertools.product(range(n), repeat=2):
        F[(M, N)] = DV[(M, N)] - DV[(N, M)]
    return F


def spin1_residual_gauge(d, w):
    """Classify the residual gauge structure at weight w: the variation of
    the top-slot constraint is (d+2w)(w+1) xi."""
    d = sp.sympify(d)
    w = sp.sympify(w)
    coeff = sp.expand((d + 2 * w) * (w + 1))
    if sp.simplify(w + d / 2) == 0:
        return {"coefficient": coeff, "kind": "degenerate",
                "note": "the weight-lowering operator annihilates the parameter"}
    if w == -1:
        return {"coefficient": coeff, "kind": "residual-gauge",
                "note": "genuine residual invariance; the mass vanishes"}
    return {"coefficient": coeff, "kind": "none"}


def spin1_system_report(geo, scale: ScaleField, weight=None, report=None):
    d = geo.dim
    n = d + 2
    tb = TractorBundle(geo)
    w = sp.Symbol("w") if weight is None else sp.sympify(weight)
    rep = report if report is not None else Report(f"spin1[{geo.name}]")
    coords = geo.ctx.coords
    P = geo.schouten_trace
    sigma = scale.sigma

    einstein_const = bool(geo.is_einstein()) and scale.is_constant()
    conf_flat = geo.is_conformally_flat()

    # constraint solution: D.V = 0 exactly for the displayed bottom slot
    V = solve_vector_constraint(geo, w)
    DV = tb.thomas_D(V)
    DdotV = tb.contract_tractor(DV, 0, 1)
    dec = [decide_zero(sp.expand(c)) for c in DdotV.comps]
    rep.add(CheckRecord("spin1/constraint-solution", status_of(dec), residuals=dec))

    # gauge invariance of the curvature: delta V = D xi gives delta F = 0
    # (curvature built on the pure gauge field directly)
    if conf_flat:
        xi = TractorField(tb, [], weight=w + 1, comps=[sp.Function("xi")(*coords)])
        dV = tb.thomas_D(xi)
        dF = maxwell_tractor_curvature(geo, dV)
        dec = [decide_zero(sp.expand(c)) for c in dF.comps]
        rep.add(CheckRecord("spin1/gauge-invariance", status_of(dec), residuals=dec))
    else:
        rep.skip("spin1/gauge-invariance", "needs a conformally flat background")

    if not einstein_const:
        rep.skip("spin1/curvature-components", "needs Einstein at constant scale")
        rep.skip("spin1/reduced-field-equation", "needs Einstein at constant scale")
        rep.skip("spin1/action-side-bottom-slot", "needs Einstein at constant scale")
        rep.skip("spin1/pure-vector-theory", "needs Einstein at constant scale")
        rep.skip("spin1/conformal-weight-operator", "needs Einstein at constant scale")
        return rep

    # component table of F^{MN} at the constraint, constant scale
    F = maxwell_tractor_curvature(geo, V)
    vp = V[(0,)]
    vtilde_frame = [
        sp.expand(V[(1 + m,)] - _frame_grad(geo, vp)[m] / (w + 1)) for m in range(d)
    ]
    vt_up = _frame_vector_to_curved_up(geo, vtilde_frame)
    div_vt = _divergence_up(geo, vt_up)
    fmn = _frame_maxwell(geo, vt_up)  # F^{mn} frame-up antisymmetric
    res = []
    # F^{+n} = (d+2w-2)(w+1) Vt^n ; F^{+-} = -(d+2w-2)(w+1)/(d+w-1) div Vt
    for m in range(d):
        res.append(F[(0, 1 + m)] - (d + 2 * w - 2) * (w + 1) * vtilde_frame[m])
    res.append(F[(0, n - 1)] + (d + 2 * w - 2) * (w + 1) / (d + w - 1) * div_vt)
    # F^{mn} = (d+2w-2) F(Vt)^{mn}
    for m, k in itertools.product(range(d), repeat=2):
        res.append(F[(1 + m, 1 + k)] - (d + 2 * w - 2) * fmn[m][k])
    # F^{m-} = nabla_r F^{rm} - (w+1)[2 P^m_r Vt^r - P Vt^m + grad^m div Vt/(d+w-1)]
    divF = _divergence_of_frame_curvature(geo, fmn)
    graddiv = _frame_grad(geo, div_vt)
    # on Einstein backgrounds P^m_r = (P/d) delta^m_r
    for m in range(d):
        target = divF[m] - (w + 1) * (
            2 * (P / d) * vtilde_frame[m] - P * vtilde_frame[m]
            + graddiv[m] / (d + w - 1)
        )
        res.append(F[(1 + m, n - 1)] - target)
    dec = [decide_zero(sp.expand(r)) for r in res]
    rep.add(CheckRecord("spin1/curvature-components", status_of(dec), residuals=dec))

    # field equations: G^N = I_M F^{MN}; reduced equation and its mass term
    I = tb.scale_tractor(scale)
    G = tb.dot(I, F)  # free slot N
    Gp = G[(0,)]
    # bottom-slot relation of the action-side pair
    target_Gp = sigma * (d + 2 * w - 2) * (w + 1) / (d + w - 1) * div_vt
    res = [Gp - target_Gp]
    dec = [decide_zero(sp.expand(r)) for r in res]
    rep.add(CheckRecord("spin1/top-equation", status_of(dec), residuals=dec))

    gradGp = _frame_grad(geo, Gp)
    res = []
    for m in range(d):
        curlyG = G[(1 + m,)] - gradGp[m] / (d + 2 * w - 2)
        target = -sigma * (
            divF[m] + 2 * P / d * (w + 1) * (d + w - 2) * vtilde_frame[m]
        )
        res.append(curlyG - target)
    dec = [decide_zero(sp.expand(r)) for r in res]
    rep.add(CheckRecord("spin1/reduced-field-equation", status_of(dec), residuals=dec))

    # I.G = 0 (the scale tractor is null on its own curvature contraction)
    IG = tb.dot(I, G)
    dec = [decide_zero(sp.expand(IG.comps[0]))]
    rep.add(CheckRecord("spin1/i-dot-g", status_of(dec), residuals=dec))

    # w = -1 with the top slot constrained away: G^n = -sigma nabla_m F^{mn}
    Vm1 = solve_vector_constraint(geo, -1)
    Vm1[(0,)] = sp.Integer(0)
    # re-solve the bottom slot at w = -1 with V^+ = 0
    vm = [Vm1[(1 + m,)] for m in range(d)]
    v_up = _frame_vector_to_curved_up(geo, vm)
    Vm1[(d + 1,)] = -_divergence_up(geo, v_up) / (d - 2)
    Fm1 = maxwell_tractor_curvature(geo, Vm1)
    Gm1 = tb.dot(I, Fm1)
    fmn1 = _frame_maxwell(geo, v_up)
    divF1 = _divergence_of_frame_curvature(geo, fmn1)
    res = [Gm1[(1 + m,)] + sigma * divF1[m] for m in range(d)]
    dec = [decide_zero(sp.expand(r)) for r in res]
    rep.add(CheckRecord("spin1/pure-vector-theory", status_of(dec), residuals=dec))

    # w = 1 - d/2: every slot of F vanishes except F^{m-}, which carries the
    # conformally invariant vector operator; at d = 4 it is the w = -1 theory
    w0 = sp.Rational(2 - d, 2)
    if sp.simplify(w0 + sp.Rational(d, 2)) != 0 and sp.simplify(w0 - 1 + d) != 0:
        V0 = solve_vector_constraint(geo, w0)
        F0 = maxwell_tractor_curvature(geo, V0)
        res = []
        for M, N in itertools.product(range(n), repeat=2):
            middle_bottom = (1 <= M <= d and N == n - 1) or (1 <= N <= d and M == n - 1)
            if not middle_bottom:
                res.append(F0[(M, N)])
        dec = [decide_zero(sp.expand(r)) for r in res]
        rep.add(
            CheckRecord("spin1/conformal-weight-vanishing-slots", status_of(dec), residuals=dec)
        )
        if d == 4:
            # the conformal weight coincides with w = -1: the surviving slot
            # reverts to the gauge theory of a single vector.  Gauge the top
            # slot away and compare against nabla_r F^{rm} directly.
            V0[(0,)] = sp.Integer(0)
            vmc = [V0[(1 + m,)] for m in range(d)]
            v0_up = _frame_vector_to_curved_up(geo, vmc)
            V0[(d + 1,)] = -_divergence_up(geo, v0_up) / (d + w0 - 1)
            F0g = maxwell_tractor_curvature(geo, V0)
            fmn0 = _frame_maxwell(geo, v0_up)
            divF0 = _divergence_of_frame_curvature(geo, fmn0)
            res = [F0g[(1 + m, n - 1)] - divF0[m] for m in range(d)]
            dec = [decide_zero(sp.expand(r)) for r in res]
            rep.add(
                CheckRecord(
                    "spin1/conformal-weight-operator",
                    status_of(dec),
                    detail="reverts to the single-vector gauge theory at d = 4",
                    residuals=dec,
                )
            )
        else:
            # F^{m-} carries the conformally invariant vector operator
            vp0 = V0[(0,)]
            vt0 = [
                sp.expand(V0[(1 + m,)] - _frame_grad(geo, vp0)[m] / (w0 + 1))
                for m in range(d)
            ]
            vt0_up = _frame_vector_to_curved_up(geo, vt0)
            fmn0 = _frame_maxwell(geo, vt0_up)
            divF0 = _divergence_of_frame_curvature(geo, fmn0)
            div_vt0 = _divergence_up(geo, vt0_up)
            gd0 = _frame_grad(geo, div_vt0)
            res = []
            for m in range(d):
                target = divF0[m] - (2 - sp.Rational(d, 2)) * (
                    2 * (P / d) * vt0[m] - P * vt0[m] + sp.Rational(2, d) * gd0[m]
                )
                res.append(F0[(1 + m, n - 1)] - target)
            dec = [decide_zero(sp.expand(r)) for r in res]
            rep.add(
                CheckRecord("spin1/conformal-weight-operator", status_of(dec), residuals=dec)
            )
    else:
        rep.skip("spin1/conformal-weight-vanishing-slots", "conformal weight hits a solve pole")
        rep.skip("spin1/conformal-weight-operator", "conformal weight hits a solve pole")
    return rep


def _frame_grad(geo, f):
    """nabla^m f with a frame-up index."""
    d = geo.dim
    coords = geo.ctx.coords
    ginv = geo.inverse
    E = geo.vielbein
    grad_up = [
        sum(ginv[mu, nu] * sp.diff(f, coords[nu]) for nu in range(d)) for mu in range(d)
    ]
    return [sum(E[mu, m] * grad_up[mu] for mu in range(d)) for m in range(d)]


def _frame_maxwell(geo, v_up):
    """F^{mn} (frame up, antisymmetric) of the curved upper vector v."""
    d = geo.dim
    coords = geo.ctx.coords
    g = geo.metric
    ginv = geo.inverse
    E = geo.vielbein
    Gam = geo.christoffel
    # F_{mu nu} = nabla_mu v_nu - nabla_nu v_mu on the lowered vector
    v_low = [sum(g[mu, nu] * v_up[nu] for nu in range(d)) for mu in range(d)]
    Flow = [[sp.Integer(0)] * d for _ in range(d)]
    for mu, nu in itertools.product(range(d), repeat=2):
        Flow[mu][nu] = sp.diff(v_low[nu], coords[mu]) - sp.diff(v_low[mu], coords[nu])
    out = [[sp.Integer(0)] * d for _ in range(d)]
    for m, k in itertools.product(range(d), repeat=2):
        total = sp.Integer(0)
        for mu, nu, a, b2 in itertools.product(range(d), repeat=4):
            if Flow[a][b2] == 0:
                continue
            total += E[mu, m] * E[nu, k] * ginv[mu, a] * ginv[nu, b2] * Flow[a][b2]
        out[m][k] = sp.expand(total)
    return out


def _divergence_of_frame_curvature(geo, fmn):
    """nabla_r F^{rm} returned with a frame-up index m."""
    d = geo.dim
    coords = geo.ctx.coords
    Einv = geo.inverse_vielbein
    E = geo.vielbein
    Gam = geo.christoffel
    # convert to curved-up antisymmetric F^{mu nu}
    Fc = [[sp.Integer(0)] * d for _ in range(d)]
    for mu, nu in itertools.product(range(d), repeat=2):
        Fc[mu][nu] = sum(
            Einv[m, mu] * Einv[k, nu] * fmn[m][k]
            for m, k in itertools.product(range(d), repeat=2)
        )
    div = [sp.Integer(0)] * d
    for nu in range(d):
        total = sp.Integer(0)
        for mu in range(d):
            total += sp.diff(Fc[mu][nu], coords[mu])
            for lam in range(d):
                if Gam[mu, mu, lam] != 0:
                    total += Gam[mu, mu, lam] * Fc[lam][nu]
                if Gam[nu, mu, lam] != 0:
                    total += Gam[nu, mu, lam] * Fc[mu][lam]
        div[nu] = total
    return [sum(E[nu, m] * div[nu] for nu in range(d)) for m in range(d)]
