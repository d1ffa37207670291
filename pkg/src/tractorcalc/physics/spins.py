"""Arbitrary-spin on-shell system.

Formula level (any s, symbolic d): the wave-eigenvalue mass, its stability
bound, the residual-gauge weight list {s-2, ..., 0, -1}, the depth masses,
and the exact cross-convention identities.  Component level (s = 2 on the
chosen background): with the top slots gauged away and the trace removed,
the rank-s tractor equations reduce to the divergence constraint and the
wave equation with eigenvalue (2P/d)[w(w+d-1)-s]; the reduction is verified
exactly, with the divergence terms matched by a fitted first-order ansatz.
"""

from __future__ import annotations

import itertools

import sympy as sp

from ..report import CheckRecord, Report, status_of
from ..scalar import decide_zero
from ..tensor import DOWN, UP, SymmetricTensorAlgebra, TensorField
from ..tractor import TRACTOR, TractorBundle, TractorField
from ..weyl import ScaleField
from .masses import (
    bf_bound,
    depth_mass,
    depth_mass_displayed,
    mass_from_weight,
    residual_gauge_weights,
)

__all__ = ["spin_s_formula_report", "spin_s_onshell_report", "conjectured_eom_report"]


def spin_s_formula_report(report=None, max_spin=4):
    """Exact rational identities among the mass conventions."""
    rep = report if report is not None else Report("spin-s formulas")
    d, w, P = sp.symbols("d w P")
    for s in range(max_spin + 1):
        mu2 = mass_from_weight(s, d, w, P, convention="laplacian")
        # s = 0 consistency: the laplacian convention at s = 0 matches the
        # standard scalar mass
        if s == 0:
            m2 = mass_from_weight(0, d, w, P, convention="standard")
            dec = [decide_zero(sp.expand(mu2 - m2))]
            rep.add(CheckRecord("spin-s/scalar-reduction", status_of(dec), residuals=dec))
        # depth-t masses agree with the laplacian convention at w = s-t-1;
        # the tabulated closed form disagrees and is carried as a whitelisted
        # discrepancy (see registry)
        for t in range(1, s + 1):
            target = depth_mass(s, t, d, P)
            got = mu2.subs(w, s - t - 1)
            dec = [decide_zero(sp.expand(got - target))]
            rep.add(
                CheckRecord(
                    f"spin-s/depth-mass-s{s}-t{t}", status_of(dec), residuals=dec
                )
            )
            disp = depth_mass_displayed(s, t, d, P)
            dec = [decide_zero(sp.expand(got - disp))]
            rep.add(
                CheckRecord(
                    f"spin-s/depth-mass-displayed-s{s}-t{t}",
                    status_of(dec),
                    detail="tabulated closed form; see discrepancy registry",
                    residuals=dec,
                    whitelisted=True,
                )
            )
        # the gauge convention vanishes exactly at the depth-1 weight s-2
        if s >= 1:
            mg = mass_from_weight(s, d, w, P, convention="gauge")
            dec = [decide_zero(sp.expand(mg.subs(w, s - 2)))]
            rep.add(
                CheckRecord(
                    f"spin-s/gauge-zero-at-depth-one-s{s}", status_of(dec), residuals=dec
                )
            )
    # residual weight enumeration
    ok = residual_gauge_weights(3) == [1, 0, -1] and residual_gauge_weights(1) == [-1]
    rep.add(
        CheckRecord(
            "spin-s/residual-weights",
            "exact-pass" if ok else "fail",
            detail="s=3 -> [1, 0, -1]; s=1 -> [-1]",
        )
    )
    return rep


def mass_bound_scan(spins=(0, 1, 2, 3), dims=(3, 4, 5), n_weights=200, seed=7):
    """Exact rational scan: the wave-eigenvalue mass minus its bound is a
    perfect square times the curvature prefactor, so for constant negative
    curvature every real weight obeys the bound.  Returns the number of
    comparisons made (raises on any violation)."""
    import random

    rng = random.Random(seed)
    d_, w_, P_ = sp.symbols("d w P")
    count = 0
    for s in spins:
        mu2 = mass_from_weight(s, d_, w_, P_, convention="laplacian")
        bound = bf_bound(s, d_, P_, convention="laplacian")
        for d in dims:
            for _ in range(n_weights):
                w = sp.Rational(rng.randint(-4000, 4000), rng.randint(1, 40))
                P = -sp.Rational(rng.randint(1, 50), rng.randint(1, 10))
                val = mu2.subs({d_: d, w_: w, P_: P})
                b = bound.subs({d_: d, P_: P})
                if not (val - b >= 0) is True and not sp.simplify(val - b) >= 0:
                    raise AssertionError(
                        f"bound violated at s={s}, d={d}, w={w}, P={P}"
                    )
                count += 1
    return count


def _traceless_sym2(geo, name):
    """Generic symmetric rank-2 with the trace removed exactly (lower)."""
    d = geo.dim
    t = TensorField(geo.ctx, (DOWN, DOWN))
    for i in range(d):
        for j in range(i, d):
            f = sp.Function(f"{name}{i}{j}")(*geo.ctx.coords)
            t[i, j] = f
            t[j, i] = f
    # subtract the trace along the last diagonal entry
    ginv = geo.inverse
    g = geo.metric
    tr = sum(
        ginv[a, b] * t[a, b] for a, b in itertools.product(range(d), repeat=2)
    )
    corr = tr / ginv[d - 1, d - 1]
    t[d - 1, d - 1] = sp.expand(t[d - 1, d - 1] - corr)
    return t


def spin_s_onshell_report(geo, scale: ScaleField, weight=None, report=None):
    """Component-level reduction for s = 2 on an Einstein patch at constant
    scale: the middle-block tractor equations reproduce the wave equation
    modulo divergence terms, which are matched by an exact fitted ansatz."""
    d = geo.dim
    n = d + 2
    tb = TractorBundle(geo)
    w = sp.Symbol("w") if weight is None else sp.sympify(weight)
    rep = report if report is not None else Report(f"spin-s onshell[{geo.name}]")
    if not (geo.is_constant_curvature() and scale.is_constant()):
        rep.skip("spin-s/onshell-reduction", "needs constant curvature at constant scale")
        return rep
    P = geo.schouten_trace
    sigma = scale.sigma
    alg = SymmetricTensorAlgebra(geo)
    coords = geo.ctx.coords
    E = geo.vielbein
    Einv = geo.inverse_vielbein
    ginv = geo.inverse
    eta = geo.flat_metric

    vlow = _traceless_sym2(geo, "V")
    # frame-up components
    up = [[sp.Integer(0)] * d for _ in range(d)]
    for mu, nu in itertools.product(range(d), repeat=2):
        up[mu][nu] = sum(
            ginv[mu, a] * ginv[nu, b] * vlow[a, b]
            for a, b in itertools.product(range(d), repeat=2)
        )
    vframe = [[sp.Integer(0)] * d for _ in range(d)]
    for m, k in itertools.product(range(d), repeat=2):
        vframe[m][k] = sp.expand(
            sum(
                E[mu, m] * E[nu, k] * up[mu][nu]
                for mu, nu in itertools.product(range(d), repeat=2)
            )
        )
    V = TractorField(tb, [(TRACTOR, UP), (TRACTOR, UP)], weight=w)
    for m, k in itertools.product(range(d), repeat=2):
        V[(1 + m, 1 + k)] = vframe[m][k]

    # the imposed slots: X.V = 0 and I.V = 0 hold identically (top and bottom
    # rows vanish at constant scale), the trace vanishes by construction
    X = tb.canonical_X()
    I = tb.scale_tractor(scale)
    res = list(tb.dot(X, V).comps) + list(tb.dot(I, V).comps)
    res.append(tb.contract_tractor(V, 0, 1).comps[0])
    dec = [decide_zero(sp.expand(r)) for r in res]
    rep.add(CheckRecord("spin-s/imposed-slots", status_of(dec), residuals=dec))

    # D.V reduces to the divergence constraint: its middle slot is a nonzero
    # multiple of div V (frame), top/bottom slots vanish or repeat the trace
    DV = tb.thomas_D(V)
    DdotV = tb.contract_tractor(DV, 0, 1)
    divV = alg.divergence(vlow)  # curved low, rank 1
    div_frame = [
        sp.expand(
            sum(
                ginv[mu, a] * E[a, m] * divV[mu]
                for mu, a in itertools.product(range(d), repeat=2)
            )
        )
        for m in range(d)
    ]
    # the middle slots of D.V are one common factor times (div V)^k; read the
    # factor off the first component and verify it across all of them
    res = []
    ratio = None
    for k in range(d):
        lhs = sp.expand(DdotV[(1 + k,)])
        target = div_frame[k]
        if ratio is None:
            ratio = sp.cancel(lhs / target)
        res.append(sp.expand(lhs - ratio * target))
    dec = [decide_zero(r) for r in res]
    rep.add(
        CheckRecord(
            "spin-s/divergence-constraint",
            status_of(dec),
            detail=f"middle slots proportional to div V (factor {sp.sstr(sp.simplify(ratio))})",
            residuals=dec,
        )
    )

    # I.D V on the middle block equals the wave equation modulo div V terms:
    # fit the first-order ansatz a grad(sym) U + b eta div U with U = div V
    DV_full = tb.thomas_D(V)  # (A; M, N)
    IDV = tb.dot(I, DV_full)  # slots (M, N)
    wave = alg.laplacian(vlow) + 2 * P / d * (w * (w + d - 1) - 2) * vlow
    wave_frame = [[sp.Integer(0)] * d for _ in range(d)]
    upw = [[sp.Integer(0)] * d for _ in range(d)]
    for mu, nu in itertools.product(range(d), repeat=2):
        upw[mu][nu] = sum(
            ginv[mu, a] * ginv[nu, b] * wave[a, b]
            for a, b in itertools.product(range(d), repeat=2)
        )
    for m, k in itertools.product(range(d), repeat=2):
        wave_frame[m][k] = sp.expand(
            sum(
                E[mu, m] * E[nu, k] * upw[mu][nu]
                for mu, nu in itertools.product(range(d), repeat=2)
            )
        )
    # gradient of U = div V, symmetrized, frame components
    gradU = alg.gradient(divV)  # rank 2 lower, symmetric
    upg = [[sp.Integer(0)] * d for _ in range(d)]
    for mu, nu in itertools.product(range(d), repeat=2):
        upg[mu][nu] = sum(
            ginv[mu, a] * ginv[nu, b] * gradU[a, b]
            for a, b in itertools.product(range(d), repeat=2)
        )
    gradU_frame = [[sp.Integer(0)] * d for _ in range(d)]
    for m, k in itertools.product(range(d), repeat=2):
        gradU_frame[m][k] = sp.expand(
            sum(
                E[mu, m] * E[nu, k] * upg[mu][nu]
                for mu, nu in itertools.product(range(d), repeat=2)
            )
        )
    divU = alg.divergence(divV).scalar()
    a_, b_ = sp.symbols("afit bfit")
    # remainder after removing the wave part
    R = {}
    for m, k in itertools.product(range(d), repeat=2):
        R[(m, k)] = sp.expand(IDV[(1 + m, 1 + k)] + sigma * wave_frame[m][k])
    # solve for the two fit coefficients from two independent components
    eqs = []
    for m, k in ((0, 0), (0, 1)):
        eqs.append(
            sp.Eq(
                R[(m, k)],
                a_ * gradU_frame[m][k] + b_ * eta[m, k] * divU,
            )
        )
    sols = sp.solve(
        [sp.expand(e.lhs - e.rhs) for e in eqs], [a_, b_], dict=True
    )
    fitted = None
    for cand in sols or [{}]:
        if a_ in cand and b_ in cand:
            fitted = cand
            break
    if fitted is None:
        rep.add(
            CheckRecord(
                "spin-s/onshell-reduction",
                "fail",
                detail="divergence-term ansatz could not be fitted",
            )
        )
        return rep
    res = []
    for m, k in itertools.product(range(d), repeat=2):
        res.append(
            sp.expand(
                R[(m, k)]
                - fitted[a_] * gradU_frame[m][k]
                - fitted[b_] * eta[m, k] * divU
            )
        )
    dec = [decide_zero(r) for r in res]
    rep.add(
        CheckRecord(
            "spin-s/onshell-reduction",
            status_of(dec),
            detail=(
                "I.D V = -sigma (wave) + div-terms; fitted coefficients "
                f"a = {sp.sstr(sp.simplify(fitted[a_]))}, "
                f"b = {sp.sstr(sp.simplify(fitted[b_]))}"
            ),
            residuals=dec,
        )
    )
    return rep


def conjectured_eom_report(geo, scale: ScaleField, weight=None, report=None):
    """Gauge invariance of the conjectured rank-3 equation
    G = I.D V - 3 D^( I.V ) under delta V = D^( xi ) with I.xi = 0 and
    traceless xi, on a conformally flat constant-curvature patch
    (conjecture-grade: the source marks the general-s equation a conjecture)."""
    d = geo.dim
    n = d + 2
    tb = TractorBundle(geo)
    w = sp.Symbol("w") if weight is None else sp.sympify(weight)
    rep = report if report is not None else Report(f"spin3 conjecture[{geo.name}]")
    coords = geo.ctx.coords
    P = geo.schouten_trace

    # traceless symmetric rank-2 gauge parameter with I.xi = 0
    xi = TractorField(tb, [(TRACTOR, UP), (TRACTOR, UP)], weight=w + 1)
    # build from generic middle block plus compensating slots: take xi with
    # only middle entries (traceless) and top/bottom zero: then I.xi = 0 and
    # tr xi = 0 hold at constant scale exactly as in the on-shell reduction
    fr = _traceless_sym2(geo, "xi")
    ginv = geo.inverse
    E = geo.vielbein
    up = [[sp.Integer(0)] * d for _ in range(d)]
    for mu, nu in itertools.product(range(d), repeat=2):
        up[mu][nu] = sum(
            ginv[mu, a] * ginv[nu, b] * fr[a, b]
            for a, b in itertools.product(range(d), repeat=2)
        )
    for m, k in itertools.product(range(d), repeat=2):
        xi[(1 + m, 1 + k)] = sp.expand(
            sum(
                E[mu, m] * E[nu, k] * up[mu][nu]
                for mu, nu in itertools.product(range(d), repeat=2)
            )
        )
    I = tb.scale_tractor(scale)
    res = list(tb.dot(I, xi).comps)
    res.append(tb.contract_tractor(xi, 0, 1).comps[0])
    dec = [decide_zero(sp.expand(r)) for r in res]
    rep.add(CheckRecord("spin3/parameter-constraints", status_of(dec), residuals=dec))

    Dxi = tb.thomas_D(xi)  # (A; M, N)
    dV = TractorField(tb, [(TRACTOR, UP)] * 3, weight=w)
    for A, M, N in itertools.product(range(n), repeat=3):
        dV[(A, M, N)] = sp.expand(
            (Dxi[(A, M, N)] + Dxi[(M, A, N)] + Dxi[(N, M, A)]) / 3
        )
    # G(delta V) = I.D dV - 3 D^( I . dV )
    DdV = tb.thomas_D(dV)  # (B; A, M, N)
    IDdV = tb.dot(I, DdV)  # (A, M, N)
    IdV = tb.dot(I, dV)  # contracts slot 0: (M, N)
    DIdV = tb.thomas_D(IdV)  # (B; M, N)
    res = []
    for A, M, N in itertools.product(range(n), repeat=3):
        sym = (DIdV[(A, M, N)] + DIdV[(M, A, N)] + DIdV[(N, M, A)]) / 3
        res.append(sp.expand(IDdV[(A, M, N)] - 3 * sym))
    dec = [decide_zero(r) for r in res]
    rep.add(
        CheckRecord(
            "spin3/conjectured-gauge-invariance",
            status_of(dec),
            detail="conjecture-grade",
            residuals=dec,
        )
    )
    return rep
