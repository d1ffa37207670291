"""Conformal-isometry (Killing) tractors.

From a vector field xi on a conformally flat patch one forms the weight-one
tractor V^M = (0, xi^m, -(div xi)/d), subject to X.V = D.V = 0, and the
antisymmetric pair V^{MN} = D^[M V^N] / d.  Acting on weight-w scalars,
(1/2) V^{MN} D_{NM} is the tractor image of the vector field:
xi . grad - (w/d) div(xi).
"""

from __future__ import annotations

import itertools

import sympy as sp

from ..geometry import GeometryError
from ..report import CheckRecord, Report, status_of
from ..scalar import decide_zero
from ..tensor import DOWN, UP, TensorField
from ..tractor import TRACTOR, TractorBundle, TractorField
from ..weyl import ScaleField

__all__ = ["killing_tractor", "killing_tractor_report"]


def _divergence(geo, xi_up):
    d = geo.dim
    coords = geo.ctx.coords
    Gam = geo.christoffel
    out = sp.Integer(0)
    for mu in range(d):
        out += sp.diff(xi_up[mu], coords[mu])
        for lam in range(d):
            if Gam[mu, mu, lam] != 0:
                out += Gam[mu, mu, lam] * xi_up[lam]
    return out


def killing_tractor(geo, xi_up, check=True):
    """Build (V^M, V^{MN}) from an upper-index vector field.

    Raises with the residual if the admissibility conditions X.V = D.V = 0
    fail for the supplied field."""
    d = geo.dim
    n = d + 2
    tb = TractorBundle(geo)
    E = geo.vielbein
    xi_frame = [
        sp.expand(sum(E[mu, m] * xi_up[mu] for mu in range(d))) for m in range(d)
    ]
    V = TractorField(tb, [(TRACTOR, UP)], weight=1)
    for m in range(d):
        V[(1 + m,)] = xi_frame[m]
    V[(n - 1,)] = -_divergence(geo, xi_up) / d

    X = tb.canonical_X()
    XV = tb.dot(X, V).comps[0]
    DV = tb.thomas_D(V)
    DdotV = tb.contract_tractor(DV, 0, 1).comps[0]
    if check:
        bad = []
        if not decide_zero(sp.expand(XV)).is_zero:
            bad.append(("X.V", XV))
        if not decide_zero(sp.expand(DdotV)).is_zero:
            bad.append(("D.V", DdotV))
        if bad:
            raise GeometryError(
                "vector field is not admissible: "
                + "; ".join(f"{k} residual {sp.sstr(v)}" for k, v in bad)
            )
    VMN = TractorField(tb, [(TRACTOR, UP), (TRACTOR, UP)], weight=0)
    for M, N in itertools.product(range(n), repeat=2):
        VMN[(M, N)] = sp.expand((DV[(M, N)] - DV[(N, M)]) / (2 * d))
    return V, VMN


def isometry_action_on_scalar(geo, VMN, phi, w):
    """(1/2) V^{MN} D_{NM} phi."""
    tb = TractorBundle(geo)
    n = geo.dim + 2
    f = TractorField(tb, [], weight=w, comps=[phi])
    DD = tb.double_D(f)  # upper pair (A, B)
    DD_low = tb.lower_tractor(tb.lower_tractor(DD, 0), 1)
    total = sp.Integer(0)
    for M, N in itertools.product(range(n), repeat=2):
        if VMN[(M, N)] != 0:
            total += VMN[(M, N)] * DD_low[(N, M)]
    return total / 2


def killing_tractor_report(geo, xi_up, label, report=None, expect_middle_antisym=True):
    """Verify the construction for one vector field."""
    d = geo.dim
    rep = report if report is not None else Report(f"killing[{geo.name}]/{label}")
    w = sp.Symbol("w")
    coords = geo.ctx.coords
    V, VMN = killing_tractor(geo, xi_up)
    rep.add(CheckRecord(f"killing/{label}/admissible", "exact-pass"))

    phi = sp.Function("phi")(*coords)
    action = isometry_action_on_scalar(geo, VMN, phi, w)
    target = sum(xi_up[mu] * sp.diff(phi, coords[mu]) for mu in range(d)) - (
        w / d
    ) * _divergence(geo, xi_up) * phi
    dec = [decide_zero(sp.expand(action - target))]
    rep.add(
        CheckRecord(f"killing/{label}/scalar-action", status_of(dec), residuals=dec)
    )

    if expect_middle_antisym:
        # middle block of V^{MN} is nabla^[m xi^n]
        E = geo.vielbein
        ginv = geo.inverse
        Gam = geo.christoffel
        nab = [[sp.Integer(0)] * d for _ in range(d)]
        for mu, nu in itertools.product(range(d), repeat=2):
            t = sp.diff(xi_up[nu], coords[mu])
            for lam in range(d):
                if Gam[nu, mu, lam] != 0:
                    t += Gam[nu, mu, lam] * xi_up[lam]
            nab[mu][nu] = t
        res = []
        for m, k in itertools.product(range(d), repeat=2):
            frame = sum(
                ginv[mu, a] * E[a, m] * E[nu, k] * (nab[mu][nu] - nab[nu][mu]) / 2
                for mu, nu, a in itertools.product(range(d), repeat=3)
            )
            res.append(VMN[(1 + m, 1 + k)] - frame)
        dec = [decide_zero(sp.expand(r)) for r in res]
        rep.add(
            CheckRecord(f"killing/{label}/middle-block", status_of(dec), residuals=dec)
        )
    return rep
