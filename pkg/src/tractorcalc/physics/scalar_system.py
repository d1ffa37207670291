"""Scalar wave system: the weight-w scalar coupled through the scale tractor.

The equation of motion is the contraction I.D phi.  At constant scale on an
Einstein background it reduces to -sigma (Box + (2P/d) w (w+d-1)) phi; at
arbitrary scale it is the compensated wave operator acting on the weight-zero
field sigma^-w phi with the curvature mass I.I calibrated by w(d+w-1); at
w = 1 - d/2 the scale decouples and the operator is the conformally
invariant wave operator.
"""

from __future__ import annotations

import itertools

import sympy as sp

from ..geometry import _norm
from ..report import CheckRecord, Report, status_of
from ..scalar import decide_zero
from ..tractor import TractorBundle, TractorField
from ..weyl import ScaleField

__all__ = ["scalar_eom", "curvature_mass", "scalar_system_report"]


def scalar_eom(geo, scale: ScaleField, w, phi=None):
    """Assembled I.D phi as a scalar expression (weight w may be symbolic)."""
    tb = TractorBundle(geo)
    w = sp.sympify(w)
    if phi is None:
        phi = sp.Function("phi")(*geo.ctx.coords)
    f = TractorField(tb, [], weight=w, comps=[phi])
    I = tb.scale_tractor(scale)
    Df = tb.thomas_D(f)
    return tb.dot(I, Df).comps[0]


def curvature_mass(geo, scale: ScaleField):
    """I.I for this scale (the unit-invariant mass-squared scale)."""
    tb = TractorBundle(geo)
    I = tb.scale_tractor(scale)
    return _norm(tb.dot(I, I).comps[0])


def scalar_system_report(geo, scale: ScaleField, weight=None, report=None):
    """Verify the scalar system's reductions on this background."""
    d = geo.dim
    w = sp.Symbol("w") if weight is None else sp.sympify(weight)
    rep = report if report is not None else Report(f"spin0[{geo.name}]")
    coords = geo.ctx.coords
    phi = sp.Function("phi")(*coords)
    P = geo.schouten_trace
    sigma = scale.sigma
    ginv = geo.inverse
    Gam = geo.christoffel

    eom = scalar_eom(geo, scale, w, phi)

    # constant scale on Einstein: I.D phi = -sigma (Box + (2P/d) w (w+d-1)) phi
    if geo.is_einstein() and scale.is_constant():
        target = -sigma * (
            geo.laplacian_scalar(phi) + 2 * P / d * w * (w + d - 1) * phi
        )
        dec = [decide_zero(sp.expand(eom - target))]
        rep.add(
            CheckRecord("spin0/constant-scale-wave-operator", status_of(dec), residuals=dec)
        )
    else:
        rep.skip("spin0/constant-scale-wave-operator", "needs Einstein at constant scale")

    # curvature mass: I.I = -(2 sigma^2/d)[P + div b - (d-2)/2 b.b]
    b = scale.b_field()
    div_b = sp.Integer(0)
    for mu, nu in itertools.product(range(d), repeat=2):
        if ginv[mu, nu] == 0:
            continue
        t = sp.diff(b[nu], coords[mu])
        for lam in range(d):
            if Gam[lam, mu, nu] != 0:
                t -= Gam[lam, mu, nu] * b[lam]
        div_b += ginv[mu, nu] * t
    b2 = sum(
        ginv[mu, nu] * b[mu] * b[nu] for mu, nu in itertools.product(range(d), repeat=2)
    )
    II = curvature_mass(geo, scale)
    target_II = -2 * sigma**2 / d * (P + div_b - sp.Rational(d - 2, 2) * b2)
    dec = [decide_zero(sp.expand(II - target_II))]
    rep.add(CheckRecord("spin0/curvature-mass", status_of(dec), residuals=dec))

    # arbitrary scale: with hat(phi) = sigma^-w phi of weight zero,
    # I.D phi = sigma^w [(d-2) grad(sigma).grad(hat) - sigma Box hat]
    #           + w(d+w-1) I.I sigma^(w-1) hat
    hat = sp.Function("phihat")(*coords)
    eom_hat = scalar_eom(geo, scale, w, sigma**w * hat)
    grad_dot = sum(
        ginv[mu, nu] * sp.diff(sigma, coords[mu]) * sp.diff(hat, coords[nu])
        for mu, nu in itertools.product(range(d), repeat=2)
    )
    target = (
        sigma**w * ((d - 2) * grad_dot - sigma * geo.laplacian_scalar(hat))
        + w * (d + w - 1) * II * sigma ** (w - 1) * hat
    )
    dec = [decide_zero(sp.expand(eom_hat - target))]
    rep.add(
        CheckRecord("spin0/arbitrary-scale-compensated-form", status_of(dec), residuals=dec)
    )

    # w = 1 - d/2: the assembled equation carries a single overall power of
    # the scale times the conformally invariant wave operator
    w0 = 1 - sp.Rational(d, 2)
    eom0 = scalar_eom(geo, scale, w0, phi)
    yamabe = -(geo.laplacian_scalar(phi) - sp.Rational(d - 2, 2) * P * phi)
    dec = [decide_zero(sp.expand(eom0 - sigma * yamabe))]
    rep.add(
        CheckRecord("spin0/conformal-weight-wave-operator", status_of(dec), residuals=dec)
    )
    # scale decoupling at that weight: a different scale gives the same
    # equation up to its overall scale factor
    eom_alt = scalar_eom(geo, ScaleField(geo.ctx, sp.Integer(3)), w0, phi)
    dec = [decide_zero(sp.expand(eom0 / sigma - eom_alt / 3))]
    rep.add(CheckRecord("spin0/scale-decoupling", status_of(dec), residuals=dec))
    return rep
