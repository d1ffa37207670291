"""Local rescaling engine: g -> Omega^2 g.

The independent oracle for every transformation law is full recomputation of
the curvature pipeline after rescaling, never the claimed rule itself.  The
compendium verifier compares each claimed transform against that oracle and
reports per-rule pass/fail with residuals.
"""

from __future__ import annotations

import itertools

import sympy as sp

from .geometry import Geometry, GeometryError
from .report import CheckRecord, Report, status_of
from .scalar import decide_zero
from .tensor import DOWN, UP, TensorField

__all__ = ["WeylFactor", "ScaleField", "rescale", "transform_field", "verify_compendium"]


class WeylFactor:
    """A nonvanishing rescaling function Omega with its logarithmic gradient."""

    def __init__(self, ctx, omega):
        self.ctx = ctx
        self.omega = sp.sympify(omega)

    def upsilon(self):
        """Upsilon_mu = Omega^-1 d_mu Omega as a lower-index field."""
        t = TensorField(self.ctx, (DOWN,))
        for mu, c in enumerate(self.ctx.coords):
            t[mu] = sp.cancel(sp.diff(self.omega, c) / self.omega)
        return t

    def upsilon_exactness_residuals(self):
        """d_[mu Upsilon_nu]; identically zero since Upsilon = d log Omega."""
        ups = self.upsilon()
        coords = self.ctx.coords
        res = []
        for mu, nu in itertools.combinations(range(self.ctx.dim), 2):
            res.append(sp.diff(ups[nu], coords[mu]) - sp.diff(ups[mu], coords[nu]))
        return res


class ScaleField:
    """A nonvanishing weight-one scalar sigma and b = sigma^-1 d sigma."""

    def __init__(self, ctx, sigma):
        self.ctx = ctx
        self.sigma = sp.sympify(sigma)
        self.weight = sp.Integer(1)

    def b_field(self):
        t = TensorField(self.ctx, (DOWN,))
        for mu, c in enumerate(self.ctx.coords):
            t[mu] = sp.cancel(sp.diff(self.sigma, c) / self.sigma)
        return t

    def is_constant(self):
        return all(sp.diff(self.sigma, c) == 0 for c in self.ctx.coords)

    def rescaled(self, weyl: "WeylFactor"):
        return ScaleField(self.ctx, sp.cancel(weyl.omega * self.sigma))


def rescale(geo: Geometry, weyl: WeylFactor) -> Geometry:
    """Fresh geometry for Omega^2 g; every cached tensor is recomputed from
    scratch so this can serve as the oracle for claimed transformation laws.

    The frame is continued analytically: e -> Omega e (square roots carry a
    branch choice, and the continued frame is the canonical one; it satisfies
    e' eta e'^T = Omega^2 g exactly, which the constructor re-verifies).
    """
    om2 = weyl.omega**2
    g = (geo.metric * om2).applyfunc(sp.cancel)
    vb = None
    try:
        vb = (geo.vielbein * weyl.omega).applyfunc(sp.cancel)
    except GeometryError:
        vb = None
    return Geometry(geo.ctx, g, vielbein=vb, name=geo.name + "*")


def transform_field(t: TensorField, weyl: WeylFactor, kind="tensor"):
    """Image of a weight-w field (coordinate-basis components) under the
    rescaling: multiplication by Omega^w.  Covariant-derivative images need
    the pre-rescaling geometry and live in the compendium rules; composites
    without a tabulated rule must be derived via rescale+recompute."""
    if kind != "tensor":
        raise ValueError("no tabulated rule; derive via rescale+recompute")
    return t * weyl.omega**t.weight


# -- claimed transformation rules (the compendium) ---------------------------


def _grad_scalar_rule(geo, weyl, f, w):
    """Omega^w (nabla_mu + w Upsilon_mu) f."""
    ups = weyl.upsilon()
    out = TensorField(geo.ctx, (DOWN,))
    for mu in range(geo.dim):
        out[mu] = weyl.omega**w * (sp.diff(f, geo.ctx.coords[mu]) + w * ups[mu] * f)
    return out


def _grad_vector_rule(geo, weyl, v, w):
    """Omega^w [(nabla + w Ups) v^n + Ups_mu v^n - Ups^n v_mu + delta^n_mu Ups.v]."""
    d = geo.dim
    ups = weyl.upsilon()
    ginv = geo.inverse
    g = geo.metric
    dv = geo.covariant_derivative(v)
    ups_up = [sp.expand(sum(ginv[m, n] * ups[n] for n in range(d))) for m in range(d)]
    ups_dot_v = sp.expand(sum(ups[m] * v[m] for m in range(d)))
    v_low = [sp.expand(sum(g[m, n] * v[n] for n in range(d))) for m in range(d)]
    out = TensorField(geo.ctx, (DOWN, UP))
    for mu, n in itertools.product(range(d), repeat=2):
        expr = (
            dv[mu, n]
            + w * ups[mu] * v[n]
            + ups[mu] * v[n]
            - ups_up[n] * v_low[mu]
            + (ups_dot_v if mu == n else 0)
        )
        out[mu, n] = weyl.omega**w * expr
    return out


def _grad_oneform_rule(geo, weyl, omf, w):
    """Omega^w [(nabla + w Ups) om_nu - Ups_mu om_nu - Ups_nu om_mu + g Ups.om]."""
    d = geo.dim
    ups = weyl.upsilon()
    ginv = geo.inverse
    g = geo.metric
    dv = geo.covariant_derivative(omf)
    ups_dot = sp.expand(
        sum(
            ginv[m, n] * ups[m] * omf[n]
            for m, n in itertools.product(range(d), repeat=2)
        )
    )
    out = TensorField(geo.ctx, (DOWN, DOWN))
    for mu, nu in itertools.product(range(d), repeat=2):
        expr = (
            dv[mu, nu]
            + w * ups[mu] * omf[nu]
            - ups[mu] * omf[nu]
            - ups[nu] * omf[mu]
            + g[mu, nu] * ups_dot
        )
        out[mu, nu] = weyl.omega**w * expr
    return out


def _weyl_mixed(geo):
    """W_{mu nu}^r_s (endomorphism slot raised) as a flat list."""
    d = geo.dim
    W = geo.weyl_tensor
    ginv = geo.inverse
    out = []
    for mu, nu, r, s in itertools.product(range(d), repeat=4):
        out.append(sp.cancel(sum(ginv[r, a] * W[a, s, mu, nu] for a in range(d))))
    return out


def verify_compendium(geo: Geometry, weyl: WeylFactor, weight=None, with_frame=True):
    """Check every rescaling rule against the rescale-and-recompute oracle.

    Rules: the metric itself, volume density, vielbein, spin connection, the
    rho-tensor, conformal curvature, its curl, and the covariant-derivative
    images of weighted scalars / vectors / one-forms (generic components,
    symbolic weight by default).  Returns a Report.
    """
    d = geo.dim
    ctx = geo.ctx
    om = weyl.omega
    w = sp.Symbol("w") if weight is None else sp.sympify(weight)
    new = rescale(geo, weyl)
    ups = weyl.upsilon()
    report = Report(f"compendium[{geo.name}]")

    def check(rule, residuals):
        recs = [decide_zero(sp.expand(r)) for r in residuals]
        report.add(CheckRecord(f"compendium/{rule}", status_of(recs), residuals=recs))

    # 1. the defining metric transformation
    check(
        "metric",
        [
            new.metric[i, j] - om**2 * geo.metric[i, j]
            for i, j in itertools.product(range(d), repeat=2)
        ],
    )
    # 2. volume density picks up Omega^d (compared squared: both sides are
    # principal roots of positive quantities, so equality of squares decides)
    check(
        "volume-density",
        [new.volume_density() ** 2 - om ** (2 * d) * geo.volume_density() ** 2],
    )
    # 3. frame: e -> Omega e
    if with_frame:
        try:
            E_old, E_new = geo.vielbein, new.vielbein
        except GeometryError as err:
            report.skip("compendium/vielbein", str(err))
            report.skip("compendium/spin-connection", str(err))
        else:
            check(
                "vielbein",
                [
                    E_new[i, j] - om * E_old[i, j]
                    for i, j in itertools.product(range(d), repeat=2)
                ],
            )
            # 4. spin connection: om_mu^m_n -> om_mu^m_n - Ups^m e_{mu n} + Ups_n e_mu^m
            om_old, om_new = geo.spin_connection, new.spin_connection
            eta = geo.flat_metric
            eta_inv = eta.inv()
            Einv = geo.inverse_vielbein
            ups_flat_dn = [
                sp.cancel(sum(Einv[m, mu] * ups[mu] for mu in range(d)))
                for m in range(d)
            ]
            ups_flat_up = [
                sp.cancel(sum(eta_inv[m, r] * ups_flat_dn[r] for r in range(d)))
                for m in range(d)
            ]
            res = []
            for mu, m, n in itertools.product(range(d), repeat=3):
                e_low = sum(E_old[mu, r] * eta[r, n] for r in range(d))
                claimed = (
                    om_old[mu][m][n]
                    - ups_flat_up[m] * e_low
                    + ups_flat_dn[n] * E_old[mu, m]
                )
                res.append(sp.radsimp(om_new[mu][m][n] - claimed))
            check("spin-connection", res)
    # 5. rho-tensor: P -> P - nabla Ups + Ups Ups - (1/2) g Ups.Ups (all lower)
    if d >= 3:
        P_old, P_new = geo.schouten, new.schouten
        dU = geo.covariant_derivative(ups)
        ups2 = sp.expand(
            sum(
                geo.inverse[a, b] * ups[a] * ups[b]
                for a, b in itertools.product(range(d), repeat=2)
            )
        )
        res = []
        for mu, nu in itertools.product(range(d), repeat=2):
            claimed = (
                P_old[mu, nu]
                - dU[mu, nu]
                + ups[nu] * ups[mu]
                - geo.metric[mu, nu] * ups2 / 2
            )
            res.append(P_new[mu, nu] - claimed)
        check("rho-tensor", res)
    else:
        report.skip("compendium/rho-tensor", "pole at d = 2")
    # 6. conformal curvature: the endomorphism-valued two-form is invariant
    if d >= 4:
        W_old = _weyl_mixed(geo)
        W_new = _weyl_mixed(new)
        check("conformal-curvature", [a - b for a, b in zip(W_new, W_old)])
    else:
        report.skip("compendium/conformal-curvature", "identically zero below d = 4")
    # 7. curl of the rho-tensor: C' = C - W Ups (fully curved form; the
    # Omega^-1 of the frame-index statement is the vielbein conversion)
    if d >= 3:
        C_old, C_new = geo.cotton, new.cotton
        W_low = geo.weyl_tensor if d >= 4 else None
        ginv = geo.inverse
        res = []
        for mu, nu, rho in itertools.product(range(d), repeat=3):
            claimed = C_old[mu, nu, rho]
            if W_low is not None:
                claimed -= sum(
                    W_low[rho, a, mu, nu] * ginv[a, b] * ups[b]
                    for a, b in itertools.product(range(d), repeat=2)
                )
            res.append(sp.expand(C_new[mu, nu, rho] - claimed))
        check("rho-curl", res)
    else:
        report.skip("compendium/rho-curl", "pole at d = 2")
    # 8/9/10. covariant derivatives of weighted scalar / vector / one-form
    f = sp.Function("f")(*ctx.coords)
    df_new = new.covariant_derivative(TensorField.from_scalar(ctx, om**w * f, weight=w))
    claimed = _grad_scalar_rule(geo, weyl, f, w)
    check("gradient-weighted-scalar", [df_new[mu] - claimed[mu] for mu in range(d)])

    v = TensorField.from_function(ctx, (UP,), "v")
    dv_new = new.covariant_derivative(v * om**w)
    claimed = _grad_vector_rule(geo, weyl, v, w)
    check(
        "gradient-weighted-vector",
        [
            dv_new[mu, n] - claimed[mu, n]
            for mu, n in itertools.product(range(d), repeat=2)
        ],
    )

    omf = TensorField.from_function(ctx, (DOWN,), "q")
    dq_new = new.covariant_derivative(omf * om**w)
    claimed = _grad_oneform_rule(geo, weyl, omf, w)
    check(
        "gradient-weighted-oneform",
        [
            dq_new[mu, nu] - claimed[mu, nu]
            for mu, nu in itertools.product(range(d), repeat=2)
        ],
    )
    return report
