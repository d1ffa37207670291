"""Metric-to-curvature pipeline.

From a symbolic metric on a single coordinate patch this computes, lazily and
memoized: the inverse metric, Christoffel symbols, Riemann / Ricci / scalar
curvature, the trace-adjusted Ricci (rho) tensor and its trace, the conformal
(trace-free) curvature, its curl, a diagonal vielbein with torsion-free spin
connection, and the Einstein / conformal-flatness predicates.

Conventions (mostly-plus signature friendly):
    Gamma^r_{mn} = (1/2) g^{rs} (d_m g_{ns} + d_n g_{ms} - d_s g_{mn})
    R^r_{s mn}   = d_m Gamma^r_{ns} - d_n Gamma^r_{ms} + Gamma Gamma - Gamma Gamma
    Ric_{sn}     = R^r_{s rn},   R = g^{sn} Ric_{sn}
    rho_{mn}     = (Ric_{mn} - g_{mn} R / (2(d-1))) / (d-2),   trace R/(2(d-1))
so the unit Poincare patch in d = 4 gives rho_{mn} = -g_{mn}/2, trace -2, and
[nabla_m, nabla_n] v^r = R^r_{s mn} v^s holds exactly.
"""

from __future__ import annotations

import itertools

import sympy as sp

from .scalar import decide_zero, is_zero, normal_form
from .tensor import DOWN, UP, TensorField

__all__ = ["Geometry", "GeometryError"]


class GeometryError(RuntimeError):
    pass


def _norm(e):
    """Pipeline normalizer: factored rational form (falls back to cancel)."""
    if e == 0:
        return sp.Integer(0)
    try:
        return sp.factor(e)
    except (sp.PolynomialError, sp.polys.polyerrors.PolynomialError, ZeroDivisionError):
        return sp.cancel(e)


def _sqrt_analytic(e):
    """Square root with even-power factors pulled out analytically.

    Frames involve a branch choice; this picks the continuation that is
    positive where the even-power bases are (the constructor re-verifies
    e eta e^T = g exactly, which is branch-independent)."""
    e = _norm(sp.sympify(e))
    out = sp.Integer(1)
    rem = sp.Integer(1)
    for arg in sp.Mul.make_args(e):
        if arg.is_Rational:
            rem *= arg
            continue
        base, expo = arg.as_base_exp()
        if expo.is_Integer:
            k, odd = divmod(int(expo), 2)
            out *= base**k
            if odd:
                rem *= base
        else:
            rem *= arg
    return out * sp.sqrt(rem)




def _cached(fn):
    name = "_" + fn.__name__

    def wrapper(self):
        val = self._cache.get(name)
        if val is None:
            val = fn(self)
            self._cache[name] = val
        return val

    wrapper.__doc__ = fn.__doc__
    return property(wrapper)


class Geometry:
    """A metric patch plus memoized curvature data.

    Construction verifies symmetry and symbolic invertibility of the metric.
    All derived tensors are computed on first access and cached; instances
    are treated as immutable after construction (compute-once semantics make
    concurrent readers safe).
    """

    def __init__(self, ctx, metric, vielbein=None, name=""):
        self.ctx = ctx
        self.name = name or "patch"
        d = ctx.dim
        if isinstance(metric, TensorField):
            if metric.variance != (DOWN, DOWN):
                raise GeometryError("metric must be a rank-2 lower-index field")
            gmat = sp.Matrix(d, d, lambda i, j: metric[i, j])
        else:
            gmat = sp.Matrix(metric)
        if gmat.shape != (d, d):
            raise GeometryError("metric shape does not match patch dimension")
        if sp.expand(gmat - gmat.T) != sp.zeros(d, d):
            for i in range(d):
                for j in range(d):
                    if not is_zero(gmat[i, j] - gmat[j, i]):
                        raise GeometryError("metric is not symmetric")
        self._diagonal = all(
            gmat[i, j] == 0 for i in range(d) for j in range(d) if i != j
        )
        if self._diagonal:
            det = sp.cancel(sp.prod([gmat[i, i] for i in range(d)]))
        else:
            det = sp.cancel(gmat.det())
        if det == 0:
            raise GeometryError("metric is not invertible on the patch")
        self._g = gmat.applyfunc(_norm)
        self._det = det
        self._user_vielbein = vielbein
        self._cache = {}
        # weights of the metric and its inverse as Weyl bookkeeping constants
        self.metric_weight = sp.Integer(2)
        self.inverse_metric_weight = sp.Integer(-2)

    # -- raw matrices ---------------------------------------------------

    @property
    def dim(self):
        return self.ctx.dim

    @property
    def metric(self):
        return self._g

    @_cached
    def inverse(self):
        if self._diagonal:
            return sp.diag(*[_norm(1 / self._g[i, i]) for i in range(self.dim)])
        return self._g.inv().applyfunc(_norm)

    @property
    def metric_tensor(self):
        return self._g

    @property
    def inverse_metric(self):
        return self.inverse

    @property
    def determinant(self):
        return self._det

    def metric_tensor_field(self):
        d = self.dim
        t = TensorField(self.ctx, (DOWN, DOWN), weight=2)
        for i, j in itertools.product(range(d), repeat=2):
            t[i, j] = self._g[i, j]
        return t

    def inverse_metric_field(self):
        d = self.dim
        t = TensorField(self.ctx, (UP, UP), weight=-2)
        inv = self.inverse
        for i, j in itertools.product(range(d), repeat=2):
            t[i, j] = inv[i, j]
        return t

    def volume_density(self):
        """sqrt(-g) for Lorentzian signature, sqrt(g) otherwise (weight d)."""
        sign = -1 if (-1 in self.ctx.signature) else 1
        return sp.sqrt(sp.cancel(sign * self._det))

    # -- curvature pipeline ----------------------------------------------

    @_cached
    def christoffel(self):
        """Gamma^r_{mn} as a TensorField with variance (up, down, down)."""
        d, g, ginv = self.dim, self._g, self.inverse
        coords = self.ctx.coords
        out = TensorField(self.ctx, (UP, DOWN, DOWN))
        for r, m, n in itertools.product(range(d), repeat=3):
            if m > n:
                out[r, m, n] = out[r, n, m]
                continue
            total = sp.Integer(0)
            for s in range(d):
                if ginv[r, s] == 0:
                    continue
                term = (
                    sp.diff(g[n, s], coords[m])
                    + sp.diff(g[m, s], coords[n])
                    - sp.diff(g[m, n], coords[s])
                )
                total += ginv[r, s] * term
            out[r, m, n] = _norm(total / 2)
        return out

    @_cached
    def riemann(self):
        """R^r_{s mn} (up, down, down, down)."""
        d = self.dim
        coords = self.ctx.coords
        Gam = self.christoffel
        out = TensorField(self.ctx, (UP, DOWN, DOWN, DOWN))
        for r, s, m, n in itertools.product(range(d), repeat=4):
            if m >= n:
                continue  # antisymmetric in (m, n); fill later
            expr = sp.diff(Gam[r, n, s], coords[m]) - sp.diff(Gam[r, m, s], coords[n])
            for lam in range(d):
                if Gam[r, m, lam] != 0 and Gam[lam, n, s] != 0:
                    expr += Gam[r, m, lam] * Gam[lam, n, s]
                if Gam[r, n, lam] != 0 and Gam[lam, m, s] != 0:
                    expr -= Gam[r, n, lam] * Gam[lam, m, s]
            expr = _norm(expr)
            out[r, s, m, n] = expr
            out[r, s, n, m] = -expr
        return out

    @_cached
    def riemann_lowered(self):
        """R_{rsmn} = g_{ra} R^a_{smn}."""
        d = self.dim
        R = self.riemann
        g = self._g
        out = TensorField(self.ctx, (DOWN, DOWN, DOWN, DOWN))
        for r, s, m, n in itertools.product(range(d), repeat=4):
            if m >= n:
                continue
            expr = _norm(sum(g[r, a] * R[a, s, m, n] for a in range(d)))
            out[r, s, m, n] = expr
            out[r, s, n, m] = -expr
        return out

    @_cached
    def ricci(self):
        """Ric_{sn} = R^r_{s rn}."""
        d = self.dim
        R = self.riemann
        out = TensorField(self.ctx, (DOWN, DOWN))
        for s, n in itertools.product(range(d), repeat=2):
            if s > n:
                out[s, n] = out[n, s]
                continue
            out[s, n] = _norm(sum(R[r, s, r, n] for r in range(d)))
        return out

    @_cached
    def scalar_curvature(self):
        d = self.dim
        ric = self.ricci
        ginv = self.inverse
        return _norm(
            sum(ginv[s, n] * ric[s, n] for s, n in itertools.product(range(d), repeat=2))
        )

    @_cached
    def schouten(self):
        """rho_{mn}: the trace-adjusted Ricci tensor (requires d >= 3)."""
        d = self.dim
        if d < 3:
            raise GeometryError("the rho-tensor has a pole at d = 2")
        ric = self.ricci
        R = self.scalar_curvature
        g = self._g
        out = TensorField(self.ctx, (DOWN, DOWN))
        for m, n in itertools.product(range(d), repeat=2):
            out[m, n] = _norm(
                (ric[m, n] - g[m, n] * R / (2 * (d - 1))) / (d - 2)
            )
        return out

    @_cached
    def schouten_trace(self):
        if self.dim < 3:
            raise GeometryError("the rho-tensor has a pole at d = 2")
        return _norm(self.scalar_curvature / (2 * (self.dim - 1)))

    @_cached
    def schouten_mixed(self):
        """rho_m^n = rho_{mr} g^{rn}."""
        d = self.dim
        P = self.schouten
        ginv = self.inverse
        out = TensorField(self.ctx, (DOWN, UP))
        for m, n in itertools.product(range(d), repeat=2):
            out[m, n] = _norm(sum(P[m, r] * ginv[r, n] for r in range(d)))
        return out

    @_cached
    def weyl_tensor(self):
        """W_{rsmn}: the totally trace-free part of the lowered curvature."""
        d = self.dim
        if d < 3:
            raise GeometryError("conformal curvature requires d >= 3")
        Rl = self.riemann_lowered
        P = self.schouten
        g = self._g
        out = TensorField(self.ctx, (DOWN, DOWN, DOWN, DOWN))
        for r, s, m, n in itertools.product(range(d), repeat=4):
            if m >= n:
                continue
            expr = Rl[r, s, m, n] - (
                P[r, m] * g[s, n]
                - P[s, m] * g[r, n]
                - P[r, n] * g[s, m]
                + P[s, n] * g[r, m]
            )
            expr = _norm(expr)
            out[r, s, m, n] = expr
            out[r, s, n, m] = -expr
        return out

    @_cached
    def cotton(self):
        """C_{mn r} = nabla_m rho_{n r} - nabla_n rho_{m r} (requires d >= 3)."""
        if self.dim < 3:
            raise GeometryError("the curl of the rho-tensor requires d >= 3")
        dP = self.covariant_derivative(self.schouten)  # (mu, n, r)
        d = self.dim
        out = TensorField(self.ctx, (DOWN, DOWN, DOWN))
        for m, n, r in itertools.product(range(d), repeat=3):
            if m >= n:
                continue
            expr = _norm(dP[m, n, r] - dP[n, m, r])
            out[m, n, r] = expr
            out[n, m, r] = -expr
        return out

    # -- covariant derivative ---------------------------------------------

    def covariant_derivative(self, t):
        """Levi-Civita covariant derivative; the new lower index comes first."""
        d = self.dim
        coords = self.ctx.coords
        Gam = self.christoffel
        if t.rank == 0:
            out = TensorField(self.ctx, (DOWN,), weight=t.weight)
            for mu in range(d):
                out[mu] = sp.diff(t.scalar(), coords[mu])
            return out
        out = TensorField(self.ctx, (DOWN,) + t.variance, weight=t.weight)
        for full in out.indices():
            mu, rest = full[0], full[1:]
            expr = sp.diff(t[rest], coords[mu])
            for slot, var in enumerate(t.variance):
                a = rest[slot]
                for b in range(d):
                    idx = list(rest)
                    idx[slot] = b
                    if var == UP:
                        expr += Gam[a, mu, b] * t[tuple(idx)]
                    else:
                        expr -= Gam[b, mu, a] * t[tuple(idx)]
            out[full] = expr
        return out

    def laplacian_scalar(self, f):
        """Wave operator g^{mn} nabla_m nabla_n on a scalar expression."""
        d = self.dim
        coords = self.ctx.coords
        ginv = self.inverse
        Gam = self.christoffel
        total = sp.Integer(0)
        for m, n in itertools.product(range(d), repeat=2):
            if ginv[m, n] == 0:
                continue
            second = sp.diff(f, coords[m], coords[n])
            for r in range(d):
                second -= Gam[r, m, n] * sp.diff(f, coords[r])
            total += ginv[m, n] * second
        return sp.expand(total)

    def gradient_upper(self, f):
        """nabla^m f with a curved upper index."""
        d = self.dim
        coords = self.ctx.coords
        ginv = self.inverse
        out = TensorField(self.ctx, (UP,))
        for m in range(d):
            out[m] = sp.expand(
                sum(ginv[m, n] * sp.diff(f, coords[n]) for n in range(d))
            )
        return out

    # -- vielbein ----------------------------------------------------------

    @_cached
    def flat_metric(self):
        """Constant frame metric eta_{mn} read off the declared signature."""
        return sp.diag(*[sp.Integer(s) for s in self.ctx.signature])

    @_cached
    def vielbein(self):
        """e_mu^m with e^T eta e = g.  Diagonal metrics only, unless supplied."""
        d = self.dim
        if self._user_vielbein is not None:
            E = sp.Matrix(self._user_vielbein)
        else:
            for i, j in itertools.product(range(d), repeat=2):
                if i != j and not is_zero(self._g[i, j]):
                    raise GeometryError(
                        "non-diagonal metric needs a user-supplied vielbein"
                    )
            eta = self.flat_metric
            entries = []
            for i in range(d):
                ratio = _norm(self._g[i, i] * eta[i, i])
                entries.append(_sqrt_analytic(ratio))
            E = sp.diag(*entries)
        # verify e_mu^m eta_mn e_nu^n = g exactly
        eta = self.flat_metric
        resid = (E * eta * E.T - self._g).applyfunc(lambda e: sp.radsimp(sp.cancel(e)))
        for i, j in itertools.product(range(d), repeat=2):
            if not is_zero(resid[i, j]):
                raise GeometryError("vielbein does not square to the metric")
        return E  # rows: curved mu, columns: flat m

    @_cached
    def inverse_vielbein(self):
        """e^mu_m (inverse as a matrix, rows flat, columns curved)."""
        return self.vielbein.inv().applyfunc(lambda e: sp.radsimp(sp.cancel(e)))

    @_cached
    def spin_connection(self):
        """omega_mu^m_n (first frame index up, second down), nabla e = 0.

        Nested lists indexed [mu][m][n]."""
        d = self.dim
        E = self.vielbein
        Einv = self.inverse_vielbein
        coords = self.ctx.coords
        Gam = self.christoffel
        om = [[[sp.Integer(0)] * d for _ in range(d)] for _ in range(d)]
        for mu in range(d):
            for m in range(d):
                for n in range(d):
                    # omega_mu^m_n = e_nu^m (partial_mu e^nu_n + Gamma^nu_{mu lam} e^lam_n)
                    total = sp.Integer(0)
                    for nu in range(d):
                        inner = sp.diff(Einv[n, nu], coords[mu])
                        for lam in range(d):
                            inner += Gam[nu, mu, lam] * Einv[n, lam]
                        total += E[nu, m] * inner
                    om[mu][m][n] = _norm(sp.radsimp(total))
        return om

    @_cached
    def spin_connection_upper(self):
        """omega_mu^{mn} (both frame indices up, antisymmetric in mn)."""
        d = self.dim
        om = self.spin_connection
        eta_inv = self.flat_metric.inv()
        return [
            [
                [
                    _norm(sum(om[mu][m][r] * eta_inv[r, n] for r in range(d)))
                    for n in range(d)
                ]
                for m in range(d)
            ]
            for mu in range(d)
        ]

    def frame_schouten(self):
        """rho_mu^m = rho_{mu nu} e^{nu m} (second index flat, raised)."""
        d = self.dim
        P = self.schouten
        Einv = self.inverse_vielbein
        eta_inv = self.flat_metric.inv()
        out = [[sp.Integer(0)] * d for _ in range(d)]
        for mu in range(d):
            for m in range(d):
                out[mu][m] = _norm(
                    sum(
                        P[mu, nu] * Einv[r, nu] * eta_inv[r, m]
                        for nu in range(d)
                        for r in range(d)
                    )
                )
        return out

    # -- predicates ---------------------------------------------------------

    def is_einstein(self):
        """Tri-state: True / False / None (undecided zero tests)."""
        d = self.dim
        P = self.schouten
        trP = self.schouten_trace
        g = self._g
        verdict = True
        for m, n in itertools.product(range(d), repeat=2):
            dec = decide_zero(P[m, n] - trP * g[m, n] / d)
            if dec.status.value == "undecided":
                return None
            if not dec.is_zero:
                return False
        return verdict

    def is_constant_curvature(self):
        if self.is_einstein() is not True:
            return False
        P = self.schouten_trace
        return all(is_zero(sp.diff(P, c)) for c in self.ctx.coords)

    def is_conformally_flat(self):
        d = self.dim
        if d == 3:
            C = self.cotton
            field = C.comps
        elif d >= 4:
            field = self.weyl_tensor.comps
        else:
            return True  # every 2d metric is locally conformally flat
        for c in field:
            dec = decide_zero(c)
            if dec.status.value == "undecided":
                return None
            if not dec.is_zero:
                return False
        return True

    def einstein_residual(self):
        """rho_{mn} - (trace/d) g_{mn}, the obstruction to the Einstein condition."""
        d = self.dim
        P = self.schouten
        trP = self.schouten_trace
        g = self._g
        out = TensorField(self.ctx, (DOWN, DOWN))
        for m, n in itertools.product(range(d), repeat=2):
            out[m, n] = normal_form(P[m, n] - trP * g[m, n] / d)
        return out
