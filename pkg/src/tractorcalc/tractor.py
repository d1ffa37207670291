"""Tractor core: parallel multiplets over a conformal patch.

A tractor index runs over d+2 slots ordered (+, frame m = 0..d-1, -); middle
components carry frame (vielbein) indices so the component tables can be
compared literally.  The parallel metric is block off-diagonal with the flat
frame metric as its core.  Implemented here:

 - TractorBundle: per-geometry data (metric, canonical tractors, connection
   coefficient matrices, gauge matrices),
 - TractorField: dense multiplets of any tractor/curved rank with exact
   scalar components and a (possibly symbolic) weight,
 - the connection, its curvature, the weight-lowering second-order operator
   (top/middle/bottom = ((d+2w-2)w, (d+2w-2) D^m, -(D.D + w P))), the
   antisymmetric first-order pair operator, the scale tractor, and the
   identity ledger run by `identity_suite`.
"""

from __future__ import annotations

import itertools

import sympy as sp

from .geometry import Geometry, GeometryError, _norm
from .report import CheckRecord, Report, status_of
from .scalar import decide_zero
from .tensor import DOWN, UP, TensorField
from .weyl import ScaleField, WeylFactor

__all__ = [
    "TractorBundle",
    "TractorField",
    "gauge_U",
]

TRACTOR = "t"
CURVED = "c"


class TractorBundle:
    """Geometry-attached tractor data, memoized on the geometry's cache."""

    def __init__(self, geo: Geometry):
        self.geo = geo
        self.ctx = geo.ctx
        self.d = geo.dim
        self.n = geo.dim + 2

    # -- metric and canonical tractors -----------------------------------

    def eta(self):
        key = "_tractor_eta"
        if key not in self.geo._cache:
            d, n = self.d, self.n
            eta = sp.zeros(n, n)
            eta[0, n - 1] = 1
            eta[n - 1, 0] = 1
            flat = self.geo.flat_metric
            for m in range(d):
                for k in range(d):
                    eta[1 + m, 1 + k] = flat[m, k]
            self.geo._cache[key] = sp.ImmutableMatrix(eta)
        return self.geo._cache[key]

    def eta_inv(self):
        # light-cone+flat block form is involutive
        return self.eta()

    def canonical_X(self):
        """The weight-one null tractor projecting onto top slots."""
        X = TractorField(self, [(TRACTOR, UP)], weight=1)
        X[(self.n - 1,)] = sp.Integer(1)
        return X

    def Y_tractor(self, scale: ScaleField):
        """Null complement of X built from the scale tractor; X.Y = 1."""
        I = self.scale_tractor(scale)
        X = self.canonical_X()
        XI = self.dot(X, I).comps[0]
        II = self.dot(I, I).comps[0]
        Y = (I - (II / (2 * XI)) * X) * (1 / XI)
        Y.weight = sp.Integer(-1)
        return Y.map(_norm)

    def middle_projector(self, scale: ScaleField):
        """eta - X Y - Y X as a rank-2 tractor field (idempotent, trace d)."""
        X = self.canonical_X()
        Y = self.Y_tractor(scale)
        eta = self.eta_inv()
        out = TractorField(self, [(TRACTOR, UP), (TRACTOR, UP)], weight=0)
        for M, N in itertools.product(range(self.n), repeat=2):
            out[M, N] = _norm(eta[M, N] - X[(M,)] * Y[(N,)] - Y[(M,)] * X[(N,)])
        return out

    # -- connection -------------------------------------------------------

    def connection_matrices(self):
        """Per-coordinate (d+2)x(d+2) connection coefficients acting on an
        upper tractor index: rows/cols ordered (+, m, -)."""
        key = "_tractor_connection"
        if key not in self.geo._cache:
            geo = self.geo
            d, n = self.d, self.n
            E = geo.vielbein
            Einv = geo.inverse_vielbein
            eta = geo.flat_metric
            Pf = geo.frame_schouten()  # P_mu^m (frame index up)
            om = geo.spin_connection  # om_mu^m_n
            mats = []
            for mu in range(d):
                A = sp.zeros(n, n)
                for m in range(d):
                    A[0, 1 + m] = -sum(E[mu, r] * eta[r, m] for r in range(d))
                    A[1 + m, 0] = Pf[mu][m]
                    A[1 + m, n - 1] = E[mu, m]
                    # P_{mu m} with the second index frame-down
                    A[n - 1, 1 + m] = -sum(
                        geo.schouten[mu, nu] * Einv[m, nu] for nu in range(d)
                    )
                    for k in range(d):
                        A[1 + m, 1 + k] = om[mu][m][k]
                mats.append(A.applyfunc(_norm))
            self.geo._cache[key] = mats
        return self.geo._cache[key]

    # -- scale tractor ------------------------------------------------------

    def scale_tractor(self, scale: ScaleField):
        sig = TractorField(self, [], weight=1, comps=[scale.sigma])
        I = self.thomas_D(sig) * sp.Rational(1, self.d)
        I.weight = sp.Integer(0)
        return I.map(_norm)

    # -- operators ----------------------------------------------------------

    def covariant_derivative(self, T: "TractorField"):
        """The parallel-transport derivative; new curved lower index first."""
        geo = self.geo
        d = self.d
        coords = self.ctx.coords
        mats = self.connection_matrices()
        Gam = geo.christoffel
        out = TractorField(self, [(CURVED, DOWN)] + list(T.index_spec), weight=T.weight)
        for full in out.indices():
            mu, rest = full[0], full[1:]
            expr = sp.diff(T[rest], coords[mu])
            for slot, (kind, var) in enumerate(T.index_spec):
                a = rest[slot]
                if kind == TRACTOR:
                    A = mats[mu]
                    for b in range(self.n):
                        if var == UP:
                            if A[a, b] != 0:
                                expr += A[a, b] * T[rest[:slot] + (b,) + rest[slot + 1 :]]
                        else:
                            if A[b, a] != 0:
                                expr -= A[b, a] * T[rest[:slot] + (b,) + rest[slot + 1 :]]
                else:
                    for b in range(d):
                        if var == UP:
                            if Gam[a, mu, b] != 0:
                                expr += Gam[a, mu, b] * T[rest[:slot] + (b,) + rest[slot + 1 :]]
                        else:
                            if Gam[b, mu, a] != 0:
                                expr -= Gam[b, mu, a] * T[rest[:slot] + (b,) + rest[slot + 1 :]]
            out[full] = expr
        return out

    def derivative_frame_upper(self, T: "TractorField", DT=None):
        """D^m T: the covariant derivative with its index converted to an
        upper frame index (eta^{mr} e^mu_r D_mu)."""
        geo = self.geo
        d = self.d
        if DT is None:
            DT = self.covariant_derivative(T)
        Einv = geo.inverse_vielbein
        eta_inv = geo.flat_metric.inv()
        out = TractorField(self, list(T.index_spec), weight=T.weight, shape_extra=1)
        # shape_extra adds a leading frame index of size d
        for full in out.indices():
            m, rest = full[0], full[1:]
            expr = sp.Integer(0)
            for r in range(d):
                if eta_inv[m, r] == 0:
                    continue
                for mu in range(d):
                    if Einv[r, mu] != 0:
                        expr += eta_inv[m, r] * Einv[r, mu] * DT[(mu,) + rest]
            out[full] = expr
        return out

    def laplacian(self, T: "TractorField", DT=None):
        """D_nu D^nu with the curved pair contracted by the inverse metric."""
        if DT is None:
            DT = self.covariant_derivative(T)
        DDT = self.covariant_derivative(DT)
        ginv = self.geo.inverse
        d = self.d
        out = TractorField(self, list(T.index_spec), weight=T.weight)
        for rest in out.indices():
            expr = sp.Integer(0)
            for mu, nu in itertools.product(range(d), repeat=2):
                if ginv[mu, nu] != 0:
                    expr += ginv[mu, nu] * DDT[(mu, nu) + rest]
            out[rest] = expr
        return out

    def thomas_D(self, T: "TractorField"):
        """Weight-lowering operator; new upper tractor index first, w -> w-1."""
        d, n = self.d, self.n
        w = T.weight
        P = self.geo.schouten_trace
        pre = d + 2 * w - 2
        DT = self.covariant_derivative(T)
        Dm = self.derivative_frame_upper(T, DT=DT)
        box = self.laplacian(T, DT=DT)
        out = TractorField(
            self, [(TRACTOR, UP)] + list(T.index_spec), weight=w - 1
        )
        for full in out.indices():
            M, rest = full[0], full[1:]
            if M == 0:
                out[full] = pre * w * T[rest]
            elif M == n - 1:
                out[full] = -(box[rest] + w * P * T[rest])
            else:
                out[full] = pre * Dm[(M - 1,) + rest]
        return out

    def double_D(self, T: "TractorField"):
        """First-order antisymmetric pair operator; adds an upper tractor
        index pair (M, N) in front, weight unchanged.  Matrix form
        ((0,0,w),(0,0,D^m),(-w,-D^n,0)) in the (+, m, -) slot order."""
        d, n = self.d, self.n
        w = T.weight
        Dm = self.derivative_frame_upper(T)
        out = TractorField(
            self, [(TRACTOR, UP), (TRACTOR, UP)] + list(T.index_spec), weight=w
        )
        for rest in T.indices():
            out[(0, n - 1) + rest] = w * T[rest]
            out[(n - 1, 0) + rest] = -w * T[rest]
            for m in range(d):
                out[(1 + m, n - 1) + rest] = Dm[(m,) + rest]
                out[(n - 1, 1 + m) + rest] = -Dm[(m,) + rest]
        return out

    def curvature_block(self):
        """The connection curvature assembled from the geometry's conformal
        tensors: F_{mu nu}^M_N with the curl of rho in the middle column and
        the conformal curvature in the core."""
        geo = self.geo
        d, n = self.d, self.n
        if d < 3:
            raise GeometryError("tractor curvature needs d >= 3")
        C = geo.cotton  # C_{mu nu rho} all curved
        W = geo.weyl_tensor if d >= 4 else None
        E, Einv = geo.vielbein, geo.inverse_vielbein
        eta = geo.flat_metric
        eta_inv = eta.inv()
        ginv = geo.inverse
        out = {}
        for mu, nu in itertools.combinations(range(d), 2):
            F = sp.zeros(n, n)
            for m in range(d):
                # C_{mu nu}^m (frame up) and C_{mu nu m} (frame down)
                cm_up = sum(
                    C[mu, nu, rho] * ginv[rho, lam] * E[lam, m]
                    for rho, lam in itertools.product(range(d), repeat=2)
                )
                F[1 + m, 0] = _norm(cm_up)
                F[n - 1, 1 + m] = _norm(
                    -sum(C[mu, nu, rho] * Einv[m, rho] for rho in range(d))
                )
            if W is not None:
                # endomorphism core W_{mu nu}^m_k in two contraction stages
                half = [
                    [
                        sum(
                            W[a, b, mu, nu] * ginv[a, aa] * E[aa, m]
                            for a, aa in itertools.product(range(d), repeat=2)
                        )
                        for b in range(d)
                    ]
                    for m in range(d)
                ]
                for m in range(d):
                    for k in range(d):
                        F[1 + m, 1 + k] = _norm(
                            sum(half[m][b] * Einv[k, b] for b in range(d))
                        )
            out[(mu, nu)] = F
        return out

    def curvature_commutator(self, T: "TractorField"):
        """[D_mu, D_nu] T for a pure tractor field (no curved indices)."""
        DT = self.covariant_derivative(T)
        DDT = self.covariant_derivative(DT)
        d = self.d
        out = TractorField(
            self,
            [(CURVED, DOWN), (CURVED, DOWN)] + list(T.index_spec),
            weight=T.weight,
        )
        for full in out.indices():
            mu, nu, rest = full[0], full[1], full[2:]
            out[full] = DDT[(mu, nu) + rest] - DDT[(nu, mu) + rest]
        return out

    # -- contractions -----------------------------------------------------

    def lower_tractor(self, T: "TractorField", slot):
        """Lower an upper tractor index with the parallel metric."""
        kind, var = T.index_spec[slot]
        if kind != TRACTOR or var != UP:
            raise ValueError("slot is not an upper tractor index")
        eta = self.eta()
        out = TractorField(self, list(T.index_spec), weight=T.weight)
        out.index_spec[slot] = (TRACTOR, DOWN)
        for full in out.indices():
            expr = sp.Integer(0)
            for b in range(self.n):
                if eta[full[slot], b] != 0:
                    expr += eta[full[slot], b] * T[full[:slot] + (b,) + full[slot + 1 :]]
            out[full] = expr
        return out

    def raise_tractor(self, T: "TractorField", slot):
        kind, var = T.index_spec[slot]
        if kind != TRACTOR or var != DOWN:
            raise ValueError("slot is not a lower tractor index")
        out = self.lower_tractor(
            TractorField(self, [(TRACTOR, UP) if i == slot else s for i, s in enumerate(T.index_spec)], weight=T.weight, comps=list(T.comps)),
            slot,
        )
        out.index_spec[slot] = (TRACTOR, UP)
        return out

    def contract_tractor(self, T: "TractorField", slot_a, slot_b):
        """Contract two tractor slots (metric inserted if same variance)."""
        ka, va = T.index_spec[slot_a]
        kb, vb = T.index_spec[slot_b]
        if ka != TRACTOR or kb != TRACTOR:
            raise ValueError("both slots must be tractor indices")
        work = T
        if va == vb:
            work = self.lower_tractor(T, slot_a) if va == UP else self.raise_tractor(T, slot_a)
        a, b = sorted((slot_a, slot_b))
        spec = [s for i, s in enumerate(work.index_spec) if i not in (a, b)]
        out = TractorField(self, spec, weight=work.weight)
        for idx in out.indices():
            expr = sp.Integer(0)
            for r in range(self.n):
                full = list(idx)
                full.insert(a, r)
                full.insert(b, r)
                expr += work[tuple(full)]
            out[idx] = expr
        return out

    def dot(self, A: "TractorField", B: "TractorField", slot_a=0, slot_b=0):
        """eta-contraction of one slot of A with one slot of B."""
        prod = A.outer(B)
        return self.contract_tractor(prod, slot_a, len(A.index_spec) + slot_b)

    def contract_curved(self, T: "TractorField", slot_a, slot_b):
        ka, va = T.index_spec[slot_a]
        kb, vb = T.index_spec[slot_b]
        if ka != CURVED or kb != CURVED:
            raise ValueError("both slots must be curved indices")
        gmat = None
        if va == vb:
            gmat = self.geo.inverse if va == DOWN else self.geo.metric
        a, b = sorted((slot_a, slot_b))
        spec = [s for i, s in enumerate(T.index_spec) if i not in (a, b)]
        out = TractorField(self, spec, weight=T.weight)
        d = self.d
        for idx in out.indices():
            expr = sp.Integer(0)
            for r in range(d):
                for s in range(d):
                    if gmat is None and r != s:
                        continue
                    full = list(idx)
                    full.insert(a, r)
                    full.insert(b, s)
                    term = T[tuple(full)]
                    if gmat is not None and term != 0:
                        term = term * gmat[r, s]
                    expr += term
            out[idx] = expr
        return out


class TractorField:
    """Dense tractor/curved multi-index field with exact components."""

    __slots__ = ("bundle", "index_spec", "comps", "weight")

    def __init__(self, bundle, index_spec, weight=0, comps=None, shape_extra=0):
        self.bundle = bundle
        spec = [tuple(s) for s in index_spec]
        if shape_extra:
            # leading frame index of size d (used by derivative_frame_upper)
            spec = [("f", UP)] * shape_extra + spec
        self.index_spec = spec
        self.weight = sp.sympify(weight)
        n = 1
        for size in self._sizes():
            n *= size
        if comps is None:
            comps = [sp.Integer(0)] * n
        else:
            comps = [sp.sympify(c) for c in comps]
            if len(comps) != n:
                raise ValueError("component count mismatch")
        self.comps = comps

    def _sizes(self):
        b = self.bundle
        out = []
        for kind, _ in self.index_spec:
            if kind == TRACTOR:
                out.append(b.n)
            elif kind == CURVED:
                out.append(b.d)
            else:  # frame
                out.append(b.d)
        return out

    @property
    def rank(self):
        return len(self.index_spec)

    def _flat(self, idx):
        sizes = self._sizes()
        if len(idx) != len(sizes):
            raise IndexError(f"expected {len(sizes)} indices, got {len(idx)}")
        flat = 0
        for i, size in zip(idx, sizes):
            if not 0 <= i < size:
                raise IndexError("index out of range")
            flat = flat * size + i
        return flat

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.comps[self._flat(idx)]

    def __setitem__(self, idx, value):
        if not isinstance(idx, tuple):
            idx = (idx,)
        self.comps[self._flat(idx)] = sp.sympify(value)

    def indices(self):
        return itertools.product(*[range(s) for s in self._sizes()])

    def map(self, fn):
        out = TractorField(self.bundle, list(self.index_spec), weight=self.weight)
        out.comps = [fn(c) for c in self.comps]
        return out

    def __add__(self, other):
        if [tuple(s) for s in self.index_spec] != [tuple(s) for s in other.index_spec]:
            raise ValueError("index structure mismatch")
        out = TractorField(self.bundle, list(self.index_spec), weight=self.weight)
        out.comps = [a + b for a, b in zip(self.comps, other.comps)]
        return out

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, scalar):
        scalar = sp.sympify(scalar)
        out = TractorField(self.bundle, list(self.index_spec), weight=self.weight)
        out.comps = [scalar * c for c in self.comps]
        return out

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def outer(self, other):
        out = TractorField(
            self.bundle,
            list(self.index_spec) + list(other.index_spec),
            weight=self.weight + other.weight,
        )
        out.comps = [a * b for a in self.comps for b in other.comps]
        return out

    def with_weight(self, w):
        out = TractorField(self.bundle, list(self.index_spec), weight=w)
        out.comps = list(self.comps)
        return out

    @classmethod
    def generic(cls, bundle, index_spec, name, weight):
        """Generic field: every component an undefined function of the patch."""
        out = cls(bundle, index_spec, weight=weight)
        coords = bundle.ctx.coords
        for idx in out.indices():
            label = name + ("_" + "".join(str(i) for i in idx) if idx else "")
            out[idx] = sp.Function(label)(*coords)
        return out

    @classmethod
    def generic_scalar(cls, bundle, name, weight):
        return cls.generic(bundle, [], name, weight)


def gauge_U(weyl: WeylFactor, geo: Geometry):
    """The parabolic gauge matrix in (+, m, -) slots.

    ((Omega, 0, 0), (Ups^m, delta, 0),
     (-Ups.Ups/(2 Omega), -Ups_n/Omega, 1/Omega)) with frame-index Ups."""
    d = geo.dim
    n = d + 2
    om = weyl.omega
    ups = weyl.upsilon()
    E, Einv = geo.vielbein, geo.inverse_vielbein
    eta_inv = geo.flat_metric.inv()
    ups_flat_dn = [
        _norm(sum(Einv[m, mu] * ups[mu] for mu in range(d))) for m in range(d)
    ]
    ups_flat_up = [
        _norm(sum(eta_inv[m, r] * ups_flat_dn[r] for r in range(d))) for m in range(d)
    ]
    ups2 = _norm(sum(ups_flat_up[m] * ups_flat_dn[m] for m in range(d)))
    U = sp.zeros(n, n)
    U[0, 0] = om
    for m in range(d):
        U[1 + m, 0] = ups_flat_up[m]
        U[1 + m, 1 + m] = 1
        U[n - 1, 1 + m] = -ups_flat_dn[m] / om
    U[n - 1, 0] = -ups2 / (2 * om)
    U[n - 1, n - 1] = 1 / om
    return U
