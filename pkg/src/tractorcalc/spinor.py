"""Tractor spinors: weight-w pairs (psi, chi) of patch spinors, their
parallel transport, the weight-lowering operator and first-order pair
operator acting on them, the gauge matrix, and the scale projectors.

A SpinorField stores, per tractor/curved multi-index, one exact column of
size 2 * 2^floor(d/2) (top half = the weight w+1/2 slot, bottom half the
weight w-1/2 slot).  All matrix entries are Gaussian-rational expressions;
sqrt(2) stays symbolic and collapses under squaring automatically.
"""

from __future__ import annotations

import itertools

import sympy as sp

from .clifford import SQRT2, CliffordRep
from .geometry import GeometryError, _norm
from .tensor import DOWN, UP
from .tractor import CURVED, TRACTOR, TractorBundle
from .weyl import ScaleField, WeylFactor

__all__ = ["SpinorField", "SpinorBundle", "spinor_gauge_U"]


class SpinorBundle:
    """Clifford data attached to a geometry's tractor bundle."""

    def __init__(self, geo, rep: CliffordRep | None = None):
        self.geo = geo
        self.tb = TractorBundle(geo)
        self.ctx = geo.ctx
        self.d = geo.dim
        self.n = geo.dim + 2
        self.rep = rep if rep is not None else CliffordRep(self.d, self.ctx.signature)
        if tuple(self.rep.signature) != tuple(self.ctx.signature):
            raise ValueError("Clifford signature does not match the patch")
        self.size = self.rep.dim_tractor_spinor

    # -- frame conversions ---------------------------------------------------

    def gamma_curved(self, mu):
        """gamma_mu = e_mu^m eta_mn gamma^n (d-dimensional block)."""
        E = self.geo.vielbein
        eta = self.geo.flat_metric
        g = sp.zeros(self.rep.dim_spinor, self.rep.dim_spinor)
        for m in range(self.d):
            for k in range(self.d):
                if E[mu, m] != 0 and eta[m, k] != 0:
                    g += E[mu, m] * eta[m, k] * self.rep.gammas[k]
        return g

    def schouten_slash(self, mu):
        """P-slash_mu = gamma^n P_{mu n} (frame-contracted)."""
        Einv = self.geo.inverse_vielbein
        P = self.geo.schouten
        vec = [
            sum(P[mu, nu] * Einv[m, nu] for nu in range(self.d))
            for m in range(self.d)
        ]
        return self.rep.gamma_slash(vec)

    def nabla_spinor_matrix(self, mu):
        """(1/4) omega_mu^{mn} gamma_{mn} acting on a d-spinor block."""
        om = self.geo.spin_connection_upper
        eta = self.geo.flat_metric
        s = self.rep.dim_spinor
        out = sp.zeros(s, s)
        def gamma_low(m):
            acc = sp.zeros(s, s)
            for r in range(self.d):
                if eta[m, r] != 0:
                    acc += eta[m, r] * self.rep.gammas[r]
            return acc

        for m, nn in itertools.product(range(self.d), repeat=2):
            c = om[mu][m][nn]
            if c == 0:
                continue
            gm, gn = gamma_low(m), gamma_low(nn)
            out += c * (gm * gn - gn * gm) / 8
        return out

    # -- operators on spinor fields -------------------------------------------

    def covariant_derivative(self, S: "SpinorField"):
        """Parallel transport; new curved lower index first."""
        d = self.d
        coords = self.ctx.coords
        mats = self.tb.connection_matrices()
        Gam = self.geo.christoffel
        szero = sp.zeros(self.rep.dim_spinor, self.rep.dim_spinor)
        out = SpinorField(self, [(CURVED, DOWN)] + list(S.index_spec), weight=S.weight)
        # per-mu spinor mixing blocks
        blocks = []
        for mu in range(d):
            nab = self.nabla_spinor_matrix(mu)
            top = sp.Matrix(
                sp.BlockMatrix([[nab, self.gamma_curved(mu) / SQRT2], [-self.schouten_slash(mu) / SQRT2, nab]])
            )
            blocks.append(top)
        for full in out.indices():
            mu, rest = full[0], full[1:]
            col = S[rest].applyfunc(lambda e: sp.diff(e, coords[mu]))
            col = col + blocks[mu] * S[rest]
            for slot, (kind, var) in enumerate(S.index_spec):
                a = rest[slot]
                if kind == TRACTOR:
                    A = mats[mu]
                    for b in range(self.n):
                        coeff = A[a, b] if var == UP else -A[b, a]
                        if coeff != 0:
                            col = col + coeff * S[rest[:slot] + (b,) + rest[slot + 1 :]]
                else:
                    for b in range(d):
                        coeff = Gam[a, mu, b] if var == UP else -Gam[b, mu, a]
                        if coeff != 0:
                            col = col + coeff * S[rest[:slot] + (b,) + rest[slot + 1 :]]
            out[full] = col
        return out

    def derivative_frame_upper(self, S: "SpinorField"):
        DS = self.covariant_derivative(S)
        Einv = self.geo.inverse_vielbein
        eta_inv = self.geo.flat_metric.inv()
        out = SpinorField(self, [("f", UP)] + list(S.index_spec), weight=S.weight)
        for full in out.indices():
            m, rest = full[0], full[1:]
            col = sp.zeros(self.size, 1)
            for r in range(self.d):
                if eta_inv[m, r] == 0:
                    continue
                for mu in range(self.d):
                    if Einv[r, mu] != 0:
                        col = col + eta_inv[m, r] * Einv[r, mu] * DS[(mu,) + rest]
            out[full] = col
        return out

    def laplacian(self, S: "SpinorField"):
        DS = self.covariant_derivative(S)
        DDS = self.covariant_derivative(DS)
        ginv = self.geo.inverse
        out = SpinorField(self, list(S.index_spec), weight=S.weight)
        for rest in out.indices():
            col = sp.zeros(self.size, 1)
            for mu, nu in itertools.product(range(self.d), repeat=2):
                if ginv[mu, nu] != 0:
                    col = col + ginv[mu, nu] * DDS[(mu, nu) + rest]
            out[rest] = col
        return out

    def thomas_D(self, S: "SpinorField"):
        """Same slot structure as on tensors, with the tractor weight w."""
        d, n = self.d, self.n
        w = S.weight
        P = self.geo.schouten_trace
        pre = d + 2 * w - 2
        Dm = self.derivative_frame_upper(S)
        box = self.laplacian(S)
        out = SpinorField(self, [(TRACTOR, UP)] + list(S.index_spec), weight=w - 1)
        for full in out.indices():
            M, rest = full[0], full[1:]
            if M == 0:
                out[full] = pre * w * S[rest]
            elif M == n - 1:
                out[full] = -(box[rest] + w * P * S[rest])
            else:
                out[full] = pre * Dm[(M - 1,) + rest]
        return out

    def double_D(self, S: "SpinorField"):
        d, n = self.d, self.n
        w = S.weight
        Dm = self.derivative_frame_upper(S)
        out = SpinorField(
            self, [(TRACTOR, UP), (TRACTOR, UP)] + list(S.index_spec), weight=w
        )
        for rest in S.indices():
            out[(0, n - 1) + rest] = w * S[rest]
            out[(n - 1, 0) + rest] = -w * S[rest]
            for m in range(d):
                out[(1 + m, n - 1) + rest] = Dm[(m,) + rest]
                out[(n - 1, 1 + m) + rest] = -Dm[(m,) + rest]
        return out

    def gamma_dot_thomas(self, S: "SpinorField"):
        """Gamma.D: contract the new operator slot with Gamma_M."""
        DS = self.thomas_D(S)
        return self.gamma_contract(DS, 0)

    def gamma_contract(self, S: "SpinorField", slot):
        """Multiply by Gamma_M and contract away tractor slot `slot`."""
        kind, var = S.index_spec[slot]
        if kind != TRACTOR:
            raise ValueError("gamma contraction needs a tractor slot")
        eta = self.tb.eta()
        spec = [s for i, s in enumerate(S.index_spec) if i != slot]
        out = SpinorField(self, spec, weight=S.weight)
        for idx in out.indices():
            col = sp.zeros(self.size, 1)
            for M in range(self.n):
                full = list(idx)
                full.insert(slot, M)
                if var == UP:
                    # Gamma_M T^M = eta_{MN} Gamma^N T^M
                    GM_low = sp.zeros(self.size, self.size)
                    for N in range(self.n):
                        if eta[M, N] != 0:
                            GM_low += eta[M, N] * self.rep.Gammas[N]
                    col = col + GM_low * S[tuple(full)]
                else:
                    col = col + self.rep.Gammas[M] * S[tuple(full)]
            out[idx] = col
        return out

    def x_slash(self):
        X = [sp.Integer(0)] * (self.n - 1) + [sp.Integer(1)]
        return self.rep.gamma_slash_ambient(X)

    def i_slash(self, scale: ScaleField):
        I = self.tb.scale_tractor(scale)
        return self.rep.gamma_slash_ambient([I[(M,)] for M in range(self.n)]).applyfunc(
            _norm
        )

    def scale_projectors(self, scale: ScaleField):
        """Pi_pm = (1 +- Gamma.I / sqrt(I.I)) / 2; needs I.I nonzero."""
        I = self.tb.scale_tractor(scale)
        II = _norm(self.tb.dot(I, I).comps[0])
        if II == 0:
            raise GeometryError("scale projectors undefined: the scale tractor is null")
        root = sp.sqrt(II)
        Gi = self.i_slash(scale)
        one = sp.eye(self.size)
        Pp = (one + Gi / root) / 2
        Pm = (one - Gi / root) / 2
        return Pp.applyfunc(_norm), Pm.applyfunc(_norm)


class SpinorField:
    """Spinor-valued tractor/curved multi-index field (dense columns)."""

    __slots__ = ("bundle", "index_spec", "cols", "weight")

    def __init__(self, bundle: SpinorBundle, index_spec, weight=0, cols=None):
        self.bundle = bundle
        self.index_spec = [tuple(s) for s in index_spec]
        self.weight = sp.sympify(weight)
        total = 1
        for size in self._sizes():
            total *= size
        if cols is None:
            cols = [sp.zeros(bundle.size, 1) for _ in range(total)]
        self.cols = cols

    def _sizes(self):
        out = []
        for kind, _ in self.index_spec:
            out.append(self.bundle.n if kind == TRACTOR else self.bundle.d)
        return out

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
        return self.cols[self._flat(idx)]

    def __setitem__(self, idx, value):
        if not isinstance(idx, tuple):
            idx = (idx,)
        self.cols[self._flat(idx)] = sp.Matrix(value)

    def indices(self):
        return itertools.product(*[range(s) for s in self._sizes()])

    def map_entries(self, fn):
        out = SpinorField(self.bundle, list(self.index_spec), weight=self.weight)
        out.cols = [c.applyfunc(fn) for c in self.cols]
        return out

    def matmul(self, mat):
        """Apply a constant spinor-space matrix to every column."""
        out = SpinorField(self.bundle, list(self.index_spec), weight=self.weight)
        out.cols = [mat * c for c in self.cols]
        return out

    def with_weight(self, w):
        out = SpinorField(self.bundle, list(self.index_spec), weight=w)
        out.cols = [sp.Matrix(c) for c in self.cols]
        return out

    def scale_by(self, expr, dweight=0):
        expr = sp.sympify(expr)
        out = SpinorField(
            self.bundle, list(self.index_spec), weight=self.weight + dweight
        )
        out.cols = [c * expr for c in self.cols]
        return out

    def __add__(self, other):
        out = SpinorField(self.bundle, list(self.index_spec), weight=self.weight)
        out.cols = [a + b for a, b in zip(self.cols, other.cols)]
        return out

    def __sub__(self, other):
        out = SpinorField(self.bundle, list(self.index_spec), weight=self.weight)
        out.cols = [a - b for a, b in zip(self.cols, other.cols)]
        return out

    def __mul__(self, scalar):
        return self.scale_by(scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def residual_entries(self):
        out = []
        for c in self.cols:
            out.extend(list(c))
        return out

    @classmethod
    def generic(cls, bundle, index_spec, name, weight):
        out = cls(bundle, index_spec, weight=weight)
        coords = bundle.ctx.coords
        for idx in out.indices():
            suffix = "".join(str(i) for i in idx)
            col = sp.Matrix(
                [
                    sp.Function(f"{name}{suffix}_{k}")(*coords)
                    for k in range(bundle.size)
                ]
            )
            out[idx] = col
        return out

    @classmethod
    def from_halves(cls, bundle, psi, chi, weight):
        """Rank-0 tractor spinor from its two d-spinor halves."""
        out = cls(bundle, [], weight=weight)
        out[()] = sp.Matrix(list(psi) + list(chi))
        return out

    def top_half(self, idx=()):
        s = self.bundle.rep.dim_spinor
        return self[idx][:s, 0]

    def bottom_half(self, idx=()):
        s = self.bundle.rep.dim_spinor
        return self[idx][s:, 0]


def spinor_gauge_U(weyl: WeylFactor, geo, rep: CliffordRep | None = None):
    """Block gauge matrix ((sqrt(Om), 0), (-Ups-slash/sqrt(2 Om), 1/sqrt(Om)))."""
    sb = SpinorBundle(geo, rep)
    d = geo.dim
    ups = weyl.upsilon()
    Einv = geo.inverse_vielbein
    vec = [
        _norm(sum(Einv[m, mu] * ups[mu] for mu in range(d))) for m in range(d)
    ]
    ups_slash = sb.rep.gamma_slash(vec)
    om = weyl.omega
    s = sb.rep.dim_spinor
    top = sp.sqrt(om) * sp.eye(s)
    bottom_left = -ups_slash / (SQRT2 * sp.sqrt(om))
    bottom_right = sp.eye(s) / sp.sqrt(om)
    return sp.Matrix(
        sp.BlockMatrix([[top, sp.zeros(s, s)], [bottom_left, bottom_right]])
    )
