"""Component tensor fields on a coordinate patch.

Dense storage: a rank-r field over a d-dimensional patch holds d**r scalar
expressions (at d <= 8, r <= 4 that is at most 4096 entries, and identity
verification, not storage, dominates runtime).  Index variance is tracked per
slot (+1 upper / -1 lower); Weyl weights are carried as advisory metadata
here, with transformation behaviour owned by the weyl module.

The second half of the module implements the operator algebra on fully
symmetric tensors (count, trace, metric, divergence, gradient, Lichnerowicz
wave operator) used by the spin-two and higher-spin systems.
"""

from __future__ import annotations

import itertools

import sympy as sp

from .scalar import normal_form

__all__ = ["TensorField", "SymmetricTensorAlgebra"]

UP = 1
DOWN = -1


class TensorField:
    """Dense multi-index array of scalar expressions with per-index variance."""

    __slots__ = ("ctx", "variance", "comps", "weight")

    def __init__(self, ctx, variance, comps=None, weight=0, fill=0):
        self.ctx = ctx
        self.variance = tuple(variance)
        n = ctx.dim ** len(self.variance)
        if comps is None:
            comps = [sp.sympify(fill)] * n
        else:
            comps = [sp.sympify(c) for c in comps]
            if len(comps) != n:
                raise ValueError("component count does not match rank")
        self.comps = comps
        self.weight = sp.sympify(weight)

    # -- basic structure ----------------------------------------------------

    @property
    def rank(self):
        return len(self.variance)

    def _flat(self, idx):
        d = self.ctx.dim
        if len(idx) != self.rank:
            raise IndexError(f"expected {self.rank} indices, got {len(idx)}")
        flat = 0
        for i in idx:
            if not 0 <= i < d:
                raise IndexError("index out of range")
            flat = flat * d + i
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
        return itertools.product(range(self.ctx.dim), repeat=self.rank)

    def copy(self):
        t = TensorField(self.ctx, self.variance, weight=self.weight)
        t.comps = list(self.comps)
        return t

    def map(self, fn):
        t = TensorField(self.ctx, self.variance, weight=self.weight)
        t.comps = [fn(c) for c in self.comps]
        return t

    def normalized(self):
        return self.map(normal_form)

    def scalar(self):
        if self.rank != 0:
            raise ValueError("not a rank-0 field")
        return self.comps[0]

    @classmethod
    def from_scalar(cls, ctx, expr, weight=0):
        return cls(ctx, (), [sp.sympify(expr)], weight=weight)

    @classmethod
    def from_function(cls, ctx, variance, name, weight=0, symmetric=False):
        """A generic field whose components are undefined functions of the patch."""
        t = cls(ctx, variance, weight=weight)
        for idx in t.indices():
            key = tuple(sorted(idx)) if symmetric else idx
            label = name + ("_" + "".join(str(i) for i in key) if key else "")
            t[idx] = sp.Function(label)(*ctx.coords)
        return t

    # -- algebra ------------------------------------------------------------

    def _check_compatible(self, other):
        if self.ctx is not other.ctx and self.ctx.coords != other.ctx.coords:
            raise ValueError("tensors live on different patches")
        if self.variance != other.variance:
            raise ValueError("index structure mismatch")

    def __add__(self, other):
        self._check_compatible(other)
        t = TensorField(self.ctx, self.variance, weight=self.weight)
        t.comps = [a + b for a, b in zip(self.comps, other.comps)]
        return t

    def __sub__(self, other):
        self._check_compatible(other)
        t = TensorField(self.ctx, self.variance, weight=self.weight)
        t.comps = [a - b for a, b in zip(self.comps, other.comps)]
        return t

    def __mul__(self, scalar):
        scalar = sp.sympify(scalar)
        t = TensorField(self.ctx, self.variance, weight=self.weight)
        t.comps = [scalar * c for c in self.comps]
        return t

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def outer(self, other, weight=None):
        if weight is None:
            weight = self.weight + other.weight
        t = TensorField(self.ctx, self.variance + other.variance, weight=weight)
        t.comps = [a * b for a in self.comps for b in other.comps]
        return t

    def contract(self, slot_a, slot_b, metric=None):
        """Contract two slots.  Opposite variance contracts directly; same
        variance requires the metric (g for lower/lower, its inverse for
        upper/upper), and the weight picks up the metric factor's weight
        (+2 for g, -2 for g inverse)."""
        if slot_a == slot_b:
            raise ValueError("cannot contract a slot with itself")
        if not (0 <= slot_a < self.rank and 0 <= slot_b < self.rank):
            raise ValueError("slot out of range")
        a, b = sorted((slot_a, slot_b))
        va, vb = self.variance[a], self.variance[b]
        d = self.ctx.dim
        weight = self.weight
        gmat = None
        if va != vb:
            pass
        elif metric is None:
            raise ValueError("same-variance contraction requires a metric")
        else:
            if va == DOWN:
                gmat = metric.inverse_metric
                weight = weight + metric.inverse_metric_weight
            else:
                gmat = metric.metric_tensor
                weight = weight + metric.metric_weight
        new_var = tuple(v for k, v in enumerate(self.variance) if k not in (a, b))
        out = TensorField(self.ctx, new_var, weight=weight)
        for idx in out.indices():
            total = sp.Integer(0)
            for r in range(d):
                for s in range(d):
                    if gmat is None and r != s:
                        continue
                    full = list(idx)
                    full.insert(a, r)
                    full.insert(b, s)
                    term = self[tuple(full)]
                    if gmat is not None:
                        term = term * gmat[r, s]
                    total += term
            out[idx] = total
        return out

    def swap(self, slot_a, slot_b):
        perm = list(range(self.rank))
        perm[slot_a], perm[slot_b] = perm[slot_b], perm[slot_a]
        return self.permuted(perm)

    def permuted(self, perm):
        var = tuple(self.variance[p] for p in perm)
        t = TensorField(self.ctx, var, weight=self.weight)
        for idx in t.indices():
            src = [0] * self.rank
            for new_pos, old_pos in enumerate(perm):
                src[old_pos] = idx[new_pos]
            t[idx] = self[tuple(src)]
        return t

    def symmetrized(self, slots=None):
        return self._sym(slots, antisym=False)

    def antisymmetrized(self, slots=None):
        return self._sym(slots, antisym=True)

    def _sym(self, slots, antisym):
        slots = tuple(range(self.rank)) if slots is None else tuple(slots)
        if any(self.variance[s] != self.variance[slots[0]] for s in slots):
            raise ValueError("can only (anti)symmetrize same-variance slots")
        perms = list(itertools.permutations(slots))
        t = TensorField(self.ctx, self.variance, weight=self.weight)
        for idx in t.indices():
            total = sp.Integer(0)
            for perm in perms:
                sign = 1
                if antisym:
                    sign = sp.combinatorics.Permutation(
                        [slots.index(p) for p in perm]
                    ).signature()
                src = list(idx)
                for target_slot, source_slot in zip(slots, perm):
                    src[target_slot] = idx[source_slot]
                total += sign * self[tuple(src)]
            t[idx] = total / len(perms)
        return t

    def is_zero_quick(self):
        """Cheap structural zero test (expand-level); not a decision procedure."""
        return all(sp.expand(c.doit()) == 0 for c in self.comps)


# ---------------------------------------------------------------------------
# Symmetric tensor operator algebra.
# ---------------------------------------------------------------------------


class SymmetricTensorAlgebra:
    """Operators on fully symmetric lower-index tensors over a constant
    curvature background: N (index count), tr, g, c, div, grad, and the
    Lichnerowicz wave operator box = Delta + (2 P / d) c.

    Normalizations: tr includes the s(s-1) factor, div the factor s, and g
    and grad denote plain symmetrized products (the conventions under which
    [tr, g] = 4 N + 2 d and [tr, grad] = 2 div hold).
    """

    def __init__(self, geo, check_background=True):
        self.geo = geo
        self.ctx = geo.ctx
        if check_background and not geo.is_constant_curvature():
            raise ValueError(
                "symmetric-algebra operators require a constant curvature background"
            )

    def _require_symmetric_lower(self, t):
        if any(v != DOWN for v in t.variance):
            raise ValueError("expected a fully lower-index symmetric tensor")

    def count(self, t):
        return t * t.rank

    def trace(self, t):
        self._require_symmetric_lower(t)
        s = t.rank
        if s < 2:
            return TensorField(self.ctx, (), weight=t.weight)
        contracted = t.contract(0, 1, metric=self.geo)
        return contracted * (s * (s - 1))

    def metric_op(self, t):
        self._require_symmetric_lower(t)
        g = self.geo.metric_tensor_field()
        return g.outer(t).symmetrized()

    def casimir(self, t):
        s = t.rank
        return self.metric_op(self.trace(t)) - t * (s * (s + self.ctx.dim - 2))

    def divergence(self, t):
        self._require_symmetric_lower(t)
        s = t.rank
        if s < 1:
            return TensorField(self.ctx, (), weight=t.weight)
        dt = self.geo.covariant_derivative(t)  # index order (mu, a1..as)
        return dt.contract(0, 1, metric=self.geo) * s

    def gradient(self, t):
        self._require_symmetric_lower(t)
        return self.geo.covariant_derivative(t).symmetrized()

    def laplacian(self, t):
        dt = self.geo.covariant_derivative(t)
        ddt = self.geo.covariant_derivative(dt)
        return ddt.contract(0, 1, metric=self.geo)

    def box(self, t):
        P = self.geo.schouten_trace
        return self.laplacian(t) + sp.Rational(2, 1) * P / self.ctx.dim * self.casimir(t)

    def apply(self, op_name, t):
        ops = {
            "N": self.count,
            "tr": self.trace,
            "g": self.metric_op,
            "c": self.casimir,
            "div": self.divergence,
            "grad": self.gradient,
            "box": self.box,
        }
        if op_name not in ops:
            raise ValueError(f"unknown symmetric-algebra operator {op_name!r}")
        return ops[op_name](t)
