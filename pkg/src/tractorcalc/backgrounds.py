"""Standard metric patches used throughout tests and verification suites."""

from __future__ import annotations

import random

import sympy as sp

from .geometry import Geometry
from .scalar import PatchContext

__all__ = [
    "flat",
    "ads_poincare",
    "ds_flat_slicing",
    "sphere_stereographic",
    "sphere_round",
    "product_ds2_s2",
    "random_diagonal",
]

_COORD_POOL = ("t", "x", "y", "z", "u", "v", "p", "q")


def _coords(d, radial=None):
    if radial is None:
        return list(_COORD_POOL[:d])
    pool = [n for n in _COORD_POOL if n != radial]
    return pool[: d - 1] + [radial]


def flat(d, signature=None):
    """Minkowski (default) or Euclidean patch."""
    names = _coords(d)
    ctx = PatchContext(names, signature=signature)
    g = sp.diag(*[sp.Integer(s) for s in ctx.signature])
    return Geometry(ctx, g, name=f"flat{d}")


def ads_poincare(d):
    """Unit-radius Poincare patch: g = z^-2 eta with z > 0 (rho trace -d/2)."""
    names = _coords(d, radial="z")
    ctx = PatchContext(names, positive=("z",))
    z = ctx.coords[-1]
    g = sp.diag(*[sp.Integer(s) for s in ctx.signature]) / z**2
    return Geometry(ctx, g, name=f"ads{d}")


def ds_flat_slicing(d):
    """Unit de Sitter in flat slicing: -dt^2 + exp(2t) dx^2 (rho trace d/2)."""
    names = _coords(d)
    ctx = PatchContext(names)
    t = ctx.coords[0]
    entries = [sp.Integer(-1)] + [sp.exp(2 * t)] * (d - 1)
    return Geometry(ctx, sp.diag(*entries), name=f"ds{d}")


def sphere_stereographic(d, radius=1):
    """Round sphere in stereographic coordinates: the canonical conformally
    flat metric g = 4 r^4 / (r^2 + |x|^2)^2 delta (Euclidean signature)."""
    names = _coords(d)
    ctx = PatchContext(names, signature=(1,) * d)
    r2 = sum(c**2 for c in ctx.coords)
    conf = (2 * sp.Integer(radius) ** 2 / (sp.Integer(radius) ** 2 + r2)) ** 2
    g = sp.eye(d) * conf
    return Geometry(ctx, g, name=f"sphere{d}")


def sphere_round(d):
    """Unit round sphere in nested angular coordinates (trig entries)."""
    names = [f"a{i}" for i in range(d)]
    ctx = PatchContext(names, signature=(1,) * d)
    entries = [sp.Integer(1)]
    factor = sp.Integer(1)
    for i in range(1, d):
        factor = factor * sp.sin(ctx.coords[i - 1]) ** 2
        entries.append(factor)
    return Geometry(ctx, sp.diag(*entries), name=f"roundsphere{d}")


def product_ds2_s2(radius=2):
    """dS_2 x S_2 with unequal radii: Einstein fails, d = 4."""
    ctx = PatchContext(("t", "x", "p", "q"))
    t, x, p, q = ctx.coords
    r = sp.Integer(radius)
    g = sp.diag(-1, sp.exp(2 * t), r**2, r**2 * sp.sin(p) ** 2)
    return Geometry(ctx, g, name="ds2xs2")


def random_diagonal(d, seed=0, square_entries=True, signature=None):
    """Random diagonal polynomial metric.  With square_entries the diagonal is
    a perfect square times the signature, keeping the vielbein radical-free."""
    rng = random.Random(seed)
    names = _coords(d)
    ctx = PatchContext(names, signature=signature)
    entries = []
    curved_slots = max(2, d // 2)
    for i in range(d):
        if i >= curved_slots:
            entries.append(sp.Integer(ctx.signature[i]))
            continue
        a = sp.Rational(rng.randint(1, 3), rng.randint(3, 7))
        xa = ctx.coords[(i + 1) % d]
        base = 1 + a * xa
        factor = base**2 if square_entries else 1 + a * xa**2
        entries.append(sp.Integer(ctx.signature[i]) * factor)
    return Geometry(ctx, sp.diag(*entries), name=f"randdiag{d}-{seed}")
