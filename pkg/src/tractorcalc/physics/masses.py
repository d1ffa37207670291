"""Mass / weight calculators.

Conventions (`convention` argument):
  - "standard": the coefficient read off the canonical wave operator for
    that spin (Klein-Gordon for s = 0, the vector wave system for s = 1,
    the trace-shifted rank-two definition for s = 2, linear m for the
    fermions);
  - "laplacian": mu^2 defined as the plain wave-operator eigenvalue,
    valid for any integer spin s >= 0;
  - "gauge": the convention whose zero coincides with the appearance of a
    single-derivative gauge invariance, any integer spin.

All results are exact rational expressions in (rho trace P, dimension d,
weight w, spin s); d and w may be symbolic.
"""

from __future__ import annotations

import sympy as sp

__all__ = [
    "mass_from_weight",
    "bf_bound",
    "classify_weight",
    "residual_gauge_weights",
    "depth_mass",
    "CONVENTIONS",
]

HALF = sp.Rational(1, 2)
CONVENTIONS = ("standard", "laplacian", "gauge")


def _sym(x, default_name):
    if x is None:
        return sp.Symbol(default_name)
    return sp.sympify(x)


def _square_bracket(d, w, shift):
    return ((d - 1) * HALF + shift) ** 2 - (w + (d - 1) * HALF) ** 2


def mass_from_weight(spin, d=None, w=None, P=None, convention="standard"):
    """Exact m^2 (or linear m for half-integer spin) as a function of the
    weight.  Raises on a convention/spin mismatch."""
    d = _sym(d, "d")
    w = _sym(w, "w")
    P = _sym(P, "P")
    spin = sp.sympify(spin)
    pref = 2 * P / d
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if spin in (HALF, 3 * HALF):
        if convention != "standard":
            raise ValueError("half-integer spins use the linear standard mass")
        return sp.sqrt(-P / (2 * d)) * (d + 2 * w)
    if convention == "standard":
        if spin == 0 or spin == 2:
            # both read m^2 = (2P/d)[((d-1)/2)^2 - (w+(d-1)/2)^2]
            return sp.expand(pref * _square_bracket(d, w, 0))
        if spin == 1:
            return sp.expand(pref * _square_bracket(d, w, -1))
        raise ValueError(
            "the standard convention is tabulated for s in {0, 1, 2}; use "
            "'laplacian' or 'gauge' for general integer spin"
        )
    if convention == "laplacian":
        return sp.expand(pref * (_square_bracket(d, w, 0) + spin))
    # gauge convention: zero at the single-derivative gauge weight
    return sp.expand(pref * (((d - 5) * HALF + spin) ** 2 - (w + (d - 1) * HALF) ** 2))


def fermion_mu_squared(spin, d=None, w=None, P=None):
    """Wave-operator eigenvalue for the fermions (w is the tractor weight;
    the component field carries w + 1/2)."""
    d = _sym(d, "d")
    w = _sym(w, "w")
    P = _sym(P, "P")
    wpsi = w + HALF
    base = (wpsi + (d - 1) * HALF) ** 2 - d * (d - 1) / 4
    if sp.sympify(spin) == HALF:
        return sp.expand(-2 * P / d * base)
    if sp.sympify(spin) == 3 * HALF:
        return sp.expand(-2 * P / d * (base - 1))
    raise ValueError("fermionic mu^2 is defined for spins 1/2 and 3/2")


def bf_bound(spin, d=None, P=None, convention="standard"):
    """Stability bound on m^2 (mu^2) for constant negative curvature; equals
    the extremum of the mass-weight relation over real weights."""
    d = _sym(d, "d")
    P = _sym(P, "P")
    spin = sp.sympify(spin)
    pref = 2 * P / d
    if spin == HALF:
        return sp.expand(P * (d - 1) / 2)
    if spin == 3 * HALF:
        return sp.expand(P / (2 * d) * (d * (d - 1) + 4))
    if convention == "standard":
        if spin == 0:
            return sp.expand(P * (d - 1) ** 2 / (2 * d))
        if spin == 1:
            return sp.expand(pref * ((d - 3) * HALF) ** 2)
        if spin == 2:
            return sp.expand(pref * ((d - 1) * HALF) ** 2)
        raise ValueError("standard-convention bound tabulated for s in {0, 1, 2}")
    if convention == "laplacian":
        return sp.expand(pref * (((d - 1) * HALF) ** 2 + spin))
    return sp.expand(pref * ((d - 5) * HALF + spin) ** 2)


def residual_gauge_weights(s):
    """Weights at which the on-shell rank-s system has residual gauge
    invariances: s-2, s-3, ..., 0, -1."""
    s = int(s)
    if s < 1:
        return []
    return list(range(s - 2, -1, -1)) + [-1]


def depth_mass(s, t, d=None, P=None):
    """Wave-operator eigenvalue of the depth-t partially massless field:
    the weight is w = s - t - 1, so this is the laplacian-convention mass at
    that weight, mu^2 = -(2P/d)[(s-t-1)(s-t-1+d-2) - (t+1)]."""
    d = _sym(d, "d")
    P = _sym(P, "P")
    s, t = sp.sympify(s), sp.sympify(t)
    return mass_from_weight(s, d, s - t - 1, P, convention="laplacian")


def depth_mass_displayed(s, t, d=None, P=None):
    """The tabulated depth-mass closed form, retained for the discrepancy
    check: -(2P/d)[(s-t-1)(s-t-1+d) + t + 1].  It disagrees with the
    laplacian-convention mass at w = s-t-1 by (2P/d)(2s) and with the
    engine's component-level rank-2 reduction; see the discrepancy registry."""
    d = _sym(d, "d")
    P = _sym(P, "P")
    s, t = sp.sympify(s), sp.sympify(t)
    return sp.expand(-2 * P / d * ((s - t - 1) * (s - t - 1 + d) + t + 1))


def classify_weight(spin, d, w):
    """Special-weight tags for reports: massless / partially massless depth
    tags, the strictly conformal weight 1 - d/2, and the bound-saturating
    weight 1/2 - d/2."""
    tags = []
    d = sp.sympify(d)
    w = sp.sympify(w)
    spin = sp.sympify(spin)
    if sp.simplify(w - (1 - d / 2)) == 0:
        tags.append("scale-decoupled (strictly conformal weight)")
    if sp.simplify(w - (HALF - d / 2)) == 0 and spin == 0:
        tags.append("saturates the stability bound")
    if spin == 1 and w == -1:
        tags.append("gauge theory of a single vector (massless)")
    if spin == 2:
        if w == 0:
            tags.append("massless (vanishing rank-two mass term)")
        if w == -1:
            tags.append("partially massless (scalar gauge invariance)")
    if spin == sp.Rational(3, 2) and w == -1:
        tags.append("massless vector-spinor (gauge inert top slot)")
    if spin in (HALF, 3 * HALF) and sp.simplify(w + d / 2) == 0:
        tags.append("scale-decoupled (strictly conformal weight)")
    if spin.is_integer and spin >= 1 and w.is_number and w.is_integer:
        if int(w) in residual_gauge_weights(int(spin)):
            t = int(spin) - int(w) - 1
            tags.append(f"residual gauge weight (depth {t})")
    return tags
