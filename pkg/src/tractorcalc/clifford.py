"""Dirac matrix construction in d and d+2 dimensions.

The d-dimensional gammas come from the standard recursive tensor-product
construction over exact Gaussian-rational entries.  The (d+2)-dimensional
blocks are assembled in light-cone slots (+, m, -):

    G^+ = ((0, 0), (sqrt2, 0)),  G^- = ((0, sqrt2), (0, 0)),
    G^m = diag(gamma^m, -gamma^m),

and the conjugation matrix (the product of the two timelike directions)
satisfies Gbar^2 = -1, Gbar^dagger = -Gbar, G^M dagger = -Gbar G^M Gbar.
All invariants are verified at build time.
"""

from __future__ import annotations

import itertools

import sympy as sp

__all__ = ["CliffordRep", "build_clifford"]

SQRT2 = sp.sqrt(2)


def _pauli():
    s1 = sp.Matrix([[0, 1], [1, 0]])
    s2 = sp.Matrix([[0, -sp.I], [sp.I, 0]])
    s3 = sp.Matrix([[1, 0], [0, -1]])
    return s1, s2, s3


def _tp(a, b):
    """Kronecker product of exact matrices."""
    return sp.Matrix(sp.kronecker_product(a, b))


def _build_euclidean(d):
    """gamma^1..gamma^d with {gamma^a, gamma^b} = 2 delta^{ab}."""
    s1, s2, s3 = _pauli()
    if d == 1:
        return [sp.Matrix([[1]])]
    gammas = [s1, s2]
    while len(gammas) < d:
        k = len(gammas)
        if k % 2 == 0:
            # odd element: product of all previous, phased to square to +1
            prod = sp.eye(gammas[0].shape[0])
            for g in gammas:
                prod = prod * g
            sq = (prod * prod)[0, 0]
            phase = 1 if sq == 1 else sp.I
            gammas.append(sp.expand(phase * prod))
        else:
            # double: size 2n from n
            size = gammas[0].shape[0]
            new = [_tp(s1, g) for g in gammas]
            new.append(_tp(s2, sp.eye(size)))
            gammas = new
    return [g.applyfunc(sp.expand) for g in gammas[:d]]


class CliffordRep:
    """Exact gamma matrices for signature (sum of +-1 entries of `signature`)
    plus the derived light-cone blocks two dimensions up."""

    def __init__(self, d, signature=None):
        if not 2 <= d <= 6:
            raise ValueError("supported Dirac-algebra dimensions are 2..6")
        self.d = d
        if signature is None:
            signature = (-1,) + (1,) * (d - 1)
        self.signature = tuple(int(s) for s in signature)
        if len(self.signature) != d or any(s not in (-1, 1) for s in self.signature):
            raise ValueError("signature must list +-1 per direction")
        base = _build_euclidean(d)
        # timelike directions get an i so they square to -1
        self.gammas = [
            (sp.I * g if s < 0 else g).applyfunc(sp.expand)
            for g, s in zip(base, self.signature)
        ]
        self.dim_spinor = self.gammas[0].shape[0]
        self.eta = sp.diag(*[sp.Integer(s) for s in self.signature])
        self._check_d_algebra()
        self._build_ambient()

    # -- d-dimensional layer -------------------------------------------------

    def _check_d_algebra(self):
        d = self.d
        for a, b in itertools.product(range(d), repeat=2):
            anti = self.gammas[a] * self.gammas[b] + self.gammas[b] * self.gammas[a]
            target = 2 * self.eta[a, b] * sp.eye(self.dim_spinor)
            if sp.expand(anti - target) != sp.zeros(self.dim_spinor, self.dim_spinor):
                raise RuntimeError("d-dimensional Dirac algebra failed to close")

    def gamma_slash(self, vec_flat):
        """gamma^m v_m for a frame-index lower vector (list of d entries)."""
        out = sp.zeros(self.dim_spinor, self.dim_spinor)
        for m in range(self.d):
            if vec_flat[m] != 0:
                out += vec_flat[m] * self.gammas[m]
        return out

    def gamma_pair(self, a, b):
        """gamma^{ab} = (1/2)[gamma^a, gamma^b]."""
        g = self.gammas
        return sp.expand((g[a] * g[b] - g[b] * g[a]) / 2)

    # -- ambient (d+2) layer ---------------------------------------------------

    def _build_ambient(self):
        d, s = self.d, self.dim_spinor
        n = d + 2
        self.dim_tractor_spinor = 2 * s
        zero = sp.zeros(s, s)
        eye = sp.eye(s)
        Gp = sp.Matrix(sp.BlockMatrix([[zero, zero], [SQRT2 * eye, zero]]))
        Gm = sp.Matrix(sp.BlockMatrix([[zero, SQRT2 * eye], [zero, zero]]))
        self.Gammas = [Gp]
        for k in range(d):
            gk = self.gammas[k]
            self.Gammas.append(
                sp.Matrix(sp.BlockMatrix([[gk, zero], [zero, -gk]]))
            )
        self.Gammas.append(Gm)
        # ambient flat metric in (+, m, -) slots
        eta = sp.zeros(n, n)
        eta[0, n - 1] = eta[n - 1, 0] = 1
        for a in range(d):
            eta[1 + a, 1 + a] = self.signature[a]
        self.ambient_eta = eta
        self._check_ambient_algebra()
        self.Gamma0bar = self._conjugation_matrix()

    def _check_ambient_algebra(self):
        n = self.d + 2
        size = self.dim_tractor_spinor
        for A, B in itertools.product(range(n), repeat=2):
            anti = self.Gammas[A] * self.Gammas[B] + self.Gammas[B] * self.Gammas[A]
            target = 2 * self.ambient_eta[A, B] * sp.eye(size)
            if sp.expand(anti - target) != sp.zeros(size, size):
                raise RuntimeError("ambient Dirac algebra failed to close")

    def _conjugation_matrix(self):
        """Product of the two timelike directions, phased so that
        Gbar^2 = -1, Gbar^dagger = -Gbar, G^M dagger = -Gbar G^M Gbar."""
        n = self.d + 2
        size = self.dim_tractor_spinor
        # ambient timelike directions: (G^+ - G^-)/sqrt2 plus every timelike G^m
        timelike = [sp.expand((self.Gammas[0] - self.Gammas[n - 1]) / SQRT2)]
        for a in range(self.d):
            if self.signature[a] < 0:
                timelike.append(self.Gammas[1 + a])
        if len(timelike) != 2:
            raise ValueError(
                "conjugation matrix needs exactly two timelike directions"
            )
        base = sp.expand(timelike[0] * timelike[1])
        for phase in (1, sp.I, -1, -sp.I):
            cand = sp.expand(phase * base)
            if sp.expand(cand * cand + sp.eye(size)) != sp.zeros(size, size):
                continue
            if sp.expand(cand.adjoint() + cand) != sp.zeros(size, size):
                continue
            ok = True
            for G in self.Gammas:
                if sp.expand(G.adjoint() + cand * G * cand) != sp.zeros(size, size):
                    ok = False
                    break
            if ok:
                return cand
        raise RuntimeError("no phase makes the conjugation matrix consistent")

    # -- generators ----------------------------------------------------------

    def ambient_pair(self, A, B):
        """Gamma^{AB} = (1/2)[Gamma^A, Gamma^B]."""
        G = self.Gammas
        return sp.expand((G[A] * G[B] - G[B] * G[A]) / 2)

    def rotation_generators(self):
        """M^{AB} = Gamma^{AB}/2; they close on the ambient algebra constants."""
        n = self.d + 2
        return {
            (A, B): sp.expand(self.ambient_pair(A, B) / 2)
            for A, B in itertools.product(range(n), repeat=2)
        }

    def gamma_slash_ambient(self, tractor_comps):
        """Gamma.T = Gamma_M T^M = eta_MN Gamma^N T^M for slot components."""
        n = self.d + 2
        size = self.dim_tractor_spinor
        out = sp.zeros(size, size)
        for M, N in itertools.product(range(n), repeat=2):
            if self.ambient_eta[M, N] != 0 and tractor_comps[M] != 0:
                out += self.ambient_eta[M, N] * tractor_comps[M] * self.Gammas[N]
        return out


def build_clifford(d, signature=None):
    return CliffordRep(d, signature)
