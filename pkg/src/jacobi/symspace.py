"""Symplectic linear algebra over R^(2n).

Everything is expressed relative to one fixed symplectic basis: the form is
J = [[0, I], [-I, 0]], Lagrangian subspaces are stored either as chart
coordinates (a symmetric n x n matrix S, the subspace being the column span
of [I; S]) or as frames [X; Y].  All operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidBasis,
    InvalidDimension,
    InvalidTransform,
    NotInChart,
    NotTransverse,
)

SYM_TOL = 1e-10
ISO_TOL = 1e-9
FRAME_TOL = 1e-8
COND_MAX = 1e12


def _maxabs(a):
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def solve_gated(a, b, cond_max=COND_MAX, exc=NotTransverse, what="matrix"):
    """Solve a x = b, raising `exc` when a is singular past the cond gate."""
    a = np.asarray(a, dtype=float)
    if np.linalg.cond(a) > cond_max:
        raise exc(f"{what} is singular (condition number above {cond_max:g})")
    return np.linalg.solve(a, b)


def inv_gated(a, cond_max=COND_MAX, exc=NotTransverse, what="matrix"):
    a = np.asarray(a, dtype=float)
    return solve_gated(a, np.eye(a.shape[0]), cond_max=cond_max, exc=exc, what=what)


def symmetrize(s, tol=SYM_TOL, strict=True):
    """Return (s + s^T)/2; asymmetry beyond `tol` is an error when strict."""
    s = np.asarray(s, dtype=float)
    resid = _maxabs(s - s.T)
    scale = max(1.0, _maxabs(s))
    if strict and resid > tol * scale:
        raise InvalidBasis(f"asymmetry {resid:g} exceeds tolerance {tol:g}")
    return 0.5 * (s + s.T)


@dataclass(frozen=True)
class SymplecticSpace:
    """R^(2n) with the standard symplectic form."""

    n: int
    J: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 2:
            raise InvalidDimension(
                "half-dimension must be >= 2 (the invariant theory "
                "degenerates for n = 1)"
            )
        n = self.n
        j = np.zeros((2 * n, 2 * n))
        j[:n, n:] = np.eye(n)
        j[n:, :n] = -np.eye(n)
        object.__setattr__(self, "J", j)

    @property
    def dim(self):
        return 2 * self.n


@dataclass(frozen=True)
class LagrangianChartPoint:
    """Chart coordinate S of a Lagrangian subspace: the span of [I; S]."""

    S: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "S", symmetrize(self.S))

    @property
    def n(self):
        return self.S.shape[0]


@dataclass(frozen=True)
class LagrangianFrame:
    """Column span of [X; Y]; isotropy X^T Y = Y^T X is enforced."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.X, dtype=float)
        y = np.asarray(self.Y, dtype=float)
        if x.shape != y.shape or x.shape[0] != x.shape[1]:
            raise InvalidDimension("X and Y must be square of equal size")
        resid = _maxabs(x.T @ y - y.T @ x)
        scale = max(1.0, _maxabs(x) * max(1.0, _maxabs(y)))
        if resid > ISO_TOL * scale:
            raise InvalidBasis(f"isotropy residual {resid:g}")
        if np.linalg.matrix_rank(np.vstack([x, y])) < x.shape[0]:
            raise InvalidBasis("frame columns are linearly dependent")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)

    @property
    def n(self):
        return self.X.shape[0]


@dataclass(frozen=True)
class SymplecticFrame:
    """2n x 2n coordinate matrix of a symplectic basis (f, fbar)."""

    F: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.F, dtype=float)
        if f.ndim != 2 or f.shape[0] != f.shape[1] or f.shape[0] % 2:
            raise InvalidDimension("frame matrix must be square of even size")
        object.__setattr__(self, "F", f)

    @property
    def n(self):
        return self.F.shape[0] // 2

    def lagrangian_blocks(self):
        """(A, B, Abar, Bbar) with f = e A + ebar B, fbar = e Abar + ebar Bbar."""
        n = self.n
        return (
            self.F[:n, :n],
            self.F[n:, :n],
            self.F[:n, n:],
            self.F[n:, n:],
        )


def is_symplectic_frame(space, F, tol=FRAME_TOL):
    """Check F^T J F = J; returns (verdict, max-abs residual)."""
    f = F.F if isinstance(F, SymplecticFrame) else np.asarray(F, dtype=float)
    if f.shape != (space.dim, space.dim):
        raise InvalidDimension(
            f"expected a {space.dim}x{space.dim} matrix, got {f.shape}"
        )
    residual = _maxabs(f.T @ space.J @ f - space.J)
    return residual <= tol, residual


def lagrangian_from_frame(fr, cond_max=COND_MAX):
    """Chart coordinate S = Y X^(-1) of the span of [X; Y]."""
    s = solve_gated(fr.X.T, fr.Y.T, cond_max=cond_max, exc=NotInChart,
                    what="frame X block").T
    return LagrangianChartPoint(symmetrize(s, strict=False))


def complete_symplectic_basis(M, S, Sbar, cond_max=COND_MAX):
    """Unique complement Mbar = (Sbar - S)^(-1) (M^T)^(-1).

    The columns of M are a basis of the subspace with chart coordinate S;
    the returned Mbar spans the subspace at Sbar so that the combined frame
    is symplectic: M^T (Sbar - S) Mbar = Id.
    """
    M = np.asarray(M, dtype=float)
    if np.linalg.cond(M) > cond_max:
        raise InvalidBasis("basis matrix M is singular")
    diff = Sbar.S - S.S
    mt_inv = np.linalg.solve(M.T, np.eye(M.shape[0]))
    return solve_gated(diff, mt_inv, cond_max=cond_max, what="Sbar - S")


def frame_from_chart_pair(M, S, Sbar, cond_max=COND_MAX):
    """Symplectic frame with f spanning S (basis M) and fbar spanning Sbar."""
    Mbar = complete_symplectic_basis(M, S, Sbar, cond_max=cond_max)
    n = M.shape[0]
    F = np.zeros((2 * n, 2 * n))
    F[:n, :n] = M
    F[n:, :n] = S.S @ M
    F[:n, n:] = Mbar
    F[n:, n:] = Sbar.S @ Mbar
    return SymplecticFrame(F)


def chart_translate_invert(S, S_ref, cond_max=COND_MAX):
    """Coordinate (S - S_ref)^(-1) of the same subspace in the chart at S_ref.

    Not an involution: the inverse transform is S_ref + T^(-1).
    """
    t = inv_gated(S.S - S_ref.S, cond_max=cond_max, what="S - S_ref")
    return LagrangianChartPoint(symmetrize(t, strict=False))


def apply_symplectic(g, S, frame_tol=FRAME_TOL, cond_max=COND_MAX):
    """Fractional-linear action of a (conformal) symplectic map on a chart.

    With g = [[P, Q], [R, T]] in n x n blocks, S maps to (R + T S)(P + Q S)^(-1).
    g may scale the form by a nonzero constant (conformal maps act on
    Lagrangian subspaces exactly like symplectic ones).
    """
    g = np.asarray(g, dtype=float)
    n = S.n
    if g.shape != (2 * n, 2 * n):
        raise InvalidDimension(f"expected {2*n}x{2*n} transform, got {g.shape}")
    space = SymplecticSpace(n)
    gjg = g.T @ space.J @ g
    scale = np.trace(gjg[:n, n:]) / n
    if abs(scale) < 1e-12 or _maxabs(gjg - scale * space.J) > frame_tol * max(
        1.0, _maxabs(gjg)
    ):
        raise InvalidTransform("matrix is not conformal symplectic")
    P, Q = g[:n, :n], g[:n, n:]
    R, T = g[n:, :n], g[n:, n:]
    num = R + T @ S.S
    den = P + Q @ S.S
    out = solve_gated(den.T, num.T, cond_max=cond_max, exc=NotInChart,
                      what="P + Q S").T
    return LagrangianChartPoint(symmetrize(out, strict=False))


def random_hamiltonian(rng, n, scale=1.0):
    """Random element of sp(2n): H = [[M, N], [R, -M^T]], N and R symmetric."""
    m = rng.normal(size=(n, n)) * scale
    nn = rng.normal(size=(n, n)) * scale
    rr = rng.normal(size=(n, n)) * scale
    nn = 0.5 * (nn + nn.T)
    rr = 0.5 * (rr + rr.T)
    h = np.zeros((2 * n, 2 * n))
    h[:n, :n] = m
    h[:n, n:] = nn
    h[n:, :n] = rr
    h[n:, n:] = -m.T
    return h


def random_csp(seed, scale=1.0, n=2, ham_scale=1.0):
    """Pseudo-random conformal symplectic map g = exp(H) diag(s I, I).

    g^T J g = s J: a symplectic map composed with the scaling section of the
    conformal group.  `scale` must be nonzero.
    """
    if scale == 0:
        raise InvalidTransform("conformal scale must be nonzero")
    from scipy.linalg import expm

    rng = np.random.default_rng(seed)
    h = random_hamiltonian(rng, n, scale=ham_scale)
    g = expm(h)
    sigma = np.eye(2 * n)
    sigma[:n, :n] *= scale
    return g @ sigma
