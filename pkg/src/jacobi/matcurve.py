"""Symmetric-matrix curves S(t) with derivative access, sampling, stencils.

A curve is the chart-coordinate picture of a smooth curve of Lagrangian
subspaces: t maps to the span of [I; S(t)].  Evaluators return the value and
the first three derivatives; nothing in the pipeline differentiates S beyond
order 3 (higher-order quantities are reached through scalar series that are
finite-differenced on grids).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DomainError,
    InvalidDimension,
    RegularityFailure,
    TooFewSamples,
)
from .symspace import COND_MAX, symmetrize

# Five-point stencil coefficients on a uniform grid, exact rationals over the
# printed denominators.  Rows: offsets / weights.  Interior rows are central;
# the two rows at each end are one-sided.
STENCILS = {
    1: {
        "central": ([-2, -1, 0, 1, 2], [1, -8, 0, 8, -1], 12.0),  # O(h^4)
        "left0": ([0, 1, 2, 3, 4], [-25, 48, -36, 16, -3], 12.0),  # O(h^4)
        "left1": ([-1, 0, 1, 2, 3], [-3, -10, 18, -6, 1], 12.0),  # O(h^4)
    },
    2: {
        "central": ([-2, -1, 0, 1, 2], [-1, 16, -30, 16, -1], 12.0),  # O(h^4)
        "left0": ([0, 1, 2, 3, 4], [35, -104, 114, -56, 11], 12.0),  # O(h^3)
        "left1": ([-1, 0, 1, 2, 3], [11, -20, 6, 4, -1], 12.0),  # O(h^3)
    },
    3: {
        "central": ([-2, -1, 0, 1, 2], [-1, 2, 0, -2, 1], 2.0),  # O(h^2)
        "left0": ([0, 1, 2, 3, 4], [-5, 18, -24, 14, -3], 2.0),  # O(h^2)
        "left1": ([-1, 0, 1, 2, 3], [-3, 10, -12, 6, -1], 2.0),  # O(h^2)
    },
}

# Seven-point central third derivative, O(h^4); used for table-kind curves
# where the stencil error propagates into twice-differentiated scalars.
STENCIL_3_WIDE = ([-3, -2, -1, 1, 2, 3], [1, -8, 13, -13, 8, -1], 8.0)


def _stencil_row(values, offsets, weights, denom, i, h, order):
    acc = sum(w * values[i + o] for o, w in zip(offsets, weights))
    return acc / (denom * h**order)


def finite_diff(values, h, order=1):
    """Differentiate a uniformly sampled series of scalars or matrices.

    Five-point central stencils in the interior, one-sided five-point rows at
    the two boundary points on each end (coefficients in STENCILS).  `order`
    may be 1, 2 or 3; the classic contract is orders 1 and 2, order 3 is used
    internally for table-kind curves.
    """
    if order not in STENCILS:
        raise ValueError(f"unsupported derivative order {order}")
    values = [np.asarray(v, dtype=float) for v in values]
    m = len(values)
    if m < 5:
        raise TooFewSamples(f"need >= 5 samples, got {m}")
    st = STENCILS[order]
    out = []
    for i in range(m):
        if i == 0:
            key = "left0"
        elif i == 1:
            key = "left1"
        elif i == m - 1:
            key = "right0"
        elif i == m - 2:
            key = "right1"
        else:
            key = "central"
        if key.startswith("right"):
            # mirror of the matching left row
            offsets, weights, denom = st["left" + key[-1]]
            sign = (-1.0) ** order
            row = sum(
                sign * w * values[i - o] for o, w in zip(offsets, weights)
            ) / (denom * h**order)
            out.append(row)
        else:
            offsets, weights, denom = st[key]
            out.append(_stencil_row(values, offsets, weights, denom, i, h, order))
    return out


@dataclass(frozen=True)
class SampleGrid:
    """Uniform grid of m points on [t0, t1]."""

    t0: float
    t1: float
    m: int

    def __post_init__(self):
        if not self.t0 < self.t1:
            raise DomainError(f"need t0 < t1, got [{self.t0}, {self.t1}]")
        if self.m < 7:
            raise DomainError("need at least 7 samples for five-point stencils")

    @property
    def h(self):
        return (self.t1 - self.t0) / (self.m - 1)

    @property
    def points(self):
        return np.linspace(self.t0, self.t1, self.m)


@dataclass(frozen=True)
class CurveJet:
    """One sample of a curve: value and first three derivatives at t."""

    t: float
    S: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    S3: np.ndarray

    @property
    def n(self):
        return self.S.shape[0]


class SymmetricMatrixCurve:
    """Smooth map t -> (S, S', S'', S''') of symmetric n x n matrices.

    `kind` is one of analytic / preset / polynomial / fourier / table; the
    evaluator must be pure.  Regularity (det S' != 0) is checked lazily at
    the points actually queried.
    """

    def __init__(self, n, evaluator: Callable, domain, kind="analytic", name=None):
        self.n = int(n)
        self._eval = evaluator
        self.domain = (float(domain[0]), float(domain[1]))
        self.kind = kind
        self.name = name

    def jet(self, t, check_regular=True, sym_tol=1e-8):
        t = float(t)
        if not (self.domain[0] <= t <= self.domain[1]):
            raise DomainError(
                f"t={t} outside domain [{self.domain[0]}, {self.domain[1]}]"
            )
        mats = [np.asarray(m, dtype=float) for m in self._eval(t)]
        if len(mats) != 4 or any(m.shape != (self.n, self.n) for m in mats):
            raise InvalidDimension("evaluator must return four n x n matrices")
        mats = [symmetrize(m, tol=sym_tol) for m in mats]
        jet = CurveJet(t, *mats)
        if check_regular and (
            abs(np.linalg.det(jet.S1)) < 1e-300
            or np.linalg.cond(jet.S1) > COND_MAX
        ):
            raise RegularityFailure(t)
        return jet


def sample_curve(curve, grid, check_regular=True):
    """Evaluate the curve on the grid; fails at the first irregular point."""
    if grid.t0 < curve.domain[0] or grid.t1 > curve.domain[1]:
        raise DomainError(
            f"grid [{grid.t0}, {grid.t1}] outside curve domain {curve.domain}"
        )
    return [curve.jet(t, check_regular=check_regular) for t in grid.points]


# ---------------------------------------------------------------------------
# constructors for the supported curve kinds


def curve_from_scalars(entries, domain, kind="analytic", name=None):
    """Diagonal-block curve from scalar jet functions.

    `entries` is a list of callables t -> (f, f', f'', f''') placed on the
    diagonal.
    """
    n = len(entries)

    def evaluator(t):
        jets = [e(t) for e in entries]
        return tuple(np.diag([j[k] for j in jets]) for k in range(4))

    return SymmetricMatrixCurve(n, evaluator, domain, kind=kind, name=name)


def polynomial_curve(coeffs, domain, name=None, kind="polynomial"):
    """Curve with polynomial entries; coeffs[i][j] is an ascending
    coefficient list for entry (i, j) (upper triangle is mirrored)."""
    n = len(coeffs)
    polys = {}
    for i in range(n):
        for j in range(n):
            c = coeffs[i][j] if j < len(coeffs[i]) else []
            polys[(i, j)] = np.polynomial.Polynomial(c if len(c) else [0.0])

    derivs = [
        {k: p.deriv(m) if m else p for k, p in polys.items()} for m in range(4)
    ]

    def evaluator(t):
        out = []
        for m in range(4):
            mat = np.empty((n, n))
            for (i, j), p in derivs[m].items():
                mat[i, j] = p(t)
            out.append(0.5 * (mat + mat.T))
        return tuple(out)

    return SymmetricMatrixCurve(n, evaluator, domain, kind=kind, name=name)


def fourier_curve(cos_coeffs, sin_coeffs, domain, omega=1.0, name=None):
    """Entries sum_k a_k cos(k w t) + b_k sin(k w t); differentiated exactly."""
    n = len(cos_coeffs)

    def entry_jet(i, j, t):
        a = cos_coeffs[i][j]
        b = sin_coeffs[i][j]
        vals = np.zeros(4)
        for k, (ak, bk) in enumerate(zip(a, b)):
            w = k * omega
            c, s = np.cos(w * t), np.sin(w * t)
            vals[0] += ak * c + bk * s
            vals[1] += w * (-ak * s + bk * c)
            vals[2] += w**2 * (-ak * c - bk * s)
            vals[3] += w**3 * (ak * s - bk * c)
        return vals

    def evaluator(t):
        mats = [np.empty((n, n)) for _ in range(4)]
        for i in range(n):
            for j in range(n):
                vals = entry_jet(i, j, t)
                for m in range(4):
                    mats[m][i, j] = vals[m]
        return tuple(0.5 * (m + m.T) for m in mats)

    return SymmetricMatrixCurve(n, evaluator, domain, kind="fourier", name=name)


def table_curve(ts, S_values, name=None):
    """Curve from uniformly spaced samples; derivatives by the stencils above.

    Evaluation is restricted to the table nodes.  Accuracy of S''' is O(h^2),
    which is what limits re-analysis of reconstructed curves.
    """
    ts = np.asarray(ts, dtype=float)
    if ts.size < 7:
        raise TooFewSamples("table needs at least 7 samples")
    h = ts[1] - ts[0]
    if np.max(np.abs(np.diff(ts) - h)) > 1e-9 * max(1.0, abs(h)):
        raise DomainError("table nodes must be uniformly spaced")
    values = [symmetrize(np.asarray(s, dtype=float), strict=False) for s in S_values]
    n = values[0].shape[0]
    d1 = finite_diff(values, h, 1)
    d2 = finite_diff(values, h, 2)
    d3 = finite_diff(values, h, 3)
    # interior third derivatives upgraded to the O(h^4) wide stencil; the
    # 3 one-sided rows at each end keep the five-point O(h^2) values
    offsets, weights, denom = STENCIL_3_WIDE
    for i in range(3, len(values) - 3):
        d3[i] = sum(
            w * values[i + o] for o, w in zip(offsets, weights)
        ) / (denom * h**3)

    def evaluator(t):
        i = int(round((t - ts[0]) / h))
        if i < 0 or i >= ts.size or abs(ts[i] - t) > 1e-9 * max(1.0, abs(h)):
            raise DomainError(f"t={t} is not a table node")
        return values[i], d1[i], d2[i], d3[i]

    c = SymmetricMatrixCurve(n, evaluator, (ts[0], ts[-1]), kind="table", name=name)
    c.table_ts = ts
    c.table_values = values
    return c


# ---------------------------------------------------------------------------
# composition with reparametrizations and conformal symplectic maps


def reparametrized_curve(curve, psi_jet, domain, name=None):
    """Composite curve Sbar(u) = S(psi(u)).

    `psi_jet` maps u to (psi, psi', psi'', psi''').  Derivatives follow the
    chain rule:
        Sbar'   = psi' S'
        Sbar''  = psi'' S' + psi'^2 S''
        Sbar''' = psi''' S' + 3 psi' psi'' S'' + psi'^3 S'''
    """

    def evaluator(u):
        p, p1, p2, p3 = psi_jet(u)
        j = curve.jet(p, check_regular=False)
        return (
            j.S,
            p1 * j.S1,
            p2 * j.S1 + p1**2 * j.S2,
            p3 * j.S1 + 3 * p1 * p2 * j.S2 + p1**3 * j.S3,
        )

    return SymmetricMatrixCurve(curve.n, evaluator, domain,
                                kind="analytic", name=name)


def affine_reparam(a, b):
    """u -> a u + b as a jet function."""

    def jet(u):
        return a * u + b, a, 0.0, 0.0

    return jet


def sine_reparam(a=1.0, b=0.0, eps=0.1, omega=1.0):
    """u -> a u + b + eps sin(omega u); increasing when a > eps omega."""

    def jet(u):
        return (
            a * u + b + eps * np.sin(omega * u),
            a + eps * omega * np.cos(omega * u),
            -eps * omega**2 * np.sin(omega * u),
            -eps * omega**3 * np.cos(omega * u),
        )

    return jet


def transformed_curve(curve, g, name=None):
    """Image of the curve under a conformal symplectic map, in the same chart.

    With g = [[P, Q], [R, T]], the frame [I; S] maps to [X; Y] with
    X = P + Q S and Y = R + T S, and the chart point is Sg = Y X^(-1).
    Derivatives of Sg come from the product rule with Z = X^(-1):
    Z' = -Z X' Z and so on; X and Y are affine in S so their derivatives are
    Q S^(k) and T S^(k).
    """
    g = np.asarray(g, dtype=float)
    n = curve.n
    P, Q = g[:n, :n], g[:n, n:]
    R, T = g[n:, :n], g[n:, n:]

    def evaluator(t):
        j = curve.jet(t, check_regular=False)
        X = [P + Q @ j.S, Q @ j.S1, Q @ j.S2, Q @ j.S3]
        Y = [R + T @ j.S, T @ j.S1, T @ j.S2, T @ j.S3]
        Z0 = np.linalg.solve(X[0], np.eye(n))
        Z1 = -Z0 @ X[1] @ Z0
        Z2 = -(Z1 @ X[1] @ Z0 + Z0 @ X[2] @ Z0 + Z0 @ X[1] @ Z1)
        Z3 = -(
            Z2 @ X[1] @ Z0 + Z1 @ X[2] @ Z0 + Z1 @ X[1] @ Z1
            + Z1 @ X[2] @ Z0 + Z0 @ X[3] @ Z0 + Z0 @ X[2] @ Z1
            + Z1 @ X[1] @ Z1 + Z0 @ X[2] @ Z1 + Z0 @ X[1] @ Z2
        )
        Z = [Z0, Z1, Z2, Z3]
        from math import comb

        out = []
        for m in range(4):
            acc = sum(comb(m, k) * Y[k] @ Z[m - k] for k in range(m + 1))
            out.append(0.5 * (acc + acc.T))
        return tuple(out)

    return SymmetricMatrixCurve(n, evaluator, curve.domain,
                                kind="analytic", name=name)


def negated_curve(curve):
    """S -> -S (the monotonicity flip: replacing the form by its negative)."""

    def evaluator(t):
        return tuple(-m for m in curve._eval(t))

    return SymmetricMatrixCurve(curve.n, evaluator, curve.domain,
                                kind=curve.kind, name=curve.name)


# ---------------------------------------------------------------------------
# presets


def _exp_decay_entry(t):
    # (1 - e^(-2t))/2 = sinh t / (cosh t + sinh t)
    e = np.exp(-2.0 * t)
    return 0.5 * (1.0 - e), e, -2.0 * e, 4.0 * e


def _mobius_entry(t):
    # t / (1 + t)
    u = 1.0 + t
    return t / u, u**-2, -2.0 * u**-3, 6.0 * u**-4


def _trig_entry(t):
    # sin t / (cos t + sin t)
    u = np.cos(t) + np.sin(t)
    du = np.cos(t) - np.sin(t)
    return np.sin(t) / u, u**-2, -2.0 * du * u**-3, 2.0 * u**-2 + 6.0 * du**2 * u**-4


def _tan_entry(t):
    c = np.cos(t)
    sec2 = c**-2
    tn = np.tan(t)
    return tn, sec2, 2 * sec2 * tn, 2 * sec2 * (sec2 + 2 * tn**2)


def preset_curve(name):
    """Named curves used throughout the docs, the CLI and the test suite."""
    if name == "paper-6.2-ex1":
        return curve_from_scalars(
            [_exp_decay_entry, _mobius_entry],
            domain=(-0.9, 10.0),
            kind="preset",
            name=name,
        )
    if name == "paper-6.2-ex2":
        return curve_from_scalars(
            [_mobius_entry, _trig_entry],
            domain=(-0.9, 3 * np.pi / 4 - 0.05),
            kind="preset",
            name=name,
        )
    if name == "affine-line":
        return curve_from_scalars(
            [lambda t: (t, 1.0, 0.0, 0.0), lambda t: (2 * t, 2.0, 0.0, 0.0)],
            domain=(-100.0, 100.0),
            kind="preset",
            name=name,
        )
    if name == "scalar-tan-block":
        # tan(t) * Id: Schwarzian 2 * Id, repeated eigenvalues, inadmissible
        return curve_from_scalars(
            [_tan_entry, _tan_entry],
            domain=(-1.4, 1.4),
            kind="preset",
            name=name,
        )
    raise DomainError(f"unknown preset {name!r}")


PRESET_NAMES = ("paper-6.2-ex1", "paper-6.2-ex2", "affine-line", "scalar-tan-block")


# ---------------------------------------------------------------------------
# JSON loading (CLI surface)


def curve_from_json(obj):
    """Load a curve from its JSON description.

    Schema: { "n": int, "kind": "preset"|"polynomial"|"fourier"|"table",
    "name"?: str, "entries"?: ..., "samples"?: {"t": [...], "S": [...]},
    "domain": [t0, t1] }.  Optional extensions: "transform" (2n x 2n matrix
    applied as a conformal symplectic map) and "reparam"
    ({"type": "affine"|"sine", ...}).
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    if kind == "preset":
        curve = preset_curve(obj["name"])
    elif kind == "polynomial":
        curve = polynomial_curve(obj["entries"], obj["domain"],
                                 name=obj.get("name"))
    elif kind == "fourier":
        curve = fourier_curve(
            obj["entries"]["cos"],
            obj["entries"]["sin"],
            obj["domain"],
            omega=obj.get("omega", 1.0),
            name=obj.get("name"),
        )
    elif kind == "table":
        curve = table_curve(obj["samples"]["t"], obj["samples"]["S"],
                            name=obj.get("name"))
    else:
        raise DomainError(f"unknown curve kind {kind!r}")
    if "transform" in obj:
        curve = transformed_curve(curve, np.asarray(obj["transform"], float),
                                  name=curve.name)
    if "reparam" in obj:
        rp = obj["reparam"]
        if rp["type"] == "affine":
            jetf = affine_reparam(rp["a"], rp.get("b", 0.0))
        elif rp["type"] == "sine":
            jetf = sine_reparam(rp.get("a", 1.0), rp.get("b", 0.0),
                                rp.get("eps", 0.1), rp.get("omega", 1.0))
        else:
            raise DomainError(f"unknown reparam type {rp['type']!r}")
        curve = reparametrized_curve(curve, jetf, rp["domain"], name=curve.name)
    if "domain" in obj and kind == "preset":
        curve.domain = (float(obj["domain"][0]), float(obj["domain"][1]))
    return curve


def curve_to_table_json(curve, grid):
    """Serialize curve samples as a table-kind JSON object."""
    jets = sample_curve(curve, grid, check_regular=False)
    return {
        "n": curve.n,
        "kind": "table",
        "name": curve.name,
        "domain": [grid.t0, grid.t1],
        "samples": {
            "t": [j.t for j in jets],
            "S": [j.S.tolist() for j in jets],
        },
    }
