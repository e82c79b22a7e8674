"""Flat curves and cycles.

A cycle is an affine line of chart coordinates together with the chart's
point at infinity; regular cycles (invertible direction) are exactly the
images of flat curves — curves whose matrix Schwarzian vanishes, which are
scalar Moebius multiples of a fixed symmetric direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import matrix_schwarzian
from .errors import NoFit, NotGeneralPosition, ZeroDirection
from .matcurve import sample_curve
from .symspace import (
    COND_MAX,
    LagrangianChartPoint,
    _maxabs,
    chart_translate_invert,
    symmetrize,
)

FIT_TOL = 1e-8

AT_INFINITY = "at-infinity"


def line_classify(direction, cond_max=COND_MAX):
    """'regular' iff the symmetric direction matrix is invertible.

    The determinant is compared against ||direction||^n / cond_max so the
    verdict is scale-free.
    """
    d = symmetrize(np.asarray(direction, dtype=float), strict=False)
    nd = _maxabs(d)
    if nd < 1e-300:
        raise ZeroDirection("direction matrix is zero")
    n = d.shape[0]
    det = abs(np.linalg.det(d))
    return "regular" if det > nd**n / cond_max else "singular"


@dataclass(frozen=True)
class Cycle:
    """Affine line base + span(direction) in the chart at `infinity`.

    `infinity` is the chart coordinate (in the ambient chart) of the point
    adjoined at infinity; base and direction live in the chart centered
    there.
    """

    infinity: LagrangianChartPoint
    base: np.ndarray
    direction: np.ndarray
    regular: bool


def is_flat(curve, grid, tol=1e-8):
    """True iff sup_t ||Schwarzian(S)||_inf <= tol over the grid."""
    jets = sample_curve(curve, grid)
    return max(_maxabs(matrix_schwarzian(j)) for j in jets) <= tol


def mobius_fit(jets, fit_tol=FIT_TOL):
    """Fit S(t) = ((a t + b)/(c t + d)) S1 to samples of a flat curve.

    The common direction S1 is the dominant rank-1 structure of the sample
    differences (SVD); the scalar factors are then least-squares fitted with
    a Moebius function of t (homogeneous linear system in a, b, c, d).
    Returns ((a, b, c, d), S1, residual); coefficients are normalized to
    unit max-magnitude with positive leading entry.
    """
    if len(jets) < 4:
        raise NoFit(np.inf, "need at least 4 samples")
    ts = np.array([j.t for j in jets])
    mats = [j.S for j in jets]
    diffs = np.stack([(m - mats[0]).ravel() for m in mats[1:]])
    _, svals, vt = np.linalg.svd(diffs, full_matrices=False)
    if svals[0] < 1e-300:
        raise NoFit(np.inf, "samples are constant")
    direction = vt[0].reshape(mats[0].shape)
    lead = np.unravel_index(np.argmax(np.abs(direction)), direction.shape)
    if direction[lead] < 0:
        direction = -direction
    direction = symmetrize(direction, strict=False)
    dnorm2 = float(np.sum(direction * direction))
    scale = max(_maxabs(m) for m in mats)
    lam = np.empty(ts.size)
    proj_resid = 0.0
    for i, m in enumerate(mats):
        lam[i] = float(np.sum(m * direction)) / dnorm2
        proj_resid = max(proj_resid, _maxabs(m - lam[i] * direction))
    if proj_resid > fit_tol * max(1.0, scale):
        raise NoFit(proj_resid, "samples are not scalar multiples of one "
                                "direction")
    # lam(t) (c t + d) - (a t + b) = 0: homogeneous least squares in (a,b,c,d)
    rows = np.column_stack([-ts, -np.ones_like(ts), lam * ts, lam])
    _, _, vt4 = np.linalg.svd(rows, full_matrices=False)
    coeffs = vt4[-1]
    coeffs = coeffs / _maxabs(coeffs)
    if coeffs[np.argmax(np.abs(coeffs))] < 0:
        coeffs = -coeffs
    a, b, c, d = coeffs
    den = c * ts + d
    if np.min(np.abs(den)) < 1e-12:
        raise NoFit(np.inf, "fitted denominator vanishes on the samples")
    resid = float(np.max(np.abs((a * ts + b) / den - lam)))
    resid = max(resid, proj_resid / max(1.0, scale))
    if resid > fit_tol:
        raise NoFit(resid)
    return (a, b, c, d), direction, resid


def cycle_through(L1, L2, L3, cond_max=COND_MAX):
    """The unique cycle through three pairwise-transverse chart points.

    L3 plays the role of the point at infinity; L1 and L2 are re-charted
    there ((L - L3)^(-1)), giving the line's base point and direction.  The
    cycle does not depend on which point is sent to infinity (tested by
    permuting roles).
    """
    pts = [L1, L2, L3]
    for i in range(3):
        for j in range(i + 1, 3):
            if np.linalg.cond(pts[i].S - pts[j].S) > cond_max:
                raise NotGeneralPosition(i + 1, j + 1)
    base = chart_translate_invert(L1, L3, cond_max=cond_max).S
    other = chart_translate_invert(L2, L3, cond_max=cond_max).S
    direction = other - base
    return Cycle(
        infinity=L3,
        base=base,
        direction=direction,
        regular=line_classify(direction, cond_max=cond_max) == "regular",
    )


def cycle_contains(cycle, L, tol=1e-8, cond_max=COND_MAX):
    """Membership test: infinity itself, or collinearity in the cycle chart.

    `L` is a chart point or the AT_INFINITY sentinel.  A chart point is
    re-charted at the cycle's infinity; it belongs iff its offset from the
    base is a scalar multiple of the direction (least-squares scalar,
    residual below tol relative to the line scale).
    """
    if L is AT_INFINITY:
        return True
    if isinstance(L, LagrangianChartPoint) and _maxabs(
        L.S - cycle.infinity.S
    ) <= tol * max(1.0, _maxabs(cycle.infinity.S)):
        return True
    x = chart_translate_invert(L, cycle.infinity, cond_max=cond_max).S
    offset = x - cycle.base
    d = cycle.direction
    lam = float(np.sum(offset * d) / np.sum(d * d))
    resid = _maxabs(offset - lam * d)
    scale = max(1.0, _maxabs(cycle.base), _maxabs(d))
    return resid <= tol * scale
