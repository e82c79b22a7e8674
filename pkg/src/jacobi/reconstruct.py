"""Reconstruction of a curve from its invariants.

Given skew Sigma(tau), diagonal K(tau) in the arc parameter and a symplectic
initial basis F0, integrate the linear frame ODE

    dF/dtau = F [[Sigma, K], [Id, Sigma]]

with classical RK4, read the curve off as S = B A^(-1) from the frame's
first column block [A; B], and close the loop: analyze -> reconstruct ->
re-analyze must reproduce the invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .errors import GridMismatch, SymplecticityLoss
from .frames import equivalent_reduced
from .geom import NORM_TOL
from .matcurve import SampleGrid, table_curve
from .pipeline import analyze
from .symspace import (
    COND_MAX,
    LagrangianChartPoint,
    SymplecticFrame,
    SymplecticSpace,
    _maxabs,
    is_symplectic_frame,
    symmetrize,
)

RESID_MAX = 1e-6


@dataclass
class InvariantPrescription:
    """Invariant data on a uniform tau grid, plus the initial frame.

    Sigma: (m, n, n) skew series; Kdiag: (m, n) diagonal entries of the
    curvature block; F0: symplectic initial condition.  Validation is
    non-fatal: hypothesis violations (repeated curvatures, centered product
    away from 1) are recorded in `warnings` and integration proceeds — the
    reconstructed curve simply will not re-analyze to the given data.
    """

    ts: np.ndarray
    Sigma: np.ndarray
    Kdiag: np.ndarray
    F0: SymplecticFrame
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        self.Sigma = np.asarray(self.Sigma, dtype=float)
        self.Kdiag = np.asarray(self.Kdiag, dtype=float)
        m = self.ts.size
        n = self.Kdiag.shape[1]
        if self.Sigma.shape != (m, n, n) or self.Kdiag.shape != (m, n):
            raise GridMismatch("prescription series shapes disagree")
        if _maxabs(self.Sigma + np.transpose(self.Sigma, (0, 2, 1))) > 1e-10:
            self.warnings.append("Sigma series is not skew-symmetric")
        d = -2.0 * self.Kdiag
        dbar = d.mean(axis=1, keepdims=True)
        prod = np.prod(np.abs(d - dbar), axis=1)
        if np.max(np.abs(prod - 1.0)) > NORM_TOL:
            self.warnings.append(
                "centered curvature product deviates from 1 "
                f"(max dev {np.max(np.abs(prod - 1.0)):.3e})"
            )
        if n > 1 and np.min(np.diff(np.sort(d, axis=1), axis=1)) < 1e-9:
            self.warnings.append("curvatures are not distinct everywhere")
        space = SymplecticSpace(n)
        ok, resid = is_symplectic_frame(space, self.F0)
        if not ok:
            self.warnings.append(
                f"initial frame symplecticity residual {resid:.3e}"
            )

    @property
    def n(self):
        return self.Kdiag.shape[1]

    def structure_matrix(self):
        """C(tau) interpolant (cubic in tau between the given samples)."""
        n = self.n
        sig = CubicSpline(self.ts, self.Sigma.reshape(self.ts.size, -1))
        kd = CubicSpline(self.ts, self.Kdiag)

        def c_at(tau):
            s = sig(tau).reshape(n, n)
            c = np.zeros((2 * n, 2 * n))
            c[:n, :n] = s
            c[:n, n:] = np.diag(kd(tau))
            c[n:, :n] = np.eye(n)
            c[n:, n:] = s
            return c

        return c_at


def prescription_from_json(obj):
    """Build a prescription from { n, grid, Sigma, K, F0 } JSON data.

    Sigma and K may each be a constant matrix (broadcast over the grid) or a
    per-sample series; K is given as a full diagonal matrix or a diagonal
    vector; F0 is the 2n x 2n initial frame, row-major.
    """
    n = int(obj["n"])
    g = obj["grid"]
    grid = SampleGrid(float(g["t0"]), float(g["t1"]), int(g["m"]))
    ts = grid.points
    m = ts.size

    sig = np.asarray(obj.get("Sigma", np.zeros((n, n))), dtype=float)
    if sig.ndim == 2:
        sig = np.broadcast_to(sig, (m, n, n)).copy()
    k = np.asarray(obj["K"], dtype=float)
    if k.ndim == 2:
        k = np.diag(k)
    if k.ndim == 1:
        k = np.broadcast_to(k, (m, n)).copy()
    elif k.ndim == 3:
        k = np.array([np.diag(ki) for ki in k])
    f0 = SymplecticFrame(np.asarray(obj["F0"], dtype=float).reshape(2 * n, 2 * n))
    return InvariantPrescription(ts=ts, Sigma=sig, Kdiag=k, F0=f0)


def _rk4(f0, c_at, ts, substeps):
    frames = [f0]
    resid_track = []
    space = SymplecticSpace(f0.shape[0] // 2)
    f = f0
    for i in range(ts.size - 1):
        h = (ts[i + 1] - ts[i]) / substeps
        tau = ts[i]
        for _ in range(substeps):
            k1 = f @ c_at(tau)
            k2 = (f + 0.5 * h * k1) @ c_at(tau + 0.5 * h)
            k3 = (f + 0.5 * h * k2) @ c_at(tau + 0.5 * h)
            k4 = (f + h * k3) @ c_at(tau + h)
            f = f + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            tau += h
        frames.append(f)
        _, resid = is_symplectic_frame(space, f)
        resid_track.append(resid)
    return frames, (max(resid_track) if resid_track else 0.0)


def integrate_frame(p: InvariantPrescription, substeps=1,
                    resid_max=RESID_MAX):
    """RK4 integration of the frame ODE over the prescription grid.

    Returns (frames, max_residual).  If the symplecticity residual exceeds
    resid_max, the integration is re-run once at 4x substeps before raising
    SymplecticityLoss.
    """
    c_at = p.structure_matrix()
    frames, resid = _rk4(p.F0.F, c_at, p.ts, substeps)
    if resid > resid_max:
        frames, resid = _rk4(p.F0.F, c_at, p.ts, 4 * substeps)
        if resid > resid_max:
            raise SymplecticityLoss(resid)
    return [SymplecticFrame(f) for f in frames], resid


def curve_from_frame(frames, cond_max=COND_MAX):
    """Chart points S = B A^(-1) along a frame series.

    Samples where the A block is singular are chart exits: the point list
    holds None there and `segments` lists the maximal in-chart index ranges.
    """
    points = []
    for fr in frames:
        f = fr.F if isinstance(fr, SymplecticFrame) else np.asarray(fr)
        n = f.shape[0] // 2
        a, b = f[:n, :n], f[n:, :n]
        if np.linalg.cond(a) > cond_max:
            points.append(None)
            continue
        s = np.linalg.solve(a.T, b.T).T
        points.append(LagrangianChartPoint(symmetrize(s, strict=False)))
    segments = []
    start = None
    for i, pt in enumerate(points):
        if pt is not None and start is None:
            start = i
        if pt is None and start is not None:
            segments.append((start, i - 1))
            start = None
    if start is not None:
        segments.append((start, len(points) - 1))
    return points, segments


@dataclass
class RoundtripReport:
    """Outcome of analyze -> reconstruct -> re-analyze."""

    equivalent: bool
    sign_pattern: np.ndarray | None
    k_deviation: float
    sigma_deviation: float | None
    sympl_residual: float
    warnings: list


def arc_uniform_prescription(analysis, m=None):
    """Resample an analysis onto a uniform arc-parameter grid.

    The cumulative arclength is inverted with monotone (PCHIP)
    interpolation; Sigma and K are spline-resampled as functions of
    arclength; the initial frame is the analysis frame at the left endpoint
    (arclength zero).
    """
    rc = analysis.reduced
    ell = rc.arclength
    if m is None:
        m = rc.ts.size
    tau = np.linspace(0.0, ell[-1], m)
    kd = CubicSpline(ell, rc.Kdiag)(tau)
    sg = CubicSpline(ell, rc.Sigma.reshape(ell.size, -1))(tau)
    n = rc.n
    # keep PchipInterpolator available for callers needing t(ell) itself
    arc_to_t = PchipInterpolator(ell, rc.ts)
    p = InvariantPrescription(
        ts=tau,
        Sigma=sg.reshape(m, n, n),
        Kdiag=kd,
        F0=analysis.frame.frames[0],
    )
    p.arc_to_t = arc_to_t
    return p


def roundtrip(curve, grid, tol=1e-3, resid_max=RESID_MAX, trim=3):
    """Analyze, rebuild from the extracted invariants, re-analyze, compare.

    The rebuilt curve is a sampled table; its derivative stencils are
    one-sided at the first/last `trim` nodes with markedly worse error, so
    re-analysis runs on the interior window.  Arclength alignment is exact:
    the table parameter is the original curve's arclength, so the interior
    re-analysis enters the comparison with its arclength offset by the trim.
    """
    ana = analyze(curve, grid)
    p = arc_uniform_prescription(ana)
    frames, resid = integrate_frame(p, resid_max=resid_max)
    points, segments = curve_from_frame(frames)
    if len(segments) != 1 or segments[0] != (0, len(points) - 1):
        raise GridMismatch(
            "reconstructed curve leaves the chart inside the window; "
            f"segments: {segments}"
        )
    rebuilt = table_curve(p.ts, [pt.S for pt in points], name="reconstructed")
    m = p.ts.size
    regrid = SampleGrid(p.ts[trim], p.ts[m - 1 - trim], m - 2 * trim)
    ana2 = analyze(rebuilt, regrid)
    reduced2 = replace(
        ana2.reduced, arclength=ana2.reduced.arclength + p.ts[trim]
    )
    verdict, eps, k_dev, s_dev = equivalent_reduced(
        ana.reduced, reduced2, tol=tol
    )
    return RoundtripReport(
        equivalent=verdict, sign_pattern=eps, k_deviation=k_dev,
        sigma_deviation=s_dev, sympl_residual=resid,
        warnings=list(p.warnings),
    )
