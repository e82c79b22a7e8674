"""Conformally invariant geometry of a monotone curve: the arc element
zeta(t) dt, the Schwarzian of the arc reparametrization, the absolute
curvature operator and its eigenvalue curvatures k_i(t), and the
admissibility screen that gates the whole pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .curvature import EIG_GAP_TOL, matrix_schwarzian, ricci
from .errors import (
    ComplexEigenvalues,
    MonotonicityFailure,
    NormalizationViolation,
    NotAdmissible,
    RegularityFailure,
    RepeatedEigenvalues,
)
from .matcurve import finite_diff, negated_curve, sample_curve

ADM_TOL = 1e-10
NORM_TOL = 1e-5


@dataclass(frozen=True)
class ArcData:
    """Arc element series on a uniform grid.

    zeta(t) = |det(Sch - (tr Sch / n) Id)|^(1/2n); sphi is the Schwarzian of
    the map to arc parametrization, computed from the closed form
    zeta''/zeta - 1.5 (zeta'/zeta)^2 with zeta', zeta'' by finite
    differences; arclength is the cumulative trapezoid of zeta.
    """

    ts: np.ndarray
    zeta: np.ndarray
    zeta1: np.ndarray
    zeta2: np.ndarray
    sphi: np.ndarray
    arclength: np.ndarray

    @property
    def h(self):
        return float(self.ts[1] - self.ts[0])


def centered_schwarzian_det(sch):
    """det(Sch - (tr Sch / n) Id) — the admissibility determinant."""
    n = sch.shape[0]
    return float(np.linalg.det(sch - (np.trace(sch) / n) * np.eye(n)))


def zeta_series(jets, adm_tol=ADM_TOL):
    """Arc element and derived scalars along a sampled curve."""
    ts = np.array([j.t for j in jets])
    h = ts[1] - ts[0]
    n = jets[0].n
    zeta = np.empty(ts.size)
    for i, j in enumerate(jets):
        det = centered_schwarzian_det(matrix_schwarzian(j))
        if abs(det) < adm_tol:
            raise NotAdmissible(j.t)
        zeta[i] = abs(det) ** (1.0 / (2 * n))
    zeta1 = np.array(finite_diff(list(zeta), h, 1), dtype=float)
    zeta2 = np.array(finite_diff(list(zeta), h, 2), dtype=float)
    sphi = zeta2 / zeta - 1.5 * (zeta1 / zeta) ** 2
    arclength = np.concatenate(
        [[0.0], cumulative_trapezoid(zeta, ts)]
    )
    return ArcData(ts=ts, zeta=zeta, zeta1=zeta1, zeta2=zeta2, sphi=sphi,
                   arclength=arclength)


@dataclass(frozen=True)
class AbsoluteCurvature:
    """Absolute curvature operator series and its eigenvalue curvatures.

    Rabs = (1/zeta^2)(Sch - sphi Id); k rows are ascending eigenvalues
    k_i = (mu_i - sphi)/zeta^2; kbar is the per-point mean.  sign_patterns
    records sign(k_i - kbar) per point (the centered magnitudes multiply
    to 1, their signs are extra data).
    """

    ts: np.ndarray
    Rabs: list
    k: np.ndarray
    kbar: np.ndarray
    sign_patterns: np.ndarray


def absolute_curvature(jets, arc, ricci_series=None, norm_tol=NORM_TOL):
    """Eigenvalue curvatures of the arc-reparametrized curve.

    The centered product prod |k_i - kbar| equals
    prod |mu_i - mean mu| / zeta^(2n), which is 1 up to roundoff by the very
    definition of zeta; a violation beyond norm_tol means the eigen and
    determinant paths disagree numerically.
    """
    if ricci_series is None:
        ricci_series = [ricci(j) for j in jets]
    n = jets[0].n
    m = len(jets)
    rabs = []
    k = np.empty((m, n))
    for i, (j, rd) in enumerate(zip(jets, ricci_series)):
        z2 = arc.zeta[i] ** 2
        rabs.append((rd.schwarzian - arc.sphi[i] * np.eye(n)) / z2)
        k[i] = (rd.eigvals - arc.sphi[i]) / z2
    kbar = k.mean(axis=1)
    prod = np.prod(np.abs(k - kbar[:, None]), axis=1)
    worst = int(np.argmax(np.abs(prod - 1.0)))
    if abs(prod[worst] - 1.0) > norm_tol:
        raise NormalizationViolation(float(arc.ts[worst]), float(prod[worst]))
    signs = np.sign(k - kbar[:, None]).astype(int)
    return AbsoluteCurvature(ts=arc.ts, Rabs=rabs, k=k, kbar=kbar,
                             sign_patterns=signs)


@dataclass
class AdmissibilityReport:
    """Result of the four-step screen applied over a sample grid.

    Steps: (1) velocity form definite, (2) curvature spectrum real and
    distinct, (3)+(4) admissibility determinant bounded away from zero so
    the arc element exists.  `flipped` records whether the curve had to be
    negated (negative definite velocity) before the later steps.
    """

    admissible: bool
    velocity_sign: int  # +1, -1, or 0 (indefinite/singular)
    flipped: bool
    first_failure: str | None
    failure_t: float | None
    min_eig_gap: float | None
    min_zeta: float | None
    messages: list = field(default_factory=list)

    def to_dict(self):
        return {
            "admissible": self.admissible,
            "velocity_sign": self.velocity_sign,
            "flipped": self.flipped,
            "first_failure": self.first_failure,
            "failure_t": self.failure_t,
            "min_eig_gap": self.min_eig_gap,
            "min_zeta": self.min_zeta,
            "messages": list(self.messages),
        }


def admissibility_report(curve, grid, adm_tol=ADM_TOL,
                         gap_tol=EIG_GAP_TOL):
    """Run the screen without raising; failures become report content."""
    report = AdmissibilityReport(
        admissible=False, velocity_sign=0, flipped=False,
        first_failure=None, failure_t=None, min_eig_gap=None,
        min_zeta=None,
    )
    try:
        jets = sample_curve(curve, grid)
    except RegularityFailure as e:
        report.first_failure = "velocity-definite"
        report.failure_t = e.t
        report.messages.append(str(e))
        return report

    # step 1: velocity form definiteness (constant sign across the grid)
    sign = None
    for j in jets:
        ev = np.linalg.eigvalsh(j.S1)
        s = 1 if ev[0] > 0 else (-1 if ev[-1] < 0 else 0)
        if s == 0 or (sign is not None and s != sign):
            report.first_failure = "velocity-definite"
            report.failure_t = j.t
            report.messages.append(
                f"velocity form not definite of constant sign at t={j.t}"
            )
            return report
        sign = s
    report.velocity_sign = sign
    if sign < 0:
        report.flipped = True
        curve = negated_curve(curve)
        jets = sample_curve(curve, grid)

    # step 2: real, distinct curvature spectrum.  The gap is judged against
    # the actual spectral diameter: a fully collapsed spectrum (diameter 0,
    # e.g. scalar multiples of the identity or flat curves) is not flagged
    # here because it always fails the arc-element determinant below, which
    # is the more informative verdict.
    min_gap = np.inf
    ricci_series = []
    for j in jets:
        try:
            rd = ricci(j)
        except (ComplexEigenvalues, MonotonicityFailure) as e:
            report.first_failure = "spectrum-distinct"
            report.failure_t = j.t
            report.messages.append(str(e))
            return report
        mu = rd.eigvals
        if mu.size > 1:
            diam = float(mu[-1] - mu[0])
            gap = float(np.min(np.diff(mu)))
            if diam > 0 and gap < gap_tol * diam:
                report.first_failure = "spectrum-distinct"
                report.failure_t = j.t
                report.min_eig_gap = gap
                report.messages.append(
                    f"eigenvalue gap {gap:g} below tolerance at t={j.t}"
                )
                return report
            min_gap = min(min_gap, gap)
        ricci_series.append(rd)
    report.min_eig_gap = None if min_gap is np.inf else min_gap

    # steps 3-4: arc element bounded away from zero
    try:
        arc = zeta_series(jets, adm_tol=adm_tol)
    except NotAdmissible as e:
        report.first_failure = "arc-element"
        report.failure_t = e.t
        report.messages.append(str(e))
        return report
    report.min_zeta = float(np.min(arc.zeta))
    report.admissible = True
    return report
