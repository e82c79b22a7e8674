"""End-to-end analysis: sample a curve, diagonalize its curvature, build the
arc element, the moving frame and the reduced invariant in one call."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import ricci
from .frames import (
    FrenetFrame,
    ReducedCartan,
    cartan_matrix,
    frenet_frame,
    reduced_invariants,
)
from .geom import (
    ADM_TOL,
    AbsoluteCurvature,
    ArcData,
    absolute_curvature,
    zeta_series,
)
from .matcurve import SampleGrid, negated_curve, sample_curve


@dataclass
class Analysis:
    """Everything computed for one curve over one grid."""

    curve: object
    grid: SampleGrid
    flipped: bool
    jets: list
    ricci_series: list
    arc: ArcData
    abscurv: AbsoluteCurvature
    frame: FrenetFrame
    cartan: list
    reduced: ReducedCartan


def analyze(curve, grid, adm_tol=ADM_TOL, frame_tol=1e-7):
    """Run the full invariant pipeline; raises typed errors on failure.

    A curve with negative definite velocity is negated up front (spectrum
    unchanged, normalization then well-posed); `flipped` records this.
    """
    jets = sample_curve(curve, grid)
    flipped = False
    if np.linalg.eigvalsh(jets[0].S1)[-1] < 0:
        flipped = True
        curve = negated_curve(curve)
        jets = sample_curve(curve, grid)
    ricci_series = [ricci(j, require_distinct=True) for j in jets]
    arc = zeta_series(jets, adm_tol=adm_tol)
    abscurv = absolute_curvature(jets, arc, ricci_series)
    frame = frenet_frame(jets, ricci_series, arc, frame_tol=frame_tol)
    cartan = cartan_matrix(frame, arc, ricci_series)
    reduced = reduced_invariants(cartan, arc)
    return Analysis(
        curve=curve, grid=grid, flipped=flipped, jets=jets,
        ricci_series=ricci_series, arc=arc, abscurv=abscurv,
        frame=frame, cartan=cartan, reduced=reduced,
    )
