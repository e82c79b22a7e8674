import numpy as np
import pytest

from jacobi.curvature import ricci
from jacobi.errors import NotAdmissible
from jacobi.geom import (
    absolute_curvature,
    admissibility_report,
    centered_schwarzian_det,
    zeta_series,
)
from jacobi.matcurve import (
    SampleGrid,
    curve_from_scalars,
    negated_curve,
    preset_curve,
    sample_curve,
)
from jacobi.pipeline import analyze

from .conftest import admissible_quartics


class TestZetaSeries:
    @pytest.mark.parametrize("name", ["paper-6.2-ex1", "paper-6.2-ex2"])
    def test_presets_are_arc_parametrized(self, name, unit_grid):
        jets = sample_curve(preset_curve(name), unit_grid)
        arc = zeta_series(jets)
        assert np.max(np.abs(arc.zeta - 1.0)) <= 1e-12
        assert np.max(np.abs(arc.sphi)) <= 1e-8
        assert np.all(np.diff(arc.arclength) > 0)
        assert arc.arclength[-1] == pytest.approx(1.0, abs=1e-10)

    def test_affine_line_not_admissible(self, unit_grid):
        jets = sample_curve(preset_curve("affine-line"), unit_grid)
        with pytest.raises(NotAdmissible):
            zeta_series(jets)

    def test_sphi_definition_holds_pointwise(self, unit_grid):
        curves = admissible_quartics(range(10), want=3)
        for c in curves:
            jets = sample_curve(c, unit_grid)
            arc = zeta_series(jets)
            ref = arc.zeta2 / arc.zeta - 1.5 * (arc.zeta1 / arc.zeta) ** 2
            assert np.array_equal(arc.sphi, ref)


class TestAbsoluteCurvature:
    def test_first_preset(self, unit_grid):
        jets = sample_curve(preset_curve("paper-6.2-ex1"), unit_grid)
        arc = zeta_series(jets)
        ac = absolute_curvature(jets, arc)
        assert np.max(np.abs(ac.k - np.array([-2.0, 0.0]))) <= 1e-8
        prod = np.prod(np.abs(ac.k - ac.kbar[:, None]), axis=1)
        assert np.max(np.abs(prod - 1.0)) <= 1e-12

    def test_second_preset(self, unit_grid):
        jets = sample_curve(preset_curve("paper-6.2-ex2"), unit_grid)
        arc = zeta_series(jets)
        ac = absolute_curvature(jets, arc)
        assert np.max(np.abs(ac.k - np.array([0.0, 2.0]))) <= 1e-8

    def test_normalization_on_random_corpus(self, coarse_grid):
        for c in admissible_quartics(range(20), want=8):
            jets = sample_curve(c, coarse_grid)
            arc = zeta_series(jets)
            ac = absolute_curvature(jets, arc)
            prod = np.prod(np.abs(ac.k - ac.kbar[:, None]), axis=1)
            assert np.max(np.abs(prod - 1.0)) <= 1e-5, c.name

    def test_sign_patterns_recorded(self, unit_grid):
        jets = sample_curve(preset_curve("paper-6.2-ex1"), unit_grid)
        arc = zeta_series(jets)
        ac = absolute_curvature(jets, arc)
        assert np.array_equal(ac.sign_patterns[0], [-1, 1])


class TestArclength:
    def test_additivity(self):
        c = preset_curve("paper-6.2-ex2")
        jets = sample_curve(c, SampleGrid(0.0, 1.0, 201))
        whole = zeta_series(jets).arclength[-1]
        first = zeta_series(
            sample_curve(c, SampleGrid(0.0, 0.5, 101))).arclength[-1]
        second = zeta_series(
            sample_curve(c, SampleGrid(0.5, 1.0, 101))).arclength[-1]
        assert first + second == pytest.approx(whole, abs=1e-8)


class TestAdmissibilityReport:
    def test_first_preset(self, unit_grid):
        rep = admissibility_report(preset_curve("paper-6.2-ex1"), unit_grid)
        assert rep.admissible
        assert rep.velocity_sign == 1 and not rep.flipped
        assert rep.min_eig_gap == pytest.approx(2.0, abs=1e-8)
        assert rep.min_zeta == pytest.approx(1.0, abs=1e-10)

    def test_affine_line_fails_at_arc_element(self, unit_grid):
        rep = admissibility_report(preset_curve("affine-line"), unit_grid)
        assert not rep.admissible
        assert rep.first_failure == "arc-element"

    def test_indefinite_velocity(self, unit_grid):
        c = curve_from_scalars(
            [lambda t: (t, 1.0, 0.0, 0.0), lambda t: (-t, -1.0, 0.0, 0.0)],
            (-10.0, 10.0),
        )
        rep = admissibility_report(c, unit_grid)
        assert not rep.admissible
        assert rep.first_failure == "velocity-definite"

    def test_repeated_eigenvalue_preset(self):
        # the fully collapsed spectrum (both eigenvalues equal 2) kills the
        # arc-element determinant, which is where the screen reports it
        rep = admissibility_report(
            preset_curve("scalar-tan-block"), SampleGrid(0.1, 1.0, 31)
        )
        assert not rep.admissible
        assert rep.first_failure == "arc-element"

    def test_negative_definite_curve_is_flipped_not_rejected(self, unit_grid):
        c = negated_curve(preset_curve("paper-6.2-ex1"))
        rep = admissibility_report(c, unit_grid)
        assert rep.admissible
        assert rep.velocity_sign == -1 and rep.flipped

    def test_report_serializes(self, unit_grid):
        rep = admissibility_report(preset_curve("affine-line"), unit_grid)
        d = rep.to_dict()
        assert d["admissible"] is False
        assert isinstance(d["messages"], list)


class TestFlipInvariance:
    def test_negated_curve_has_identical_invariants(self, unit_grid):
        # Schwarzian is even in S, so negation only affects normalization
        a = analyze(preset_curve("paper-6.2-ex1"), unit_grid)
        b = analyze(negated_curve(preset_curve("paper-6.2-ex1")), unit_grid)
        assert b.flipped and not a.flipped
        assert np.allclose(a.reduced.Kdiag, b.reduced.Kdiag, atol=1e-10)
        assert np.allclose(a.arc.zeta, b.arc.zeta, atol=1e-12)


def test_centered_det_matches_eigen_route():
    jets = sample_curve(preset_curve("paper-6.2-ex2"),
                        SampleGrid(0.2, 0.8, 11))
    for j in jets:
        rd = ricci(j)
        mu = rd.eigvals
        det = centered_schwarzian_det(rd.schwarzian)
        assert det == pytest.approx(np.prod(mu - mu.mean()), rel=1e-8,
                                    abs=1e-10)
