import numpy as np
import pytest
from dataclasses import replace

from jacobi.errors import GridMismatch, StructureViolation
from jacobi.frames import (
    arc_normalized_frames,
    equivalent_reduced,
    reduced_invariants,
)
from jacobi.geom import zeta_series
from jacobi.matcurve import SampleGrid, finite_diff, preset_curve, sample_curve
from jacobi.pipeline import analyze
from jacobi.symspace import SymplecticSpace, is_symplectic_frame

from .conftest import admissible_quartics


class TestFrenetFrame:
    def test_first_preset_basis(self, unit_grid):
        ana = analyze(preset_curve("paper-6.2-ex1"), unit_grid)
        for t, m in zip(ana.frame.ts, ana.frame.M):
            ref = np.diag([np.cosh(t) + np.sinh(t), 1 + t])
            assert np.max(np.abs(m - ref)) <= 1e-9

    def test_second_preset_basis(self, unit_grid):
        # valid where cos + sin > 0, i.e. the whole [0, 1] window
        ana = analyze(preset_curve("paper-6.2-ex2"), unit_grid)
        for t, m in zip(ana.frame.ts, ana.frame.M):
            ref = np.diag([1 + t, np.cos(t) + np.sin(t)])
            assert np.max(np.abs(m - ref)) <= 1e-9

    def test_frames_symplectic(self, coarse_grid):
        for c in admissible_quartics(range(12), want=5):
            ana = analyze(c, coarse_grid)
            assert np.max(ana.frame.residuals) <= 1e-7, c.name

    def test_velocity_inverse_identity(self, coarse_grid):
        # (S')^(-1) = M M^T for the normalized eigenbasis
        for c in admissible_quartics(range(8), want=3):
            ana = analyze(c, coarse_grid)
            for j, m in zip(ana.jets, ana.frame.M):
                lhs = np.linalg.inv(j.S1)
                assert np.max(np.abs(lhs - m @ m.T)) <= 1e-8 * max(
                    1.0, np.max(np.abs(lhs))
                )

    def test_column_continuity(self, unit_grid):
        ana = analyze(preset_curve("paper-6.2-ex2"), unit_grid)
        ms = ana.frame.M
        for i in range(1, len(ms)):
            for c in range(2):
                assert ms[i][:, c] @ ms[i - 1][:, c] > 0


class TestCartanMatrix:
    def test_first_preset_constant(self, unit_grid):
        ana = analyze(preset_curve("paper-6.2-ex1"), unit_grid)
        ref = np.zeros((4, 4))
        ref[:2, 2:] = np.diag([1.0, 0.0])
        ref[2:, :2] = np.eye(2)
        for c in ana.cartan[2:-2]:
            assert np.max(np.abs(c - ref)) <= 1e-7

    def test_second_preset_constant(self, unit_grid):
        ana = analyze(preset_curve("paper-6.2-ex2"), unit_grid)
        ref = np.zeros((4, 4))
        ref[:2, 2:] = np.diag([0.0, -1.0])
        ref[2:, :2] = np.eye(2)
        for c in ana.cartan[2:-2]:
            assert np.max(np.abs(c - ref)) <= 1e-7

    def test_defining_ode_residual(self, unit_grid):
        # the frame satisfies dF/dt = zeta(t) F C along the grid; check by
        # finite-differencing the frame series (interior rows only)
        for name in ("paper-6.2-ex1", "paper-6.2-ex2"):
            ana = analyze(preset_curve(name), unit_grid)
            fs = [fr.F for fr in ana.frame.frames]
            dfs = finite_diff(fs, unit_grid.h, 1)
            for i in range(2, len(fs) - 2):
                resid = dfs[i] - ana.arc.zeta[i] * fs[i] @ ana.cartan[i]
                assert np.max(np.abs(resid)) <= 1e-4, (name, i)

    def test_defining_ode_residual_random(self, coarse_grid):
        # general curves are not arc-parametrized: the ODE is satisfied by
        # the arc-normalized frame series
        for c in admissible_quartics(range(10), want=3):
            ana = analyze(c, coarse_grid)
            fs = arc_normalized_frames(ana.frame, ana.arc)
            dfs = finite_diff(fs, coarse_grid.h, 1)
            scale = max(np.max(np.abs(f)) for f in fs)
            for i in range(2, len(fs) - 2):
                resid = dfs[i] - ana.arc.zeta[i] * fs[i] @ ana.cartan[i]
                assert np.max(np.abs(resid)) <= 5e-3 * scale, c.name


class TestReducedInvariants:
    def test_first_preset(self, unit_grid):
        rc = analyze(preset_curve("paper-6.2-ex1"), unit_grid).reduced
        assert np.max(np.abs(rc.Sigma)) <= 1e-8
        assert np.max(np.abs(rc.Kdiag - np.array([1.0, 0.0]))) <= 1e-8
        assert np.max(np.abs(rc.zeta - 1.0)) <= 1e-10
        assert np.max(np.abs(rc.curvatures() - np.array([-2.0, 0.0]))) <= 1e-7

    def test_second_preset(self, unit_grid):
        rc = analyze(preset_curve("paper-6.2-ex2"), unit_grid).reduced
        assert np.max(np.abs(rc.Sigma)) <= 1e-8
        assert np.max(np.abs(rc.Kdiag - np.array([0.0, -1.0]))) <= 1e-8

    def test_type_invariants_on_random_corpus(self, coarse_grid):
        for c in admissible_quartics(range(10), want=4):
            rc = analyze(c, coarse_grid).reduced
            # skew
            assert np.max(np.abs(
                rc.Sigma + np.transpose(rc.Sigma, (0, 2, 1)))) <= 1e-9
            # normalization of the curvatures under arc parametrization
            d = rc.curvatures()
            prod = np.prod(np.abs(d - d.mean(axis=1, keepdims=True)), axis=1)
            assert np.max(np.abs(prod - 1.0)) <= 1e-5

    def test_structure_violation(self, unit_grid):
        ana = analyze(preset_curve("paper-6.2-ex1"), unit_grid)
        bad = [c.copy() for c in ana.cartan]
        bad[3][2:, :2] = 2 * np.eye(2)
        with pytest.raises(StructureViolation):
            reduced_invariants(bad, ana.arc)

    def test_sign_canonicalization(self, unit_grid):
        ana = analyze(preset_curve("paper-6.2-ex1"), unit_grid)
        flipped = [c.copy() for c in ana.cartan]
        for c in flipped:
            # conjugating by diag(1, -1) flips the off-diagonal signs
            d = np.diag([1.0, -1.0, 1.0, -1.0])
            c[:] = d @ c @ d
        rc = reduced_invariants(flipped, ana.arc)
        # Sigma is zero here, so canonicalization leaves everything equal
        assert np.allclose(rc.Kdiag, ana.reduced.Kdiag)


class TestEquivalentReduced:
    def test_self_equivalence(self, unit_grid):
        rc = analyze(preset_curve("paper-6.2-ex1"), unit_grid).reduced
        verdict, eps, k_dev, s_dev = equivalent_reduced(rc, rc, tol=1e-10)
        assert verdict and np.array_equal(eps, [1.0, 1.0])
        assert k_dev == 0.0

    def test_sign_flip_detected(self, unit_grid):
        rc = analyze(preset_curve("paper-6.2-ex2"), unit_grid).reduced
        sig = rc.Sigma.copy()
        sig[:, 0, 1] = np.sin(rc.ts) * 1e-2
        sig[:, 1, 0] = -sig[:, 0, 1]
        a = replace(rc, Sigma=sig)
        b = replace(rc, Sigma=-sig)
        verdict, eps, _, s_dev = equivalent_reduced(a, b, tol=1e-8)
        assert verdict
        assert np.array_equal(eps, [1.0, -1.0])

    def test_distinct_presets_not_equivalent(self, unit_grid):
        a = analyze(preset_curve("paper-6.2-ex1"), unit_grid).reduced
        b = analyze(preset_curve("paper-6.2-ex2"), unit_grid).reduced
        verdict, eps, k_dev, _ = equivalent_reduced(a, b, tol=1e-4)
        assert not verdict and eps is None
        # deviation is measured on the K-block entries (-k/2): diag(1, 0)
        # against diag(0, -1) gives sup distance 1
        assert k_dev == pytest.approx(1.0, abs=1e-6)

    def test_dimension_mismatch(self, unit_grid, coarse_grid):
        a = analyze(preset_curve("paper-6.2-ex1"), unit_grid).reduced
        c3 = admissible_quartics(range(10), n=3, want=1)[0]
        b = analyze(c3, coarse_grid).reduced
        with pytest.raises(GridMismatch):
            equivalent_reduced(a, b)


def test_block_structure_everywhere(coarse_grid):
    for c in admissible_quartics(range(6), want=2):
        ana = analyze(c, coarse_grid)
        n = 2
        for cm in ana.cartan:
            assert np.max(np.abs(cm[n:, :n] - np.eye(n))) <= 1e-6
            assert np.max(np.abs(cm[:n, :n] - cm[n:, n:])) <= 1e-6
