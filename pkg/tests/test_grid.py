import numpy as np
import pytest
from hypothesis import given, strategies as st

from phasespace.errors import (DomainError, GridMismatchError, NumericalGuardError, SingularMatrixError,
                               SizingError)
from phasespace.grid import (Axis, PhaseSpaceField, SampledSignal, Symbol4Field, TensorField, bl_eval,
                             cdft, chirp_multiply, convolve, coord_change, dft_2d, dft_forward, dft_inverse,
                             fourier_multiply, fractional_shift, icdft, idft_2d, partial_dft_2, partial_idft_2,
                             reflect, square_axis)
from phasespace.signals import chirped_gaussian, gaussian, hermite

from conftest import max_rel, rel_err


class TestAxis:
    def test_points_are_centered(self):
        ax = Axis(8, 2.0)
        np.testing.assert_allclose(ax.points, [-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5])
        assert ax.points[ax.n // 2] == 0.0

    def test_dual_grid_relation(self):
        ax = Axis(64, 3.0)
        assert ax.step * ax.dual_step * ax.n == pytest.approx(1.0)
        assert ax.dual().dual().close_to(ax)

    def test_square_axis_is_self_dual(self):
        ax = square_axis(256)
        assert ax.step == pytest.approx(ax.dual_step)
        assert ax.dual().close_to(ax)

    @pytest.mark.parametrize("n", [0, 7, 12, 100, -8])
    def test_bad_size(self, n):
        with pytest.raises(SizingError):
            Axis(n, 1.0)

    @pytest.mark.parametrize("extent", [0.0, -1.0, np.inf, np.nan])
    def test_bad_extent(self, extent):
        with pytest.raises(SizingError):
            Axis(16, extent)


class TestContainers:
    def test_signal_shape_check(self, ax64):
        with pytest.raises(GridMismatchError):
            SampledSignal(ax64, np.zeros(32))

    def test_non_finite_rejected(self, ax64):
        v = np.zeros(64)
        v[3] = np.nan
        with pytest.raises(DomainError):
            SampledSignal(ax64, v)

    def test_inner_is_linear_in_first_slot(self, ax64):
        f, g = gaussian(ax64), hermite(ax64, 1)
        assert f.with_values(2j * f.values).inner(g) == pytest.approx(2j * f.inner(g))
        assert f.inner(g.with_values(2j * g.values)) == pytest.approx(-2j * f.inner(g))

    def test_gaussian_norm(self, ax128):
        # ||exp(-pi t^2)||_2^2 = 1/sqrt(2)
        assert gaussian(ax128).norm() ** 2 == pytest.approx(2 ** -0.5, abs=1e-14)

    def test_inner_axis_mismatch(self, ax64, ax128):
        with pytest.raises(GridMismatchError):
            gaussian(ax64).inner(gaussian(ax128))

    def test_field_shape_check(self, ax64):
        with pytest.raises(GridMismatchError):
            PhaseSpaceField((ax64, ax64), np.zeros((64, 32)))

    def test_symbol4_guard(self):
        ax = Axis(64, 4.0)
        with pytest.raises(NumericalGuardError):
            Symbol4Field((ax, ax, ax, ax), np.zeros((64, 64, 64, 64)))

    def test_tensor_materialize(self, ax64):
        f, g = gaussian(ax64), hermite(ax64, 2)
        T = TensorField(f, g).materialize()
        np.testing.assert_allclose(T.values, np.outer(f.values, g.values))


class TestTransforms:
    def test_gaussian_is_fixed_by_fourier(self, ax128):
        f = gaussian(ax128)
        assert max_rel(dft_forward(f).values, f.values) <= 1e-12

    def test_dilated_gaussian_transform(self, ax128):
        lam = 2.0
        F = dft_forward(gaussian(ax128, lam))
        w = F.axis.points
        ref = lam ** -0.5 * np.exp(-np.pi * w ** 2 / lam)
        assert max_rel(F.values, ref) <= 1e-12

    def test_modulation_becomes_translation(self, ax128):
        F = dft_forward(gaussian(ax128, freq=0.5))
        assert max_rel(F.values, gaussian(ax128, center=0.5).values) <= 1e-12

    @given(st.integers(0, 2 ** 31 - 1))
    def test_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        ax = Axis(32, 2.0)
        f = SampledSignal(ax, rng.standard_normal(32) + 1j * rng.standard_normal(32))
        assert rel_err(dft_inverse(dft_forward(f)).values, f.values) <= 1e-13

    @given(st.integers(0, 2 ** 31 - 1))
    def test_plancherel(self, seed):
        rng = np.random.default_rng(seed)
        ax = Axis(64, 3.0)
        f = SampledSignal(ax, rng.standard_normal(64) + 1j * rng.standard_normal(64))
        assert dft_forward(f).norm() == pytest.approx(f.norm(), rel=1e-12)

    def test_raw_pair_inverse(self):
        rng = np.random.default_rng(0)
        v = rng.standard_normal((16, 8))
        ax = Axis(8, 1.0)
        assert np.allclose(icdft(cdft(v, ax.step, axis=1), ax.dual_step, axis=1), v)

    def test_2d_transforms(self, ax64):
        rng = np.random.default_rng(1)
        F = PhaseSpaceField((ax64, Axis(64, 2.0)), rng.standard_normal((64, 64)))
        assert rel_err(idft_2d(dft_2d(F)).values, F.values) <= 1e-13
        assert rel_err(partial_idft_2(partial_dft_2(F)).values, F.values) <= 1e-13
        assert dft_2d(F).norm() == pytest.approx(F.norm(), rel=1e-12)


class TestShiftsAndInterpolation:
    def test_fractional_shift_gaussian(self, ax128):
        f = gaussian(ax128)
        assert max_rel(fractional_shift(f, 0.3).values, gaussian(ax128, center=0.3).values) <= 1e-10

    @given(st.floats(-1.0, 1.0))
    def test_shift_composition(self, a):
        ax = square_axis(64)
        f = hermite(ax, 2)
        there = fractional_shift(fractional_shift(f, a), -a)
        assert rel_err(there.values, f.values) <= 1e-9

    def test_bl_eval_at_grid_points(self, ax64):
        f = chirped_gaussian(ax64, 0.5)
        assert rel_err(bl_eval(f.values, ax64, ax64.points), f.values) <= 1e-12

    def test_bl_eval_off_grid(self, ax128):
        f = gaussian(ax128)
        pts = np.array([-0.31, 0.017, 0.5, 1.23])
        np.testing.assert_allclose(bl_eval(f.values, ax128, pts), np.exp(-np.pi * pts ** 2), atol=1e-10)

    def test_zero_outside_window(self, ax64):
        f = gaussian(ax64)
        R = ax64.extent
        out = bl_eval(f.values, ax64, [R + 0.1, -R - 0.1], periodic=False)
        assert np.all(out == 0)

    def test_reflect(self, ax64):
        f = gaussian(ax64, center=0.25)
        assert max_rel(reflect(f).values, gaussian(ax64, center=-0.25).values) <= 1e-12


class TestPhaseSpaceOps:
    def test_coord_change_swap(self, ax64):
        f, g = gaussian(ax64), hermite(ax64, 1)
        F = TensorField(f, g)
        swapped = coord_change(F, [[0, 1], [1, 0]])
        np.testing.assert_allclose(swapped.values, np.outer(g.values, f.values), atol=1e-12)

    def test_coord_change_tensor_matches_dense(self, ax64):
        f, g = gaussian(ax64), chirped_gaussian(ax64, 0.5)
        L = [[1.0, 0.5], [1.0, -0.5]]
        lazy = coord_change(TensorField(f, g), L)
        dense = coord_change(TensorField(f, g).materialize(), L)
        assert max_rel(dense.values, lazy.values) <= 1e-9

    def test_coord_change_is_isometric(self, ax128):
        F = TensorField(gaussian(ax128), gaussian(ax128, 2.0))
        G = coord_change(F, [[1.0, 0.5], [1.0, -0.5]])
        assert G.norm() == pytest.approx(F.materialize().norm(), rel=1e-8)

    def test_coord_change_singular(self, ax64):
        F = TensorField(gaussian(ax64), gaussian(ax64))
        with pytest.raises(SingularMatrixError):
            coord_change(F, [[1, 1], [1, 1]])

    def test_chirp_multiply_values(self, ax64):
        F = TensorField(gaussian(ax64), gaussian(ax64)).materialize()
        C = [[1.0, 0.5], [0.5, -2.0]]
        X, Y = F.mesh()
        ref = F.values * np.exp(1j * np.pi * (X ** 2 + X * Y - 2 * Y ** 2))
        np.testing.assert_allclose(chirp_multiply(F, C).values, ref, atol=1e-14)

    def test_chirp_requires_symmetric(self, ax64):
        F = TensorField(gaussian(ax64), gaussian(ax64)).materialize()
        with pytest.raises(DomainError):
            chirp_multiply(F, [[0, 1], [0, 0]])

    def test_fourier_multiplier_composition(self, ax64):
        F = TensorField(gaussian(ax64), hermite(ax64, 1)).materialize()
        B = np.array([[0.0, 0.3], [0.3, 0.1]])
        back = fourier_multiply(fourier_multiply(F, B), -B)
        assert rel_err(back.values, F.values) <= 1e-12
        assert fourier_multiply(F, B).norm() == pytest.approx(F.norm(), rel=1e-12)

    def test_convolution_of_gaussians(self, ax128):
        # exp(-pi|z|^2) * exp(-pi|z|^2) = exp(-pi|z|^2/2)/2
        g = gaussian(ax128)
        G = TensorField(g, g).materialize()
        X, Y = G.mesh()
        ref = 0.5 * np.exp(-np.pi * (X ** 2 + Y ** 2) / 2)
        assert max_rel(convolve(G, G).values, ref) <= 1e-10
