import numpy as np
import pytest

from hdrinterp import interpfunctions
from hdrinterp.dataset import GaussianBlob, SceneSpec, procedural_scene
from hdrinterp.errors import (ExposureMismatchError, InvalidParameterError,
        ShapeError)
from hdrinterp.interp import get_interpfunction, interpolate
from hdrinterp.metrics import psnr
from hdrinterp.radiometry import HIGH, LOW, radiance_to_ldr, synthesized

INNER = (slice(16, -16), slice(16, -16))


class TestBackends:

    def test_dispatch_by_name(self):
        assert get_interpfunction('blend') is interpfunctions.blend
        assert get_interpfunction('flow') is interpfunctions.flow

    def test_unknown_backend(self, ldr):
        with pytest.raises(InvalidParameterError):
            get_interpfunction('sepconv')
        a = ldr(np.zeros((16, 16, 3)))
        with pytest.raises(InvalidParameterError):
            interpolate(a, a, 0.5, backend='sepconv')


class TestContract:

    @pytest.mark.parametrize('backend', ['blend', 'flow'])
    def test_identity_is_bit_exact(self, backend, ldr, textured_pixels):
        a = ldr(textured_pixels(32), bits=16)
        out = interpolate(a, a, 0.3, backend=backend)
        np.testing.assert_array_equal(out.pixels, a.pixels)
        assert out.bit_depth == 16

    def test_output_metadata(self, ldr, textured_pixels):
        a = ldr(textured_pixels(32), LOW, dt=0.25)
        b = ldr(np.roll(textured_pixels(32), 1, axis=0), LOW, dt=0.25)
        out = interpolate(a, b, 0.5, backend='blend', level=3)
        assert out.tag == LOW and out.exposure_time == 0.25
        assert out.provenance == synthesized(3)
        assert out.bit_depth is None

    @pytest.mark.parametrize('tau', [0.0, 1.0, -0.5, 1.5])
    def test_tau_bounds(self, tau, ldr):
        a = ldr(np.zeros((16, 16, 3)))
        with pytest.raises(InvalidParameterError):
            interpolate(a, a, tau)

    def test_exposure_mismatch(self, ldr):
        px = np.zeros((16, 16, 3))
        with pytest.raises(ExposureMismatchError):
            interpolate(ldr(px, HIGH), ldr(px, LOW, dt=0.5), 0.5)
        with pytest.raises(ExposureMismatchError):
            interpolate(ldr(px, HIGH, dt=1.0), ldr(px, HIGH, dt=2.0), 0.5)

    def test_shape_mismatch(self, ldr):
        with pytest.raises(ShapeError):
            interpolate(ldr(np.zeros((16, 16, 3))),
                    ldr(np.zeros((16, 32, 3))), 0.5)

    def test_blend_values(self, ldr):
        a = ldr(np.full((4, 4, 3), 0.2))
        b = ldr(np.full((4, 4, 3), 0.6))
        out = interpolate(a, b, 0.25, backend='blend')
        np.testing.assert_allclose(out.pixels, 0.3)


class TestMotion:

    def test_flow_tracks_global_shift(self, ldr, textured_pixels):
        px = textured_pixels(128)
        a = ldr(px)
        b = ldr(np.roll(px, 4, axis=1))
        truth = np.roll(px, 2, axis=1)
        flow = interpolate(a, b, 0.5, backend='flow').pixels
        blend = interpolate(a, b, 0.5, backend='blend').pixels
        err_flow = np.abs(flow - truth)[INNER].mean()
        err_blend = np.abs(blend - truth)[INNER].mean()
        assert err_flow < 0.02
        assert err_flow < 0.5 * err_blend

    def test_flow_beats_blend_on_large_motion(self, ldr, textured_pixels):
        px = textured_pixels(128)
        a = ldr(px)
        b = ldr(np.roll(px, 6, axis=1))
        truth = np.roll(px, 3, axis=1)[INNER]
        p_flow = psnr(interpolate(a, b, 0.5, backend='flow').pixels[INNER],
                truth)
        p_blend = psnr(interpolate(a, b, 0.5, backend='blend').pixels[INNER],
                truth)
        assert p_flow > p_blend + 5.0

    def test_symmetry(self, ldr, textured_pixels):
        px = textured_pixels(128)
        a = ldr(px)
        b = ldr(np.roll(px, 2, axis=1))
        ab = interpolate(a, b, 0.5, backend='flow').pixels
        ba = interpolate(b, a, 0.5, backend='flow').pixels
        assert np.abs(ab - ba)[INNER].mean() < 1e-3

    def test_fast_blob_against_analytic_midframe(self):
        spec = SceneSpec(256, 256, 2, [GaussianBlob((100, 128), 6, 0.8,
            velocity=(8, 0))], background=0.1)
        a, mid, b = [radiance_to_ldr(procedural_scene(spec, t), 1.0)
                for t in (0, 0.5, 1)]
        p_flow = psnr(interpolate(a, b, 0.5, backend='flow').pixels,
                mid.pixels)
        p_blend = psnr(interpolate(a, b, 0.5, backend='blend').pixels,
                mid.pixels)
        assert p_flow >= 35.0
        assert p_flow >= p_blend + 5.0
