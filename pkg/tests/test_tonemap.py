import numpy as np
import pytest

from hdrinterp.errors import InvalidInputError, InvalidParameterError
from hdrinterp.radiometry import HIGH, RadianceFrame
from hdrinterp.tonemap import (MuLawParams, ReinhardParams, luminance,
        mu_law, mu_law_display, normalize_radiance, reinhard_display)


class TestMuLaw:

    def test_endpoints(self):
        np.testing.assert_allclose(mu_law(np.array([0.0, 1.0])), [0.0, 1.0])

    def test_known_value(self):
        x = np.array([0.5])
        expected = np.log(1 + 5000 * 0.5) / np.log(5001)
        np.testing.assert_allclose(mu_law(x), expected)

    def test_monotone(self):
        x = np.linspace(0, 1, 1001)
        assert np.all(np.diff(mu_law(x)) > 0)

    def test_accepts_radiance_frame(self):
        f = RadianceFrame(np.full((2, 2, 3), 0.25))
        np.testing.assert_allclose(mu_law(f, MuLawParams(10)),
                np.log1p(2.5) / np.log1p(10))

    def test_unnormalized_input(self):
        with pytest.raises(InvalidInputError):
            mu_law(np.array([1.5]))

    def test_bad_mu(self):
        with pytest.raises(InvalidParameterError):
            MuLawParams(0)


class TestNormalize:

    def test_clamps(self):
        f = RadianceFrame(np.array([[[0.0, 1.0, 4.0]]]))
        np.testing.assert_allclose(normalize_radiance(f, 2.0).pixels,
                [[[0.0, 0.5, 1.0]]])

    def test_bad_reference(self):
        with pytest.raises(InvalidParameterError):
            normalize_radiance(RadianceFrame(np.zeros((1, 1, 3))), 0.0)


class TestReinhard:

    def test_output_is_8bit_display_frame(self):
        rng = np.random.default_rng(1)
        f = RadianceFrame(10 * rng.random((16, 16, 3)))
        out = reinhard_display(f)
        assert out.bit_depth == 8
        assert out.tag == HIGH and out.exposure_time == 1.0
        assert out.pixels.min() >= 0 and out.pixels.max() <= 1

    def test_grey_frame_maps_key_value(self):
        # constant luminance L: scaled = key, display = key / (1 + key)
        f = RadianceFrame(np.full((4, 4, 3), 3.0))
        out = reinhard_display(f, ReinhardParams(0.18, 1e-12))
        expected = (0.18 / 1.18) ** (1 / 2.2)
        np.testing.assert_allclose(out.pixels, expected, atol=0.5 / 255)

    def test_keeps_colour_ratios(self):
        px = np.zeros((4, 4, 3))
        px[..., 0] = 2.0
        px[..., 1] = 1.0
        out = reinhard_display(RadianceFrame(px))
        assert np.all(out.pixels[..., 0] > out.pixels[..., 1])
        assert np.all(out.pixels[..., 2] == 0)

    def test_black_frame(self):
        out = reinhard_display(RadianceFrame(np.zeros((4, 4, 3))))
        assert np.all(out.pixels == 0)

    def test_zero_area(self):
        with pytest.raises(InvalidInputError):
            reinhard_display(RadianceFrame(np.zeros((0, 4, 3))))

    def test_luminance_weights(self):
        np.testing.assert_allclose(luminance(np.ones((1, 3))), [1.0])


class TestMuLawDisplay:

    def test_peak_maps_to_white(self):
        px = np.zeros((2, 2, 3))
        px[0, 0] = 8.0
        out = mu_law_display(RadianceFrame(px))
        assert out.bit_depth == 8
        np.testing.assert_allclose(out.pixels[0, 0], 1.0)
        np.testing.assert_allclose(out.pixels[1, 1], 0.0)

    def test_black_frame(self):
        out = mu_law_display(RadianceFrame(np.zeros((2, 2, 3))))
        assert np.all(out.pixels == 0)


class TestMuLawShape:

    def test_tenth(self):
        np.testing.assert_allclose(mu_law(np.array([0.1])), 0.729872,
                atol=1e-6)

    def test_concave_and_increasing(self):
        y = mu_law(np.linspace(0, 1, 1000))
        assert np.all(np.diff(y) > 0)
        assert np.all(np.diff(y, 2) < 0)


class TestReinhardScale:

    @pytest.mark.parametrize('scale', [0.01, 4.0, 250.0])
    def test_exposure_scale_invariant(self, scale):
        rng = np.random.default_rng(6)
        px = 0.05 + rng.random((16, 16, 3))
        params = ReinhardParams(0.18, 1e-12)
        a = reinhard_display(RadianceFrame(px), params).pixels
        b = reinhard_display(RadianceFrame(px * scale), params).pixels
        np.testing.assert_allclose(a, b, atol=1.0 / 255 + 1e-12)
