"""Shared fixtures: procedural scenes, small alternating sequences."""

import numpy as np
import pytest
from scipy import ndimage

from hdrinterp.config import conf
from hdrinterp.dataset import (ExposureProgram, GaussianBlob, SceneSpec,
        render_sequence, simulate_alternating)
from hdrinterp.radiometry import HIGH, LdrFrame, RadianceFrame, quantize


@pytest.fixture(autouse=True)
def default_config():
    """Every test starts and ends on the packaged defaults, single-threaded."""
    conf.reset()
    conf.run['threads'] = 1
    yield conf
    conf.reset()


@pytest.fixture
def textured_pixels():
    """Smoothed noise texture in [0.2, 0.8], shape (128, 128, 3)."""
    def make(size=128, seed=7, sigma=3.0):
        rng = np.random.default_rng(seed)
        base = ndimage.gaussian_filter(rng.random((size, size)), sigma,
                mode='wrap')
        base = (base - base.min()) / (base.max() - base.min())
        grey = 0.2 + 0.6 * base
        return np.repeat(grey[..., np.newaxis], 3, axis=2)
    return make


@pytest.fixture
def ldr():
    """Build an LdrFrame quickly: ldr(pixels, tag='H', dt=1.0, bits=None)."""
    def make(pixels, tag=HIGH, dt=1.0, bits=None):
        return LdrFrame(quantize(np.asarray(pixels, dtype=np.float64), bits),
                dt, tag, bit_depth=bits)
    return make


@pytest.fixture
def static_scene():
    """Static blob on a dim background; nothing clips at 2 stops."""
    return SceneSpec(64, 64, 5, [GaussianBlob((32, 32), 8, 0.5)],
            background=0.1)


@pytest.fixture
def moving_blob_scene():
    """Blob moving 4 px/frame to the right."""
    return SceneSpec(128, 128, 9, [GaussianBlob((40, 64), 8, 3.0,
        velocity=(4, 0))], background=0.1)


@pytest.fixture
def capture():
    """Render a scene and capture it with a 2-stop alternating program."""
    def make(spec, stops=2, bits=16, start_tag=HIGH, n=None):
        times = range(spec.duration if n is None else n)
        gt = render_sequence(spec, times)
        seq, manifest = simulate_alternating(gt,
                ExposureProgram(1.0, stops, start_tag), bit_depth=bits)
        return gt, seq, manifest
    return make


@pytest.fixture
def constant_radiance():
    def make(value, size=16):
        return RadianceFrame(np.full((size, size, 3), float(value)))
    return make
