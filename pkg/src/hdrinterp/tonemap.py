"""
Tonemapping: mu-law compression for losses and metrics, and a global
Reinhard operator for displayable 8-bit exports.
"""

import numpy as np

from hdrinterp.config import conf
from hdrinterp.errors import InvalidInputError, InvalidParameterError
from hdrinterp.radiometry import (RadianceFrame, LdrFrame, Crf, HIGH,
        quantize)

# Rec. 709 luminance weights
LUMA = np.array([0.2126, 0.7152, 0.0722])


class MuLawParams:
    """mu-law compression amount (mu > 0)"""

    def __init__(self, mu=None):
        if mu is None:
            mu = conf.tonemap['mu']
        if not mu > 0:
            raise InvalidParameterError('mu must be > 0')
        self.mu = float(mu)


class ReinhardParams:
    """Global Reinhard key value and log-mean guard"""

    def __init__(self, key_value=None, epsilon=None):
        if key_value is None:
            key_value = conf.tonemap['key_value']
        if epsilon is None:
            epsilon = conf.tonemap['epsilon']
        if not key_value > 0:
            raise InvalidParameterError('key_value must be > 0')
        if not epsilon > 0:
            raise InvalidParameterError('epsilon must be > 0')
        self.key_value = float(key_value)
        self.epsilon = float(epsilon)


def normalize_radiance(frame, reference_max):
    """
    Divide by reference_max and clamp to [0,1].

    Metrics divide prediction and ground truth by the same constant (the
    ground truth max); standalone exports divide by the frame's own max.
    """
    if not reference_max > 0:
        raise InvalidParameterError('reference_max must be > 0, got '
                '{0}'.format(reference_max))
    return RadianceFrame(np.clip(frame.pixels / reference_max, 0.0, 1.0),
            provenance=frame.provenance)


def mu_law(frame, params=None):
    """
    T(x) = log(1 + mu x) / log(1 + mu) on normalized samples.

    Accepts a RadianceFrame or a raw array; returns an array.
    """
    if params is None:
        params = MuLawParams()
    x = frame.pixels if isinstance(frame, RadianceFrame) else np.asarray(
            frame, dtype=np.float64)
    if not np.all(np.isfinite(x)) or np.any(x < 0) or np.any(x > 1):
        raise InvalidInputError('mu-law input must be normalized to [0, 1]')
    return np.log1p(params.mu * x) / np.log1p(params.mu)


def luminance(pixels):
    return pixels @ LUMA


def reinhard_display(frame, params=None, crf=None):
    """
    Global Reinhard operator for display.

    Luminance is scaled by key/exp(mean(log(L + eps))), compressed as
    L/(1 + L), color ratios are kept, and the result is gamma-encoded and
    quantized to 8 bits.
    """
    if params is None:
        params = ReinhardParams()
    if crf is None:
        crf = Crf()
    if frame.pixels.size == 0:
        raise InvalidInputError('Cannot tonemap a zero-area frame')
    rgb = frame.pixels
    lum = luminance(rgb)
    log_mean = np.exp(np.mean(np.log(lum + params.epsilon)))
    scaled = params.key_value / log_mean * lum
    compressed = scaled / (1.0 + scaled)
    ratio = np.divide(compressed, lum, out=np.zeros_like(lum),
            where=lum > 0)
    display = np.clip(rgb * ratio[..., np.newaxis], 0.0, 1.0)
    encoded = np.power(display, 1.0 / crf.gamma)
    return LdrFrame(quantize(encoded, 8), 1.0, HIGH, bit_depth=8,
            provenance=frame.provenance)


def mu_law_display(frame, params=None):
    """
    8-bit mu-law export, normalized by the frame's own max
    """
    if frame.pixels.size == 0:
        raise InvalidInputError('Cannot tonemap a zero-area frame')
    peak = float(frame.pixels.max())
    if peak == 0:
        tonemapped = np.zeros(frame.shape)
    else:
        tonemapped = mu_law(normalize_radiance(frame, peak), params)
    return LdrFrame(quantize(tonemapped, 8), 1.0, HIGH, bit_depth=8,
            provenance=frame.provenance)
