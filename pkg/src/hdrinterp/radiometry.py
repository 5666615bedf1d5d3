"""
Core frame types and conversions between gamma-encoded LDR values and linear
radiance under a power-law camera response.

Pixel buffers are numpy arrays of shape (height, width, 3), row-major, held at
double precision. Frames are treated as immutable: their arrays are marked
read-only, and every operation returns a new frame.
"""

import numpy as np

from hdrinterp.config import conf
from hdrinterp.errors import (InvalidInputError, InvalidParameterError,
        ShapeError)

HIGH = 'H'
LOW = 'L'
TAGS = (HIGH, LOW)
BIT_DEPTHS = (8, 16, None)


def other_tag(tag):
    """Return the opposite exposure tag"""
    return LOW if tag == HIGH else HIGH


def as_pixels(data, name='pixels'):
    """
    Validate and copy an array into a read-only (H, W, 3) float64 buffer.

    Raises
    ------
    ShapeError
        if the array is not (H, W, 3)
    InvalidInputError
        if any sample is not finite
    """
    arr = np.array(data, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ShapeError('{0} must have shape (height, width, 3), got '
                '{1}'.format(name, arr.shape))
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError('{0} contain non-finite samples'.format(name))
    arr.flags.writeable = False
    return arr


def check_same_shape(*frames):
    """Raise ShapeError unless all frames share dimensions"""
    shapes = set(f.shape for f in frames)
    if len(shapes) > 1:
        raise ShapeError('Frame dimensions differ: {0}'.format(
            sorted(shapes)))


def quantize(values, bit_depth):
    """
    Quantize [0,1] samples to 2^b - 1 levels, rounding half up.
    Unquantized (bit_depth None) values are returned unchanged.
    """
    if bit_depth is None:
        return values
    if bit_depth not in (8, 16):
        raise InvalidParameterError('bit_depth must be 8, 16 or None')
    maxval = 2 ** bit_depth - 1
    return np.floor(values * maxval + 0.5) / maxval


class Provenance:
    """
    Whether a frame was captured (real) or synthesized, and at which
    recursion level it was synthesized (0 = exposure completion).
    """

    def __init__(self, kind='real', level=None):
        if kind not in ('real', 'synth'):
            raise InvalidParameterError('Provenance kind must be real or '
                    'synth')
        if kind == 'real' and level is not None:
            raise InvalidParameterError('Real frames carry no level')
        if kind == 'synth' and (level is None or level < 0):
            raise InvalidParameterError('Synthesized frames need a level '
                    '>= 0')
        self.kind = kind
        self.level = None if level is None else int(level)

    @property
    def is_real(self):
        return self.kind == 'real'

    def __eq__(self, other):
        return (isinstance(other, Provenance) and self.kind == other.kind
                and self.level == other.level)

    def __hash__(self):
        return hash((self.kind, self.level))

    def __repr__(self):
        if self.is_real:
            return 'Provenance(real)'
        return 'Provenance(synth, level={0})'.format(self.level)


REAL = Provenance('real')


def synthesized(level):
    return Provenance('synth', level)


class Crf:
    """
    Power-law camera response v = (H * dt)^(1/gamma)
    """

    def __init__(self, gamma=None):
        if gamma is None:
            gamma = conf.radiometry['gamma']
        if not gamma > 0:
            raise InvalidParameterError('gamma must be > 0')
        self.gamma = float(gamma)

    def __repr__(self):
        return 'Crf(gamma={0})'.format(self.gamma)


class LdrFrame:
    """
    Gamma-encoded frame with samples in [0,1], an exposure time (seconds),
    an exposure tag ('H' or 'L'), a bit depth (8, 16 or None for
    unquantized) and a provenance.
    """

    def __init__(self, pixels, exposure_time, tag, bit_depth=None,
            provenance=REAL):
        self.pixels = as_pixels(pixels)
        if np.any(self.pixels < 0) or np.any(self.pixels > 1):
            raise InvalidInputError('LDR samples must lie in [0, 1]')
        if not exposure_time > 0:
            raise InvalidParameterError('exposure_time must be > 0')
        if tag not in TAGS:
            raise InvalidParameterError('tag must be H or L, got '
                    '{0!r}'.format(tag))
        if bit_depth not in BIT_DEPTHS:
            raise InvalidParameterError('bit_depth must be 8, 16 or None')
        if bit_depth is not None:
            maxval = 2 ** bit_depth - 1
            steps = self.pixels * maxval
            if not np.allclose(steps, np.round(steps), rtol=0, atol=1e-6):
                raise InvalidInputError('Samples are not quantized to '
                        '{0} bits'.format(bit_depth))
        self.exposure_time = float(exposure_time)
        self.tag = tag
        self.bit_depth = bit_depth
        self.provenance = provenance

    @property
    def shape(self):
        return self.pixels.shape

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    def replace(self, **kwargs):
        """Return a copy with some attributes replaced"""
        fields = dict(pixels=self.pixels, exposure_time=self.exposure_time,
                tag=self.tag, bit_depth=self.bit_depth,
                provenance=self.provenance)
        fields.update(kwargs)
        return LdrFrame(**fields)

    def __repr__(self):
        return 'LdrFrame({0}x{1}, dt={2}, tag={3}, bits={4}, {5})'.format(
                self.width, self.height, self.exposure_time, self.tag,
                self.bit_depth, self.provenance)


class RadianceFrame:
    """
    Linear HDR frame of non-negative relative (unitless) radiance
    """

    def __init__(self, pixels, provenance=REAL):
        self.pixels = as_pixels(pixels)
        if np.any(self.pixels < 0):
            raise InvalidInputError('Radiance samples must be >= 0')
        self.provenance = provenance

    @property
    def shape(self):
        return self.pixels.shape

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    def __repr__(self):
        return 'RadianceFrame({0}x{1}, max={2:.6g}, {3})'.format(
                self.width, self.height, float(self.pixels.max(initial=0)),
                self.provenance)


def ldr_to_radiance(frame, crf=None):
    """
    Invert the camera response: H = v^gamma / dt for each sample.

    A saturated sample (v = 1) maps to 1/dt, the largest radiance the
    exposure can represent.
    """
    if crf is None:
        crf = Crf()
    return RadianceFrame(np.power(frame.pixels, crf.gamma)
            / frame.exposure_time, provenance=frame.provenance)


def radiance_to_ldr(frame, exposure_time, crf=None, bit_depth=None, tag=HIGH,
        provenance=None):
    """
    Form an LDR frame: v = clip((H * dt)^(1/gamma), 0, 1), then quantize.

    Parameters
    ----------
    frame : RadianceFrame
    exposure_time : float
        seconds, > 0
    crf : Crf, optional
    bit_depth : 8, 16 or None
        None leaves samples unquantized
    tag : 'H' or 'L'
        exposure tag assigned by the caller
    provenance : Provenance, optional
        defaults to the radiance frame's provenance

    Returns
    -------
    LdrFrame
    """
    if crf is None:
        crf = Crf()
    if not exposure_time > 0:
        raise InvalidParameterError('exposure_time must be > 0')
    if provenance is None:
        provenance = frame.provenance
    v = np.clip(np.power(frame.pixels * exposure_time, 1.0 / crf.gamma),
            0.0, 1.0)
    return LdrFrame(quantize(v, bit_depth), exposure_time, tag,
            bit_depth=bit_depth, provenance=provenance)
