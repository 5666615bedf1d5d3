"""
Fuse an aligned high/low exposure pair at one timestamp into a radiance frame.

Per-pixel attention weights come from a deterministic well-exposedness hat
function: full trust at mid-tones, a floor of w_min at saturation (both
exposures) and in the noise floor (low exposure). The merge is channel-wise
and synthesizes every pixel from both exposures.
"""

import numpy as np

from hdrinterp.config import conf
from hdrinterp.errors import (DegeneratePairError, ExposureMismatchError,
        InvalidParameterError)
from hdrinterp.radiometry import (HIGH, LOW, Crf, RadianceFrame, REAL,
        check_same_shape, ldr_to_radiance, synthesized)


class AttentionMaps:
    """
    Per-pixel merge weights for the high and low exposure, in [0,1]. The
    two maps are not normalized against each other; merge_hdr divides by
    their sum.
    """

    def __init__(self, w_high, w_low):
        self.w_high = np.asarray(w_high, dtype=np.float64)
        self.w_low = np.asarray(w_low, dtype=np.float64)
        if self.w_high.shape != self.w_low.shape:
            raise InvalidParameterError('Attention maps differ in shape')
        for name, w in (('w_high', self.w_high), ('w_low', self.w_low)):
            if not np.all((w >= 0) & (w <= 1)):
                raise InvalidParameterError('{0} holds weights outside '
                        '[0, 1]'.format(name))


def hat(v, w_min, saturation):
    """
    clamp(min(v, 1 - v) / 0.5, w_min, 1), forced to w_min at saturation
    """
    w = np.clip(np.minimum(v, 1.0 - v) / 0.5, w_min, 1.0)
    return np.where(v >= saturation, w_min, w)


def hat_low(v, w_min, saturation, dark):
    w = hat(v, w_min, saturation)
    return np.where(v <= dark, w_min, w)


def split_pair(a, b):
    """Return (high, low) from a tagged pair given in either order"""
    if {a.tag, b.tag} != {HIGH, LOW}:
        raise ExposureMismatchError('Merge needs one H and one L frame, got '
                '{0} and {1}'.format(a.tag, b.tag))
    return (a, b) if a.tag == HIGH else (b, a)


def attention_weights(high, low, w_min=None, saturation=None, dark=None):
    """
    Well-exposedness attention for an aligned high/low pair.

    Arguments
    ---------
        high, low  : LdrFrame pair tagged H and L
        w_min      : weight floor (default merge.w_min)
        saturation : samples at or above this get w_min (default 0.995)
        dark       : low-exposure samples at or below this get w_min
    Returns
    -------
        AttentionMaps
    """
    mc = conf.merge
    w_min = mc['w_min'] if w_min is None else w_min
    saturation = mc['saturation'] if saturation is None else saturation
    dark = mc['dark'] if dark is None else dark
    if not 0 < w_min <= 1:
        raise InvalidParameterError('w_min must lie in (0, 1]')
    if high.tag != HIGH or low.tag != LOW:
        raise ExposureMismatchError('attention_weights expects (H, L), got '
                '({0}, {1})'.format(high.tag, low.tag))
    check_same_shape(high, low)
    return AttentionMaps(hat(high.pixels, w_min, saturation),
            hat_low(low.pixels, w_min, saturation, dark))


def merge_hdr(a, b, crf=None, **kwargs):
    """
    Merge a high/low pair (either order) in the radiance domain:

        H = (w_high H_high + w_low H_low) / (w_high + w_low)

    The w_min floor keeps the denominator positive. kwargs go to
    attention_weights.

    Raises
    ------
    ExposureMismatchError
        tags are not one H and one L, or the H frame has the shorter exposure
    DegeneratePairError
        both exposure times are equal
    """
    if crf is None:
        crf = Crf()
    high, low = split_pair(a, b)
    if high.exposure_time == low.exposure_time:
        raise DegeneratePairError('High and low exposures are both '
                '{0}s'.format(high.exposure_time))
    if high.exposure_time < low.exposure_time:
        raise ExposureMismatchError('High exposure ({0}s) is shorter than low '
                '({1}s)'.format(high.exposure_time, low.exposure_time))
    att = attention_weights(high, low, **kwargs)
    h_high = ldr_to_radiance(high, crf).pixels
    h_low = ldr_to_radiance(low, crf).pixels
    merged = ((att.w_high * h_high + att.w_low * h_low)
            / (att.w_high + att.w_low))
    return RadianceFrame(merged, provenance=merged_provenance(high, low))


def merged_provenance(high, low):
    """
    A merged frame is real when it is anchored on a captured frame
    """
    if high.provenance.is_real or low.provenance.is_real:
        return REAL
    return synthesized(max(high.provenance.level, low.provenance.level))
