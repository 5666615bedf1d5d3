"""
Frame interpolation between two same-exposure LDR frames.

Interpolation backends live in the interpfunctions module and are selected
by name.
"""

import numpy as np

from hdrinterp import interpfunctions
from hdrinterp.config import message
from hdrinterp.errors import ExposureMismatchError, InvalidParameterError
from hdrinterp.radiometry import LdrFrame, check_same_shape, synthesized


def get_interpfunction(backend):
    """Get the interpolation function registered under a backend name

    Arguments
    ---------
    backend : string
        one of interpfunctions.backends

    Returns
    -------
    The backend function

    """
    if backend not in interpfunctions.backends:
        raise InvalidParameterError('Unknown interpolation backend {0!r}, '
                'available backends are {1}'.format(backend,
                    interpfunctions.backends))
    return getattr(interpfunctions, backend)


def check_pair(a, b):
    """Raise unless a and b can be interpolated against each other"""
    if a.tag != b.tag or a.exposure_time != b.exposure_time:
        raise ExposureMismatchError('Cannot interpolate {0} (dt={1}) with {2} '
                '(dt={3})'.format(a.tag, a.exposure_time, b.tag,
                    b.exposure_time))
    check_same_shape(a, b)


def interpolate(a, b, tau=0.5, backend='flow', level=0, **kwargs):
    """
    Synthesize the frame at time tau between a (tau = 0) and b (tau = 1).

    Arguments
    ---------
        a, b    : LdrFrame pair with the same tag, exposure and dimensions
        tau     : fraction in (0, 1)
        backend : interpolation backend name ('blend' or 'flow')
        level   : recursion level recorded in the output provenance
        kwargs  : passed on to the backend function
    Returns
    -------
        LdrFrame carrying a's tag and exposure time, marked synthesized.
        Identical inputs return a copy of a.
    """
    if not 0 < tau < 1:
        raise InvalidParameterError('tau must lie in (0, 1), got '
                '{0}'.format(tau))
    check_pair(a, b)
    func = get_interpfunction(backend)
    if np.array_equal(a.pixels, b.pixels):
        pixels, bit_depth = a.pixels.copy(), a.bit_depth
    else:
        message('Interpolate {0} at tau={1}, using {2}.'.format(a.tag, tau,
            backend), level=2)
        pixels = np.clip(func(a, b, tau, **kwargs), 0.0, 1.0)
        bit_depth = None
    return LdrFrame(pixels, a.exposure_time, a.tag, bit_depth=bit_depth,
            provenance=synthesized(level))
