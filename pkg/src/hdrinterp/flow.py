"""
Dense optical flow, backward warping and visibility-weighted blending used by
the flow interpolation backend.

Flow is estimated coarse-to-fine with an iterative Lucas-Kanade solver on a
Gaussian pyramid (grey levels averaged over RGB). Vectors are stored as
(dx, dy) in pixels per frame, indexed [row, column].
"""

import numpy as np
from scipy import ndimage

from hdrinterp.config import conf
from hdrinterp.errors import (ExposureMismatchError, InvalidInputError,
        InvalidParameterError, ShapeError, TooSmallError)
from hdrinterp.radiometry import check_same_shape


class FlowField:
    """
    Per-pixel displacement (dx, dy), shape (height, width, 2)
    """

    def __init__(self, vectors):
        vectors = np.array(vectors, dtype=np.float64)
        if vectors.ndim != 3 or vectors.shape[2] != 2:
            raise ShapeError('Flow vectors must have shape (height, width, '
                    '2), got {0}'.format(vectors.shape))
        if not np.all(np.isfinite(vectors)):
            raise InvalidInputError('Flow contains non-finite vectors')
        vectors.flags.writeable = False
        self.vectors = vectors

    @classmethod
    def zeros(cls, height, width):
        return cls(np.zeros((height, width, 2)))

    @property
    def height(self):
        return self.vectors.shape[0]

    @property
    def width(self):
        return self.vectors.shape[1]

    @property
    def dx(self):
        return self.vectors[..., 0]

    @property
    def dy(self):
        return self.vectors[..., 1]


class VisibilityMap:
    """
    Per-pixel trust in a warped source, values in [0,1]
    """

    def __init__(self, weights):
        weights = np.array(weights, dtype=np.float64)
        if weights.ndim != 2:
            raise ShapeError('Visibility must be a 2-D map')
        if (not np.all(np.isfinite(weights)) or np.any(weights < 0)
                or np.any(weights > 1)):
            raise InvalidInputError('Visibility weights must lie in [0, 1]')
        weights.flags.writeable = False
        self.weights = weights

    @classmethod
    def ones(cls, height, width):
        return cls(np.ones((height, width)))


def remap(arr, dx, dy):
    """
    Bilinear backward sampling arr(y + dy, x + dx) with clamp-to-edge.
    Works on (H, W) and (H, W, C) arrays.
    """
    h, w = arr.shape[:2]
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    coords = [np.clip(yy + dy, 0, h - 1), np.clip(xx + dx, 0, w - 1)]
    if arr.ndim == 2:
        return ndimage.map_coordinates(arr, coords, order=1, mode='nearest')
    return np.stack([ndimage.map_coordinates(arr[..., c], coords, order=1,
        mode='nearest') for c in range(arr.shape[2])], axis=-1)


def grey(frame):
    return frame.pixels.mean(axis=2)


def pyramid_levels(height, width, min_size=None):
    """
    Number of factor-2 downsampling steps, floor(log2(min(W,H)/min_size))
    """
    if min_size is None:
        min_size = conf.flow['min_size']
    m = min(height, width)
    if m < min_size:
        raise TooSmallError('Frames of {0}x{1} are smaller than the {2}x{2} '
                'minimum for flow estimation'.format(width, height, min_size))
    levels = 0
    while min_size * 2 ** (levels + 1) <= m:
        levels += 1
    return levels


def build_pyramid(img, levels, presmooth_sigma):
    pyr = [ndimage.gaussian_filter(img, presmooth_sigma, mode='nearest')]
    for _ in range(levels):
        pyr.append(ndimage.gaussian_filter(pyr[-1], 1.0,
            mode='nearest')[::2, ::2])
    return pyr


def upsample_flow(flow, shape):
    """
    Resample a coarse flow onto the next finer grid and double it
    """
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    hc, wc = flow.shape[:2]
    coords = [np.clip(yy / 2.0, 0, hc - 1), np.clip(xx / 2.0, 0, wc - 1)]
    return np.stack([2.0 * ndimage.map_coordinates(flow[..., c], coords,
        order=1, mode='nearest') for c in range(2)], axis=-1)


def refine_flow(ga, gb, flow, iterations, window_sigma, regularization,
        max_step, median_size):
    """
    Iterative Lucas-Kanade refinement at one pyramid level.

    Solves the regularized 2x2 structure-tensor system per pixel, so
    textureless regions get a zero update instead of a NaN.
    """
    for _ in range(iterations):
        bw = remap(gb, flow[..., 0], flow[..., 1])
        diff = bw - ga
        gy, gx = np.gradient(0.5 * (ga + bw))
        sxx = ndimage.gaussian_filter(gx * gx, window_sigma, mode='nearest')
        sxy = ndimage.gaussian_filter(gx * gy, window_sigma, mode='nearest')
        syy = ndimage.gaussian_filter(gy * gy, window_sigma, mode='nearest')
        sxt = ndimage.gaussian_filter(gx * diff, window_sigma, mode='nearest')
        syt = ndimage.gaussian_filter(gy * diff, window_sigma, mode='nearest')
        a = sxx + regularization
        d = syy + regularization
        det = a * d - sxy * sxy
        du = (-d * sxt + sxy * syt) / det
        dv = (sxy * sxt - a * syt) / det
        step = np.clip(np.stack([du, dv], axis=-1), -max_step, max_step)
        flow = flow + step
    if median_size > 1:
        flow = np.stack([ndimage.median_filter(flow[..., c], size=median_size,
            mode='nearest') for c in range(2)], axis=-1)
    return flow


def estimate_flow(a, b, iterations=None, window_sigma=None,
        presmooth_sigma=None, regularization=None, max_step=None,
        median_size=None, min_size=None):
    """
    Estimate dense flow from frame a to frame b, a(p) ~ b(p + F(p)).

    Parameters
    ----------
    a, b : LdrFrame
        same dimensions and exposure tag
    iterations, window_sigma, presmooth_sigma, regularization, max_step,
    median_size, min_size : optional
        solver settings, defaulting to the `flow` configuration section

    Returns
    -------
    FlowField
        clipped to the search range the pyramid can reach

    Raises
    ------
    ExposureMismatchError, ShapeError, TooSmallError
    """
    fc = conf.flow
    iterations = fc['iterations'] if iterations is None else iterations
    window_sigma = fc['window_sigma'] if window_sigma is None else window_sigma
    presmooth_sigma = (fc['presmooth_sigma'] if presmooth_sigma is None
            else presmooth_sigma)
    regularization = (fc['regularization'] if regularization is None
            else regularization)
    max_step = fc['max_step'] if max_step is None else max_step
    median_size = fc['median_size'] if median_size is None else median_size
    if not regularization > 0:
        raise InvalidParameterError('Flow regularization must be > 0')

    if a.tag != b.tag:
        raise ExposureMismatchError('Flow needs frames of the same exposure '
                '({0} vs {1})'.format(a.tag, b.tag))
    check_same_shape(a, b)
    levels = pyramid_levels(a.height, a.width, min_size)

    pyr_a = build_pyramid(grey(a), levels, presmooth_sigma)
    pyr_b = build_pyramid(grey(b), levels, presmooth_sigma)
    flow = np.zeros(pyr_a[-1].shape + (2,))
    for lvl in range(levels, -1, -1):
        if flow.shape[:2] != pyr_a[lvl].shape:
            flow = upsample_flow(flow, pyr_a[lvl].shape)
        flow = refine_flow(pyr_a[lvl], pyr_b[lvl], flow, iterations,
                window_sigma, regularization, max_step, median_size)

    bound = max_step * iterations * (2 ** (levels + 1) - 1)
    return FlowField(np.clip(flow, -bound, bound))


def warp_backward(frame, flow, scale=1.0):
    """
    out(p) = frame(p + scale * flow(p)), bilinear, clamped at the borders
    """
    if (flow.height, flow.width) != (frame.height, frame.width):
        raise ShapeError('Flow is {0}x{1} but frame is {2}x{3}'.format(
            flow.width, flow.height, frame.width, frame.height))
    if scale == 0:
        return frame.replace(pixels=frame.pixels.copy())
    warped = remap(frame.pixels, scale * flow.dx, scale * flow.dy)
    return frame.replace(pixels=np.clip(warped, 0.0, 1.0), bit_depth=None)


def visibility(flow_ab, flow_ba, sigma_v=None):
    """
    Forward-backward consistency visibility for the source of flow_ab:
    V(p) = exp(-|F_ab(p) + F_ba(p + F_ab(p))| / sigma_v)
    """
    if sigma_v is None:
        sigma_v = conf.flow['sigma_v']
    if not sigma_v > 0:
        raise InvalidParameterError('sigma_v must be > 0')
    if flow_ab.vectors.shape != flow_ba.vectors.shape:
        raise ShapeError('Forward and backward flows differ in shape')
    back = remap(flow_ba.vectors, flow_ab.dx, flow_ab.dy)
    err = np.hypot(flow_ab.dx + back[..., 0], flow_ab.dy + back[..., 1])
    return VisibilityMap(np.exp(-err / sigma_v))


def blend_with_visibility(warp_a, warp_b, vis_a, vis_b, tau, eps=None):
    """
    Visibility-weighted blend of two warped sources at time tau:

        out = [(1-tau) V_a W_a + tau V_b W_b] / [(1-tau) V_a + tau V_b]

    Pixels whose denominator is below eps fall back to the plain average.
    """
    if eps is None:
        eps = conf.flow['blend_eps']
    if not 0 <= tau <= 1:
        raise InvalidParameterError('tau must lie in [0, 1]')
    check_same_shape(warp_a, warp_b)
    if (vis_a.weights.shape != warp_a.shape[:2]
            or vis_b.weights.shape != warp_a.shape[:2]):
        raise ShapeError('Visibility maps do not match the warped frames')
    wa = (1.0 - tau) * vis_a.weights[..., np.newaxis]
    wb = tau * vis_b.weights[..., np.newaxis]
    den = wa + wb
    num = wa * warp_a.pixels + wb * warp_b.pixels
    fallback = 0.5 * (warp_a.pixels + warp_b.pixels)
    out = np.where(den < eps, fallback, num / np.maximum(den, eps))
    return warp_a.replace(pixels=np.clip(out, 0.0, 1.0), bit_depth=None)
