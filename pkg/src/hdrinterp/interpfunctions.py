"""
Functions that can be called to synthesize a frame at fractional time tau
between two frames of the same exposure. These are generally called from the
interpolate function in the interp module, which validates the pair and
handles the identity case. Functions take (a, b, tau, **kwargs) and return a
pixel array with samples in [0,1].

A new backend is added by writing a function here and listing its name in
`backends`.
"""

import hdrinterp.flow as hflow

backends = ['blend', 'flow']


def blend(a, b, tau, **kwargs):
    """
    Alignment-free cross-fade, (1 - tau) a + tau b
    """
    return (1.0 - tau) * a.pixels + tau * b.pixels


def flow(a, b, tau, sigma_v=None, **kwargs):
    """
    Bidirectional flow interpolation with visibility masks.

    Both frames are warped to time tau under a linear motion model,
    F_tau->a = -tau F_ab and F_tau->b = -(1 - tau) F_ba, and blended with
    forward-backward consistency visibility. Remaining kwargs go to
    flow.estimate_flow.
    """
    f_ab = hflow.estimate_flow(a, b, **kwargs)
    f_ba = hflow.estimate_flow(b, a, **kwargs)
    warp_a = hflow.warp_backward(a, f_ab, -tau)
    warp_b = hflow.warp_backward(b, f_ba, -(1.0 - tau))
    vis_a = hflow.visibility(f_ab, f_ba, sigma_v)
    vis_b = hflow.visibility(f_ba, f_ab, sigma_v)
    return hflow.blend_with_visibility(warp_a, warp_b, vis_a, vis_b,
            tau).pixels
