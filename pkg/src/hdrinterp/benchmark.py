"""
Frame-rate degradation benchmark on procedural scenes.

A scene is captured with an alternating exposure program at source spacing
s (every s-th ground-truth frame), reconstructed, upscaled by s back to the
full rate and scored at the integer timestamps that every factor covers.
Wider spacing means interpolating across larger motion, so accuracy is
expected to drop as s grows.
"""

import pandas as pd

from hdrinterp.config import conf, message, tcol
from hdrinterp.dataset import (ExposureProgram, render_sequence,
        simulate_alternating)
from hdrinterp.errors import InvalidParameterError, TooShortError
from hdrinterp.metrics import sequence_report
from hdrinterp.scheduler import (complete_exposure_streams, factor_to_levels,
        upscale_fps)

BENCHMARK_COLUMNS = ['backend', 'factor', 'frames', 'mu_psnr_db', 'l1',
        'synth_frames', 'synth_mu_psnr_db', 'synth_l1']


def source_count(duration, factor):
    return (duration - 1) // factor + 1


def evaluation_window(duration, factors):
    """
    Integer timestamps reconstructed by every factor: factor s loses its
    first and last source frame, so covers [s, (n_s - 2) s].
    """
    lo = max(factors)
    hi = min((source_count(duration, s) - 2) * s for s in factors)
    if hi < lo:
        raise TooShortError('Scene of {0} frames is too short for factors '
                '{1}'.format(duration, list(factors)))
    return lo, hi


def reconstruct_at_factor(spec, factor, program, backend='flow',
        bit_depth=None, noise_sigma=None, seed=None, threads=None, **kwargs):
    """
    Capture every `factor`-th frame of a scene and upscale back by `factor`.

    Returns
    -------
        dict of full-rate integer time -> merged RadianceFrame
    """
    k = factor_to_levels(factor)
    times = range(0, spec.duration, factor)
    if len(times) < 3:
        raise TooShortError('Factor {0} leaves {1} source frames'.format(
            factor, len(times)))
    gt = render_sequence(spec, times)
    seq, _ = simulate_alternating(gt, program, bit_depth=bit_depth,
            noise_sigma=noise_sigma, seed=seed)
    streams = complete_exposure_streams(seq, backend, threads, **kwargs)
    out = {}
    for ts, frame in upscale_fps(streams, k, backend, threads=threads,
            **kwargs):
        t = ts * factor
        if t.denominator == 1:
            out[int(t)] = frame
    return out


def fps_trend(spec, factors=(1, 2, 4, 8), backends=('flow',),
        base_high_exposure=1.0, stops=2, bit_depth=None, noise_sigma=None,
        seed=None, threads=None, **kwargs):
    """
    Mean mu-PSNR and L1 per (backend, factor) at shared integer timestamps.

    Arguments
    ---------
        spec      : SceneSpec, rendered at integer times 0 .. duration-1
        factors   : source spacings, each a power of two
        backends  : interpolation backend names
        stops     : exposure separation of the capture program
        bit_depth : capture quantization, default dataset.bit_depth
    Returns
    -------
        pandas DataFrame with BENCHMARK_COLUMNS, one row per pair
    """
    factors = sorted(set(int(f) for f in factors))
    if not factors:
        raise InvalidParameterError('No factors given')
    for f in factors:
        factor_to_levels(f)
    if bit_depth is None:
        bit_depth = conf.dataset['bit_depth']
    lo, hi = evaluation_window(spec.duration, factors)
    window = list(range(lo, hi + 1))
    gt = render_sequence(spec, window)
    program = ExposureProgram(base_high_exposure, stops)
    message('FPS benchmark over t = {0} .. {1}, factors {2}'.format(lo, hi,
        factors))

    rows = []
    for backend in backends:
        for f in factors:
            frames = reconstruct_at_factor(spec, f, program, backend,
                    bit_depth, noise_sigma, seed, threads, **kwargs)
            preds = [frames[t] for t in window]
            report = sequence_report(preds, gt,
                    [p.provenance for p in preds], timestamps=window,
                    indices=window)
            s_all, s_synth = report.summary['all'], report.summary['synth']
            rows.append({'backend': backend, 'factor': f,
                'frames': s_all['count'], 'mu_psnr_db': s_all['mu_psnr_db'],
                'l1': s_all['l1'], 'synth_frames': s_synth['count'],
                'synth_mu_psnr_db': s_synth['mu_psnr_db'],
                'synth_l1': s_synth['l1']})
            message('{0} x{1}: {2:.3f} dB'.format(backend, f,
                s_all['mu_psnr_db']), color=tcol.OKGREEN)
    return pd.DataFrame(rows, columns=BENCHMARK_COLUMNS)
