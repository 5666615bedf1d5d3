"""
Quantitative evaluation on mu-law tonemapped HDR frames: PSNR, L1 and
per-sequence reports.

Prediction and ground truth are normalized by the same constant (the larger
of their two maxima unless given) before tonemapping, so an overshooting
prediction is never clipped onto the ground truth. Identical frames report
the PSNR cap (99 dB by default) so reports stay finite and sortable.
"""

import numpy as np
import pandas as pd

from hdrinterp.config import conf
from hdrinterp.errors import InvalidInputError, InvalidParameterError
from hdrinterp.radiometry import check_same_shape
from hdrinterp.tonemap import mu_law, normalize_radiance

MASKS = ('all', 'synth')
REPORT_COLUMNS = ['frame_index', 'timestamp', 'provenance', 'mu_psnr_db',
        'l1']


def psnr(a, b, peak=1.0, cap=None):
    """
    10 log10(peak^2 / MSE), capped (identical inputs return the cap)
    """
    cap = conf.metrics['psnr_cap'] if cap is None else cap
    mse = float(np.mean((np.asarray(a) - np.asarray(b)) ** 2))
    if mse == 0:
        return float(cap)
    return float(min(cap, 10.0 * np.log10(peak ** 2 / mse)))


def tonemapped_pair(pred, gt, mu_params=None, reference_max=None):
    check_same_shape(pred, gt)
    if reference_max is None:
        reference_max = max(float(gt.pixels.max(initial=0)),
                float(pred.pixels.max(initial=0)))
        if reference_max == 0:
            reference_max = 1.0
    return (mu_law(normalize_radiance(pred, reference_max), mu_params),
            mu_law(normalize_radiance(gt, reference_max), mu_params))


def mu_psnr(pred, gt, mu_params=None, reference_max=None, cap=None):
    """
    PSNR (dB) between mu-law tonemapped radiance frames, per-channel MSE
    over RGB.

    Arguments
    ---------
        pred, gt      : RadianceFrame of the same dimensions
        mu_params     : MuLawParams
        reference_max : shared normalization constant (default: max over
                        both frames)
        cap           : value reported for identical frames
    """
    tp, tg = tonemapped_pair(pred, gt, mu_params, reference_max)
    return psnr(tp, tg, cap=cap)


def l1_tonemapped(pred, gt, mu_params=None, reference_max=None):
    """Mean |T(pred) - T(gt)| over all samples"""
    tp, tg = tonemapped_pair(pred, gt, mu_params, reference_max)
    return float(np.mean(np.abs(tp - tg)))


def provenance_label(p):
    if isinstance(p, str):
        if p not in ('real', 'synth'):
            raise InvalidParameterError('Unknown provenance {0!r}'.format(p))
        return p
    return 'real' if p.is_real else 'synth'


class SequenceReport:
    """
    Per-frame mu-PSNR and L1 with arithmetic means under both evaluation
    masks ('all' frames and 'synth', synthesized frames only). PSNR is
    averaged in dB.
    """

    def __init__(self, frames, mask='all'):
        if mask not in MASKS:
            raise InvalidParameterError('mask must be one of {0}'.format(
                MASKS))
        self.all_frames = frames
        self.mask = mask
        self.summary = {m: self.summarize(self.select(m)) for m in MASKS}

    def select(self, mask):
        if mask == 'all':
            return self.all_frames
        return self.all_frames[self.all_frames['provenance'] == 'synth']

    @staticmethod
    def summarize(df):
        return {'count': int(len(df)),
                'mu_psnr_db': float(df['mu_psnr_db'].mean()) if len(df)
                    else float('nan'),
                'l1': float(df['l1'].mean()) if len(df) else float('nan')}

    @property
    def frames(self):
        """Per-frame rows under the selected mask"""
        return self.select(self.mask).reset_index(drop=True)

    @property
    def mean_mu_psnr(self):
        return self.summary[self.mask]['mu_psnr_db']

    @property
    def mean_l1(self):
        return self.summary[self.mask]['l1']

    def to_csv(self, path):
        self.frames.to_csv(path, index=False, lineterminator='\n',
                encoding='utf-8', columns=REPORT_COLUMNS)

    def summary_text(self):
        lines = []
        for m in MASKS:
            s = self.summary[m]
            lines.append('{0:>5} frames: {1:4d}   mean mu-PSNR {2:8.3f} dB   '
                    'mean L1 {3:.6f}{4}'.format(m, s['count'],
                        s['mu_psnr_db'], s['l1'],
                        '  (selected)' if m == self.mask else ''))
        return '\n'.join(lines)


def sequence_report(preds, gts, provenance, mask='all', timestamps=None,
        mu_params=None, indices=None):
    """
    Evaluate aligned lists of predicted and ground-truth radiance frames.

    Arguments
    ---------
        preds, gts  : lists of RadianceFrame
        provenance  : list of Provenance or 'real'/'synth' labels
        mask        : 'all' or 'synth' (selects rows and headline means)
        timestamps  : optional timestamps written into the report
        indices     : optional frame indices (default 0 .. n-1)
    Returns
    -------
        SequenceReport
    """
    n = len(preds)
    if len(gts) != n or len(provenance) != n:
        raise InvalidInputError('Length mismatch: {0} predictions, {1} ground '
                'truth frames, {2} provenance labels'.format(n, len(gts),
                    len(provenance)))
    if timestamps is None:
        timestamps = range(n)
    if indices is None:
        indices = range(n)
    rows = []
    for i, ts, p, pred, gt in zip(indices, timestamps, provenance, preds,
            gts):
        rows.append({'frame_index': int(i), 'timestamp': str(ts),
            'provenance': provenance_label(p),
            'mu_psnr_db': mu_psnr(pred, gt, mu_params),
            'l1': l1_tonemapped(pred, gt, mu_params)})
    frames = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    return SequenceReport(frames, mask)
