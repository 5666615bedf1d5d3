"""
Plot functions for checking reconstruction quality from evaluation reports
and FPS benchmarks
"""

from fractions import Fraction

import matplotlib.pyplot as plt

from hdrinterp.config import message


def psnr_tsplot(ax, frames, label=None):
    """
    Plot per-frame mu-PSNR against timestamp, circling synthesized frames
    """
    t = [float(Fraction(ts)) for ts in frames['timestamp']]
    synth = (frames['provenance'] == 'synth').to_numpy()
    ax.plot(t, frames['mu_psnr_db'], marker='.', lw=1.25, color='k',
            label=label or 'mu-PSNR')
    ax.plot([x for x, s in zip(t, synth) if s],
            frames['mu_psnr_db'][synth], 'o', mfc='none',
            mec='xkcd:neon green', mew=1.0, label='Synthesized')
    ax.set_xlabel('Timestamp (input frames)')
    ax.set_ylabel('mu-PSNR (dB)')
    return ax


def report_tsfig(report, title='Evaluation'):
    """
    Make a time series figure of a SequenceReport (every frame, both masks
    summarized in the title)
    """
    fig, ax = plt.subplots(1, figsize=(11.5, 5))
    fig.canvas.manager.set_window_title(title + ' mu-PSNR timeseries')
    psnr_tsplot(ax, report.all_frames)
    s_all, s_synth = report.summary['all'], report.summary['synth']
    ax.set_title('{0}: mean {1:.2f} dB (all), {2:.2f} dB (synth)'.format(
        title, s_all['mu_psnr_db'], s_synth['mu_psnr_db']))
    ax.legend(loc='lower left', fontsize=10)
    return fig


def fps_trend_fig(trend, title='FPS benchmark'):
    """
    Make a figure of mean mu-PSNR against FPS factor, one line per backend
    """
    fig, ax = plt.subplots(1, figsize=(7, 5))
    fig.canvas.manager.set_window_title(title)
    for backend, df in trend.groupby('backend', sort=False):
        df = df.sort_values('factor')
        ax.plot(df['factor'], df['mu_psnr_db'], marker='o', lw=1.25,
                label=backend)
    ax.set_xscale('log', base=2)
    ax.set_xticks(sorted(trend['factor'].unique()))
    ax.set_xticklabels(['{0}x'.format(f) for f in
        sorted(trend['factor'].unique())])
    ax.set_xlabel('FPS factor')
    ax.set_ylabel('Mean mu-PSNR (dB)')
    ax.set_title(title)
    ax.legend()
    return fig


def save_fig(fig, path):
    fig.savefig(path, dpi=100)
    plt.close(fig)
    message('Figure written to {0}'.format(path))
