import matplotlib
matplotlib.use('Agg')

import numpy as np
import pytest

import hdrinterp.plots as plots
from hdrinterp.benchmark import (BENCHMARK_COLUMNS, evaluation_window,
        fps_trend)
from hdrinterp.dataset import GaussianBlob, SceneSpec
from hdrinterp.errors import TooShortError
from hdrinterp.metrics import sequence_report
from hdrinterp.radiometry import RadianceFrame

BACKENDS = ('flow', 'blend')


@pytest.fixture(scope='module')
def trend():
    # 3 px/frame keeps motion error well above the 16-bit floor at factor 1
    spec = SceneSpec(128, 128, 33, [GaussianBlob((40, 50), 6, 3.0,
        velocity=(3, 0))], background=0.1)
    return fps_trend(spec, factors=(1, 2, 4, 8), backends=BACKENDS,
            threads=1)


class TestWindow:

    def test_shared_integer_window(self):
        assert evaluation_window(33, [1, 2, 4, 8]) == (8, 24)

    def test_too_short(self):
        with pytest.raises(TooShortError):
            evaluation_window(9, [8])


class TestFpsTrend:

    def test_table(self, trend):
        assert list(trend.columns) == BENCHMARK_COLUMNS
        assert list(trend['backend']) == ['flow'] * 4 + ['blend'] * 4
        assert list(trend['factor']) == [1, 2, 4, 8] * 2
        assert set(trend['frames']) == {17}

    @pytest.mark.parametrize('backend', BACKENDS)
    def test_synth_frames_per_factor(self, trend, backend):
        # factor s leaves every s-th integer timestamp anchored on a capture
        rows = trend[trend['backend'] == backend]
        assert list(rows['synth_frames']) == [0, 8, 12, 14]

    @pytest.mark.parametrize('backend', BACKENDS)
    def test_accuracy_drops_with_spacing(self, trend, backend):
        psnr = list(trend[trend['backend'] == backend]['mu_psnr_db'])
        for wide, narrow in zip(psnr[1:], psnr):
            assert narrow - wide >= 0.2


class TestPlots:

    def test_trend_figure(self, trend, tmp_path):
        fig = plots.fps_trend_fig(trend)
        assert len(fig.axes[0].lines) == 2
        path = tmp_path / 'trend.png'
        plots.save_fig(fig, path)
        assert path.stat().st_size > 0

    def test_report_figure(self, tmp_path):
        gt = [RadianceFrame(np.full((4, 4, 3), 1.0)) for _ in range(3)]
        preds = [gt[0], RadianceFrame(np.full((4, 4, 3), 0.5)), gt[2]]
        report = sequence_report(preds, gt, ['real', 'synth', 'real'],
                timestamps=['1/1', '3/2', '2/1'])
        fig = plots.report_tsfig(report)
        assert len(fig.axes[0].lines) == 2
        path = tmp_path / 'psnr.png'
        plots.save_fig(fig, path)
        assert path.stat().st_size > 0
