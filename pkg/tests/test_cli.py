import os

import matplotlib
matplotlib.use('Agg')

import pandas as pd
import pytest

import hdrinterp.io as hio
from hdrinterp.cli import main

STATIC_SCENE = """\
width: 64
height: 64
duration: 5
background: 0.1
elements:
  - type: blob
    center: [32, 32]
    sigma: 8
    peak: 0.5
"""

MOVING_SCENE = """\
width: 32
height: 32
duration: 8
background: 0.1
elements:
  - type: blob
    center: [10, 16]
    sigma: 4
    peak: 2.0
    velocity: [1, 0]
"""


def write_scene(tmp_path, text, name='scene'):
    yaml_path = tmp_path / (name + '.yaml')
    yaml_path.write_text(text)
    out = tmp_path / name
    assert main(['scene', '--scene', str(yaml_path), '--out', str(out)]) == 0
    return str(yaml_path), str(out)


def synthesize(tmp_path, scene_dir, *extra, name='ldr'):
    out = tmp_path / name
    code = main(['synthesize', '--input', scene_dir, '--out', str(out),
        '--stops', '2', *extra])
    assert code == 0
    return str(out)


class TestPipeline:

    def test_scene_writes_pfm(self, tmp_path):
        _, out = write_scene(tmp_path, STATIC_SCENE)
        assert hio.get_file_list(out, ext='.pfm', fullpath=False) == \
                [hio.gt_filename(i) for i in range(5)]

    def test_synthesize(self, tmp_path):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        out = synthesize(tmp_path, scene)
        manifest = hio.read_manifest(os.path.join(out, hio.MANIFEST_NAME))
        assert list(manifest['tag']) == ['H', 'L', 'H', 'L', 'H']
        assert len(hio.get_file_list(out, ext='.ppm')) == 5
        assert len(hio.get_file_list(os.path.join(out, 'gt'),
            ext='.pfm')) == 5

    def test_start_tag_low(self, tmp_path):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        out = synthesize(tmp_path, scene, '--start-tag', 'L')
        manifest = hio.read_manifest(os.path.join(out, hio.MANIFEST_NAME))
        assert list(manifest['tag']) == ['L', 'H', 'L', 'H', 'L']

    def test_end_to_end(self, tmp_path, capsys):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        ldr = synthesize(tmp_path, scene)
        hdr = str(tmp_path / 'hdr')
        assert main(['reconstruct', '--manifest',
            os.path.join(ldr, hio.MANIFEST_NAME), '--backend', 'flow',
            '--out', hdr]) == 0
        manifest = hio.read_manifest(os.path.join(hdr, hio.MANIFEST_NAME))
        assert [str(t) for t in manifest['timestamp']] == ['1', '2', '3']
        assert list(manifest['tag']) == ['L', 'H', 'L']
        report = str(tmp_path / 'report.csv')
        capsys.readouterr()
        assert main(['evaluate', '--pred', hdr, '--gt',
            os.path.join(ldr, 'gt'), '--report', report, '--plot',
            str(tmp_path / 'psnr.png')]) == 0
        df = pd.read_csv(report)
        assert len(df) == 3
        assert df['mu_psnr_db'].mean() >= 40.0
        assert 'mean mu-PSNR' in capsys.readouterr().err
        assert os.path.isfile(tmp_path / 'psnr.png')

    def test_upscale_count(self, tmp_path):
        _, scene = write_scene(tmp_path, MOVING_SCENE)
        ldr = synthesize(tmp_path, scene)
        out = str(tmp_path / 'up')
        assert main(['upscale', '--manifest',
            os.path.join(ldr, hio.MANIFEST_NAME), '--factor', '8',
            '--backend', 'blend', '--out', out]) == 0
        assert len(hio.get_file_list(out, ext='.pfm')) == 41
        manifest = hio.read_manifest(os.path.join(out, hio.MANIFEST_NAME))
        assert set(manifest['provenance']) == {'real', 'synth'}
        assert max(l for l in manifest['level'] if l is not None) == 3

    def test_export(self, tmp_path):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        for op in ('reinhard', 'mulaw'):
            out = tmp_path / op
            assert main(['export', '--input', scene, '--tonemap', op,
                '--out', str(out)]) == 0
            frame = hio.read_pnm(out / 'gt_0000.ppm')
            assert frame.bit_depth == 8

    def test_reproducible_outputs(self, tmp_path):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        runs = []
        for name in ('run_a', 'run_b'):
            out = synthesize(tmp_path, scene, '--noise-sigma', '0.01',
                    name=name)
            runs.append({f: open(os.path.join(out, f), 'rb').read()
                for f in os.listdir(out) if f != 'gt'})
        assert runs[0] == runs[1]

    def test_random_stops_seeded(self, tmp_path):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        manifests = []
        for name in ('a', 'b'):
            out = tmp_path / name
            assert main(['--seed', '3', 'synthesize', '--input', scene,
                '--out', str(out), '--stops', 'random']) == 0
            manifests.append((out / hio.MANIFEST_NAME).read_bytes())
        assert manifests[0] == manifests[1]

    def test_config_bit_depth(self, tmp_path):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        config = tmp_path / 'eight.yaml'
        config.write_text('dataset:\n  bit_depth: 8\n')
        out = tmp_path / 'ldr8'
        assert main(['--config', str(config), 'synthesize', '--input', scene,
            '--out', str(out), '--stops', '2']) == 0
        assert hio.read_pnm(out / hio.ldr_filename(0)).bit_depth == 8

    def test_threads_give_identical_files(self, tmp_path):
        _, scene = write_scene(tmp_path, MOVING_SCENE)
        ldr = synthesize(tmp_path, scene)
        manifest = os.path.join(ldr, hio.MANIFEST_NAME)
        outputs = []
        for threads in ('1', '4'):
            run = tmp_path / ('threads_' + threads)
            hdr, up = str(run / 'hdr'), str(run / 'up')
            assert main(['--threads', threads, 'reconstruct', '--manifest',
                manifest, '--out', hdr]) == 0
            assert main(['--threads', threads, 'upscale', '--manifest',
                manifest, '--factor', '4', '--out', up]) == 0
            assert main(['--threads', threads, 'evaluate', '--pred', hdr,
                '--gt', os.path.join(ldr, 'gt'), '--report',
                str(run / 'report.csv')]) == 0
            outputs.append({os.path.relpath(os.path.join(d, f), run):
                open(os.path.join(d, f), 'rb').read()
                for d, _, files in os.walk(run) for f in files})
        assert len(outputs[0]) > 10
        assert outputs[0] == outputs[1]

    def test_benchmark(self, tmp_path):
        yaml_path, _ = write_scene(tmp_path, MOVING_SCENE.replace(
            'duration: 8', 'duration: 9'))
        report = tmp_path / 'trend.csv'
        assert main(['benchmark', '--scene', yaml_path, '--factors', '1',
            '2', '--backend', 'blend', 'flow', '--report', str(report),
            '--plot', str(tmp_path / 'trend.png')]) == 0
        df = pd.read_csv(report)
        assert len(df) == 4
        assert os.path.isfile(tmp_path / 'trend.png')


class TestExitCodes:

    def test_bits_usage_error(self, tmp_path):
        assert main(['synthesize', '--input', str(tmp_path), '--out',
            str(tmp_path / 'o'), '--bits', '12']) == 2

    def test_factor_not_power_of_two(self, tmp_path):
        assert main(['upscale', '--manifest', 'm.csv', '--factor', '3',
            '--out', str(tmp_path)]) == 2

    def test_unknown_backend(self, tmp_path):
        assert main(['reconstruct', '--manifest', 'm.csv', '--backend',
            'magic', '--out', str(tmp_path)]) == 2

    def test_missing_command(self):
        assert main([]) == 2

    def test_empty_input_dir(self, tmp_path, capsys):
        (tmp_path / 'empty').mkdir()
        assert main(['synthesize', '--input', str(tmp_path / 'empty'),
            '--out', str(tmp_path / 'o')]) == 1
        assert 'No PFM frames' in capsys.readouterr().err

    def test_missing_manifest(self, tmp_path):
        assert main(['reconstruct', '--manifest', str(tmp_path / 'no.csv'),
            '--out', str(tmp_path / 'o')]) == 1

    def test_evaluate_count_mismatch(self, tmp_path, capsys):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        pred = tmp_path / 'pred'
        pred.mkdir()
        for f in hio.get_file_list(scene, ext='.pfm')[:3]:
            (pred / os.path.basename(f)).write_bytes(open(f, 'rb').read())
        assert main(['evaluate', '--pred', str(pred), '--gt', scene,
            '--report', str(tmp_path / 'r.csv')]) == 1
        assert 'mismatch' in capsys.readouterr().err

    def test_bad_config(self, tmp_path):
        bad = tmp_path / 'bad.yaml'
        bad.write_text('colour:\n  space: srgb\n')
        assert main(['--config', str(bad), 'scene', '--scene', 'x.yaml',
            '--out', str(tmp_path)]) == 1

    @pytest.mark.parametrize('value', ['abc', 'inf', '-0.25'])
    def test_corrupt_manifest(self, tmp_path, capsys, value):
        _, scene = write_scene(tmp_path, STATIC_SCENE)
        ldr = synthesize(tmp_path, scene)
        manifest = os.path.join(ldr, hio.MANIFEST_NAME)
        with open(manifest, encoding='utf-8') as f:
            text = f.read()
        with open(manifest, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text.replace(',0.25,', ',{0},'.format(value), 1))
        assert main(['reconstruct', '--manifest', manifest, '--out',
            str(tmp_path / 'hdr')]) == 1
        assert 'Manifest row 1' in capsys.readouterr().err
