"""
Command line front end: `hdrinterp <command> [options]`.

Commands
--------
    scene       render a procedural scene (YAML) to PFM ground truth
    synthesize  capture PFM ground truth as alternating-exposure PPM frames
    reconstruct HDR frame at every interior input timestamp
    upscale     HDR video at 2^k times the input frame rate
    evaluate    mu-PSNR / L1 report of predicted against ground-truth HDR
    export      tonemap HDR frames to 8-bit PPM for display
    benchmark   FPS-degradation experiment on a procedural scene

Progress goes to stderr, results go to files. Exit status is 0 on success,
1 for data errors (bad files, inconsistent inputs) and 2 for usage errors.
"""

import argparse
import os
import shutil
import sys

from hdrinterp import __version__, interpfunctions
from hdrinterp.config import conf, error, message, read_yaml, warn
from hdrinterp.errors import HdrError, InvalidInputError
from hdrinterp.benchmark import fps_trend
from hdrinterp.dataset import (ExposureProgram, SceneSpec, draw_stops,
        render_sequence, simulate_alternating)
from hdrinterp.metrics import sequence_report
from hdrinterp.radiometry import HIGH, LOW
from hdrinterp.scheduler import (complete_exposure_streams, factor_to_levels,
        reconstruct_standard, upscale_fps)
from hdrinterp.tonemap import mu_law_display, reinhard_display
import hdrinterp.io as hio

BACKENDS = tuple(interpfunctions.backends)


def power_of_two(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('{0!r} is not an integer'.format(
            text))
    if value < 1 or value & (value - 1):
        raise argparse.ArgumentTypeError('{0} is not a power of two'.format(
            value))
    return value


def thread_count(text):
    if text == 'auto':
        return text
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value < 1:
        raise argparse.ArgumentTypeError('threads must be a positive integer '
                'or auto')
    return value


def stops_choice(text):
    if text == 'random':
        return text
    if text not in ('1', '2', '3'):
        raise argparse.ArgumentTypeError('stops must be 1, 2, 3 or random')
    return int(text)


def read_hdr_dir(path):
    files = hio.get_file_list(path, ext='.pfm')
    if not files:
        raise InvalidInputError('No PFM frames found in {0}'.format(path))
    return files, [hio.read_pfm(f) for f in files]


def hdr_records(results, seq, stops):
    """
    Manifest rows for merged HDR frames. Rows at integer timestamps carry
    the tag of the real reference frame; other rows leave tag empty.
    """
    records = []
    for i, (ts, frame) in enumerate(results):
        real = frame.provenance.is_real
        records.append(dict(index=i, timestamp=ts,
            filename=hio.hdr_filename(i), exposure_time_s=None,
            tag=seq[int(ts)].tag if real else '',
            provenance='real' if real else 'synth',
            level=None if real else frame.provenance.level, stops=stops))
    return records


def write_hdr_results(results, seq, manifest, out):
    os.makedirs(out, exist_ok=True)
    for i, (_, frame) in enumerate(results):
        hio.write_pfm(frame, os.path.join(out, hio.hdr_filename(i)))
    stops = manifest['stops'].iloc[0] if len(manifest) else None
    hio.write_manifest(hio.manifest_frame(hdr_records(results, seq, stops)),
            os.path.join(out, hio.MANIFEST_NAME))
    span = [seq.seconds(ts) for ts, _ in results[:1] + results[-1:]]
    message('Wrote {0} HDR frames ({1:.3f} s to {2:.3f} s) to {3}'.format(
        len(results), span[0], span[-1], out))


def cmd_scene(args):
    spec = SceneSpec.from_dict(read_yaml(args.scene))
    n = spec.duration if args.frames is None else args.frames
    os.makedirs(args.out, exist_ok=True)
    for i, frame in enumerate(render_sequence(spec, range(n))):
        hio.write_pfm(frame, os.path.join(args.out, hio.gt_filename(i)))
    message('Rendered {0} frames of {1}x{2} to {3}'.format(n, spec.width,
        spec.height, args.out))


def cmd_synthesize(args):
    files, hdr = read_hdr_dir(args.input)
    stops = args.stops
    if stops == 'random':
        stops = draw_stops(conf.run['seed'])
    program = ExposureProgram(args.base_exposure, stops, args.start_tag)
    bits = conf.dataset['bit_depth'] if args.bits is None else args.bits
    seq, manifest = simulate_alternating(hdr, program, bit_depth=bits,
            noise_sigma=args.noise_sigma)
    gt_dir = os.path.join(args.out, 'gt')
    os.makedirs(gt_dir, exist_ok=True)
    for i, (frame, src) in enumerate(zip(seq, files)):
        hio.write_pnm(frame, os.path.join(args.out, hio.ldr_filename(i)))
        shutil.copyfile(src, os.path.join(gt_dir, hio.gt_filename(i)))
    hio.write_manifest(manifest, os.path.join(args.out, hio.MANIFEST_NAME))
    message('Wrote {0} LDR frames ({1} stops) to {2}'.format(len(seq), stops,
        args.out))


def cmd_reconstruct(args):
    seq, manifest = hio.load_sequence(args.manifest)
    results = reconstruct_standard(seq, args.backend)
    write_hdr_results(results, seq, manifest, args.out)


def cmd_upscale(args):
    seq, manifest = hio.load_sequence(args.manifest)
    streams = complete_exposure_streams(seq, args.backend)
    results = upscale_fps(streams, factor_to_levels(args.factor),
            args.backend)
    write_hdr_results(results, seq, manifest, args.out)


def evaluation_pairs(pred_dir, gt_dir):
    """
    Pair predicted and ground-truth frames. With a manifest in pred_dir only
    integer timestamps are scored, against ground-truth frame t; otherwise
    files are paired in order.
    """
    gt_files = hio.get_file_list(gt_dir, ext='.pfm')
    manifest_path = os.path.join(pred_dir, hio.MANIFEST_NAME)
    if os.path.isfile(manifest_path):
        manifest = hio.read_manifest(manifest_path)
        rows = [r for _, r in manifest.iterrows()
                if r['timestamp'].denominator == 1]
        for r in rows:
            if not 0 <= int(r['timestamp']) < len(gt_files):
                raise InvalidInputError('No ground truth for timestamp {0} '
                        'in {1}'.format(r['timestamp'], gt_dir))
        preds = [os.path.join(pred_dir, r['filename']) for r in rows]
        gts = [gt_files[int(r['timestamp'])] for r in rows]
        labels = [r['provenance'] for r in rows]
        timestamps = [hio.format_timestamp(r['timestamp']) for r in rows]
        return preds, gts, labels, timestamps
    preds = hio.get_file_list(pred_dir, ext='.pfm')
    if len(preds) != len(gt_files):
        raise InvalidInputError('Frame count mismatch: {0} predicted, {1} '
                'ground truth'.format(len(preds), len(gt_files)))
    return preds, gt_files, ['real'] * len(preds), None


def cmd_evaluate(args):
    pred_files, gt_files, labels, timestamps = evaluation_pairs(args.pred,
            args.gt)
    if not pred_files:
        raise InvalidInputError('Nothing to evaluate in {0}'.format(
            args.pred))
    preds = [hio.read_pfm(f) for f in pred_files]
    gts = [hio.read_pfm(f) for f in gt_files]
    report = sequence_report(preds, gts, labels, mask=args.mask,
            timestamps=timestamps)
    if report.summary[args.mask]['count'] == 0:
        warn('No frames left under the {0!r} mask'.format(args.mask))
    report.to_csv(args.report)
    message(report.summary_text(), level=0)
    if args.plot is not None:
        import hdrinterp.plots as plots
        plots.save_fig(plots.report_tsfig(report), args.plot)


def cmd_export(args):
    files, hdr = read_hdr_dir(args.input)
    operator = reinhard_display if args.tonemap == 'reinhard' else \
            mu_law_display
    os.makedirs(args.out, exist_ok=True)
    for f, frame in zip(files, hdr):
        stem = os.path.splitext(os.path.basename(f))[0]
        hio.write_pnm(operator(frame), os.path.join(args.out, stem + '.ppm'))
    message('Exported {0} frames with {1} tonemapping'.format(len(hdr),
        args.tonemap))


def cmd_benchmark(args):
    spec = SceneSpec.from_dict(read_yaml(args.scene))
    trend = fps_trend(spec, args.factors, args.backend,
            base_high_exposure=args.base_exposure, stops=args.stops,
            bit_depth=args.bits, noise_sigma=args.noise_sigma)
    trend.to_csv(args.report, index=False, lineterminator='\n',
            encoding='utf-8')
    message(trend.to_string(index=False), level=0)
    if args.plot is not None:
        import hdrinterp.plots as plots
        plots.save_fig(plots.fps_trend_fig(trend), args.plot)


def build_parser():
    parser = argparse.ArgumentParser(prog='hdrinterp',
            description='HDR video reconstruction from alternating-exposure '
            'LDR sequences')
    parser.add_argument('--version', action='version',
            version='%(prog)s ' + __version__)
    parser.add_argument('--config', help='YAML configuration file')
    parser.add_argument('--seed', type=int, help='Seed for every random '
            'choice (default run.seed)')
    parser.add_argument('--threads', type=thread_count,
            help='Worker threads for frame-level work, integer or auto')
    parser.add_argument('-v', '--verbose', action='count', default=0,
            help='More progress output')
    parser.add_argument('-q', '--quiet', action='count', default=0,
            help='Less progress output')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('scene', help='Render a procedural scene to PFM')
    p.add_argument('--scene', required=True, help='Scene YAML file')
    p.add_argument('--frames', type=int, help='Frame count (default: the '
            'scene duration)')
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_scene)

    p = sub.add_parser('synthesize', help='Alternating-exposure LDR frames '
            'from PFM ground truth')
    p.add_argument('--input', required=True, help='Directory of PFM frames')
    p.add_argument('--out', required=True)
    p.add_argument('--base-exposure', type=float, default=1.0,
            help='High exposure time in seconds')
    p.add_argument('--stops', type=stops_choice, default='random',
            help='Stop separation: 1, 2, 3 or random')
    p.add_argument('--bits', type=int, choices=[8, 16],
            help='Bit depth (default dataset.bit_depth)')
    p.add_argument('--start-tag', choices=[HIGH, LOW], default=HIGH)
    p.add_argument('--noise-sigma', type=float, default=None,
            help='Gaussian sensor noise in LDR units')
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser('reconstruct', help='HDR at every interior input '
            'timestamp')
    p.add_argument('--manifest', required=True)
    p.add_argument('--backend', choices=BACKENDS, default='flow')
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser('upscale', help='HDR at 2^k times the input rate')
    p.add_argument('--manifest', required=True)
    p.add_argument('--factor', type=power_of_two, required=True)
    p.add_argument('--backend', choices=BACKENDS, default='flow')
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_upscale)

    p = sub.add_parser('evaluate', help='Score predicted HDR frames')
    p.add_argument('--pred', required=True)
    p.add_argument('--gt', required=True)
    p.add_argument('--report', required=True, help='Output CSV path')
    p.add_argument('--mask', choices=['all', 'synth'], default='all')
    p.add_argument('--plot', help='Optional PNG of per-frame mu-PSNR')
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser('export', help='Tonemap HDR frames for display')
    p.add_argument('--input', required=True)
    p.add_argument('--tonemap', choices=['reinhard', 'mulaw'],
            default='reinhard')
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser('benchmark', help='FPS-degradation experiment')
    p.add_argument('--scene', required=True, help='Scene YAML file')
    p.add_argument('--factors', type=power_of_two, nargs='+',
            default=[1, 2, 4, 8])
    p.add_argument('--backend', choices=BACKENDS, nargs='+',
            default=['flow'])
    p.add_argument('--base-exposure', type=float, default=1.0)
    p.add_argument('--stops', type=int, choices=[1, 2, 3], default=2)
    p.add_argument('--bits', type=int, choices=[8, 16],
            help='Bit depth (default dataset.bit_depth)')
    p.add_argument('--noise-sigma', type=float, default=None)
    p.add_argument('--report', required=True, help='Output CSV path')
    p.add_argument('--plot', help='Optional PNG of PSNR against factor')
    p.set_defaults(func=cmd_benchmark)
    return parser


def apply_run_options(args):
    if args.config is not None:
        conf.get_config(args.config)
    if args.seed is not None:
        conf.run['seed'] = args.seed
    if args.threads is not None:
        conf.run['threads'] = args.threads
    conf.run['verbosity'] = conf.verbosity + args.verbose - args.quiet


def main(argv=None):
    """
    Run the command line interface and return the exit status
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code is None else int(e.code)
    try:
        apply_run_options(args)
        args.func(args)
    except (HdrError, OSError) as e:
        error('hdrinterp: error: {0}'.format(e))
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
