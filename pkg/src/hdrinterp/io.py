"""
Readers and writers for HDR frames (PFM), LDR frames (binary PPM, P6) and
the sequence manifest (CSV).

PFM: ASCII header "PF\\n<width> <height>\\n<scale>\\n" then 32-bit floats,
RGB interleaved, rows stored bottom-to-top. A negative scale means
little-endian. Little-endian files are written by default.

PPM: header "P6\\n<width> <height>\\n<maxval>\\n" then RGB samples, rows
top-to-bottom, one byte per sample for maxval 255 and two big-endian bytes
for maxval 65535. Values map linearly [0,1] <-> [0,maxval], rounding half up.

Manifest: UTF-8 CSV with LF line endings and the fixed header
index,timestamp,filename,exposure_time_s,tag,provenance,level,stops.
Timestamps are written "num/den". Writers are deterministic, so identical
input gives byte-identical files.
"""

import os
import re
from fractions import Fraction

import numpy as np
import pandas as pd

from hdrinterp.config import message
from hdrinterp.errors import ManifestError, UnsupportedFormatError
from hdrinterp.radiometry import (HIGH, REAL, TAGS, LdrFrame, RadianceFrame,
        synthesized)
from hdrinterp.scheduler import AlternatingSequence, is_power_of_two

MANIFEST_COLUMNS = ['index', 'timestamp', 'filename', 'exposure_time_s',
        'tag', 'provenance', 'level', 'stops']
MANIFEST_NAME = 'manifest.csv'
PNM_MAXVALS = (255, 65535)

# object columns keep Fractions and optional ints (None) intact
manifest_dtypes = {'index': 'int64', 'timestamp': object, 'filename': object,
        'exposure_time_s': 'float64', 'tag': object, 'provenance': object,
        'level': object, 'stops': object}


def ldr_filename(i):
    return 'ldr_{0:04d}.ppm'.format(i)


def hdr_filename(i):
    return 'hdr_{0:05d}.pfm'.format(i)


def gt_filename(i):
    return 'gt_{0:04d}.pfm'.format(i)


def get_file_list(datapath, ext=None, fullpath=True):
    """
    Return a lexicographically sorted list of files in a data directory,
    optionally only those with extension `ext` (e.g. '.pfm').
    """
    filelist = sorted(f for f in os.listdir(datapath)
            if os.path.isfile(os.path.join(datapath, f)))
    if ext is not None:
        filelist = [f for f in filelist if f.lower().endswith(ext)]
    if fullpath:
        return [os.path.join(datapath, f) for f in filelist]
    return filelist


def header_tokens(data, count, path):
    """
    Read `count` whitespace-separated header tokens (skipping '#' comments).
    Returns the tokens and the offset of the payload, which starts after the
    single whitespace byte that ends the last token.
    """
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b'#':
            while pos < n and data[pos:pos + 1] not in (b'\n', b'\r'):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise UnsupportedFormatError('Truncated header in {0}'.format(
                path))
        tokens.append(data[start:pos].decode('ascii', errors='replace'))
    if pos >= n:
        raise UnsupportedFormatError('Truncated header in {0}'.format(path))
    return tokens, pos + 1


def parse_int(token, what, path):
    if not re.fullmatch(r'\d+', token):
        raise UnsupportedFormatError('Malformed {0} {1!r} in {2}'.format(what,
            token, path))
    return int(token)


def read_pfm(path):
    """
    Read a color PFM file into a RadianceFrame.

    Raises
    ------
    UnsupportedFormatError
        malformed header, grayscale 'Pf' files, truncated payload
    """
    with open(path, 'rb') as f:
        data = f.read()
    tokens, offset = header_tokens(data, 4, path)
    ident, width, height, scale = tokens
    if ident == 'Pf':
        raise UnsupportedFormatError('Grayscale PFM is not supported: '
                '{0}'.format(path))
    if ident != 'PF':
        raise UnsupportedFormatError('Not a PFM file: {0}'.format(path))
    width = parse_int(width, 'width', path)
    height = parse_int(height, 'height', path)
    try:
        scale = float(scale)
    except ValueError:
        raise UnsupportedFormatError('Malformed PFM scale {0!r} in '
                '{1}'.format(scale, path))
    if scale == 0 or not np.isfinite(scale):
        raise UnsupportedFormatError('PFM scale must be non-zero in '
                '{0}'.format(path))
    dtype = '<f4' if scale < 0 else '>f4'
    expected = width * height * 3 * 4
    payload = data[offset:]
    if len(payload) != expected:
        raise UnsupportedFormatError('PFM payload of {0} is {1} bytes, '
                'expected {2}'.format(path, len(payload), expected))
    pixels = np.frombuffer(payload, dtype=dtype).reshape(height, width, 3)
    return RadianceFrame(np.flipud(pixels).astype(np.float64))


def write_pfm(frame, path, little_endian=True):
    """
    Write a RadianceFrame as a color PFM (single precision)
    """
    pixels = frame.pixels
    height, width = pixels.shape[:2]
    scale = '-1.0' if little_endian else '1.0'
    header = 'PF\n{0} {1}\n{2}\n'.format(width, height, scale)
    dtype = '<f4' if little_endian else '>f4'
    payload = np.ascontiguousarray(np.flipud(pixels)).astype(dtype)
    with open(path, 'wb') as f:
        f.write(header.encode('ascii'))
        f.write(payload.tobytes())


def read_pnm(path, exposure_time=1.0, tag=HIGH, provenance=REAL):
    """
    Read a binary P6 PPM into an LdrFrame (8 or 16 bits). Exposure time, tag
    and provenance come from the manifest.
    """
    with open(path, 'rb') as f:
        data = f.read()
    tokens, offset = header_tokens(data, 4, path)
    ident, width, height, maxval = tokens
    if ident != 'P6':
        raise UnsupportedFormatError('Only binary color PPM (P6) is '
                'supported: {0}'.format(path))
    width = parse_int(width, 'width', path)
    height = parse_int(height, 'height', path)
    maxval = parse_int(maxval, 'maxval', path)
    if maxval not in PNM_MAXVALS:
        raise UnsupportedFormatError('maxval must be 255 or 65535, got {0} '
                'in {1}'.format(maxval, path))
    dtype = np.dtype('u1') if maxval == 255 else np.dtype('>u2')
    expected = width * height * 3 * dtype.itemsize
    payload = data[offset:]
    if len(payload) != expected:
        raise UnsupportedFormatError('PPM payload of {0} is {1} bytes, '
                'expected {2}'.format(path, len(payload), expected))
    samples = np.frombuffer(payload, dtype=dtype).reshape(height, width, 3)
    bit_depth = 8 if maxval == 255 else 16
    return LdrFrame(samples.astype(np.float64) / maxval, exposure_time, tag,
            bit_depth=bit_depth, provenance=provenance)


def write_pnm(frame, path, maxval=None):
    """
    Write an LdrFrame as binary PPM. maxval defaults to the frame's bit
    depth (65535 for unquantized frames).
    """
    if maxval is None:
        maxval = 255 if frame.bit_depth == 8 else 65535
    if maxval not in PNM_MAXVALS:
        raise UnsupportedFormatError('maxval must be 255 or 65535, got '
                '{0}'.format(maxval))
    height, width = frame.pixels.shape[:2]
    samples = np.floor(frame.pixels * maxval + 0.5)
    dtype = 'u1' if maxval == 255 else '>u2'
    header = 'P6\n{0} {1}\n{2}\n'.format(width, height, maxval)
    with open(path, 'wb') as f:
        f.write(header.encode('ascii'))
        f.write(samples.astype(dtype).tobytes())


def parse_timestamp(text):
    """
    Parse "num/den" (or a bare integer) into a dyadic Fraction
    """
    m = re.fullmatch(r'\s*(-?\d+)(?:/(\d+))?\s*', str(text))
    if m is None:
        raise ManifestError('Malformed timestamp {0!r}'.format(text))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0 or not is_power_of_two(den):
        raise ManifestError('Timestamp {0!r} is not dyadic'.format(text))
    return Fraction(int(m.group(1)), den)


def format_timestamp(ts):
    ts = Fraction(ts)
    return '{0}/{1}'.format(ts.numerator, ts.denominator)


def _optional_int(value):
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ''
    return str(int(value))


def _optional_float(value):
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ''
    return repr(float(value))


def manifest_row(r):
    row = {
        'index': int(r['index']),
        'timestamp': Fraction(r['timestamp']) if not isinstance(
            r['timestamp'], str) else parse_timestamp(r['timestamp']),
        'filename': str(r['filename']),
        'exposure_time_s': (np.nan if r.get('exposure_time_s') in
            (None, '') else float(r['exposure_time_s'])),
        'tag': r.get('tag') or '',
        'provenance': r.get('provenance', 'real'),
        'level': (None if r.get('level') in (None, '')
            else int(r['level'])),
        'stops': (None if r.get('stops') in (None, '')
            else int(r['stops'])),
        }
    given = r.get('exposure_time_s') not in (None, '')
    if given and not 0 < row['exposure_time_s'] < np.inf:
        raise ManifestError('Exposure time must be finite and > 0, got '
                '{0!r}'.format(r['exposure_time_s']))
    return row


def manifest_frame(records):
    """
    Build a typed manifest DataFrame from a list of record dicts
    """
    rows = []
    for i, r in enumerate(records):
        try:
            rows.append(manifest_row(r))
        except (ValueError, TypeError) as e:
            raise ManifestError('Manifest row {0}: {1}'.format(i, e)) from e
    df = pd.DataFrame({c: pd.Series([row[c] for row in rows],
        dtype=manifest_dtypes[c]) for c in MANIFEST_COLUMNS},
        columns=MANIFEST_COLUMNS)
    validate_manifest(df)
    return df


def validate_manifest(df):
    """
    Check manifest invariants: strictly increasing indices, unique
    filenames, valid tags and provenance, alternating tags on real frames.
    """
    if list(df.columns) != MANIFEST_COLUMNS:
        raise ManifestError('Manifest columns must be {0}, got {1}'.format(
            MANIFEST_COLUMNS, list(df.columns)))
    idx = list(df['index'])
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ManifestError('Manifest indices must be strictly increasing')
    if df['filename'].duplicated().any():
        raise ManifestError('Manifest filenames must be unique')
    if not df['tag'].isin(list(TAGS) + ['']).all():
        raise ManifestError('Manifest tags must be H, L or empty')
    if not df['provenance'].isin(['real', 'synth']).all():
        raise ManifestError('Manifest provenance must be real or synth')
    real_tags = [t for t, p in zip(df['tag'], df['provenance'])
            if p == 'real' and t != '']
    if any(a == b for a, b in zip(real_tags, real_tags[1:])):
        raise ManifestError('Tags of real frames must alternate')


def write_manifest(df, path):
    """
    Write a manifest as UTF-8 CSV with LF endings and fixed column order
    """
    validate_manifest(df)
    out = pd.DataFrame({
        'index': [str(int(i)) for i in df['index']],
        'timestamp': [format_timestamp(t) for t in df['timestamp']],
        'filename': list(df['filename']),
        'exposure_time_s': [_optional_float(v) for v in
            df['exposure_time_s']],
        'tag': list(df['tag']),
        'provenance': list(df['provenance']),
        'level': [_optional_int(v) for v in df['level']],
        'stops': [_optional_int(v) for v in df['stops']],
        }, columns=MANIFEST_COLUMNS)
    out.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')


def read_manifest(path):
    """
    Read and validate a manifest CSV

    Raises
    ------
    ManifestError
        unknown or missing columns, duplicate indices or filenames,
        non-dyadic timestamps, bad tags
    """
    raw = pd.read_csv(path, dtype=str, keep_default_na=False,
            encoding='utf-8')
    if list(raw.columns) != MANIFEST_COLUMNS:
        raise ManifestError('Manifest {0} has columns {1}, expected '
                '{2}'.format(path, list(raw.columns), MANIFEST_COLUMNS))
    for c in ('index', 'level', 'stops'):
        bad = [v for v in raw[c] if v != '' and not re.fullmatch(r'-?\d+', v)]
        if bad or (c == 'index' and (raw[c] == '').any()):
            raise ManifestError('Manifest column {0} holds non-integer '
                    'values'.format(c))
    if raw['index'].duplicated().any():
        raise ManifestError('Duplicate indices in manifest {0}'.format(path))
    return manifest_frame(raw.to_dict('records'))


def row_provenance(row):
    if row['provenance'] == 'real':
        return REAL
    return synthesized(0 if row['level'] is None else row['level'])


def load_sequence(manifest_path):
    """
    Load the LDR frames listed in a manifest as an AlternatingSequence.
    Frame files are resolved relative to the manifest's directory.

    Returns
    -------
        (AlternatingSequence, manifest DataFrame)
    """
    manifest = read_manifest(manifest_path)
    base = os.path.dirname(os.path.abspath(manifest_path))
    frames = []
    for _, row in manifest.iterrows():
        if row['tag'] == '' or np.isnan(row['exposure_time_s']):
            raise ManifestError('LDR manifest row {0} lacks tag or exposure '
                    'time'.format(row['index']))
        frames.append(read_pnm(os.path.join(base, row['filename']),
            row['exposure_time_s'], row['tag'], row_provenance(row)))
    message('Loaded {0} frames from {1}'.format(len(frames), manifest_path))
    return AlternatingSequence(frames), manifest
