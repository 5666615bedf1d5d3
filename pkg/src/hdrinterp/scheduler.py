"""
Pipeline orchestration: standard-rate HDR reconstruction from an alternating
exposure sequence, and recursive 2^k frame-rate upscaling.

Timestamps are exact dyadic rationals (fractions.Fraction) in units of input
frame index. Within a recursion level every interpolation and merge is
independent and runs on a thread pool; levels are sequential.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from hdrinterp.config import conf, message, tcol
from hdrinterp.errors import (InvalidInputError, InvalidParameterError,
        TooShortError, ShapeError, ExposureMismatchError)
from hdrinterp.interp import interpolate
from hdrinterp.merge import merge_hdr
from hdrinterp.radiometry import HIGH, LOW, TAGS, other_tag


def is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


def dyadic(numerator, denominator=1):
    """
    Build a reduced dyadic timestamp numerator/denominator.

    Raises
    ------
    InvalidParameterError
        if the reduced denominator is not a power of two
    """
    ts = Fraction(numerator, denominator)
    if not is_power_of_two(ts.denominator):
        raise InvalidParameterError('Timestamp {0} is not dyadic'.format(ts))
    return ts


def factor_to_levels(factor):
    """Recursion depth k for a frame-rate factor 2^k"""
    factor = int(factor)
    if not is_power_of_two(factor):
        raise InvalidParameterError('Frame-rate factor must be a power of '
                'two, got {0}'.format(factor))
    return factor.bit_length() - 1


def parallel_map(func, items, threads=None):
    """
    Ordered map over items on a thread pool of `threads` workers
    """
    items = list(items)
    if threads is None:
        threads = conf.threads
    if threads <= 1 or len(items) <= 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


class AlternatingSequence:
    """
    Frames whose exposure tags strictly alternate, starting with start_tag.
    Dimensions are shared and exposure time is constant per tag.
    """

    def __init__(self, frames, start_tag=None, frame_interval=1.0):
        frames = list(frames)
        if len(frames) == 0:
            raise InvalidInputError('An alternating sequence needs frames')
        if start_tag is None:
            start_tag = frames[0].tag
        if not 0 < float(frame_interval) < float('inf'):
            raise InvalidParameterError('frame_interval must be a positive '
                    'number of seconds')
        if start_tag not in TAGS:
            raise InvalidParameterError('start_tag must be H or L')
        exposures = {}
        for i, f in enumerate(frames):
            expected = start_tag if i % 2 == 0 else other_tag(start_tag)
            if f.tag != expected:
                raise ExposureMismatchError('Frame {0} is tagged {1}, '
                        'expected {2}'.format(i, f.tag, expected))
            if f.shape != frames[0].shape:
                raise ShapeError('Frame {0} is {1}, expected {2}'.format(i,
                    f.shape, frames[0].shape))
            if exposures.setdefault(f.tag, f.exposure_time) != f.exposure_time:
                raise ExposureMismatchError('Exposure time of {0} frames '
                        'changes at frame {1}'.format(f.tag, i))
        self.frames = frames
        self.start_tag = start_tag
        self.frame_interval = float(frame_interval)
        self.exposures = exposures

    def __len__(self):
        return len(self.frames)

    def __getitem__(self, i):
        return self.frames[i]

    @property
    def tags(self):
        return [f.tag for f in self.frames]

    def seconds(self, timestamp):
        """Capture time of a (possibly fractional) frame timestamp"""
        return float(timestamp) * self.frame_interval


class ExposureStreams:
    """
    High and low exposure frames on a shared dyadic timeline
    """

    def __init__(self, timestamps, high, low):
        if not len(timestamps) == len(high) == len(low):
            raise InvalidInputError('Streams and timestamps differ in length')
        if any(f.tag != HIGH for f in high) or any(f.tag != LOW for f in low):
            raise ExposureMismatchError('Stream tags are not uniform')
        self.timestamps = list(timestamps)
        self.high = list(high)
        self.low = list(low)

    def __len__(self):
        return len(self.timestamps)


def complete_exposure_streams(seq, backend='flow', threads=None, **kwargs):
    """
    Synthesize the missing exposure at every interior timestamp.

    For t in [1, n-2] the frame with the other tag is interpolated at
    tau = 0.5 from frames t-1 and t+1, which carry that tag. Real frames
    pass through. kwargs go to the interpolation backend.

    Returns
    -------
    ExposureStreams
        covering n-2 integer timestamps
    """
    n = len(seq)
    if n < 3:
        raise TooShortError('Need at least 3 frames, got {0}'.format(n))
    message('Complete exposure streams for {0} timestamps, using '
            '{1}.'.format(n - 2, backend))
    interior = range(1, n - 1)
    missing = parallel_map(lambda t: interpolate(seq[t - 1], seq[t + 1], 0.5,
        backend=backend, level=0, **kwargs), interior, threads)
    high, low = [], []
    for t, synth in zip(interior, missing):
        if seq[t].tag == HIGH:
            high.append(seq[t])
            low.append(synth)
        else:
            high.append(synth)
            low.append(seq[t])
    return ExposureStreams([dyadic(t) for t in interior], high, low)


def merge_streams(streams, crf=None, threads=None, **kwargs):
    """Merge each timestamp of the streams into a radiance frame"""
    merged = parallel_map(lambda i: merge_hdr(streams.high[i], streams.low[i],
        crf, **kwargs), range(len(streams)), threads)
    return list(zip(streams.timestamps, merged))


def reconstruct_standard(seq, backend='flow', crf=None, threads=None,
        **kwargs):
    """
    HDR frame at every interior timestamp of an alternating sequence.

    Endpoints have no same-tag neighbor pair and are dropped, so n input
    frames give n-2 outputs at t = 1 .. n-2.

    Returns
    -------
    list of (Fraction, RadianceFrame)
    """
    streams = complete_exposure_streams(seq, backend, threads, **kwargs)
    return merge_streams(streams, crf, threads)


def upscale_stream(frames, level, backend='flow', threads=None, **kwargs):
    """
    Insert the midpoint between every neighbor pair of one exposure stream
    """
    for f in frames:
        assert f.provenance.is_real or f.provenance.level < level, (
                'Level {0} consumed a level {1} frame'.format(level,
                    f.provenance.level))
    mids = parallel_map(lambda i: interpolate(frames[i], frames[i + 1], 0.5,
        backend=backend, level=level, **kwargs), range(len(frames) - 1),
        threads)
    out = []
    for f, m in zip(frames, mids):
        out.extend([f, m])
    out.append(frames[-1])
    return out


def upscale_fps(streams, k, backend='flow', crf=None, threads=None,
        **kwargs):
    """
    Upscale completed exposure streams by 2^k and merge every timestamp.

    Each stream is midpoint-interpolated k times; level r inserts frames at
    odd multiples of 1/2^r. A stream of m timestamps gives (m-1) 2^k + 1
    HDR frames.

    Arguments
    ---------
        streams : ExposureStreams from complete_exposure_streams
        k       : recursion depth >= 0
        backend : interpolation backend name
    Returns
    -------
        list of (Fraction, RadianceFrame)
    """
    if int(k) != k or k < 0:
        raise InvalidParameterError('k must be an integer >= 0, got '
                '{0}'.format(k))
    if len(streams) == 0:
        raise InvalidInputError('Cannot upscale empty streams')
    ts, high, low = streams.timestamps, streams.high, streams.low
    for r in range(1, int(k) + 1):
        message('Upscale level {0}/{1}: {2} -> {3} frames per stream'.format(
            r, k, len(ts), 2 * len(ts) - 1))
        high = upscale_stream(high, r, backend, threads, **kwargs)
        low = upscale_stream(low, r, backend, threads, **kwargs)
        new_ts = []
        for a, b in zip(ts, ts[1:]):
            new_ts.extend([a, (a + b) / 2])
        new_ts.append(ts[-1])
        ts = new_ts
    for t in ts:
        assert (2 ** int(k)) % t.denominator == 0, (
                'Timestamp {0} is finer than 1/2^{1}'.format(t, k))
    message('Merging {0} HDR frames'.format(len(ts)), level=2,
            color=tcol.OKGREEN)
    return merge_streams(ExposureStreams(ts, high, low), crf, threads)
