"""
Benchmark data: alternating-exposure LDR sequences simulated from HDR
ground truth, analytic procedural scenes, and training patch extraction.

Random draws use counter-based seeding, np.random.default_rng([seed, i]),
so per-frame and per-patch work gives the same result in any order.
"""

import numpy as np

from hdrinterp.config import conf, message
from hdrinterp.errors import (InvalidInputError, InvalidParameterError,
        TooSmallError)
from hdrinterp.radiometry import (HIGH, TAGS, Crf, RadianceFrame,
        LdrFrame, other_tag, quantize, radiance_to_ldr)
from hdrinterp.scheduler import AlternatingSequence
import hdrinterp.io as hio


class ExposureProgram:
    """
    Alternating exposure settings: the low exposure sits `stops` stops
    below the base high exposure.
    """

    def __init__(self, base_high_exposure, stops, start_tag=HIGH):
        if not base_high_exposure > 0:
            raise InvalidParameterError('base_high_exposure must be > 0')
        if int(stops) != stops or stops < 1:
            raise InvalidParameterError('stops must be an integer >= 1')
        if start_tag not in TAGS:
            raise InvalidParameterError('start_tag must be H or L')
        self.base_high_exposure = float(base_high_exposure)
        self.stops = int(stops)
        self.start_tag = start_tag

    @property
    def high_exposure(self):
        return self.base_high_exposure

    @property
    def low_exposure(self):
        return self.base_high_exposure / 2 ** self.stops

    def tag_at(self, i):
        return self.start_tag if i % 2 == 0 else other_tag(self.start_tag)

    def exposure_for(self, tag):
        return self.high_exposure if tag == HIGH else self.low_exposure


def draw_stops(seed):
    """Stop separation drawn uniformly from {1, 2, 3}"""
    return int(np.random.default_rng(seed).integers(1, 4))


def simulate_alternating(hdr_seq, program, bit_depth=None, crf=None,
        noise_sigma=None, seed=None, frame_interval=1.0):
    """
    Capture HDR frames with an alternating exposure program.

    Arguments
    ---------
        hdr_seq     : list of RadianceFrame
        program     : ExposureProgram
        bit_depth   : 8, 16 or None (unquantized)
        crf         : Crf
        noise_sigma : additive Gaussian noise in LDR units, 0 for none
        seed        : seeds the noise, frame i uses default_rng([seed, i])
    Returns
    -------
        (AlternatingSequence, manifest DataFrame)
    """
    if len(hdr_seq) == 0:
        raise InvalidInputError('No HDR frames to simulate from')
    if crf is None:
        crf = Crf()
    dc = conf.dataset
    noise_sigma = dc['noise_sigma'] if noise_sigma is None else noise_sigma
    seed = conf.run['seed'] if seed is None else seed
    if noise_sigma < 0:
        raise InvalidParameterError('noise_sigma must be >= 0')

    frames = []
    records = []
    for i, hdr in enumerate(hdr_seq):
        tag = program.tag_at(i)
        dt = program.exposure_for(tag)
        ldr = radiance_to_ldr(hdr, dt, crf, bit_depth=None, tag=tag)
        pixels = ldr.pixels
        if noise_sigma > 0:
            rng = np.random.default_rng([seed, i])
            pixels = np.clip(pixels + rng.normal(0.0, noise_sigma,
                pixels.shape), 0.0, 1.0)
        frames.append(LdrFrame(quantize(pixels, bit_depth), dt, tag,
            bit_depth=bit_depth))
        records.append(dict(index=i, timestamp=str(i),
            filename=hio.ldr_filename(i), exposure_time_s=dt, tag=tag,
            provenance='real', level=None, stops=program.stops))
    message('Simulated {0} frames, {1} stops, {2}'.format(len(frames),
        program.stops, 'unquantized' if bit_depth is None else
        '{0}-bit'.format(bit_depth)))
    seq = AlternatingSequence(frames, program.start_tag, frame_interval)
    return seq, hio.manifest_frame(records)


class GaussianBlob:
    """Isotropic Gaussian of given peak radiance and sigma (pixels)"""

    def __init__(self, center, sigma, peak, velocity=(0.0, 0.0),
            color=(1.0, 1.0, 1.0)):
        if not peak > 0 or not sigma > 0:
            raise InvalidParameterError('Blob peak and sigma must be > 0')
        self.center = tuple(float(c) for c in center)
        self.sigma = float(sigma)
        self.peak = float(peak)
        self.velocity = tuple(float(v) for v in velocity)
        self.color = np.asarray(color, dtype=np.float64)

    def render(self, xx, yy, t):
        cx = self.center[0] + t * self.velocity[0]
        cy = self.center[1] + t * self.velocity[1]
        r2 = (xx - cx) ** 2 + (yy - cy) ** 2
        return self.peak * np.exp(-r2 / (2.0 * self.sigma ** 2))


class ConstantPlate:
    """Axis-aligned rectangle of constant radiance"""

    def __init__(self, origin, size, peak, velocity=(0.0, 0.0),
            color=(1.0, 1.0, 1.0)):
        if not peak > 0 or min(size) <= 0:
            raise InvalidParameterError('Plate peak and size must be > 0')
        self.origin = tuple(float(c) for c in origin)
        self.size = tuple(float(s) for s in size)
        self.peak = float(peak)
        self.velocity = tuple(float(v) for v in velocity)
        self.color = np.asarray(color, dtype=np.float64)

    def inside(self, xx, yy, t):
        x0 = self.origin[0] + t * self.velocity[0]
        y0 = self.origin[1] + t * self.velocity[1]
        return ((xx >= x0) & (xx < x0 + self.size[0]) & (yy >= y0)
                & (yy < y0 + self.size[1])), x0

    def render(self, xx, yy, t):
        mask, _ = self.inside(xx, yy, t)
        return np.where(mask, self.peak, 0.0)


class LinearRamp(ConstantPlate):
    """Rectangle whose radiance rises linearly from 0 to peak along x"""

    def render(self, xx, yy, t):
        mask, x0 = self.inside(xx, yy, t)
        return np.where(mask, self.peak * (xx - x0) / self.size[0], 0.0)


element_types = {'blob': GaussianBlob, 'plate': ConstantPlate,
        'ramp': LinearRamp}


class SceneSpec:
    """
    Procedural scene: background radiance plus moving elements, each with a
    constant velocity in pixels per frame.
    """

    def __init__(self, width, height, duration, elements=(),
            background=0.1):
        if width < 1 or height < 1 or duration < 1:
            raise InvalidParameterError('Scene size and duration must be '
                    'positive')
        self.width = int(width)
        self.height = int(height)
        self.duration = int(duration)
        self.elements = list(elements)
        self.background = np.broadcast_to(np.asarray(background,
            dtype=np.float64), (3,)).copy()
        if np.any(self.background < 0):
            raise InvalidParameterError('Background radiance must be >= 0')

    @classmethod
    def from_dict(cls, d):
        """
        Build a scene from a mapping (usually loaded from YAML):

            width: 256
            height: 256
            duration: 9
            background: 0.1
            elements:
              - type: blob
                center: [64, 128]
                sigma: 8
                peak: 3.0
                velocity: [8, 0]
        """
        d = dict(d)
        elements = []
        for e in d.pop('elements', None) or []:
            e = dict(e)
            kind = e.pop('type')
            if kind not in element_types:
                raise InvalidParameterError('Unknown scene element {0!r}, '
                        'use one of {1}'.format(kind, list(element_types)))
            elements.append(element_types[kind](**e))
        return cls(elements=elements, **d)


def procedural_scene(spec, t):
    """
    Analytic render of the scene at time t (integer or dyadic frame index).
    Element positions are displaced by t * velocity.
    """
    t = float(t)
    yy, xx = np.mgrid[0:spec.height, 0:spec.width].astype(np.float64)
    img = np.empty((spec.height, spec.width, 3))
    img[...] = spec.background
    for e in spec.elements:
        img += e.render(xx, yy, t)[..., np.newaxis] * e.color
    return RadianceFrame(img)


def render_sequence(spec, times=None):
    """Ground-truth frames at the given times (default 0 .. duration-1)"""
    if times is None:
        times = range(spec.duration)
    return [procedural_scene(spec, t) for t in times]


class Patch:
    """
    An LDR triplet crop and its ground-truth crop at the middle frame
    """

    def __init__(self, ldr, gt, index, offset, rot90, hflip, vflip):
        self.ldr = ldr
        self.gt = gt
        self.index = index
        self.offset = offset
        self.rot90 = rot90
        self.hflip = hflip
        self.vflip = vflip


class PatchSet:

    def __init__(self, patches, patch_size, augment):
        self.patches = patches
        self.patch_size = patch_size
        self.augment = augment

    def __len__(self):
        return len(self.patches)

    def __getitem__(self, i):
        return self.patches[i]


def transform(arr, rot90, hflip, vflip):
    if hflip:
        arr = arr[:, ::-1]
    if vflip:
        arr = arr[::-1, :]
    return np.rot90(arr, rot90, axes=(0, 1))


def patchify(seq, gt, count, patch_size=None, seed=None, augment=True):
    """
    Random training crops of alternating-exposure triplets.

    Each patch takes frames t-1, t, t+1 around a random interior index t,
    a uniform crop offset, and (if augment) a random rotation by a multiple
    of 90 degrees and random flips, applied identically to the triplet and
    the ground truth at t. Patch i draws from default_rng([seed, i]).

    Raises
    ------
    TooSmallError
        frames smaller than patch_size
    """
    dc = conf.dataset
    patch_size = dc['patch_size'] if patch_size is None else patch_size
    seed = conf.run['seed'] if seed is None else seed
    n = len(seq)
    if n < 3:
        raise InvalidInputError('patchify needs at least 3 frames')
    if len(gt) != n:
        raise InvalidInputError('Got {0} ground-truth frames for {1} LDR '
                'frames'.format(len(gt), n))
    h, w = seq[0].height, seq[0].width
    if h < patch_size or w < patch_size:
        raise TooSmallError('Frames of {0}x{1} are smaller than the patch '
                'size {2}'.format(w, h, patch_size))

    patches = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        t = int(rng.integers(1, n - 1))
        y0 = int(rng.integers(0, h - patch_size + 1))
        x0 = int(rng.integers(0, w - patch_size + 1))
        if augment:
            rot90 = int(rng.integers(0, 4))
            hflip, vflip = (bool(x) for x in rng.integers(0, 2, size=2))
        else:
            rot90, hflip, vflip = 0, False, False

        def crop(pixels):
            return transform(pixels[y0:y0 + patch_size, x0:x0 + patch_size],
                    rot90, hflip, vflip)

        ldr = [seq[j].replace(pixels=crop(seq[j].pixels))
                for j in (t - 1, t, t + 1)]
        gt_crop = RadianceFrame(crop(gt[t].pixels), gt[t].provenance)
        patches.append(Patch(ldr, gt_crop, t, (x0, y0), rot90, hflip, vflip))
    message('Extracted {0} patches of {1}x{1}'.format(count, patch_size))
    return PatchSet(patches, patch_size, augment)
