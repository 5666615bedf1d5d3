"""
hdrinterp: HDR video reconstruction from alternating-exposure LDR sequences
by frame interpolation, attention-weighted merging and recursive frame-rate
upscaling.
"""

__version__ = '2026.1b1'
