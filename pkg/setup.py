"""A setuptools based setup module.
See:
https://packaging.python.org/guides/distributing-packages-using-setuptools/
https://github.com/pypa/sampleproject
"""

# Always prefer setuptools over distutils
from setuptools import setup, find_packages
import pathlib

here = pathlib.Path(__file__).parent.resolve()

# Get the long description from the README file
long_description = (here / 'README.md').read_text(encoding='utf-8')

setup(
    name='hdrinterp',
    description='Reconstruct HDR video from alternating-exposure LDR '
        'sequences by frame interpolation and attention-weighted merging',
    long_description=long_description,
    long_description_content_type='text/markdown',
    version='2026.1b1',
    package_dir={'': 'src'},
    packages=find_packages(where='src'),
    package_data={'hdrinterp': ['data/*.yaml']},
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'ruamel.yaml',
        'scipy',
        'pandas>=1.5',
        'matplotlib'],
    extras_require={
        'test': ['pytest']},
    entry_points={
        'console_scripts': ['hdrinterp=hdrinterp.cli:main']}
    )
