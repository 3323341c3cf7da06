"""
PCC-Toolkit
-----------

Polarity coincidence correlation (PCC) covariance estimation from
one-bit (sign) data, real and complex, together with the tools that
decide whether the estimated matrix is positive semidefinite.

The package offers:

  1. Bit-packed sign sequences with a popcount correlation kernel.

  2. Element-wise real and complex PCC matrix estimates.

  3. Eigenvalue based PSD checks, and the three-channel validity
     identities.

  4. Exhaustive enumeration of all sign configurations of small size,
     and explicit counterexamples for any number of channels.

  5. Monte Carlo checks of the arcsine law.

Everything is also available through the ``pcc`` command line tool.
"""

import sys
from setuptools import setup

needs_pytest = {'pytest', 'test', 'ptr'}.intersection(sys.argv)
pytest_runner = ['pytest-runner'] if needs_pytest else []


setup(
    name='PCC-Toolkit',
    version='0.1.0',
    license='MIT',
    description='Polarity coincidence correlation estimates and their PSD verification',
    long_description=__doc__,
    packages=['pcc_toolkit'],
    zip_safe=True,
    platforms='any',
    python_requires='>=3.9',
    setup_requires=pytest_runner,
    install_requires=[
        'numpy>=2.0',
        'click>=8.0',
        'Flask>=2.1',
        'marshmallow>=3.0',
    ],
    tests_require=[
        'pytest~=7.0',
        'pytest-cov~=4.0',
        'mock~=5.0',
    ],
    entry_points={
        'console_scripts': [
            'pcc = pcc_toolkit.pcc_cli:main',
        ],
    },
    classifiers=[
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
    ]
)
