"""
Synthetic data and Monte Carlo checks of the arcsine law.

Random streams come from numpy's Philox4x64-10 bit generator, a
counter-based generator with published round constants, keyed directly
with the seed (counter starting at zero). Standard normal variates are
produced from its uniforms by the Box-Muller transform, so a stream is
fully determined by the seed.
"""

import math
import logging
from typing import NamedTuple, Optional, Union
import numpy as np
from .estimator import REAL, COMPLEX
from .utils import DomainError, LengthMismatchError

__all__ = [
    'McReport',
    'CrossMoments',
    'make_generator',
    'standard_normal',
    'sample_bivariate_gaussian',
    'sample_circular_complex',
    'sample_multivariate_gaussian',
    'cross_moments',
    'default_tolerance',
    'mc_arcsine_real',
    'mc_arcsine_complex',
]

_LOGGER = logging.getLogger(__name__)

# Bounds on the variance of one sign-moment term.
_MOMENT_VARIANCE = {REAL: 1.0, COMPLEX: 4.0}


class McReport(NamedTuple):
    """The outcome of a Monte Carlo check of the arcsine law.

    ``recovered`` is the correlation obtained by applying the sine map
    to the empirical sign moment. ``passed`` is true iff ``abs_error``
    is below ``tolerance``; in complex mode ``abs_error`` is the larger
    of the real-part and imaginary-part errors.
    """

    mode: str
    target: Union[float, complex]
    n_samples: int
    seed: int
    df: Optional[float]
    empirical_sign_moment: Union[float, complex]
    predicted_sign_moment: Union[float, complex]
    recovered: Union[float, complex]
    abs_error: float
    tolerance: float
    passed: bool


class CrossMoments(NamedTuple):
    """Second-order moments of complex sample pairs ``(x, y)``."""

    re_sum: float  # E{x_R y_R + x_I y_I}
    im_sum: float  # E{x_I y_R - x_R y_I}
    cor_rr: float
    cor_ii: float
    cor_ir: float
    cor_ri: float
    var_xr: float
    var_xi: float
    var_yr: float
    var_yi: float


def make_generator(seed):
    """Return a `numpy.random.Generator` keyed with `seed`."""

    if seed < 0:
        raise DomainError('The seed must be non-negative.')
    return np.random.Generator(np.random.Philox(key=seed))


def standard_normal(gen, n):
    """Draw `n` standard normal variates with the Box-Muller transform."""

    m = (n + 1) // 2
    u1 = 1.0 - gen.random(m)  # in (0, 1]
    u2 = gen.random(m)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:n]


def _check_n(n):
    if n < 1:
        raise LengthMismatchError('At least one sample is required.')


def _mixing_scale(gen, n, df):
    if df is None:
        return None
    if df <= 0:
        raise DomainError('Degrees of freedom must be positive.')
    return 1.0 / np.sqrt(gen.chisquare(df, n) / df)


def sample_bivariate_gaussian(r, n, seed, df=None):
    """Draw `n` zero-mean, unit-variance pairs with correlation `r`.

    ``x = u`` and ``y = r*u + sqrt(1 - r**2)*v`` with independent
    standard normals ``u`` and ``v``. When `df` is given, both
    components of each pair are divided by one shared
    ``sqrt(chi2(df)/df)`` variable, producing a heavy-tailed Student-t
    pair that is still elliptically symmetric.

    :return: A pair of arrays ``(x, y)``
    """

    if not (math.isfinite(r) and abs(r) <= 1.0):
        raise DomainError('Correlation {!r} is outside [-1, 1].'.format(r))
    _check_n(n)
    gen = make_generator(seed)
    u = standard_normal(gen, n)
    v = standard_normal(gen, n)
    x = u
    y = r * u + math.sqrt(1.0 - r * r) * v
    scale = _mixing_scale(gen, n, df)
    if scale is not None:
        x, y = x * scale, y * scale
    return x, y


def _complex_normal(gen, n):
    # Unit variance, independent real and imaginary parts of variance 1/2.
    return (standard_normal(gen, n) + 1j * standard_normal(gen, n)) / math.sqrt(2.0)


def sample_circular_complex(r, n, seed, df=None):
    """Draw `n` circularly symmetric complex Gaussian pairs with ``E{x y*} = r``.

    ``y = conj(r)*x + sqrt(1 - |r|**2)*w`` with ``x`` and ``w``
    independent, unit-variance, circular, with independent real and
    imaginary parts.

    :return: A pair of complex arrays ``(x, y)``
    """

    r = complex(r)
    if not (math.isfinite(r.real) and math.isfinite(r.imag) and abs(r) <= 1.0):
        raise DomainError('Correlation {!r} is outside the unit disc.'.format(r))
    _check_n(n)
    gen = make_generator(seed)
    x = _complex_normal(gen, n)
    w = _complex_normal(gen, n)
    y = r.conjugate() * x + math.sqrt(max(0.0, 1.0 - abs(r) ** 2)) * w
    scale = _mixing_scale(gen, n, df)
    if scale is not None:
        x, y = x * scale, y * scale
    return x, y


def sample_multivariate_gaussian(corr, n, seed, df=None):
    """Draw `n` samples of ``p`` channels with correlation matrix `corr`.

    :param corr: A ``p x p`` positive definite real correlation matrix
    :return: A ``p x n`` array, one row per channel
    """

    corr = np.asarray(corr, dtype=float)
    _check_n(n)
    try:
        factor = np.linalg.cholesky(corr)
    except np.linalg.LinAlgError as e:
        raise DomainError('The correlation matrix is not positive definite.') from e
    gen = make_generator(seed)
    p = corr.shape[0]
    white = standard_normal(gen, p * n).reshape(p, n)
    data = factor @ white
    scale = _mixing_scale(gen, n, df)
    if scale is not None:
        data = data * scale
    return data


def cross_moments(x, y):
    """Return the second-order moments of complex sample pairs.

    The sums ``E{x_R y_R + x_I y_I}`` and ``E{x_I y_R - x_R y_I}``
    recover the real and imaginary parts of ``E{x y*}``.
    """

    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 1 or x.shape[0] < 2:
        raise LengthMismatchError('Expected two sample arrays of equal length.')
    xr, xi, yr, yi = x.real, x.imag, y.real, y.imag

    def cor(a, b):
        return float(np.corrcoef(a, b)[0, 1])

    return CrossMoments(
        re_sum=float(np.mean(xr * yr + xi * yi)),
        im_sum=float(np.mean(xi * yr - xr * yi)),
        cor_rr=cor(xr, yr),
        cor_ii=cor(xi, yi),
        cor_ir=cor(xi, yr),
        cor_ri=cor(xr, yi),
        var_xr=float(np.var(xr)),
        var_xi=float(np.var(xi)),
        var_yr=float(np.var(yr)),
        var_yi=float(np.var(yi)),
    )


def default_tolerance(n, mode=REAL):
    """Return ``5 * sqrt(Var/n)`` with the variance bound of a sign moment."""

    _check_n(n)
    return 5.0 * math.sqrt(_MOMENT_VARIANCE[mode] / n)


def mc_arcsine_real(r, n, seed, tol=None, df=None):
    """Compare the empirical mean of ``sgn(x)*sgn(y)`` with ``(2/pi)*asin(r)``.

    :param float r: The target correlation, ``|r| < 1``
    :param int n: The number of sample pairs
    :param int seed: The random seed
    :param tol: The tolerance (defaults to :func:`default_tolerance`)
    :param df: Optional Student-t degrees of freedom
    :rtype: McReport
    """

    if not (math.isfinite(r) and abs(r) < 1.0):
        raise DomainError('Correlation {!r} must lie strictly inside (-1, 1).'.format(r))
    tol = default_tolerance(n, REAL) if tol is None else tol
    x, y = sample_bivariate_gaussian(r, n, seed, df=df)
    products = np.where((x >= 0) == (y >= 0), 1.0, -1.0)
    empirical = float(products.mean())
    predicted = 2.0 / math.pi * math.asin(r)
    abs_error = abs(empirical - predicted)
    report = McReport(
        mode=REAL,
        target=float(r),
        n_samples=n,
        seed=seed,
        df=df,
        empirical_sign_moment=empirical,
        predicted_sign_moment=predicted,
        recovered=math.sin(math.pi / 2 * empirical),
        abs_error=abs_error,
        tolerance=tol,
        passed=abs_error < tol,
    )
    _LOGGER.info('Real arcsine check at r=%s: error %.3g (tolerance %.3g).', r, abs_error, tol)
    return report


def mc_arcsine_complex(r, n, seed, tol=None, df=None):
    """Compare the empirical mean of ``sgn_c(x)*conj(sgn_c(y))`` with its prediction.

    The prediction is ``(4/pi)*(asin(r_R) + j*asin(r_I))``. The
    recovered correlation applies ``sin(pi/4 * .)`` to each part of the
    empirical moment.

    Parameters are as in :func:`mc_arcsine_real`, with a complex `r`.
    """

    r = complex(r)
    if not (math.isfinite(r.real) and math.isfinite(r.imag) and abs(r) < 1.0):
        raise DomainError('Correlation {!r} must lie strictly inside the unit disc.'.format(r))
    tol = default_tolerance(n, COMPLEX) if tol is None else tol
    x, y = sample_circular_complex(r, n, seed, df=df)
    sxr = np.where(x.real >= 0, 1.0, -1.0)
    sxi = np.where(x.imag >= 0, 1.0, -1.0)
    syr = np.where(y.real >= 0, 1.0, -1.0)
    syi = np.where(y.imag >= 0, 1.0, -1.0)
    empirical = complex(float(np.mean(sxr * syr + sxi * syi)), float(np.mean(sxi * syr - sxr * syi)))
    predicted = 4.0 / math.pi * complex(math.asin(r.real), math.asin(r.imag))
    abs_error = max(abs(empirical.real - predicted.real), abs(empirical.imag - predicted.imag))
    recovered = complex(math.sin(math.pi / 4 * empirical.real), math.sin(math.pi / 4 * empirical.imag))
    report = McReport(
        mode=COMPLEX,
        target=r,
        n_samples=n,
        seed=seed,
        df=df,
        empirical_sign_moment=empirical,
        predicted_sign_moment=predicted,
        recovered=recovered,
        abs_error=abs_error,
        tolerance=tol,
        passed=abs_error < tol,
    )
    _LOGGER.info('Complex arcsine check at r=%s: error %.3g (tolerance %.3g).', r, abs_error, tol)
    return report
