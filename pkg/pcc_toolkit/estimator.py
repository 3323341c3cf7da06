"""
Polarity coincidence correlation (PCC) estimates.

The real estimate of a pair is ``sin(pi/2 * r_s)`` where ``r_s`` is the
average of the sign products. The complex estimate applies the sine
map with ``pi/4`` separately to the real and the imaginary part of the
average of ``sgn_c(x) * conj(sgn_c(y))``.
"""

import math
import logging
from itertools import combinations
from typing import NamedTuple
import numpy as np
from .signs import agreement_count, extract, extract_complex
from .utils import DomainError, LengthMismatchError, NonHermitianError

__all__ = [
    'REAL',
    'COMPLEX',
    'CorrMatrix',
    'ComplexPccPair',
    'sign_sum',
    'complex_sign_sums',
    'real_entry',
    'complex_entry',
    'pcc_real',
    'pcc_complex',
    'matrix_from_sums',
    'pcc_matrix_real',
    'pcc_matrix_complex',
    'sample_corr_matrix',
    'estimate',
]

_LOGGER = logging.getLogger(__name__)

REAL = 'real'
COMPLEX = 'complex'
MODES = (REAL, COMPLEX)

HERMITIAN_TOLERANCE = 1e-12
MODULUS_TOLERANCE = 1e-12


def _check_mode(mode):
    if mode not in MODES:
        raise DomainError('Unknown mode: {!r}.'.format(mode))


def _validated(array):
    a = np.array(array, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError('A correlation matrix must be square and non-empty.')
    if not np.all(np.isfinite(a)):
        raise DomainError('Matrix entries must be finite.')
    if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOLERANCE:
        raise NonHermitianError('The matrix is not Hermitian.')
    if np.max(np.abs(np.diag(a) - 1.0)) > HERMITIAN_TOLERANCE:
        raise DomainError('The matrix must have a unit diagonal.')
    if np.max(np.abs(a)) > 1.0 + MODULUS_TOLERANCE:
        raise DomainError('Off-diagonal entries must not exceed one in modulus.')
    return a


class CorrMatrix:
    """A ``p x p`` Hermitian matrix with unit diagonal.

    Entries are always stored as complex numbers; in real mode their
    imaginary parts are zero. Instances are immutable. The constructor
    validates like :meth:`from_array` but keeps the entries as given.

    :param entries: A square array-like of (complex) entries
    :param mode: Either ``'real'`` or ``'complex'``
    """

    __slots__ = ('_entries', '_mode')

    def __init__(self, entries, mode=REAL):
        _check_mode(mode)
        entries = _validated(entries)
        if mode == REAL and np.any(entries.imag != 0.0):
            raise DomainError('A real-mode matrix can not have imaginary parts.')
        entries.flags.writeable = False
        self._entries = entries
        self._mode = mode

    @classmethod
    def from_array(cls, array, mode=REAL):
        """Create a validated matrix from a dense array.

        Raises `NonHermitianError` when the matrix is not Hermitian
        within 1e-12, and `DomainError` when the diagonal is not one
        or an off-diagonal modulus exceeds one.
        """

        a = _validated(array)
        p = a.shape[0]
        upper = np.triu_indices(p, 1)
        entries = np.eye(p, dtype=complex)
        entries[upper] = a[upper]
        entries[upper[::-1]] = a[upper].conj()
        if mode == REAL:
            entries = entries.real
        return cls(entries, mode)

    @property
    def p(self):
        """The dimension."""

        return self._entries.shape[0]

    @property
    def mode(self):
        return self._mode

    @property
    def entries(self):
        """The entries as a read-only complex `numpy.ndarray`."""

        return self._entries

    def real_part(self):
        return self._entries.real.copy()

    def __getitem__(self, index):
        value = self._entries[index]
        return value.real if self._mode == REAL else value

    def __eq__(self, other):
        if not isinstance(other, CorrMatrix):
            return NotImplemented
        return self._mode == other._mode and bool(np.array_equal(self._entries, other._entries))

    __hash__ = None

    def __repr__(self):
        return 'CorrMatrix({!r}, mode={!r})'.format(self[:, :].tolist(), self._mode)


class ComplexPccPair(NamedTuple):
    """The complex PCC estimate of a pair.

    ``alpha`` and ``beta`` are the arguments of the sine map, so that
    ``r_hat_re = sin(alpha)`` and ``r_hat_im = sin(beta)``.
    """

    r_hat_re: float
    r_hat_im: float
    alpha: float
    beta: float

    @property
    def value(self):
        return complex(self.r_hat_re, self.r_hat_im)


def _check_lengths(seqs):
    if len(seqs) < 1:
        raise LengthMismatchError('At least one channel is required.')
    n = seqs[0].n
    for k, s in enumerate(seqs):
        if s.n != n:
            raise LengthMismatchError(
                'Channel {} has {} samples, channel 0 has {}.'.format(k, s.n, n))
    return n


def sign_sum(a, b):
    """Return the exact integer ``sum(a_i * b_i)``."""

    return 2 * agreement_count(a, b) - a.n


def complex_sign_sums(a, b):
    """Return the exact integer sums of the complex estimate.

    :return: A pair ``(re_sum, im_sum)`` where ``re_sum`` is
      ``sum(a_iR*b_iR + a_iI*b_iI)`` and ``im_sum`` is
      ``sum(a_iI*b_iR - a_iR*b_iI)``.
    """

    if a.n != b.n:
        raise LengthMismatchError('Sign sequences differ in length ({} != {}).'.format(a.n, b.n))
    re_sum = sign_sum(a.re, b.re) + sign_sum(a.im, b.im)
    im_sum = sign_sum(a.im, b.re) - sign_sum(a.re, b.im)
    return re_sum, im_sum


def real_entry(s, n):
    """Map an integer sign sum over `n` samples to the real PCC estimate."""

    return math.sin(math.pi / 2 * (s / n))


def complex_entry(re_sum, im_sum, n):
    """Map the integer sums over `n` samples to a :class:`ComplexPccPair`."""

    alpha = math.pi / 4 * (re_sum / n)
    beta = math.pi / 4 * (im_sum / n)
    return ComplexPccPair(math.sin(alpha), math.sin(beta), alpha, beta)


def pcc_real(a, b):
    """Return the real PCC estimate of two sign sequences."""

    return real_entry(sign_sum(a, b), a.n)


def pcc_complex(a, b):
    """Return the complex PCC estimate of two complex sign sequences."""

    re_sum, im_sum = complex_sign_sums(a, b)
    return complex_entry(re_sum, im_sum, a.n)


def matrix_from_sums(p, n, mode, sums):
    """Assemble a :class:`CorrMatrix` from per-pair integer sums.

    :param sums: A mapping from ``(i, j)`` with ``i < j`` to the
      integer sign sum (real mode) or the ``(re_sum, im_sum)`` pair
      (complex mode)
    """

    entries = np.eye(p, dtype=complex)
    for (i, j), s in sums.items():
        if mode == REAL:
            value = complex(real_entry(s, n), 0.0)
        else:
            value = complex_entry(s[0], s[1], n).value
        entries[i, j] = value
        entries[j, i] = value.conjugate()
    return CorrMatrix(entries.real if mode == REAL else entries, mode)


def pcc_matrix_real(seqs):
    """Return the element-wise real PCC covariance estimate."""

    n = _check_lengths(seqs)
    sums = {(i, j): sign_sum(seqs[i], seqs[j]) for i, j in combinations(range(len(seqs)), 2)}
    return matrix_from_sums(len(seqs), n, REAL, sums)


def pcc_matrix_complex(seqs):
    """Return the element-wise complex PCC covariance estimate."""

    n = _check_lengths(seqs)
    sums = {(i, j): complex_sign_sums(seqs[i], seqs[j]) for i, j in combinations(range(len(seqs)), 2)}
    return matrix_from_sums(len(seqs), n, COMPLEX, sums)


def sample_corr_matrix(data):
    """Return the classical sample correlation matrix.

    :param data: A ``p x N`` array of real or complex samples, one row
      per channel. Channels are centered on their sample mean.
    """

    data = np.asarray(data)
    if data.ndim != 2 or data.shape[1] < 2:
        raise LengthMismatchError('At least two samples per channel are required.')
    mode = COMPLEX if np.iscomplexobj(data) else REAL
    centered = data - data.mean(axis=1, keepdims=True)
    cov = centered @ centered.conj().T / data.shape[1]
    var = np.real(np.diag(cov))
    if np.any(var <= 0.0):
        raise DomainError('Channel {} has zero variance.'.format(int(np.argmin(var))))
    scale = np.sqrt(var)
    corr = cov / np.outer(scale, scale)
    np.fill_diagonal(corr, 1.0)

    # Rounding can push perfectly correlated channels a few ulps past one.
    modulus = np.abs(corr)
    corr = np.where(modulus > 1.0, corr / np.maximum(modulus, 1.0), corr)
    return CorrMatrix.from_array(corr, mode)


def estimate(data, mode=REAL, center=None):
    """Estimate the PCC covariance matrix of raw samples.

    Zero-mean signals are assumed; no centering is applied unless
    ``center='median'`` is passed.

    :param data: A ``p x N`` array of samples, one row per channel
    :param mode: Either ``'real'`` or ``'complex'``
    :param center: `None` or ``'median'``
    """

    _check_mode(mode)
    data = np.asarray(data, dtype=complex if mode == COMPLEX else float)
    if data.ndim != 2 or data.shape[0] < 1:
        raise LengthMismatchError('Expected a two-dimensional array of samples.')
    if center == 'median':
        if mode == COMPLEX:
            data = data - (np.median(data.real, axis=1, keepdims=True)
                           + 1j * np.median(data.imag, axis=1, keepdims=True))
        else:
            data = data - np.median(data, axis=1, keepdims=True)
    elif center is not None:
        raise DomainError('Unknown centering: {!r}.'.format(center))
    if mode == REAL:
        return pcc_matrix_real([extract(row) for row in data])
    return pcc_matrix_complex([extract_complex(row) for row in data])
