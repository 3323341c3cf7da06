"""
Eigenvalues, PSD verdicts, and the validity machinery of unit-diagonal
3x3 correlation matrices.
"""

import math
import logging
from typing import NamedTuple, Tuple
import numpy as np
from .estimator import REAL, COMPLEX, CorrMatrix
from .signs import SignSequence, sign_corr
from .utils import DomainError, LengthMismatchError, NonHermitianError

__all__ = [
    'DEFAULT_TOLERANCE',
    'Interval',
    'IdentityResiduals',
    'PsdReport',
    'StripModel',
    'jacobi_eigenvalues',
    'eigvals_sym',
    'eigvals_herm',
    'check_psd',
    'det3',
    'valid_range_3x3',
    'sign_range',
    'identity_check',
    'range_consistency',
    'canonical_pack',
]

_LOGGER = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-12
GRID_TOLERANCE = 1e-9
_MAX_SWEEPS = 100


class Interval(NamedTuple):
    lo: float
    hi: float


class IdentityResiduals(NamedTuple):
    hi: float
    lo: float


class PsdReport(NamedTuple):
    """The eigenvalues of a matrix and its PSD verdict.

    ``is_psd`` is true iff ``min_eig >= -tolerance``.
    """

    eigenvalues: Tuple[float, ...]
    min_eig: float
    is_psd: bool
    tolerance: float


class StripModel(NamedTuple):
    """Sign sequences in canonical strip order.

    ``a[i]`` is the fraction of samples where channel ``i`` agrees
    with channel 0. ``order`` is the sample permutation that was
    applied, and ``flips`` marks the samples whose signs were flipped
    in every channel so that channel 0 becomes all +1.
    """

    a: Tuple[float, ...]
    reordered: Tuple[SignSequence, ...]
    order: Tuple[int, ...]
    flips: Tuple[bool, ...]


def jacobi_eigenvalues(a):
    """Return the eigenvalues of a real symmetric array, ascending.

    Cyclic Jacobi rotations are applied to a private copy of `a` until
    the off-diagonal Frobenius norm drops below ``1e-14 * p``.
    """

    a = np.array(a, dtype=float)
    p = a.shape[0]
    threshold = 1e-14 * p
    for _ in range(_MAX_SWEEPS):
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off < threshold:
            break
        for i in range(p - 1):
            for j in range(i + 1, p):
                apq = a[i, j]
                if apq == 0.0:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_i = a[:, i].copy()
                col_j = a[:, j].copy()
                a[:, i] = c * col_i - s * col_j
                a[:, j] = s * col_i + c * col_j
                row_i = a[i, :].copy()
                row_j = a[j, :].copy()
                a[i, :] = c * row_i - s * row_j
                a[j, :] = s * row_i + c * row_j
                a[i, j] = a[j, i] = 0.0
    else:
        _LOGGER.warning('Jacobi iteration did not converge in %i sweeps.', _MAX_SWEEPS)
    return np.sort(np.diag(a))


def _as_array(m):
    return m.entries if isinstance(m, CorrMatrix) else np.asarray(m, dtype=complex)


def eigvals_sym(m):
    """Return the eigenvalues of a real symmetric matrix, ascending.

    :param m: A real-mode :class:`CorrMatrix` or a square array
    """

    a = _as_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError('Expected a non-empty square matrix.')
    if np.any(a.imag != 0.0):
        raise DomainError('Expected a real matrix; use eigvals_herm for complex ones.')
    a = a.real
    if np.max(np.abs(a - a.T)) > SYMMETRY_TOLERANCE:
        raise NonHermitianError('The matrix is not symmetric.')
    return [float(x) for x in jacobi_eigenvalues(a)]


def eigvals_herm(m):
    """Return the eigenvalues of a Hermitian matrix, ascending.

    The matrix ``A + jB`` is embedded as the real symmetric matrix
    ``[[A, -B], [B, A]]`` whose spectrum holds every eigenvalue
    twice. Sorted neighbours are paired and averaged.
    """

    a = _as_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError('Expected a non-empty square matrix.')
    if np.max(np.abs(a - a.conj().T)) > SYMMETRY_TOLERANCE:
        raise NonHermitianError('The matrix is not Hermitian.')
    re, im = a.real, a.imag
    embedded = np.block([[re, -im], [im, re]])
    doubled = jacobi_eigenvalues(embedded)
    return [float(x) for x in (doubled[0::2] + doubled[1::2]) / 2.0]


def check_psd(m, tolerance=DEFAULT_TOLERANCE):
    """Compute the eigenvalues of `m` and decide whether it is PSD.

    :param m: A :class:`~pcc_toolkit.estimator.CorrMatrix`
    :param float tolerance: Eigenvalues down to ``-tolerance`` count as zero
    :rtype: PsdReport
    """

    eigenvalues = eigvals_herm(m) if m.mode == COMPLEX else eigvals_sym(m)
    min_eig = eigenvalues[0]
    return PsdReport(tuple(eigenvalues), min_eig, min_eig >= -tolerance, tolerance)


def det3(r12, r13, r23):
    """Return the determinant of the unit-diagonal 3x3 matrix."""

    return 1.0 + 2.0 * r12 * r13 * r23 - r12 * r12 - r13 * r13 - r23 * r23


def _check_unit(*values):
    for v in values:
        if not (math.isfinite(v) and -1.0 <= v <= 1.0):
            raise DomainError('Correlation {!r} is outside [-1, 1].'.format(v))


def valid_range_3x3(r12, r13):
    """Return the range of ``r23`` keeping the 3x3 matrix PSD."""

    _check_unit(r12, r13)
    center = r12 * r13
    radius = math.sqrt(max(0.0, (1.0 - r12 * r12) * (1.0 - r13 * r13)))
    return Interval(center - radius, center + radius)


def _check_on_grid(rs, n):
    _check_unit(rs)
    k = (rs + 1.0) * n / 2.0
    if abs(k - round(k)) > GRID_TOLERANCE:
        raise DomainError('Sign correlation {!r} is not a multiple of 2/{} shifted from -1.'.format(rs, n))


def sign_range(rs12, rs13, n):
    """Return the reachable range of ``r_s23`` for `n` samples.

    :param rs12: Sign correlation of channels 1 and 2
    :param rs13: Sign correlation of channels 1 and 3
    :param int n: The number of samples
    """

    if n < 1:
        raise LengthMismatchError('The number of samples must be positive.')
    _check_on_grid(rs12, n)
    _check_on_grid(rs13, n)
    return Interval(abs(rs12 + rs13) - 1.0, 1.0 - abs(rs12 - rs13))


def _sine_map(rs):
    return math.sin(math.pi / 2 * rs)


def identity_check(rs12, rs13):
    """Return the residuals of the two sine identities at the range endpoints.

    Both residuals are zero (up to rounding) when the sine map sends
    the endpoints of :func:`sign_range` onto the endpoints of
    :func:`valid_range_3x3`.
    """

    _check_unit(rs12, rs13)
    valid = valid_range_3x3(_sine_map(rs12), _sine_map(rs13))
    residual_hi = _sine_map(1.0 - abs(rs12 - rs13)) - valid.hi
    residual_lo = _sine_map(abs(rs12 + rs13) - 1.0) - valid.lo
    return IdentityResiduals(residual_hi, residual_lo)


def range_consistency(rs12, rs13):
    """Return how far the mapped sign range lies inside the valid range.

    :return: An :class:`Interval` of slacks ``(lo, hi)``; both are
      non-negative (up to rounding) when the mapped range is contained
      in the valid range.
    """

    _check_unit(rs12, rs13)
    valid = valid_range_3x3(_sine_map(rs12), _sine_map(rs13))
    lo_sign, hi_sign = abs(rs12 + rs13) - 1.0, 1.0 - abs(rs12 - rs13)
    return Interval(_sine_map(lo_sign) - valid.lo, valid.hi - _sine_map(hi_sign))


# Strip order of (agrees with channel 0 in channel 1, ... in channel 2).
_STRIP_RANK_3 = {(True, False): 0, (True, True): 1, (False, True): 2, (False, False): 3}


def canonical_pack(seqs):
    """Reorder samples into the canonical strip model.

    Every sample where channel 0 is -1 is flipped in all channels, so
    that channel 0 becomes all +1; this leaves every pairwise product
    unchanged. Samples are then stably sorted by the agreement state
    of channels 1 and 2 in the order ``++-``, ``+++``, ``+-+``,
    ``+--``, which packs channel 1's coincidences to the left and
    channel 2's coincidences into a strip next to them. Further
    channels are carried along.
    """

    if len(seqs) < 2:
        raise LengthMismatchError('The strip model needs at least two channels.')
    n = seqs[0].n
    for k, s in enumerate(seqs):
        if s.n != n:
            raise LengthMismatchError('Channel {} has {} samples, channel 0 has {}.'.format(k, s.n, n))

    flips = ~seqs[0].to_bools()
    normalized = [s.flipped(flips) for s in seqs]
    agree1 = normalized[1].to_bools()
    if len(seqs) >= 3:
        agree2 = normalized[2].to_bools()
        ranks = [_STRIP_RANK_3[(bool(y), bool(z))] for y, z in zip(agree1, agree2)]
    else:
        ranks = [0 if y else 1 for y in agree1]
    order = np.argsort(np.array(ranks), kind='stable')
    reordered = tuple(s.permuted(order) for s in normalized)
    a = tuple((1.0 + sign_corr(seqs[0], s)) / 2.0 for s in seqs)
    return StripModel(a, reordered, tuple(int(i) for i in order), tuple(bool(f) for f in flips))
