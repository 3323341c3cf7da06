"""
Exhaustive verification of the PSD property of PCC matrices.

Configurations are numbered by reading the concatenated sign bits of
all channels as one big-endian binary number (bit 1 means sign +1),
channel 0 first and sample 0 first within a channel. In complex mode
every sample contributes two bits, the real-part sign followed by the
imaginary-part sign. With symmetry reduction channel 0 is fixed to all
+1 (all ``++`` in complex mode) and only the remaining channels are
numbered.

The search space is split into contiguous index ranges, one per
worker. Each worker scans its range in vectorized blocks: the integer
sign sums of every channel pair are computed with XOR and popcount,
and the PSD check runs once per distinct tuple of sums. Results are
merged in range order, so summaries do not depend on the number of
workers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import NamedTuple, Tuple
import numpy as np
from .estimator import REAL, COMPLEX, CorrMatrix, matrix_from_sums, pcc_matrix_real, pcc_matrix_complex
from .psd import DEFAULT_TOLERANCE, check_psd
from .signs import SignSequence, ComplexSignSequence, pack, from_quadrants
from .utils import (
    BudgetExceededError, DomainError, LengthMismatchError, NotPsdError,
    chunk_ranges, report_violation_count,
)

__all__ = [
    'DEFAULT_MAX_CONFIGS',
    'DEFAULT_MAX_WITNESSES',
    'Witness',
    'EnumerationSummary',
    'enumerate_real',
    'enumerate_complex',
    'config_sequences',
    'sign_range_coverage',
    'table1_real',
    'table1_complex',
    'augment_real',
    'augment_complex',
    'counterexample',
]

_LOGGER = logging.getLogger(__name__)

DEFAULT_MAX_CONFIGS = 2 ** 32
DEFAULT_MAX_WITNESSES = 16
DEFAULT_BLOCK_SIZE = 2 ** 16
_MAX_INDEX_BITS = 63

# The smallest dimensions for which PSD is not guaranteed.
MIN_COUNTEREXAMPLE_P = {REAL: 4, COMPLEX: 3}


class Witness(NamedTuple):
    """A configuration whose PCC matrix has a negative eigenvalue."""

    index: int
    sequences: tuple
    matrix: CorrMatrix
    eigenvalues: Tuple[float, ...]


class EnumerationSummary(NamedTuple):
    """The outcome of an exhaustive enumeration.

    ``witnesses`` holds the first violating configurations in index
    order, at most ``max_witnesses`` of them.
    """

    p: int
    n: int
    mode: str
    symmetry_reduce: bool
    tolerance: float
    total_configs: int
    violations: int
    min_min_eig: float
    witnesses: Tuple[Witness, ...]

    def contains(self, sequences):
        """Tell whether the given configuration is among the stored witnesses."""

        sequences = tuple(sequences)
        return any(w.sequences == sequences for w in self.witnesses)


class _Tally:
    def __init__(self):
        self.total = 0
        self.violations = 0
        self.min_min_eig = float('inf')
        self.witness_indices = []

    def merge(self, other, max_witnesses):
        self.total += other.total
        self.violations += other.violations
        self.min_min_eig = min(self.min_min_eig, other.min_min_eig)
        self.witness_indices.extend(other.witness_indices)
        if max_witnesses is not None:
            del self.witness_indices[max_witnesses:]


class _Space:
    """Index layout and vectorized sign-sum kernel of one search space."""

    def __init__(self, p, n, mode, symmetry_reduce):
        if p < 2:
            raise DomainError('At least two channels are required.')
        if n < 1:
            raise LengthMismatchError('At least one sample is required.')
        self.p = p
        self.n = n
        self.mode = mode
        self.symmetry_reduce = symmetry_reduce
        self.channel_bits = n if mode == REAL else 2 * n
        self.free_channels = p - 1 if symmetry_reduce else p
        self.index_bits = self.free_channels * self.channel_bits
        self.total = 2 ** self.index_bits
        self.pairs = list(combinations(range(p), 2))

    def check_budget(self, max_configs):
        if self.total > max_configs:
            raise BudgetExceededError(
                '{} configurations exceed the budget of {} configurations (max_configs).'.format(
                    self.total, max_configs))
        if self.index_bits > _MAX_INDEX_BITS:
            raise BudgetExceededError(
                'Configuration indices need {} bits, at most {} are supported.'.format(
                    self.index_bits, _MAX_INDEX_BITS))

    def channel_values(self, idx):
        """Return one array of channel bit patterns per channel."""

        width = self.channel_bits
        mask = np.uint64((1 << width) - 1)
        values = []
        if self.symmetry_reduce:
            values.append(np.full(idx.shape, mask, dtype=np.uint64))
        for k in range(self.free_channels):
            shift = np.uint64((self.free_channels - 1 - k) * width)
            values.append((idx >> shift) & mask)
        return values

    def planes(self, value):
        """Split complex channel patterns into real-part and imaginary-part planes."""

        n = self.n
        one = np.uint64(1)
        re = np.zeros_like(value)
        im = np.zeros_like(value)
        for i in range(n):
            target = np.uint64(n - 1 - i)
            re |= ((value >> np.uint64(2 * n - 1 - 2 * i)) & one) << target
            im |= ((value >> np.uint64(2 * n - 2 - 2 * i)) & one) << target
        return re, im

    def sums(self, idx):
        """Return the integer sign sums of every pair, one row per configuration."""

        n = self.n

        def pair_sum(u, v):
            return n - 2 * np.bitwise_count(u ^ v).astype(np.int64)

        values = self.channel_values(idx)
        columns = []
        if self.mode == REAL:
            for i, j in self.pairs:
                columns.append(pair_sum(values[i], values[j]))
        else:
            planes = [self.planes(v) for v in values]
            for i, j in self.pairs:
                (a_re, a_im), (b_re, b_im) = planes[i], planes[j]
                columns.append(pair_sum(a_re, b_re) + pair_sum(a_im, b_im))
                columns.append(pair_sum(a_im, b_re) - pair_sum(a_re, b_im))
        return np.stack(columns, axis=1)

    def matrix_from_key(self, key):
        if self.mode == REAL:
            sums = dict(zip(self.pairs, key))
        else:
            sums = {pair: (key[2 * k], key[2 * k + 1]) for k, pair in enumerate(self.pairs)}
        return matrix_from_sums(self.p, self.n, self.mode, sums)

    def sequences(self, index):
        """Decode a configuration index into its sign sequences."""

        if not 0 <= index < self.total:
            raise DomainError('Configuration index {} is out of range.'.format(index))
        width = self.channel_bits
        patterns = [(1 << width) - 1] if self.symmetry_reduce else []
        for k in range(self.free_channels):
            patterns.append((index >> ((self.free_channels - 1 - k) * width)) & ((1 << width) - 1))
        bits = [[(v >> (width - 1 - b)) & 1 == 1 for b in range(width)] for v in patterns]
        if self.mode == REAL:
            return tuple(SignSequence.from_bools(b) for b in bits)
        return tuple(
            ComplexSignSequence(SignSequence.from_bools(b[0::2]), SignSequence.from_bools(b[1::2]))
            for b in bits
        )


def _scan_range(space, lo, hi, tolerance, max_witnesses, block_size):
    tally = _Tally()
    cache = {}
    for start in range(lo, hi, block_size):
        stop = min(start + block_size, hi)
        idx = np.arange(start, stop, dtype=np.uint64)
        keys, inverse = np.unique(space.sums(idx), axis=0, return_inverse=True)
        key_min_eigs = np.empty(keys.shape[0])
        for k, key in enumerate(keys.tolist()):
            key = tuple(key)
            min_eig = cache.get(key)
            if min_eig is None:
                min_eig = cache[key] = check_psd(space.matrix_from_key(key)).min_eig
            key_min_eigs[k] = min_eig
        min_eigs = key_min_eigs[inverse.reshape(-1)]
        bad = np.flatnonzero(min_eigs < -tolerance)
        tally.total += stop - start
        tally.violations += int(bad.shape[0])
        tally.min_min_eig = min(tally.min_min_eig, float(min_eigs.min()))
        room = None if max_witnesses is None else max_witnesses - len(tally.witness_indices)
        if room is None or room > 0:
            tally.witness_indices.extend(start + int(i) for i in bad[:room])
        _LOGGER.debug('Scanned configurations %i to %i.', start, stop - 1)
    return tally


def _enumerate(space, tolerance, max_configs, max_witnesses, workers, block_size):
    assert workers >= 1
    assert block_size >= 1
    space.check_budget(max_configs)
    _LOGGER.info('Enumerating %i %s configurations (p=%i, n=%i) with %i worker(s).',
                 space.total, space.mode, space.p, space.n, workers)

    ranges = chunk_ranges(0, space.total, workers)
    if len(ranges) < workers:
        _LOGGER.warning('Only %i index range(s) for %i workers.', len(ranges), workers)

    def scan(r):
        return _scan_range(space, r[0], r[1], tolerance, max_witnesses, block_size)

    if len(ranges) == 1:
        tallies = [scan(ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as executor:
            tallies = list(executor.map(scan, ranges))

    result = _Tally()
    for tally in tallies:
        result.merge(tally, max_witnesses)
    _LOGGER.debug('Merged %i index range(s).', len(tallies))

    witnesses = []
    for index in result.witness_indices:
        sequences = space.sequences(index)
        if space.mode == REAL:
            matrix = pcc_matrix_real(sequences)
        else:
            matrix = pcc_matrix_complex(sequences)
        report = check_psd(matrix, tolerance)
        witnesses.append(Witness(index, sequences, matrix, report.eigenvalues))

    summary = EnumerationSummary(
        p=space.p,
        n=space.n,
        mode=space.mode,
        symmetry_reduce=space.symmetry_reduce,
        tolerance=tolerance,
        total_configs=result.total,
        violations=result.violations,
        min_min_eig=result.min_min_eig,
        witnesses=tuple(witnesses),
    )
    report_violation_count(summary)
    return summary


def enumerate_real(p, n, tolerance=DEFAULT_TOLERANCE, symmetry_reduce=True, *,
                   max_configs=DEFAULT_MAX_CONFIGS, max_witnesses=DEFAULT_MAX_WITNESSES,
                   workers=1, block_size=DEFAULT_BLOCK_SIZE):
    """Check the PSD property of the real PCC matrix of every configuration.

    :param int p: The number of channels
    :param int n: The number of samples
    :param float tolerance: PSD tolerance
    :param bool symmetry_reduce: If `True`, channel 0 is fixed to all
      +1. Flipping one sample in every channel preserves all pairwise
      products, so each class of configurations equivalent under such
      flips has exactly one member with channel 0 all +1, and the
      violation count of the full space is ``2**n`` times the reduced one.
    :param int max_configs: Refuse to run above this many configurations
    :param max_witnesses: How many violating configurations to store
      (`None` stores all of them)
    :param int workers: The number of worker threads
    :param int block_size: Configurations processed per vectorized block
    :rtype: EnumerationSummary
    """

    space = _Space(p, n, REAL, symmetry_reduce)
    return _enumerate(space, tolerance, max_configs, max_witnesses, workers, block_size)


def enumerate_complex(p, n, tolerance=DEFAULT_TOLERANCE, symmetry_reduce=False, *,
                      max_configs=DEFAULT_MAX_CONFIGS, max_witnesses=DEFAULT_MAX_WITNESSES,
                      workers=1, block_size=DEFAULT_BLOCK_SIZE):
    """Check the PSD property of the complex PCC matrix of every configuration.

    Each sample of each channel takes one of the four quadrant signs.
    With `symmetry_reduce` channel 0 is fixed to all ``++``:
    multiplying one sample of every channel by ``j`` permutes the
    quadrants and preserves all products ``x * conj(y)``. The reduction
    is off by default.

    Other parameters are as in :func:`enumerate_real`.
    """

    space = _Space(p, n, COMPLEX, symmetry_reduce)
    return _enumerate(space, tolerance, max_configs, max_witnesses, workers, block_size)


def config_sequences(index, p, n, mode=REAL, symmetry_reduce=True):
    """Return the sign sequences of the configuration with the given index."""

    return _Space(p, n, mode, symmetry_reduce).sequences(index)


def sign_range_coverage(n, *, block_size=DEFAULT_BLOCK_SIZE):
    """Collect every reachable ``r_s23`` for each ``(r_s12, r_s13)``.

    All real three-channel configurations with channel 0 fixed to all
    +1 are visited. Values are integer sign sums (multiply by ``1/n``
    to get sign correlations).

    :return: A dict mapping ``(s12, s13)`` to the set of observed ``s23``
    """

    space = _Space(3, n, REAL, True)
    space.check_budget(DEFAULT_MAX_CONFIGS)
    coverage = {}
    for start in range(0, space.total, block_size):
        idx = np.arange(start, min(start + block_size, space.total), dtype=np.uint64)
        for s12, s13, s23 in np.unique(space.sums(idx), axis=0).tolist():
            coverage.setdefault((s12, s13), set()).add(s23)
    return coverage


def table1_real():
    """Return the real four-channel counterexample.

    :return: A tuple ``(sequences, matrix, report)``
    """

    sequences = (
        pack([+1, +1, +1, +1]),
        pack([+1, +1, -1, -1]),
        pack([+1, +1, +1, -1]),
        pack([+1, +1, -1, +1]),
    )
    matrix = pcc_matrix_real(sequences)
    return sequences, matrix, check_psd(matrix)


def table1_complex():
    """Return the complex three-channel counterexample.

    :return: A tuple ``(sequences, matrix, report)``
    """

    sequences = (
        from_quadrants(['++', '++']),
        from_quadrants(['++', '-+']),
        from_quadrants(['++', '--']),
    )
    matrix = pcc_matrix_complex(sequences)
    return sequences, matrix, check_psd(matrix)


def _alternating(n):
    return np.arange(n) % 2 == 0


def augment_real(seqs):
    """Extend a set of sign sequences by one channel.

    Every sample is repeated twice, which leaves the PCC matrix
    unchanged, and a channel alternating +1, -1, ... is appended. It
    agrees with each duplicated pair of samples exactly once, so its
    PCC with every other channel is zero.
    """

    if len(seqs) < 1:
        raise LengthMismatchError('At least one channel is required.')
    doubled = [SignSequence.from_bools(np.repeat(s.to_bools(), 2)) for s in seqs]
    doubled.append(SignSequence.from_bools(_alternating(2 * seqs[0].n)))
    return doubled


def augment_complex(seqs):
    """Extend a set of complex sign sequences by one channel.

    Like :func:`augment_real`, but the appended channel alternates
    between ``++`` and ``--``.
    """

    if len(seqs) < 1:
        raise LengthMismatchError('At least one channel is required.')
    doubled = [
        ComplexSignSequence(
            SignSequence.from_bools(np.repeat(s.re.to_bools(), 2)),
            SignSequence.from_bools(np.repeat(s.im.to_bools(), 2)),
        )
        for s in seqs
    ]
    plane = SignSequence.from_bools(_alternating(2 * seqs[0].n))
    doubled.append(ComplexSignSequence(plane, plane))
    return doubled


def counterexample(p, mode=REAL, tolerance=DEFAULT_TOLERANCE):
    """Build a configuration of `p` channels whose PCC matrix is not PSD.

    The base counterexample is augmented as many times as needed.

    :return: A tuple ``(sequences, matrix, report)``
    """

    if mode not in MIN_COUNTEREXAMPLE_P:
        raise DomainError('Unknown mode: {!r}.'.format(mode))
    min_p = MIN_COUNTEREXAMPLE_P[mode]
    if p < min_p:
        raise DomainError(
            'No counterexample exists: the {} PCC estimate is always PSD for p <= {}.'.format(
                mode, min_p - 1))
    if mode == REAL:
        sequences, _, _ = table1_real()
        augment, build = augment_real, pcc_matrix_real
    else:
        sequences, _, _ = table1_complex()
        augment, build = augment_complex, pcc_matrix_complex
    for _ in range(p - min_p):
        sequences = augment(sequences)
    matrix = build(sequences)
    report = check_psd(matrix, tolerance)
    if report.is_psd:
        raise NotPsdError('The constructed {}x{} matrix is unexpectedly PSD.'.format(p, p))
    return tuple(sequences), matrix, report
