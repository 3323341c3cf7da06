import logging

__all__ = [
    'PccError',
    'DomainError',
    'LengthMismatchError',
    'NonHermitianError',
    'BudgetExceededError',
    'InputFormatError',
    'NotPsdError',
    'chunk_ranges',
    'report_violation_count',
]


class PccError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PccError, ValueError):
    """A value lies outside the mathematical domain of an operation."""


class LengthMismatchError(PccError, ValueError):
    """Sign sequences have different (or zero) lengths."""


class NonHermitianError(DomainError):
    """The matrix is not symmetric (Hermitian) within tolerance."""


class BudgetExceededError(PccError):
    """The enumeration search space is larger than the allowed budget."""


class InputFormatError(PccError):
    """The input file can not be parsed."""


class NotPsdError(PccError):
    """A matrix expected to be PSD is not (or vice versa)."""


def chunk_ranges(start, stop, count):
    """Split ``range(start, stop)`` into at most `count` contiguous ranges.

    The ranges are returned in order and cover every index exactly
    once. Earlier ranges get one extra element when the length does
    not divide evenly.
    """

    assert count >= 1
    total = stop - start
    count = max(1, min(count, total))
    size, extra = divmod(total, count)
    ranges = []
    lo = start
    for k in range(count):
        hi = lo + size + (1 if k < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def report_violation_count(summary):
    logger = logging.getLogger(__name__)
    violations = summary.violations
    if violations == 0:
        logger.info('No PSD violations among %i configurations.', summary.total_configs)
    elif violations == 1:
        logger.info('%i PSD violation among %i configurations.', violations, summary.total_configs)
    else:
        logger.info('%i PSD violations among %i configurations.', violations, summary.total_configs)
