import pytest
from pcc_toolkit.enumeration import EnumerationSummary
from pcc_toolkit.utils import (
    PccError, DomainError, LengthMismatchError, NonHermitianError, BudgetExceededError,
    InputFormatError, NotPsdError, chunk_ranges, report_violation_count,
)


@pytest.mark.parametrize('start, stop, count, expected', [
    (0, 10, 1, [(0, 10)]),
    (0, 10, 3, [(0, 4), (4, 7), (7, 10)]),
    (5, 7, 4, [(5, 6), (6, 7)]),
    (0, 0, 2, [(0, 0)]),
])
def test_chunk_ranges(start, stop, count, expected):
    assert chunk_ranges(start, stop, count) == expected


def test_chunk_ranges_cover_everything():
    for total in range(1, 50):
        for count in range(1, 10):
            ranges = chunk_ranges(0, total, count)
            covered = [i for lo, hi in ranges for i in range(lo, hi)]
            assert covered == list(range(total))


def test_exception_hierarchy():
    for cls in [DomainError, LengthMismatchError, NonHermitianError, BudgetExceededError,
                InputFormatError, NotPsdError]:
        assert issubclass(cls, PccError)
    assert issubclass(NonHermitianError, DomainError)
    assert issubclass(DomainError, ValueError)
    assert issubclass(LengthMismatchError, ValueError)


def _summary(violations):
    return EnumerationSummary(4, 4, 'real', True, 1e-9, 4096, violations, 0.0, ())


def test_report_violation_count(caplog):
    report_violation_count(_summary(0))
    assert 'No PSD violations among 4096 configurations.' in caplog.text
    report_violation_count(_summary(1))
    assert '1 PSD violation among 4096 configurations.' in caplog.text
    report_violation_count(_summary(7))
    assert '7 PSD violations among 4096 configurations.' in caplog.text
