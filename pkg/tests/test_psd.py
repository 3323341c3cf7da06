import json
import math
import numpy as np
import pytest
from pcc_toolkit import schemas
from pcc_toolkit.estimator import COMPLEX, CorrMatrix, pcc_matrix_real, pcc_matrix_complex
from pcc_toolkit.psd import (
    jacobi_eigenvalues, eigvals_sym, eigvals_herm, check_psd, det3, valid_range_3x3, sign_range,
    identity_check, range_consistency, canonical_pack,
)
from pcc_toolkit.signs import ComplexSignSequence, SignSequence, sign_corr
from pcc_toolkit.utils import DomainError, LengthMismatchError, NonHermitianError
from conftest import seq

SQRT_2 = math.sqrt(2.0)


def random_corr(gen, p, is_complex=False):
    x = gen.standard_normal((p, 3 * p))
    if is_complex:
        x = x + 1j * gen.standard_normal((p, 3 * p))
    cov = x @ x.conj().T
    d = np.sqrt(np.real(np.diag(cov)))
    m = cov / np.outer(d, d)
    np.fill_diagonal(m, 1.0)
    return (m + m.conj().T) / 2.0


def test_eigvals_sym():
    assert eigvals_sym(np.eye(3)) == [1.0, 1.0, 1.0]
    assert eigvals_sym([[1, 1], [1, 1]]) == pytest.approx([0.0, 2.0], abs=1e-12)
    assert eigvals_sym([[5.0]]) == [5.0]


def test_eigvals_sym_table1(table1_real_seqs):
    eig = eigvals_sym(pcc_matrix_real(table1_real_seqs))
    assert eig == pytest.approx([1 - SQRT_2, 1.0, 1.0, 1 + SQRT_2], abs=1e-9)


def test_eigvals_sym_errors():
    with pytest.raises(NonHermitianError):
        eigvals_sym([[1, 0.5], [0.4, 1]])
    with pytest.raises(DomainError):
        eigvals_sym([[1, 0.5j], [-0.5j, 1]])
    with pytest.raises(DomainError):
        eigvals_sym([[1, 0.5, 0.5]])


def test_eigvals_herm():
    assert eigvals_herm([[1, 1j], [-1j, 1]]) == pytest.approx([0.0, 2.0], abs=1e-12)
    assert eigvals_herm(np.eye(4)) == pytest.approx([1.0] * 4, abs=1e-15)
    with pytest.raises(NonHermitianError):
        eigvals_herm([[1, 1j], [1j, 1]])


def test_eigvals_herm_table1(table1_complex_seqs):
    eig = eigvals_herm(pcc_matrix_complex(table1_complex_seqs))
    assert eig == pytest.approx([1 - SQRT_2, 1.0, 1 + SQRT_2], abs=1e-9)


def test_eigenvalues_against_lapack(gen):
    for p in range(1, 9):
        m = random_corr(gen, p)
        assert eigvals_sym(m) == pytest.approx(np.linalg.eigvalsh(m).tolist(), abs=1e-9)
        assert eigvals_herm(m) == pytest.approx(eigvals_sym(m), abs=1e-9)
        h = random_corr(gen, p, is_complex=True)
        assert eigvals_herm(h) == pytest.approx(np.linalg.eigvalsh(h).tolist(), abs=1e-9)


def test_jacobi_converges_without_warnings(caplog, gen, table1_complex_seqs):
    eig = eigvals_herm(pcc_matrix_complex(table1_complex_seqs))
    assert eig == pytest.approx([1 - SQRT_2, 1.0, 1 + SQRT_2], abs=1e-12)
    for p in range(2, 9):
        a = random_corr(gen, p, is_complex=True)
        embedded = np.block([[a.real, -a.imag], [a.imag, a.real]])
        assert jacobi_eigenvalues(embedded) == pytest.approx(np.linalg.eigvalsh(embedded), abs=1e-12)
    assert 'did not converge' not in caplog.text


def test_eigenvalues_sum_to_dimension(gen):
    for _ in range(20):
        p = int(gen.integers(2, 7))
        n = int(gen.integers(1, 20))
        seqs = [SignSequence.from_bools(gen.random(n) < 0.5) for _ in range(p)]
        assert sum(eigvals_sym(pcc_matrix_real(seqs))) == pytest.approx(p, abs=1e-9)
        cseqs = [ComplexSignSequence(s, s.complement()) for s in seqs]
        assert sum(eigvals_herm(pcc_matrix_complex(cseqs))) == pytest.approx(p, abs=1e-9)


def test_check_psd(table1_real_seqs, table1_complex_seqs):
    report = check_psd(pcc_matrix_real(table1_real_seqs))
    assert not report.is_psd
    assert report.min_eig == pytest.approx(1 - SQRT_2, abs=1e-9)
    assert report.min_eig == report.eigenvalues[0]
    assert report.tolerance == 1e-9

    report = check_psd(pcc_matrix_complex(table1_complex_seqs))
    assert not report.is_psd
    assert len(report.eigenvalues) == 3

    report = check_psd(CorrMatrix.from_array(np.ones((3, 3))))
    assert report.is_psd
    assert report.eigenvalues == pytest.approx([0.0, 0.0, 3.0], abs=1e-12)

    report = check_psd(CorrMatrix.from_array(np.eye(2)))
    assert report.is_psd


def test_check_psd_tolerance():
    m = CorrMatrix.from_array([[1, 0.5, -0.5], [0.5, 1, 0.5], [-0.5, 0.5, 1]])
    # The smallest eigenvalue is exactly zero.
    assert check_psd(m).is_psd
    assert check_psd(m, tolerance=0.0).min_eig == pytest.approx(0.0, abs=1e-12)
    m = CorrMatrix.from_array([[1, 0.5, -0.6], [0.5, 1, 0.5], [-0.6, 0.5, 1]])
    assert not check_psd(m).is_psd
    assert check_psd(m, tolerance=1.0).is_psd


def test_check_psd_complex_mode():
    m = CorrMatrix.from_array([[1, 0.6j], [-0.6j, 1]], COMPLEX)
    assert check_psd(m).eigenvalues == pytest.approx([0.4, 1.6], abs=1e-12)


@pytest.mark.parametrize('r12, r13, lo, hi', [
    (0.0, 0.0, -1.0, 1.0),
    (1.0, 1.0, 1.0, 1.0),
    (1.0, -1.0, -1.0, -1.0),
    (0.5, 0.5, -0.5, 1.0),
    (1.0, 0.5, 0.5, 0.5),
])
def test_valid_range_3x3(r12, r13, lo, hi):
    assert valid_range_3x3(r12, r13) == pytest.approx((lo, hi), abs=1e-15)


def test_valid_range_3x3_errors():
    with pytest.raises(DomainError):
        valid_range_3x3(1.5, 0.0)
    with pytest.raises(DomainError):
        valid_range_3x3(0.0, math.nan)


def test_determinant_vanishes_at_range_boundary():
    grid = np.linspace(-1.0, 1.0, 41)
    for r12 in grid:
        for r13 in grid:
            lo, hi = valid_range_3x3(r12, r13)
            assert lo <= hi
            assert det3(r12, r13, lo) == pytest.approx(0.0, abs=1e-12)
            assert det3(r12, r13, hi) == pytest.approx(0.0, abs=1e-12)
            assert det3(r12, r13, (lo + hi) / 2.0) >= -1e-12


@pytest.mark.parametrize('rs12, rs13, n, lo, hi', [
    (0.0, 0.0, 4, -1.0, 1.0),
    (1.0, 1.0, 4, 1.0, 1.0),
    (0.5, -0.5, 4, -1.0, 0.0),
    (0.5, 0.5, 4, 0.0, 1.0),
    (1.0, -1.0, 4, -1.0, -1.0),
])
def test_sign_range(rs12, rs13, n, lo, hi):
    assert sign_range(rs12, rs13, n) == (lo, hi)


def test_sign_range_errors():
    with pytest.raises(DomainError):
        sign_range(0.3, 0.0, 4)
    with pytest.raises(DomainError):
        sign_range(1.5, 0.0, 4)
    with pytest.raises(LengthMismatchError):
        sign_range(0.0, 0.0, 0)


def test_identity_check_examples():
    assert identity_check(0.0, 0.0) == pytest.approx((0.0, 0.0), abs=1e-15)
    assert identity_check(1.0, -1.0) == pytest.approx((0.0, 0.0), abs=1e-15)
    assert identity_check(0.5, 0.5) == pytest.approx((0.0, 0.0), abs=1e-12)
    assert identity_check(1.0, 1.0) == pytest.approx((0.0, 0.0), abs=1e-12)


def test_identity_check_grid():
    for k12 in range(-100, 101):
        for k13 in range(-100, 101):
            hi, lo = identity_check(k12 / 100, k13 / 100)
            assert abs(hi) < 1e-12
            assert abs(lo) < 1e-12


def test_range_consistency_grid():
    for k12 in range(-20, 21):
        for k13 in range(-20, 21):
            lo, hi = range_consistency(k12 / 20, k13 / 20)
            assert lo > -1e-12
            assert hi > -1e-12


def test_canonical_pack_example():
    model = canonical_pack([seq('++++'), seq('++--'), seq('+-+-')])
    assert model.a == (1.0, 0.5, 0.5)
    assert [str(s) for s in model.reordered] == ['++++', '++--', '-++-']
    assert model.order == (1, 0, 2, 3)
    assert model.flips == (False,) * 4


def test_canonical_pack_flips_channel_zero():
    model = canonical_pack([seq('-+'), seq('++')])
    assert model.flips == (True, False)
    assert model.a == (1.0, 0.5)
    assert str(model.reordered[0]) == '++'
    assert str(model.reordered[1]) == '+-'


def test_canonical_pack_preserves_pcc(gen):
    for _ in range(100):
        p = int(gen.integers(2, 6))
        n = int(gen.integers(1, 40))
        seqs = [SignSequence.from_bools(gen.random(n) < 0.5) for _ in range(p)]
        model = canonical_pack(seqs)
        assert all(b for b in model.reordered[0].to_bools())
        assert pcc_matrix_real(model.reordered) == pcc_matrix_real(seqs)
        assert sorted(model.order) == list(range(n))
        for k in range(p):
            assert model.a[k] == (1.0 + sign_corr(seqs[0], seqs[k])) / 2.0

        # Channel 1 coincidences come first.
        agree1 = model.reordered[1].to_bools()
        assert list(agree1) == sorted(agree1, reverse=True)


def test_canonical_pack_errors():
    with pytest.raises(LengthMismatchError):
        canonical_pack([seq('++')])
    with pytest.raises(LengthMismatchError):
        canonical_pack([seq('++'), seq('+')])


def test_canonical_pack_identical_and_complemented():
    assert canonical_pack([seq('+-+-'), seq('+-+-'), seq('+-+-')]).a == (1.0, 1.0, 1.0)
    model = canonical_pack([seq('+-+-'), seq('-+-+')])
    assert model.a == (1.0, 0.0)
    assert str(model.reordered[1]) == '----'


def test_canonical_pack_json():
    model = canonical_pack([seq('-+'), seq('++'), seq('+-')])
    data = json.loads(schemas.dumps(schemas.StripModelSchema().dump(model)))
    assert data == {
        'a': [1.0, 0.5, 0.0],
        'reordered': ['++', '+-', '--'],
        'order': [1, 0],
        'flips': [True, False],
    }
