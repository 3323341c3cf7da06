import math
import numpy as np
import pytest
from click.testing import CliRunner
from pcc_toolkit.signs import SignSequence, from_quadrants


SQRT_HALF = math.sqrt(0.5)


def seq(text):
    """Build a sign sequence from a string like ``'++-+'``."""

    return SignSequence.from_bools([c == '+' for c in text])


def cseq(*quadrants):
    return from_quadrants(list(quadrants))


@pytest.fixture
def gen():
    return np.random.Generator(np.random.Philox(key=12345))


@pytest.fixture
def random_seq(gen):
    def make(n):
        return SignSequence.from_bools(gen.random(n) < 0.5)

    return make


@pytest.fixture
def table1_real_seqs():
    return (seq('++++'), seq('++--'), seq('+++-'), seq('++-+'))


@pytest.fixture
def table1_complex_seqs():
    return (cseq('++', '++'), cseq('++', '-+'), cseq('++', '--'))


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_csv(tmp_path):
    def write(rows, name='input.csv'):
        path = tmp_path / name
        path.write_text(''.join(','.join(str(v) for v in row) + '\n' for row in rows))
        return str(path)

    return write
