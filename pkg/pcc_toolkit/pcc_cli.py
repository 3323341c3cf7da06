import io
import csv
import sys
import math
import logging
from contextlib import contextmanager
import click
import numpy as np
from . import enumeration, estimator, psd, sampling, schemas, signs
from .config import load_config
from .estimator import REAL, COMPLEX
from .utils import InputFormatError, PccError

# Exit codes.
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_PSD = 2

_LOGGER = logging.getLogger(__name__)


class PccGroup(click.Group):
    """A command group that reports usage errors with exit code 1."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.ClickException as e:
            if not standalone_mode:
                raise
            e.show()
            sys.exit(EXIT_ERROR)
        except click.Abort:
            if not standalone_mode:
                raise
            click.echo('Aborted!', err=True)
            sys.exit(EXIT_ERROR)


@contextmanager
def _exit_on_error(action):
    try:
        yield
    except PccError as e:
        _LOGGER.debug('Caught error while %s.', action, exc_info=e)
        click.echo('Error: {}'.format(e), err=True)
        sys.exit(EXIT_ERROR)
    except OSError as e:
        click.echo('Error: {}'.format(e), err=True)
        sys.exit(EXIT_ERROR)
    except Exception:
        _LOGGER.exception('Caught error while %s.', action)
        sys.exit(EXIT_ERROR)


def _mode(is_complex):
    return COMPLEX if is_complex else REAL


def _emit(text, output):
    if output is None:
        click.echo(text)
    else:
        with open(output, 'w') as f:
            f.write(text + '\n')


def _decode(raw):
    try:
        return raw.decode('utf-8')
    except UnicodeDecodeError as e:
        head = raw[:e.start]
        line_number = head.count(b'\n') + 1
        column = head[head.rfind(b'\n') + 1:].count(b',') + 1
        raise InputFormatError(
            'line {}, column {}: the file is not valid UTF-8.'.format(line_number, column)) from e


def read_csv(path):
    """Read a CSV file of numbers into a ``rows x columns`` float array.

    Blank lines are skipped. Errors name the offending line and column.
    """

    with open(path, 'rb') as f:
        text = _decode(f.read())
    rows = []
    width = None
    reader = csv.reader(io.StringIO(text, newline=''))
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as e:
            raise InputFormatError('line {}, column 1: {}.'.format(reader.line_num, e)) from e
        line_number = reader.line_num
        if not row or all(cell.strip() == '' for cell in row):
            continue
        values = []
        for column, cell in enumerate(row, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise InputFormatError(
                    'line {}, column {}: {!r} is not a number.'.format(line_number, column, cell))
            if not math.isfinite(value):
                raise InputFormatError(
                    'line {}, column {}: {!r} is not finite.'.format(line_number, column, cell))
            values.append(value)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise InputFormatError(
                'line {}, column {}: expected {} columns, got {}.'.format(
                    line_number, min(len(values), width) + 1, width, len(values)))
        rows.append(values)
    if not rows:
        raise InputFormatError('line 1, column 1: the file contains no data.')
    return np.array(rows, dtype=float)


def _channels(table, mode):
    """Split a ``samples x columns`` table into ``channels x samples`` data."""

    if mode == REAL:
        return table.T
    if table.shape[1] % 2 != 0:
        raise InputFormatError(
            'line 1, column {}: complex input needs (re, im) column pairs.'.format(table.shape[1]))
    return (table[:, 0::2] + 1j * table[:, 1::2]).T


def _is_sign_only(table):
    return bool(np.all((table == 1.0) | (table == -1.0)))


def _pcc_from_signs(data, mode):
    if mode == REAL:
        return estimator.pcc_matrix_real([signs.pack(row) for row in data.astype(int)])
    return estimator.pcc_matrix_complex([
        signs.pack_complex(row.real.astype(int), row.imag.astype(int)) for row in data
    ])


def _matrix_csv(matrix):
    lines = []
    for row in matrix.entries.tolist():
        if matrix.mode == REAL:
            cells = [repr(v.real) for v in row]
        else:
            cells = [repr(x) for v in row for x in (v.real, v.imag)]
        lines.append(','.join(cells))
    return '\n'.join(lines)


@click.group(cls=PccGroup)
@click.option('-c', '--config', 'config_file', type=click.Path(exists=True, dir_okay=False),
              help='Python configuration file.')
@click.option('--log-level', type=click.Choice(['debug', 'info', 'warning', 'error']),
              default='warning', show_default=True, help='Logging level (logs go to standard error).')
@click.pass_context
def pcc(ctx, config_file, log_level):
    """Polarity coincidence correlation (PCC) covariance toolkit."""

    logging.basicConfig(level=log_level.upper(), stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    with _exit_on_error('loading the configuration'):
        ctx.obj = load_config(config_file)


@pcc.command()
@click.argument('input_path', metavar='INPUT', type=click.Path(dir_okay=False))
@click.option('--complex', 'is_complex', is_flag=True,
              help='Treat consecutive column pairs as (re, im) of one complex channel.')
@click.option('--baseline', is_flag=True, help='Also emit the classical sample correlation matrix.')
@click.option('--center-median', is_flag=True, help='Subtract the median of each channel first.')
@click.option('--fail-on-npsd', is_flag=True, help='Exit with code 2 if the estimate is not PSD.')
@click.option('-t', '--tolerance', type=float, help='PSD tolerance.')
@click.option('-f', '--format', 'output_format', type=click.Choice(['json', 'csv']), default='json',
              show_default=True)
@click.option('-o', '--output', type=click.Path(dir_okay=False), help='Write to a file.')
@click.pass_obj
def estimate(config, input_path, is_complex, baseline, center_median, fail_on_npsd,
             tolerance, output_format, output):
    """Estimate the PCC covariance matrix of the samples in INPUT.

    INPUT is a CSV file with one row per sample and one column per
    channel (a pair of columns per channel with --complex). Columns
    holding only +1 and -1 are taken as signs directly.
    """

    mode = _mode(is_complex)
    tolerance = config['TOLERANCE'] if tolerance is None else tolerance
    with _exit_on_error('estimating the PCC matrix'):
        table = read_csv(input_path)
        data = _channels(table, mode)
        if _is_sign_only(table):
            _LOGGER.info('Sign-only input detected.')
            if center_median:
                _LOGGER.warning('Ignoring --center-median, the input already holds signs.')
            matrix = _pcc_from_signs(data, mode)
        else:
            matrix = estimator.estimate(data, mode, center='median' if center_median else None)
        report = psd.check_psd(matrix, tolerance)
        if output_format == 'csv':
            text = _matrix_csv(matrix)
        else:
            result = {
                'mode': mode,
                'n_samples': int(table.shape[0]),
                'matrix': schemas.CorrMatrixSchema().dump(matrix),
                'psd': schemas.PsdReportSchema().dump(report),
            }
            if baseline:
                result['baseline'] = schemas.CorrMatrixSchema().dump(estimator.sample_corr_matrix(data))
            text = schemas.dumps(result)
        _emit(text, output)

    if fail_on_npsd and not report.is_psd:
        sys.exit(EXIT_NOT_PSD)


@pcc.command('check-psd')
@click.argument('input_path', metavar='INPUT', type=click.Path(dir_okay=False))
@click.option('--complex', 'is_complex', is_flag=True,
              help='Treat consecutive column pairs as (re, im) of one complex entry.')
@click.option('-t', '--tolerance', type=float, help='PSD tolerance.')
@click.option('-f', '--format', 'output_format', type=click.Choice(['json', 'csv']), default='json',
              show_default=True)
@click.pass_obj
def check_psd(config, input_path, is_complex, tolerance, output_format):
    """Check whether the correlation matrix in INPUT is PSD.

    INPUT is a CSV file holding a square matrix with unit diagonal.
    """

    mode = _mode(is_complex)
    tolerance = config['TOLERANCE'] if tolerance is None else tolerance
    with _exit_on_error('checking the matrix'):
        table = read_csv(input_path)
        array = table if mode == REAL else _channels(table, mode).T
        matrix = estimator.CorrMatrix.from_array(array, mode)
        report = psd.check_psd(matrix, tolerance)
        if output_format == 'csv':
            text = ','.join(repr(v) for v in report.eigenvalues)
        else:
            text = schemas.dumps({
                'matrix': schemas.CorrMatrixSchema().dump(matrix),
                'psd': schemas.PsdReportSchema().dump(report),
            })
        click.echo(text)


@pcc.command('enumerate')
@click.argument('p', type=click.IntRange(min=2))
@click.argument('n', type=click.IntRange(min=1))
@click.option('--complex', 'is_complex', is_flag=True, help='Enumerate quadrant signs.')
@click.option('--symmetry-reduce/--no-symmetry-reduce', default=None,
              help='Fix channel 0 (default: on for real, off for complex).')
@click.option('-t', '--tolerance', type=float, help='PSD tolerance.')
@click.option('--max-configs', type=click.IntRange(min=1), help='Refuse to enumerate more configurations.')
@click.option('--max-witnesses', type=click.IntRange(min=0), help='How many witnesses to store.')
@click.option('--all-witnesses', is_flag=True, help='Store every violating configuration.')
@click.option('-w', '--workers', type=click.IntRange(min=1), help='The number of worker threads.')
@click.pass_obj
def enumerate_cmd(config, p, n, is_complex, symmetry_reduce, tolerance, max_configs,
                  max_witnesses, all_witnesses, workers):
    """Check every sign configuration of P channels and N samples.

    The output does not depend on the number of workers.
    """

    mode = _mode(is_complex)
    if symmetry_reduce is None:
        symmetry_reduce = mode == REAL
    if all_witnesses:
        max_witnesses = None
    elif max_witnesses is None:
        max_witnesses = config['MAX_WITNESSES']
    kwargs = dict(
        max_configs=config['MAX_CONFIGS'] if max_configs is None else max_configs,
        max_witnesses=max_witnesses,
        workers=config['WORKERS'] if workers is None else workers,
        block_size=config['BLOCK_SIZE'],
    )
    tolerance = config['TOLERANCE'] if tolerance is None else tolerance
    with _exit_on_error('enumerating configurations'):
        if mode == REAL:
            summary = enumeration.enumerate_real(p, n, tolerance, symmetry_reduce, **kwargs)
        else:
            summary = enumeration.enumerate_complex(p, n, tolerance, symmetry_reduce, **kwargs)
        click.echo(schemas.dumps(schemas.EnumerationSummarySchema().dump(summary)))


@pcc.command()
@click.argument('p', type=int)
@click.option('--complex', 'is_complex', is_flag=True, help='Build a complex counterexample.')
@click.option('-t', '--tolerance', type=float, help='PSD tolerance.')
@click.pass_obj
def counterexample(config, p, is_complex, tolerance):
    """Print sign sequences of P channels whose PCC matrix is not PSD.

    P must be at least 4 for real and at least 3 for complex signals.
    """

    mode = _mode(is_complex)
    tolerance = config['TOLERANCE'] if tolerance is None else tolerance
    with _exit_on_error('building the counterexample'):
        sequences, matrix, report = enumeration.counterexample(p, mode, tolerance)
        click.echo(schemas.dumps({
            'mode': mode,
            'sequences': [schemas.dump_sequence(s) for s in sequences],
            'matrix': schemas.CorrMatrixSchema().dump(matrix),
            'psd': schemas.PsdReportSchema().dump(report),
        }))


@pcc.command()
@click.argument('r')
@click.option('--complex', 'is_complex', is_flag=True, help='Check the complex arcsine law.')
@click.option('-n', '--samples', 'n', type=click.IntRange(min=1), help='The number of sample pairs.')
@click.option('-s', '--seed', type=click.IntRange(min=0), help='Random seed (default: PCC_SEED or 0).')
@click.option('--tol', type=float, help='Tolerance for the sign moment error.')
@click.option('--df', type=click.FloatRange(min=0.0, min_open=True),
              help='Use Student-t samples with DF degrees of freedom.')
@click.pass_obj
def validate(config, r, is_complex, n, seed, tol, df):
    """Check the arcsine law at correlation R by Monte Carlo.

    Exits with code 0 iff the check passes.
    """

    mode = _mode(is_complex)
    n = config['MC_SAMPLES'] if n is None else n
    seed = config['SEED'] if seed is None else seed
    if tol is None:
        key = 'MC_TOLERANCE_COMPLEX' if mode == COMPLEX else 'MC_TOLERANCE_REAL'
        tol = config[key] * math.sqrt(config['MC_SAMPLES'] / n)
    with _exit_on_error('running the Monte Carlo check'):
        try:
            target = complex(r.replace(' ', '')) if mode == COMPLEX else float(r)
        except ValueError:
            raise InputFormatError('{!r} is not a valid correlation.'.format(r))
        if mode == REAL:
            report = sampling.mc_arcsine_real(target, n, seed, tol=tol, df=df)
        else:
            report = sampling.mc_arcsine_complex(target, n, seed, tol=tol, df=df)
        click.echo(schemas.dumps(schemas.McReportSchema().dump(report)))

    if not report.passed:
        sys.exit(EXIT_ERROR)


@pcc.command()
@click.argument('output', type=click.Path(dir_okay=False))
@click.option('--corr', required=True,
              help='Real mode: comma-separated upper triangle of the correlation matrix, row by'
              ' row. Complex mode: the complex correlation of two channels.')
@click.option('--complex', 'is_complex', is_flag=True, help='Generate a complex channel pair.')
@click.option('-n', '--samples', 'n', type=click.IntRange(min=1), default=10 ** 5, show_default=True)
@click.option('-s', '--seed', type=click.IntRange(min=0), help='Random seed (default: PCC_SEED or 0).')
@click.option('--df', type=click.FloatRange(min=0.0, min_open=True),
              help='Use Student-t samples with DF degrees of freedom.')
@click.pass_obj
def generate(config, output, corr, is_complex, n, seed, df):
    """Write synthetic Gaussian samples to the CSV file OUTPUT."""

    seed = config['SEED'] if seed is None else seed
    with _exit_on_error('generating samples'):
        if is_complex:
            try:
                r = complex(corr.replace(' ', ''))
            except ValueError:
                raise InputFormatError('{!r} is not a valid complex correlation.'.format(corr))
            x, y = sampling.sample_circular_complex(r, n, seed, df=df)
            table = np.column_stack([x.real, x.imag, y.real, y.imag])
        else:
            try:
                upper = [float(v) for v in corr.split(',')]
            except ValueError:
                raise InputFormatError('{!r} is not a list of numbers.'.format(corr))
            p = int(round((1 + math.sqrt(1 + 8 * len(upper))) / 2))
            if p * (p - 1) // 2 != len(upper):
                raise InputFormatError('{} values do not form an upper triangle.'.format(len(upper)))
            matrix = np.eye(p)
            matrix[np.triu_indices(p, 1)] = upper
            matrix = np.triu(matrix) + np.triu(matrix, 1).T
            table = sampling.sample_multivariate_gaussian(matrix, n, seed, df=df).T
        with open(output, 'w') as f:
            for row in table.tolist():
                f.write(','.join(repr(v) for v in row) + '\n')
        _LOGGER.info('Wrote %i samples to %s.', n, output)


@pcc.command()
@click.option('-n', '--samples', 'n', type=click.IntRange(min=1), default=2 ** 20, show_default=True)
@click.option('-r', '--repeat', type=click.IntRange(min=1), default=5, show_default=True)
@click.option('-s', '--seed', type=click.IntRange(min=0), help='Random seed (default: PCC_SEED or 0).')
@click.pass_obj
def benchmark(config, n, repeat, seed):
    """Compare the popcount kernel with a naive loop."""

    report = signs.benchmark(n, repeat, config['SEED'] if seed is None else seed)
    click.echo(schemas.dumps(schemas.BenchmarkSchema().dump(report)))


def main(argv=None):
    pcc.main(args=argv, prog_name='pcc')
