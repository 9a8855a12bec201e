'''
Command-line interface for totientshift.

Usage:
    totientshift kappa --d 2
    totientshift table --from 2 --to 51 --format csv
    totientshift admissible --d 7 --method both
    totientshift witness --d 2 --l 1 --count 3 --out witnesses.json
    totientshift verify --file witnesses.json
    totientshift scan --d 2 --n-limit 100

Exit codes: 0 success, 1 verification or admissibility negative, 2 invalid
input, 3 inconclusive, 4 search or memory budget exhausted.
'''
import logging
log = logging.getLogger(__name__)

import functools
import sys
import time

import click

from .admissibility import (Method, PolynomialFamily, build_family,
                            check_admissible, scan_simultaneous_primes)
from .config import load_config, set_config
from .exceptions import (InvalidArgumentError, ResourceLimitError,
                         VerificationError)
from .kappa import compare_published, kappa, kappa_table, monotonicity_breaks
from .output import OutputEnvelope, get_writer, load_records
from . import __version__
from .witness import PairStrategy, Witness, stream_witnesses, verify_witness


EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 3
EXIT_BUDGET = 4

KAPPA_COLUMNS = ['d', 'kappa', 'k1', 'k2', 'a1', 'a2', 'g', 's', 'pair_h', 'trivial_bound']


def handle_errors(fn):
    '''
    Translate library exceptions into the documented exit codes
    '''
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InvalidArgumentError as e:
            raise click.UsageError(str(e))
        except VerificationError as e:
            for failure in e.failures:
                click.echo(f'Verification failed: {failure}', err=True)
            sys.exit(EXIT_NEGATIVE)
        except ResourceLimitError as e:
            click.echo(f'Budget exhausted: {e}', err=True)
            sys.exit(EXIT_BUDGET)
    return wrapper


def output_options(fn):
    fn = click.option('--timing', is_flag=True,
                      help='Record elapsed time in the envelope')(fn)
    fn = click.option('--grouped', is_flag=True,
                      help='Group digits with thousands separators (table format)')(fn)
    fn = click.option('--out', type=click.Path(dir_okay=False), default=None,
                      help='Write output to FILE instead of stdout')(fn)
    fn = click.option('--format', 'fmt', type=click.Choice(['json', 'csv', 'table']),
                      default='json', show_default=True)(fn)
    return fn


def emit(command, parameters, rows, fmt='json', out=None, grouped=False,
         timing=False, started=None, columns=None):
    elapsed_ms = 0
    if timing and started is not None:
        elapsed_ms = int(round((time.perf_counter() - started) * 1e3))
    envelope = OutputEnvelope(command=command, parameters=parameters, rows=rows,
                              version=__version__, elapsed_ms=elapsed_ms)
    writer = get_writer(fmt, columns=columns, grouped=grouped)
    text = writer.write(envelope, out)
    if out is None:
        click.echo(text, nl=False)


def _family_size(ctx, family_size):
    return ctx.obj.family_size if family_size is None else family_size


def _jobs(ctx, jobs):
    return ctx.obj.jobs if jobs is None else jobs


@click.group()
@click.version_option(version=__version__, prog_name='totientshift')
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='YAML file with settings')
@click.option('-v', '--verbose', count=True, help='Increase log verbosity')
@click.pass_context
def cli(ctx, config_path, verbose):
    '''
    Shift bounds and verified witnesses for phi(dn) = phi(d(n + lh)).
    '''
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s:%(name)s:%(message)s')
    try:
        config = load_config(config_path)
    except InvalidArgumentError as e:
        raise click.UsageError(str(e))
    set_config(config)
    ctx.obj = config


@cli.command('kappa')
@click.option('--d', 'd', type=click.IntRange(min=1), required=True)
@click.option('--family-size', type=click.IntRange(min=2), default=None)
@output_options
@click.pass_context
@handle_errors
def cmd_kappa(ctx, d, family_size, fmt, out, grouped, timing):
    '''
    Evaluate kappa_d and the pair attaining it.
    '''
    started = time.perf_counter()
    family_size = _family_size(ctx, family_size)
    row = kappa(d, family_size)
    emit('kappa', {'d': d, 'family_size': family_size}, [row.as_record()],
         fmt, out, grouped, timing, started, KAPPA_COLUMNS)


@cli.command('table')
@click.option('--from', 'd_from', type=click.IntRange(min=1), required=True)
@click.option('--to', 'd_to', type=click.IntRange(min=1), required=True)
@click.option('--family-size', type=click.IntRange(min=2), default=None)
@click.option('--jobs', type=click.IntRange(min=1), default=None,
              help='Worker processes (runtime only)')
@click.option('--check-published', is_flag=True,
              help='Compare with the published values and exit 1 on mismatch')
@output_options
@click.pass_context
@handle_errors
def cmd_table(ctx, d_from, d_to, family_size, jobs, check_published, fmt, out,
              grouped, timing):
    '''
    Evaluate kappa_d for every d in a range.
    '''
    started = time.perf_counter()
    family_size = _family_size(ctx, family_size)
    rows = kappa_table(d_from, d_to, family_size, jobs=_jobs(ctx, jobs))
    breaks = monotonicity_breaks(rows)
    if breaks:
        log.info('kappa_d decreases at d = %s', ', '.join(str(d) for d in breaks))
    emit('table', {'from': d_from, 'to': d_to, 'family_size': family_size},
         [row.as_record() for row in rows], fmt, out, grouped, timing, started,
         KAPPA_COLUMNS)

    if check_published:
        mismatches = compare_published(rows)
        for d, computed, published in mismatches:
            log.warning('d=%d: computed %d, published %d', d, computed, published)
            click.echo(f'Discrepancy at d={d}: computed {computed}, published {published}',
                       err=True)
        if mismatches:
            sys.exit(EXIT_NEGATIVE)


@cli.command('admissible')
@click.option('--d', 'd', type=click.IntRange(min=1), default=None)
@click.option('--coeffs', default=None, help='Custom family as "a,b:a,b:..."')
@click.option('--family-size', type=click.IntRange(min=2), default=None)
@click.option('--method', type=click.Choice([m.value for m in Method]),
              default=Method.BOTH.value, show_default=True)
@output_options
@click.pass_context
@handle_errors
def cmd_admissible(ctx, d, coeffs, family_size, method, fmt, out, grouped, timing):
    '''
    Check a polynomial family for admissibility.
    '''
    started = time.perf_counter()
    if (d is None) == (coeffs is None):
        raise click.UsageError('Specify exactly one of --d and --coeffs')
    if coeffs is not None:
        fam = PolynomialFamily.from_coeffs(coeffs)
        parameters = {'coeffs': coeffs, 'method': method}
    else:
        family_size = _family_size(ctx, family_size)
        fam = build_family(d, family_size)
        parameters = {'d': d, 'family_size': family_size, 'method': method}

    report = check_admissible(fam, method)
    record = {'family': str(fam), 'size': len(fam), **report.as_record()}
    emit('admissible', parameters, [record], fmt, out, grouped, timing, started)

    if report.inconclusive and report.method == Method.COPRIMALITY:
        sys.exit(EXIT_INCONCLUSIVE)
    if not report.admissible:
        sys.exit(EXIT_NEGATIVE)


@cli.command('witness')
@click.option('--d', 'd', type=click.IntRange(min=1), required=True)
@click.option('--l', 'l', type=click.IntRange(min=1), required=True)
@click.option('--k1', type=click.IntRange(min=0), default=None)
@click.option('--k2', type=click.IntRange(min=0), default=None)
@click.option('--strategy', type=click.Choice(['argmax', 'scan-best']), default=None)
@click.option('--count', type=click.IntRange(min=1), default=1, show_default=True)
@click.option('--r-start', type=click.IntRange(min=0), default=None,
              help='Only use r greater than this value')
@click.option('--family-size', type=click.IntRange(min=2), default=None)
@click.option('--budget', type=click.IntRange(min=1), default=None,
              help='Maximum number of r candidates examined')
@click.option('--jobs', type=click.IntRange(min=1), default=None)
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@click.option('--timing', is_flag=True)
@click.pass_context
@handle_errors
def cmd_witness(ctx, d, l, k1, k2, strategy, count, r_start, family_size,
                budget, jobs, out, timing):
    '''
    Build and verify witnesses of phi(d) phi(n) = phi(dn) = phi(d(n + lh)).
    '''
    started = time.perf_counter()
    if (k1 is None) != (k2 is None):
        raise click.UsageError('--k1 and --k2 must be given together')
    if k1 is not None:
        if strategy is not None:
            raise click.UsageError('--strategy cannot be combined with --k1/--k2')
        strategy = PairStrategy.FIXED
    else:
        strategy = PairStrategy(strategy or 'argmax')

    family_size = _family_size(ctx, family_size)
    witnesses = stream_witnesses(d, l, count, strategy, k1, k2,
                                 family_size=family_size, r_start=r_start,
                                 budget=budget or ctx.obj.r_budget,
                                 jobs=_jobs(ctx, jobs))
    parameters = {
        'd': d, 'l': l, 'k1': k1, 'k2': k2, 'strategy': strategy.value,
        'count': count, 'r_start': r_start, 'family_size': family_size,
    }
    emit('witness', parameters, [w.to_record() for w in witnesses], 'json', out,
         timing=timing, started=started)


@cli.command('verify')
@click.option('--file', 'path', type=click.Path(exists=True, dir_okay=False), required=True)
@output_options
@click.pass_context
@handle_errors
def cmd_verify(ctx, path, fmt, out, grouped, timing):
    '''
    Recompute every invariant of stored witnesses.
    '''
    started = time.perf_counter()
    rows = []
    for i, record in enumerate(load_records(path)):
        witness = Witness.from_record(record)
        try:
            verify_witness(witness)
            failures = []
        except VerificationError as e:
            failures = e.failures
        for failure in failures:
            click.echo(f'Witness {i}: {failure}', err=True)
        rows.append({'index': i, 'd': witness.d, 'l': witness.l, 'n': witness.n,
                     'h': witness.h, 'verified': not failures,
                     'failures': failures})
    emit('verify', {'file': str(path)}, rows, fmt, out, grouped, timing, started)
    if not all(row['verified'] for row in rows):
        sys.exit(EXIT_NEGATIVE)


@cli.command('scan')
@click.option('--d', 'd', type=click.IntRange(min=1), required=True)
@click.option('--family-size', type=click.IntRange(min=2), default=None)
@click.option('--n-limit', type=click.IntRange(min=1), required=True)
@click.option('--min-hits', type=click.IntRange(min=2), default=2, show_default=True)
@click.option('--jobs', type=click.IntRange(min=1), default=None)
@output_options
@click.pass_context
@handle_errors
def cmd_scan(ctx, d, family_size, n_limit, min_hits, jobs, fmt, out, grouped, timing):
    '''
    List n where several members of the family are simultaneously prime.
    '''
    started = time.perf_counter()
    family_size = _family_size(ctx, family_size)
    fam = build_family(d, family_size)
    hits = scan_simultaneous_primes(fam, n_limit, min_hits, jobs=_jobs(ctx, jobs),
                                    chunk_size=ctx.obj.chunk_size)
    rows = [{'n': n, 'hits': len(indices), 'indices': indices,
             'primes': [fam.polys[i](n) for i in indices]} for n, indices in hits]
    parameters = {'d': d, 'family_size': family_size, 'n_limit': n_limit,
                  'min_hits': min_hits}
    emit('scan', parameters, rows, fmt, out, grouped, timing, started,
         ['n', 'hits', 'indices', 'primes'])


def main():
    cli(prog_name='totientshift')


if __name__ == '__main__':
    main()
