"""Command line interface: ``hrnr <command> ...``.

Every command prints a JSON document on stdout.  Exit codes: 0 success or a
true verdict, 1 a false verdict, 2 invalid input or usage (4 and 5 for
non-square and non-finite matrix files), 3 numerical failure.
"""

import argparse
import os
import sys

from . import __version__
from .errors import HRNRError, InconsistentVerdictError, InputError
from .io import dumps_document, format_point, parse_point, read_matrix, write_text
from .kippenhahn import kippenhahn_poly, kippenhahn_poly_exact
from .linalg import commutator_norm
from .ranges import DEFAULT_GRID, boundary_curve_points, membership, rank_k_range
from .structure import (corollary2_check, normality_test, real_linear_factors,
                        theorem1_check, v_sets)
from .svg import PlotSpec, render_svg

__all__ = ['cli_dispatch', 'main', 'build_parser']


class _Parser(argparse.ArgumentParser):
    # usage errors become exceptions so cli_dispatch can return a code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f'{self.prog}: error: {message}')


class _UsageError(Exception):
    pass


def build_parser():
    p = _Parser(prog='hrnr', description='Higher-rank numerical ranges and Kippenhahn polynomials.')
    p.add_argument('--version', action='version', version=f'hrnr {__version__}')
    p.add_argument('--tol', type=float, default=None,
                   help='geometric tolerance (default 1e-6 * (1 + ||A||_F))')
    sub = p.add_subparsers(dest='command', required=True, parser_class=_Parser)

    def grid_opt(q):
        q.add_argument('--grid', type=int, default=DEFAULT_GRID, help='angle grid size N')

    q = sub.add_parser('kippenhahn', help='coefficients of det(x Re A + y Im A + z I)')
    q.add_argument('matrix')
    q.add_argument('--exact', action='store_true', help='cofactor expansion (n <= 8)')
    q.add_argument('--out')

    q = sub.add_parser('range', help='polygon for Lambda_k(A)')
    q.add_argument('matrix')
    q.add_argument('-k', type=int, required=True)
    grid_opt(q)
    q.add_argument('--out')

    q = sub.add_parser('member', help='is a point in Lambda_k(A)?')
    q.add_argument('matrix')
    q.add_argument('-k', type=int, required=True)
    q.add_argument('--point', required=True, help='complex number written x+yi')
    grid_opt(q)

    q = sub.add_parser('factors', help='real linear factors of p_A')
    q.add_argument('matrix')

    q = sub.add_parser('vsets', help='V-set partition of the linear-factor points')
    q.add_argument('matrix')
    grid_opt(q)

    q = sub.add_parser('normal', help='normality from the linear factors of p_A')
    q.add_argument('matrix')

    q = sub.add_parser('compare', help='evaluate the three equivalent conditions on a pair')
    q.add_argument('matrix')
    q.add_argument('other')
    grid_opt(q)
    q.add_argument('--report')

    q = sub.add_parser('equiv2', help='unitary equivalence for 2x2, normal or companion pairs')
    q.add_argument('matrix')
    q.add_argument('other')

    q = sub.add_parser('plot', help='SVG of nested Lambda_k regions')
    q.add_argument('matrix')
    q.add_argument('--ranks', required=True, help='comma separated, e.g. 1,2,3')
    q.add_argument('--curve', action='store_true', help='overlay the sampled boundary curve')
    q.add_argument('--no-corners', action='store_true')
    q.add_argument('--vsets', action='store_true', help='mark the linear-factor points')
    grid_opt(q)
    q.add_argument('--out', required=True)
    return p


def _emit(doc, out=None):
    text = dumps_document(doc)
    if out:
        write_text(out, text)
    sys.stdout.write(text)


def _threads():
    raw = os.environ.get('HRNR_THREADS')
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f'HRNR_THREADS must be an integer, got {raw!r}') from None


def _parse_ranks(text):
    try:
        ranks = [int(s) for s in text.split(',') if s.strip()]
    except ValueError:
        raise InputError(f'cannot parse ranks {text!r}') from None
    if not ranks:
        raise InputError('no ranks given')
    return ranks


def _run(args):
    cmd = args.command
    A = read_matrix(args.matrix)

    if cmd == 'kippenhahn':
        p = kippenhahn_poly_exact(A) if args.exact else kippenhahn_poly(A)
        _emit(p.to_json_dict(), args.out)
        return 0

    if cmd == 'range':
        R = rank_k_range(A, args.k, args.grid, args.tol)
        doc = R.to_json_dict()
        doc['corners'] = [format_point(z) for z in R.corners]
        doc['k'] = args.k
        doc['grid'] = args.grid
        _emit(doc, args.out)
        return 0

    if cmd == 'member':
        z = parse_point(args.point)
        verdict, margin = membership(A, args.k, z, args.grid, args.tol)
        _emit({'k': args.k, 'point': format_point(z), 'verdict': verdict, 'margin': margin})
        return 1 if verdict == 'outside' else 0

    if cmd == 'factors':
        fs = real_linear_factors(A)
        _emit({'factors': [{'a': f.a, 'b': f.b, 'multiplicity': f.multiplicity} for f in fs]})
        return 0

    if cmd == 'vsets':
        V = v_sets(A, args.grid, args.tol)
        _emit({'sets': {str(l): [format_point(z) for z in pts] for l, pts in V.sets.items()},
               'top': [format_point(z) for z in V.top]})
        return 0

    if cmd == 'normal':
        verdict = normality_test(A)
        _emit({'normal': verdict, 'commutator_norm': commutator_norm(A)})
        return 0 if verdict else 1

    if cmd == 'compare':
        B = read_matrix(args.other)
        threads = _threads()
        try:
            report = theorem1_check(A, B, args.grid, args.tol)
        except InconsistentVerdictError as exc:
            doc = exc.report.to_json_dict(__version__)
            doc['parameters']['threads'] = threads
            _emit(doc, args.report)
            raise
        doc = report.to_json_dict(__version__)
        doc['parameters']['threads'] = threads
        _emit(doc, args.report)
        return 0 if report.verdict else 1

    if cmd == 'equiv2':
        B = read_matrix(args.other)
        verdict = corollary2_check(A, B)
        _emit({'verdict': verdict})
        return 0 if verdict == 'unitarily_equivalent' else 1

    if cmd == 'plot':
        spec = PlotSpec(tuple(_parse_ranks(args.ranks)), args.grid, args.curve,
                        not args.no_corners, args.vsets, args.out)
        spec.check_size(A.shape[0])
        regions = [(k, rank_k_range(A, k, spec.grid, args.tol)) for k in spec.ranks]
        curve = boundary_curve_points(A, 1, spec.grid) if spec.curve else None
        markers = None
        if spec.vsets:
            markers = v_sets(A, spec.grid, args.tol).all_points()
        write_text(spec.output, render_svg(regions, curve, spec, markers))
        _emit({'output': spec.output,
               'regions': {str(k): R.classification for k, R in regions}})
        return 0

    raise InputError(f'unknown command {cmd!r}')


def cli_dispatch(argv=None):
    """Run one command; return its exit code instead of exiting."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)
    try:
        return _run(args)
    except HRNRError as exc:
        print(f'hrnr: {type(exc).__name__}: {exc}', file=sys.stderr)
        return exc.exit_code


def main():
    sys.exit(cli_dispatch())
