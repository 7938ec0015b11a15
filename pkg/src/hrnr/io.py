"""JSON file formats and the complex-point syntax used on the command line.

Matrix files look like ``{"n": 2, "entries": [[[re, im], ...], ...]}``.
:func:`dumps_matrix` produces the canonical form (compact separators, floats
written with ``repr``), so ``dumps_matrix(read_matrix(path))`` reproduces a
canonical file byte for byte.
"""

import json
import math
import re
from numbers import Real

import numpy

from .errors import InputError, MalformedMatrixError, NonFiniteMatrixError, NonSquareMatrixError

__all__ = ['parse_matrix', 'read_matrix', 'dumps_matrix', 'write_matrix',
           'dumps_document', 'write_text', 'parse_point', 'format_point']

_NUM = r'(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?'
_RE_IM = re.compile(rf'(?P<re>[+-]?{_NUM})(?:(?P<sign>[+-])(?P<im>{_NUM})?i)?')
_IM_ONLY = re.compile(rf'(?P<im>[+-]?(?:{_NUM})?)i')


def _number(v, where):
    # bool is an int subclass; reject it explicitly
    if isinstance(v, bool) or not isinstance(v, Real):
        raise MalformedMatrixError(f'{where}: expected a number, got {v!r}')
    try:
        return float(v)
    except OverflowError:
        return math.inf


def parse_matrix(doc):
    """Validate a decoded matrix document and return a complex array.

    Raises
    ------
    MalformedMatrixError
        Missing keys, wrong types, entries that are not ``[re, im]`` pairs.
    NonSquareMatrixError
        Row count or row lengths differ from ``n``.
    NonFiniteMatrixError
        NaN or infinite components.
    """
    if not isinstance(doc, dict) or 'n' not in doc or 'entries' not in doc:
        raise MalformedMatrixError('matrix document needs keys "n" and "entries"')
    n, rows = doc['n'], doc['entries']
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MalformedMatrixError(f'"n" must be a positive integer, got {n!r}')
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MalformedMatrixError('"entries" must be a list of rows')
    if len(rows) != n or any(len(r) != n for r in rows):
        shape = (len(rows), sorted(set(len(r) for r in rows)))
        raise NonSquareMatrixError(f'expected {n}x{n} entries, got rows/lengths {shape}')
    A = numpy.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            if not isinstance(e, list) or len(e) != 2:
                raise MalformedMatrixError(f'entry ({i}, {j}) must be a [re, im] pair')
            x, y = _number(e[0], f'entry ({i}, {j})'), _number(e[1], f'entry ({i}, {j})')
            if not (math.isfinite(x) and math.isfinite(y)):
                raise NonFiniteMatrixError(f'entry ({i}, {j}) is not finite')
            A[i, j] = complex(x, y)
    return A


def read_matrix(path):
    """Read and validate a matrix file (see :func:`parse_matrix`)."""
    try:
        with open(path, encoding='utf-8') as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f'cannot read {path}: {exc}') from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedMatrixError(f'{path}: invalid JSON ({exc})') from exc
    return parse_matrix(doc)


def dumps_matrix(A):
    """Canonical matrix file text, newline-terminated."""
    A = numpy.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NonSquareMatrixError(f'expected a square matrix, got shape {A.shape}')
    if not numpy.all(numpy.isfinite(A)):
        raise NonFiniteMatrixError('matrix has non-finite entries')
    doc = {'n': A.shape[0],
           'entries': [[[float(z.real), float(z.imag)] for z in row] for row in A]}
    return json.dumps(doc, separators=(',', ':')) + '\n'


def write_matrix(path, A):
    write_text(path, dumps_matrix(A))


def dumps_document(doc):
    """Deterministic pretty JSON used for reports, regions and polynomials."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + '\n'


def write_text(path, text):
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f'cannot write {path}: {exc}') from exc


def parse_point(text):
    """Parse ``"x+yi"`` style complex numbers.

    Accepted: ``3``, ``-2.5``, ``i``, ``-i``, ``0.5i``, ``1+2i``, ``1-i``,
    ``-1e-3+4.5i``.  Anything else, including ``2i+1``, ``1+-2i``, ``1+2``
    and Python's ``j`` suffix, is rejected rather than guessed at.
    """
    s = text.strip()
    m = _RE_IM.fullmatch(s)
    if m:
        x = float(m['re'])
        if m['sign'] is None:
            return complex(x, 0.0)
        y = float(m['im']) if m['im'] else 1.0
        return complex(x, y if m['sign'] == '+' else -y)
    m = _IM_ONLY.fullmatch(s)
    if m:
        body = m['im']
        if body in ('', '+', '-'):
            return complex(0.0, -1.0 if body == '-' else 1.0)
        return complex(0.0, float(body))
    raise InputError(f'cannot parse {text!r} as a complex number of the form x+yi')


def format_point(z):
    return [float(complex(z).real), float(complex(z).imag)]
