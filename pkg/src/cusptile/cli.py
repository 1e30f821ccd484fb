"""Command line driver: parse a manifold file, certify its shapes, develop
the fundamental polyhedron, and run the requested computation.

Exit codes: 0 success, 1 generic failure, 2 parse error, 3 certification
failure, 4 precision exhausted, 5 unsupported object.

All numeric output is deterministic for a fixed input and precision.  With
--max-precision above --precision, an 'insufficient precision' failure
restarts the whole pipeline at doubled precision until the cap is reached.
"""

import argparse
import json
import sys

from mpmath.libmp import to_str

from .areas import (
    all_fillings_hyperbolic_check, cusp_shapes, greedy_areas, short_slopes,
    six_theorem_area, slope_length, unbiased_areas,
)
from .certify import CertificationError, krawczyk_certify, \
    log_gluing_residual
from .develop import (
    develop_cusp_cross_section, develop_polyhedron, standard_form_scale,
)
from .distances import compute_distance, cusp_area_matrix
from .hyperboloid import HPoint, MVector
from .interval import Interval, NEG_INF, PrecisionError
from .tiling import GeometricObject, UnsupportedObjectError, tile_stream
from .trace import trace_heuristic, trace_verify
from .triangulation import TriangulationError, parse_manifold_file

__all__ = ['main']

EXIT_PARSE = 2
EXIT_CERTIFICATION = 3
EXIT_PRECISION = 4
EXIT_UNSUPPORTED = 5


class _CliFailure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _format_bound(x, prec):
    """Deterministic decimal rendering of an ExtendedBound."""
    if x is NEG_INF:
        return '-inf'
    dps = max(5, int(prec * 0.30103) - 2)
    return '[%s, %s]' % (to_str(x.lo, dps), to_str(x.hi, dps))


def _serialize_bound(x):
    if x is NEG_INF:
        return ['-inf', '-inf']
    return list(x.serialize())


class _Pipeline:
    """Everything derived from the manifold file at one precision."""

    def __init__(self, path, precision):
        self.precision = precision
        try:
            with open(path) as fh:
                text = fh.read()
            self.data = parse_manifold_file(text)
        except (OSError, TriangulationError, ValueError) as exc:
            raise _CliFailure(EXIT_PARSE, 'parse error: %s' % exc)
        self.tri = self.data.triangulation
        self._shapes = None
        self._P = None

    @property
    def shapes(self):
        if self._shapes is None:
            try:
                self._shapes = list(krawczyk_certify(
                    self.tri, self.data.shapes, self.precision))
            except CertificationError as exc:
                raise _CliFailure(EXIT_CERTIFICATION,
                                  'certification failed: %s' % exc)
        return self._shapes

    @property
    def polyhedron(self):
        if self._P is None:
            sections = [develop_cusp_cross_section(self.tri, self.shapes, c)
                        for c in range(self.tri.num_cusps)]
            scales = standard_form_scale(self.tri, self.shapes, sections)
            self._P = develop_polyhedron(
                self.tri, self.shapes,
                [x.scaled(s) for x, s in zip(sections, scales)])
        return self._P


def _parse_point(spec, prec):
    parts = [Interval(p.strip(), prec=prec) for p in spec.split(',')]
    if len(parts) != 3:
        raise _CliFailure(EXIT_PARSE,
                          'point spec needs three comma-separated numbers')
    t = sum((c.sqr() for c in parts),
            start=Interval.exact(1, prec)).sqrt()
    return HPoint(MVector([t] + parts))


def _generators(P):
    """Deterministically ordered non-tree face pairings."""
    return [P.pairings[t][f] for t in range(P.tri.n) for f in range(4)
            if (t, f) not in P.tree]


def _parse_word(spec, P):
    gens = _generators(P)
    m = None
    try:
        letters = [int(p) for p in spec.split(',')]
    except ValueError:
        raise _CliFailure(EXIT_PARSE, 'word spec needs signed integers')
    for letter in letters:
        if letter == 0 or abs(letter) > len(gens):
            raise _CliFailure(
                EXIT_PARSE, 'word letters must be in 1..%d (negative for '
                'inverses)' % len(gens))
        g = gens[abs(letter) - 1]
        if letter < 0:
            g = g.so13_inverse()
        m = g if m is None else m @ g
    if m is None:
        raise _CliFailure(EXIT_PARSE, 'empty word')
    return m


def _cusp_vertex(P, cusp):
    for t in range(P.tri.n):
        for v in range(4):
            if P.tri.cusp_of_vertex[t][v] == cusp:
                return t, v
    raise _CliFailure(EXIT_PARSE, 'no such cusp: %d' % cusp)


def _make_object(P, args, prec):
    kind = args.object
    if kind == 'point':
        if args.point:
            return GeometricObject.point(_parse_point(args.point, prec))
        return GeometricObject.point(P.incenters[0])
    if kind == 'cusp':
        t, v = _cusp_vertex(P, args.cusp)
        return GeometricObject.horoball_at_vertex(P, t, v)
    if kind == 'geodesic-word':
        if not args.word:
            raise _CliFailure(EXIT_PARSE, '--word is required for '
                              'geodesic-word objects')
        return GeometricObject.line_from_holonomy(_parse_word(args.word, P))
    raise _CliFailure(EXIT_PARSE, 'unknown object kind %r' % kind)


def _parse_object_spec(P, spec, prec):
    head, _, rest = spec.partition(':')
    if head == 'point':
        x = _parse_point(rest, prec) if rest else P.incenters[0]
        return GeometricObject.point(x)
    if head == 'cusp':
        t, v = _cusp_vertex(P, int(rest or 0))
        return GeometricObject.horoball_at_vertex(P, t, v)
    if head == 'word':
        return GeometricObject.line_from_holonomy(_parse_word(rest, P))
    raise _CliFailure(EXIT_PARSE, 'object spec must start with point:, '
                      'cusp: or word:')


# -- subcommands -----------------------------------------------------------


def _cmd_certify(pipe, args, out):
    shapes = pipe.shapes
    residual = log_gluing_residual(pipe.tri, shapes)
    out.emit(
        text=['shape %d: %s + i*%s' % (i, _format_bound(z.re, pipe.precision),
                                       _format_bound(z.im, pipe.precision))
              for i, z in enumerate(shapes)] +
             ['max residual width: %.3e' %
              max(r.max_width_float() for r in residual)],
        data={'shapes': [list(z.serialize()) for z in shapes],
              'residuals': [list(r.serialize()) for r in residual]})


def _cmd_dump_polyhedron(pipe, args, out):
    blob = pipe.polyhedron.serialize()
    out.emit(
        text=['tetrahedra: %d' % blob['num_tetrahedra'],
              'spanning tree faces: %s' % sorted(blob['spanning_tree']),
              'inradii: %s' % ' '.join(_format_bound(r, pipe.precision)
                                       for r in pipe.polyhedron.inradii)],
        data=blob)


def _cmd_trace(pipe, args, out):
    P = pipe.polyhedron
    x = _parse_point(args.point, pipe.precision)
    tiles = trace_verify(P, x, trace_heuristic(P, x))
    out.emit(
        text=['tile: t=%d' % t for _, t in tiles],
        data={'tiles': [{'tet': t,
                         'matrix': [[list(m[i, j].serialize())
                                     for j in range(4)] for i in range(4)]}
                        for m, t in tiles]})


def _cmd_tile(pipe, args, out):
    P = pipe.polyhedron
    K = _make_object(P, args, pipe.precision)
    lines, events = [], []
    for index, event in enumerate(tile_stream(P, K)):
        if index >= args.count:
            break
        r_txt = _format_bound(event.r, pipe.precision)
        entries = ' '.join(
            _format_bound(event.m[i, j], pipe.precision)
            for i in range(4) for j in range(4))
        lines.append('%d, %s, %s, %d' % (index, r_txt, entries, event.t))
        events.append({'index': index,
                       'r': _serialize_bound(event.r),
                       'matrix': [[list(event.m[i, j].serialize())
                                   for j in range(4)] for i in range(4)],
                       'tet': event.t})
    out.emit(text=lines, data={'events': events})


def _cmd_distance(pipe, args, out):
    P = pipe.polyhedron
    specs = args.objects
    if not 1 <= len(specs) <= 2:
        raise _CliFailure(EXIT_PARSE, '--objects takes one or two specs')
    K = _parse_object_spec(P, specs[0], pipe.precision)
    K_p = _parse_object_spec(P, specs[1], pipe.precision) \
        if len(specs) == 2 else None
    result = compute_distance(P, K, K_p, max_tiles=args.max_tiles)
    out.emit(
        text=['distance: %s' % _format_bound(result.value, pipe.precision),
              'status: %s' % result.status,
              'tiles: %d %d' % result.tiles_used],
        data={'distance': _serialize_bound(result.value),
              'status': result.status,
              'tiles': list(result.tiles_used)})


def _area_matrix(pipe, args):
    return cusp_area_matrix(pipe.polyhedron, max_tiles=args.max_tiles)


def _cmd_cusp_area_matrix(pipe, args, out):
    A = _area_matrix(pipe, args)
    out.emit(
        text=['  '.join(_format_bound(e, pipe.precision) for e in row)
              for row in A],
        data={'matrix': [[_serialize_bound(e) for e in row] for row in A]})


def _emit_areas(pipe, out, a):
    out.emit(
        text=['cusp %d area: %s' % (i, _format_bound(x, pipe.precision))
              for i, x in enumerate(a)],
        data={'areas': [_serialize_bound(x) for x in a]})


def _cmd_unbiased_areas(pipe, args, out):
    _emit_areas(pipe, out, unbiased_areas(_area_matrix(pipe, args)))


def _cmd_greedy_areas(pipe, args, out):
    A = _area_matrix(pipe, args)
    order = None
    if args.order:
        order = tuple(int(p) for p in args.order.split(','))
    _emit_areas(pipe, out, greedy_areas(A, order))


def _chosen_areas(pipe, args, A):
    if args.areas:
        parts = [Interval(p.strip(), prec=pipe.precision)
                 for p in args.areas.split(',')]
        if len(parts) != len(A):
            raise _CliFailure(EXIT_PARSE, '--areas needs one value per cusp')
        return parts
    return unbiased_areas(A)


def _cmd_slopes(pipe, args, out):
    A = _area_matrix(pipe, args)
    areas = _chosen_areas(pipe, args, A)
    shapes = cusp_shapes(pipe.polyhedron)
    lines, data = [], []
    for cusp, (area, s) in enumerate(zip(areas, shapes)):
        slopes = short_slopes(area, s)
        lines.append('cusp %d: %s' % (
            cusp, ' '.join('(%d,%d)' % sl for sl in slopes) or '(none)'))
        data.append({'cusp': cusp,
                     'slopes': [list(sl) for sl in slopes],
                     'lengths': [_serialize_bound(slope_length(area, s, sl))
                                 for sl in slopes]})
    out.emit(text=lines, data={'short_slopes': data})


def _cmd_check_6_theorem(pipe, args, out):
    A = _area_matrix(pipe, args)
    shapes = cusp_shapes(pipe.polyhedron)
    if args.fillings:
        slopes = []
        for part in args.fillings.split(';'):
            p, q = (int(x) for x in part.split(','))
            slopes.append((p, q))
        if len(slopes) != len(A):
            raise _CliFailure(EXIT_PARSE,
                              '--fillings needs one slope per cusp '
                              '(0,0 for unfilled)')
        a = [six_theorem_area(s, sl) for s, sl in zip(shapes, slopes)]
        verdict = all(a[i] * a[j] < A[i][j]
                      for i in range(len(A)) for j in range(len(A)))
        what = 'fillings satisfy the 6-theorem conditions'
    else:
        verdict = all_fillings_hyperbolic_check(A, shapes)
        what = 'all Dehn fillings are hyperbolic'
    out.emit(text=['%s: %s' % (what, 'yes' if verdict else 'not certified')],
             data={'certified': verdict})


_COMMANDS = {
    'certify': _cmd_certify,
    'dump-polyhedron': _cmd_dump_polyhedron,
    'trace': _cmd_trace,
    'tile': _cmd_tile,
    'distance': _cmd_distance,
    'cusp-area-matrix': _cmd_cusp_area_matrix,
    'unbiased-areas': _cmd_unbiased_areas,
    'greedy-areas': _cmd_greedy_areas,
    'slopes': _cmd_slopes,
    'check-6-theorem': _cmd_check_6_theorem,
}


class _Output:
    def __init__(self, mode, stream):
        self.mode = mode
        self.stream = stream

    def emit(self, text, data):
        if self.mode == 'structured':
            json.dump(data, self.stream, indent=1, sort_keys=True)
            self.stream.write('\n')
        else:
            for line in text:
                self.stream.write(line + '\n')


def _build_parser():
    parser = argparse.ArgumentParser(
        prog='cusptile',
        description='verified computations for cusped hyperbolic '
                    '3-manifolds')
    parser.add_argument('--precision', type=int, default=212,
                        help='working precision in bits')
    parser.add_argument('--max-precision', type=int, default=None,
                        help='double the precision up to this cap when a '
                             'computation reports insufficient precision')
    parser.add_argument('--output', choices=('text', 'structured'),
                        default='text')
    sub = parser.add_subparsers(dest='command', required=True)

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument('manifold', help='manifold triangulation file')
        return p

    add('certify', help='certify the tetrahedron shapes')
    add('dump-polyhedron', help='print the developed fundamental polyhedron')
    p = add('trace', help='locate a point in the polyhedron')
    p.add_argument('--point', required=True,
                   help='spatial hyperboloid coordinates x1,x2,x3')
    p = add('tile', help='stream tiles about an object')
    p.add_argument('--object', choices=('point', 'geodesic-word', 'cusp'),
                   default='point')
    p.add_argument('--count', type=int, default=10)
    p.add_argument('--point', help='spatial coordinates for point objects')
    p.add_argument('--word', help='holonomy word, comma-separated signed '
                                  '1-based generator indices')
    p.add_argument('--cusp', type=int, default=0)
    p = add('distance', help='distance between objects in the manifold')
    p.add_argument('--objects', action='append', required=True,
                   metavar='SPEC',
                   help='point:[x1,x2,x3], cusp:N or word:LETTERS; repeat '
                        'for a second object (default: self-distance)')
    p.add_argument('--max-tiles', type=int, default=100000)
    for name in ('cusp-area-matrix', 'unbiased-areas', 'greedy-areas',
                 'slopes', 'check-6-theorem'):
        p = add(name)
        p.add_argument('--max-tiles', type=int, default=100000)
        if name == 'greedy-areas':
            p.add_argument('--order', help='comma-separated cusp order')
        if name == 'slopes':
            p.add_argument('--areas',
                           help='comma-separated chosen cusp areas '
                                '(default: unbiased)')
        if name == 'check-6-theorem':
            p.add_argument('--fillings',
                           help='semicolon-separated p,q per cusp '
                                '(0,0 = unfilled); default checks all '
                                'fillings at once')
    return parser


def main(argv=None, stdout=None):
    args = _build_parser().parse_args(argv)
    stream = stdout if stdout is not None else sys.stdout
    out = _Output(args.output, stream)
    precision = args.precision
    cap = args.max_precision or precision
    while True:
        try:
            pipe = _Pipeline(args.manifold, precision)
            _COMMANDS[args.command](pipe, args, out)
            return 0
        except _CliFailure as exc:
            print('cusptile: %s' % exc, file=sys.stderr)
            return exc.code
        except UnsupportedObjectError as exc:
            print('cusptile: unsupported object: %s' % exc, file=sys.stderr)
            return EXIT_UNSUPPORTED
        except PrecisionError as exc:
            if precision * 2 > cap:
                print('cusptile: precision exhausted at %d bits: %s'
                      % (precision, exc), file=sys.stderr)
                return EXIT_PRECISION
            precision *= 2
