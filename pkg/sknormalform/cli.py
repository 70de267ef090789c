"""
Command line front end, ``sknormalform <command> ...``.

Exit codes: 0 success, 1 usage error, 2 bad input, 3 a mathematical check
failed.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from .genfun import (DEFAULT_ORDER, closed_form_check, closed_form_kernel_gf, conjecture_check,
                     cushman_sanders_check, empirical_gf, subs_cs_identity_check,
                     subs_kernel_gf_closed_form)
from .map_io import MapFormatError, load_conjugator, load_map
from .nilpotent_algebra import (BracketCheckError, DegenerateTripleError, NilpotentSpec,
                                SingularConjugatorError, build_sl2_triple, check_bracket_cases,
                                check_kernel_equality, check_m_reconstruction, check_nmn,
                                check_projections, verify_word_relations)
from .normalizer import (DEFAULT_DEGREE, DEFAULT_STYLE, STYLES, StyleError,
                         check_direct_sums, check_style_membership, normalize, render_versal,
                         versal_deformation)
from .polynomial_maps import ConstantTermError, format_poly
from .sl2_action import (check_operator_properties, check_starred_kernel, kernel_basis,
                         lift_triple, starred_triple)
from .transvectants import describe_irreducible_nf, render_families
from .utils import CheckReport

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_CHECK = 3


class InputError(Exception):
    """Input which parses on the command line but is invalid."""


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '%s: error: %s\n' % (self.prog, message))


def _spec(args) -> NilpotentSpec:
    conj = load_conjugator(args.conjugator) if getattr(args, 'conjugator', None) else None
    return NilpotentSpec.from_string(args.blocks, conj)


def _emit(args, text: str, doc=None):
    if getattr(args, 'json', False) and doc is not None:
        text = json.dumps(doc, indent=2)
    sys.stdout.write(text + '\n')


def _finish(args, reports: List[CheckReport], text: str = None, doc=None) -> int:
    if text is None:
        text = '\n'.join(r.render() for r in reports)
    if doc is None:
        doc = [r.to_dict() for r in reports]
    _emit(args, text, doc)
    return 0 if all(reports) else EXIT_CHECK


def cmd_triple(args) -> int:
    spec = _spec(args)
    tr = build_sl2_triple(spec)
    rep = tr.check()
    text = '\n'.join(['n_bar', str(tr.n_bar), 'h_bar', str(tr.h_bar), 'm_bar', str(tr.m_bar),
                      rep.render()])
    doc = {'blocks': list(spec.block_sizes), 'n_bar': tr.n_bar.to_strings(),
           'h_bar': tr.h_bar.to_strings(), 'm_bar': tr.m_bar.to_strings(),
           'check': rep.to_dict()}
    return _finish(args, [rep], text, doc)


def cmd_verify(args) -> int:
    spec = _spec(args)
    p = spec.p
    reports = [verify_word_relations(spec, p + 1), check_nmn(spec), check_projections(spec),
               check_kernel_equality(spec), build_sl2_triple(spec).check(),
               check_bracket_cases(p)]
    if 2 <= p <= 9:
        reports.append(check_m_reconstruction(p))
    for d in range(1, args.max_degree + 1):
        reports.append(starred_triple(spec, d).check())
        reports.append(check_starred_kernel(spec, d))
        reports.append(lift_triple(spec, d).check())
        reports.append(check_operator_properties(spec, d))
        reports.append(check_direct_sums(spec, d))
    return _finish(args, reports)


def cmd_normalize(args) -> int:
    spec, f = load_map(args.map)
    res = normalize(f, spec, args.degree, args.style)
    checks = [res.check_conjugation()]
    if args.style == 'ker-conn-m':
        checks.append(check_style_membership(res.normal_form, spec, args.degree))
    text = '\n'.join([res.render()] + [r.render() for r in checks])
    doc = res.to_dict()
    doc['checks'] = [r.to_dict() for r in checks]
    return _finish(args, checks, text, doc)


def cmd_kernel(args) -> int:
    spec = _spec(args)
    kb = kernel_basis(spec, args.degree)
    lines = ['kernel of conn_m for %s at degree %d: dimension %d' %
             (spec.label(), args.degree, len(kb))]
    for wv in kb.vectors:
        lines.append('  weight %2d  %s' % (wv.weight, format_poly(wv.element)))
    lines.append('sum of weight + 1: %d, slice dimension %d' % (kb.cs_sum, kb.expected_sum))
    doc = {'blocks': list(spec.block_sizes), 'degree': args.degree,
           'basis': [{'weight': wv.weight, 'element': format_poly(wv.element)}
                     for wv in kb.vectors]}
    _emit(args, '\n'.join(lines), doc)
    return 0


def cmd_cstest(args) -> int:
    return _finish(args, [cushman_sanders_check(_spec(args), args.max_degree)])


def cmd_genfun(args) -> int:
    spec = _spec(args)
    T = args.max_degree
    lines = ['kernel generating function of %s' % spec.label(), empirical_gf(spec, T).render()]
    reports = []
    if args.closed_form:
        if len(spec.block_sizes) != 2:
            raise InputError("closed forms are known for two blocks only")
        k1, k2 = sorted(spec.block_sizes)
        lines.append('closed form at u = 1: ' + closed_form_kernel_gf(k1, k2).render())
        lines.append('starred closed form: ' + subs_kernel_gf_closed_form(k1, k2).render())
        reports += [closed_form_check(spec, T), subs_cs_identity_check(k1, k2)]
        lines += [r.render() for r in reports]
    # the conjecture is reported, a mismatch does not fail the command
    lines.append(conjecture_check(spec, T).render())
    return _finish(args, reports, '\n'.join(lines))


def cmd_describe(args) -> int:
    if args.n < 1:
        raise InputError("dimension must be positive")
    _emit(args, render_families(describe_irreducible_nf(args.n)))
    return 0


def cmd_versal(args) -> int:
    vd = versal_deformation(_spec(args))
    _emit(args, render_versal(vd), vd.to_dict())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(prog='sknormalform',
                            description='Exact sl2-normal forms of nilpotent maps.')
    parser.add_argument('--verbose', action='store_true', help='debug logging to stderr')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

    def with_blocks(p, conjugator=True):
        p.add_argument('--blocks', required=True, help='Jordan block sizes, e.g. 2,3')
        if conjugator:
            p.add_argument('--conjugator', metavar='FILE',
                           help='JSON file with the rows of P')

    p = sub.add_parser('triple', help='matrix sl2-triple')
    with_blocks(p)
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_triple)

    p = sub.add_parser('verify', help='relation and operator checks')
    with_blocks(p)
    p.add_argument('--max-degree', type=int, default=2)
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('normalize', help='normal form of a map file')
    p.add_argument('--map', required=True, metavar='FILE')
    p.add_argument('--degree', type=int, default=DEFAULT_DEGREE)
    p.add_argument('--style', choices=STYLES, default=DEFAULT_STYLE)
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser('kernel', help='canonical kernel basis with weights')
    with_blocks(p)
    p.add_argument('--degree', type=int, required=True)
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser('cstest', help='Cushman-Sanders table')
    with_blocks(p)
    p.add_argument('--max-degree', type=int, default=DEFAULT_ORDER)
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_cstest)

    p = sub.add_parser('genfun', help='kernel generating functions')
    with_blocks(p, conjugator=False)
    p.add_argument('--max-degree', type=int, default=DEFAULT_ORDER)
    p.add_argument('--closed-form', action='store_true')
    p.set_defaults(func=cmd_genfun)

    p = sub.add_parser('describe', help='normal form families of one Jordan block')
    p.add_argument('--n', type=int, required=True)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser('versal', help='versal deformation of the linear part')
    with_blocks(p)
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_versal)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)
    for name in ('degree', 'max_degree'):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            parser.error('--%s must be non-negative' % name.replace('_', '-'))
    try:
        return args.func(args)
    except (InputError, MapFormatError, ConstantTermError, SingularConjugatorError,
            DegenerateTripleError, OSError) as e:
        sys.stderr.write('sknormalform: %s\n' % e)
        return EXIT_INPUT
    except (StyleError, BracketCheckError) as e:
        sys.stderr.write('sknormalform: check failed: %s\n' % e)
        return EXIT_CHECK
    except ValueError as e:
        sys.stderr.write('sknormalform: %s\n' % e)
        return EXIT_INPUT
