"""
Degree by degree normal forms of maps with nilpotent linear part.

At degree k the current slice g_k is split as conn_n(phi_k) + fbar_k with
fbar_k in the chosen style, the map is conjugated by id + phi_k and the loop
moves on to k + 1. The transformation phi_k is taken from im(conn_m).
"""
import functools
import logging
import warnings
from typing import Dict, List

import attr

from .exact_core import ExactMatrix, solve
from .map_io import map_to_dict
from .nilpotent_algebra import NilpotentSpec, build_sl2_triple, jordan_matrix
from .polynomial_maps import (ConstantTermError, VectorPoly, compose_truncated, format_poly,
                              invert_near_identity)
from .sl2_action import kernel_basis, lift_triple, mult_kernel_basis
from .utils import CheckReport, DimensionMismatchError, DiscrepancyWarning, format_rational

logger = logging.getLogger(__name__)

DEFAULT_DEGREE = 4
DEFAULT_STYLE = 'ker-conn-m'
STYLES = ('ker-conn-m', 'ker-mult-m')

# Number of versal parameters as printed in the literature, by sorted blocks.
PUBLISHED_VERSAL_COUNTS = {(2, ): 2, (3, ): 3, (2, 2): 8, (2, 3): 10}


class StyleError(ValueError):
    """The requested style is not a complement of im(conn_n) at some degree."""
    def __init__(self, msg: str, degree: int = None):
        super().__init__(msg)
        self.degree = degree


@attr.s(auto_attribs=True, frozen=True)
class LedgerEntry:
    degree: int
    removed: int
    "Dimension of im(conn_n), the part which can be transformed away"
    kept: int
    "Dimension of the style space"


@attr.s(auto_attribs=True)
class SliceSplit:
    """Result of splitting one homogeneous slice."""
    degree: int
    transformation: VectorPoly
    "phi_k in im(conn_m)"
    removed: VectorPoly
    "conn_n(phi_k)"
    kept: VectorPoly
    "fbar_k in the style space"


def _check_style(style: str):
    if style not in STYLES:
        raise ValueError("unknown style %r, choose from %s" % (style, ', '.join(STYLES)))


@functools.lru_cache(maxsize=64)
def _slice_operators(spec: NilpotentSpec, k: int, style: str):
    lt = lift_triple(spec, k)
    size = lt.size
    if style == 'ker-conn-m':
        K = kernel_basis(spec, k).matrix()
    else:
        basis = mult_kernel_basis(spec, k)
        K = ExactMatrix.from_columns([e.to_vector(k) for e in basis], size)
    C_n, C_m = lt.conn_n.matrix, lt.conn_m.matrix
    return C_n, C_m, C_n @ C_m, K


def check_direct_sums(spec: NilpotentSpec, k: int, style: str = DEFAULT_STYLE) -> CheckReport:
    """
    Rank tests for the splitting at degree k.

    The slice must be the direct sum of im(conn_n) and the style space, and
    conn_n must be injective on im(conn_m).
    """
    _check_style(style)
    C_n, C_m, C_nm, K = _slice_operators(spec, k, style)
    size = C_n.rows
    r_n, dim_k = C_n.rank(), K.cols
    rep = CheckReport('direct sums (%s, %s, d=%d)' % (spec.label(), style, k))
    r_both = C_n.hstack(K).rank() if dim_k else r_n
    rep.add('im conn_n and style space independent', r_both == r_n + dim_k,
            'rank %d, expected %d' % (r_both, r_n + dim_k))
    rep.add('im conn_n + style space = slice', r_n + dim_k == size,
            '%d + %d vs %d' % (r_n, dim_k, size))
    r_m, r_nm = C_m.rank(), C_nm.rank()
    rep.add('ker conn_n and im conn_m independent', r_nm == r_m, '%d vs %d' % (r_nm, r_m))
    return rep


def split_slice(g_k: VectorPoly, spec: NilpotentSpec, k: int,
                style: str = DEFAULT_STYLE) -> SliceSplit:
    """
    Splits a homogeneous slice of degree k into conn_n(phi_k) + fbar_k.

    Parameters
    ----------
    g_k : VectorPoly
        Homogeneous of degree k, or zero.
    spec : NilpotentSpec
    k : int
        Degree, at least 1.
    style : {'ker-conn-m', 'ker-mult-m'}
        Space the kept part fbar_k lives in.

    Returns
    -------
    SliceSplit

    Raises
    ------
    StyleError
        If the style space is not a complement of im(conn_n) at this degree.
    """
    _check_style(style)
    if not g_k.is_homogeneous(k):
        raise ValueError("slice is not homogeneous of degree %d" % k)
    rep = check_direct_sums(spec, k, style)
    if not rep:
        raise StyleError("style %s fails at degree %d: %s" % (style, k, rep.counterexample),
                         degree=k)
    C_n, C_m, C_nm, K = _slice_operators(spec, k, style)
    size = C_n.rows
    x = solve(C_nm.hstack(K), g_k.to_vector(k))
    y, c = x[:size], x[size:]
    n = spec.n
    phi = VectorPoly.from_vector(n, k, C_m.apply(y))
    kept = VectorPoly.from_vector(n, k, K.apply(c)) if K.cols else VectorPoly.zero(n)
    removed = VectorPoly.from_vector(n, k, C_n.apply(phi.to_vector(k)))
    return SliceSplit(k, phi, removed, kept)


@attr.s(auto_attribs=True)
class NormalFormResult:
    """Outcome of `normalize`."""
    spec: NilpotentSpec
    original: VectorPoly
    "Input map, truncated at degree"
    normal_form: VectorPoly
    generator: VectorPoly
    "Near-identity G with normal_form = G^-1 o original o G up to degree"
    degree: int
    style: str
    ledger: List[LedgerEntry] = attr.Factory(list)

    def check_conjugation(self) -> CheckReport:
        D = self.degree
        rep = CheckReport('conjugation consistency (%s, D=%d)' % (self.spec.label(), D))
        G_inv = invert_near_identity(self.generator, D)
        conj = compose_truncated(G_inv, compose_truncated(self.original, self.generator, D), D)
        diff = conj - self.normal_form
        rep.add('G^-1 o f o G = normal form', diff.is_zero(),
                '' if diff.is_zero() else 'difference ' + format_poly(diff))
        return rep

    def render(self) -> str:
        lines = ['normal form of %s up to degree %d, style %s' %
                 (self.spec.label(), self.degree, self.style)]
        lines.append('  degree  removed  kept')
        for e in self.ledger:
            lines.append('  %6d  %7d  %4d' % (e.degree, e.removed, e.kept))
        lines.append('normal form: ' + format_poly(self.normal_form))
        lines.append('generator:   ' + format_poly(self.generator))
        return '\n'.join(lines)

    def to_dict(self) -> dict:
        gen = self.generator.nonlinear()
        return map_to_dict(
            self.spec, self.normal_form,
            degree=self.degree, style=self.style,
            ledger=[attr.asdict(e) for e in self.ledger],
            generator=[{'coeff': format_rational(c), 'exponents': list(m), 'component': i + 1}
                       for m, i, c in gen.terms()])


def normalize(f: VectorPoly, spec: NilpotentSpec, D: int = DEFAULT_DEGREE,
              style: str = DEFAULT_STYLE) -> NormalFormResult:
    """
    Normal form of f up to degree D.

    Parameters
    ----------
    f : VectorPoly
        Map with f(0) = 0 and linear part jordan_matrix(spec).
    spec : NilpotentSpec
        Nilpotency index at least 2.
    D : int
        Truncation degree, at least 2.
    style : {'ker-conn-m', 'ker-mult-m'}
        'ker-mult-m' keeps terms in P_k (x) ker m, which is a complement
        only for some specs, a single Jordan block among them.

    Returns
    -------
    NormalFormResult

    Raises
    ------
    StyleError
        If the style fails the complement test, the degree is attached.
    """
    _check_style(style)
    if D < 2:
        raise ValueError("truncation degree must be at least 2, got %d" % D)
    if f.n != spec.n:
        raise DimensionMismatchError("map of dimension %d for spec %s" % (f.n, spec.label()))
    if f.has_constant():
        raise ConstantTermError("the map must vanish at the origin")
    build_sl2_triple(spec)
    if f.linear_part() != jordan_matrix(spec):
        raise ValueError("linear part of the map does not match the spec %s" % spec.label())

    f = f.truncate(D)
    g = f
    G = VectorPoly.identity(spec.n)
    ledger = []
    for k in range(2, D + 1):
        split = split_slice(g.slice(k), spec, k, style)
        C_n, _, _, K = _slice_operators(spec, k, style)
        ledger.append(LedgerEntry(k, C_n.rank(), K.cols))
        logger.debug('degree %d: removed %s, kept %s', k, format_poly(split.removed),
                     format_poly(split.kept))
        if split.transformation.is_zero():
            continue
        phi = VectorPoly.identity(spec.n) + split.transformation
        phi_inv = invert_near_identity(phi, D)
        g = compose_truncated(phi, compose_truncated(g, phi_inv, D), D)
        G = compose_truncated(G, phi_inv, D)
    return NormalFormResult(spec, f, g, G, D, style, ledger)


def check_style_membership(f: VectorPoly, spec: NilpotentSpec, D: int = None) -> CheckReport:
    """
    Checks that every nonlinear slice of f up to degree D lies in ker(conn_m).
    """
    rep = CheckReport('style membership (%s)' % spec.label())
    for d in f.nonlinear().degrees():
        if D is not None and d > D:
            break
        v = lift_triple(spec, d).conn_m.matrix.apply(f.slice(d).to_vector(d))
        ok = not any(v)
        detail = '' if ok else 'residual ' + format_poly(VectorPoly.from_vector(spec.n, d, v))
        rep.add('degree %d' % d, ok, detail)
    return rep


@attr.s(auto_attribs=True)
class VersalDeformation:
    """
    Linear part n + sum of a_i B_i, one parameter per basis element B_i of
    ker(conn_m) on linear maps.
    """
    spec: NilpotentSpec
    parameters: List[str]
    basis: List[ExactMatrix]
    weights: List[int]

    @property
    def entries(self) -> List[List[Dict[str, object]]]:
        """Matrix entries as {parameter: coefficient}, '1' holds the entries of n."""
        N = jordan_matrix(self.spec)
        n = self.spec.n
        rows = [[{} for _ in range(n)] for _ in range(n)]
        for (i, j), v in N.to_dok().items():
            rows[i][j]['1'] = v
        for name, B in zip(self.parameters, self.basis):
            for (i, j), v in B.to_dok().items():
                rows[i][j][name] = v
        return rows

    def to_dict(self) -> dict:
        return {'blocks': list(self.spec.block_sizes),
                'parameters': self.parameters,
                'weights': self.weights,
                'matrix': [[{k: format_rational(v) for k, v in e.items()} for e in row]
                           for row in self.entries]}


def _render_entry(entry: Dict[str, object]) -> str:
    parts = []
    for name, c in entry.items():
        c_str = format_rational(c)
        if name == '1':
            parts.append(c_str)
        elif c_str == '1':
            parts.append(name)
        elif c_str == '-1':
            parts.append('-' + name)
        else:
            parts.append('%s*%s' % (c_str, name))
    if not parts:
        return '0'
    return ' + '.join(parts).replace('+ -', '- ')


def render_versal(vd: VersalDeformation) -> str:
    cells = [[_render_entry(e) for e in row] for row in vd.entries]
    width = max(len(c) for row in cells for c in row)
    lines = ['versal deformation of %s, %d parameters' % (vd.spec.label(), len(vd.parameters))]
    for row in cells:
        lines.append('[ ' + '  '.join(c.rjust(width) for c in row) + ' ]')
    return '\n'.join(lines)


def versal_deformation(spec: NilpotentSpec) -> VersalDeformation:
    """
    The linear versal deformation of jordan_matrix(spec).

    Parameters are named a1, a2, ... in the order of the canonical kernel
    basis of degree one. A `DiscrepancyWarning` is issued when the number
    of parameters differs from the count printed in the literature.
    """
    kb = kernel_basis(spec, 1)
    names = ['a%d' % (i + 1) for i in range(len(kb))]
    basis = [e.linear_part() for e in kb.elements()]
    published = PUBLISHED_VERSAL_COUNTS.get(tuple(sorted(spec.block_sizes)))
    if published is not None and published != len(kb):
        warnings.warn('%s: %d versal parameters computed, %d printed in the literature' %
                      (spec.label(), len(kb), published), DiscrepancyWarning)
    return VersalDeformation(spec, names, basis, kb.weights)
