"""
Generating functions of kernel dimensions and the Cushman-Sanders test.

The t-power counts the polynomial degree d of the slice P_d (x) R^n, the
constant slice d = 0 included. The u-power is the exact weight of a kernel
basis element. Closed forms are sums of terms c u^a t^b / (1 - t)^e and are
only ever compared after expansion to a finite order.
"""
import logging
from typing import Dict, Iterable, List, Sequence, Tuple

import attr
from sympy.polys.domains import QQ

from .nilpotent_algebra import NilpotentSpec
from .sl2_action import kernel_basis, scalar_kernel_basis
from .utils import CheckReport, binom, format_rational, to_scalar

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 8


def _clean(coeffs: Dict[Tuple[int, int], object], order: int):
    return {k: v for k, v in coeffs.items() if v and k[0] <= order}


@attr.s(auto_attribs=True, frozen=True, eq=False)
class BiSeries:
    """
    Power series in (t, u), truncated above t^order. Polynomial in u.
    """
    order: int
    "Highest t-power kept"
    coeffs: Dict[Tuple[int, int], object] = attr.Factory(dict)
    "(t-power, u-power) -> QQ"

    def __attrs_post_init__(self):
        object.__setattr__(self, 'coeffs', _clean(self.coeffs, self.order))

    @classmethod
    def from_terms(cls, order: int, terms: Iterable[Tuple[object, int, int]]) -> 'BiSeries':
        """Builds a series from (coefficient, t-power, u-power) triples."""
        out = {}
        for c, b, a in terms:
            out[b, a] = out.get((b, a), QQ(0)) + to_scalar(c)
        return cls(order, out)

    def coefficient(self, t_power: int, u_power: int = 0):
        return self.coeffs.get((t_power, u_power), QQ(0))

    def t_coefficient(self, t_power: int) -> Dict[int, object]:
        """The polynomial in u at t^t_power, as {u-power: coefficient}."""
        return {a: c for (b, a), c in sorted(self.coeffs.items()) if b == t_power}

    def _common(self, other: 'BiSeries') -> int:
        if not isinstance(other, BiSeries):
            raise TypeError("expected a BiSeries, got %r" % type(other))
        return min(self.order, other.order)

    def __add__(self, other: 'BiSeries') -> 'BiSeries':
        order = self._common(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, QQ(0)) + v
        return BiSeries(order, out)

    def __neg__(self) -> 'BiSeries':
        return BiSeries(self.order, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: 'BiSeries') -> 'BiSeries':
        return self + (-other)

    def scale(self, c) -> 'BiSeries':
        c = to_scalar(c)
        return BiSeries(self.order, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other: 'BiSeries') -> 'BiSeries':
        order = self._common(other)
        out = {}
        for (b1, a1), c1 in self.coeffs.items():
            for (b2, a2), c2 in other.coeffs.items():
                if b1 + b2 <= order:
                    k = (b1 + b2, a1 + a2)
                    out[k] = out.get(k, QQ(0)) + c1 * c2
        return BiSeries(order, out)

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return _clean(self.coeffs, order) == _clean(other.coeffs, order)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def at_u_one(self) -> List:
        """Coefficients of t^0 ... t^order after setting u = 1."""
        out = [QQ(0)] * (self.order + 1)
        for (b, _), c in self.coeffs.items():
            out[b] += c
        return out

    def d_du_u(self) -> 'BiSeries':
        """d/du (u G), every u^a is multiplied by a + 1."""
        return BiSeries(self.order, {(b, a): c * (a + 1) for (b, a), c in self.coeffs.items()})

    def render(self) -> str:
        lines = []
        for b in range(self.order + 1):
            poly = self.t_coefficient(b)
            text = ' + '.join(_u_term(c, a) for a, c in poly.items()) or '0'
            lines.append('t^%d: %s' % (b, text.replace('+ -', '- ')))
        return '\n'.join(lines)


def _u_term(c, a: int) -> str:
    c_str = format_rational(c)
    if a == 0:
        return c_str
    u = 'u' if a == 1 else 'u^%d' % a
    if c_str == '1':
        return u
    if c_str == '-1':
        return '-' + u
    return c_str + u


def inverse_power_coefficient(e: int, s: int) -> int:
    """Coefficient of t^s in (1 - t)^(-e), for any integer e."""
    if s < 0:
        return 0
    if e > 0:
        return binom(s + e - 1, s)
    if e == 0:
        return 1 if s == 0 else 0
    return (-1)**s * binom(-e, s)


@attr.s(auto_attribs=True, frozen=True)
class ClosedFormGF:
    """Sum of terms c u^a t^b / (1 - t)^e, stored as (c, a, b, e)."""
    terms: Tuple[Tuple[object, int, int, int], ...] = attr.ib(
        converter=lambda ts: tuple((to_scalar(c), a, b, e) for c, a, b, e in ts))

    def __add__(self, other: 'ClosedFormGF') -> 'ClosedFormGF':
        return ClosedFormGF(self.terms + other.terms)

    def scale(self, c) -> 'ClosedFormGF':
        c = to_scalar(c)
        return ClosedFormGF([(c * t[0], ) + t[1:] for t in self.terms])

    def at_u_one(self) -> 'ClosedFormGF':
        return ClosedFormGF([(c, 0, b, e) for c, a, b, e in self.terms])

    def d_du_u(self) -> 'ClosedFormGF':
        return ClosedFormGF([(c * (a + 1), 0, b, e) for c, a, b, e in self.terms])

    def expand(self, order: int) -> BiSeries:
        """Exact expansion up to t^order."""
        out = {}
        for c, a, b, e in self.terms:
            for s in range(order - b + 1):
                k = inverse_power_coefficient(e, s)
                if k:
                    key = (b + s, a)
                    out[key] = out.get(key, QQ(0)) + c * k
        return BiSeries(order, out)

    def render(self) -> str:
        parts = []
        for c, a, b, e in self.terms:
            factors = []
            if a:
                factors.append(_u_term(QQ(1), a))
            if b:
                factors.append('t' if b == 1 else 't^%d' % b)
            c_str = format_rational(c)
            if not factors:
                text = c_str
            elif c_str in ('1', '-1'):
                text = c_str[:-1] + '*'.join(factors)
            else:
                text = c_str + '*' + '*'.join(factors)
            if e:
                text += '/(1-t)' if e == 1 else '/(1-t)^%d' % e
            parts.append(text)
        return (' + '.join(parts) or '0').replace('+ -', '- ')


def series_from_closed_form(cf: ClosedFormGF, order: int) -> BiSeries:
    return cf.expand(order)


def empirical_gf(spec: NilpotentSpec, order: int = DEFAULT_ORDER) -> BiSeries:
    """
    Generating function of ker(conn_m), counted from the canonical kernel
    bases on the slices of degree 0 ... order.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    terms = []
    for d in range(order + 1):
        kb = kernel_basis(spec, d)
        logger.debug('%s degree %d: weights %s', spec.label(), d, kb.weights)
        terms.extend((1, d, w) for w in kb.weights)
    return BiSeries.from_terms(order, terms)


def empirical_subs_kernel_gf(spec: NilpotentSpec, order: int = DEFAULT_ORDER) -> BiSeries:
    """Same as `empirical_gf` for the starred kernel on scalar polynomials."""
    if order < 0:
        raise ValueError("order must be non-negative")
    terms = []
    for d in range(order + 1):
        terms.extend((1, d, w) for _, w in scalar_kernel_basis(spec, d))
    return BiSeries.from_terms(order, terms)


def cushman_sanders_check(spec: NilpotentSpec, order: int = DEFAULT_ORDER) -> CheckReport:
    """
    Sum of weight + 1 over the kernel basis per degree against the slice
    dimension n * dim P_d.

    Parameters
    ----------
    spec : NilpotentSpec
    order : int
        Highest degree which is checked.

    Returns
    -------
    CheckReport
        One row per degree with kernel dimension, weights and both sums.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    rep = CheckReport('Cushman-Sanders (%s)' % spec.label())
    for d in range(order + 1):
        kb = kernel_basis(spec, d)
        weights = sorted(kb.weights)
        rep.add('d=%d' % d, kb.cs_sum == kb.expected_sum,
                'dim %d, weights %s, sum %d, expected %d' %
                (len(kb), weights, kb.cs_sum, kb.expected_sum))
    return rep


def _check_blocks(k1: int, k2: int):
    if k1 < 1 or k2 < 1:
        raise ValueError("block sizes must be positive")
    if k1 > k2:
        raise ValueError("blocks must be ordered, got k1 = %d > k2 = %d" % (k1, k2))


def closed_form_kernel_gf(k1: int, k2: int) -> ClosedFormGF:
    """
    Closed form of the ker(conn_m) generating function at u = 1 for two
    blocks k1 <= k2:  2 / (1-t)^(k1+k2) - sum_{i=1}^{k2-k1} t / (1-t)^i.
    """
    _check_blocks(k1, k2)
    terms = [(2, 0, 0, k1 + k2)]
    terms += [(-1, 0, 1, i) for i in range(1, k2 - k1 + 1)]
    return ClosedFormGF(terms)


def subs_kernel_gf_closed_form(k1: int, k2: int) -> ClosedFormGF:
    """
    Bivariate closed form of the starred kernel on scalar polynomials for
    two blocks k1 <= k2, constants included.

    At u = 1 it reduces to 1 + (1-t)^-(k1+k2) - (1-t)^-(k1+k2-2) and
    d/du (u G) at u = 1 is (1-t)^-(k1+k2).
    """
    _check_blocks(k1, k2)
    s = k1 + k2
    terms = [(1, 0, 0, 0)]
    for i in range(k1 - 1):
        terms.append((1, i, 2, s - 2 * i))
        terms.append((2, i, 2, s - 2 * i - 1))
    for i in range(k1 - 2):
        terms.append((1, i, 2, s - 2 * i - 2))
    # for k1 = 1 the range starts at -1 and the missing term is empty
    for i in range(max(k1 - 2, 0), k2 - 1):
        terms.append((1, i, 2, k2 - i))
    terms.append((1, k1 - 1, 1, k2 - k1 + 2))
    terms.append((1, k2 - 1, 1, 1))
    return ClosedFormGF(terms)


def conjecture_gf(blocks: Sequence[int]) -> ClosedFormGF:
    """
    b / (1-t)^n minus sum_{k=1}^{n_i - n_j} t / (1-t)^k over all pairs of
    blocks with n_j < n_i.
    """
    blocks = list(blocks)
    terms = [(len(blocks), 0, 0, sum(blocks))]
    for ni in blocks:
        for nj in blocks:
            if nj < ni:
                terms += [(-1, 0, 1, k) for k in range(1, ni - nj + 1)]
    return ClosedFormGF(terms)


def conjecture_check(spec: NilpotentSpec, order: int = DEFAULT_ORDER) -> CheckReport:
    """
    Compares the kernel dimensions with the conjectured closed form. A
    failing report is a finding about the conjecture.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    rep = CheckReport('conjectured kernel dimensions (%s)' % spec.label())
    predicted = conjecture_gf(spec.block_sizes).expand(order).at_u_one()
    found = empirical_gf(spec, order).at_u_one()
    for d in range(order + 1):
        rep.add('d=%d' % d, predicted[d] == found[d],
                'kernel %s, conjectured %s' % (format_rational(found[d]),
                                               format_rational(predicted[d])))
    return rep


def closed_form_check(spec: NilpotentSpec, order: int = DEFAULT_ORDER) -> CheckReport:
    """
    Two-block closed forms against enumeration: ker(conn_m) at u = 1 and the
    bivariate starred kernel.
    """
    if len(spec.block_sizes) != 2:
        raise ValueError("closed forms are known for two blocks only")
    k1, k2 = sorted(spec.block_sizes)
    rep = CheckReport('closed forms (%s)' % spec.label())
    found = empirical_gf(spec, order).at_u_one()
    closed = closed_form_kernel_gf(k1, k2).expand(order).at_u_one()
    for d in range(order + 1):
        rep.add('conn kernel d=%d' % d, found[d] == closed[d],
                '%s vs %s' % (format_rational(found[d]), format_rational(closed[d])))
    star = empirical_subs_kernel_gf(spec, order)
    star_closed = subs_kernel_gf_closed_form(k1, k2).expand(order)
    for d in range(order + 1):
        ok = star.t_coefficient(d) == star_closed.t_coefficient(d)
        rep.add('starred kernel d=%d' % d, ok)
    return rep


def subs_cs_identity_check(k1: int, k2: int, order: int = 12) -> CheckReport:
    """d/du (u G) at u = 1 of the starred closed form is (1-t)^-(k1+k2)."""
    rep = CheckReport('starred Cushman-Sanders identity (%d,%d)' % (k1, k2))
    lhs = subs_kernel_gf_closed_form(k1, k2).d_du_u().expand(order).at_u_one()
    rhs = ClosedFormGF([(1, 0, 0, k1 + k2)]).expand(order).at_u_one()
    for d in range(order + 1):
        rep.add('t^%d' % d, lhs[d] == rhs[d],
                '%s vs %s' % (format_rational(lhs[d]), format_rational(rhs[d])))
    return rep


def summation_lemma_check(m1: int, m2: int, order: int) -> CheckReport:
    """
    sum_{i=m1}^{m2} (1+i) t^i against its closed form with denominator
    (1-t)^2, coefficient by coefficient.
    """
    if not 0 <= m1 <= m2:
        raise ValueError("need 0 <= m1 <= m2")
    rep = CheckReport('summation identity (m1=%d, m2=%d)' % (m1, m2))
    lhs = BiSeries.from_terms(order, [(1 + i, i, 0) for i in range(m1, m2 + 1)])
    rhs = ClosedFormGF([(m1 + 1, 0, m1, 2), (-m1, 0, m1 + 1, 2),
                        (-(m2 + 2), 0, m2 + 1, 2), (m2 + 1, 0, m2 + 2, 2)]).expand(order)
    for d in range(order + 1):
        rep.add('t^%d' % d, lhs.coefficient(d) == rhs.coefficient(d))
    return rep
