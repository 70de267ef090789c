"""
Transvectants, Clebsch-Gordan coefficients and the chain bases they generate.

A transvectant couples a top weight polynomial w (for the substitution
action) with a top weight vector v (for the matrix action) into a top weight
vector of the lifted action.
"""
from typing import Dict, List, Sequence, Tuple, Union

import attr
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement

from .exact_core import ExactMatrix, solve
from .nilpotent_algebra import NilpotentSpec, build_sl2_triple, jordan_matrix
from .polynomial_maps import VectorPoly, poly_ring, scalar_to_vector, slice_dim, subs_scalar
from .sl2_action import WeightVector, kernel_basis, lift_triple, starred_triple, weight_of
from .utils import binom, format_rational, qbinom, qfactorial, to_scalar


def _as_poly(w, n: int) -> PolyElement:
    R = poly_ring(n)
    if isinstance(w, PolyElement):
        if w.ring != R:
            raise ValueError("polynomial of another ring")
        return w
    return R.one * to_scalar(w)


def _integral_weight(lam, what: str) -> int:
    if lam.denominator != 1:
        raise ValueError("%s has weight %s, which is not an integer"
                         % (what, format_rational(lam)))
    return int(lam.numerator)


def scalar_weight(w: PolyElement, spec: NilpotentSpec) -> int:
    """
    Weight of a top weight polynomial under the starred action.

    Raises
    ------
    ValueError
        If w is not homogeneous, not annihilated by star_m or no eigenvector
        of star_h.
    """
    degs = {sum(m) for m in w}
    if len(degs) != 1:
        raise ValueError("polynomial is zero or not homogeneous")
    d = degs.pop()
    st = starred_triple(spec, d)
    vec = scalar_to_vector(w, d)
    if any(st.star_m.matrix.apply(vec)):
        raise ValueError("%s is not a top weight vector of the substitution action" % w)
    hv = st.star_h.matrix.apply(vec)
    idx = next(i for i, c in enumerate(vec) if c)
    lam = hv[idx] / vec[idx]
    if hv != tuple(lam * c for c in vec):
        raise ValueError("%s is not a weight vector" % w)
    return _integral_weight(lam, str(w))


def vector_weight(v: Sequence, spec: NilpotentSpec) -> int:
    """Weight of a top weight vector of R^n under h_bar."""
    v = tuple(to_scalar(c) for c in v)
    if len(v) != spec.n or not any(v):
        raise ValueError("expected a nonzero vector of length %d" % spec.n)
    t = build_sl2_triple(spec)
    if any(t.m_bar.apply(v)):
        raise ValueError("vector is not annihilated by m_bar")
    hv = t.h_bar.apply(v)
    idx = next(i for i, c in enumerate(v) if c)
    lam = hv[idx] / v[idx]
    if hv != tuple(lam * c for c in v):
        raise ValueError("vector is not a weight vector")
    return _integral_weight(lam, 'vector %s' % (v, ))


def tensor(w: PolyElement, v: Sequence) -> VectorPoly:
    """The map x -> w(x) v."""
    n = len(v)
    return VectorPoly(n, tuple(w * to_scalar(c) for c in v))


def transvectant(w, v: Sequence, p_order: int, spec: NilpotentSpec) -> VectorPoly:
    """
    The p-th transvectant of w (x) v.

    sum_(i+j=p) binom(p, i) w^(j) / binom(wt_w, j) (x) v^(i) / binom(wt_v, i)

    with w^(j) = subs_n^j w / j! and v^(i) = n^i v / i!.

    Parameters
    ----------
    w : PolyElement or scalar
        Homogeneous polynomial of poly_ring(n), top weight for star_m.
        A scalar stands for a constant polynomial.
    v : sequence
        Vector of R^n with m_bar v = 0.
    p_order : int
        Between 0 and min(wt_w, wt_v).
    spec : NilpotentSpec

    Returns
    -------
    VectorPoly
        Lies in ker(conn_m) with weight wt_w + wt_v - 2 p_order.
    """
    w = _as_poly(w, spec.n)
    wt_w, wt_v = scalar_weight(w, spec), vector_weight(v, spec)
    if not 0 <= p_order <= min(wt_w, wt_v):
        raise ValueError("transvectant order %d outside 0..%d" % (p_order, min(wt_w, wt_v)))
    N = jordan_matrix(spec)
    w_chain = [w]
    v_chain = [tuple(to_scalar(c) for c in v)]
    for k in range(1, p_order + 1):
        w_chain.append(subs_scalar(N, w_chain[-1]) * QQ(1, k))
        v_chain.append(tuple(c * QQ(1, k) for c in N.apply(v_chain[-1])))
    out = VectorPoly.zero(spec.n)
    for i in range(p_order + 1):
        j = p_order - i
        c = qbinom(p_order, i) / (qbinom(wt_w, j) * qbinom(wt_v, i))
        out = out + tensor(w_chain[j], v_chain[i]).scale(c)
    return out


def cg_coefficient(m: int, n: int, p: int, i: int, j: int, k: int):
    """
    Clebsch-Gordan coefficient (3j-symbol) for V_m (x) V_n -> V_(m+n-2p).

    sum_(r+q=k) (-1)^r binom(p, i-q) binom(i, q) binom(j, r)
                / (binom(m, i-q) binom(n, j-r)),

    terms with a vanishing binomial dropped. The sign (-1)^r matches chains
    built with +subs_n, for k = 0 the coefficient is
    binom(p, i) / (binom(m, i) binom(n, j)).

    Raises
    ------
    ValueError
        If i + j != k + p.
    """
    if i + j != k + p:
        raise ValueError("i + j must equal k + p, got %d + %d != %d + %d" % (i, j, k, p))
    total = QQ(0)
    for q in range(k + 1):
        r = k - q
        num = binom(p, i - q) * binom(i, q) * binom(j, r)
        den = binom(m, i - q) * binom(n, j - r)
        if num and den:
            total += QQ((-1) ** r * num, den)
    return total


def inversion_coefficients(m: int, n: int, i: int, j: int) -> List[Tuple[int, int, object]]:
    """
    Expansion of w^(j) (x) v^(i), with wt_w = n and wt_v = m, in the chain
    elements of the transvectants.

    Returns
    -------
    list of (p, k, coefficient)
        w^(j) (x) v^(i) = sum coefficient * conn_n^k transvectant_p / k!.
    """
    out = []
    for p in range(min(m, n, i + j) + 1):
        k = i + j - p
        if k > m + n - 2 * p:
            continue
        factor = (qbinom(m, i) * qbinom(n, j) * qbinom(m, p) * qbinom(n, p)
                  / (qbinom(m + n - 2 * p, k) * qbinom(m + n - p + 1, p)))
        c = cg_coefficient(m, n, p, i, j, k) * factor
        if c:
            out.append((p, k, c))
    return out


def chain(element: Union[WeightVector, VectorPoly], spec: NilpotentSpec) -> List[VectorPoly]:
    """
    The descending chain element^(k) = conn_n^k element / k!, k = 0..weight,
    of a top weight vector.
    """
    if isinstance(element, WeightVector):
        vec, wt = element.element, element.weight
    else:
        vec, wt = element, weight_of(element, spec)
        if wt is None:
            raise ValueError("element is not a weight vector")
    d = vec.degree if not vec.is_zero() else 0
    lt = lift_triple(spec, d)
    out = [vec]
    for k in range(1, wt + 1):
        out.append(lt.conn_n.apply(out[-1]).scale(QQ(1, k)))
    return out


def express_in_chain_basis(element: VectorPoly, spec: NilpotentSpec,
                           generators=None) -> Dict[Tuple[int, int], object]:
    """
    Coordinates of a homogeneous element in the basis of all chains.

    Parameters
    ----------
    element : VectorPoly
        Homogeneous.
    spec : NilpotentSpec
    generators : list of WeightVector, optional
        Top weight vectors whose chains form a basis of the slice, the
        canonical kernel basis by default.

    Returns
    -------
    dict
        (generator index, k) -> coefficient of generator^(k), zero entries
        left out.
    """
    degs = element.degrees()
    if len(degs) > 1:
        raise ValueError("element is not homogeneous")
    if not degs:
        return {}
    d = degs[0]
    if generators is None:
        generators = kernel_basis(spec, d).vectors
    labels, columns = [], []
    for g, gen in enumerate(generators):
        for k, e in enumerate(chain(gen, spec)):
            labels.append((g, k))
            columns.append(e.to_vector(d))
    size = spec.n * slice_dim(spec.n, d)
    A = ExactMatrix.from_columns(columns, size)
    if len(columns) != size or A.rank() != size:
        raise ValueError("the chains of the generators are not a basis of the slice")
    x = solve(A, element.to_vector(d))
    return {lab: c for lab, c in zip(labels, x) if c}


def _shift(exps: Tuple[int, ...], j: int) -> Tuple[int, ...]:
    if j and any(exps[-j:]):
        raise ValueError("monomial shifted out of range")
    return (0,) * j + exps[:len(exps) - j]


def _irreducible_transvectant(n: int, w_exps: Tuple[int, ...], wt_w: int, p: int) -> VectorPoly:
    """Transvectant of a monomial w with lowest index 1 and e_n, single block."""
    terms = []
    for i in range(p + 1):
        j = p - i
        c = (qbinom(p, i) / (qfactorial(j) * qbinom(wt_w, j))
             / (qfactorial(i) * qbinom(n - 1, i)))
        terms.append((c, _shift(w_exps, j), n - 1 - i))
    return VectorPoly.from_terms(n, terms)


def project_ker_fast(element: VectorPoly, spec: NilpotentSpec) -> VectorPoly:
    """
    Projection onto ker(conn_m) for a single Jordan block, term by term.

    A monomial with lowest index I and highest index J in component K is
    (I-1)! (n-K)! w^(I-1) (x) v^(n-K), where w is the monomial shifted down
    to start at x_1 and v = e_n. Its projection is the k = 0 term of the
    Clebsch-Gordan inversion,

    binom(P, i) binom(wt_v, P) binom(wt_w, P) / binom(wt_v + wt_w - P + 1, P)

    times the transvectant of order P = i + j.
    """
    if not spec.is_irreducible or spec.has_conjugator:
        raise ValueError("fast projection needs a single Jordan block without conjugator")
    degs = element.degrees()
    if len(degs) > 1:
        raise ValueError("element is not homogeneous")
    n = spec.n
    out = VectorPoly.zero(n)
    for exps, comp, c in element.terms():
        nz = [idx for idx, e in enumerate(exps) if e]
        if nz:
            lo, hi = nz[0] + 1, nz[-1] + 1
            wt_w = n - (hi - lo + 1)
        else:
            lo, wt_w = 1, 0
        j = lo - 1
        w_exps = exps[j:] + (0,) * j
        i = n - 1 - comp
        wt_v = n - 1
        P = i + j
        if P > min(wt_w, wt_v):
            continue
        coeff = (qfactorial(j) * qfactorial(i) * qbinom(P, i) * qbinom(wt_v, P)
                 * qbinom(wt_w, P) / qbinom(wt_v + wt_w - P + 1, P))
        out = out + _irreducible_transvectant(n, w_exps, wt_w, P).scale(c * coeff)
    return out


@attr.s(auto_attribs=True, frozen=True)
class FamilyTerm:
    """
    One term x_a x_b F(x_lo, ..., x_hi) e_component of a normal form family.
    """
    component: int
    "1-based index of the unit vector"
    prefix: Tuple[int, ...]
    "1-based variable indices multiplying the arbitrary function"
    arguments: Tuple[int, int]
    "First and last variable the arbitrary function depends on"
    coefficient: object

    def monomial(self, n: int) -> Tuple[int, ...]:
        exps = [0] * n
        for v in self.prefix:
            exps[v - 1] += 1
        return tuple(exps)

    def render(self) -> str:
        lo, hi = self.arguments
        args = ','.join('x%d' % k for k in range(lo, hi + 1))
        body = '%s*F(%s)*e%d' % ('*'.join('x%d' % v for v in self.prefix), args, self.component)
        c = format_rational(self.coefficient)
        return body if c == '1' else c + '*' + body


@attr.s(auto_attribs=True)
class NormalFormFamily:
    """
    The terms generated by the transvectant of order p of |1, n-k+1| and e_n.
    """
    n: int
    k: int
    p: int
    terms: List[FamilyTerm]

    @property
    def weight(self) -> int:
        return self.k + self.n - 2 * self.p - 2

    def generator(self) -> VectorPoly:
        """The family with F = 1, the lowest degree member."""
        return VectorPoly.from_terms(
            self.n, [(t.coefficient, t.monomial(self.n), t.component - 1) for t in self.terms])


def describe_irreducible_nf(n: int) -> List[NormalFormFamily]:
    """
    The families of the normal form of a single Jordan block of size n, for
    k = 1..n and p = 0..k-1,

    sum_(i+j=p) binom(p, i) / (i! j! binom(n-1, i) binom(k-1, j))
        x_(j+1) x_(n-k+j+1) F(x_(j+1), ..., x_(n-k+j+1)) e_(n-i).
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    families = []
    for k in range(1, n + 1):
        for p in range(min(k - 1, n - 1) + 1):
            terms = []
            for i in range(p + 1):
                j = p - i
                lo, hi = j + 1, n - k + j + 1
                prefix = (lo,) if lo == hi else (lo, hi)
                c = (qbinom(p, i) / (qfactorial(i) * qfactorial(j)
                                     * qbinom(n - 1, i) * qbinom(k - 1, j)))
                terms.append(FamilyTerm(n - i, prefix, (lo, hi), c))
            families.append(NormalFormFamily(n, k, p, terms))
    return families


def render_family(family: NormalFormFamily) -> str:
    head = 'k=%d p=%d weight %d: ' % (family.k, family.p, family.weight)
    return head + ' + '.join(t.render() for t in family.terms)


def render_families(families: List[NormalFormFamily]) -> str:
    return '\n'.join(render_family(f) for f in families)

