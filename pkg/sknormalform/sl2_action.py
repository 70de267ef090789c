"""
The sl2-triples induced on homogeneous slices of polynomial maps: the starred
triple acting by substitution, the lifted triple (conn_n, cann_h, conn_m)
and the canonical kernel bases of conn_m with their weights.
"""
import functools
import logging
from typing import List, Optional, Sequence

import attr
import numpy as np

from .exact_core import ExactMatrix, commutator, nullspace_basis, solve
from .nilpotent_algebra import (BracketCheckError, NilpotentSpec, build_sl2_triple,
                                conjugate_transpose, jordan_matrix, random_conjugator)
from .polynomial_maps import (GradedOperator, VectorPoly, homological_op, monomial_basis,
                              mult_op, operator_matrix, poly_ring, random_sparse_map,
                              scalar_operator_matrix, slice_dim, subs_op, subs_scalar,
                              transport)
from .utils import CheckReport

logger = logging.getLogger(__name__)


def _as_int(q) -> int:
    if q.denominator != 1:
        raise BracketCheckError("weight %s is not an integer" % q)
    return int(q.numerator)


def _word_powers(spec: NilpotentSpec):
    p = spec.p
    n = [ExactMatrix.identity(spec.n)]
    m = [ExactMatrix.identity(spec.n)]
    N, M = jordan_matrix(spec), conjugate_transpose(spec)
    for _ in range(p):
        n.append(n[-1] @ N)
        m.append(m[-1] @ M)
    return n, m


def _subs_matrix(A: ExactMatrix, n: int, d: int) -> ExactMatrix:
    return scalar_operator_matrix(functools.partial(subs_scalar, A), n, d).matrix


def _componentwise(S: ExactMatrix, n: int) -> ExactMatrix:
    """Scalar slice operator acting on every component of P_d (x) R^n."""
    return ExactMatrix.block_diag([S] * n)


def _mult_matrix(A: ExactMatrix, dim: int) -> ExactMatrix:
    """Matrix of phi -> A phi on P_d (x) R^n, with dim = dim P_d."""
    dok = {}
    for (i, j), v in A.to_dok().items():
        for k in range(dim):
            dok[i * dim + k, j * dim + k] = v
    return ExactMatrix.from_dok(dok, (A.rows * dim, A.cols * dim))


@attr.s(auto_attribs=True)
class StarredTriple:
    """
    The operators (star_n, star_m, star_h) = (subs_n, sum of substituted
    words of m_bar, sum of substituted brackets of h_bar) on one slice.
    """
    spec: NilpotentSpec
    degree: int
    star_n: GradedOperator
    star_m: GradedOperator
    star_h: GradedOperator
    scalar: bool = True

    def check(self) -> CheckReport:
        rep = CheckReport('starred relations (%s, d=%d)' % (self.spec.label(), self.degree))
        rep.add('[m*, n*] = h*', self.star_m.commutator(self.star_n) == self.star_h)
        rep.add('[h*, n*] = -2n*', self.star_h.commutator(self.star_n) == self.star_n.scale(-2))
        rep.add('[h*, m*] = 2m*', self.star_h.commutator(self.star_m) == self.star_m.scale(2))
        return rep


@functools.lru_cache(maxsize=64)
def _starred_scalar(spec: NilpotentSpec, d: int):
    n, dim = spec.n, slice_dim(spec.n, d)
    if d == 0:
        zero = ExactMatrix.zeros(dim)
        return zero, zero, zero
    p = spec.p
    N, M = _word_powers(spec)
    cache = {}

    def subs(A_key, A):
        if A_key not in cache:
            cache[A_key] = _subs_matrix(A, n, d)
        return cache[A_key]

    star_n = subs(('n', 1), N[1])
    star_m = ExactMatrix.zeros(dim)
    star_h = ExactMatrix.zeros(dim)
    for i in range(1, p):
        star_h = star_h + subs(('nm', i), N[i] @ M[i]) - subs(('mn', i), M[i] @ N[i])
        for l in range(i):
            star_m = star_m + subs(('w', i, l), N[l] @ M[i] @ N[i - l - 1])
    return star_n, star_m, star_h


def starred_triple(spec: NilpotentSpec, d: int, scalar: bool = True) -> StarredTriple:
    """
    The substitution triple on the scalar slice P_d, or componentwise on
    P_d (x) R^n if `scalar` is False.

    On the constant slice d = 0 all three operators are zero.

    Raises
    ------
    DegenerateTripleError
        If the nilpotency index is below 2.
    BracketCheckError
        If one of the bracket relations fails.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    build_sl2_triple(spec)
    mats = _starred_scalar(spec, d)
    if not scalar:
        mats = [_componentwise(S, spec.n) for S in mats]
    ops = [GradedOperator(d, spec.n, S, scalar=scalar) for S in mats]
    st = StarredTriple(spec, d, *ops, scalar=scalar)
    rep = st.check()
    if not rep:
        raise BracketCheckError(rep.counterexample)
    return st


def check_starred_kernel(spec: NilpotentSpec, d: int) -> CheckReport:
    """
    ker(star_m) = ker(subs_m) on the scalar slice, compared by ranks.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    rep = CheckReport('ker m* = ker subs_m (%s, d=%d)' % (spec.label(), d))
    st = starred_triple(spec, d)
    S_m = _subs_matrix(conjugate_transpose(spec), spec.n, d)
    r_bar, r_m = st.star_m.matrix.rank(), S_m.rank()
    r_both = ExactMatrix(st.star_m.matrix.rep.vstack(S_m.rep)).rank()
    rep.add('equal ranks', r_bar == r_m, '%d vs %d' % (r_bar, r_m))
    rep.add('rank of stack', r_both == r_m, '%d' % r_both)
    return rep


@attr.s(auto_attribs=True)
class LiftedTriple:
    """
    The sl2-triple on P_d (x) R^n which drives the normal form computation.

    conn_n = mult_n - subs_n, conn_m = mult_m_bar - star_m and
    cann_h = mult_h_bar + star_h.
    """
    spec: NilpotentSpec
    degree: int
    conn_n: GradedOperator
    "Lowering operator, the homological operator of n"
    conn_m: GradedOperator
    "Raising operator, its kernel is the normal form style"
    cann_h: GradedOperator

    @property
    def size(self) -> int:
        return self.conn_n.size

    def check(self) -> CheckReport:
        rep = CheckReport('lifted relations (%s, d=%d)' % (self.spec.label(), self.degree))
        rep.add('[conn_m, conn_n] = cann_h',
                self.conn_m.commutator(self.conn_n) == self.cann_h)
        rep.add('[cann_h, conn_m] = 2 conn_m',
                self.cann_h.commutator(self.conn_m) == self.conn_m.scale(2))
        rep.add('[cann_h, conn_n] = -2 conn_n',
                self.cann_h.commutator(self.conn_n) == self.conn_n.scale(-2))
        return rep

    def weights(self) -> List[int]:
        """Diagonal of cann_h, only meaningful in Jordan frame."""
        if not self.cann_h.matrix.is_diagonal():
            raise ValueError("cann_h is not diagonal in this frame")
        return [_as_int(v) for v in self.cann_h.matrix.diagonal()]


@functools.lru_cache(maxsize=64)
def lift_triple(spec: NilpotentSpec, d: int) -> LiftedTriple:
    """
    Lifts the matrix triple of spec to the slice P_d (x) R^n.

    Parameters
    ----------
    spec : NilpotentSpec
        Nilpotency index at least 2.
    d : int
        Degree of the slice. d = 0 is the constant slice, where the
        starred parts vanish.

    Returns
    -------
    LiftedTriple
        Bracket relations are verified before returning. Without
        conjugator cann_h is diagonal.

    Raises
    ------
    DegenerateTripleError
        If p < 2.
    BracketCheckError
        If a relation fails.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    triple = build_sl2_triple(spec)
    star = starred_triple(spec, d, scalar=True)
    n, dim = spec.n, slice_dim(spec.n, d)
    logger.debug('lifting triple of %s to degree %d, slice size %d', spec.label(), d, n * dim)

    def lift(A, S, sign):
        return GradedOperator(d, n, _mult_matrix(A, dim) + _componentwise(S.matrix, n).scale(sign))

    lt = LiftedTriple(spec, d,
                      conn_n=lift(triple.n_bar, star.star_n, -1),
                      conn_m=lift(triple.m_bar, star.star_m, -1),
                      cann_h=lift(triple.h_bar, star.star_h, 1))
    rep = lt.check()
    if not rep:
        raise BracketCheckError(rep.counterexample)
    if not spec.has_conjugator and not lt.cann_h.matrix.is_diagonal():
        raise BracketCheckError("cann_h is not diagonal in Jordan frame")
    return lt


@attr.s(auto_attribs=True, eq=False)
class WeightVector:
    """A homogeneous slice element which is an eigenvector of cann_h."""
    element: VectorPoly
    weight: int

    @property
    def degree(self) -> int:
        return self.element.degree


@attr.s(auto_attribs=True)
class KernelBasis:
    """Canonical basis of ker(conn_m) on one slice, tagged with weights."""
    spec: NilpotentSpec
    degree: int
    vectors: List[WeightVector]

    def __len__(self):
        return len(self.vectors)

    @property
    def weights(self) -> List[int]:
        return [v.weight for v in self.vectors]

    @property
    def cs_sum(self) -> int:
        "Sum of weight + 1, the dimension of the generated representations"
        return sum(w + 1 for w in self.weights)

    @property
    def expected_sum(self) -> int:
        return self.spec.n * slice_dim(self.spec.n, self.degree)

    def elements(self) -> List[VectorPoly]:
        return [v.element for v in self.vectors]

    def matrix(self) -> ExactMatrix:
        """Basis vectors as columns in the canonical slice coordinates."""
        size = self.spec.n * slice_dim(self.spec.n, self.degree)
        return ExactMatrix.from_columns([e.to_vector(self.degree) for e in self.elements()],
                                        size)


def _weighted_nullspace(op: ExactMatrix, diag: Sequence, cann_h: ExactMatrix):
    out = []
    for vec in nullspace_basis(op):
        idx = next(i for i, v in enumerate(vec) if v)
        w = diag[idx]
        if cann_h.apply(vec) != tuple(w * v for v in vec):
            raise BracketCheckError("kernel vector is not a weight vector")
        out.append((vec, _as_int(w)))
    return out


@functools.lru_cache(maxsize=64)
def kernel_basis(spec: NilpotentSpec, d: int) -> KernelBasis:
    """
    Canonical basis of ker(conn_m) on the slice of degree d.

    The basis is the RREF nullspace basis computed in Jordan frame, where
    each vector is an exact cann_h eigenvector. For a conjugated spec the
    vectors are transported to its frame, weights are unchanged.
    """
    jspec = spec.jordan()
    lt = lift_triple(jspec, d)
    diag = lt.cann_h.matrix.diagonal()
    vectors = []
    for vec, w in _weighted_nullspace(lt.conn_m.matrix, diag, lt.cann_h.matrix):
        element = transport(spec, VectorPoly.from_vector(spec.n, d, vec))
        vectors.append(WeightVector(element, w))
    logger.debug('kernel of conn_m for %s at degree %d: dimension %d',
                 spec.label(), d, len(vectors))
    return KernelBasis(spec, d, vectors)


def scalar_kernel_basis(spec: NilpotentSpec, d: int):
    """
    ker(star_m) on the scalar slice P_d of the Jordan form, as a list of
    (polynomial, star_h weight) pairs.
    """
    jspec = spec.jordan()
    st = starred_triple(jspec, d)
    diag = st.star_h.matrix.diagonal()
    basis = monomial_basis(spec.n, d)
    R = poly_ring(spec.n)
    out = []
    for vec, w in _weighted_nullspace(st.star_m.matrix, diag, st.star_h.matrix):
        q = R.from_dict({basis[i]: c for i, c in enumerate(vec) if c})
        out.append((q, w))
    return out


def _homogeneous_degree(element: VectorPoly) -> int:
    degs = element.degrees()
    if len(degs) > 1:
        raise ValueError("element is not homogeneous, degrees %s" % degs)
    return degs[0] if degs else None


def project_ker(element: VectorPoly, spec: NilpotentSpec, method: str = 'generic') -> VectorPoly:
    """
    Component of a homogeneous element in ker(conn_m) with respect to
    im(conn_n) + ker(conn_m).

    Parameters
    ----------
    element : VectorPoly
        Homogeneous of one degree.
    spec : NilpotentSpec
    method : {'generic', 'fast'}
        'generic' solves the linear system [conn_n | kernel basis]; 'fast'
        uses the closed Clebsch-Gordan inversion coefficient termwise and
        only works for a single Jordan block without conjugator.

    Returns
    -------
    VectorPoly
    """
    if method == 'fast':
        from .transvectants import project_ker_fast
        return project_ker_fast(element, spec)
    if method != 'generic':
        raise ValueError("unknown projection method %r" % method)
    d = _homogeneous_degree(element)
    if d is None:
        return element
    lt = lift_triple(spec, d)
    kb = kernel_basis(spec, d)
    if not len(kb):
        return VectorPoly.zero(spec.n)
    A = lt.conn_n.matrix.hstack(kb.matrix())
    x = solve(A, element.to_vector(d))
    coeffs = x[lt.size:]
    out = VectorPoly.zero(spec.n)
    for c, e in zip(coeffs, kb.elements()):
        if c:
            out = out + e.scale(c)
    return out


def mult_kernel_basis(spec: NilpotentSpec, d: int) -> List[VectorPoly]:
    """Canonical basis of ker(mult_m) = P_d (x) ker m on the slice d."""
    dim = slice_dim(spec.n, d)
    A = _mult_matrix(conjugate_transpose(spec), dim)
    return [VectorPoly.from_vector(spec.n, d, v) for v in nullspace_basis(A)]


def check_mult_style_equivalence(spec: NilpotentSpec, max_degree: int) -> CheckReport:
    """
    Compares ker(mult_m) with ker(conn_m) per degree: equal dimension, and
    the projection onto ker(conn_m) restricted to ker(mult_m) is injective.
    """
    rep = CheckReport('ker mult_m vs ker conn_m (%s)' % spec.label())
    for d in range(1, max_degree + 1):
        K_mult = mult_kernel_basis(spec, d)
        kb = kernel_basis(spec, d)
        rep.add('d=%d dimension' % d, len(K_mult) == len(kb),
                '%d vs %d' % (len(K_mult), len(kb)))
        images = [project_ker(e, spec).to_vector(d) for e in K_mult]
        size = spec.n * slice_dim(spec.n, d)
        r = ExactMatrix.from_columns(images, size).rank() if images else 0
        rep.add('d=%d projection injective' % d, r == len(K_mult), 'rank %d' % r)
    return rep


def check_operator_properties(spec: NilpotentSpec, d: int, rng=None) -> CheckReport:
    """
    Operator identities on the slice of degree d >= 1, tested on random
    elements and on operator matrices.

    * mult and subs commute, for n, m and for random integer matrices,
    * subs_AB = subs_B subs_A, for n, m and for random integer matrices,
    * subs_n^p = 0 and conn_n^(2p-1) = 0,
    * homological operators of commuting matrices commute (n and n^2, a
      random A and A^2 + 2A),
    * L_[n,m] differs from [L_n, L_m] above degree one,
    * the lifted conn_n is the homological operator of n.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    rng = np.random.default_rng(0) if rng is None else rng
    rep = CheckReport('operator properties (%s, d=%d)' % (spec.label(), d))
    N, M = jordan_matrix(spec), conjugate_transpose(spec)
    n, p = spec.n, spec.p
    phi = random_sparse_map(spec, d, 4, rng, min_degree=d, linear=False)

    rep.add('mult_n subs_m = subs_m mult_n',
            mult_op(N, subs_op(M, phi)) == subs_op(M, mult_op(N, phi)))
    rep.add('subs_nm = subs_m subs_n', subs_op(N @ M, phi) == subs_op(M, subs_op(N, phi)))

    A, B = random_conjugator(n, rng), random_conjugator(n, rng)
    rep.add('mult_A subs_B = subs_B mult_A (random A, B)',
            mult_op(A, subs_op(B, phi)) == subs_op(B, mult_op(A, phi)))
    rep.add('subs_AB = subs_B subs_A (random A, B)',
            subs_op(A @ B, phi) == subs_op(B, subs_op(A, phi)))
    C = A @ A + A.scale(2)
    L_AC = homological_op(A, homological_op(C, phi))
    rep.add('[L_A, L_C] = 0 for C = A^2 + 2A (random A)',
            L_AC == homological_op(C, homological_op(A, phi)))

    S_n = operator_matrix(functools.partial(subs_op, N), n, d)
    rep.add('subs_n^p = 0', (S_n ** p).is_zero())
    L_n = operator_matrix(functools.partial(homological_op, N), n, d)
    idx = L_n.nilpotency_index(2 * p - 1)
    rep.add('conn_n^(2p-1) = 0', idx != -1, 'nilpotency index %d' % idx)

    L_n2 = operator_matrix(functools.partial(homological_op, N @ N), n, d)
    rep.add('[L_n, L_n^2] = 0', L_n.commutator(L_n2).is_zero())

    # L_A is a Lie homomorphism in A only on linear maps
    L_m = operator_matrix(functools.partial(homological_op, M), n, d)
    L_nm = operator_matrix(functools.partial(homological_op, commutator(N, M)), n, d)
    homomorphic = L_nm == L_n.commutator(L_m)
    if d == 1:
        rep.add('L_[n,m] = [L_n, L_m] on linear maps', homomorphic)
    else:
        rep.add('L_[n,m] != [L_n, L_m]', not homomorphic)

    rep.add('lifted conn_n = L_n', lift_triple(spec, d).conn_n == L_n)
    return rep


def weight_of(element: VectorPoly, spec: NilpotentSpec) -> Optional[int]:
    """cann_h eigenvalue of a homogeneous element, None if it is no eigenvector."""
    d = _homogeneous_degree(element)
    if d is None:
        return None
    lt = lift_triple(spec, d)
    v = element.to_vector(d)
    hv = lt.cann_h.matrix.apply(v)
    idx = next(i for i, c in enumerate(v) if c)
    w = hv[idx] / v[idx]
    if hv != tuple(w * c for c in v) or w.denominator != 1:
        return None
    return _as_int(w)


def in_kernel(element: VectorPoly, spec: NilpotentSpec) -> bool:
    """True if every homogeneous part of element is annihilated by conn_m."""
    for d in element.degrees():
        lt = lift_triple(spec, d)
        if any(lt.conn_m.matrix.apply(element.to_vector(d))):
            return False
    return True
