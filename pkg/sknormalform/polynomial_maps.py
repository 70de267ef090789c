"""
Sparse exact polynomial maps R^n -> R^n and the operators acting on them.

Every map is a tuple of elements of a sympy polynomial ring over QQ. A
homogeneous slice P_d (x) R^n is identified with a coordinate space through
the canonical basis: monomials of degree d in graded lexicographic order
(x1 > x2 > ... > xn), component-major.
"""
import functools
import itertools
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import attr
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

from .exact_core import ExactMatrix, commutator
from .nilpotent_algebra import NilpotentSpec, jordan_matrix
from .utils import binom, check_dims, format_rational, to_scalar

Monomial = Tuple[int, ...]


class ConstantTermError(ValueError):
    """A map which must vanish at the origin has a constant term."""


@functools.lru_cache(maxsize=None)
def poly_ring(n: int):
    """Polynomial ring QQ[x1, ..., xn] with grlex order, one instance per n."""
    if n < 1:
        raise ValueError("dimension must be positive")
    return ring(','.join('x%d' % (i + 1) for i in range(n)), QQ, grlex)[0]


def slice_dim(n: int, d: int) -> int:
    "Number of monomials of degree d in n variables."
    return binom(d + n - 1, n - 1)


@functools.lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> Tuple[Monomial, ...]:
    """
    Monomials of degree d in n variables, in canonical order. For equal
    degree grlex with x1 > x2 > ... reduces to descending exponent tuples.
    """
    monoms = []
    for combo in itertools.combinations_with_replacement(range(n), d):
        exps = [0] * n
        for v in combo:
            exps[v] += 1
        monoms.append(tuple(exps))
    return tuple(sorted(monoms, reverse=True))


@functools.lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(n, d))}


def _truncate(p: PolyElement, D: int) -> PolyElement:
    if all(sum(m) <= D for m in p):
        return p
    return p.ring.from_dict({m: c for m, c in p.items() if sum(m) <= D})


def _homogeneous_part(p: PolyElement, d: int) -> PolyElement:
    return p.ring.from_dict({m: c for m, c in p.items() if sum(m) == d})


@attr.s(auto_attribs=True, frozen=True, eq=False, repr=False)
class VectorPoly:
    """
    Polynomial map x -> (f_1(x), ..., f_n(x)) with exact coefficients.
    """
    n: int
    "Ambient dimension"
    components: Tuple[PolyElement, ...]
    "One polynomial of poly_ring(n) per component"

    def __attrs_post_init__(self):
        if len(self.components) != self.n:
            raise ValueError("%d components for dimension %d" % (len(self.components), self.n))

    @property
    def ring(self):
        return poly_ring(self.n)

    @classmethod
    def zero(cls, n: int) -> 'VectorPoly':
        R = poly_ring(n)
        return cls(n, tuple(R.zero for _ in range(n)))

    @classmethod
    def linear(cls, A: ExactMatrix) -> 'VectorPoly':
        """The linear map x -> A x."""
        n = A.rows
        if A.shape != (n, n):
            raise ValueError("linear part must be square")
        R = poly_ring(n)
        comps = [R.zero for _ in range(n)]
        for (i, j), v in A.to_dok().items():
            comps[i] = comps[i] + R.gens[j] * v
        return cls(n, tuple(comps))

    @classmethod
    def identity(cls, n: int) -> 'VectorPoly':
        return cls.linear(ExactMatrix.identity(n))

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Tuple]) -> 'VectorPoly':
        """
        Builds a map from (coefficient, exponents, component) triples, the
        component being 0-based. Repeated monomials are added up.
        """
        R = poly_ring(n)
        dicts: List[Dict[Monomial, object]] = [{} for _ in range(n)]
        for coeff, exps, comp in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError("bad exponent vector %r for dimension %d" % (exps, n))
            if not 0 <= comp < n:
                raise ValueError("component %d out of range" % comp)
            dicts[comp][exps] = dicts[comp].get(exps, QQ(0)) + to_scalar(coeff)
        return cls(n, tuple(R.from_dict(d) for d in dicts))

    @classmethod
    def monomial(cls, n: int, exps: Sequence[int], component: int, coeff=1) -> 'VectorPoly':
        return cls.from_terms(n, [(coeff, exps, component)])

    @classmethod
    def from_vector(cls, n: int, d: int, vector: Sequence) -> 'VectorPoly':
        """Inverse of `to_vector`."""
        basis = monomial_basis(n, d)
        dim = len(basis)
        if len(vector) != n * dim:
            raise ValueError("vector of length %d for slice of size %d" % (len(vector), n * dim))
        terms = [(v, basis[idx % dim], idx // dim) for idx, v in enumerate(vector) if v]
        return cls.from_terms(n, terms)

    def to_vector(self, d: int) -> Tuple:
        """
        Coordinates of the degree-d slice in the canonical basis. Terms of
        other degrees are ignored.
        """
        index = monomial_index(self.n, d)
        dim = len(index)
        out = [QQ(0)] * (self.n * dim)
        for comp, p in enumerate(self.components):
            for m, c in p.items():
                if sum(m) == d:
                    out[comp * dim + index[m]] = c
        return tuple(out)

    def terms(self) -> List[Tuple[Monomial, int, object]]:
        """(exponents, component, coefficient) sorted by degree, then canonical order."""
        out = []
        for comp, p in enumerate(self.components):
            for m, c in p.items():
                if c:
                    out.append((m, comp, c))
        out.sort(key=lambda t: (sum(t[0]), t[1], tuple(-e for e in t[0])))
        return out

    def degrees(self) -> List[int]:
        return sorted({sum(m) for p in self.components for m in p})

    @property
    def degree(self) -> int:
        "Highest total degree, -1 for the zero map"
        degs = self.degrees()
        return degs[-1] if degs else -1

    def is_zero(self) -> bool:
        return all(not p for p in self.components)

    def is_homogeneous(self, d: int = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs[0] == d)

    def has_constant(self) -> bool:
        zero = (0,) * self.n
        return any(p.get(zero) for p in self.components)

    def slice(self, d: int) -> 'VectorPoly':
        """Homogeneous part of total degree d."""
        return VectorPoly(self.n, tuple(_homogeneous_part(p, d) for p in self.components))

    def truncate(self, D: int) -> 'VectorPoly':
        """Drops every term of degree > D."""
        return VectorPoly(self.n, tuple(_truncate(p, D) for p in self.components))

    def nonlinear(self) -> 'VectorPoly':
        """Everything except the linear part."""
        return VectorPoly(self.n, tuple(
            p.ring.from_dict({m: c for m, c in p.items() if sum(m) != 1})
            for p in self.components))

    def linear_part(self) -> ExactMatrix:
        """Matrix A with A[i, j] the coefficient of x_j in component i."""
        dok = {}
        for i, p in enumerate(self.components):
            for m, c in p.items():
                if sum(m) == 1:
                    dok[i, m.index(1)] = c
        return ExactMatrix.from_dok(dok, (self.n, self.n))

    def _check_other(self, other):
        if not isinstance(other, VectorPoly):
            raise TypeError("expected a VectorPoly, got %r" % type(other))
        if other.n != self.n:
            raise ValueError("dimension mismatch: %d vs %d" % (self.n, other.n))

    def __add__(self, other: 'VectorPoly') -> 'VectorPoly':
        self._check_other(other)
        return VectorPoly(self.n, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: 'VectorPoly') -> 'VectorPoly':
        self._check_other(other)
        return VectorPoly(self.n, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> 'VectorPoly':
        return VectorPoly(self.n, tuple(-a for a in self.components))

    def scale(self, c) -> 'VectorPoly':
        c = to_scalar(c)
        return VectorPoly(self.n, tuple(a * c for a in self.components))

    def __eq__(self, other):
        if not isinstance(other, VectorPoly):
            return NotImplemented
        return self.n == other.n and all(
            dict(a) == dict(b) for a, b in zip(self.components, other.components))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return 'VectorPoly(%d, %s)' % (self.n, format_poly(self))


def format_monomial(exps: Monomial) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append('x%d' % (i + 1))
        elif e > 1:
            parts.append('x%d^%d' % (i + 1, e))
    return '*'.join(parts)


def format_poly(phi: VectorPoly) -> str:
    """
    Deterministic text form, e.g. 'x2*e1 + 1/2*x1^2*e2 - x1*x2*e2'.
    """
    out = []
    for m, comp, c in phi.terms():
        mono = format_monomial(m)
        factors = [f for f in (mono, 'e%d' % (comp + 1)) if f]
        body = '*'.join(factors)
        mag = format_rational(abs(c))
        if mag != '1':
            body = mag + '*' + body
        sign = '-' if c < 0 else '+'
        if not out:
            out.append(body if sign == '+' else '-' + body)
        else:
            out.append('%s %s' % (sign, body))
    return ' '.join(out) if out else '0'


@check_dims
def mult_op(A: ExactMatrix, phi: VectorPoly) -> VectorPoly:
    """
    Returns x -> A phi(x).

    Parameters
    ----------
    A : ExactMatrix
        Square matrix of size n.
    phi : VectorPoly
        Map of dimension n.
    """
    R = phi.ring
    comps = [R.zero for _ in range(phi.n)]
    for (i, j), v in A.to_dok().items():
        if phi.components[j]:
            comps[i] = comps[i] + phi.components[j] * v
    return VectorPoly(phi.n, tuple(comps))


def _linear_forms(A: ExactMatrix):
    """The components of x -> A x as ring elements."""
    return VectorPoly.linear(A).components


def subs_scalar(A: ExactMatrix, q: PolyElement) -> PolyElement:
    """Returns x -> q(A x) for a scalar polynomial q."""
    R = q.ring
    if A.shape != (R.ngens, R.ngens):
        raise ValueError("matrix of shape %s for %d variables" % (A.shape, R.ngens))
    if not q:
        return q
    return q.compose(list(zip(R.gens, _linear_forms(A))))


@check_dims
def subs_op(A: ExactMatrix, phi: VectorPoly) -> VectorPoly:
    """
    Returns x -> phi(A x), by exact substitution and expansion.
    """
    R = phi.ring
    replacements = list(zip(R.gens, _linear_forms(A)))
    comps = tuple(p.compose(replacements) if p else p for p in phi.components)
    return VectorPoly(phi.n, comps)


@check_dims
def homological_op(A: ExactMatrix, phi: VectorPoly) -> VectorPoly:
    """
    The homological operator, x -> A phi(x) - phi(A x).
    """
    return mult_op(A, phi) - subs_op(A, phi)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class GradedOperator:
    """
    Matrix of a linear operator on one homogeneous slice, in the canonical
    basis. For scalar slices (`scalar` set) the basis is the monomial basis
    alone.
    """
    degree: int
    n: int
    matrix: ExactMatrix
    scalar: bool = False
    "True if the operator acts on P_d instead of P_d (x) R^n"

    @property
    def size(self) -> int:
        return self.matrix.rows

    def _other(self, other: 'GradedOperator'):
        if (other.degree, other.n, other.scalar) != (self.degree, self.n, self.scalar):
            raise ValueError("operators act on different slices")
        return other.matrix

    def __add__(self, other):
        return attr.evolve(self, matrix=self.matrix + self._other(other))

    def __sub__(self, other):
        return attr.evolve(self, matrix=self.matrix - self._other(other))

    def __neg__(self):
        return attr.evolve(self, matrix=-self.matrix)

    def __matmul__(self, other):
        return attr.evolve(self, matrix=self.matrix @ self._other(other))

    def scale(self, c):
        return attr.evolve(self, matrix=self.matrix.scale(c))

    def __pow__(self, k: int):
        return attr.evolve(self, matrix=self.matrix ** k)

    def commutator(self, other: 'GradedOperator') -> 'GradedOperator':
        return attr.evolve(self, matrix=commutator(self.matrix, self._other(other)))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other):
        if not isinstance(other, GradedOperator):
            return NotImplemented
        return ((self.degree, self.n, self.scalar) == (other.degree, other.n, other.scalar)
                and self.matrix == other.matrix)

    __hash__ = None

    def apply(self, phi: VectorPoly) -> VectorPoly:
        """Applies the matrix to the degree slice of a vector map."""
        if self.scalar:
            raise TypeError("scalar operator applied to a vector map")
        return VectorPoly.from_vector(self.n, self.degree,
                                      self.matrix.apply(phi.to_vector(self.degree)))

    def nilpotency_index(self, limit: int) -> int:
        """Smallest k <= limit with op^k = 0, or -1."""
        power = ExactMatrix.identity(self.size)
        for k in range(1, limit + 1):
            power = power @ self.matrix
            if power.is_zero():
                return k
        return -1


def slice_basis(n: int, d: int) -> List[VectorPoly]:
    """Canonical basis of P_d (x) R^n as maps."""
    return [VectorPoly.monomial(n, m, comp)
            for comp in range(n) for m in monomial_basis(n, d)]


def operator_matrix(op: Callable[[VectorPoly], VectorPoly], n: int, d: int) -> GradedOperator:
    """
    Matrix of a linear slice operator.

    Parameters
    ----------
    op : callable
        Linear map VectorPoly -> VectorPoly which preserves the degree, e.g.
        ``functools.partial(homological_op, A)``.
    n : int
        Ambient dimension.
    d : int
        Degree of the slice.

    Returns
    -------
    GradedOperator
        Column j is op applied to basis element j.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    columns = []
    for b in slice_basis(n, d):
        image = op(b)
        if not image.is_homogeneous(d):
            raise ValueError("operator does not preserve degree %d" % d)
        columns.append(image.to_vector(d))
    size = n * slice_dim(n, d)
    return GradedOperator(d, n, ExactMatrix.from_columns(columns, size))


def scalar_to_vector(q: PolyElement, d: int) -> Tuple:
    index = monomial_index(q.ring.ngens, d)
    out = [QQ(0)] * len(index)
    for m, c in q.items():
        if sum(m) != d:
            raise ValueError("polynomial is not homogeneous of degree %d" % d)
        out[index[m]] = c
    return tuple(out)


def scalar_from_vector(n: int, d: int, vector: Sequence) -> PolyElement:
    basis = monomial_basis(n, d)
    return poly_ring(n).from_dict({basis[i]: v for i, v in enumerate(vector) if v})


def scalar_operator_matrix(op: Callable[[PolyElement], PolyElement], n: int,
                           d: int) -> GradedOperator:
    """Same as `operator_matrix` for operators on scalar polynomials P_d."""
    R = poly_ring(n)
    columns = [scalar_to_vector(op(R.from_dict({m: QQ(1)})), d) for m in monomial_basis(n, d)]
    return GradedOperator(d, n, ExactMatrix.from_columns(columns, slice_dim(n, d)), scalar=True)


def compose_truncated(f: VectorPoly, g: VectorPoly, D: int) -> VectorPoly:
    """
    f o g with every term of degree > D dropped.

    Truncation is applied after every multiplication, so intermediate
    results never exceed degree D.

    Raises
    ------
    ConstantTermError
        If g has a constant term.
    """
    f._check_other(g)
    if g.has_constant():
        raise ConstantTermError("inner map of a composition must vanish at the origin")
    R = f.ring
    powers: Dict[int, List[PolyElement]] = {}

    def power(j, e):
        pw = powers.setdefault(j, [R.one])
        while len(pw) <= e:
            pw.append(_truncate(pw[-1] * g.components[j], D))
        return pw[e]

    comps = []
    for p in f.components:
        acc = R.zero
        for m, c in p.items():
            if sum(m) > D:
                continue
            term = R.one * c
            for j, e in enumerate(m):
                if e:
                    term = _truncate(term * power(j, e), D)
                    if not term:
                        break
            acc = acc + term
        comps.append(acc)
    return VectorPoly(f.n, tuple(comps))


def invert_near_identity(phi: VectorPoly, D: int) -> VectorPoly:
    """
    Inverse of a near-identity transformation up to degree D.

    Starts from the identity and corrects one degree at a time: if
    phi o psi = id + e_k + ..., then psi - e_k is correct through degree k.

    Raises
    ------
    ValueError
        If the linear part of phi is not the identity.
    """
    if phi.has_constant():
        raise ConstantTermError("near-identity transformation has a constant term")
    if phi.linear_part() != ExactMatrix.identity(phi.n):
        raise ValueError("linear part of a near-identity transformation must be the identity")
    ident = VectorPoly.identity(phi.n)
    psi = ident
    for k in range(2, D + 1):
        err = (compose_truncated(phi, psi, k) - ident).slice(k)
        psi = psi - err
    return psi


def transport(spec: NilpotentSpec, phi: VectorPoly) -> VectorPoly:
    """
    Moves a Jordan frame map to the frame of spec, x -> P^-1 phi(P x).

    Homological operators are compatible with it: the operator of
    P^-1 A P applied to transport(phi) is the transport of the operator of
    A applied to phi.
    """
    P = spec.conjugator
    if P is None:
        return phi
    return mult_op(P.inv(), subs_op(P, phi))


def transport_back(spec: NilpotentSpec, phi: VectorPoly) -> VectorPoly:
    """Inverse of `transport`, x -> P phi(P^-1 x)."""
    P = spec.conjugator
    if P is None:
        return phi
    return mult_op(P, subs_op(P.inv(), phi))


def random_sparse_map(spec: NilpotentSpec, max_degree: int, n_terms: int, rng,
                      min_degree: int = 2, linear: bool = True) -> VectorPoly:
    """
    Random sparse map with small rational coefficients.

    Parameters
    ----------
    spec : NilpotentSpec
        Determines the dimension and, if `linear` is set, the linear part.
    max_degree, min_degree : int
        Degree range of the random terms.
    n_terms : int
        Number of random terms, repeated monomials are added up.
    rng : numpy.random.Generator
        Source of randomness.
    """
    n = spec.n
    terms = []
    for _ in range(n_terms):
        d = int(rng.integers(min_degree, max_degree + 1))
        basis = monomial_basis(n, d)
        m = basis[int(rng.integers(len(basis)))]
        num = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
        den = int(rng.integers(1, 4))
        terms.append((QQ(num, den), m, int(rng.integers(n))))
    phi = VectorPoly.from_terms(n, terms)
    if linear:
        phi = phi + VectorPoly.linear(jordan_matrix(spec))
    return phi
