"""
Nilpotent matrices in Jordan form, their conjugate transposes, the projection
operators built from them and the matrix sl2-triple.
"""
from typing import List, Optional, Sequence, Tuple

import attr
from sympy.polys.domains import QQ

from .exact_core import ExactMatrix, commutator
from .utils import CheckReport, qbinom, qfactorial


class SingularConjugatorError(ValueError):
    """The conjugator P is not invertible."""


class DegenerateTripleError(ValueError):
    """The nilpotency index is smaller than two, there is no sl2-triple."""


class BracketCheckError(ArithmeticError):
    """A bracket relation which must hold exactly failed."""


def _to_blocks(blocks) -> Tuple[int, ...]:
    if isinstance(blocks, str):
        blocks = [b for b in blocks.replace(' ', '').split(',') if b]
    out = tuple(int(b) for b in blocks)
    if not out or any(b < 1 for b in out):
        raise ValueError("block sizes must be positive integers, got %r" % (blocks,))
    return out


def _to_conjugator(P) -> Optional[ExactMatrix]:
    if P is None or isinstance(P, ExactMatrix):
        return P
    return ExactMatrix.from_rows(P)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class NilpotentSpec:
    """
    Block sizes of a nilpotent matrix in Jordan form, together with an
    optional conjugator P. The described matrix is P^-1 N P.
    """
    block_sizes: Tuple[int, ...] = attr.ib(converter=_to_blocks)
    "Jordan block sizes, in the order given by the user"
    conjugator: Optional[ExactMatrix] = attr.ib(default=None, converter=_to_conjugator)
    "Invertible matrix P, None means identity"

    def __attrs_post_init__(self):
        P = self.conjugator
        if P is not None:
            if P.shape != (self.n, self.n):
                raise ValueError("conjugator of shape %s for dimension %d" % (P.shape, self.n))
            if P.rank() != self.n:
                raise SingularConjugatorError("conjugator is singular")

    @classmethod
    def from_string(cls, text: str, conjugator=None) -> 'NilpotentSpec':
        """Parses '2,3' into blocks (2, 3)."""
        return cls(text, conjugator)

    @property
    def n(self) -> int:
        "Ambient dimension"
        return sum(self.block_sizes)

    @property
    def p(self) -> int:
        "Nilpotency index"
        return max(self.block_sizes)

    @property
    def is_irreducible(self) -> bool:
        return len(self.block_sizes) == 1

    @property
    def has_conjugator(self) -> bool:
        return self.conjugator is not None and self.conjugator != ExactMatrix.identity(self.n)

    def jordan(self) -> 'NilpotentSpec':
        """Same blocks, conjugator dropped."""
        return NilpotentSpec(self.block_sizes)

    def block_of(self, index: int) -> Tuple[int, int]:
        """
        Returns (block number, position inside the block) for a 0-based
        coordinate index. Positions are 1-based, as in e_1 ... e_k.
        """
        start = 0
        for b, k in enumerate(self.block_sizes):
            if index < start + k:
                return b, index - start + 1
            start += k
        raise IndexError(index)

    def label(self) -> str:
        return ','.join(str(k) for k in self.block_sizes)

    def __eq__(self, other):
        if not isinstance(other, NilpotentSpec):
            return NotImplemented
        return (self.block_sizes == other.block_sizes
                and _same_conjugator(self.conjugator, other.conjugator, self.n))

    def __hash__(self):
        return hash(self.block_sizes)


def _same_conjugator(P, Q, n):
    eye = ExactMatrix.identity(n)
    return (P if P is not None else eye) == (Q if Q is not None else eye)


@attr.s(auto_attribs=True)
class Sl2MatrixTriple:
    """
    Matrices (n_bar, h_bar, m_bar) with [m_bar, n_bar] = h_bar,
    [h_bar, n_bar] = -2 n_bar and [h_bar, m_bar] = 2 m_bar.
    """
    n_bar: ExactMatrix
    "The nilpotent itself"
    h_bar: ExactMatrix
    m_bar: ExactMatrix
    raw_m: ExactMatrix
    "Conjugate transpose before the summation"
    spec: Optional[NilpotentSpec] = None

    def brackets(self) -> Tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
        """The three brackets, which must equal (h, -2n, 2m)."""
        return (commutator(self.m_bar, self.n_bar),
                commutator(self.h_bar, self.n_bar),
                commutator(self.h_bar, self.m_bar))

    def check(self) -> CheckReport:
        rep = CheckReport('sl2 relations')
        mn, hn, hm = self.brackets()
        rep.add('[m, n] = h', mn == self.h_bar)
        rep.add('[h, n] = -2n', hn == self.n_bar.scale(-2))
        rep.add('[h, m] = 2m', hm == self.m_bar.scale(2))
        return rep


def jordan_block(k: int) -> ExactMatrix:
    """Upper triangular nilpotent Jordan block, ones on the superdiagonal."""
    return ExactMatrix.from_dok({(i, i + 1): QQ(1) for i in range(k - 1)}, (k, k))


def jordan_form(spec: NilpotentSpec) -> ExactMatrix:
    """Block diagonal Jordan matrix N, ignoring the conjugator."""
    return ExactMatrix.block_diag([jordan_block(k) for k in spec.block_sizes])


def to_spec_frame(spec: NilpotentSpec, A: ExactMatrix) -> ExactMatrix:
    """Returns P^-1 A P, i.e. moves a Jordan frame matrix into the frame of spec."""
    if spec.conjugator is None:
        return A
    P = spec.conjugator
    return P.inv() @ A @ P


def jordan_matrix(spec: NilpotentSpec) -> ExactMatrix:
    """
    The nilpotent n = P^-1 N P described by the spec.

    Parameters
    ----------
    spec : NilpotentSpec

    Returns
    -------
    ExactMatrix
        Jordan form N when the spec has no conjugator.
    """
    return to_spec_frame(spec, jordan_form(spec))


def conjugate_transpose(spec: NilpotentSpec) -> ExactMatrix:
    """
    The conjugate transpose m = P^-1 N^T P. In general this is not the
    transpose of n.
    """
    return to_spec_frame(spec, jordan_form(spec).T)


def _mat_powers(A: ExactMatrix, k: int) -> List[ExactMatrix]:
    out = [ExactMatrix.identity(A.rows)]
    for _ in range(k):
        out.append(out[-1] @ A)
    return out


def verify_word_relations(spec: NilpotentSpec, max_k: int) -> CheckReport:
    """
    Checks the word identities between powers of n and m.

    For 1 <= k <= max_k, 0 <= l <= max_k and K = max(k, l):

    * n^l m^k n^k = m^(K-l) n^K
    * m^k n^k m^l = m^K n^(K-l)
    * m^l n^k m^k = n^(K-l) m^K
    * n^k m^k n^l = n^K m^(K-l)
    """
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    rep = CheckReport('word relations (%s)' % spec.label())
    n = _mat_powers(jordan_matrix(spec), 2 * max_k)
    m = _mat_powers(conjugate_transpose(spec), 2 * max_k)
    for k in range(1, max_k + 1):
        for l in range(max_k + 1):
            K = max(k, l)
            rep.add('k=%d l=%d n^l m^k n^k' % (k, l), n[l] @ m[k] @ n[k] == m[K - l] @ n[K])
            rep.add('k=%d l=%d m^k n^k m^l' % (k, l), m[k] @ n[k] @ m[l] == m[K] @ n[K - l])
            rep.add('k=%d l=%d m^l n^k m^k' % (k, l), m[l] @ n[k] @ m[k] == n[K - l] @ m[K])
            rep.add('k=%d l=%d n^k m^k n^l' % (k, l), n[k] @ m[k] @ n[l] == n[K] @ m[K - l])
    return rep


def check_nmn(spec: NilpotentSpec) -> CheckReport:
    """n m n = n and m n m = m."""
    rep = CheckReport('nmn relations (%s)' % spec.label())
    n, m = jordan_matrix(spec), conjugate_transpose(spec)
    rep.add('n m n = n', n @ m @ n == n)
    rep.add('m n m = m', m @ n @ m == m)
    return rep


def projection(spec: NilpotentSpec, i: int, l: int) -> ExactMatrix:
    """
    The projection n^l m^i n^(i-l).

    Parameters
    ----------
    spec : NilpotentSpec
    i : int
        At least 1.
    l : int
        Between 0 and i.

    Returns
    -------
    ExactMatrix
        In Jordan frame the diagonal projector onto e_(i-l+1), ..., e_(k-l)
        inside every block of size k.
    """
    if i < 1 or not 0 <= l <= i:
        raise ValueError("projection index out of range: i=%d, l=%d" % (i, l))
    n, m = jordan_matrix(spec), conjugate_transpose(spec)
    return (n ** l) @ (m ** i) @ (n ** (i - l))


def layer_projections(spec: NilpotentSpec) -> List[ExactMatrix]:
    """
    The projectors n^(p-l) m^(p-1) n^(l-1) for l = 1..p. For a single block
    the l-th one projects onto e_l.
    """
    p = spec.p
    if p < 2:
        return [ExactMatrix.identity(spec.n)]
    return [projection(spec, p - 1, p - l) for l in range(1, p + 1)]


def epsilon_matrix(spec: NilpotentSpec) -> ExactMatrix:
    """
    1 + sum_(i=2)^(p-1) sum_(l=0)^(i-1) n^l m^i n^(i-l).

    For a single block of size p the Jordan frame matrix is
    diag(1, 1*(p-1), 2*(p-2), ..., (p-1)*1).
    """
    out = ExactMatrix.identity(spec.n)
    for i in range(2, spec.p):
        for l in range(i):
            out = out + projection(spec, i, l)
    return out


def check_projections(spec: NilpotentSpec) -> CheckReport:
    """
    Idempotence and traces of the projections, the layer decomposition and
    the expansion of the epsilon matrix.
    """
    rep = CheckReport('projections (%s)' % spec.label())
    p = spec.p
    for i in range(1, p + 1):
        for l in range(i + 1):
            pi = projection(spec, i, l)
            rep.add('pi_%d^%d idempotent' % (i, l), pi @ pi == pi)
            expected = sum(max(k - i, 0) for k in spec.block_sizes)
            rep.add('trace pi_%d^%d' % (i, l), pi.trace() == expected,
                    'trace %s, expected %d' % (pi.trace(), expected))
    eps = epsilon_matrix(spec)
    if not spec.has_conjugator:
        rep.add('epsilon diagonal', eps.is_diagonal())
    if spec.is_irreducible and p >= 2:
        layers = layer_projections(spec)
        total = ExactMatrix.zeros(spec.n)
        for w in layers:
            total = total + w
        rep.add('layers complete', total == ExactMatrix.identity(spec.n))
        expansion = layers[0]
        for j in range(2, p + 1):
            expansion = expansion + layers[j - 1].scale((p - j + 1) * (j - 1))
        rep.add('epsilon from layers', expansion == eps)
        trace = 1 + p * (p + 1) * (p - 1) // 6
        rep.add('epsilon trace', eps.trace() == trace)
    return rep


def build_sl2_triple(spec: NilpotentSpec) -> Sl2MatrixTriple:
    """
    The matrix sl2-triple of the nilpotent described by spec.

    m_bar = sum_(i=1)^(p-1) sum_(l=0)^(i-1) n^l m^i n^(i-l-1) and
    h_bar = sum_(i=1)^(p-1) [m^i, n^i]. The bracket relations are checked
    before the triple is returned.

    Raises
    ------
    DegenerateTripleError
        If the nilpotency index is below 2.
    BracketCheckError
        If a bracket relation fails.
    """
    p = spec.p
    if p < 2:
        raise DegenerateTripleError("nilpotency index %d < 2, n is zero" % p)
    n_mat, m_mat = jordan_matrix(spec), conjugate_transpose(spec)
    n = _mat_powers(n_mat, p)
    m = _mat_powers(m_mat, p)
    m_bar = ExactMatrix.zeros(spec.n)
    h_bar = ExactMatrix.zeros(spec.n)
    for i in range(1, p):
        h_bar = h_bar + commutator(m[i], n[i])
        for l in range(i):
            m_bar = m_bar + n[l] @ m[i] @ n[i - l - 1]
    triple = Sl2MatrixTriple(n_mat, h_bar, m_bar, m_mat, spec)
    rep = triple.check()
    if not rep.passed:
        raise BracketCheckError('matrix triple for blocks %s: %s' %
                                (spec.label(), rep.counterexample))
    return triple


def check_kernel_equality(spec: NilpotentSpec) -> CheckReport:
    """
    ker m_bar = ker m, by comparing the ranks of m, m_bar and the stacked
    matrix.
    """
    rep = CheckReport('ker m_bar = ker m (%s)' % spec.label())
    t = build_sl2_triple(spec)
    r_m, r_mbar = t.raw_m.rank(), t.m_bar.rank()
    stacked = ExactMatrix(t.raw_m.rep.vstack(t.m_bar.rep))
    r_both = stacked.rank()
    rep.add('rank m = rank m_bar', r_m == r_mbar, '%d vs %d' % (r_m, r_mbar))
    rep.add('rank of stack', r_both == r_m, '%d' % r_both)
    return rep


def bracket_case(p: int, k: int, i: int, l: int) -> Tuple[str, ExactMatrix]:
    """
    Closed form of [[m^k, n^k], n^l m^i n^(i-l-1)] for a single block of
    size p. Returns the case letter and the matrix.
    """
    spec = NilpotentSpec((p,))
    n = _mat_powers(jordan_matrix(spec), 3 * p + 2)
    m = _mat_powers(conjugate_transpose(spec), 3 * p + 2)
    j = i - l - 1
    zero = ExactMatrix.zeros(p)
    if k <= min(l, j):
        return 'a', zero
    case_b = n[k - 1] @ m[k + i - l - 1] @ n[j] - n[k] @ m[k + i - l] @ n[j]
    case_c = n[l] @ m[k + l] @ n[k - 1] - n[l] @ m[k + l + 1] @ n[k]
    if l < k <= j:
        return 'b', case_b
    if j < k <= l:
        return 'c', case_c
    return 'd', case_b + case_c


def check_bracket_cases(p: int) -> CheckReport:
    """
    Compares [[m^k, n^k], n^l m^i n^(i-l-1)] with its four case formulas for
    1 <= k <= p, 1 <= i <= p and 0 <= l < i.
    """
    rep = CheckReport('bracket cases (p=%d)' % p)
    spec = NilpotentSpec((p,))
    n = _mat_powers(jordan_matrix(spec), p + 1)
    m = _mat_powers(conjugate_transpose(spec), p + 1)
    for k in range(1, p + 1):
        hk = commutator(m[k], n[k])
        for i in range(1, p + 1):
            for l in range(i):
                word = n[l] @ m[i] @ n[i - l - 1]
                case, rhs = bracket_case(p, k, i, l)
                rep.add('k=%d i=%d l=%d (%s)' % (k, i, l, case), commutator(hk, word) == rhs)
    return rep


def m_reconstruction(p: int, first_index: int = 2) -> ExactMatrix:
    """
    Right hand side of the reconstruction of M from the triple of a single
    block,

    M_bar + sum_i (-1)^(i+1) sum_(l=1)^i c(i, l) N^(l-1) M_bar^i N^(i-l)

    with c(i, l) = binom(i-1, l-1) binom(i, l-1) / (i! i! l) and the sum over
    `first_index` <= i <= p-1. The identity holds for `first_index` = 2;
    starting at 1 adds a spurious copy of M_bar.
    """
    t = build_sl2_triple(NilpotentSpec((p,)))
    N = _mat_powers(t.n_bar, p)
    Mb = _mat_powers(t.m_bar, p)
    out = t.m_bar
    for i in range(first_index, p):
        sign = 1 if i % 2 else -1
        for l in range(1, i + 1):
            c = qbinom(i - 1, l - 1) * qbinom(i, l - 1) / (qfactorial(i) ** 2 * l)
            out = out + (N[l - 1] @ Mb[i] @ N[i - l]).scale(sign * c)
    return out


def check_m_reconstruction(p: int, first_index: int = 2) -> CheckReport:
    """
    Verifies that the single block M is recovered from (N_bar, M_bar), see
    `m_reconstruction`.
    """
    if not 2 <= p <= 9:
        raise ValueError("p must lie in 2..9, got %d" % p)
    rep = CheckReport('M reconstruction (p=%d, i>=%d)' % (p, first_index))
    M = jordan_block(p).T
    rep.add('M = M_bar + corrections', m_reconstruction(p, first_index) == M)
    return rep


def random_conjugator(n: int, rng, entries: Sequence[int] = (-2, -1, 0, 1, 2)) -> ExactMatrix:
    """
    Random invertible integer matrix, drawn with a numpy Generator until it
    has full rank.
    """
    entries = list(entries)
    while True:
        rows = rng.choice(entries, size=(n, n)).tolist()
        P = ExactMatrix.from_rows(rows)
        if P.rank() == n:
            return P


def h_bar_weights(spec: NilpotentSpec) -> List[int]:
    """
    Diagonal of h_bar in Jordan frame, as ints. Coordinate j of a block of
    size k has weight 2j - 1 - k.
    """
    return [2 * j - 1 - k for k in spec.block_sizes for j in range(1, k + 1)]
