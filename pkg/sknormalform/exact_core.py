"""Exact rational matrices and the canonical linear algebra built on them."""
from typing import Dict, List, Sequence, Tuple

import attr
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .utils import format_rational, to_scalar

Vector = Tuple

ZERO = QQ(0)
ONE = QQ(1)


class InconsistentSystemError(ValueError):
    """The right-hand side does not lie in the column space."""


@attr.s(auto_attribs=True, frozen=True, eq=False, repr=False)
class ExactMatrix:
    """
    Exact rational matrix.

    Thin value wrapper around a sparse sympy `DomainMatrix` over QQ. All
    arithmetic stays sparse and exact, equality is entry-wise.
    """
    rep: DomainMatrix
    "Sparse DomainMatrix over QQ"

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> 'ExactMatrix':
        """Builds a matrix from nested rows of ints, strings or rationals."""
        rows = [list(r) for r in rows]
        m = len(rows)
        ncols = len(rows[0]) if m else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("rows of unequal length")
        dok = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = to_scalar(v)
                if v:
                    dok[i, j] = v
        return cls.from_dok(dok, (m, ncols))

    @classmethod
    def from_dok(cls, dok: Dict[Tuple[int, int], object], shape) -> 'ExactMatrix':
        dok = {k: v for k, v in dok.items() if v}
        return cls(DomainMatrix.from_dok(dok, tuple(shape), QQ))

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], rows: int) -> 'ExactMatrix':
        dok = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    dok[i, j] = v
        return cls.from_dok(dok, (rows, len(columns)))

    @classmethod
    def zeros(cls, rows: int, cols: int = None) -> 'ExactMatrix':
        cols = rows if cols is None else cols
        return cls(DomainMatrix.zeros((rows, cols), QQ))

    @classmethod
    def identity(cls, n: int) -> 'ExactMatrix':
        return cls(DomainMatrix.eye(n, QQ))

    @classmethod
    def diag(cls, entries: Sequence) -> 'ExactMatrix':
        n = len(entries)
        return cls.from_dok({(i, i): to_scalar(v) for i, v in enumerate(entries)}, (n, n))

    @classmethod
    def block_diag(cls, blocks: Sequence['ExactMatrix']) -> 'ExactMatrix':
        dok = {}
        r0 = c0 = 0
        for b in blocks:
            for (i, j), v in b.to_dok().items():
                dok[r0 + i, c0 + j] = v
            r0 += b.shape[0]
            c0 += b.shape[1]
        return cls.from_dok(dok, (r0, c0))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rep.shape

    @property
    def rows(self) -> int:
        return self.rep.shape[0]

    @property
    def cols(self) -> int:
        return self.rep.shape[1]

    def to_dok(self) -> Dict[Tuple[int, int], object]:
        return {k: v for k, v in self.rep.to_dok().items() if v}

    def __getitem__(self, key):
        i, j = key
        m, n = self.shape
        if not (0 <= i < m and 0 <= j < n):
            raise IndexError("index %s out of range for shape %s" % (key, self.shape))
        return self.rep.rep.getitem(i, j)

    def _other(self, other: 'ExactMatrix', op: str) -> DomainMatrix:
        if not isinstance(other, ExactMatrix):
            raise TypeError("unsupported operand for %s: %r" % (op, type(other)))
        if other.shape != self.shape and op != '@':
            raise ValueError("shape mismatch: %s %s %s" % (self.shape, op, other.shape))
        return other.rep

    def __add__(self, other):
        return ExactMatrix(self.rep.add(self._other(other, '+')))

    def __sub__(self, other):
        return ExactMatrix(self.rep.sub(self._other(other, '-')))

    def __neg__(self):
        return ExactMatrix(self.rep.neg())

    def __matmul__(self, other):
        b = self._other(other, '@')
        if self.cols != other.rows:
            raise ValueError("shape mismatch: %s @ %s" % (self.shape, other.shape))
        return ExactMatrix(self.rep.matmul(b))

    def scale(self, c) -> 'ExactMatrix':
        return ExactMatrix(self.rep.scalarmul(to_scalar(c)))

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> 'ExactMatrix':
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inv() ** (-k)
        result = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.to_dok() == other.to_dok()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def transpose(self) -> 'ExactMatrix':
        return ExactMatrix(self.rep.transpose())

    @property
    def T(self) -> 'ExactMatrix':
        return self.transpose()

    def is_zero(self) -> bool:
        return not self.to_dok()

    def is_diagonal(self) -> bool:
        return all(i == j for (i, j) in self.to_dok())

    def diagonal(self) -> List:
        return [self[i, i] for i in range(min(self.shape))]

    def trace(self):
        return sum(self.diagonal(), ZERO)

    def rank(self) -> int:
        return len(rref(self)[1])

    def inv(self) -> 'ExactMatrix':
        if self.rows != self.cols or self.rank() != self.rows:
            raise ValueError("matrix is not invertible")
        return ExactMatrix(self.rep.inv())

    def column(self, j: int) -> Vector:
        return tuple(self[i, j] for i in range(self.rows))

    def columns(self) -> List[Vector]:
        cols = [[ZERO] * self.rows for _ in range(self.cols)]
        for (i, j), v in self.to_dok().items():
            cols[j][i] = v
        return [tuple(c) for c in cols]

    def apply(self, v: Sequence) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError("vector of length %d for shape %s" % (len(v), self.shape))
        out = [ZERO] * self.rows
        for (i, j), a in self.to_dok().items():
            if v[j]:
                out[i] += a * v[j]
        return tuple(out)

    def hstack(self, *others: 'ExactMatrix') -> 'ExactMatrix':
        return ExactMatrix(self.rep.hstack(*[o.rep for o in others]))

    def to_lists(self) -> List[List]:
        rows = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.to_dok().items():
            rows[i][j] = v
        return rows

    def to_strings(self) -> List[List[str]]:
        return [[format_rational(v) for v in row] for row in self.to_lists()]

    def __str__(self):
        cells = self.to_strings()
        if not cells or not cells[0]:
            return '[]'
        width = max(len(c) for row in cells for c in row)
        return '\n'.join('[' + ' '.join(c.rjust(width) for c in row) + ']' for row in cells)

    def __repr__(self):
        return 'ExactMatrix(%s)' % self.to_strings()


def commutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Returns [a, b] = ab - ba."""
    return a @ b - b @ a


def rref(m: ExactMatrix) -> Tuple[ExactMatrix, List[int]]:
    """
    Reduced row echelon form.

    Parameters
    ----------
    m : ExactMatrix

    Returns
    -------
    (ExactMatrix, list of int)
        The unique RREF of `m` and the pivot columns in ascending order.
    """
    if m.rows == 0 or m.cols == 0:
        return m, []
    r, pivots = m.rep.rref()
    return ExactMatrix(r.to_sparse()), list(pivots)


def nullspace_basis(m: ExactMatrix) -> List[Vector]:
    """
    Canonical nullspace basis read off the RREF.

    There is one vector per free column, in ascending column order. Each
    vector has a 1 in its free column and zeros in the other free columns.
    """
    if m.cols == 0:
        return []
    r, pivots = rref(m)
    if m.rows == 0:
        return [tuple(ONE if i == j else ZERO for i in range(m.cols)) for j in range(m.cols)]
    null = r.rep.nullspace_from_rref(pivots)
    basis = [[ZERO] * m.cols for _ in range(null.shape[0])]
    for (i, j), v in null.to_dok().items():
        basis[i][j] = v
    return [tuple(b) for b in basis]


def solve(m: ExactMatrix, b: Sequence) -> Vector:
    """
    Particular solution of m x = b, with all free variables set to zero.

    Raises
    ------
    InconsistentSystemError
        If `b` is not in the column space of `m`.
    """
    b = [to_scalar(v) for v in b]
    if len(b) != m.rows:
        raise ValueError("right-hand side of length %d for shape %s" % (len(b), m.shape))
    aug = m.hstack(ExactMatrix.from_columns([b], m.rows))
    r, pivots = rref(aug)
    if m.cols in pivots:
        raise InconsistentSystemError("system has no solution")
    x = [ZERO] * m.cols
    for row, col in enumerate(pivots):
        x[col] = r[row, m.cols]
    return tuple(x)


def rank(m: ExactMatrix) -> int:
    return m.rank()
