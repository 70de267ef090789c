"""Module with small helpers shared by the whole package."""
import functools
import math
from fractions import Fraction
from typing import List, Optional, Tuple

import attr
import wrapt
from sympy.polys.domains import QQ


class DimensionMismatchError(ValueError):
    """A matrix and a polynomial map disagree about the ambient dimension."""


class DiscrepancyWarning(UserWarning):
    """A computed result differs from a published printed value."""


@attr.s(auto_attribs=True)
class CheckReport:
    """
    Outcome of a verification run. Failing checks are data, not exceptions.
    """
    name: str
    "Name of the identity or property which was checked"
    passed: bool = True
    rows: List[Tuple] = attr.Factory(list)
    "One tuple per checked item, (label, passed, detail)"
    counterexample: Optional[str] = None
    "Description of the first failing item"

    def add(self, label: str, ok: bool, detail: str = ''):
        self.rows.append((label, bool(ok), detail))
        if not ok:
            if self.passed:
                self.counterexample = '%s %s' % (label, detail)
            self.passed = False
        return ok

    def merge(self, other: 'CheckReport'):
        """Adds the rows of another report, prefixed by its name."""
        for label, ok, detail in other.rows:
            self.add('%s: %s' % (other.name, label), ok, detail)
        return self

    def __bool__(self):
        return self.passed

    def render(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        lines = ['%s: %s' % (self.name, status)]
        if self.rows:
            width = max(len(r[0]) for r in self.rows)
            for label, ok, detail in self.rows:
                line = '  %s  %s' % (label.ljust(width), 'ok' if ok else 'FAILED')
                if detail:
                    line += '  ' + detail
                lines.append(line.rstrip())
        if self.counterexample:
            lines.append('  first failure: ' + self.counterexample)
        return '\n'.join(lines)

    def to_dict(self) -> dict:
        return {'name': self.name, 'passed': self.passed,
                'rows': [{'label': lab, 'passed': ok, 'detail': d} for lab, ok, d in self.rows],
                'counterexample': self.counterexample}


def binom(n: int, k: int) -> int:
    """
    Binomial coefficient which is zero outside of 0 <= k <= n.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def qbinom(n: int, k: int):
    """Same as `binom`, but returned as an element of QQ."""
    return QQ(binom(n, k))


def qfactorial(n: int):
    return QQ(math.factorial(n))


def to_scalar(value):
    """
    Converts ints, fractions, rational strings and QQ elements into QQ.

    Parameters
    ----------
    value : int, str, Fraction or QQ element
        Strings must have the form "p" or "p/q".

    Returns
    -------
    QQ element
    """
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if QQ.of_type(value):
        return value
    if hasattr(value, '__index__'):
        return QQ(int(value))
    raise TypeError("can not convert %r to an exact rational" % (value,))


def parse_rational(text: str):
    """
    Parses "p/q" or "p" into an element of QQ.

    Raises
    ------
    ValueError
        If the text is not a rational number or the denominator is zero.
    """
    try:
        frac = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError("not a rational number: %r" % text) from e
    if '.' in text or 'e' in text.lower():
        raise ValueError("decimal notation is not allowed: %r" % text)
    return QQ(frac.numerator, frac.denominator)


def format_rational(q) -> str:
    """Prints a rational as "p/q", or "p" for integers."""
    q = to_scalar(q)
    num, den = int(q.numerator), int(q.denominator)
    if den == 1:
        return str(num)
    return '%d/%d' % (num, den)


def check_dims(wrapped=None, *, matrix_arg: int = 0, poly_arg: int = 1):
    """
    Decorator which checks that a square matrix argument acts on the
    dimension of a `VectorPoly` argument. Both must be passed positionally.
    """
    if wrapped is None:
        return functools.partial(check_dims, matrix_arg=matrix_arg, poly_arg=poly_arg)

    @wrapt.decorator
    def wrapper(wrapped, instance, args, kwargs):
        A, phi = args[matrix_arg], args[poly_arg]
        if A.shape != (phi.n, phi.n):
            raise DimensionMismatchError(
                "%s: matrix of shape %s applied to a map of dimension %d" %
                (wrapped.__name__, A.shape, phi.n))
        return wrapped(*args, **kwargs)

    return wrapper(wrapped)
