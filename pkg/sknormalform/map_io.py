"""
Reading and writing polynomial maps as JSON documents.

A map file looks like::

    {"n": 2, "blocks": [2],
     "terms": [{"coeff": "1/2", "exponents": [2, 0], "component": 1}]}

The linear part is implied by `blocks` and the optional `conjugator` (rows
of rational strings). Only terms of degree two and higher are listed.
Unknown top-level fields are ignored.
"""
import json
import pathlib
from typing import List, Tuple, Union

from .nilpotent_algebra import NilpotentSpec, SingularConjugatorError, jordan_matrix
from .polynomial_maps import VectorPoly
from .utils import format_rational, parse_rational


class MapFormatError(ValueError):
    """A map document is malformed."""


def map_to_dict(spec: NilpotentSpec, f: VectorPoly, **extra) -> dict:
    """
    Document of a map, the nonlinear terms of f in canonical order. Extra
    keyword arguments become additional top-level fields.
    """
    if f.n != spec.n:
        raise ValueError("map of dimension %d for spec of dimension %d" % (f.n, spec.n))
    doc = {'n': spec.n, 'blocks': list(spec.block_sizes)}
    if spec.conjugator is not None:
        doc['conjugator'] = spec.conjugator.to_strings()
    doc['terms'] = [{'coeff': format_rational(c), 'exponents': list(m), 'component': comp + 1}
                    for m, comp, c in f.nonlinear().terms()]
    doc.update(extra)
    return doc


def dump_map(spec: NilpotentSpec, f: VectorPoly, fp=None, **extra) -> str:
    """
    Serializes a map to JSON text. If `fp` is a path or an open file the
    text is written there too.
    """
    text = json.dumps(map_to_dict(spec, f, **extra), indent=2) + '\n'
    if fp is None:
        return text
    if hasattr(fp, 'write'):
        fp.write(text)
    else:
        pathlib.Path(fp).write_text(text, encoding='utf-8')
    return text


def _require(doc: dict, key: str):
    if key not in doc:
        raise MapFormatError("missing field %r" % key)
    return doc[key]


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MapFormatError("%s must be an integer, got %r" % (what, value))
    return value


def _rational(value, what: str):
    if isinstance(value, int) and not isinstance(value, bool):
        value = str(value)
    if not isinstance(value, str):
        raise MapFormatError("%s must be a rational string, got %r" % (what, value))
    try:
        return parse_rational(value)
    except ValueError as e:
        raise MapFormatError("%s: %s" % (what, e)) from e


def parse_conjugator(rows, n: int = None) -> List[List]:
    """
    Validates a square array of rational strings (or ints) and returns it
    as rows of QQ. If n is given the array must be n x n.
    """
    if not isinstance(rows, list) or not rows:
        raise MapFormatError("conjugator must be a nonempty list of rows")
    n = len(rows) if n is None else n
    if len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise MapFormatError("conjugator must be an %d x %d array" % (n, n))
    return [[_rational(v, 'conjugator entry') for v in row] for row in rows]


def load_conjugator(path: Union[str, pathlib.Path]) -> List[List]:
    """Reads a conjugator file, a JSON array of rows."""
    try:
        rows = json.loads(pathlib.Path(path).read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise MapFormatError("invalid JSON: %s" % e) from e
    return parse_conjugator(rows)


def map_from_dict(doc: dict) -> Tuple[NilpotentSpec, VectorPoly]:
    """
    Inverse of `map_to_dict`.

    Raises
    ------
    MapFormatError
        For missing or malformed fields, degree-one terms and constant
        terms.
    """
    if not isinstance(doc, dict):
        raise MapFormatError("a map document must be a JSON object")
    n = _int(_require(doc, 'n'), 'n')
    blocks = _require(doc, 'blocks')
    if not isinstance(blocks, list) or not blocks:
        raise MapFormatError("blocks must be a nonempty list")
    blocks = [_int(b, 'block size') for b in blocks]
    if sum(blocks) != n or any(b < 1 for b in blocks):
        raise MapFormatError("block sizes %s do not add up to n = %d" % (blocks, n))
    conjugator = doc.get('conjugator')
    if conjugator is not None:
        conjugator = parse_conjugator(conjugator, n)
    try:
        spec = NilpotentSpec(tuple(blocks), conjugator)
    except SingularConjugatorError as e:
        raise MapFormatError(str(e)) from e
    terms = []
    raw_terms = _require(doc, 'terms')
    if not isinstance(raw_terms, list):
        raise MapFormatError("terms must be a list")
    for t in raw_terms:
        if not isinstance(t, dict):
            raise MapFormatError("every term must be an object")
        coeff = _rational(_require(t, 'coeff'), 'coeff')
        exps = _require(t, 'exponents')
        if not isinstance(exps, list) or len(exps) != n:
            raise MapFormatError("exponents must be a list of %d integers" % n)
        exps = [_int(e, 'exponent') for e in exps]
        if any(e < 0 for e in exps):
            raise MapFormatError("negative exponent in %s" % exps)
        comp = _int(_require(t, 'component'), 'component')
        if not 1 <= comp <= n:
            raise MapFormatError("component %d outside 1..%d" % (comp, n))
        d = sum(exps)
        if d == 0:
            raise MapFormatError("constant terms are not allowed")
        if d == 1:
            raise MapFormatError("degree one terms are not allowed, the linear part "
                                 "is given by blocks and conjugator")
        terms.append((coeff, exps, comp - 1))
    f = VectorPoly.linear(jordan_matrix(spec)) + VectorPoly.from_terms(n, terms)
    return spec, f


def loads_map(text: str) -> Tuple[NilpotentSpec, VectorPoly]:
    """Parses a JSON map document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MapFormatError("invalid JSON: %s" % e) from e
    return map_from_dict(doc)


def load_map(path: Union[str, pathlib.Path]) -> Tuple[NilpotentSpec, VectorPoly]:
    """
    Reads a map file.

    Parameters
    ----------
    path : str or Path

    Returns
    -------
    (NilpotentSpec, VectorPoly)
        The map includes its linear part.
    """
    return loads_map(pathlib.Path(path).read_text(encoding='utf-8'))


def example_map_path(name: str = 'quad2d') -> str:
    """Returns the path of a map file shipped with sknormalform.

    Parameters
    ----------
    name : ('quad2d', 'cubic3d', 'quad23')
        Which example to return.
    """
    import sknormalform
    root = sknormalform.__path__[0] + '/examples/data/'
    file_dict = {
        'quad2d': 'quad2d.json',
        'cubic3d': 'cubic3d.json',
        'quad23': 'quad23.json',
    }
    if name not in file_dict:
        raise ValueError("unknown example %r, choose from %s" % (name, sorted(file_dict)))
    return root + file_dict[name]


def load_example_map(name: str = 'quad2d') -> Tuple[NilpotentSpec, VectorPoly]:
    return load_map(example_map_path(name))
