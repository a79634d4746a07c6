"""Structure-constant Lie algebras with polynomial (or rational) entries.

Basis indices are 1-based throughout, matching the usual e_1, ..., e_n
notation.  Only brackets [e_i, e_j] with i < j are stored; the opposite
order is implied by antisymmetry and absent pairs are zero.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

from .errors import DimensionMismatch, FormatError, IndexOutOfRange, ParametricInput, SingularMatrix
from .exactmath import Polynomial, as_polynomial, parse_polynomial, rational, var_key
from .linalg import determinant, inverse, matmul, matvec

Vector = Tuple[Polynomial, ...]
Sparse = Dict[int, Polynomial]


class LieAlgebra:
    """An n-dimensional algebra given by its structure constants.

    ``table`` maps pairs ``(i, j)`` to ``{h: c_ij^h}``.  Pairs with i > j are
    accepted and folded onto (j, i) with a sign change.  ``parameters``
    defaults to the variables that actually occur in the table.
    """

    def __init__(self, n: int, table: Mapping | None = None, parameters: Sequence[str] | None = None):
        if n < 0:
            raise DimensionMismatch("dimension must be non-negative")
        self.n = n
        clean: Dict[Tuple[int, int], Sparse] = {}
        for (i, j), coeffs in (table or {}).items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise IndexOutOfRange(f"pair ({i}, {j}) outside 1..{n}")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            vec = {}
            for h, c in coeffs.items():
                h = int(h)
                if not 1 <= h <= n:
                    raise IndexOutOfRange(f"basis index {h} outside 1..{n}")
                c = as_polynomial(c)
                if c:
                    vec[h] = c if sign == 1 else -c
            if i == j:
                if vec:
                    raise ValueError(f"[e_{i}, e_{i}] must vanish")
                continue
            if not vec:
                continue
            if (i, j) in clean:
                merged = dict(clean[(i, j)])
                for h, c in vec.items():
                    s = merged.get(h, Polynomial.zero()) + c
                    if s:
                        merged[h] = s
                    else:
                        merged.pop(h, None)
                vec = merged
            if vec:
                clean[(i, j)] = vec
            else:
                clean.pop((i, j), None)
        self._table = dict(sorted(clean.items()))
        used = set()
        for vec in self._table.values():
            for c in vec.values():
                used.update(c.variables)
        if parameters is None:
            params = tuple(sorted(used, key=var_key))
        else:
            params = tuple(parameters)
            if len(set(params)) != len(params):
                raise ValueError("duplicate parameter names")
            missing = used - set(params)
            if missing:
                raise ValueError(f"undeclared parameters: {sorted(missing, key=var_key)}")
        self.parameters = params
        self._full = None
        self._numeric = None

    # -- access ----------------------------------------------------------

    @property
    def table(self) -> Dict[Tuple[int, int], Sparse]:
        return {k: dict(v) for k, v in self._table.items()}

    def pairs(self) -> Iterator[Tuple[Tuple[int, int], Sparse]]:
        for k, v in self._table.items():
            yield k, dict(v)

    @property
    def is_numeric(self) -> bool:
        return not self.parameters and all(c.is_constant() for v in self._table.values() for c in v.values())

    def require_numeric(self):
        if not self.is_numeric:
            raise ParametricInput("operation needs a numeric algebra; specialize the parameters first")

    def _full_table(self) -> Dict[Tuple[int, int], Sparse]:
        if self._full is None:
            full = {}
            for (i, j), vec in self._table.items():
                full[(i, j)] = vec
                full[(j, i)] = {h: -c for h, c in vec.items()}
            self._full = full
        return self._full

    def numeric_table(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        """Both-order table with Fraction entries (numeric algebras only)."""
        if self._numeric is None:
            self.require_numeric()
            self._numeric = {k: {h: c.constant_value() for h, c in v.items()} for k, v in self._full_table().items()}
        return self._numeric

    def bracket_basis(self, i: int, j: int) -> Sparse:
        self._check_index(i)
        self._check_index(j)
        return dict(self._full_table().get((i, j), {}))

    def _check_index(self, i: int):
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"index {i} outside 1..{self.n}")

    def structure_constant(self, i: int, j: int, h: int) -> Polynomial:
        return self.bracket_basis(i, j).get(h, Polynomial.zero())

    # -- derived algebras ------------------------------------------------

    def specialize(self, assignment: Mapping[str, object]) -> "LieAlgebra":
        """Substitute values (Rationals or Polynomials) for some parameters."""
        subs = {k: as_polynomial(v) for k, v in assignment.items()}
        table = {k: {h: c.substitute(subs) for h, c in v.items()} for k, v in self._table.items()}
        introduced = {x for p in subs.values() for x in p.variables}
        names = {p for p in self.parameters if p not in subs} | introduced
        return LieAlgebra(self.n, table, sorted(names, key=var_key))

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.n == other.n and self._table == other._table

    def __hash__(self):
        return hash((self.n, tuple((k, tuple(sorted(v.items()))) for k, v in self._table.items())))

    def __repr__(self):
        kind = "numeric" if self.is_numeric else f"{len(self.parameters)} parameters"
        return f"LieAlgebra(n={self.n}, {len(self._table)} nonzero brackets, {kind})"

    def describe(self) -> str:
        lines = []
        for (i, j), vec in self._table.items():
            rhs = " + ".join(_fmt_coeff(c) + f"e{h}" for h, c in sorted(vec.items(), reverse=True))
            lines.append(f"[e{i}, e{j}] = {rhs}")
        return "\n".join(lines)


def _fmt_coeff(c: Polynomial) -> str:
    if c == 1:
        return ""
    if len(c) == 1:
        return f"{c}*"
    return f"({c})*"


def model_algebra(n: int) -> LieAlgebra:
    """The model filiform law [e_1, e_h] = e_{h-1} for 3 <= h <= n."""
    return LieAlgebra(n, {(1, h): {h - 1: 1} for h in range(3, n + 1)})


def basis_vector(n: int, h: int) -> Vector:
    if not 1 <= h <= n:
        raise IndexOutOfRange(f"index {h} outside 1..{n}")
    return tuple(Polynomial.const(int(k == h)) for k in range(1, n + 1))


def vector(values: Sequence) -> Vector:
    return tuple(as_polynomial(v) for v in values)


def _to_sparse(u: Sequence) -> Dict[int, Polynomial]:
    return {h: c for h, c in ((k + 1, as_polynomial(x)) for k, x in enumerate(u)) if c}


def _to_dense(sparse: Mapping[int, Polynomial], n: int) -> Vector:
    zero = Polynomial.zero()
    return tuple(sparse.get(h, zero) for h in range(1, n + 1))


def bracket(g: LieAlgebra, u: Sequence, v: Sequence) -> Vector:
    """Bilinear extension of the law to arbitrary (polynomial) vectors."""
    if len(u) != g.n or len(v) != g.n:
        raise DimensionMismatch(f"vectors must have length {g.n}")
    su, sv = _to_sparse(u), _to_sparse(v)
    acc: Dict[int, Polynomial] = {}
    for (i, j), vec in g._table.items():
        w = su.get(i, 0) * sv.get(j, 0) - su.get(j, 0) * sv.get(i, 0) if (i in su or j in su) else 0
        if not w:
            continue
        for h, c in vec.items():
            acc[h] = acc.get(h, 0) + w * c
    return _to_dense({h: c for h, c in acc.items() if c}, g.n)


def bracket_values(g: LieAlgebra, u: Sequence[Fraction], v: Sequence[Fraction]) -> List[Fraction]:
    """Numeric bracket on Fraction coordinate lists."""
    table = g.numeric_table()
    out = [Fraction(0)] * g.n
    nz_u = [(i + 1, x) for i, x in enumerate(u) if x]
    nz_v = [(j + 1, y) for j, y in enumerate(v) if y]
    for i, x in nz_u:
        for j, y in nz_v:
            vec = table.get((i, j))
            if vec:
                w = x * y
                for h, c in vec.items():
                    out[h - 1] += w * c
    return out


def _jacobiator_sparse(full, i: int, j: int, k: int) -> dict:
    acc = {}
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        inner = full.get((a, b))
        if not inner:
            continue
        for h, x in inner.items():
            outer = full.get((h, c))
            if outer:
                for t, y in outer.items():
                    acc[t] = acc.get(t, 0) + x * y
    return {t: v for t, v in acc.items() if v}


def jacobiator(g: LieAlgebra, i: int, j: int, k: int) -> Vector:
    """[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]."""
    for x in (i, j, k):
        g._check_index(x)
    if not i < j < k:
        raise IndexOutOfRange(f"need i < j < k, got ({i}, {j}, {k})")
    return _to_dense(_jacobiator_sparse(g._full_table(), i, j, k), g.n)


def jacobiator_coordinate(g: LieAlgebra, i: int, j: int, k: int, h: int) -> Polynomial:
    """Coordinate h of the jacobiator, for any distinct ordering of i, j, k.

    The jacobiator is alternating, so an odd permutation of (i, j, k) flips
    the sign; this is applied here.
    """
    if len({i, j, k}) < 3:
        return Polynomial.zero()
    order = sorted((i, j, k))
    perm = [order.index(x) for x in (i, j, k)]
    inversions = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
    value = jacobiator(g, *order)[h - 1]
    return -value if inversions % 2 else value


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    k: int
    coords: Dict[int, Polynomial]

    def as_dict(self):
        return {"i": self.i, "j": self.j, "k": self.k, "coords": {str(h): str(c) for h, c in sorted(self.coords.items())}}


def _triples_touching(g: LieAlgebra):
    """Triples i < j < k whose jacobiator can be nonzero.

    A term [[e_a,e_b],e_c] needs [e_a, e_b] != 0, so at least one of the
    three pairs must be a stored bracket.
    """
    n = g.n
    active = set(g._table)
    for (a, b) in sorted(active):
        for c in range(1, n + 1):
            if c != a and c != b:
                yield tuple(sorted((a, b, c)))


def jacobi_violations(g: LieAlgebra, stop_at_first: bool = False) -> List[Violation]:
    full = g.numeric_table() if g.is_numeric else g._full_table()
    seen = set()
    out = []
    for t in sorted(set(_triples_touching(g))):
        if t in seen:
            continue
        seen.add(t)
        acc = _jacobiator_sparse(full, *t)
        if acc:
            coords = {h: as_polynomial(c) for h, c in sorted(acc.items())}
            out.append(Violation(t[0], t[1], t[2], coords))
            if stop_at_first:
                break
    return out


def jacobi_check(g: LieAlgebra) -> List[Violation]:
    """All nonzero jacobiators, in lexicographic (i, j, k) order."""
    return jacobi_violations(g)


def is_lie(g: LieAlgebra) -> bool:
    return not jacobi_violations(g, stop_at_first=True)


def coord(u: Sequence, h: int) -> Polynomial:
    """The coordinate of u along e_h."""
    if not 1 <= h <= len(u):
        raise IndexOutOfRange(f"index {h} outside 1..{len(u)}")
    return as_polynomial(u[h - 1])


def bracket_coord(g: LieAlgebra, i: int, j: int, h: int) -> Polynomial:
    """P_h([e_i, e_j])."""
    return g.bracket_basis(i, j).get(h, Polynomial.zero())


class BasisChange:
    """Invertible rational matrix whose columns are the new basis vectors
    written in old coordinates."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Sequence[Sequence]):
        rows = tuple(tuple(rational(x) for x in r) for r in matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("basis change must be square")
        if n and determinant(rows) == 0:
            raise SingularMatrix("basis change matrix is singular")
        self.matrix = rows

    @classmethod
    def identity(cls, n: int) -> "BasisChange":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "BasisChange":
        n = len(columns)
        return cls([[columns[j][i] for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "BasisChange":
        """New e_k is old e_{images[k-1]} (1-based images)."""
        n = len(images)
        return cls.from_columns([[int(i + 1 == images[k]) for i in range(n)] for k in range(n)])

    @property
    def n(self) -> int:
        return len(self.matrix)

    def column(self, j: int) -> List[Fraction]:
        return [row[j] for row in self.matrix]

    def inverse(self) -> "BasisChange":
        return BasisChange(inverse(self.matrix))

    def __matmul__(self, other: "BasisChange") -> "BasisChange":
        return BasisChange(matmul(self.matrix, other.matrix))

    def __eq__(self, other):
        return isinstance(other, BasisChange) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"BasisChange(n={self.n})"

    def as_lists(self) -> List[List[str]]:
        return [[str(x) for x in r] for r in self.matrix]


def change_basis(g: LieAlgebra, m: BasisChange) -> LieAlgebra:
    """Rewrite a numeric algebra in the basis given by the columns of m.

    Composition: change_basis(g, N @ M) == change_basis(change_basis(g, N), M).
    """
    g.require_numeric()
    if m.n != g.n:
        raise DimensionMismatch(f"basis change of size {m.n} for algebra of dimension {g.n}")
    n = g.n
    inv = inverse(m.matrix)
    cols = [m.column(j) for j in range(n)]
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            w = bracket_values(g, cols[i], cols[j])
            if any(w):
                new = matvec(inv, w)
                table[(i + 1, j + 1)] = {h + 1: c for h, c in enumerate(new) if c}
    return LieAlgebra(n, table)


# -- file format ---------------------------------------------------------

_TOP_KEYS = {"dim", "parameters", "brackets"}
_BRACKET_KEYS = {"i", "j", "coeffs"}


def algebra_to_dict(g: LieAlgebra) -> dict:
    return {
        "dim": g.n,
        "parameters": list(g.parameters),
        "brackets": [
            {"i": i, "j": j, "coeffs": {str(h): str(c) for h, c in sorted(vec.items())}}
            for (i, j), vec in g._table.items()
        ],
    }


def algebra_from_dict(data: Mapping) -> LieAlgebra:
    if not isinstance(data, Mapping):
        raise FormatError("algebra file must hold a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise FormatError(f"unknown keys: {sorted(unknown)}")
    if "dim" not in data:
        raise FormatError("missing 'dim'")
    n = data["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError("'dim' must be a positive integer")
    params = data.get("parameters", [])
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise FormatError("'parameters' must be a list of names")
    table: Dict[Tuple[int, int], Dict[int, Polynomial]] = {}
    for entry in data.get("brackets", []):
        if not isinstance(entry, Mapping):
            raise FormatError("bracket entries must be objects")
        unknown = set(entry) - _BRACKET_KEYS
        if unknown:
            raise FormatError(f"unknown bracket keys: {sorted(unknown)}")
        try:
            i, j, coeffs = entry["i"], entry["j"], entry["coeffs"]
        except KeyError as exc:
            raise FormatError(f"bracket entry missing {exc}") from None
        if not (isinstance(i, int) and isinstance(j, int)) or not i < j:
            raise FormatError(f"bracket pair must satisfy i < j, got ({i}, {j})")
        if (i, j) in table:
            raise FormatError(f"duplicate bracket ({i}, {j})")
        if not isinstance(coeffs, Mapping):
            raise FormatError("'coeffs' must be an object")
        vec = {}
        for h, text in coeffs.items():
            try:
                hh = int(h)
            except ValueError:
                raise FormatError(f"bad basis index {h!r}") from None
            if not isinstance(text, str):
                raise FormatError("coefficients must be strings")
            vec[hh] = parse_polynomial(text)
        table[(i, j)] = vec
    try:
        return LieAlgebra(n, table, params)
    except (ValueError, IndexError) as exc:
        raise FormatError(str(exc)) from exc


def dumps_algebra(g: LieAlgebra) -> str:
    return json.dumps(algebra_to_dict(g), indent=2)


def loads_algebra(text: str) -> LieAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return algebra_from_dict(data)
