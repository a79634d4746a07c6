"""Series, classification predicates and the invariants z1, z2.

Every routine here works on numeric algebras only; parametric input raises
:class:`ParametricInput`.  Subspaces are canonical reduced echelon bases, so
termination of a series is detected by plain equality.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .errors import InvalidTriple, NotAdapted, NotFiliform, SearchFailed
from .liealg import BasisChange, LieAlgebra, bracket_values, change_basis
from .linalg import Subspace, nullspace


@dataclass(frozen=True, order=True)
class Triple:
    """Invariant signature (z1, z2, n) of a non-model filiform algebra."""

    z1: int
    z2: int
    n: int

    @property
    def valid(self) -> bool:
        return 4 <= self.z1 <= self.z2 < self.n <= 2 * self.z2 - 2

    def check(self) -> "Triple":
        if not self.valid:
            raise InvalidTriple(f"{self} violates 4 <= z1 <= z2 < n <= 2*z2 - 2")
        return self

    def __str__(self):
        return f"({self.z1},{self.z2},{self.n})"


def bound_holds(z1: int, z2: int, n: int) -> bool:
    return Triple(z1, z2, n).valid


def _unit(n: int, h: int) -> List[Fraction]:
    v = [Fraction(0)] * n
    v[h - 1] = Fraction(1)
    return v


def whole(g: LieAlgebra) -> Subspace:
    return Subspace.whole(g.n)


def bracket_span(g: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    """The subspace [a, b] spanned by brackets of basis vectors."""
    g.require_numeric()
    vecs = []
    for u in a.basis:
        for v in b.basis:
            w = bracket_values(g, u, v)
            if any(w):
                vecs.append(w)
    return Subspace(g.n, vecs)


def lower_central_series(g: LieAlgebra) -> List[Subspace]:
    """[C^1, C^2, ...], stopping before the first repeated term."""
    g.require_numeric()
    g_all = whole(g)
    series = [g_all]
    while True:
        nxt = bracket_span(g, series[-1], g_all)
        if nxt == series[-1]:
            return series
        series.append(nxt)


def derived_series(g: LieAlgebra) -> List[Subspace]:
    """[D^0, D^1, ...], stopping before the first repeated term."""
    g.require_numeric()
    series = [whole(g)]
    while True:
        nxt = bracket_span(g, series[-1], series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def derived_length(g: LieAlgebra) -> Optional[int]:
    ds = derived_series(g)
    return len(ds) - 1 if ds[-1].dim == 0 else None


def nilindex(g: LieAlgebra) -> Optional[int]:
    lcs = lower_central_series(g)
    if lcs[-1].dim:
        return None
    # lcs[k-1] is C^k; the zero algebra already has C^1 = 0
    return len(lcs)


def is_abelian(g: LieAlgebra, sub: Subspace | None = None) -> bool:
    sub = whole(g) if sub is None else sub
    return bracket_span(g, sub, sub).dim == 0


def centralizer(g: LieAlgebra, sub: Subspace) -> Subspace:
    """{x in g : [x, sub] = 0}, as the kernel of the stacked maps ad(h)."""
    g.require_numeric()
    n = g.n
    rows = []
    for h in sub.basis:
        # column a of x -> [x, h] is [e_a, h]
        cols = [bracket_values(g, _unit(n, a), h) for a in range(1, n + 1)]
        rows.extend([cols[a][t] for a in range(n)] for t in range(n))
    if not rows:
        return whole(g)
    return Subspace(n, nullspace(rows, n))


def is_filiform(g: LieAlgebra, lcs: Sequence[Subspace] | None = None) -> bool:
    n = g.n
    lcs = lower_central_series(g) if lcs is None else lcs
    dims = [s.dim for s in lcs]
    for k in range(2, n + 1):
        dk = dims[k - 1] if k - 1 < len(dims) else dims[-1]
        if dk != n - k:
            return False
    return True


def is_model(g: LieAlgebra, lcs: Sequence[Subspace] | None = None) -> Optional[bool]:
    """Model test for filiform algebras; None when g is not filiform.

    A filiform algebra is the model one exactly when it has an abelian ideal
    of codimension one.  Such an ideal contains C^2, so it exists iff the
    centralizer of C^2 contains C^2 and has codimension at most one.
    """
    lcs = lower_central_series(g) if lcs is None else lcs
    if not is_filiform(g, lcs):
        return None
    n = g.n
    if n <= 2:
        return True
    c2 = lcs[1] if len(lcs) > 1 else Subspace.zero(n)
    cent = centralizer(g, c2)
    return c2.issubspace(cent) and cent.dim >= n - 1


def lcs_term(lcs: Sequence[Subspace], k: int, n: int) -> Subspace:
    """C^k from a truncated series (terms past the end repeat the last)."""
    if k <= 0:
        raise ValueError("series index starts at 1")
    return lcs[k - 1] if k - 1 < len(lcs) else lcs[-1]


def containment_failures(g: LieAlgebra) -> List[str]:
    """Check [C^k, C^l] <= C^{k+l} and, when nilpotent, D^k <= C^{2^k}.

    Returns a description of each failed containment; empty means both hold.
    """
    n = g.n
    lcs = lower_central_series(g)
    failures = []
    depth = len(lcs) + 1
    for k in range(1, depth + 1):
        for l in range(k, depth + 1 - k + 1):
            br = bracket_span(g, lcs_term(lcs, k, n), lcs_term(lcs, l, n))
            if not br.issubspace(lcs_term(lcs, k + l, n)):
                failures.append(f"[C^{k}, C^{l}] not in C^{k + l}")
    if lcs[-1].dim == 0:
        for k, d in enumerate(derived_series(g)):
            if not d.issubspace(lcs_term(lcs, 2 ** k, n)):
                failures.append(f"D^{k} not in C^{2 ** k}")
    return failures


# -- adapted bases ---------------------------------------------------------


@dataclass
class AdaptedCheck:
    ok: bool
    failures: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_adapted(g: LieAlgebra) -> AdaptedCheck:
    """Check [e1,e_h] = e_{h-1} (h >= 3), [e2, .] = 0, [e3, e_h] = 0 (h >= 2)."""
    g.require_numeric()
    n = g.n
    t = g.numeric_table()
    failures = []
    for h in range(3, n + 1):
        if t.get((1, h), {}) != {h - 1: 1}:
            failures.append(f"[e1, e{h}] != e{h - 1}")
    if n >= 2:
        for h in range(1, n + 1):
            if t.get((2, h)):
                failures.append(f"[e2, e{h}] != 0")
    if n >= 3:
        for h in range(2, n + 1):
            if t.get((3, h)):
                failures.append(f"[e3, e{h}] != 0")
    return AdaptedCheck(not failures, failures)


def coroderivada_holds(g: LieAlgebra, lcs: Sequence[Subspace] | None = None) -> bool:
    """C^k = <e2, ..., e_{n-k+1}> for 2 <= k <= n."""
    n = g.n
    lcs = lower_central_series(g) if lcs is None else lcs
    for k in range(2, n + 1):
        expected = Subspace.span_of_basis(n, range(2, n - k + 2))
        if lcs_term(lcs, k, n) != expected:
            return False
    return True


def _e1_candidates(n: int):
    """Standard basis vectors, then a*e_i + b*e_j with a, b in -2..2."""
    for i in range(n):
        yield tuple(Fraction(int(k == i)) for k in range(n))
    for i in range(n):
        for j in range(i + 1, n):
            for a, b in product((1, 2, -1, -2), repeat=2):
                v = [Fraction(0)] * n
                v[i], v[j] = Fraction(a), Fraction(b)
                yield tuple(v)


def _chain(g: LieAlgebra, e1, top, length: int):
    """[top, ad(e1) top, ad(e1)^2 top, ...] with ``length`` entries."""
    out = [list(top)]
    for _ in range(length - 1):
        out.append(bracket_values(g, list(e1), out[-1]))
    return out


def construct_adapted(g: LieAlgebra) -> BasisChange:
    """Find a basis change taking a filiform algebra to an adapted basis.

    With g1 = C_g(C^{n-2} g), any e1 outside g1 and any e_n in g1 but not in
    C^2 g give [e2, .] = 0 and [e3, e_h] = 0 automatically once the chain
    e_{h-1} = [e1, e_h] spans; only e1 has to be searched for.  The search
    runs over :func:`_e1_candidates` and raises SearchFailed if none works.
    """
    g.require_numeric()
    lcs = lower_central_series(g)
    if not is_filiform(g, lcs):
        raise NotFiliform("algebra is not filiform")
    n = g.n
    if n <= 2:
        return BasisChange.identity(n)
    c2 = lcs_term(lcs, 2, n)
    if n >= 4:
        g1 = centralizer(g, lcs_term(lcs, n - 2, n))
        tops = [r for r in g1.basis if not c2.contains(r)][:1]
    else:
        g1 = None
        tops = [tuple(_unit(n, h)) for h in range(1, n + 1) if not c2.contains(_unit(n, h))]
    for e1 in _e1_candidates(n):
        if g1 is not None and g1.contains(e1):
            continue
        for top in tops:
            chain = _chain(g, e1, top, n - 1)  # e_n, e_{n-1}, ..., e_2
            columns = [list(e1)] + list(reversed(chain))
            if Subspace(n, columns).dim < n:
                continue
            m = BasisChange.from_columns(columns)
            if verify_adapted(change_basis(g, m)):
                return m
    raise SearchFailed("no adapted basis found in the candidate space")


# -- invariants ------------------------------------------------------------


class ModelFlag:
    """Returned by :func:`invariants_z` for model filiform algebras."""

    def __repr__(self):
        return "MODEL"

    def __bool__(self):
        return False


MODEL = ModelFlag()


def practical_z(g: LieAlgebra) -> Optional[Tuple[int, int]]:
    """(min{k>=4: [e_k,e_n] != 0}, min{k>=4: [e_k,e_{k+1}] != 0}) in the given basis.

    Only meaningful on an adapted basis.  None if either set is empty.
    """
    t = g.numeric_table()
    n = g.n
    z1 = next((k for k in range(4, n) if t.get((k, n))), None)
    z2 = next((k for k in range(4, n) if t.get((k, k + 1))), None)
    if z1 is None or z2 is None:
        return None
    return z1, z2


def definitional_z(g: LieAlgebra, lcs: Sequence[Subspace] | None = None) -> Tuple[int, int]:
    """Basis-free invariants of a filiform algebra (n >= 4).

    z2 = max{k : C^{n-k+1} abelian}.  z1 = max{k : C^{n-k+2} centralizes g1},
    with g1 = C_g(C^{n-2} g) the characteristic codimension-one ideal; on an
    adapted basis g1 = <e2, ..., e_n>.
    """
    n = g.n
    lcs = lower_central_series(g) if lcs is None else lcs
    z2 = max(k for k in range(1, n + 1) if is_abelian(g, lcs_term(lcs, n - k + 1, n)))
    g1 = centralizer(g, lcs_term(lcs, n - 2, n))
    z1 = max(k for k in range(2, n + 2) if g1.issubspace(centralizer(g, lcs_term(lcs, n - k + 2, n))))
    return z1, z2


def literal_z1(g: LieAlgebra, lcs: Sequence[Subspace] | None = None) -> int:
    """max{k : C_g(C^{n-k+2} g) contains C^2 g}, read literally.

    Differs from the practical z1 when [e_{z1}, e_n] lies in <e2>; kept as a
    diagnostic only.
    """
    n = g.n
    lcs = lower_central_series(g) if lcs is None else lcs
    c2 = lcs_term(lcs, 2, n)
    return max(k for k in range(2, n + 2) if c2.issubspace(centralizer(g, lcs_term(lcs, n - k + 2, n))))


@dataclass
class ZInvariants:
    z1: int
    z2: int
    definitional: Tuple[int, int]
    practical: Optional[Tuple[int, int]]
    basis_change: Optional[BasisChange] = None

    @property
    def consistent(self) -> bool:
        return self.practical is None or self.practical == self.definitional


def invariants_z(g: LieAlgebra, assume_adapted: bool = False):
    """z1 and z2 of a non-model filiform algebra, or MODEL.

    With ``assume_adapted`` the given basis must satisfy the adapted
    relations; otherwise an adapted basis is constructed first.  Both the
    practical and the definitional values are reported.
    """
    g.require_numeric()
    lcs = lower_central_series(g)
    if not is_filiform(g, lcs):
        raise NotFiliform("algebra is not filiform")
    if is_model(g, lcs):
        return MODEL
    m = None
    if assume_adapted:
        check = verify_adapted(g)
        if not check:
            raise NotAdapted("; ".join(check.failures))
        adapted = g
    else:
        m = construct_adapted(g)
        adapted = change_basis(g, m)
    practical = practical_z(adapted)
    definitional = definitional_z(g, lcs)
    z1, z2 = practical if practical is not None else definitional
    return ZInvariants(z1, z2, definitional, practical, m)


# -- report ---------------------------------------------------------------


@dataclass
class SeriesReport:
    n: int
    lcs_dims: List[int]
    ds_dims: List[int]
    nilpotent: bool
    nilindex: Optional[int]
    solvable: bool
    derived_length: Optional[int]
    abelian: bool
    filiform: bool
    model: Optional[bool]
    z1: Optional[int] = None
    z2: Optional[int] = None
    z_definitional: Optional[Tuple[int, int]] = None

    def as_dict(self) -> dict:
        return {
            "dim": self.n,
            "lcs_dims": self.lcs_dims,
            "ds_dims": self.ds_dims,
            "nilpotent": self.nilpotent,
            "nilindex": self.nilindex,
            "solvable": self.solvable,
            "derived_length": self.derived_length,
            "abelian": self.abelian,
            "filiform": self.filiform,
            "model": "n/a" if self.model is None else self.model,
            "z1": self.z1,
            "z2": self.z2,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        d = self.as_dict()
        width = max(map(len, d))
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in d.items())


def classify(g: LieAlgebra, with_invariants: bool = True) -> SeriesReport:
    g.require_numeric()
    lcs = lower_central_series(g)
    ds = derived_series(g)
    nil = lcs[-1].dim == 0
    solv = ds[-1].dim == 0
    fil = is_filiform(g, lcs)
    model = is_model(g, lcs) if fil else None
    report = SeriesReport(
        n=g.n,
        lcs_dims=[s.dim for s in lcs],
        ds_dims=[s.dim for s in ds],
        nilpotent=nil,
        nilindex=len(lcs) if nil else None,
        solvable=solv,
        derived_length=len(ds) - 1 if solv else None,
        abelian=is_abelian(g),
        filiform=fil,
        model=model,
    )
    if with_invariants and fil and not model:
        inv = invariants_z(g)
        report.z1, report.z2 = inv.z1, inv.z2
        report.z_definitional = inv.definitional
    return report
