"""Parametric filiform laws.

Parameters are named ``a_i`` (alpha_i), ``g_j`` (gamma_j), ``b_k_l``
(beta_{k,l}) and ``l_r`` (lambda_r).  For a triple (z1, z2, n) the index
ranges are

* alpha_i, 1 <= i <= z2 - z1 + 1
* gamma_j, 1 <= j <= 2n - z1 - z2 - 2 (only j <= n - z2 - 1 occurs in the
  unspecialized law)
* beta_{k,l}, 2 <= l <= n - z2, 1 <= k < z2 - z1 + l
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import FormatError, InvalidDimension, InvalidTriple
from .exactmath import Polynomial, as_polynomial, rational
from .liealg import BasisChange, LieAlgebra
from .series import Triple

FREE = "free"


def alpha_name(i: int) -> str:
    return f"a_{i}"


def gamma_name(j: int) -> str:
    return f"g_{j}"


def beta_name(k: int, l: int) -> str:
    return f"b_{k}_{l}"


def lambda_name(r: int) -> str:
    return f"l_{r}"


def beta_indices(t: Triple) -> List[Tuple[int, int]]:
    """(k, l) pairs in increasing k + l, then increasing l."""
    z1, z2, n = t.z1, t.z2, t.n
    pairs = [(k, l) for l in range(2, n - z2 + 1) for k in range(1, z2 - z1 + l)]
    return sorted(pairs, key=lambda kl: (kl[0] + kl[1], kl[1]))


def alpha_count(t: Triple) -> int:
    return t.z2 - t.z1 + 1


def gamma_count(t: Triple) -> int:
    return 2 * t.n - t.z1 - t.z2 - 2


def active_gamma_count(t: Triple) -> int:
    return t.n - t.z2 - 1


def parameter_names(t: Triple, include_inactive_gamma: bool = False) -> List[str]:
    ng = gamma_count(t) if include_inactive_gamma else active_gamma_count(t)
    return (
        [alpha_name(i) for i in range(1, alpha_count(t) + 1)]
        + [gamma_name(j) for j in range(1, ng + 1)]
        + [beta_name(k, l) for k, l in beta_indices(t)]
    )


@dataclass(frozen=True)
class GeneralLawParams:
    triple: Triple
    alpha: Tuple[Polynomial, ...]
    gamma: Tuple[Polynomial, ...]
    beta: Dict[Tuple[int, int], Polynomial] = field(hash=False)

    def __post_init__(self):
        t = self.triple.check()
        if len(self.alpha) != alpha_count(t):
            raise ValueError(f"expected {alpha_count(t)} alphas, got {len(self.alpha)}")
        if len(self.gamma) != gamma_count(t):
            raise ValueError(f"expected {gamma_count(t)} gammas, got {len(self.gamma)}")
        if set(self.beta) != set(beta_indices(t)):
            raise ValueError("beta index set does not match the triple")

    def a(self, i: int) -> Polynomial:
        return self.alpha[i - 1]

    def g(self, j: int) -> Polynomial:
        return self.gamma[j - 1]

    def b(self, k: int, l: int) -> Polynomial:
        return self.beta[(k, l)]

    @classmethod
    def symbolic(cls, t: Triple) -> "GeneralLawParams":
        return cls.from_mapping(t, {}, default=FREE)

    @classmethod
    def zero(cls, t: Triple) -> "GeneralLawParams":
        return cls.from_mapping(t, {}, default=0)

    @classmethod
    def from_mapping(cls, t: Triple, values: Mapping[str, object], default=0) -> "GeneralLawParams":
        """Build parameters from ``{name: value}``.

        Values may be Rationals, Polynomials, strings in the polynomial text
        format, or ``"free"`` for the parameter's own indeterminate.
        Unlisted parameters take ``default``.
        """
        t = Triple(t.z1, t.z2, t.n).check()
        known = set(parameter_names(t, include_inactive_gamma=True))
        unknown = set(values) - known
        if unknown:
            raise FormatError(f"parameters outside the index ranges of {t}: {sorted(unknown)}")

        def pick(name):
            v = values.get(name, default)
            if isinstance(v, str) and v.strip() == FREE:
                return Polynomial.var(name)
            return as_polynomial(v)

        alpha = tuple(pick(alpha_name(i)) for i in range(1, alpha_count(t) + 1))
        gamma = tuple(pick(gamma_name(j)) for j in range(1, gamma_count(t) + 1))
        beta = {(k, l): pick(beta_name(k, l)) for k, l in beta_indices(t)}
        return cls(t, alpha, gamma, beta)

    def with_values(self, values: Mapping[str, object]) -> "GeneralLawParams":
        """Copy with some parameters overridden (names as in from_mapping)."""
        t = self.triple
        known = set(parameter_names(t, include_inactive_gamma=True))
        unknown = set(values) - known
        if unknown:
            raise FormatError(f"unknown parameters {sorted(unknown)}")
        alpha = tuple(as_polynomial(values.get(alpha_name(i), a)) for i, a in enumerate(self.alpha, 1))
        gamma = tuple(as_polynomial(values.get(gamma_name(j), g)) for j, g in enumerate(self.gamma, 1))
        beta = {kl: as_polynomial(values.get(beta_name(*kl), b)) for kl, b in self.beta.items()}
        return GeneralLawParams(t, alpha, gamma, beta)

    def substitute(self, values: Mapping[str, object]) -> "GeneralLawParams":
        """Substitute values for indeterminates inside every parameter."""
        subs = {k: as_polynomial(v) for k, v in values.items()}
        return GeneralLawParams(
            self.triple,
            tuple(a.substitute(subs) for a in self.alpha),
            tuple(g.substitute(subs) for g in self.gamma),
            {kl: b.substitute(subs) for kl, b in self.beta.items()},
        )

    def as_dict(self) -> Dict[str, str]:
        out = {alpha_name(i): str(a) for i, a in enumerate(self.alpha, 1)}
        out.update({gamma_name(j): str(g) for j, g in enumerate(self.gamma, 1)})
        out.update({beta_name(k, l): str(b) for (k, l), b in self.beta.items()})
        return out


def load_param_file(text: str) -> Dict[str, object]:
    """Parse the parameter file format ``{"a_1": "1/2", "g_5": "free"}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("parameter file must hold a JSON object")
    out = {}
    for name, v in data.items():
        if not isinstance(v, str):
            raise FormatError(f"value of {name} must be a string")
        out[name] = FREE if v.strip() == FREE else rational(v)
    return out


def generate_general(params: GeneralLawParams) -> LieAlgebra:
    """The law of a filiform algebra with the given triple and parameters.

    Brackets of the fourth group are filled by increasing k + l so that both
    brackets feeding the shift are already known.  Brackets not produced by
    one of the four groups are zero.  No Jacobi check is performed.
    """
    t = params.triple.check()
    z1, z2, n = t.z1, t.z2, t.n
    table: Dict[Tuple[int, int], Dict[int, Polynomial]] = {}

    for h in range(3, n + 1):
        table[(1, h)] = {h - 1: Polynomial.const(1)}

    # [e_{z1+i}, e_{z2+1}] = a_1 e_{i+2} + a_2 e_{i+1} + ... + a_{i+1} e_2
    for i in range(0, z2 - z1 + 1):
        table[(z1 + i, z2 + 1)] = {i + 2 - s: params.a(s + 1) for s in range(0, i + 1)}

    # [e_{z1}, e_{z2+j}] = a_1 e_{j+1} + g_1 e_j + ... + g_{j-1} e_2
    for j in range(2, n - z2 + 1):
        vec = {j + 1: params.a(1)}
        for s in range(1, j):
            vec[j + 1 - s] = params.g(s)
        table[(z1, z2 + j)] = vec

    def get(i, j):
        if i == j:
            return {}
        if i < j:
            return table.get((i, j), {})
        return {h: -c for h, c in table.get((j, i), {}).items()}

    for k, l in beta_indices(t):
        a, b = z1 + k, z2 + l
        prev = dict(get(a - 1, b))
        for h, c in get(a, b - 1).items():
            prev[h] = prev.get(h, Polynomial.zero()) + c
        vec = {}
        for h in range(2, min(k + l, n - 1) + 1):
            c = prev.get(h)
            if c:
                vec[h + 1] = c
        vec[2] = vec.get(2, Polynomial.zero()) + params.b(k, l)
        table[(a, b)] = vec

    return LieAlgebra(n, table)


def generate_model(n: int) -> LieAlgebra:
    return LieAlgebra(n, {(1, h): {h - 1: 1} for h in range(3, n + 1)})


def specialize_Fag(params: GeneralLawParams, full_range: bool = True) -> GeneralLawParams:
    """Identify beta_{k,l} with gamma_{k+l-1}.

    By default for every (k, l); with ``full_range=False`` only where
    k + l <= n - z2.
    """
    t = params.triple
    beta = {}
    for (k, l), b in params.beta.items():
        if full_range or k + l <= t.n - t.z2:
            beta[(k, l)] = params.g(k + l - 1)
        else:
            beta[(k, l)] = b
    return replace(params, beta=beta)


def mu_count(t: Triple) -> int:
    """Number of free parameters (n - z2)(n + z2 - 2 z1 + 1) / 2."""
    t = Triple(t.z1, t.z2, t.n).check()
    num = (t.n - t.z2) * (t.n + t.z2 - 2 * t.z1 + 1)
    return num // 2


def enumerate_triples(n: int) -> List[Triple]:
    return [
        Triple(z1, z2, n)
        for z1 in range(4, n)
        for z2 in range(z1, n)
        if Triple(z1, z2, n).valid
    ]


def in_empty_region(t: Triple) -> bool:
    z1, z2, n = t.z1, t.z2, t.n
    return 4 <= z1 <= 2 * (n - z2) - 4 and z1 <= z2 <= n - 3 <= 2 * z2 - 5


def enumerate_empty_region(n: int) -> List[Triple]:
    return [t for t in enumerate_triples(n) if in_empty_region(t)]


# -- Bratzlavsky law ---------------------------------------------------------


@dataclass(frozen=True)
class BratzlavskyParams:
    n: int
    lam: Tuple[Polynomial, ...]

    def __post_init__(self):
        if self.n < 5:
            raise InvalidDimension("the Bratzlavsky law needs n >= 5")
        if len(self.lam) != self.n - 4:
            raise ValueError(f"expected {self.n - 4} lambdas, got {len(self.lam)}")

    @classmethod
    def symbolic(cls, n: int) -> "BratzlavskyParams":
        if n < 5:
            raise InvalidDimension("the Bratzlavsky law needs n >= 5")
        return cls(n, tuple(Polynomial.var(lambda_name(r)) for r in range(n - 4)))

    @classmethod
    def of(cls, n: int, lam: Sequence) -> "BratzlavskyParams":
        if n < 5:
            raise InvalidDimension("the Bratzlavsky law needs n >= 5")
        return cls(n, tuple(as_polynomial(x) for x in lam))


def generate_bratzlavsky(params: BratzlavskyParams | int, lam: Optional[Sequence] = None) -> LieAlgebra:
    """Metabelian filiform law in its x-basis.

    [x1, xi] = x_{i+1} (2 <= i <= n-1) and
    [x2, xi] = sum_{r=0}^{n-i-2} lambda_r x_{i+2+r} (3 <= i <= n-2).
    """
    if not isinstance(params, BratzlavskyParams):
        params = BratzlavskyParams.symbolic(params) if lam is None else BratzlavskyParams.of(params, lam)
    n = params.n
    table = {(1, i): {i + 1: 1} for i in range(2, n)}
    for i in range(3, n - 1):
        vec = {}
        for r in range(0, n - i - 1):
            c = params.lam[r]
            if c:
                vec[i + 2 + r] = c
        if vec:
            table[(2, i)] = vec
    return LieAlgebra(n, table)


def bratzlavsky_relabeling(n: int) -> BasisChange:
    """e1 = x1, e2 = x_n, e3 = x_{n-1}, ..., e_n = x2."""
    return BasisChange.permutation([1] + [n + 2 - h for h in range(2, n + 1)])


def relabel(g: LieAlgebra, images: Sequence[int]) -> LieAlgebra:
    """Permute basis vectors: new e_k is old e_{images[k-1]}.  Works symbolically."""
    n = g.n
    new_index = {old: k for k, old in enumerate(images, 1)}
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError("images must be a permutation of 1..n")
    table = {}
    for (i, j), vec in g.pairs():
        table[(new_index[i], new_index[j])] = {new_index[h]: c for h, c in vec.items()}
    return LieAlgebra(n, table, g.parameters)


def bratzlavsky_adapted(n: int, lam: Optional[Sequence] = None) -> LieAlgebra:
    """The Bratzlavsky law written in its adapted basis."""
    return relabel(generate_bratzlavsky(n, lam), [1] + [n + 2 - h for h in range(2, n + 1)])
