"""Closed-form combinatorial coefficients and their symbolic cross-checks.

For a triple (z1, z2, n) put p = 2n - z1 - 2 z2 - 3, q = n - z2 - 2,
r = n - z1 - 1 and

    R_k = (C(r,k) - C(r,k-1)) C(q,k),   S_k = (C(r,k) - C(r,k-1)) C(q,k-1),

summed over 0 <= k <= floor(r/2).  The quadratic forms a_m g^2 + b_m g a +
c_m a^2 predicted here are compared with coordinates of jacobiators that are
expanded symbolically from :func:`filiform.family.generate_general`; the
expansion is the ground truth, the closed forms are what is being tested.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import DegenerateDenominator, IndexGuard, IndexOutOfRange, NegativeUpperIndex
from .exactmath import Polynomial, binomial
from .family import (
    GeneralLawParams,
    alpha_name,
    gamma_name,
    generate_general,
    specialize_Fag,
)
from .liealg import bracket_coord, jacobiator
from .series import Triple

C = binomial


@dataclass(frozen=True)
class CombinatorialContext:
    triple: Triple
    p: int
    q: int
    r: int
    sumR: Fraction
    sumS: Fraction


def context(t: Triple) -> CombinatorialContext:
    t = Triple(t.z1, t.z2, t.n).check()
    z1, z2, n = t.z1, t.z2, t.n
    p = 2 * n - z1 - 2 * z2 - 3
    q = n - z2 - 2
    r = n - z1 - 1
    try:
        sum_r = sum(((C(r, k) - C(r, k - 1)) * C(q, k) for k in range(r // 2 + 1)), Fraction(0))
        sum_s = sum(((C(r, k) - C(r, k - 1)) * C(q, k - 1) for k in range(r // 2 + 1)), Fraction(0))
    except NegativeUpperIndex as exc:
        raise IndexGuard(f"{t}: q = {q} gives {exc}") from exc
    return CombinatorialContext(t, p, q, r, sum_r, sum_s)


def abc(ctx: CombinatorialContext, m: int) -> Tuple[Fraction, Fraction, Fraction]:
    p, q, r, R, S = ctx.p, ctx.q, ctx.r, ctx.sumR, ctx.sumS
    if not 0 <= m <= r - 1:
        raise IndexOutOfRange(f"m = {m} outside 0..{r - 1}")
    try:
        a = C(m + q - 1, m) * C(m + p, q) - C(m + q, m) * C(m + p, q - 1) - C(p + m, m) * R
        b = (
            C(m + q - 1, m) * C(m + p, q + 1)
            - C(m + q - 1, m - 1) * C(m + p, q)
            - C(m + q, m) * C(m + p, q)
            - C(m + q, m - 1) * C(m + p, q - 1)
            - C(m + p, m - 1) * R
            - C(m + p, m) * S
        )
        c = C(m + q - 1, m - 1) * C(m + p, q + 1) - C(m + q, m - 1) * C(m + p, q) - C(m + p, m - 1) * S
    except NegativeUpperIndex as exc:
        raise IndexGuard(f"{ctx.triple}, m = {m}: {exc}") from exc
    return a, b, c


@dataclass(frozen=True)
class ProofCoefficients:
    a0: Fraction
    b0: Fraction
    a1: Fraction
    b1: Fraction
    c1: Fraction
    a_prime: Fraction
    b_prime: Fraction
    raw: Dict[str, Fraction]
    # None where the simplified form divides by zero at this triple
    simplified: Dict[str, Optional[Fraction]]

    @property
    def agree(self) -> bool:
        return all(v is None or v == self.raw[k] for k, v in self.simplified.items())

    @property
    def degenerate(self) -> List[str]:
        return [k for k, v in self.simplified.items() if v is None]

    def as_dict(self) -> Dict[str, str]:
        return {k: str(v) for k, v in self.raw.items()}


# denominators each simplified form divides by
_DENOMINATORS = {
    "a0": ("p-q+1",),
    "b0": ("q+1",),
    "a1": ("p-q+2",),
    "b1": ("q+1", "p-q+2"),
    "c1": ("p-q+1",),
    "a_prime": ("p-q+2",),
    "b_prime": ("p-q+2", "q+1"),
}


def proof_coeffs(ctx: CombinatorialContext, strict: bool = False) -> ProofCoefficients:
    """a0, b0, a1, b1, c1 and the combination a' = (p+1) a0 - a1,
    b' = (p+1) b0 - b1.

    The raw binomial forms are always evaluated.  Each simplified rational
    form is evaluated only where its denominator is nonzero and must then
    coincide with the raw value.  With ``strict`` a vanishing denominator is
    an error instead."""
    p, q, R, S = ctx.p, ctx.q, ctx.sumR, ctx.sumS
    dens = {"p-q+1": p - q + 1, "q+1": q + 1, "p-q+2": p - q + 2}
    zero = {name for name, d in dens.items() if d == 0}
    if strict and zero:
        raise DegenerateDenominator(f"{ctx.triple}: {', '.join(sorted(zero))} = 0")
    F = Fraction
    forms = {
        "a0": lambda: F(p - 2 * q + 1, p - q + 1) * C(p, q) - R,
        "b0": lambda: F(p - 2 * q - 1, q + 1) * C(p, q) - S,
        "a1": lambda: F(p - 2 * q + 1, p - q + 2) * q * C(p + 1, q) - (p + 1) * R,
        "b1": lambda: F((q * (p - 2 * q - 2) - 2) * (p - q + 2) - q * (q + 1), (q + 1) * (p - q + 2))
        * C(p + 1, q)
        - R
        - (p + 1) * S,
        "c1": lambda: F(p - 2 * q, p - q + 1) * C(p + 1, q + 1) - S,
        "a_prime": lambda: F((p - 2 * q + 1) * (p - 2 * q + 2), p - q + 2) * C(p + 1, q),
        "b_prime": lambda: F((p - q + 2) * ((p - 2 * q) ** 2 + (q + 1)) + q * (q + 1), (p - q + 2) * (q + 1))
        * C(p + 1, q)
        + R,
    }
    try:
        raw = {
            "a0": C(p, q) - C(p, q - 1) - R,
            "b0": C(p, q + 1) - C(p, q) - S,
            "a1": q * C(p + 1, q) - (q + 1) * C(p + 1, q - 1) - (p + 1) * R,
            "b1": q * C(p + 1, q + 1) - C(p + 1, q) - (q + 1) * C(p + 1, q) - C(p + 1, q - 1) - R - (p + 1) * S,
            "c1": C(p + 1, q + 1) - C(p + 1, q) - S,
        }
        raw = {k: F(v) for k, v in raw.items()}
        raw["a_prime"] = (p + 1) * raw["a0"] - raw["a1"]
        raw["b_prime"] = (p + 1) * raw["b0"] - raw["b1"]
        simp = {k: None if zero.intersection(_DENOMINATORS[k]) else F(f()) for k, f in forms.items()}
    except NegativeUpperIndex as exc:
        raise IndexGuard(f"{ctx.triple}: {exc}") from exc
    return ProofCoefficients(
        raw["a0"], raw["b0"], raw["a1"], raw["b1"], raw["c1"], raw["a_prime"], raw["b_prime"], raw, simp
    )


# -- symbolic extraction ---------------------------------------------------


def alpha1_closed_form(t: Triple, corrected: bool = False) -> Polynomial:
    """alpha_1^2 * (-(z1-2)/(q+1) C(p+2, q) - C(q+r, r-1)).

    The middle count C(q+r, r-1) = P_{q+r+2}([e_{n-2}, e_n]) / alpha_1 treats
    every lattice path as admissible.  Paths through the diagonal
    [e_i, e_i] = 0 contribute nothing, and when q + r + 3 > n the bracket
    [e_{z1}, e_{q+r+3}] it multiplies does not exist.  ``corrected`` applies
    both effects: the count becomes C(q+r, r-1) - C(q+r, r-2-(z2-z1)) by
    reflection, or 0 past the top of the basis.
    """
    ctx = context(t)
    p, q, r = ctx.p, ctx.q, ctx.r
    if p < 0 or p + 4 > t.n:
        raise IndexGuard(f"{t}: e_(p+4) with p = {p} is outside the law")
    if corrected:
        middle = C(q + r, r - 1) - C(q + r, r - 2 - (t.z2 - t.z1)) if q + r + 3 <= t.n else 0
        coeff = C(p + 2, q + 1) - middle - C(p + 2, q)
    else:
        coeff = -Fraction(t.z1 - 2, q + 1) * C(p + 2, q) - C(q + r, r - 1)
    a1 = Polynomial.var(alpha_name(1))
    return a1 * a1 * coeff


def alpha1_only_law(t: Triple):
    params = GeneralLawParams.zero(t).with_values({alpha_name(1): Polynomial.var(alpha_name(1))})
    return generate_general(params)


def alpha1_extracted(t: Triple) -> Polynomial:
    """P_{p+4}(J(e_{z1}, e_{n-1}, e_n)) for the law with only alpha_1 free."""
    ctx = context(t)
    p = ctx.p
    if p < 0 or p + 4 > t.n:
        raise IndexGuard(f"{t}: e_(p+4) with p = {p} is outside the law")
    g = alpha1_only_law(t)
    return jacobiator(g, t.z1, t.n - 1, t.n)[p + 3]


@dataclass
class Verdict:
    ok: bool
    label: str
    expected: Polynomial
    actual: Polynomial

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"pass": self.ok, "label": self.label, "closed_form": str(self.expected), "extracted": str(self.actual)}


def alpha1_coefficient(t: Triple, corrected: bool = False) -> Verdict:
    expected = alpha1_closed_form(t, corrected)
    actual = alpha1_extracted(t)
    return Verdict(expected == actual, f"alpha1 {t}", expected, actual)


def fag_law_for_step(t: Triple, k: int, full_range: bool = True):
    """Symbolic F_ag law with alpha_1 = 0 and gamma_i = alpha_{i+1} = 0 for i < k."""
    params = specialize_Fag(GeneralLawParams.symbolic(t), full_range=full_range)
    zero = {alpha_name(1): 0}
    for i in range(1, k):
        zero[gamma_name(i)] = 0
        zero[alpha_name(i + 1)] = 0
    return generate_general(params.substitute(zero))


def max_step(t: Triple) -> int:
    return min(t.n - t.z2 - 1, t.z2 - t.z1)


def coefficient_target(t: Triple, m: int, k: int) -> int:
    return m + context(t).p + 4 - 2 * k


def identity_guard(t: Triple, m: int, k: int) -> Optional[str]:
    """Reason the (m, k) identity is outside its window, or None."""
    if not t.valid:
        return "invalid triple"
    if t.z2 > t.n - 3:
        return "needs z2 <= n - 3"
    ctx = context(t)
    if not 0 <= m <= ctx.r - 1:
        return f"m outside 0..{ctx.r - 1}"
    if not 1 <= k <= max_step(t):
        return f"k outside 1..{max_step(t)}"
    target = m + ctx.p + 4 - 2 * k
    if not 3 <= target <= t.n:
        return f"target e_{target} outside e_3..e_{t.n}"
    return None


def guarded_pairs(t: Triple) -> List[Tuple[int, int]]:
    ctx = context(t)
    return [
        (m, k)
        for k in range(1, max_step(t) + 1)
        for m in range(0, ctx.r)
        if identity_guard(t, m, k) is None
    ]


def jacobi_coefficient_identity(t: Triple, m: int, k: int, full_range: bool = True, law=None) -> Verdict:
    """Compare P_{m+p+4-2k}(J(e_{z1+m}, e_{n-1}, e_n)) with
    a_m g_k^2 + b_m g_k a_{k+1} + c_m a_{k+1}^2."""
    reason = identity_guard(t, m, k)
    if reason:
        raise IndexGuard(f"{t}, m = {m}, k = {k}: {reason}")
    ctx = context(t)
    a, b, c = abc(ctx, m)
    g = Polynomial.var(gamma_name(k))
    al = Polynomial.var(alpha_name(k + 1))
    expected = g * g * a + g * al * b + al * al * c
    law = fag_law_for_step(t, k, full_range) if law is None else law
    target = m + ctx.p + 4 - 2 * k
    actual = jacobiator(law, t.z1 + m, t.n - 1, t.n)[target - 1]
    return Verdict(expected == actual, f"{t} m={m} k={k}", expected, actual)


def vandermonde_alpha1(t: Triple, k: int) -> Verdict:
    """P_{n-z2+1}([e_{z1+k}, e_{n-k}]) = C(q+1, k) alpha_1 with only alpha_1 free."""
    ctx = context(t)
    g = alpha1_only_law(t)
    i, j = t.z1 + k, t.n - k
    if not i < j:
        raise IndexGuard(f"{t}: need z1 + k < n - k")
    actual = bracket_coord(g, i, j, t.n - t.z2 + 1)
    expected = Polynomial.var(alpha_name(1)) * C(ctx.q + 1, k)
    return Verdict(expected == actual, f"{t} k={k}", expected, actual)


def vandermonde_gamma1(t: Triple, k: int) -> Verdict:
    """P_{n-z2}([e_{z1+k}, e_{n-k}]) = C(q,k) g_1 + C(q,k-1) a_2 under alpha_1 = 0."""
    ctx = context(t)
    params = GeneralLawParams.symbolic(t).substitute({alpha_name(1): 0})
    g = generate_general(params)
    i, j = t.z1 + k, t.n - k
    if not i < j:
        raise IndexGuard(f"{t}: need z1 + k < n - k")
    actual = bracket_coord(g, i, j, t.n - t.z2)
    expected = Polynomial.var(gamma_name(1)) * C(ctx.q, k) + Polynomial.var(alpha_name(2)) * C(ctx.q, k - 1)
    return Verdict(expected == actual, f"{t} k={k}", expected, actual)
