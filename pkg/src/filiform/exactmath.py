"""Exact scalars: rationals, binomial coefficients and sparse multivariate
polynomials over Q.

Monomials are stored sparsely as sorted tuples of ``(name, exponent)`` pairs.
The canonical variable order is :func:`var_key` (natural order on the
``a_i``/``g_j``/``b_k_l``/``l_r`` naming scheme); terms print in graded
lexicographic order with respect to it.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import NegativeUpperIndex, PolynomialParseError, UnboundParameter

Rational = Fraction

Monomial = Tuple[Tuple[str, int], ...]
Scalar = Union[int, Fraction]

ONE_MONO: Monomial = ()


def rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PolynomialParseError(f"bad rational {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to Rational")


def binomial(a: int, k: int) -> Fraction:
    """C(a, k) with C(a, k) = 0 for k < 0 or k > a >= 0.

    A negative upper index with k >= 0 raises :class:`NegativeUpperIndex`;
    the generalized binomial is never needed inside guarded index ranges.
    """
    if k < 0:
        return Fraction(0)
    if a < 0:
        raise NegativeUpperIndex(f"binomial({a}, {k})")
    if k > a:
        return Fraction(0)
    return Fraction(math.comb(a, k))


@lru_cache(maxsize=None)
def var_key(name: str):
    parts = []
    for piece in name.split("_"):
        if piece.isdigit():
            parts.append((1, int(piece), ""))
        else:
            parts.append((0, 0, piece))
    return tuple(parts)


def _normalize_mono(pairs) -> Monomial:
    exps: Dict[str, int] = {}
    for v, e in pairs:
        e = int(e)
        if e < 0:
            raise ValueError("negative exponent")
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in exps.items() if e), key=lambda t: var_key(t[0])))


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif var_key(v1) < var_key(v2):
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Polynomial:
    """Immutable polynomial with Fraction coefficients.

    Supports ``+ - *`` with other polynomials and with ints/Fractions, and
    integer powers.  ``bool(p)`` is False exactly for the zero polynomial.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = rational(c)
                if c:
                    mono = _normalize_mono(mono)
                    clean[mono] = clean.get(mono, Fraction(0)) + c
                    if not clean[mono]:
                        del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls._raw({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, value: Scalar) -> "Polynomial":
        value = rational(value)
        return cls._raw({ONE_MONO: value} if value else {})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    @property
    def variables(self) -> Tuple[str, ...]:
        names = {v for mono in self._terms for v, _ in mono}
        return tuple(sorted(names, key=var_key))

    def exponent_terms(self) -> Dict[Tuple[int, ...], Fraction]:
        """Terms keyed by dense exponent vectors over :attr:`variables`."""
        names = self.variables
        index = {v: i for i, v in enumerate(names)}
        out = {}
        for mono, c in self._terms.items():
            vec = [0] * len(names)
            for v, e in mono:
                vec[index[v]] = e
            out[tuple(vec)] = c
        return out

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(ONE_MONO, Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        return max(_mono_degree(m) for m in self._terms)

    def coefficient(self, monomial: Iterable[Tuple[str, int]] | Mapping[str, int]) -> Fraction:
        if isinstance(monomial, Mapping):
            monomial = monomial.items()
        return self._terms.get(_normalize_mono(monomial), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono)
            if s is None:
                out[mono] = c
            else:
                s += c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Scalar) -> "Polynomial":
        c = rational(c)
        if not c:
            return Polynomial.zero()
        return Polynomial._raw({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._terms or not other._terms:
            return Polynomial.zero()
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- evaluation --------------------------------------------------------

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.variables if v not in assignment]
        if missing:
            raise UnboundParameter(missing)
        total = Fraction(0)
        for mono, c in self._terms.items():
            term = c
            for v, e in mono:
                term *= rational(assignment[v]) ** e
            total += term
        return total

    def substitute(self, mapping: Mapping[str, "Polynomial | Scalar"]) -> "Polynomial":
        """Replace some variables by polynomials or scalars."""
        if not mapping or not self._terms:
            return self
        subs = {k: (v if isinstance(v, Polynomial) else Polynomial.const(v)) for k, v in mapping.items()}
        out = Polynomial.zero()
        for mono, c in self._terms.items():
            kept = []
            term = Polynomial.const(c)
            for v, e in mono:
                if v in subs:
                    term = term * subs[v] ** e
                else:
                    kept.append((v, e))
            if kept:
                term = term * Polynomial._raw({tuple(kept): Fraction(1)})
            out = out + term
        return out

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- text --------------------------------------------------------------

    def sorted_terms(self):
        """Terms in descending graded-lex order over the canonical variable order."""
        names = self.variables
        index = {v: i for i, v in enumerate(names)}

        def key(item):
            mono = item[0]
            vec = [0] * len(names)
            for v, e in mono:
                vec[index[v]] = e
            return (-_mono_degree(mono), tuple(-e for e in vec))

        return sorted(self._terms.items(), key=key)

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            factors = [v if e == 1 else f"{v}^{e}" for v, e in mono]
            mag = abs(c)
            if not factors:
                body = _fmt_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_fmt_rational(mag)] + factors)
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        return parse_polynomial(text)


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def as_polynomial(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, str):
        return parse_polynomial(value)
    return Polynomial.const(value)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def parse_polynomial(text: str) -> Polynomial:
    """Parse the text format ``3/5*b_3_3 + 2*a_6 - a_1^2``.

    Parentheses are accepted; exponents must be non-negative integers.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    if not tokens:
        raise PolynomialParseError("empty polynomial text")
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = term().scale(sign)
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while peek() == ("op", "*"):
            take()
            acc = acc * factor()
        return acc

    def factor():
        kind, val = take()
        if kind == "num":
            base = Polynomial.const(Fraction(val))
        elif kind == "name":
            base = Polynomial.var(val)
        elif (kind, val) == ("op", "("):
            base = expr()
            if take() != ("op", ")"):
                raise PolynomialParseError(f"unbalanced parenthesis in {text!r}")
        elif (kind, val) == ("op", "-"):
            return -factor()
        else:
            raise PolynomialParseError(f"unexpected token {val!r} in {text!r}")
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num" or "/" in val:
                raise PolynomialParseError(f"bad exponent in {text!r}")
            base = base ** int(val)
        return base

    result = expr()
    if peek()[0] != "end":
        raise PolynomialParseError(f"trailing input in {text!r}")
    return result


def poly_eval(p: Polynomial, assignment: Mapping[str, Scalar]) -> Fraction:
    return as_polynomial(p).evaluate(assignment)


def poly_equal(p, q) -> bool:
    return (as_polynomial(p) - as_polynomial(q)).is_zero()
