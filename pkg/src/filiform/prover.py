"""Certificates and search oracles for concrete triples.

Two independent lines of evidence are kept apart:

* the closed-form argument: signs of a0, b0, a', b', c1 and the relation
  b0^2 a' = a0 (a0 c1 - b0 b'), evaluated exactly;
* a symbolic replay on the F_ag law itself: at every inductive step the
  Jacobiator coordinates that only involve (gamma_k, alpha_{k+1}) are
  collected, and a pair of binary quadratics with nonzero resultant shows
  that the only common root is gamma_k = alpha_{k+1} = 0.

A certificate concludes only when both agree.  Grid searches are reported as
heuristic evidence and never as proof.
"""
from __future__ import annotations

import itertools
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import NotInRegion, PreconditionFailure, SignPatternFailure
from .exactmath import Polynomial, rational
from .family import (
    GeneralLawParams,
    alpha_name,
    beta_name,
    gamma_name,
    generate_general,
    in_empty_region,
    specialize_Fag,
)
from .lemmas import CombinatorialContext, context, fag_law_for_step, max_step, proof_coeffs
from .liealg import LieAlgebra, jacobi_check, jacobi_violations, jacobiator
from .series import MODEL, Triple, derived_length, invariants_z, is_filiform

Form = Tuple[Fraction, Fraction, Fraction]


# -- constraints ------------------------------------------------------------


def _normalized(p: Polynomial) -> Polynomial:
    lead = p.sorted_terms()[0][1]
    return p if lead == 1 else p.scale(1 / Fraction(lead))


def constraints(g: LieAlgebra) -> List[Polynomial]:
    """Distinct Jacobiator coordinates of ``g``, each scaled to leading
    coefficient 1, ordered by degree, length and text."""
    seen = {}
    for v in jacobi_violations(g):
        for c in v.coords.values():
            if c:
                p = _normalized(c)
                seen.setdefault(p, None)
    return sorted(seen, key=lambda p: (p.degree(), len(p.terms), str(p)))


# -- emptiness certificate --------------------------------------------------


def _binary_form(p: Polynomial, x: str, y: str) -> Optional[Form]:
    """(A, B, C) with p = A x^2 + B x y + C y^2, or None if p has any other shape."""
    X, Y = Polynomial.var(x), Polynomial.var(y)
    slots = {next(iter((X * X).terms)): 0, next(iter((X * Y).terms)): 1, next(iter((Y * Y).terms)): 2}
    vals = [Fraction(0)] * 3
    for mono, c in p.terms.items():
        slot = slots.get(mono)
        if slot is None:
            return None
        vals[slot] = Fraction(c)
    return vals[0], vals[1], vals[2]


def binary_resultant(f: Form, g: Form) -> Fraction:
    """Resultant of two binary quadratic forms; zero iff they share a root in P^1."""
    a, b, c = f
    a2, b2, c2 = g
    return (a * c2 - a2 * c) ** 2 - (a * b2 - a2 * b) * (b * c2 - b2 * c)


@dataclass
class Witness:
    i: int
    j: int
    k: int
    h: int
    form: Form

    def as_dict(self):
        return {"jacobiator": [self.i, self.j, self.k], "coordinate": self.h, "form": [str(x) for x in self.form]}


@dataclass
class ReplayStep:
    """One inductive step: gamma_k = alpha_{k+1} = 0 is forced."""

    k: int
    witnesses: List[Witness]
    resultant: Optional[Fraction]
    forced: bool

    def as_dict(self):
        return {
            "k": self.k,
            "forced": self.forced,
            "resultant": None if self.resultant is None else str(self.resultant),
            "witnesses": [w.as_dict() for w in self.witnesses],
        }


@dataclass
class CoefficientRecord:
    values: Dict[str, Fraction]
    signs: Dict[str, bool]
    simplified_agree: bool
    lhs: Fraction
    rhs: Fraction

    @property
    def sign_ok(self) -> bool:
        return all(self.signs.values())

    @property
    def relation_violated(self) -> bool:
        return self.lhs != self.rhs

    def as_dict(self):
        return {
            "values": {k: str(v) for k, v in self.values.items()},
            "signs": self.signs,
            "simplified_forms_agree": self.simplified_agree,
            "relation": {"lhs": str(self.lhs), "rhs": str(self.rhs), "violated": self.relation_violated},
        }


@dataclass
class EmptinessCertificate:
    triple: Triple
    p: int
    q: int
    r: int
    coefficients: CoefficientRecord
    iterations: int
    alpha1_coefficient: Fraction
    steps: List[ReplayStep]
    terminal: str
    terminal_ok: bool
    conclusion: bool

    def as_dict(self):
        return {
            "triple": str(self.triple),
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "coefficients": self.coefficients.as_dict(),
            "iterations": self.iterations,
            "alpha1_coefficient": str(self.alpha1_coefficient),
            "steps": [s.as_dict() for s in self.steps],
            "terminal": self.terminal,
            "terminal_ok": self.terminal_ok,
            "conclusion": self.conclusion,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        c = self.coefficients
        v = c.values
        lines = [
            f"triple        {self.triple}",
            f"p, q, r       {self.p}, {self.q}, {self.r}",
            "coefficients  " + ", ".join(f"{k}={v[k]}" for k in ("a0", "b0", "a1", "b1", "c1", "a_prime", "b_prime")),
            "signs         " + ("ok" if c.sign_ok else "FAILED"),
            f"relation      lhs={c.lhs} rhs={c.rhs} " + ("violated" if c.relation_violated else "HOLDS"),
            f"alpha1        {self.alpha1_coefficient}*a_1^2 " + ("forces a_1 = 0" if self.alpha1_coefficient else "NOT forced"),
            f"iterations    {self.iterations}",
        ]
        for s in self.steps:
            lines.append(
                f"  step {s.k}: " + (f"forced (resultant {s.resultant})" if s.forced else "NOT forced")
            )
        lines.append(f"terminal      {self.terminal}")
        lines.append(f"conclusion    {str(self.conclusion).lower()}")
        return "\n".join(lines)


def _coefficient_record(ctx: CombinatorialContext) -> CoefficientRecord:
    pc = proof_coeffs(ctx)
    v = dict(pc.raw)
    signs = {
        "a0<0": v["a0"] < 0,
        "b0<0": v["b0"] < 0,
        "a'>=0": v["a_prime"] >= 0,
        "b'>0": v["b_prime"] > 0,
        "c1<0": v["c1"] < 0,
    }
    lhs = v["b0"] ** 2 * v["a_prime"]
    rhs = v["a0"] * (v["a0"] * v["c1"] - v["b0"] * v["b_prime"])
    return CoefficientRecord(v, signs, pc.agree, lhs, rhs)


def _replay_step(t: Triple, k: int, ctx: CombinatorialContext) -> ReplayStep:
    law = fag_law_for_step(t, k)
    x, y = gamma_name(k), alpha_name(k + 1)
    n = t.n
    witnesses: List[Witness] = []
    # the coordinates named by the inductive lemma come first
    for m in range(ctx.r):
        h = m + ctx.p + 4 - 2 * k
        if 3 <= h <= n:
            poly = jacobiator(law, t.z1 + m, n - 1, n)[h - 1]
            f = _binary_form(poly, x, y) if poly else None
            if f is not None:
                witnesses.append(Witness(t.z1 + m, n - 1, n, h, f))
    found = _resolving_pair(witnesses)
    if found:
        return ReplayStep(k, list(found[:2]), found[2], True)
    # otherwise widen to every Jacobiator coordinate in (gamma_k, alpha_{k+1}) alone
    for v in jacobi_violations(law):
        for h, poly in v.coords.items():
            if not poly or not set(poly.variables) <= {x, y}:
                continue
            f = _binary_form(poly, x, y)
            if f is not None and not any(w.form == f for w in witnesses):
                witnesses.append(Witness(v.i, v.j, v.k, h, f))
    found = _resolving_pair(witnesses)
    if found:
        return ReplayStep(k, list(found[:2]), found[2], True)
    return ReplayStep(k, witnesses, None, False)


def _resolving_pair(witnesses: Sequence[Witness]):
    for w1, w2 in itertools.combinations(witnesses, 2):
        res = binary_resultant(w1.form, w2.form)
        if res:
            return w1, w2, res
    return None


def _alpha1_replay(t: Triple, ctx: CombinatorialContext) -> Fraction:
    """Coefficient c with P_{p+4}(J(e_{z1}, e_{n-1}, e_n)) = c alpha_1^2 on the
    fully symbolic law; 0 if the coordinate has any other shape."""
    g = generate_general(GeneralLawParams.symbolic(t))
    poly = jacobiator(g, t.z1, t.n - 1, t.n)[ctx.p + 3]
    a1 = alpha_name(1)
    if set(poly.variables) != {a1}:
        return Fraction(0)
    terms = poly.terms
    mono = ((a1, 2),)
    if set(terms) != {mono}:
        return Fraction(0)
    return Fraction(terms[mono])


def _terminal(t: Triple, iterations: int) -> Tuple[str, bool]:
    zeros = {alpha_name(1): 0}
    for i in range(1, iterations + 1):
        zeros[gamma_name(i)] = 0
        zeros[alpha_name(i + 1)] = 0
    law = generate_general(specialize_Fag(GeneralLawParams.symbolic(t)).substitute(zeros))
    hits = []
    if not any(law.bracket_basis(t.z1, t.n).values()):
        hits.append(f"[e{t.z1}, e{t.n}] = 0 contradicts z1 = {t.z1}")
    if not any(law.bracket_basis(t.z2, t.z2 + 1).values()):
        hits.append(f"[e{t.z2}, e{t.z2 + 1}] = 0 contradicts z2 = {t.z2}")
    if not hits:
        return "neither defining bracket vanishes", False
    return "; ".join(hits), True


def emptiness_certificate(t: Triple) -> EmptinessCertificate:
    t = Triple(t.z1, t.z2, t.n).check()
    if not in_empty_region(t):
        raise NotInRegion(f"{t} is outside 4 <= z1 <= 2(n-z2)-4, z1 <= z2 <= n-3 <= 2z2-5")
    ctx = context(t)
    coeffs = _coefficient_record(ctx)
    if not coeffs.sign_ok:
        raise SignPatternFailure(f"sign pattern fails at {t}", {k: str(v) for k, v in coeffs.values.items()})
    iterations = max_step(t)
    alpha1 = _alpha1_replay(t, ctx)
    steps = [_replay_step(t, k, ctx) for k in range(1, iterations + 1)]
    terminal, terminal_ok = _terminal(t, iterations)
    conclusion = (
        coeffs.sign_ok
        and coeffs.relation_violated
        and alpha1 != 0
        and all(s.forced for s in steps)
        and terminal_ok
    )
    return EmptinessCertificate(
        t, ctx.p, ctx.q, ctx.r, coeffs, iterations, alpha1, steps, terminal, terminal_ok, conclusion
    )


# -- grid search -------------------------------------------------------------


def _compile(p: Polynomial, index: Mapping[str, int]):
    return tuple((Fraction(c), tuple((index[v], e) for v, e in mono)) for mono, c in p.terms.items())


def _eval_compiled(terms, point) -> Fraction:
    total = Fraction(0)
    for c, mono in terms:
        x = c
        for i, e in mono:
            x *= point[i] ** e
            if not x:
                break
        total += x
    return total


def _search_chunk(args):
    nondeg, constr, chunk = args
    hits = []
    for idx, point in chunk:
        if not all(any(_eval_compiled(t, point) for t in group) for group in nondeg):
            continue
        if all(not _eval_compiled(c, point) for c in constr):
            hits.append((idx, point))
    return hits


@dataclass
class SearchReport:
    triple: Triple
    family: str
    parameters: List[str]
    grid: List[Fraction]
    budget: int
    seed: int
    mode: str
    candidates_tested: int
    instances: List[Dict[str, Fraction]] = field(default_factory=list)
    label: str = "heuristic evidence: absence on a finite grid does not decide emptiness"

    def as_dict(self):
        return {
            "triple": str(self.triple),
            "family": self.family,
            "parameters": self.parameters,
            "grid": [str(x) for x in self.grid],
            "budget": self.budget,
            "seed": self.seed,
            "mode": self.mode,
            "candidates_tested": self.candidates_tested,
            "instances_found": len(self.instances),
            "instances": [{k: str(v) for k, v in inst.items()} for inst in self.instances],
            "label": self.label,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        lines = [
            f"triple      {self.triple} ({self.family}, {len(self.parameters)} parameters)",
            f"grid        {{{', '.join(str(x) for x in self.grid)}}}",
            f"mode        {self.mode}, budget {self.budget}, seed {self.seed}",
            f"tested      {self.candidates_tested}",
            f"found       {len(self.instances)}",
        ]
        for inst in self.instances:
            lines.append("  " + ", ".join(f"{k}={v}" for k, v in inst.items() if v))
        lines.append(self.label)
        return "\n".join(lines)


def default_workers() -> int:
    env = os.environ.get("FILIFORM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def search_law(t: Triple, fag: bool = False) -> LieAlgebra:
    params = GeneralLawParams.symbolic(t)
    if fag:
        params = specialize_Fag(params)
    return generate_general(params)


def grid_search(
    t: Triple,
    grid: Sequence,
    budget: int = 10000,
    seed: int = 0,
    fag: bool = False,
    workers: Optional[int] = None,
    max_instances: Optional[int] = None,
) -> SearchReport:
    """Try parameter points drawn from ``grid``.

    Exhaustive when |grid|^mu <= budget, otherwise ``budget`` points drawn
    with a seeded generator.  A point is kept when every constraint vanishes,
    [e_{z1}, e_n] != 0 and [e_{z2}, e_{z2+1}] != 0; kept points are confirmed
    with a full Jacobi check of the numeric algebra.
    """
    t = Triple(t.z1, t.z2, t.n).check()
    grid = sorted({rational(x) for x in grid})
    law = search_law(t, fag)
    names = list(law.parameters)
    index = {v: i for i, v in enumerate(names)}
    constr = [_compile(c, index) for c in constraints(law)]
    nondeg = [
        [_compile(c, index) for c in law.bracket_basis(t.z1, t.n).values()],
        [_compile(c, index) for c in law.bracket_basis(t.z2, t.z2 + 1).values()],
    ]
    mu = len(names)
    total = len(grid) ** mu
    if total <= budget:
        mode = "exhaustive"
        points = list(itertools.product(grid, repeat=mu))
    else:
        mode = "sampled"
        rng = random.Random(seed)
        points = [tuple(rng.choice(grid) for _ in range(mu)) for _ in range(budget)]
    indexed = list(enumerate(points))
    workers = default_workers() if workers is None else max(1, workers)
    if workers > 1 and len(indexed) > 2000:
        size = -(-len(indexed) // workers)
        chunks = [(nondeg, constr, indexed[i : i + size]) for i in range(0, len(indexed), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hits = [h for part in pool.map(_search_chunk, chunks) for h in part]
    else:
        hits = _search_chunk((nondeg, constr, indexed))
    hits.sort(key=lambda h: h[0])
    instances = []
    for _, point in hits:
        assignment = dict(zip(names, point))
        g = law.specialize(assignment)
        if not jacobi_check(g):
            instances.append(assignment)
            if max_instances is not None and len(instances) >= max_instances:
                break
    return SearchReport(t, "F_ag" if fag else "F_abg", names, grid, budget, seed, mode, len(points), instances)


def instance_algebra(t: Triple, assignment: Mapping[str, object], fag: bool = False) -> LieAlgebra:
    return search_law(t, fag).specialize(dict(assignment))


# -- derived length ---------------------------------------------------------


@dataclass
class DerivedLengthVerdict:
    ok: bool
    triple: Optional[Triple]
    derived_length: int
    expected: str

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {
            "pass": self.ok,
            "triple": None if self.triple is None else str(self.triple),
            "derived_length": self.derived_length,
            "expected": self.expected,
        }


def derived_length_check(g: LieAlgebra, expected_triple: Optional[Triple] = None) -> DerivedLengthVerdict:
    """Derived length of a numeric non-model filiform algebra against the
    bounds proved for F_ag: at most 3, exactly 2 when z2 = n-1, exactly 3
    when z2 = n-2.  The last two hold for every filiform algebra; outside
    F_ag the first can fail (the (4, 9, 15) family has length 4)."""
    g.require_numeric()
    if jacobi_check(g):
        raise PreconditionFailure("instance is not a Lie algebra")
    if not is_filiform(g):
        raise PreconditionFailure("instance is not filiform")
    inv = invariants_z(g)
    if inv is MODEL:
        raise PreconditionFailure("instance is the model algebra")
    t = Triple(inv.z1, inv.z2, g.n)
    if expected_triple is not None and t != expected_triple:
        raise PreconditionFailure(f"instance realizes {t}, not {expected_triple}")
    dl = derived_length(g)
    if t.z2 == g.n - 1:
        expected, ok = "= 2", dl == 2
    elif t.z2 == g.n - 2:
        expected, ok = "= 3", dl == 3
    else:
        expected, ok = "<= 3", dl <= 3
    return DerivedLengthVerdict(ok, t, dl, expected)


def derived_length_theorem_check(t: Triple, params: Mapping[str, object], full_range: bool = True) -> DerivedLengthVerdict:
    """Build the numeric F_ag instance for ``params`` (names a_i, g_j) and check it."""
    t = Triple(t.z1, t.z2, t.n).check()
    base = GeneralLawParams.from_mapping(t, params, default=0)
    g = generate_general(specialize_Fag(base, full_range=full_range))
    return derived_length_check(g, t)


# -- worked families -------------------------------------------------------

PAPER15_TRIPLE = Triple(4, 9, 15)


def paper15_values(beta33) -> Dict[str, Fraction]:
    b = rational(beta33)
    return {
        "b_3_3": b,
        "a_6": b / 14,
        "g_5": 363 * b,
        "b_1_5": 27 * b,
        "b_2_4": Fraction(21, 5) * b,
        "b_4_2": Fraction(3, 10) * b,
    }


def paper15(beta33=1) -> LieAlgebra:
    """The one-parameter derived-length-4 family at (4, 9, 15)."""
    params = GeneralLawParams.from_mapping(PAPER15_TRIPLE, paper15_values(beta33), default=0)
    return generate_general(params)


PAPER31_TRIPLE = Triple(4, 17, 31)


def paper31_parameters() -> List[str]:
    t = PAPER31_TRIPLE
    names = [alpha_name(t.z2 - t.z1 + 1), gamma_name(t.n - t.z2 - 1)]
    names += [beta_name(14 - l, l) for l in range(2, 14)]
    return names


def paper31_family(with_constraints: bool = True):
    """(symbolic law at (4, 17, 31) in its 14 parameters, Jacobi constraints)."""
    values = {name: "free" for name in paper31_parameters()}
    g = generate_general(GeneralLawParams.from_mapping(PAPER31_TRIPLE, values, default=0))
    return g, (constraints(g) if with_constraints else None)
