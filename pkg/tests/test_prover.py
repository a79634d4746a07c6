import json
from fractions import Fraction

import pytest

from filiform.errors import NotInRegion, PreconditionFailure
from filiform.exactmath import Polynomial, parse_polynomial
from filiform.family import enumerate_empty_region, generate_general, GeneralLawParams, bratzlavsky_adapted
from filiform.liealg import jacobi_check, model_algebra
from filiform.prover import (
    PAPER15_TRIPLE,
    binary_resultant,
    constraints,
    derived_length_check,
    derived_length_theorem_check,
    emptiness_certificate,
    grid_search,
    instance_algebra,
    paper15,
    paper15_values,
    paper31_family,
    paper31_parameters,
    search_law,
)
from filiform.series import Triple, classify, derived_series, invariants_z


def test_constraints_small():
    law = search_law(Triple(4, 6, 9))
    cs = constraints(law)
    assert len(cs) == 12
    assert search_law(Triple(4, 5, 6)) and constraints(search_law(Triple(4, 5, 6))) == []
    for c in cs:
        assert c.sorted_terms()[0][1] == 1
        assert c.degree() <= 2
    keys = [(c.degree(), len(c.terms), str(c)) for c in cs]
    assert keys == sorted(keys)
    assert constraints(model_algebra(6)) == []


def test_constraints_vanish_on_found_instances():
    t = Triple(4, 5, 8)
    report = grid_search(t, [-1, 0, 1], budget=3000, workers=1)
    law = search_law(t)
    assert report.instances
    for inst in report.instances:
        assert all(c.evaluate(inst) == 0 for c in constraints(law))


def test_binary_resultant():
    # x^2 - y^2 and x^2 - 4y^2 have no common root; (x-y)(x-2y) and x(x-y) do
    assert binary_resultant((1, 0, -1), (1, 0, -4)) != 0
    assert binary_resultant((1, -3, 2), (1, -1, 0)) == 0
    assert binary_resultant((0, 0, 1), (0, 0, 3)) == 0


def test_certificate_at_4_6_10():
    cert = emptiness_certificate(Triple(4, 6, 10))
    v = cert.coefficients.values
    assert (v["a0"], v["b0"], v["c1"], v["a_prime"], v["b_prime"]) == (-15, -14, -15, 2, 20)
    assert (cert.coefficients.lhs, cert.coefficients.rhs) == (392, -7575)
    assert cert.coefficients.sign_ok and cert.coefficients.relation_violated
    assert cert.alpha1_coefficient == -30
    assert [s.forced for s in cert.steps] == [True, True]
    assert [s.resultant for s in cert.steps] == [-195, 576]
    assert cert.terminal_ok and cert.conclusion
    d = json.loads(cert.to_json())
    assert d["conclusion"] is True and d["triple"] == "(4,6,10)"
    assert "conclusion    true" in cert.to_text()


def test_certificate_outside_region():
    with pytest.raises(NotInRegion):
        emptiness_certificate(Triple(4, 5, 8))


def test_certificates_small_region():
    for n in range(10, 13):
        for t in enumerate_empty_region(n):
            assert emptiness_certificate(t).conclusion, t


def test_grid_search_exhaustive_small():
    report = grid_search(Triple(4, 4, 5), [0, 1])
    assert report.mode == "exhaustive"
    assert report.candidates_tested == 2
    assert report.instances == [{"a_1": 1}]
    assert report.label.startswith("heuristic evidence")


def test_grid_search_is_deterministic():
    t = Triple(4, 7, 9)
    a = grid_search(t, [-1, 0, 1], budget=500, seed=4, fag=True, workers=1)
    b = grid_search(t, [-1, 0, 1], budget=500, seed=4, fag=True, workers=1)
    assert a.mode == "sampled"
    assert a.instances == b.instances
    assert a.as_dict() == b.as_dict()


def test_grid_search_parallel_matches_serial():
    t = Triple(4, 7, 9)
    serial = grid_search(t, [-1, 0, 1], budget=3000, seed=2, fag=True, workers=1)
    parallel = grid_search(t, [-1, 0, 1], budget=3000, seed=2, fag=True, workers=3)
    assert serial.instances == parallel.instances


def test_grid_search_empty_region_finds_nothing():
    report = grid_search(Triple(4, 6, 10), [-1, 0, 1], budget=300, fag=True)
    assert report.instances == []


def test_found_instances_have_length_three_when_z2_is_n_minus_2():
    t = Triple(4, 7, 9)
    report = grid_search(t, [-1, 0, 1], budget=800, fag=True, max_instances=5)
    assert report.instances
    for inst in report.instances:
        g = instance_algebra(t, inst, fag=True)
        assert jacobi_check(g) == []
        verdict = derived_length_check(g, t)
        assert verdict.ok and verdict.derived_length == 3


def test_derived_length_check_cases():
    v = derived_length_check(bratzlavsky_adapted(9, [1, 2, 0, 0, 0]))
    assert v.ok and v.derived_length == 2 and v.expected == "= 2"
    with pytest.raises(PreconditionFailure):
        derived_length_check(model_algebra(7))
    with pytest.raises(PreconditionFailure):
        derived_length_check(bratzlavsky_adapted(7, [1, 0, 0]), Triple(4, 5, 7))
    v = derived_length_theorem_check(Triple(4, 4, 5), {"a_1": 1})
    assert v.ok and v.derived_length == 2


def test_paper15_family():
    g = paper15(1)
    assert jacobi_check(g) == []
    report = classify(g)
    assert report.ds_dims == [15, 13, 9, 1, 0]
    assert (report.z1, report.z2) == (4, 9)
    assert not derived_length_check(g).ok  # outside F_ag the bound 3 fails
    assert paper15_values(Fraction(1, 2))["a_6"] == Fraction(1, 28)
    assert paper15(0) == model_algebra(15)


def test_paper15_symbolic_relations_are_needed():
    # perturbing one of the relations breaks the Jacobi identity
    values = paper15_values(1)
    values["g_5"] += 1
    g = generate_general(GeneralLawParams.from_mapping(PAPER15_TRIPLE, values))
    assert jacobi_check(g)


def test_paper31_family():
    names = paper31_parameters()
    assert len(names) == 14
    g, cs = paper31_family()
    assert set(g.parameters) == set(names)
    assert cs and max(c.degree() for c in cs) <= 2
