import numpy as np
import pytest

from curvematch.errors import InstanceTooLargeError, InvalidFormulaError
from curvematch.gadgets import (
    audit_literal_boundaries,
    audit_points_in_cylinders,
    audit_regions,
    gen_discrete_cipsm_instance,
    gen_imprecise_subset_instance,
    gen_unique_subset_instance,
    is_simple,
    transfer_chain,
    verify_equivalence,
)
from curvematch.imprecise import discrete_cipsm_nonunique_decide
from curvematch.reductions import (
    CnfFormula,
    enumerate_3b2,
    example_formula,
    sat_bruteforce,
    validate_3b2,
    validate_relaxed,
)

T, F = True, False
SAT_MICRO = CnfFormula(1, [[(0, T)]])
UNSAT_MICRO = CnfFormula(1, [[(0, T)], [(0, F)]])


def test_validate_3b2():
    assert validate_3b2(example_formula())
    assert not validate_3b2(CnfFormula(1, [[(0, T), (0, T), (0, T)]]))
    assert validate_3b2(CnfFormula(0, []))
    assert validate_relaxed(UNSAT_MICRO) and not validate_3b2(UNSAT_MICRO)
    assert not validate_relaxed(CnfFormula(1, [[(0, T)]] * 3))


def test_sat_examples():
    f = example_formula()
    assert f.evaluate((T, T, T))
    ok, a = sat_bruteforce(f)
    assert ok and f.evaluate(a)
    assert not sat_bruteforce(CnfFormula(1, [[(0, T)] * 3, [(0, F)] * 3]))[0]
    assert sat_bruteforce(CnfFormula(0, [])) == (True, ())
    with pytest.raises(InstanceTooLargeError):
        sat_bruteforce(CnfFormula(25, []))


def test_formula_json_roundtrip_and_errors():
    f = example_formula()
    assert CnfFormula.from_json(f.to_json()) == f
    with pytest.raises(InvalidFormulaError):
        CnfFormula(1, [[(3, T)]])
    with pytest.raises(InvalidFormulaError):
        CnfFormula.from_json({"num_vars": 1})


def test_enumeration_counts():
    fs = list(enumerate_3b2(3))
    assert len(fs) == 12 and len(set(fs)) == 12
    assert all(validate_3b2(f) for f in fs)
    assert list(enumerate_3b2(2)) == []
    assert example_formula().clauses in {f.clauses for f in fs} or validate_3b2(example_formula())


def test_generators_reject_invalid():
    for gen in (gen_unique_subset_instance, gen_imprecise_subset_instance, gen_discrete_cipsm_instance):
        with pytest.raises(InvalidFormulaError):
            gen(UNSAT_MICRO)
        with pytest.raises(InvalidFormulaError):
            gen(CnfFormula(1, []), strict=False)


def test_unique_subset_structure_on_example():
    inst = gen_unique_subset_instance(example_formula())
    c = inst.counts
    assert c["variables"] == 3 and c["clauses"] == 4
    assert c["variable_corners"] == 6
    assert c["corners"] == c["variable_corners"] + c["clause_corners"] == 56
    assert (c["vertices"], c["points"]) == (177, 113)
    # three per corner, two per valley rim, start, lead-in pair and end
    assert c["vertices"] == 3 * c["corners"] + 2 * c["variables"] + 3
    assert audit_points_in_cylinders(inst) == []
    dev = audit_literal_boundaries(inst)
    assert len(dev) == 12 and max(dev.values()) <= 1e-9 * inst.scale
    assert len(inst.annotations) == len(inst.points)


def test_sizes_linear():
    rows = []
    for m in (1, 2, 4, 8):
        clauses = [[(v, T)] for v in range(m)] + [[(v, F)] for v in range(m)]
        c = gen_unique_subset_instance(CnfFormula(m, clauses), strict=False).counts
        rows.append((m, c["corners"], c["points"]))
    for m, corners, points in rows:
        # 2 per variable, at most 2 + 4 * 2 per one-literal clause
        assert corners <= 2 * m + 10 * 2 * m
        assert points <= 2 * corners + 4 * m + 3


def test_scale_equivariance():
    f = example_formula()
    for gen in (gen_unique_subset_instance, gen_imprecise_subset_instance, gen_discrete_cipsm_instance):
        a = gen(f, 2.0)
        b = gen(f, 1.0).scaled(2.0)
        assert a.to_json() == b.to_json()
        assert a.eps == 2.0


def test_imprecise_region_count():
    u = gen_unique_subset_instance(example_formula())
    i = gen_imprecise_subset_instance(example_formula())
    assert len(i.regions) == len(u.points) - 2 * 3
    V = i.curve.vertices
    from curvematch.geom import point_segment_distance

    for r in i.regions:
        assert min(point_segment_distance(r.a, (a, b)) for a, b in zip(V[:-1], V[1:])) <= i.eps + 1e-9


def test_unique_subset_micro_formulas():
    assert verify_equivalence(SAT_MICRO, "unique-subset").agreement
    rep = verify_equivalence(UNSAT_MICRO, "unique-subset")
    assert rep.agreement and rep.feasible is False


def test_discrete_generator_audits():
    for f in list(enumerate_3b2(3)) + [SAT_MICRO, UNSAT_MICRO]:
        inst = gen_discrete_cipsm_instance(f, strict=validate_3b2(f))
        assert is_simple(inst.curve)
        assert audit_regions(inst) == []
        assert len(inst.regions) == 4 * f.num_vars + sum(len(c) for c in f.clauses)


def test_transfer_chain():
    for length in (1, 2, 3, 6):
        for with_a in (True, False):
            g = transfer_chain(length, with_a)
            ok, real = discrete_cipsm_nonunique_decide(g.curve, g.regions, g.eps)
            assert ok == with_a
            if ok:
                # every transfer region resolves to its forward end
                assert np.allclose(real.chosen[1:], g.curve.vertices[1:], atol=1.0)


def test_is_simple():
    assert is_simple([(0, 0), (1, 0), (1, 1)])
    assert not is_simple([(0, 0), (2, 0), (1, 1), (1, -1)])
    assert not is_simple([(0, 0), (2, 0), (1, 0)])


def test_report_json():
    rep = verify_equivalence(UNSAT_MICRO, "discrete-cipsm")
    d = rep.to_json()
    assert d["report"] == "agreement: infeasible <=> UNSAT"
    rep = verify_equivalence(SAT_MICRO, "imprecise-subset")
    assert rep.agreement is None and all(rep.audits.values())
