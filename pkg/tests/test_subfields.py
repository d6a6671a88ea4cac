import json
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import sextic_galois.subfields as subfields
from sextic_galois.classifier import CUBE, NEITHER, RESOLVENT, GaloisClass, classify
from sextic_galois.errors import AmbiguityError, NoCatalog
from sextic_galois.fields import QuadraticField, Rationals
from sextic_galois.oracle import build_model, canonical_model, is_normal, subgroups
from sextic_galois.subfields import (
    ALPHA,
    BETA,
    CATALOGS,
    CBRT_B,
    ZETA3,
    catalog,
    catalog_for,
    catalog_to_json,
    degree_histogram,
    galois_invariance_check,
    numeric_instance,
    twist,
    verify_catalog,
)

Q = Rationals()
Q3 = QuadraticField(-3)

# one instance per (case, branch) cell
BRANCH_INSTANCES = {
    (1, CUBE): (3, 1, Q),
    (1, RESOLVENT): (0, 2, Q),
    (1, NEITHER): (1, 2, Q),
    (2, CUBE): (1, 1, Q),
    (2, RESOLVENT): (0, 3, Q),
    (2, NEITHER): (3, 3, Q),
    (3, CUBE): (3, 1, Q3),
    (3, RESOLVENT): (0, -2, Q3),
    (3, NEITHER): (1, 2, Q3),
}
EXPECTED_COUNTS = {
    (1, CUBE): 14,
    (1, RESOLVENT): 14,
    (1, NEITHER): 58,
    (2, CUBE): 2,
    (2, RESOLVENT): 4,
    (2, NEITHER): 12,
    (3, CUBE): 4,
    (3, RESOLVENT): 2,
    (3, NEITHER): 12,
}


def report_for(a, b, K):
    return classify(K.from_int(a), K.from_int(b), K)


def label(cell):
    return f"case{cell[0]}-{cell[1]}"


# -- catalog contents ----------------------------------------------------------------


@pytest.mark.parametrize("cell", list(EXPECTED_COUNTS), ids=label)
def test_catalog_counts(cell):
    assert len(CATALOGS[cell]) == EXPECTED_COUNTS[cell]


def test_d6_histogram():
    assert degree_histogram(CATALOGS[1, RESOLVENT]) == {2: 3, 3: 3, 4: 1, 6: 7}
    assert degree_histogram(CATALOGS[1, CUBE]) == {2: 3, 3: 3, 4: 1, 6: 7}


def test_s3xs3_histogram():
    assert degree_histogram(CATALOGS[1, NEITHER]) == {2: 3, 3: 6, 4: 1, 6: 20, 9: 9, 12: 4, 18: 15}


def test_c6_entries():
    entries = CATALOGS[2, CUBE]
    assert [(e.label(), e.degree, e.normal) for e in entries] == [
        ("K(isqrt3)", 2, True),
        ("K(alpha + beta)", 3, True),
    ]


@pytest.mark.parametrize("cell", list(EXPECTED_COUNTS), ids=label)
def test_counts_match_subgroup_enumeration(cell):
    tag = classify_tag(cell)
    model = build_model(GaloisClass(tag, *cell))
    subs = subgroups(model.elements)
    assert len(CATALOGS[cell]) == len(subs) - 2
    by_index = Counter(model.order // len(H) for H in subs if 1 < len(H) < model.order)
    assert degree_histogram(CATALOGS[cell]) == dict(sorted(by_index.items()))
    normal_by_index = Counter(
        model.order // len(H) for H in subs if 1 < len(H) < model.order and is_normal(H, model.elements)
    )
    assert Counter(e.degree for e in CATALOGS[cell] if e.normal) == normal_by_index


def classify_tag(cell):
    from sextic_galois.classifier import DECISION_TABLE

    return DECISION_TABLE[cell]


@pytest.mark.parametrize("cell", list(EXPECTED_COUNTS), ids=label)
def test_degrees_divide_group_order(cell):
    order = GaloisClass(classify_tag(cell), *cell).order
    assert all(order % e.degree == 0 and 1 < e.degree < order for e in CATALOGS[cell])


def test_catalog_for_report():
    report = report_for(0, 2, Q)
    assert catalog(report) == catalog_for(report.group)
    assert len(catalog(report)) == 14


def test_catalog_of_reducible_raises():
    with pytest.raises(NoCatalog):
        catalog(report_for(2, 1, Q))


# -- rendering --------------------------------------------------------------------


def test_rendering():
    assert (ALPHA * ZETA3 + BETA * ZETA3**2).render() == "alpha*zeta3 + beta*zeta3^2"
    assert (CBRT_B * (ALPHA + BETA)).render() == "cbrtb*(alpha + beta)"
    assert twist(ALPHA + BETA, 1).render() == "(alpha + beta)*zeta3"
    assert twist(ALPHA, 0).render() == "alpha"


def test_json_export():
    entries = CATALOGS[2, CUBE]
    data = json.loads(catalog_to_json(entries))
    assert data[1] == {"generators": ["alpha + beta"], "degree": 3, "normal": True, "note": data[1]["note"]}
    assert set(data[0]) == {"generators", "degree", "normal", "note"}
    assert catalog_to_json(entries) == json.dumps(data, separators=(",", ":"))


def test_rendered_atoms_are_ascii_names():
    allowed = {"alpha", "beta", "zeta3", "sqrtD", "sqrtm3D", "isqrt3", "cbrtb"}
    for entries in CATALOGS.values():
        for e in entries:
            for g in e.rendered():
                words = {w for w in "".join(c if c.isalnum() else " " for c in g).split() if not w.isdigit()}
                assert words <= allowed, g


# -- verification against permutation models -----------------------------------------------


@pytest.mark.parametrize("cell", list(BRANCH_INSTANCES), ids=label)
def test_verify_every_branch(cell):
    report = report_for(*BRANCH_INSTANCES[cell])
    assert (report.group.theorem_case, report.group.branch) == cell
    model = build_model(report.group)
    result = verify_catalog(catalog(report), model, numeric_instance(report))
    assert result.failures == []
    assert result.duplicate_stabilizers == []
    assert result.passed


def _check_for(report, text):
    model = build_model(report.group)
    result = verify_catalog(catalog(report), model, numeric_instance(report))
    (check,) = [c for c in result.checks if c.entry.label() == text]
    return model, check


def test_alpha_plus_beta_in_s3xs3():
    _, check = _check_for(report_for(1, 2, Q), "K(alpha + beta)")
    assert check.orbit_size == 9 and check.passed


def test_zeta_in_d6():
    _, check = _check_for(report_for(0, 2, Q), "K(zeta3)")
    assert check.orbit_size == 2 and check.stabilizer_normal and check.passed


def test_alpha_in_d6():
    model, check = _check_for(report_for(0, 2, Q), "K(alpha)")
    assert check.orbit_size == 6
    assert len(check.stabilizer) == 2 and not check.stabilizer_normal
    (g,) = [g for g in check.stabilizer if g != tuple(range(6))]
    act = model.action_of(g)
    assert (act.alpha_slot, act.zeta) == (0, 2)


def test_wrong_degree_is_reported():
    report = report_for(0, 2, Q)
    entry = catalog(report)[0]
    bad = subfields.SubfieldEntry(entry.generators, entry.degree + 1, entry.normal)
    result = verify_catalog([bad], build_model(report.group), numeric_instance(report))
    assert not result.passed and result.failures[0].problems


def test_duplicate_stabilizers_are_reported():
    report = report_for(0, 2, Q)
    entry = [e for e in catalog(report) if e.label() == "K(zeta3)"][0]
    result = verify_catalog([entry, entry], build_model(report.group), numeric_instance(report))
    assert result.duplicate_stabilizers == [(0, 1)]
    assert not result.passed


def test_ambiguity_escalates_then_raises(monkeypatch):
    def always_ambiguous(*args):
        raise subfields._Ambiguous

    monkeypatch.setattr(subfields, "_classes", always_ambiguous)
    report = report_for(0, 2, Q)
    with pytest.raises(AmbiguityError):
        verify_catalog(catalog(report), build_model(report.group), numeric_instance(report))


def test_ambiguity_escalation_recovers(monkeypatch):
    real = subfields._classes
    seen = []

    def flaky(values, eq_tol, sep_tol):
        seen.append(eq_tol)
        if len(seen) == 1:
            raise subfields._Ambiguous
        return real(values, eq_tol, sep_tol)

    monkeypatch.setattr(subfields, "_classes", flaky)
    report = report_for(1, 1, Q)
    result = verify_catalog(catalog(report), build_model(report.group), numeric_instance(report))
    assert result.passed and result.prec == 2 * subfields.START_PREC


# -- independent degree check by integer relations ------------------------------------------


def _algebraic_degree(v, ctx, nmax):
    # smallest n with an integer relation among 1, v, ..., v^n (real and imaginary parts folded by pi)
    for n in range(1, nmax + 1):
        w = [(v**k).real + ctx.pi * (v**k).imag for k in range(n + 1)]
        if ctx.pslq(w, maxcoeff=10**8, maxsteps=10**6) is not None:
            return n
    return None


@pytest.mark.parametrize("ab", [(0, 2), (1, 1), (0, 3), (3, 1), (3, 3), (1, 2)])
def test_generator_degrees_by_pslq(ab):
    report = report_for(*ab, Q)
    inst = numeric_instance(report, 1200)
    ctx = inst.ctx
    ctx.dps = 300
    env = inst.env()
    checked = 0
    for e in catalog(report):
        if len(e.generators) == 1 and e.degree <= 6:
            assert _algebraic_degree(e.generators[0].evaluate(env), ctx, e.degree) == e.degree, e.label()
            checked += 1
    assert checked > 0


# -- root identities ------------------------------------------------------------------------


def _identity_residuals(report):
    inst = numeric_instance(report, 256)
    ctx = inst.ctx
    a = subfields.embed(report.field, report.a, ctx)
    b = subfields.embed(report.field, report.b, ctx)
    al, be = inst.alpha, inst.beta
    r = lambda t: t**3 - 3 * b * t + a * b
    scale = 1 + abs(a) + abs(b)
    tol = scale**3 * ctx.ldexp(1, -200)
    return [abs(al**3 + be**3 + a), abs(al**3 * be**3 - b), abs(r(al * be * (al + be))),
            abs(r(inst.env()["cbrtb"] * (al + be)))], tol


@given(st.integers(-100, 100), st.integers(-100, 100))
def test_root_identities_over_q(a, b):
    report = report_for(a, b, Q)
    if report.group is None:
        return
    residuals, tol = _identity_residuals(report)
    assert all(r < tol for r in residuals)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
@settings(max_examples=30)
def test_root_identities_over_q_sqrt_d(a1, a2, b1, b2):
    K = QuadraticField(-7)
    a = K.add(K.from_int(a1), K.mul(K.from_int(a2), K.parse("s")))
    b = K.add(K.from_int(b1), K.mul(K.from_int(b2), K.parse("s")))
    report = classify(a, b, K)
    if report.group is None:
        return
    residuals, tol = _identity_residuals(report)
    assert all(r < tol for r in residuals)


@pytest.mark.parametrize("cell", [c for c in BRANCH_INSTANCES if c[1] != NEITHER], ids=label)
def test_beta_pairing(cell):
    report = report_for(*BRANCH_INSTANCES[cell])
    inst = numeric_instance(report)
    ctx = inst.ctx
    K = report.field
    if cell[1] == CUBE:
        target, value = report.predicates.cbrt_b, inst.alpha * inst.beta
    else:
        target, value = report.predicates.r_root, inst.alpha * inst.beta * (inst.alpha + inst.beta)
    assert abs(value - subfields.embed(K, target, ctx)) < ctx.ldexp(1, -100)


def test_numeric_instance_rejects_finite_fields():
    from sextic_galois.fields import make_field

    K = make_field("F{7}")
    with pytest.raises(TypeError):
        numeric_instance(classify(0, 3, K))


# -- Galois invariance of a resolvent polynomial ---------------------------------------------


@pytest.mark.parametrize("cell", list(BRANCH_INSTANCES), ids=label)
def test_invariance_holds_for_predicted_group(cell):
    report = report_for(*BRANCH_INSTANCES[cell])
    assert galois_invariance_check(build_model(report.group), numeric_instance(report))


@pytest.mark.parametrize(
    "ab, wrong",
    [((0, 2), "C6"), ((0, 2), "S3"), ((1, 2), "D6"), ((1, 2), "C3xS3"), ((3, 3), "C6"), ((3, 3), "S3")],
)
def test_invariance_fails_for_smaller_wrong_group(ab, wrong):
    report = report_for(*ab, Q)
    assert not galois_invariance_check(canonical_model(wrong), numeric_instance(report))


def test_invariance_rejects_fractional_coefficients():
    report = classify(Fraction(1, 2), Fraction(3), Q)
    with pytest.raises(ValueError):
        galois_invariance_check(build_model(report.group), numeric_instance(report))
