import pytest

from bounds import (
    INF,
    R5_NOTE,
    RULES,
    BoundInterval,
    InconsistentAssertionsError,
    analyze_map,
    analyze_space,
    cup_length,
    nil_index,
    nil_ker_one_f,
    positive_part,
    product_map_bounds,
    promote_connectivity,
    sec_bounds,
    tc_map_bounds,
    zcl,
)
from catalog import builtin_map, builtin_space
from cohomology import Connectivity, cup_ring
from exact_linalg import FieldSpec
from simplicial import Assertions, MapAssertions, NotSurjectiveError, build_complex, validate_map


def _space(name, fields, **extra):
    entry = builtin_space(name)
    assertions = entry.assertions.merged(Assertions(**extra)) if extra else entry.assertions
    return analyze_space(entry.model, fields, assertions, entry.known)


def _map(name, fields):
    entry = builtin_map(name)
    return analyze_map(entry.model, fields, entry.assertions, entry.domain.known, entry.codomain.known, entry.known)


def test_nil_of_zero_subspace(space, Q):
    R = cup_ring(space('torus'), Q)
    assert nil_index(R, Q.zeros((0, R.dim))).value == 1


def test_nil_rejects_degree_zero(space, Q):
    R = cup_ring(space('torus'), Q)
    with pytest.raises(ValueError):
        nil_index(R, Q.identity(R.dim)[:1])


def test_nil_witness_is_nonzero_product(space, F2):
    R = cup_ring(space('rp2'), F2)
    K = positive_part(R)
    nil = nil_index(R, K)
    assert nil.value == 3
    assert len(nil.witness) == 2
    product = R.multiply(K[nil.witness[0]], K[nil.witness[1]])
    assert product.any()


@pytest.mark.parametrize('name,p,value', [
    ('point', 0, 1),
    ('circle', 0, 2),
    ('sphere2', 0, 2),
    ('torus', 0, 3),
    ('rp2', 0, 1),
    ('rp2', 2, 3),
    ('wedge_two_circles', 0, 2),
    ('genus2_surface', 0, 3),
])
def test_cup_length(space, name, p, value):
    assert cup_length(space(name), FieldSpec(p)).value == value


@pytest.mark.parametrize('name,p,value', [
    ('point', 0, 1),
    ('circle', 0, 2),
    ('sphere2', 0, 3),
    ('sphere3', 0, 2),
    ('torus', 0, 3),
    ('rp2', 2, 4),
    ('wedge_two_circles', 0, 3),
    ('genus2_surface', 0, 5),
])
def test_zcl(space, name, p, value):
    assert zcl(space(name), FieldSpec(p)).value == value


def test_nil_ker_one_f_collapses_to_zcl(space, simplicial_map, Q, F2):
    for field in (Q, F2):
        assert nil_ker_one_f(simplicial_map('identity:torus'), field).value == zcl(space('torus'), field).value


def test_nil_ker_one_f_examples(simplicial_map, Q):
    assert nil_ker_one_f(simplicial_map('constant:sphere2'), Q).value == 1
    assert nil_ker_one_f(simplicial_map('circle_double_cover'), Q).value == 2


def test_interval_records_binding_rules():
    b = BoundInterval('TC(f)')
    assert b.as_tuple() == (1, 'inf')
    b.raise_lower('R1', 2)
    b.lower_upper('R7', 4)
    b.lower_upper('R11', 4)
    b.lower_upper('R5', 7)
    assert str(b) == '[2, 4]'
    assert b.binding('upper') == ['R7', 'R11']
    assert b.binding('lower') == ['R1']
    assert b.contains(3) and not b.contains(5)


def test_interval_keeps_tightest_per_rule():
    b = BoundInterval('sec(f)')
    b.lower_upper('sec.tc', 5)
    b.lower_upper('sec.tc', 3)
    b.lower_upper('sec.tc', 4)
    assert [a.value for a in b.trace] == [3]
    assert b.hi == 3


def test_interval_ignores_infinite_upper():
    b = BoundInterval('cat(X)')
    assert not b.lower_upper('cat.dimension', INF)
    assert b.trace == []


def test_inconsistent_interval_names_rules():
    b = BoundInterval('TC(f)')
    b.raise_lower('R1', 3)
    b.lower_upper('R4', 2)
    with pytest.raises(InconsistentAssertionsError, match='R1.*R4'):
        b.check()


@pytest.mark.parametrize('f,g,expected', [
    ((1, 1), (1, 1), (1, 1)),
    ((2, 2), (2, 2), (2, 3)),
    ((2, 3), (1, 1), (2, 3)),
])
def test_product_map_bounds(f, g, expected):
    bf, bg = BoundInterval('f', *f), BoundInterval('g', *g)
    assert product_map_bounds(bf, bg).as_tuple() == expected


def test_promote_connectivity():
    conn = Connectivity(1, False, (1, 0, 1), ((), (), ()))
    assert promote_connectivity(Assertions(), conn) == 0
    assert promote_connectivity(Assertions(is_simply_connected=True), conn) == 1
    assert promote_connectivity(Assertions(is_contractible=True), conn) is None
    assert promote_connectivity(Assertions(asserted_connectivity=1), conn) == 1
    acyclic = Connectivity(2, True, (1, 0, 0), ((), (), ()))
    assert promote_connectivity(Assertions(is_simply_connected=True), acyclic) is None


@pytest.mark.parametrize('name,cat,tc', [
    ('point', (1, 1), (1, 1)),
    ('circle', (2, 2), (2, 2)),
    ('sphere2', (2, 2), (3, 3)),
    ('sphere3', (2, 2), (2, 2)),
    ('sphere4', (2, 2), (3, 3)),
    ('torus', (3, 3), (3, 3)),
    ('rp2', (3, 3), (4, 5)),
    ('wedge_two_circles', (2, 2), (3, 3)),
    ('icosahedron', (2, 2), (3, 3)),
    ('path7', (1, 1), (1, 1)),
])
def test_space_intervals(fields, name, cat, tc):
    analysis = _space(name, fields)
    assert analysis.cat.as_tuple() == cat
    assert analysis.tc.as_tuple() == tc


def test_sphere2_uses_dimension_over_connectivity(fields):
    analysis = _space('sphere2', fields)
    assert analysis.cat.binding('upper') == ['cat.dim_conn']
    assert 'tc.dim_conn' in analysis.tc.binding('upper')
    assert 'tc.zcl' in analysis.tc.binding('lower')


def test_circle_without_h_group(fields, space):
    analysis = analyze_space(space('circle'), fields)
    assert analysis.cat.as_tuple() == (2, 2)
    assert analysis.tc.as_tuple() == (2, 3)


def test_single_simplex_is_contractible(fields):
    X = build_complex([['a', 'b', 'c']])
    analysis = analyze_space(X, fields)
    assert analysis.tc.as_tuple() == (1, 1)
    assert 'tc.contractible' in analysis.tc.binding('upper')


@pytest.mark.parametrize('name,extra', [
    ('torus', {'is_contractible': True}),
    ('torus', {'is_simply_connected': True}),
    ('sphere2', {'asserted_connectivity': 2}),
    ('rp2', {'is_simply_connected': True}),
])
def test_assertions_contradicting_homology(fields, name, extra):
    with pytest.raises(InconsistentAssertionsError):
        _space(name, fields, **extra)


def test_catalog_value_inside_rule_interval(fields):
    analysis = _space('genus2_surface', fields)
    assert analysis.tc.as_tuple() == (5, 5)
    assert 'tc.zcl' in analysis.tc.binding('lower')
    assert 'tc.product' in analysis.tc.binding('upper')
    sources = {a.source for a in analysis.tc.trace if a.rule == 'catalog'}
    assert sources == {'catalog'}


def test_sec_bounds(simplicial_map):
    f = simplicial_map('circle_double_cover')
    assert sec_bounds(f).as_tuple() == (1, 2)
    assert sec_bounds(f, Assertions(admits_section=True)).as_tuple() == (1, 1)
    assert sec_bounds(simplicial_map('constant:sphere2')).as_tuple() == (1, 1)


@pytest.mark.parametrize('name,expected', [
    ('constant:sphere2', (1, 1)),
    ('circle_double_cover', (2, 2)),
    ('circle_cover:3', (2, 2)),
    ('torus_projection', (2, 2)),
    ('wedge_cover_patch', (2, 2)),
    ('s2_to_rp2', (3, 4)),
    ('identity:torus', (3, 3)),
])
def test_map_intervals(fields, name, expected):
    assert _map(name, fields).tc.as_tuple() == expected


def test_s2_to_rp2_binding_rules(fields):
    analysis = _map('s2_to_rp2', fields)
    assert 'R11' in analysis.tc.binding('upper')
    assert 'R1' in analysis.tc.binding('lower')
    r11 = next(a for a in analysis.tc.trace if a.rule == 'R11')
    assert r11.note
    assert r11.inputs['dim Y'] == 2


def test_skeleton_stage_count_drives_sec_and_r5(fields):
    analysis = _map('s2_to_rp2', fields)
    assert analysis.sec.as_tuple() == (1, 3)
    skeleton = next(a for a in analysis.sec.trace if a.rule == 'sec.skeleton')
    assert skeleton.value == skeleton.inputs['dim Y'] + 1
    r5 = next(a for a in analysis.tc.trace if a.rule == 'R5')
    assert r5.value == r5.inputs['cat(X).hi'] * (r5.inputs['dim Y'] + 2) - 1
    assert r5.note == R5_NOTE


def test_constant_map_reports_section(fields):
    analysis = _map('constant:sphere2', fields)
    assert analysis.corollaries


def test_double_cover_binding_r8(fields):
    analysis = _map('circle_double_cover', fields)
    assert 'R8' in analysis.tc.binding('upper')
    assert analysis.nil['q'].value == 2


def test_not_surjective(fields):
    path = build_complex([['a', 'b']])
    circle = builtin_space('circle').model
    f = validate_map({'a': '0', 'b': '1'}, path, circle)
    with pytest.raises(NotSurjectiveError):
        tc_map_bounds(f, fields)


def test_no_fibration_means_no_r7(fields, simplicial_map):
    f = simplicial_map('circle_double_cover')
    analysis = analyze_map(f, fields, MapAssertions())
    rules = {a.rule for a in analysis.tc.trace}
    assert not rules & {'R7', 'R8', 'R11', 'R12'}
    assert analysis.tc.lo == 2


def test_section_over_contractible_domain_is_inconsistent(fields):
    entry = builtin_map('wedge_cover_patch')
    assertions = entry.assertions.merged(MapAssertions(map=Assertions(admits_section=True)))
    with pytest.raises(InconsistentAssertionsError, match='R1'):
        analyze_map(entry.model, fields, assertions)


def test_trace_rules_are_registered(fields):
    for name in ('s2_to_rp2', 'wedge_cover_patch', 'torus_projection', 'identity:rp2'):
        analysis = _map(name, fields)
        for interval in (analysis.tc, analysis.sec, analysis.cat_product, analysis.domain.cat, analysis.codomain.tc):
            assert interval.lo <= interval.hi
            assert all(a.rule in RULES for a in interval.trace)
