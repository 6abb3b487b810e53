import pytest

from catalog import polygon, rp2_model, torus_model
from simplicial import (
    Assertions,
    NotSimplicialError,
    ParseError,
    SimplicialError,
    build_complex,
    compose,
    connected_sum,
    identity_map,
    parse_map_assertions,
    parse_space_assertions,
    product_complex,
    skeleton,
    validate_map,
)


def test_triangle_boundary():
    X = build_complex([['0', '1'], ['1', '2'], ['0', '2']], name='circle')
    assert X.dim == 1
    assert X.f_vector == (3, 3)
    assert X.euler_characteristic == 0
    assert X.contains(['2', '0'])
    assert not X.contains(['0', '1', '2'])


def test_faces_are_closed_and_sorted():
    X = build_complex([['c', 'a', 'b']])
    assert X.simplices[1] == (('a', 'b'), ('a', 'c'), ('b', 'c'))
    assert X.facets == (('a', 'b', 'c'),)


def test_non_maximal_facets_are_dropped():
    X = build_complex([['a', 'b', 'c'], ['a', 'b'], ['d']])
    assert X.facets == (('d',), ('a', 'b', 'c'))


def test_isolated_vertices_from_vertex_list():
    X = build_complex([['a', 'b']], vertices=['a', 'b', 'z'])
    assert X.f_vector == (3, 1)
    assert ('z',) in X.facets


@pytest.mark.parametrize('facets,vertices', [
    ([[]], None),
    ([['a', 'a']], None),
    ([['a', 'b']], ['a']),
])
def test_build_complex_rejects(facets, vertices):
    with pytest.raises(SimplicialError):
        build_complex(facets, vertices=vertices)


def test_rp2_model():
    X = rp2_model()
    assert X.f_vector == (6, 15, 10)
    assert X.euler_characteristic == 1


def test_torus_model():
    X = torus_model()
    assert X.f_vector == (7, 21, 14)
    assert X.euler_characteristic == 0


def test_validate_map_records_surjectivity():
    hexagon, circle = polygon(6), polygon(3)
    f = validate_map({v: str(int(v) % 3) for v in hexagon.vertices}, hexagon, circle)
    assert f.is_surjective
    assert f('4') == '1'
    assert f.image(('3', '4')) == ('0', '1')


def test_validate_map_not_surjective():
    path = build_complex([['a', 'b']])
    circle = polygon(3)
    f = validate_map({'a': '0', 'b': '1'}, path, circle)
    assert not f.is_surjective


def test_validate_map_rejects_non_simplicial():
    path = build_complex([['a', 'b']])
    points = build_complex([['x'], ['y']])
    with pytest.raises(NotSimplicialError):
        validate_map({'a': 'x', 'b': 'y'}, path, points)


def test_validate_map_rejects_partial_and_unknown():
    path = build_complex([['a', 'b']])
    with pytest.raises(SimplicialError):
        validate_map({'a': 'a'}, path, path)
    with pytest.raises(SimplicialError):
        validate_map({'a': 'a', 'b': 'b', 'c': 'a'}, path, path)
    with pytest.raises(NotSimplicialError):
        validate_map({'a': 'a', 'b': 'q'}, path, path)


def test_identity_and_compose():
    big, hexagon, circle = polygon(12), polygon(6), polygon(3)
    f = validate_map({v: str(int(v) % 6) for v in big.vertices}, big, hexagon, name='f')
    g = validate_map({v: str(int(v) % 3) for v in hexagon.vertices}, hexagon, circle, name='g')
    h = compose(f, g)
    assert h.domain == big and h.codomain == circle
    assert h('7') == '1'
    assert compose(identity_map(big), f).vertex_map == f.vertex_map
    with pytest.raises(SimplicialError):
        compose(g, f)


def test_product_of_edges():
    edge = build_complex([['0', '1']])
    P = product_complex(edge, edge)
    assert P.dim == 2
    assert P.f_vector == (4, 5, 2)
    assert P.euler_characteristic == 1


def test_product_of_circles_is_a_torus():
    circle = polygon(3)
    P = product_complex(circle, circle)
    assert P.f_vector == (9, 27, 18)
    assert P.euler_characteristic == 0
    assert '0|2' in P.vertices


def test_skeleton():
    X = rp2_model()
    one = skeleton(X, 1)
    assert one.dim == 1
    assert one.f_vector == (6, 15)
    assert skeleton(X, 5) is X
    with pytest.raises(SimplicialError):
        skeleton(X, -1)


def test_connected_sums():
    klein = connected_sum(rp2_model(), rp2_model())
    assert klein.f_vector[0] == 9
    assert klein.euler_characteristic == 0
    genus2 = connected_sum(torus_model(), torus_model())
    assert genus2.f_vector[0] == 11
    assert genus2.euler_characteristic == -2


def test_connected_sum_needs_top_facets():
    with pytest.raises(SimplicialError):
        connected_sum(rp2_model(), polygon(4))
    with pytest.raises(SimplicialError):
        connected_sum(rp2_model(), rp2_model(), x_facet=['1', '2'])


def test_assertion_normalisation():
    a = Assertions(is_contractible=True)
    assert a.is_simply_connected
    b = Assertions(covering_sheets=2, admits_section=True)
    assert b.is_covering and b.admits_homotopy_section
    assert Assertions(asserted_connectivity=1).is_simply_connected
    with pytest.raises(ParseError):
        Assertions(asserted_connectivity=-1)


def test_parse_space_assertions():
    a = parse_space_assertions(['h-group', 'connectivity:2'])
    assert a.is_h_group
    assert a.asserted_connectivity == 2
    assert 'connectivity:2' in a.tokens()


@pytest.mark.parametrize('token', ['fibration', 'nonsense', 'connectivity:x', 'h-group:3'])
def test_parse_space_assertions_rejects(token):
    with pytest.raises(ParseError):
        parse_space_assertions([token])


def test_parse_map_assertions_routes_tokens():
    m = parse_map_assertions(['fibration', 'covering:2', 'contractible', 'h-group', 'codomain:simply-connected'])
    assert m.map.is_fibration and m.map.covering_sheets == 2
    assert m.domain.is_contractible
    assert m.codomain.is_h_group and m.codomain.is_simply_connected
    assert not m.domain.is_h_group


def test_parse_map_assertions_rejects_prefixed_map_flags():
    with pytest.raises(ParseError):
        parse_map_assertions(['domain:fibration'])


def test_merged_keeps_both_sides():
    a = parse_space_assertions(['h-group']).merged(parse_space_assertions(['simply-connected']))
    assert a.is_h_group and a.is_simply_connected
