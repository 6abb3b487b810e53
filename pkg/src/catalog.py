import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from bounds import KnownValue
from simplicial import (
    Assertions,
    MapAssertions,
    SimplicialComplex,
    build_complex,
    connected_sum,
    product_complex,
    validate_map,
)


logger = logging.getLogger(__name__)


class UnknownEntryError(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    model: object
    assertions: object
    known: dict = field(default_factory=dict)
    description: str = ''
    domain: object = None
    codomain: object = None

    @property
    def kind(self):
        return 'space' if isinstance(self.model, SimplicialComplex) else 'map'


SPHERE_CITATION = 'TC(S^n) = 2 for odd n and 3 for even n; the dimension-to-connectivity estimate is not sharp for odd spheres'
WEDGE_TC = KnownValue(3, 'TC(S^1 v S^1) = 3')
GENUS2_CAT = KnownValue(3, 'cat(S) = 3 for the closed orientable surface of genus 2')
GENUS2_TC = KnownValue(5, 'TC(S) = 5 for the closed orientable surface of genus 2')
BASE_PROJECTION_TC = KnownValue(2, 'TC(pr: X x F -> X) = TC(X), here X = S^1')
WEDGE_COVER_TC = KnownValue(2, 'TC(p) = cat(S^1 v S^1) = 2 for its universal covering')

SIMPLY_CONNECTED = Assertions(is_simply_connected=True)
H_GROUP = Assertions(is_h_group=True)


def polygon(n, name=''):
    if n < 3:
        raise ValueError(f'a polygon needs at least 3 vertices, got {n}')
    return build_complex([[str(i), str((i + 1) % n)] for i in range(n)], name=name or f'polygon:{n}')


def simplex_boundary(n, name=''):
    """Boundary of the (n+1)-simplex, an n-sphere."""
    return build_complex(combinations([str(i) for i in range(n + 2)], n + 1), name=name or f'sphere{n}')


def rp2_model():
    facets = ['123', '134', '145', '156', '162', '235', '346', '452', '563', '624']
    return build_complex([list(t) for t in facets], name='rp2')


def torus_model():
    facets = []
    for i in range(7):
        facets.append([str(i), str((i + 1) % 7), str((i + 3) % 7)])
        facets.append([str(i), str((i + 2) % 7), str((i + 3) % 7)])
    return build_complex(facets, name='torus')


def genus2_model():
    """10 vertices: a handle through h0 h1 h2 joins the holes left by removing 013 and 245 from the torus."""
    removed = ({'0', '1', '3'}, {'2', '4', '5'})
    facets = [f for f in torus_model().facets if set(f) not in removed]
    handle = ['0 1 h1', '0 h1 h0', '1 3 h2', '1 h2 h1', '3 0 h0', '3 h0 h2',
              '2 5 h2', '2 h2 h0', '5 4 h1', '5 h1 h2', '4 2 h0', '4 h0 h1']
    return build_complex([list(f) for f in facets] + [t.split() for t in handle], name='genus2_surface')


def icosahedron_model():
    """Antipodally symmetric icosahedron: p_k and n_k are antipodes."""
    def upper(r):
        return f'p{r % 5 + 2}'

    def lower(r):
        return f'n{r % 5 + 2}'

    facets = []
    for r in range(5):
        facets.append(['p1', upper(r), upper(r + 1)])
        facets.append(['n1', lower(r), lower(r + 1)])
        facets.append([upper(r), upper(r + 1), lower(r + 3)])
        facets.append([lower(r), lower(r + 1), upper(r + 3)])
    return build_complex(facets, name='icosahedron')


def wedge_model():
    return build_complex(
        [['o', 'a1'], ['a1', 'a2'], ['a2', 'o'], ['o', 'b1'], ['b1', 'b2'], ['b2', 'o']],
        name='wedge_two_circles',
    )


def path_model(n=7):
    return build_complex([[f'p{i}', f'p{i + 1}'] for i in range(n - 1)], name=f'path{n}')


def _sphere_entry(n):
    value = 2 if n % 2 else 3
    known = {'tc': KnownValue(value, SPHERE_CITATION)}
    if n == 1:
        assertions = H_GROUP
    elif n == 3:
        assertions = Assertions(is_h_group=True, is_simply_connected=True)
    else:
        assertions = SIMPLY_CONNECTED
    return CatalogEntry(f'sphere{n}', simplex_boundary(n), assertions, known, f'boundary of the {n + 1}-simplex')


def _space_builders():
    return {
        'point': lambda: CatalogEntry('point', build_complex([['pt']], name='point'), Assertions(is_contractible=True),
                                      description='a single vertex'),
        'circle': lambda: CatalogEntry('circle', build_complex([['0', '1'], ['1', '2'], ['0', '2']], name='circle'),
                                       H_GROUP, description='triangle boundary'),
        'sphere1': lambda: _sphere_entry(1),
        'sphere2': lambda: _sphere_entry(2),
        'sphere3': lambda: _sphere_entry(3),
        'sphere4': lambda: _sphere_entry(4),
        'rp2': lambda: CatalogEntry('rp2', rp2_model(), Assertions(), description='6-vertex real projective plane'),
        'torus': lambda: CatalogEntry('torus', torus_model(), H_GROUP, description='7-vertex torus'),
        'torus9': lambda: CatalogEntry('torus9', product_complex(builtin_space('circle').model,
                                                                 builtin_space('circle').model, name='torus9'),
                                       H_GROUP, description='product triangulation of two triangle circles'),
        'klein_bottle': lambda: CatalogEntry('klein_bottle', connected_sum(rp2_model(), rp2_model(), name='klein_bottle'),
                                             Assertions(), description='rp2 # rp2'),
        'wedge_two_circles': lambda: CatalogEntry('wedge_two_circles', wedge_model(), Assertions(), {'tc': WEDGE_TC},
                                                  'two triangles sharing the vertex o'),
        'genus2_surface': lambda: CatalogEntry('genus2_surface', genus2_model(), Assertions(),
                                               {'cat': GENUS2_CAT, 'tc': GENUS2_TC},
                                               '10-vertex surface of genus 2, a handle on the 7-vertex torus'),
        'icosahedron': lambda: CatalogEntry('icosahedron', icosahedron_model(), SIMPLY_CONNECTED,
                                            description='icosahedron boundary, antipodal vertex labels'),
        'hexagon': lambda: CatalogEntry('hexagon', polygon(6, name='hexagon'), H_GROUP, description='6-gon circle'),
        'path7': lambda: CatalogEntry('path7', path_model(7), Assertions(is_contractible=True),
                                      description='path with 7 vertices'),
    }


SPACE_NAMES = tuple(_space_builders())
MAP_NAMES = (
    'identity:torus',
    'constant:sphere2',
    'circle_double_cover',
    'circle_cover:3',
    's2_to_rp2',
    'torus_projection',
    'projection:circle:sphere2',
    'wedge_cover_patch',
)


@lru_cache(maxsize=None)
def builtin_space(name):
    builders = _space_builders()
    if name in builders:
        return builders[name]()
    head, _, arg = name.partition(':')
    if head == 'polygon' and arg.isdigit() and int(arg) >= 3:
        return CatalogEntry(name, polygon(int(arg)), H_GROUP, description=f'{arg}-gon circle')
    raise UnknownEntryError(f'unknown builtin space {name!r}')


def _map_entry(name, source, target, mapping, assertions, known=None, description=''):
    f = validate_map(mapping, source.model, target.model, name=name)
    full = MapAssertions(assertions, source.assertions, target.assertions)
    return CatalogEntry(name, f, full, known or {}, description, domain=source, codomain=target)


def _cover(name, sheets):
    source = builtin_space({1: 'circle', 2: 'hexagon'}.get(sheets, f'polygon:{3 * sheets}'))
    target = builtin_space('circle')
    mapping = {v: str(int(v) % 3) for v in source.model.vertices}
    assertions = Assertions(is_fibration=True, covering_sheets=sheets)
    return _map_entry(name, source, target, mapping, assertions,
                      description=f'{sheets}-sheeted covering of the triangle circle')


def _projection(name, first, second):
    X, Y = builtin_space(first), builtin_space(second)
    product = product_complex(X.model, Y.model, name=f'{first}x{second}')
    both = Assertions(
        is_contractible=X.assertions.is_contractible and Y.assertions.is_contractible,
        is_simply_connected=X.assertions.is_simply_connected and Y.assertions.is_simply_connected,
        is_h_group=X.assertions.is_h_group and Y.assertions.is_h_group,
    )
    source = CatalogEntry(product.name, product, both, description=f'{first} x {second}')
    mapping = {f'{x}|{y}': x for x in X.model.vertices for y in Y.model.vertices}
    assertions = Assertions(is_fibration=True, admits_section=True)
    return _map_entry(name, source, X, mapping, assertions, description=f'projection of {first} x {second} onto {first}')


@lru_cache(maxsize=None)
def builtin_map(name):
    head, _, arg = name.partition(':')
    if head == 'identity' and arg:
        X = builtin_space(arg)
        assertions = Assertions(is_fibration=True, admits_section=True, has_categorical_fibre=True, covering_sheets=1)
        return _map_entry(name, X, X, {v: v for v in X.model.vertices}, assertions,
                          {'tc': X.known['tc']} if 'tc' in X.known else None, f'identity of {arg}')
    if head == 'constant' and arg:
        X, P = builtin_space(arg), builtin_space('point')
        assertions = Assertions(is_fibration=True, admits_section=True)
        return _map_entry(name, X, P, {v: 'pt' for v in X.model.vertices}, assertions,
                          {'tc': KnownValue(1, 'TC(X -> {y}) = 1')}, f'{arg} onto a point')
    if name == 'circle_double_cover':
        return _cover(name, 2)
    if head == 'circle_cover' and arg.isdigit() and int(arg) >= 1:
        return _cover(name, int(arg))
    if name == 's2_to_rp2':
        source, target = builtin_space('icosahedron'), builtin_space('rp2')
        mapping = {v: v[1:] for v in source.model.vertices}
        assertions = Assertions(is_fibration=True, covering_sheets=2)
        return _map_entry(name, source, target, mapping, assertions,
                          description='antipodal quotient of the icosahedron')
    if name == 'torus_projection':
        source, target = builtin_space('torus9'), builtin_space('circle')
        mapping = {v: v.split('|')[0] for v in source.model.vertices}
        assertions = Assertions(is_fibration=True, admits_section=True)
        return _map_entry(name, source, target, mapping, assertions, {'tc': BASE_PROJECTION_TC},
                          'projection of the torus onto its first circle')
    if head == 'projection' and arg.count(':') == 1:
        first, second = arg.split(':')
        return _projection(name, first, second)
    if name == 'wedge_cover_patch':
        source, target = builtin_space('path7'), builtin_space('wedge_two_circles')
        images = ['o', 'a1', 'a2', 'o', 'b1', 'b2', 'o']
        mapping = {f'p{i}': v for i, v in enumerate(images)}
        assertions = Assertions(is_fibration=True, is_universal_cover=True)
        return _map_entry(name, source, target, mapping, assertions, {'tc': WEDGE_COVER_TC},
                          'finite patch of the universal covering tree of the wedge')
    raise UnknownEntryError(f'unknown builtin map {name!r}')


def builtin(name):
    """Resolve a builtin name to a space or map entry."""
    try:
        return builtin_space(name)
    except UnknownEntryError:
        return builtin_map(name)


def entries():
    return [builtin_space(n) for n in SPACE_NAMES] + [builtin_map(n) for n in MAP_NAMES]
