import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations


logger = logging.getLogger(__name__)


class SimplicialError(ValueError):
    pass


class NotSimplicialError(SimplicialError):
    pass


class NotSurjectiveError(SimplicialError):
    pass


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite abstract simplicial complex.

    Vertices are strings in lexicographic order, every stored simplex lists its
    vertices in that order, and ``simplices[k]`` holds the sorted k-simplices.
    """

    vertices: tuple
    facets: tuple
    simplices: tuple
    name: str = field(default='', compare=False)

    @property
    def dim(self):
        return len(self.simplices) - 1

    @cached_property
    def index(self):
        return tuple({s: i for i, s in enumerate(level)} for level in self.simplices)

    @cached_property
    def f_vector(self):
        return tuple(len(level) for level in self.simplices)

    @property
    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    @property
    def num_simplices(self):
        return sum(self.f_vector)

    def contains(self, simplex):
        k = len(simplex) - 1
        return 0 <= k <= self.dim and tuple(sorted(simplex)) in self.index[k]

    def __repr__(self):
        label = self.name or 'complex'
        return f'SimplicialComplex({label}, dim={self.dim}, f={self.f_vector})'


def build_complex(facets, vertices=None, name=''):
    faces = {}
    facet_vertices = set()
    for facet in facets:
        facet = [str(v) for v in facet]
        if not facet:
            raise SimplicialError('empty facet')
        if len(set(facet)) != len(facet):
            raise SimplicialError(f'duplicate vertex inside facet {facet}')
        facet = tuple(sorted(facet))
        facet_vertices.update(facet)
        for k in range(1, len(facet) + 1):
            faces.setdefault(k - 1, set()).update(combinations(facet, k))

    if vertices is None:
        vertex_list = sorted(facet_vertices)
    else:
        vertex_list = sorted({str(v) for v in vertices})
        missing = facet_vertices.difference(vertex_list)
        if missing:
            raise SimplicialError(f'facet vertices missing from vertex list: {sorted(missing)}')
    if vertex_list:
        faces.setdefault(0, set()).update((v,) for v in vertex_list)

    top = max(faces) if faces else -1
    simplices = tuple(tuple(sorted(faces[k])) for k in range(top + 1))

    covered = set()
    for k in range(1, top + 1):
        for s in simplices[k]:
            covered.update(combinations(s, k))
    maximal = tuple(sorted(
        (s for level in simplices for s in level if s not in covered),
        key=lambda s: (len(s), s),
    ))
    return SimplicialComplex(tuple(vertex_list), maximal, simplices, name=name)


@dataclass(frozen=True)
class SimplicialMap:
    domain: SimplicialComplex
    codomain: SimplicialComplex
    vertex_map: tuple
    is_surjective: bool
    name: str = field(default='', compare=False)

    @cached_property
    def mapping(self):
        return dict(self.vertex_map)

    def __call__(self, vertex):
        return self.mapping[vertex]

    def image(self, simplex):
        return tuple(sorted({self.mapping[v] for v in simplex}))

    def __repr__(self):
        label = self.name or 'map'
        return f'SimplicialMap({label}: {self.domain.name or "X"} -> {self.codomain.name or "Y"})'


def validate_map(vertex_map, X, Y, name=''):
    mapping = {str(k): str(v) for k, v in dict(vertex_map).items()}
    missing = [v for v in X.vertices if v not in mapping]
    if missing:
        raise SimplicialError(f'vertex map is not total, missing {missing}')
    extra = sorted(set(mapping).difference(X.vertices))
    if extra:
        raise SimplicialError(f'vertex map names unknown domain vertices {extra}')
    stray = sorted({v for v in mapping.values() if not Y.contains((v,))})
    if stray:
        raise NotSimplicialError(f'vertex map targets unknown codomain vertices {stray}')

    hit = set()
    for level in X.simplices:
        for s in level:
            image = tuple(sorted({mapping[v] for v in s}))
            if not Y.contains(image):
                raise NotSimplicialError(f'image of simplex {s} is {image}, not a simplex of the codomain')
            hit.add(image)
    surjective = all(s in hit for level in Y.simplices for s in level)
    if not surjective:
        logger.warning(f'map {name or ""} is not surjective on simplices; TC(f) is undefined for it')
    pairs = tuple(sorted(mapping.items()))
    return SimplicialMap(X, Y, pairs, surjective, name=name)


def identity_map(X):
    return validate_map({v: v for v in X.vertices}, X, X, name=f'identity:{X.name}')


def compose(f, g, name=''):
    """g after f."""
    if f.codomain != g.domain:
        raise SimplicialError('maps are not composable: codomain of the first is not the domain of the second')
    mapping = {v: g(f(v)) for v in f.domain.vertices}
    return validate_map(mapping, f.domain, g.codomain, name=name or f'{g.name}.{f.name}')


def product_complex(X, Y, name=''):
    """Staircase triangulation of |X| x |Y| with vertices named 'x|y'."""
    if X.dim < 0 or Y.dim < 0:
        raise SimplicialError('product of an empty complex')
    facets = set()
    for s in X.facets:
        for t in Y.facets:
            p, q = len(s) - 1, len(t) - 1
            for steps in combinations(range(p + q), p):
                i = j = 0
                chain = [f'{s[0]}|{t[0]}']
                step_set = set(steps)
                for k in range(p + q):
                    if k in step_set:
                        i += 1
                    else:
                        j += 1
                    chain.append(f'{s[i]}|{t[j]}')
                facets.add(tuple(chain))
    vertices = [f'{x}|{y}' for x in X.vertices for y in Y.vertices]
    return build_complex(facets, vertices=vertices, name=name or f'{X.name}x{Y.name}')


def skeleton(X, k):
    if k < 0:
        raise SimplicialError(f'skeleton dimension must be non-negative, got {k}')
    if k >= X.dim:
        return X
    return build_complex(X.simplices[k], vertices=X.vertices, name=f'{X.name}^({k})')


def connected_sum(X, Y, x_facet=None, y_facet=None, name=''):
    """Remove a top simplex from each complex and glue along the boundaries.

    Vertices of X are prefixed with 'a', those of Y with 'b'; the i-th vertex of
    ``y_facet`` is identified with the i-th vertex of ``x_facet``.
    """
    if X.dim < 1 or X.dim != Y.dim:
        raise SimplicialError('connected sum needs two complexes of the same positive dimension')
    tops_x = [s for s in X.facets if len(s) == X.dim + 1]
    tops_y = [s for s in Y.facets if len(s) == Y.dim + 1]
    x_facet = tuple(sorted(str(v) for v in x_facet)) if x_facet else tops_x[0]
    y_facet = tuple(sorted(str(v) for v in y_facet)) if y_facet else tops_y[0]
    if x_facet not in tops_x or y_facet not in tops_y:
        raise SimplicialError('connected sum must remove a top-dimensional facet from each complex')

    glue = {y: f'a{x}' for x, y in zip(x_facet, y_facet)}
    facets = [[f'a{v}' for v in s] for s in X.facets if s != x_facet]
    facets += [[glue.get(v, f'b{v}') for v in s] for s in Y.facets if s != y_facet]
    return build_complex(facets, name=name or f'{X.name}#{Y.name}')


@dataclass(frozen=True)
class Assertions:
    """User-declared homotopy-level facts the engine cannot decide."""

    is_contractible: bool = False
    is_simply_connected: bool = False
    is_h_group: bool = False
    asserted_connectivity: int = None
    is_fibration: bool = False
    admits_section: bool = False
    admits_homotopy_section: bool = False
    has_categorical_fibre: bool = False
    is_covering: bool = False
    covering_sheets: int = None
    is_universal_cover: bool = False

    def __post_init__(self):
        if self.asserted_connectivity is not None and self.asserted_connectivity < 0:
            raise ParseError(f'connectivity must be non-negative, got {self.asserted_connectivity}')
        if self.covering_sheets is not None and self.covering_sheets < 1:
            raise ParseError(f'sheet count must be positive, got {self.covering_sheets}')
        if self.is_contractible or (self.asserted_connectivity or 0) >= 1:
            object.__setattr__(self, 'is_simply_connected', True)
        if self.is_universal_cover or self.covering_sheets is not None:
            object.__setattr__(self, 'is_covering', True)
        if self.admits_section:
            object.__setattr__(self, 'admits_homotopy_section', True)

    def merged(self, other):
        flags = {
            name: getattr(self, name) or getattr(other, name)
            for name in FLAG_TOKENS.values()
        }
        conn = [c for c in (self.asserted_connectivity, other.asserted_connectivity) if c is not None]
        sheets = other.covering_sheets if other.covering_sheets is not None else self.covering_sheets
        return Assertions(**flags, asserted_connectivity=max(conn) if conn else None, covering_sheets=sheets)

    def tokens(self):
        out = [token for token, name in FLAG_TOKENS.items() if getattr(self, name)]
        if self.asserted_connectivity is not None:
            out.append(f'connectivity:{self.asserted_connectivity}')
        if self.covering_sheets is not None:
            out.remove('covering')
            out.append(f'covering:{self.covering_sheets}')
        return out


FLAG_TOKENS = {
    'contractible': 'is_contractible',
    'simply-connected': 'is_simply_connected',
    'h-group': 'is_h_group',
    'fibration': 'is_fibration',
    'section': 'admits_section',
    'homotopy-section': 'admits_homotopy_section',
    'categorical-fibre': 'has_categorical_fibre',
    'covering': 'is_covering',
    'universal-cover': 'is_universal_cover',
}

MAP_FLAGS = {'fibration', 'section', 'homotopy-section', 'categorical-fibre', 'covering', 'universal-cover'}


@dataclass(frozen=True)
class MapAssertions:
    map: Assertions = Assertions()
    domain: Assertions = Assertions()
    codomain: Assertions = Assertions()

    def merged(self, other):
        return MapAssertions(
            self.map.merged(other.map),
            self.domain.merged(other.domain),
            self.codomain.merged(other.codomain),
        )


def _parse_token(token):
    """One assertion token -> (flag name, connectivity, sheets)."""
    head, _, arg = token.partition(':')
    if head == 'connectivity':
        if not arg.isdigit():
            raise ParseError(f'bad connectivity assertion {token!r}')
        return {'asserted_connectivity': int(arg)}
    if head == 'covering' and arg:
        if not arg.isdigit():
            raise ParseError(f'bad covering assertion {token!r}')
        return {'covering_sheets': int(arg)}
    if head in FLAG_TOKENS and not arg:
        return {FLAG_TOKENS[head]: True}
    raise ParseError(f'unknown assertion {token!r}')


def parse_space_assertions(tokens):
    values = {}
    for token in tokens or ():
        token = str(token).strip()
        if token.startswith(('domain:', 'codomain:')):
            token = token.split(':', 1)[1]
        if token.partition(':')[0] in MAP_FLAGS:
            raise ParseError(f'assertion {token!r} applies to maps, not spaces')
        values.update(_parse_token(token))
    return Assertions(**values)


def parse_map_assertions(tokens):
    """Unprefixed space facts go to the domain, except h-group which goes to the codomain."""
    parts = {'map': {}, 'domain': {}, 'codomain': {}}
    for token in tokens or ():
        token = str(token).strip()
        target = None
        for prefix in ('domain', 'codomain'):
            if token.startswith(prefix + ':'):
                target, token = prefix, token[len(prefix) + 1:]
        head = token.partition(':')[0]
        if head in MAP_FLAGS:
            if target is not None:
                raise ParseError(f'assertion {head!r} applies to the map, not to its {target}')
            target = 'map'
        elif target is None:
            target = 'codomain' if head == 'h-group' else 'domain'
        parts[target].update(_parse_token(token))
    return MapAssertions(**{k: Assertions(**v) for k, v in parts.items()})
