import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from cohomology import (
    cup_ring,
    diagonal_hom,
    induced_ring_hom,
    integral_connectivity,
    one_cross_f_hom,
)
from exact_linalg import select_independent
from simplicial import Assertions, MapAssertions, NotSurjectiveError, SimplicialError


logger = logging.getLogger(__name__)

INF = math.inf

# rule identifier -> inequality it applies
RULES = {
    'cat.contractible': 'cat(X) = 1 iff X is contractible',
    'cat.cup_length': 'cat(X) >= nil of the positive-degree cohomology (cup-length)',
    'cat.dimension': 'cat(X) <= dim(X) + 1',
    'cat.dim_conn': 'cat(X) <= dim(X)/c + 1 for a (c-1)-connected X, read as floor',
    'cat.h_group': 'TC(X) = cat(X) for an H-group, so cat(X) >= TC(X)',
    'tc.contractible': 'TC(X) = 1 iff X is contractible',
    'tc.category': 'TC(X) >= cat(X)',
    'tc.zcl': 'TC(X) >= nil(Ker Delta*), the zero-divisor cup-length',
    'tc.product': 'TC(X) <= cat(X x X) <= 2 cat(X) - 1',
    'tc.dim_conn': 'TC(X) < 2 dim(X)/(conn(X)+1) + 1, read as floor',
    'tc.h_group': 'TC(X) = cat(X) for an H-group',
    'catxy.factor': 'cat(X x Y) >= max{cat(X), cat(Y)}',
    'catxy.product': 'cat(X x Y) <= cat(X) + cat(Y) - 1',
    'sec.trivial': 'sec(f) >= 1',
    'sec.section': 'sec(f) = 1 when f admits a continuous section',
    'sec.skeleton': 'sec(f) <= dim(Y) + 1 for simplicial f (one stage per skeleton)',
    'sec.fibration': 'sec(f) <= cat(Y) for a fibration',
    'sec.tc': 'sec(f) <= TC(f)',
    'R1': 'TC(f) >= cat(Y)',
    'R2': 'TC(f) >= sec(f)',
    'R3': 'TC(f) >= cat(X) when the fibre is categorical in X',
    'R4': 'TC(f) <= cat(X) + cat(X) sec(f) - 1',
    'R5': 'TC(f) <= cat(X) (dim(Y)+1) - 1 for simplicial f',
    'R6': 'TC(Y) <= TC(f) <= TC(X) when f admits a section',
    'R7': 'cat(Y) <= TC(f) <= min{TC(Y), cat(X x Y)} for a fibration',
    'R8': 'TC(f) = cat(Y) for a fibration with X contractible or Y an H-group',
    'R9': 'TC(f) >= nil(Ker (1,f)*)',
    'R10': 'TC(f) >= zcl(Y) when f*: H*(Y) -> H*(X) is injective',
    'R11': 'TC(f) <= min{floor(dX/(cX+1)), floor(dY/(cY+1))} + floor(dY/(cY+1)) + 1 for a fibration',
    'R12': 'TC(f) = TC(Y) for a finite-sheeted covering when TC(Y) = zcl(Y; Q)',
    'R13': 'TC(f) >= 1; TC(f) = 1 iff f admits a continuous section',
    'R14': 'TC(f) >= TC(Y) when f admits a homotopy section',
    'R15': 'TC(f) = TC(Y) for a fibration with f* injective when TC(Y) = zcl(Y)',
    'catalog': 'exact value known for this catalog entry',
    'product': "max{TC(f), TC(f')} <= TC(f x f') <= TC(f) + TC(f') - 1",
}

R5_NOTE = ('displayed as cat(X)(dim(Y)+1)-1 with sec(f) <= dim(Y); the skeleton filtration '
           'has dim(Y)+1 stages, so the bound is evaluated as cat(X)(dim(Y)+2)-1')
R11_NOTE = 'formula applied as printed; the floor(dY/(cY+1)) term appears twice and may be a typo'


class InconsistentAssertionsError(ValueError):
    pass


@dataclass(frozen=True)
class KnownValue:
    value: int
    citation: str


@dataclass(frozen=True)
class NilIndex:
    value: int
    witness: tuple = ()


def _check_positive(R, K):
    zero_degree = R.indices(0)
    if K.shape[0] and zero_degree and (K[:, zero_degree] != 0).any():
        raise ValueError('subspace for nil contains a degree-0 element')


def nil_index(R, K):
    """Least n with all n-fold products of elements of span(K) zero.

    Iterates V_1 = K, V_{i+1} = span{v * k}; each level keeps a greedy
    independent set of actual products so a witness word is available.
    """
    field = R.field
    K = field.asarray(K)
    _check_positive(R, K)
    keep = select_independent(K, field)
    level = K[list(keep)]
    words = [(i,) for i in keep]
    if level.shape[0] == 0:
        return NilIndex(1)
    n = 1
    while True:
        prods = R.products(level, K)
        keep = select_independent(prods, field)
        if not keep:
            return NilIndex(n + 1, words[0])
        b = K.shape[0]
        words = [words[i // b] + (i % b,) for i in keep]
        level = prods[list(keep)]
        n += 1
        logger.debug(f'nil level {n}: {len(keep)} independent products')


def positive_part(R):
    field = R.field
    idx = [i for i, d in enumerate(R.degrees) if d > 0]
    K = field.zeros((len(idx), R.dim))
    K[np.arange(len(idx)), idx] = 1
    return field.asarray(K)


@lru_cache(maxsize=None)
def cup_length(X, field):
    R = cup_ring(X, field)
    return nil_index(R, positive_part(R))


@lru_cache(maxsize=None)
def zcl(X, field):
    hom = diagonal_hom(X, field)
    return nil_index(hom.source, hom.kernel())


def nil_ker_one_f(f, field):
    hom = one_cross_f_hom(f, field)
    return nil_index(hom.source, hom.kernel())


def _plain(value):
    if isinstance(value, float) and math.isinf(value):
        return 'inf'
    return value


@dataclass(frozen=True)
class RuleApplication:
    rule: str
    citation: str
    kind: str
    value: object
    inputs: dict = field(default_factory=dict)
    source: str = 'rule'
    note: str = ''


@dataclass
class BoundInterval:
    """Closed integer interval [lo, hi] for one invariant, with its provenance."""

    quantity: str
    lo: int = 1
    hi: object = INF
    trace: list = field(default_factory=list)

    def _record(self, app):
        for i, old in enumerate(self.trace):
            if old.rule == app.rule and old.kind == app.kind:
                tighter = app.value > old.value if app.kind == 'lower' else app.value < old.value
                if tighter:
                    self.trace[i] = app
                return
        self.trace.append(app)

    def apply(self, rule, kind, value, inputs=None, source='rule', note='', citation=None):
        if value is None or (kind == 'upper' and value == INF):
            return False
        value = int(value)
        app = RuleApplication(rule, citation or RULES[rule], kind, value, dict(inputs or {}), source, note)
        self._record(app)
        if kind == 'lower' and value > self.lo:
            self.lo = value
            return True
        if kind == 'upper' and value < self.hi:
            self.hi = value
            return True
        return False

    def raise_lower(self, rule, value, **kwargs):
        return self.apply(rule, 'lower', value, **kwargs)

    def lower_upper(self, rule, value, **kwargs):
        return self.apply(rule, 'upper', value, **kwargs)

    def pin(self, rule, value, **kwargs):
        a = self.raise_lower(rule, value, **kwargs)
        b = self.lower_upper(rule, value, **kwargs)
        return a or b

    def binding(self, kind):
        target = self.lo if kind == 'lower' else self.hi
        return [a.rule for a in self.trace if a.kind == kind and a.value == target]

    @property
    def is_exact(self):
        return self.lo == self.hi

    def contains(self, value):
        return self.lo <= value <= self.hi

    def check(self):
        if self.lo > self.hi:
            lo_rules = ', '.join(self.binding('lower')) or 'initial'
            hi_rules = ', '.join(self.binding('upper')) or 'initial'
            raise InconsistentAssertionsError(
                f'{self.quantity}: lower bound {self.lo} ({lo_rules}) exceeds upper bound {self.hi} ({hi_rules})'
            )

    def as_tuple(self):
        return self.lo, _plain(self.hi)

    def __str__(self):
        return f'[{self.lo}, {_plain(self.hi)}]'


def product_map_bounds(bf, bg):
    """TC(f x f') from intervals of the factors."""
    out = BoundInterval(f'{bf.quantity} x {bg.quantity}')
    out.raise_lower('product', max(bf.lo, bg.lo), inputs={'lo': bf.lo, "lo'": bg.lo})
    out.lower_upper('product', bf.hi + bg.hi - 1, inputs={'hi': _plain(bf.hi), "hi'": _plain(bg.hi)})
    return out


def promote_connectivity(assertions, conn):
    """Homotopy connectivity usable by dimension/connectivity formulas; None means infinite."""
    if assertions.is_contractible:
        return None
    if assertions.is_simply_connected:
        return None if conn.acyclic else conn.value
    if assertions.asserted_connectivity is not None:
        return assertions.asserted_connectivity
    return 0


def check_space_assertions(assertions, conn, name=''):
    label = name or 'space'
    if assertions.is_contractible and not conn.acyclic:
        raise InconsistentAssertionsError(f'{label} is asserted contractible but has nonzero reduced homology')
    if assertions.is_simply_connected and len(conn.betti) > 1 and (conn.betti[1] or conn.torsion[1]):
        raise InconsistentAssertionsError(f'{label} is asserted simply connected but H_1 is nonzero')
    c = assertions.asserted_connectivity
    if c is not None and not conn.acyclic and c > conn.value:
        raise InconsistentAssertionsError(
            f'{label} is asserted {c}-connected but its homological connectivity is {conn.value}'
        )


def _floor_div(d, c):
    """floor(d / c) where c = None stands for infinite connectivity."""
    return 0 if c is None else d // c


@dataclass
class SpaceAnalysis:
    complex: object
    assertions: Assertions
    fields: tuple
    connectivity: object
    promoted_connectivity: object
    rings: dict
    cup_length: dict
    zcl: dict
    cat: BoundInterval
    tc: BoundInterval

    @property
    def cohomology_dims(self):
        return {name: ring.space.dims for name, ring in self.rings.items()}


def _best(values):
    name = max(values, key=lambda k: values[k].value)
    return name, values[name]


def analyze_space(X, fields, assertions=None, known=None):
    assertions = assertions or Assertions()
    known = known or {}
    if X.dim < 0:
        raise SimplicialError('empty complex')
    if not fields:
        raise ValueError('at least one coefficient field is required')
    conn = integral_connectivity(X)
    if len(X.facets) == 1 and not assertions.is_contractible:
        logger.debug(f'{X.name}: single simplex, contractible')
        assertions = replace(assertions, is_contractible=True)
    check_space_assertions(assertions, conn, X.name)
    promoted = promote_connectivity(assertions, conn)

    rings = {F.name: cup_ring(X, F) for F in fields}
    cups = {F.name: cup_length(X, F) for F in fields}
    zcls = {F.name: zcl(X, F) for F in fields}
    d = X.dim

    cat = BoundInterval(f'cat({X.name})')
    tc = BoundInterval(f'TC({X.name})')
    if assertions.is_contractible:
        cat.pin('cat.contractible', 1)
        tc.pin('tc.contractible', 1)
    fname, best = _best(cups)
    cat.raise_lower('cat.cup_length', best.value, inputs={'field': fname, 'nil': best.value})
    cat.lower_upper('cat.dimension', d + 1, inputs={'dim': d})
    c = None if promoted is None else promoted + 1
    cat.lower_upper('cat.dim_conn', _floor_div(d, c) + 1,
                    inputs={'dim': d, 'c': _plain(INF if c is None else c)},
                    note='d/c + 1 evaluated as floor(d/c) + 1')
    if 'cat' in known:
        cat.pin('catalog', known['cat'].value, source='catalog', citation=known['cat'].citation)

    fname, best = _best(zcls)
    tc.raise_lower('tc.zcl', best.value, inputs={'field': fname, 'nil': best.value})
    tc.lower_upper('tc.dim_conn', _floor_div(2 * d, c) + 1,
                   inputs={'dim': d, 'conn': _plain(INF if promoted is None else promoted)})
    if 'tc' in known:
        tc.pin('catalog', known['tc'].value, source='catalog', citation=known['tc'].citation)

    for _ in range(8):
        changed = tc.raise_lower('tc.category', cat.lo, inputs={'cat.lo': cat.lo})
        changed |= tc.lower_upper('tc.product', 2 * cat.hi - 1 if cat.hi != INF else INF,
                                  inputs={'cat.hi': _plain(cat.hi)})
        if assertions.is_h_group:
            changed |= tc.raise_lower('tc.h_group', cat.lo, inputs={'cat.lo': cat.lo})
            changed |= tc.lower_upper('tc.h_group', cat.hi, inputs={'cat.hi': _plain(cat.hi)})
            changed |= cat.raise_lower('cat.h_group', tc.lo, inputs={'TC.lo': tc.lo})
        if not changed:
            break
    cat.check()
    tc.check()
    logger.info(f'{X.name}: cat {cat}, TC {tc}')
    return SpaceAnalysis(X, assertions, tuple(fields), conn, promoted, rings, cups, zcls, cat, tc)


def cat_bounds(X, fields, assertions=None, known=None):
    return analyze_space(X, fields, assertions, known).cat


def tc_space_bounds(X, fields, assertions=None, known=None):
    return analyze_space(X, fields, assertions, known).tc


def sec_bounds(f, assertions=None):
    """Bounds for sec(f) available from the map alone."""
    assertions = assertions or Assertions()
    sec = BoundInterval(f'sec({f.name})')
    sec.raise_lower('sec.trivial', 1)
    if assertions.admits_section:
        sec.lower_upper('sec.section', 1)
    dim_y = f.codomain.dim
    sec.lower_upper('sec.skeleton', dim_y + 1, inputs={'dim Y': dim_y})
    return sec


@dataclass
class MapAnalysis:
    map: object
    assertions: MapAssertions
    fields: tuple
    domain: SpaceAnalysis
    codomain: SpaceAnalysis
    sec: BoundInterval
    cat_product: BoundInterval
    nil: dict
    injective: dict
    tc: BoundInterval
    passes: int
    corollaries: list


def analyze_map(f, fields, assertions=None, domain_known=None, codomain_known=None, known=None):
    assertions = assertions or MapAssertions()
    if not f.is_surjective:
        raise NotSurjectiveError(f'{f.name or "map"} is not surjective on simplices; TC(f) is undefined')
    A = assertions.map
    X = analyze_space(f.domain, fields, assertions.domain, domain_known)
    Y = analyze_space(f.codomain, fields, assertions.codomain, codomain_known)

    nil = {F.name: nil_ker_one_f(f, F) for F in fields}
    injective = {F.name: induced_ring_hom(f, F).is_injective() for F in fields}

    cat_xy = BoundInterval(f'cat({f.domain.name} x {f.codomain.name})')
    cat_xy.raise_lower('catxy.factor', max(X.cat.lo, Y.cat.lo))
    if X.cat.hi != INF and Y.cat.hi != INF:
        cat_xy.lower_upper('catxy.product', X.cat.hi + Y.cat.hi - 1)

    sec = sec_bounds(f, A)
    if A.is_fibration:
        sec.lower_upper('sec.fibration', Y.cat.hi, inputs={'cat(Y).hi': _plain(Y.cat.hi)})

    tc = BoundInterval(f'TC({f.name})')
    dX, dY = f.domain.dim, f.codomain.dim
    cX, cY = X.promoted_connectivity, Y.promoted_connectivity
    tc.raise_lower('R13', 1)
    tc.raise_lower('R1', Y.cat.lo, inputs={'cat(Y).lo': Y.cat.lo})
    if A.has_categorical_fibre:
        tc.raise_lower('R3', X.cat.lo, inputs={'cat(X).lo': X.cat.lo})
    if X.cat.hi != INF:
        tc.lower_upper('R5', X.cat.hi * (dY + 2) - 1, inputs={'cat(X).hi': X.cat.hi, 'dim Y': dY}, note=R5_NOTE)
    if A.admits_section:
        tc.raise_lower('R6', Y.tc.lo, inputs={'TC(Y).lo': Y.tc.lo})
        tc.lower_upper('R6', X.tc.hi, inputs={'TC(X).hi': _plain(X.tc.hi)})
    if A.is_fibration:
        tc.raise_lower('R7', Y.cat.lo, inputs={'cat(Y).lo': Y.cat.lo})
        tc.lower_upper('R7', min(Y.tc.hi, cat_xy.hi),
                       inputs={'TC(Y).hi': _plain(Y.tc.hi), 'cat(XxY).hi': _plain(cat_xy.hi)})
        if X.assertions.is_contractible or Y.assertions.is_h_group:
            why = 'X contractible' if X.assertions.is_contractible else 'Y H-group'
            tc.raise_lower('R8', Y.cat.lo, inputs={'cat(Y).lo': Y.cat.lo, 'via': why})
            tc.lower_upper('R8', Y.cat.hi, inputs={'cat(Y).hi': _plain(Y.cat.hi), 'via': why})
        bX, bY = _floor_div(dX, None if cX is None else cX + 1), _floor_div(dY, None if cY is None else cY + 1)
        tc.lower_upper('R11', min(bX, bY) + bY + 1,
                       inputs={'dim X': dX, 'conn X': _plain(INF if cX is None else cX),
                               'dim Y': dY, 'conn Y': _plain(INF if cY is None else cY)},
                       note=R11_NOTE)
    fname, best = _best(nil)
    tc.raise_lower('R9', best.value, inputs={'field': fname, 'nil': best.value})
    for F in fields:
        if injective[F.name]:
            tc.raise_lower('R10', Y.zcl[F.name].value, inputs={'field': F.name, 'zcl(Y)': Y.zcl[F.name].value})
    if A.admits_homotopy_section:
        tc.raise_lower('R14', Y.tc.lo, inputs={'TC(Y).lo': Y.tc.lo})

    y_exact = codomain_known['tc'].value if codomain_known and 'tc' in codomain_known else None
    if A.is_fibration and y_exact is not None:
        if A.is_covering and A.covering_sheets is not None and 'q' in Y.zcl and Y.zcl['q'].value == y_exact:
            tc.pin('R12', y_exact, inputs={'TC(Y)': y_exact, 'zcl(Y;q)': y_exact, 'sheets': A.covering_sheets})
        for F in fields:
            if injective[F.name] and Y.zcl[F.name].value == y_exact:
                tc.pin('R15', y_exact, inputs={'TC(Y)': y_exact, 'field': F.name})
                break
    if known and 'tc' in known:
        tc.pin('catalog', known['tc'].value, source='catalog', citation=known['tc'].citation)

    passes = 0
    while True:
        passes += 1
        changed = tc.raise_lower('R2', sec.lo, inputs={'sec.lo': sec.lo})
        if X.cat.hi != INF and sec.hi != INF:
            changed |= tc.lower_upper('R4', X.cat.hi * (sec.hi + 1) - 1,
                                      inputs={'cat(X).hi': X.cat.hi, 'sec.hi': sec.hi})
        changed |= sec.lower_upper('sec.tc', tc.hi, inputs={'TC(f).hi': _plain(tc.hi)})
        if not changed or passes > len(RULES):
            break

    sec.check()
    tc.check()
    corollaries = []
    if tc.hi == 1:
        corollaries.append('f admits a continuous section (TC(f) = 1)')
    logger.info(f'{f.name}: sec {sec}, TC(f) {tc} after {passes} passes')
    return MapAnalysis(f, assertions, tuple(fields), X, Y, sec, cat_xy, nil, injective, tc, passes, corollaries)


def tc_map_bounds(f, fields, assertions=None, **known):
    return analyze_map(f, fields, assertions, **known).tc
