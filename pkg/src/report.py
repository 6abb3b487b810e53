import json
import logging
import math
from fractions import Fraction

import numpy as np


logger = logging.getLogger(__name__)

SCHEMA = 'tcbound-report/1'


def plain(value):
    """JSON-safe scalar: infinity as 'inf', exact field elements as ints or 'a/b' strings."""
    if isinstance(value, float) and math.isinf(value):
        return 'inf'
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return value


def interval_doc(interval):
    return {
        'lo': interval.lo,
        'hi': plain(interval.hi),
        'binding_lower': interval.binding('lower'),
        'binding_upper': interval.binding('upper'),
        'trace': [
            {
                'rule': a.rule,
                'citation': a.citation,
                'kind': a.kind,
                'value': plain(a.value),
                'inputs': plain(a.inputs),
                'source': a.source,
                'note': a.note,
            }
            for a in interval.trace
        ],
    }


def nil_doc(nil):
    return {'value': nil.value, 'witness': list(nil.witness)}


def ring_doc(ring):
    products = []
    for i, j, r in np.argwhere(ring.table != 0):
        products.append([ring.labels[i], ring.labels[j], ring.labels[r], plain(ring.table[i, j, r])])
    return {
        'field': ring.field.name,
        'labels': list(ring.labels),
        'degrees': list(ring.degrees),
        'products': products,
    }


def space_doc(analysis, rings=False):
    X = analysis.complex
    conn = analysis.connectivity
    promoted = analysis.promoted_connectivity
    doc = {
        'name': X.name,
        'dim': X.dim,
        'f_vector': list(X.f_vector),
        'euler_characteristic': X.euler_characteristic,
        'assertions': analysis.assertions.tokens(),
        'homology': {'betti': list(conn.betti), 'torsion': [list(t) for t in conn.torsion]},
        'connectivity': {
            'homological': conn.value,
            'acyclic': conn.acyclic,
            'promoted': 'inf' if promoted is None else promoted,
        },
        'cohomology': {name: list(dims) for name, dims in analysis.cohomology_dims.items()},
        'cup_length': {name: nil_doc(n) for name, n in analysis.cup_length.items()},
        'zcl': {name: nil_doc(n) for name, n in analysis.zcl.items()},
        'cat': interval_doc(analysis.cat),
        'tc': interval_doc(analysis.tc),
    }
    if rings:
        doc['rings'] = {name: ring_doc(r) for name, r in analysis.rings.items()}
    return doc


def space_report(entry, analysis, rings=False):
    return {
        'schema': SCHEMA,
        'kind': 'space',
        'input': entry.name,
        'fields': [F.name for F in analysis.fields],
        'space': space_doc(analysis, rings),
    }


def map_report(entry, analysis, rings=False):
    f = analysis.map
    return {
        'schema': SCHEMA,
        'kind': 'map',
        'input': entry.name,
        'fields': [F.name for F in analysis.fields],
        'map': {
            'name': f.name,
            'surjective': f.is_surjective,
            'assertions': analysis.assertions.map.tokens(),
            'vertex_map': dict(f.vertex_map),
            'domain': space_doc(analysis.domain, rings),
            'codomain': space_doc(analysis.codomain, rings),
            'sec': interval_doc(analysis.sec),
            'cat_product': interval_doc(analysis.cat_product),
            'nil_ker_one_f': {name: nil_doc(n) for name, n in analysis.nil.items()},
            'fstar_injective': dict(analysis.injective),
            'tc': interval_doc(analysis.tc),
            'fixed_point_passes': analysis.passes,
            'corollaries': list(analysis.corollaries),
        },
    }


def to_json(doc):
    return json.dumps(plain(doc), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def _interval_md(title, doc):
    lines = [f'**{title}** = [{doc["lo"]}, {doc["hi"]}]', '',
             '| rule | bound | value | citation | note |', '|---|---|---|---|---|']
    for a in doc['trace']:
        tag = a['rule'] if a['source'] == 'rule' else f'{a["rule"]} (catalog)'
        lines.append(f'| {tag} | {a["kind"]} | {a["value"]} | {a["citation"]} | {a["note"]} |')
    return lines + ['']


def _space_md(doc, heading):
    lines = [f'{heading} {doc["name"]}', '',
             f'- dim {doc["dim"]}, f-vector {doc["f_vector"]}, Euler characteristic {doc["euler_characteristic"]}',
             f'- assertions: {", ".join(doc["assertions"]) or "none"}',
             f'- integral homology: betti {doc["homology"]["betti"]}, torsion {doc["homology"]["torsion"]}',
             f'- connectivity: homological {doc["connectivity"]["homological"]}, '
             f'used {doc["connectivity"]["promoted"]}', '',
             '| field | cohomology dims | cup-length | zcl |', '|---|---|---|---|']
    for name, dims in doc['cohomology'].items():
        lines.append(f'| {name} | {dims} | {doc["cup_length"][name]["value"]} | {doc["zcl"][name]["value"]} |')
    lines.append('')
    lines += _interval_md('cat', doc['cat'])
    lines += _interval_md('TC', doc['tc'])
    return lines


def to_markdown(doc):
    lines = [f'# tcbound report ({doc["schema"]})', '', f'input `{doc["input"]}`, fields {", ".join(doc["fields"])}', '']
    if doc['kind'] == 'space':
        lines += _space_md(doc['space'], '##')
        return '\n'.join(lines) + '\n'

    m = doc['map']
    lines += [f'## map {m["name"]}', '',
              f'- assertions: {", ".join(m["assertions"]) or "none"}',
              f'- f* injective: {m["fstar_injective"]}',
              f'- nil Ker(1,f)*: ' + ', '.join(f'{k} {v["value"]}' for k, v in m['nil_ker_one_f'].items()),
              f'- fixed point reached after {m["fixed_point_passes"]} passes', '']
    lines += _interval_md('TC(f)', m['tc'])
    lines += _interval_md('sec(f)', m['sec'])
    lines += _interval_md('cat(X x Y)', m['cat_product'])
    for c in m['corollaries']:
        lines.append(f'> {c}')
    if m['corollaries']:
        lines.append('')
    lines += _space_md(m['domain'], '### domain')
    lines += _space_md(m['codomain'], '### codomain')
    return '\n'.join(lines) + '\n'


def render(doc, fmt):
    if fmt == 'json':
        return to_json(doc)
    if fmt == 'markdown':
        return to_markdown(doc)
    raise ValueError(f'unknown report format {fmt!r}')
