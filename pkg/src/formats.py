import logging
from pathlib import Path

import yaml

from catalog import CatalogEntry, UnknownEntryError, builtin_map, builtin_space
from simplicial import (
    Assertions,
    MapAssertions,
    ParseError,
    build_complex,
    parse_map_assertions,
    parse_space_assertions,
    validate_map,
)


logger = logging.getLogger(__name__)


def _read_yaml(path):
    path = Path(path)
    if not path.exists():
        raise ParseError(f'no such file: {path}')
    try:
        with path.open(encoding='utf-8') as f:
            doc = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ParseError(f'{path}: {e}') from e
    if not isinstance(doc, dict):
        raise ParseError(f'{path}: expected a mapping at top level')
    return doc


def complex_from_dict(doc, name=''):
    facets = doc.get('facets')
    if not isinstance(facets, list) or not all(isinstance(s, list) for s in facets):
        raise ParseError(f'{name or "complex"}: facets must be a list of vertex lists')
    vertices = doc.get('vertices')
    if vertices is not None and not isinstance(vertices, list):
        raise ParseError(f'{name or "complex"}: vertices must be a list')
    return build_complex(facets, vertices=vertices, name=doc.get('name', name))


def complex_to_dict(X):
    return {
        'name': X.name,
        'vertices': list(X.vertices),
        'facets': [list(s) for s in X.facets],
    }


def dump_complex(X, path):
    with Path(path).open('w', encoding='utf-8') as f:
        yaml.safe_dump(complex_to_dict(X), f, sort_keys=False)


def load_space(path, assertions=()):
    """Complex file -> catalog-style entry; file assertions and extra ones are merged."""
    doc = _read_yaml(path)
    X = complex_from_dict(doc, name=Path(path).stem)
    tokens = list(doc.get('assertions') or []) + list(assertions)
    return CatalogEntry(X.name, X, parse_space_assertions(tokens), description=f'loaded from {path}')


def resolve_space(ref, base_dir='.'):
    """A path (relative to ``base_dir``) or a builtin space name."""
    candidate = Path(base_dir) / str(ref)
    if candidate.exists():
        return load_space(candidate)
    try:
        return builtin_space(str(ref))
    except UnknownEntryError as e:
        raise ParseError(f'{ref!r} is neither a file nor a builtin space') from e


def load_map(path, assertions=()):
    doc = _read_yaml(path)
    for key in ('domain', 'codomain', 'vertex_map'):
        if key not in doc:
            raise ParseError(f'{path}: missing field {key!r}')
    if not isinstance(doc['vertex_map'], dict):
        raise ParseError(f'{path}: vertex_map must be a mapping')
    base = Path(path).parent
    source = resolve_space(doc['domain'], base)
    target = resolve_space(doc['codomain'], base)
    name = doc.get('name', Path(path).stem)
    f = validate_map(doc['vertex_map'], source.model, target.model, name=name)
    parsed = parse_map_assertions(list(doc.get('assertions') or []) + list(assertions))
    full = MapAssertions(Assertions(), source.assertions, target.assertions).merged(parsed)
    return CatalogEntry(name, f, full, description=f'loaded from {path}', domain=source, codomain=target)


def resolve_input(builtin=None, path=None, kind='space', assertions=()):
    """Entry for a --builtin name or an --input file, with command-line assertions merged in."""
    if (builtin is None) == (path is None):
        raise ParseError('give exactly one of --builtin or --input')
    if kind == 'space':
        if path is not None:
            return load_space(path, assertions)
        entry = _builtin(builtin_space, builtin)
        extra = parse_space_assertions(assertions)
        return CatalogEntry(entry.name, entry.model, entry.assertions.merged(extra), entry.known, entry.description)
    if path is not None:
        return load_map(path, assertions)
    entry = _builtin(builtin_map, builtin)
    extra = parse_map_assertions(assertions)
    return CatalogEntry(entry.name, entry.model, entry.assertions.merged(extra), entry.known,
                        entry.description, entry.domain, entry.codomain)


def _builtin(lookup, name):
    try:
        return lookup(name)
    except UnknownEntryError as e:
        raise ParseError(str(e.args[0])) from e
