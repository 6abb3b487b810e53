"""Brute-force verifiers, independent of the nil and ring code paths they check."""
import logging
from dataclasses import dataclass
from itertools import combinations, product
from math import comb

import numpy as np
from tqdm import tqdm

from bounds import NilIndex
from cohomology import cohomology_dims, cup_ring, tensor_ring
from simplicial import build_complex, product_complex


logger = logging.getLogger(__name__)

MAX_KERNEL_DIM = 16
MAX_BLOCK = 2 ** 20


class OracleSizeError(ValueError):
    pass


def _unique_nonzero(rows):
    if rows.shape[0] == 0:
        return rows
    rows = rows[rows.any(axis=1)]
    return np.unique(rows, axis=0) if rows.shape[0] else rows


def brute_nil_check(R, K, max_kernel_dim=MAX_KERNEL_DIM, progress=False):
    """nil of span(K) by multiplying out every nonzero element, over F_2 only."""
    if R.field.p != 2:
        raise ValueError(f'brute-force nil needs the field f2, got {R.field}')
    K = np.asarray(K, dtype=np.int64) % 2
    k = K.shape[0]
    if k > max_kernel_dim:
        raise OracleSizeError(f'kernel dimension {k} exceeds the enumeration guard {max_kernel_dim}')
    if k == 0:
        return NilIndex(1)

    table = np.asarray(R.table, dtype=np.int64) % 2
    coeffs = np.array(list(product((0, 1), repeat=k))[1:], dtype=np.int64)
    elements = _unique_nonzero((coeffs @ K) % 2)
    if elements.shape[0] == 0:
        return NilIndex(1)

    # 0/1 entries keep every float64 product exact
    d = R.dim
    table = table.reshape(d, d * d).astype(np.float64)
    right = elements.astype(np.float64)
    chunk = max(1, MAX_BLOCK // max(1, right.shape[0] * d))
    level = elements
    length = 1
    top = max(R.degrees)
    while length <= top + 1:
        found = []
        chunks = range(0, level.shape[0], chunk)
        for start in tqdm(chunks, desc=f'products of length {length + 1}', disable=not progress, leave=False):
            block = level[start:start + chunk].astype(np.float64)
            c = block.shape[0]
            left = (np.rint(block @ table).astype(np.int64) % 2).reshape(c, d, d)
            left = left.transpose(1, 0, 2).reshape(d, c * d).astype(np.float64)
            prods = np.rint(right @ left).astype(np.int64) % 2
            found.append(_unique_nonzero(prods.reshape(-1, d)))
        nxt = _unique_nonzero(np.concatenate(found, axis=0))
        logger.debug(f'oracle: {nxt.shape[0]} distinct nonzero products of length {length + 1}')
        if nxt.shape[0] == 0:
            return NilIndex(length + 1)
        level = nxt
        length += 1
    raise RuntimeError('nonzero product longer than the top degree allows')


@dataclass(frozen=True)
class KunnethReport:
    equal: bool
    product_dims: tuple
    tensor_dims: tuple


def kunneth_check(X, Y, field):
    P = product_complex(X, Y)
    product_dims = cohomology_dims(P, field)
    tensor_dims = tensor_ring(cup_ring(X, field), cup_ring(Y, field)).dims
    return KunnethReport(tuple(product_dims) == tuple(tensor_dims), tuple(product_dims), tuple(tensor_dims))


@dataclass(frozen=True)
class RingAxiomsReport:
    ok: bool
    failure: str = ''
    offending: tuple = ()


def ring_axioms_check(R):
    """Associativity, graded commutativity and unit law on basis elements."""
    field = R.field
    T = R.table
    n = R.dim
    left = field.reduce(np.tensordot(T, T, axes=([2], [0])))
    right = field.reduce(np.tensordot(T, T, axes=([2], [1]))).transpose(2, 0, 1, 3)
    bad = np.argwhere((left != right).any(axis=3))
    if bad.size:
        return RingAxiomsReport(False, 'associativity', tuple(int(i) for i in bad[0]))

    degrees = np.array(R.degrees, dtype=np.int64)
    sign = field.sign(np.multiply.outer(degrees, degrees))
    swapped = field.reduce(sign[:, :, None] * T.transpose(1, 0, 2))
    bad = np.argwhere((T != swapped).any(axis=2))
    if bad.size:
        return RingAxiomsReport(False, 'graded commutativity', tuple(int(i) for i in bad[0]))

    for i, d in enumerate(R.degrees):
        for j, e in enumerate(R.degrees):
            if T[i, j].any() and not all(R.degrees[r] == d + e for r in np.flatnonzero(T[i, j] != 0)):
                return RingAxiomsReport(False, 'degree', (i, j))

    ident = field.identity(n)
    on_left = field.reduce(np.tensordot(R.unit, T, axes=([0], [0])))
    on_right = field.reduce(np.tensordot(R.unit, T, axes=([0], [1])))
    for name, got in (('left unit', on_left), ('right unit', on_right)):
        bad = np.argwhere((got != ident).any(axis=1))
        if bad.size:
            return RingAxiomsReport(False, name, (int(bad[0][0]),))
    return RingAxiomsReport(True)


def random_complex(rng, max_vertices=8, max_facets=6, max_dim=3):
    n = int(rng.integers(1, max_vertices + 1))
    vertices = [f'v{i}' for i in range(n)]
    facets = []
    for _ in range(int(rng.integers(1, max_facets + 1))):
        size = int(rng.integers(1, min(n, max_dim + 1) + 1))
        facets.append(list(rng.choice(vertices, size=size, replace=False)))
    return build_complex(facets, vertices=vertices, name=f'random{n}')


def catalog_pairs(spaces, max_simplices=10 ** 4):
    """Pairs of complexes whose product triangulation stays under a simplex budget."""
    out = []
    for X, Y in combinations(spaces, 2):
        # each facet pair contributes binom(p+q, p) top simplices with at most 2^(p+q+1) faces
        bound = sum(comb(len(s) + len(t) - 2, len(s) - 1) * 2 ** (len(s) + len(t) - 1)
                    for s in X.facets for t in Y.facets)
        if bound > 4 * max_simplices:
            continue
        if product_complex(X, Y).num_simplices <= max_simplices:
            out.append((X, Y))
    return out
