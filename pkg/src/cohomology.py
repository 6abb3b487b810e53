import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from exact_linalg import (
    kernel_basis,
    rank_kernel_image,
    smith_normal_form,
    sparse_kernel,
    sparse_matrix,
    sparse_rank,
    sparse_reduce,
    sparse_rref,
    to_dense,
    to_sparse,
)
from simplicial import SimplicialError, identity_map


logger = logging.getLogger(__name__)


class DisconnectedComplexError(SimplicialError):
    pass


class NotMultiplicativeError(RuntimeError):
    pass


def _frozen(arr):
    arr.setflags(write=False)
    return arr


def _incidence_rows(X, k):
    """delta^k as {row: {col: sign}}: rows are (k+1)-simplices, columns k-simplices."""
    rows = X.simplices[k + 1] if k + 1 <= X.dim else ()
    index = X.index[k]
    return {r: {index[s[:i] + s[i + 1:]]: (-1) ** i for i in range(len(s))} for r, s in enumerate(rows)}


def _coboundary_shape(X, k):
    return (len(X.simplices[k + 1]) if k + 1 <= X.dim else 0, len(X.simplices[k]))


@lru_cache(maxsize=None)
def incidence_matrix(X, k):
    """Integer matrix of delta^k: rows are (k+1)-simplices, columns k-simplices."""
    out = np.zeros(_coboundary_shape(X, k), dtype=np.int64)
    for r, row in _incidence_rows(X, k).items():
        for c, sign in row.items():
            out[r, c] = sign
    return _frozen(out)


def coboundary_matrices(X, field):
    """delta^0 .. delta^dim as sparse matrices over the field."""
    if X.dim < 0:
        raise SimplicialError('cochains of an empty complex')
    return [sparse_matrix(_incidence_rows(X, k), _coboundary_shape(X, k), field) for k in range(X.dim + 1)]


@dataclass(frozen=True, eq=False)
class GradedVectorSpace:
    """Cohomology H^*(X; F) with canonical cocycle representatives per degree.

    ``representatives[k]`` is in RREF with pivots ``rep_pivots[k]`` and vanishes
    on the pivots of the sparse RREF coboundary basis ``boundaries[k]``.
    """

    field: object
    complex: object
    representatives: tuple
    rep_pivots: tuple
    boundaries: tuple
    boundary_pivots: tuple

    @property
    def dims(self):
        return tuple(r.shape[0] for r in self.representatives)

    @property
    def total_dim(self):
        return sum(self.dims)

    def coordinates(self, k, cochains):
        """Coordinates of the classes of cocycle rows in the degree-k basis."""
        z = sparse_reduce(to_sparse(cochains, self.field), self.boundaries[k], self.boundary_pivots[k], self.field)
        return to_dense(z, self.field)[:, list(self.rep_pivots[k])]


@lru_cache(maxsize=None)
def cohomology_basis(X, field):
    deltas = coboundary_matrices(X, field)
    reps, rep_pivots, bounds, bound_pivots = [], [], [], []
    for k in range(X.dim + 1):
        cocycles = sparse_kernel(deltas[k], field)
        if k == 0:
            B, Bp = sparse_rref(sparse_matrix({}, (0, len(X.simplices[0])), field), field)
        else:
            B, Bp = sparse_rref(deltas[k - 1].transpose(), field)
        H, Hp = sparse_rref(sparse_reduce(cocycles, B, Bp, field), field)
        reps.append(_frozen(to_dense(H, field)))
        rep_pivots.append(Hp)
        bounds.append(B)
        bound_pivots.append(Bp)
    space = GradedVectorSpace(field, X, tuple(reps), tuple(rep_pivots), tuple(bounds), tuple(bound_pivots))
    logger.debug(f'H^*({X.name}; {field}) dims {space.dims}')
    return space


def cohomology_dims(X, field):
    """dim H^k(X; F) for k = 0..dim from coboundary ranks alone."""
    ranks = [sparse_rank(d, field) for d in coboundary_matrices(X, field)]
    dims = tuple(n - ranks[k] - (ranks[k - 1] if k else 0) for k, n in enumerate(X.f_vector))
    logger.debug(f'{X.name}: coboundary ranks {ranks}, cohomology dims {dims}')
    return dims


@dataclass(frozen=True, eq=False)
class GradedRing:
    """Graded-commutative ring given by structure constants.

    ``table[i, j]`` is the coordinate vector of ``e_i * e_j``; ``top`` is the
    highest degree of the underlying cochains, so ``dims`` keeps trailing zeros.
    """

    field: object
    degrees: tuple
    labels: tuple
    table: np.ndarray
    unit: np.ndarray
    space: GradedVectorSpace = None
    top: int = None

    @property
    def dim(self):
        return len(self.degrees)

    @property
    def top_degree(self):
        return max(self.degrees, default=-1) if self.top is None else self.top

    @property
    def dims(self):
        return tuple(self.degrees.count(k) for k in range(self.top_degree + 1))

    @cached_property
    def nonzero(self):
        """(i, j, r, c) arrays with table[i, j, r] == c != 0."""
        i, j, r = np.nonzero(self.table != 0)
        return i, j, r, self.table[i, j, r]

    def indices(self, degree):
        return [i for i, d in enumerate(self.degrees) if d == degree]

    def multiply(self, x, y):
        x = self.field.asarray(x)
        y = self.field.asarray(y)
        left = self.field.reduce(np.tensordot(x, self.table, axes=([0], [0])))
        return self.field.reduce(np.tensordot(y, left, axes=([0], [0])))

    def products(self, V, W):
        """All products v * w of the rows of V and W, as rows indexed (v, w)."""
        field = self.field
        out = field.zeros((V.shape[0], W.shape[0], self.dim))
        i, j, r, c = self.nonzero
        if out.size == 0 or c.size == 0:
            return out.reshape(-1, self.dim)
        terms = field.reduce(V[:, None, i] * W[None, :, j] * c)
        for target in np.unique(r):
            out[:, :, target] = field.reduce(terms[:, :, r == target].sum(axis=2))
        return out.reshape(-1, self.dim)


def _face_indices(X, p, q):
    level = X.simplices[p + q]
    front = np.array([X.index[p][s[:p + 1]] for s in level], dtype=np.int64)
    back = np.array([X.index[q][s[p:]] for s in level], dtype=np.int64)
    return front, back


@lru_cache(maxsize=None)
def cup_ring(X, field):
    """Cup-product ring on the canonical basis, Alexander-Whitney at cochain level."""
    H = cohomology_basis(X, field)
    degrees = tuple(k for k, n in enumerate(H.dims) for _ in range(n))
    labels = tuple(f'e{k}.{i}' for k, n in enumerate(H.dims) for i in range(n))
    offsets = np.concatenate([[0], np.cumsum(H.dims)]).astype(int)
    n = len(degrees)
    table = field.zeros((n, n, n))
    for p in range(X.dim + 1):
        for q in range(X.dim + 1 - p):
            A, B = H.representatives[p], H.representatives[q]
            if A.shape[0] == 0 or B.shape[0] == 0 or H.dims[p + q] == 0:
                continue
            front, back = _face_indices(X, p, q)
            cup = field.reduce(A[:, front][:, None, :] * B[:, back][None, :, :])
            coords = H.coordinates(p + q, cup.reshape(-1, len(front)))
            block = coords.reshape(A.shape[0], B.shape[0], -1)
            table[offsets[p]:offsets[p + 1], offsets[q]:offsets[q + 1], offsets[p + q]:offsets[p + q + 1]] = block

    unit = field.zeros(n)
    # degree-0 representatives are component indicators, so 1 = their sum
    unit[:H.dims[0]] = 1
    ring = GradedRing(field, degrees, labels, _frozen(table), _frozen(field.asarray(unit)), space=H, top=X.dim)
    logger.debug(f'cup ring of {X.name} over {field}: {n} basis elements')
    return ring


@dataclass(frozen=True, eq=False)
class RingHom:
    """Graded ring map; ``matrix`` sends source coordinates (columns) to target coordinates."""

    source: GradedRing
    target: GradedRing
    matrix: np.ndarray

    def apply(self, x):
        return self.target.field.reduce(self.matrix @ self.target.field.asarray(x))

    def kernel_by_degree(self):
        field = self.source.field
        out = {}
        for k in sorted(set(self.source.degrees)):
            cols = self.source.indices(k)
            rows = self.target.indices(k)
            block = self.matrix[np.ix_(rows, cols)] if rows else field.zeros((0, len(cols)))
            K = kernel_basis(block, field)
            full = field.zeros((K.shape[0], self.source.dim))
            full[:, cols] = K
            out[k] = full
        return out

    def kernel(self):
        parts = [K for K in self.kernel_by_degree().values() if K.shape[0]]
        if not parts:
            return self.source.field.zeros((0, self.source.dim))
        return np.concatenate(parts, axis=0)

    @property
    def rank(self):
        return rank_kernel_image(self.matrix, self.source.field)[0]

    def is_injective(self):
        return self.rank == self.source.dim

    def check_multiplicative(self):
        """First basis pair (i, j) violating f(e_i e_j) = f(e_i) f(e_j), or None."""
        field = self.source.field
        M = self.matrix
        lhs = field.reduce(np.tensordot(self.source.table, M, axes=([2], [1])))
        step = field.reduce(np.tensordot(M.T, self.target.table, axes=([1], [0])))
        rhs = field.reduce(np.tensordot(step, M.T, axes=([1], [1]))).transpose(0, 2, 1)
        bad = np.argwhere((lhs != rhs).any(axis=2))
        if bad.size:
            return tuple(int(i) for i in bad[0])
        if (field.reduce(M @ self.source.unit) != self.target.unit).any():
            return ('unit',)
        return None


def _pullback_matrix(f, k):
    X, Y = f.domain, f.codomain
    out = np.zeros((len(X.simplices[k]), len(Y.simplices[k])), dtype=np.int64)
    for r, s in enumerate(X.simplices[k]):
        image = [f(v) for v in s]
        if len(set(image)) < len(image):
            continue
        inversions = sum(1 for a in range(len(image)) for b in range(a + 1, len(image)) if image[a] > image[b])
        out[r, Y.index[k][tuple(sorted(image))]] = (-1) ** inversions
    return out


def induced_ring_hom(f, field):
    """f^*: H^*(Y) -> H^*(X) for a simplicial map f: X -> Y."""
    HX, HY = cup_ring(f.domain, field), cup_ring(f.codomain, field)
    M = field.zeros((HX.dim, HY.dim))
    for k in range(min(f.domain.dim, f.codomain.dim) + 1):
        rows, cols = HX.indices(k), HY.indices(k)
        if not rows or not cols:
            continue
        pulled = field.matmul(HY.space.representatives[k], field.asarray(_pullback_matrix(f, k).T))
        M[np.ix_(rows, cols)] = HX.space.coordinates(k, pulled).T
    hom = RingHom(HY, HX, _frozen(M))
    failure = hom.check_multiplicative()
    if failure is not None:
        raise NotMultiplicativeError(f'induced map of {f.name} is not multiplicative at {failure}')
    return hom


def tensor_ring(A, B):
    """A (x) B with (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'."""
    if A.field != B.field:
        raise ValueError(f'field mismatch: {A.field} vs {B.field}')
    field = A.field
    nA, nB = A.dim, B.dim
    outer = np.multiply.outer(A.table, B.table).transpose(0, 3, 1, 4, 2, 5)
    sign = field.sign(np.multiply.outer(np.array(B.degrees, dtype=np.int64), np.array(A.degrees, dtype=np.int64)))
    table = field.reduce(outer * sign[None, :, :, None, None, None]).reshape(nA * nB, nA * nB, nA * nB)
    degrees = tuple(a + b for a in A.degrees for b in B.degrees)
    labels = tuple(f'{a}*{b}' for a in A.labels for b in B.labels)
    unit = field.reduce(np.multiply.outer(A.unit, B.unit).reshape(-1))
    return GradedRing(field, degrees, labels, _frozen(table), _frozen(unit), top=A.top_degree + B.top_degree)


def one_cross_f_hom(f, field):
    """(1, f)^*: H^*(X) (x) H^*(Y) -> H^*(X), u (x) v |-> u . f^*(v)."""
    HX = cup_ring(f.domain, field)
    HY = cup_ring(f.codomain, field)
    fstar = induced_ring_hom(f, field).matrix
    source = tensor_ring(HX, HY)
    # [i, r, j] -> column (i, j), row r
    prod = field.reduce(np.tensordot(HX.table, fstar, axes=([1], [0])))
    M = prod.transpose(1, 0, 2).reshape(HX.dim, HX.dim * HY.dim)
    return RingHom(source, HX, _frozen(M))


def diagonal_hom(X, field):
    return one_cross_f_hom(identity_map(X), field)


@dataclass(frozen=True)
class Connectivity:
    value: int
    acyclic: bool
    betti: tuple
    torsion: tuple


def integral_homology(X):
    """Betti numbers and torsion coefficients of H_k(X; Z) for k = 0..dim."""
    if X.dim < 0:
        raise SimplicialError('homology of an empty complex')
    ranks, torsions = [], []
    for k in range(X.dim + 1):
        # boundary d_{k+1}: C_{k+1} -> C_k is the transpose of delta^k
        snf = smith_normal_form(incidence_matrix(X, k).T.astype(object))
        ranks.append(snf.rank)
        torsions.append(tuple(d for d in snf.factors if d > 1))
    betti, torsion = [], []
    for k in range(X.dim + 1):
        into = ranks[k - 1] if k > 0 else 0
        betti.append(len(X.simplices[k]) - into - ranks[k])
        torsion.append(torsions[k])
    return tuple(betti), tuple(torsion)


def integral_connectivity(X):
    betti, torsion = integral_homology(X)
    if betti[0] != 1:
        raise DisconnectedComplexError(f'{X.name or "complex"} has {betti[0]} components')
    for k in range(1, X.dim + 1):
        if betti[k] or torsion[k]:
            return Connectivity(k - 1, False, betti, torsion)
    return Connectivity(X.dim, True, betti, torsion)
