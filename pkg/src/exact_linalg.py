import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix


logger = logging.getLogger(__name__)

# residues and their products must stay inside int64 during accumulation
MAX_PRIME = 2 ** 16


@lru_cache(maxsize=None)
def _domain(p):
    return QQ if p == 0 else GF(p, symmetric=False)


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals (p == 0) or the prime field F_p.

    Small matrices travel as numpy arrays (Fractions for q, int64 residues for
    F_p); elimination runs on sparse sympy ``DomainMatrix`` objects.
    """

    p: int = 0

    def __post_init__(self):
        if self.p == 0:
            return
        if not isprime(self.p):
            raise ValueError(f'field characteristic {self.p} is not prime')
        if self.p >= MAX_PRIME:
            raise ValueError(f'prime {self.p} too large, expected p < {MAX_PRIME}')

    @property
    def kind(self):
        return 'rationals' if self.p == 0 else 'prime'

    @property
    def name(self):
        return 'q' if self.p == 0 else f'f{self.p}'

    @property
    def domain(self):
        return _domain(self.p)

    def __str__(self):
        return self.name

    def element(self, x):
        """numpy/Fraction value -> element of ``self.domain``."""
        if self.p:
            return self.domain(int(x) % self.p)
        x = Fraction(x)
        return QQ(x.numerator, x.denominator)

    def value(self, e):
        """Element of ``self.domain`` -> Fraction or residue."""
        if self.p:
            return int(e) % self.p
        return Fraction(int(e.numerator), int(e.denominator))

    def asarray(self, values, shape=None):
        """Fresh array of field elements (Fractions for q, residues for F_p)."""
        if self.p:
            arr = np.array(values, dtype=np.int64)
            if shape is not None:
                arr = arr.reshape(shape)
            return arr % self.p
        arr = np.array(values, dtype=object)
        if shape is not None:
            arr = arr.reshape(shape)
        out = np.empty(arr.shape, dtype=object)
        for idx, x in np.ndenumerate(arr):
            out[idx] = Fraction(x)
        return out

    def zeros(self, shape):
        if self.p:
            return np.zeros(shape, dtype=np.int64)
        return np.full(shape, Fraction(0), dtype=object)

    def identity(self, n):
        out = self.zeros((n, n))
        out[np.arange(n), np.arange(n)] = 1 if self.p else Fraction(1)
        return out

    def reduce(self, arr):
        return arr % self.p if self.p else arr

    def sign(self, exponent):
        """(-1)**exponent as a field element, elementwise for arrays."""
        s = 1 - 2 * (np.asarray(exponent, dtype=np.int64) % 2)
        return s % self.p if self.p else s.astype(object)

    def matmul(self, a, b):
        if a.shape[1] == 0:
            return self.zeros((a.shape[0], b.shape[1]))
        return self.reduce(a @ b)


def parse_field(name):
    """'q' -> rationals, 'f<p>' -> prime field F_p."""
    token = str(name).strip().lower()
    if token in ('q', 'qq', 'rationals'):
        return FieldSpec(0)
    if token.startswith('f') and token[1:].isdigit():
        return FieldSpec(int(token[1:]))
    raise ValueError(f'unknown field: {name!r} (expected q or f<p>)')


def sparse_matrix(rows, shape, field):
    """Sparse DomainMatrix from {row: {col: value}}; zero entries are dropped."""
    zero = field.domain.zero
    dod = {}
    for i, row in rows.items():
        entries = {j: field.element(v) for j, v in row.items()}
        entries = {j: e for j, e in entries.items() if e != zero}
        if entries:
            dod[i] = entries
    return DomainMatrix(dod, tuple(shape), field.domain)


def to_sparse(M, field):
    M = field.asarray(M)
    if M.ndim != 2:
        raise ValueError(f'expected a 2-d matrix, got shape {M.shape}')
    rows = {}
    for i, j in zip(*np.nonzero(M != 0)):
        rows.setdefault(int(i), {})[int(j)] = M[i, j]
    return sparse_matrix(rows, M.shape, field)


def to_dense(D, field):
    out = field.zeros(D.shape)
    for i, row in D.to_sdm().items():
        for j, e in row.items():
            out[i, j] = field.value(e)
    return out


def _empty(n, field):
    return DomainMatrix({}, (0, n), field.domain)


def sparse_rref(D, field):
    """Nonzero rows of the RREF of D and the pivot columns."""
    rows, cols = D.shape
    if rows == 0 or cols == 0 or D.is_zero_matrix:
        return _empty(cols, field), ()
    R, pivots = D.rref()
    pivots = tuple(int(c) for c in pivots)
    return R.extract(list(range(len(pivots))), list(range(cols))), pivots


def sparse_kernel(D, field):
    """Null space of D (acting on column vectors) as RREF rows."""
    cols = D.shape[1]
    R, pivots = sparse_rref(D, field)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    # column c of R restricted to the pivot rows, negated
    back = {}
    for i, row in R.to_sdm().items():
        for j, e in row.items():
            if j not in pivot_set:
                back.setdefault(j, {})[pivots[i]] = -e
    K = field.domain
    dod = {}
    for t, c in enumerate(free):
        dod[t] = {c: K.one, **back.get(c, {})}
    return sparse_rref(DomainMatrix(dod, (len(free), cols), K), field)[0]


def sparse_reduce(V, basis, pivots, field):
    """Clear the pivot coordinates of the rows of V using an RREF basis."""
    if not pivots or V.shape[0] == 0:
        return V
    return V - V.extract(list(range(V.shape[0])), list(pivots)) * basis


def sparse_rank(D, field):
    return len(sparse_rref(D, field)[1])


def kernel_basis(M, field):
    """Null space of M (acting on column vectors) as RREF rows."""
    return to_dense(sparse_kernel(to_sparse(M, field), field), field)


def rank_kernel_image(M, field):
    """(rank, kernel basis rows, column-space basis rows), all in RREF."""
    D = to_sparse(M, field)
    image, _ = sparse_rref(D.transpose(), field)
    kernel = sparse_kernel(D, field)
    assert image.shape[0] + kernel.shape[0] == D.shape[1]
    return image.shape[0], to_dense(kernel, field), to_dense(image, field)


def select_independent(V, field):
    """Indices of a greedy maximal independent subset of the rows of V."""
    if V.shape[0] == 0:
        return ()
    return sparse_rref(to_sparse(V, field).transpose(), field)[1]


@dataclass(frozen=True)
class SmithForm:
    factors: tuple
    left: np.ndarray
    right: np.ndarray
    diagonal: np.ndarray

    @property
    def rank(self):
        return len(self.factors)


def _int_array(M):
    arr = np.array(M, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f'expected a 2-d integer matrix, got shape {arr.shape}')
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        if int(x) != x:
            raise ValueError(f'non-integer entry {x!r} at {idx}')
        out[idx] = int(x)
    return out


def _int_identity(n):
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def _move_smallest(D, U, V, t, region):
    """Swap the smallest nonzero entry of the region into position (t, t)."""
    nz = [(abs(D[i, j]), i, j) for i, j in region if D[i, j] != 0]
    _, i, j = min(nz)
    if i != t:
        D[[t, i]] = D[[i, t]]
        U[[t, i]] = U[[i, t]]
    if j != t:
        D[:, [t, j]] = D[:, [j, t]]
        V[:, [t, j]] = V[:, [j, t]]


def smith_normal_form(M):
    """Smith normal form over the integers with U @ M @ V == D."""
    D = _int_array(M)
    m, n = D.shape
    U = _int_identity(m)
    V = _int_identity(n)
    t = 0
    while t < min(m, n):
        sub = [(i, j) for i in range(t, m) for j in range(t, n)]
        if all(D[i, j] == 0 for i, j in sub):
            break
        _move_smallest(D, U, V, t, sub)
        while True:
            piv = D[t, t]
            dirty = False
            for r in range(t + 1, m):
                if D[r, t] != 0:
                    q = D[r, t] // piv
                    D[r] = D[r] - q * D[t]
                    U[r] = U[r] - q * U[t]
                    dirty = dirty or D[r, t] != 0
            for c in range(t + 1, n):
                if D[t, c] != 0:
                    q = D[t, c] // piv
                    D[:, c] = D[:, c] - q * D[:, t]
                    V[:, c] = V[:, c] - q * V[:, t]
                    dirty = dirty or D[t, c] != 0
            if dirty:
                cross = [(i, t) for i in range(t, m)] + [(t, j) for j in range(t + 1, n)]
                _move_smallest(D, U, V, t, cross)
                continue
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i, j] % piv != 0]
            if bad:
                r = bad[0][0]
                D[t] = D[t] + D[r]
                U[t] = U[t] + U[r]
                continue
            break
        if D[t, t] < 0:
            D[t] = -D[t]
            U[t] = -U[t]
        t += 1
    factors = tuple(int(D[i, i]) for i in range(t))
    logger.debug(f'smith normal form of {m}x{n} matrix: {factors}')
    return SmithForm(factors, U, V, D)
