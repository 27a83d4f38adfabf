"""Brute-force count of codimension-n ideals of F_q[x, x^-1, y, y^-1].

A codimension-n ideal I is the same thing as the quotient module R/I with its
distinguished generator 1. Choosing a basis of R/I turns it into a triple
(A, B, v): commuting invertible n x n matrices (the actions of x and y) and a
cyclic vector v. GL_n(F_q) acts freely on such triples by change of basis, so

    #ideals = #{cyclic triples} / |GL_n(F_q)|.

Only prime q is supported; matrices are small numpy integer arrays reduced
mod q.
"""
from __future__ import annotations

import itertools
from typing import Dict, List, Sequence

import numpy as np

from .errors import BudgetExceededError, InconsistencyError, InvalidParametersError

SUPPORTED_N = (1, 2, 3)
SUPPORTED_Q = (2, 3, 5)
DEFAULT_BUDGET = 10 ** 6


def gl_order(n: int, q: int) -> int:
    out = 1
    for j in range(n):
        out *= q ** n - q ** j
    return out


def enumeration_size(n: int, q: int) -> int:
    """Number of candidate matrices A scanned for the outer loop."""
    return q ** (n * n)


def det_mod(mats: np.ndarray, q: int) -> np.ndarray:
    """Determinants mod q of a stack ``(..., n, n)`` of small integer matrices (n <= 3)."""
    n = mats.shape[-1]
    m = mats.astype(np.int64)
    if n == 1:
        d = m[..., 0, 0]
    elif n == 2:
        d = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    elif n == 3:
        d = (
            m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
            - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
            + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0])
        )
    else:
        raise InvalidParametersError("det_mod handles n <= 3 only")
    return np.mod(d, q)


def inverse_mod(a: np.ndarray, q: int) -> np.ndarray:
    """Inverse of an invertible matrix over F_q by Gauss-Jordan elimination."""
    n = a.shape[0]
    aug = np.concatenate([np.mod(a, q), np.eye(n, dtype=np.int64)], axis=1).astype(np.int64)
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col] % q), None)
        if piv is None:
            raise InvalidParametersError("matrix is singular mod q")
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * pow(int(aug[col, col]), -1, q) % q
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] = (aug[r] - aug[r, col] * aug[col]) % q
    return aug[:, n:]


def row_reduce(rows: np.ndarray, q: int) -> np.ndarray:
    """Reduced row echelon basis (nonzero rows only) of the row space mod q."""
    m = np.mod(np.array(rows, dtype=np.int64), q)
    if m.ndim == 1:
        m = m[None, :]
    nrows, ncols = m.shape
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r, col]), None)
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        m[rank] = m[rank] * pow(int(m[rank, col]), -1, q) % q
        for r in range(nrows):
            if r != rank and m[r, col]:
                m[r] = (m[r] - m[r, col] * m[rank]) % q
        rank += 1
        if rank == nrows:
            break
    return m[:rank]


def nullspace_mod(mat: np.ndarray, q: int) -> np.ndarray:
    """Basis (as rows) of ``{x : mat @ x = 0 mod q}``."""
    rref = row_reduce(mat, q)
    ncols = mat.shape[1]
    pivots = []
    for row in rref:
        pivots.append(int(np.nonzero(row)[0][0]))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(ncols, dtype=np.int64)
        x[f] = 1
        for row, pc in zip(rref, pivots):
            x[pc] = (-row[f]) % q
        basis.append(x)
    return np.array(basis, dtype=np.int64).reshape(len(basis), ncols)


def centralizer_basis(a: np.ndarray, q: int) -> np.ndarray:
    """Basis of ``{X : AX = XA}`` over F_q, as a ``(d, n, n)`` array."""
    n = a.shape[0]
    eye = np.eye(n, dtype=np.int64)
    # row-major vec: vec(AX) = (A kron I) vec X, vec(XA) = (I kron A^T) vec X
    lin = np.mod(np.kron(a, eye) - np.kron(eye, a.T), q)
    return nullspace_mod(lin, q).reshape(-1, n, n)


def all_vectors(n: int, q: int) -> np.ndarray:
    return np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64).reshape(-1, n)


def all_matrices(n: int, q: int) -> np.ndarray:
    return all_vectors(n * n, q).reshape(-1, n, n)


def algebra_basis(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Basis of the subalgebra of M_n(F_q) generated by A and B.

    For invertible A, B this already contains A^-1 and B^-1 (Cayley-Hamilton),
    so it is the span of all monomials A^i B^j with i, j in Z.
    """
    n = a.shape[0]
    basis = row_reduce(np.eye(n, dtype=np.int64).reshape(1, -1), q)
    frontier = [np.eye(n, dtype=np.int64)]
    while frontier:
        nxt = []
        for m in frontier:
            for g in (a, b):
                cand = (g @ m) % q
                stacked = row_reduce(np.vstack([basis, cand.reshape(1, -1)]), q)
                if stacked.shape[0] > basis.shape[0]:
                    basis = stacked
                    nxt.append(cand)
        frontier = nxt
    return basis.reshape(-1, n, n)


def count_cyclic_vectors(a: np.ndarray, b: np.ndarray, q: int, vectors: np.ndarray | None = None) -> int:
    """Number of v whose orbit under the monomials in A, B spans F_q^n.

    A commutative algebra acting with a cyclic vector v embeds into F_q^n via
    X -> Xv, so a cyclic vector exists only if the generated algebra has
    dimension exactly n; then v is cyclic iff det[M_1 v | ... | M_n v] != 0
    for a basis M_1..M_n of the algebra.
    """
    n = a.shape[0]
    alg = algebra_basis(a, b, q)
    if alg.shape[0] != n:
        return 0
    if vectors is None:
        vectors = all_vectors(n, q)
    # images[v, j, :] = M_j @ v
    images = np.einsum("jkl,vl->vjk", alg, vectors) % q
    return int(np.count_nonzero(det_mod(images, q)))


def is_cyclic(a: np.ndarray, b: np.ndarray, v: Sequence[int], q: int) -> bool:
    """Breadth-first span closure of v under A, B, A^-1, B^-1."""
    n = a.shape[0]
    gens = [np.mod(a, q), np.mod(b, q), inverse_mod(a, q), inverse_mod(b, q)]
    v = np.mod(np.asarray(v, dtype=np.int64), q)
    span = row_reduce(v.reshape(1, -1), q)
    if span.shape[0] == 0:
        return n == 0
    frontier = [v]
    while frontier and span.shape[0] < n:
        nxt = []
        for w in frontier:
            for g in gens:
                img = (g @ w) % q
                grown = row_reduce(np.vstack([span, img.reshape(1, -1)]), q)
                if grown.shape[0] > span.shape[0]:
                    span = grown
                    nxt.append(img)
        frontier = nxt
    return span.shape[0] == n


def _encode(mats: np.ndarray, q: int) -> np.ndarray:
    flat = mats.reshape(mats.shape[0], -1)
    weights = q ** np.arange(flat.shape[1] - 1, -1, -1, dtype=np.int64)
    return flat @ weights


def _triples_for(a: np.ndarray, q: int, vectors: np.ndarray) -> int:
    """Cyclic triples (A, B, v) with this fixed A."""
    basis = centralizer_basis(a, q)
    d = basis.shape[0]
    coeffs = all_vectors(d, q)
    bs = np.einsum("cd,dij->cij", coeffs, basis) % q
    bs = bs[det_mod(bs, q) != 0]
    return sum(count_cyclic_vectors(a, b, q, vectors) for b in bs)


def count_cyclic_triples(n: int, q: int, use_classes: bool = True) -> int:
    """Count triples (A, B, v) with A, B in GL_n(F_q) commuting and v cyclic.

    With ``use_classes`` the outer loop visits one A per conjugacy class and
    weights it by the class size; the count for A is invariant under
    conjugation because (A, B, v) -> (gAg^-1, gBg^-1, gv) is a bijection.
    """
    mats = all_matrices(n, q)
    gl = mats[det_mod(mats, q) != 0]
    vectors = all_vectors(n, q)
    if not use_classes:
        return sum(_triples_for(a, q, vectors) for a in gl)
    gl_inv = np.array([inverse_mod(g, q) for g in gl])
    codes = _encode(gl, q)
    index = {int(c): i for i, c in enumerate(codes)}
    seen = np.zeros(len(gl), dtype=bool)
    total = 0
    for i in range(len(gl)):
        if seen[i]:
            continue
        orbit = np.einsum("gij,jk,gkl->gil", gl, gl[i], gl_inv) % q
        members = np.unique(_encode(orbit, q))
        for c in members:
            seen[index[int(c)]] = True
        total += len(members) * _triples_for(gl[i], q, vectors)
    return total


def count_ideals_bruteforce(n: int, q: int, budget: int = DEFAULT_BUDGET, use_classes: bool = True) -> int:
    """Number of codimension-n ideals of the Laurent ring in two variables over F_q.

    Raises InvalidParametersError outside n in {1, 2, 3}, q in {2, 3, 5} and
    BudgetExceededError when ``q^(n^2)`` exceeds ``budget``.
    """
    if n not in SUPPORTED_N or q not in SUPPORTED_Q:
        raise InvalidParametersError(f"oracle supports n in {SUPPORTED_N}, q in {SUPPORTED_Q}; got n={n}, q={q}")
    size = enumeration_size(n, q)
    if size > budget:
        raise BudgetExceededError(f"enumeration size {size} for (n={n}, q={q}) exceeds budget {budget}")
    triples = count_cyclic_triples(n, q, use_classes=use_classes)
    order = gl_order(n, q)
    ideals, rem = divmod(triples, order)
    if rem:
        raise InconsistencyError(f"{triples} cyclic triples not divisible by |GL_{n}(F_{q})| = {order}", n=n)
    return ideals


def oracle_table(pairs: Sequence[tuple], budget: int = DEFAULT_BUDGET) -> List[Dict[str, int]]:
    return [{"n": n, "q": q, "count": count_ideals_bruteforce(n, q, budget=budget)} for n, q in pairs]
