"""Dense multilinear maps as object arrays.

A k-linear map ``X1 x ... x Xk -> Y`` has shape ``(dim X1, ..., dim Xk, dim Y)``;
the last axis is always the output.
"""

from __future__ import annotations

from itertools import permutations, product

import numpy as np

from .exactla import asarray, current_field, zeros

__all__ = [
    "precompose",
    "postcompose",
    "evaluate",
    "relabel",
    "permutation_sign",
    "antisymmetric_from_sparse",
    "from_sparse",
    "to_sparse",
    "antisymmetry_defects",
    "difference_entries",
]


def precompose(T: np.ndarray, *maps) -> np.ndarray:
    """``T(A1 x1, ..., Ak xk)``; a ``None`` map leaves that slot alone."""
    out = T
    for axis, A in enumerate(maps):
        if A is None:
            continue
        A = np.asarray(A, dtype=object)
        if A.shape[0] != out.shape[axis]:
            raise ValueError(f"slot {axis}: map of shape {A.shape} into dimension {out.shape[axis]}")
        out = np.moveaxis(np.tensordot(A, out, axes=([0], [axis])), 0, axis)
    return out


def postcompose(M, T: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=object)
    return np.tensordot(T, M, axes=([-1], [1]))


def evaluate(T: np.ndarray, *vectors) -> np.ndarray:
    out = T
    for v in vectors:
        out = np.tensordot(np.asarray(v, dtype=object), out, axes=([0], [0]))
    return out


def relabel(T: np.ndarray, spec: str) -> np.ndarray:
    """Permute input slots with an einsum spec, e.g. ``"yzxa->xyza"``."""
    return np.einsum(spec, T)


def permutation_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def from_sparse(shape, entries) -> np.ndarray:
    """Dense tensor from ``(index_tuple, value)`` pairs."""
    F = current_field()
    T = zeros(*shape)
    for idx, val in entries:
        T[tuple(idx)] += F(val)
    return T


def antisymmetric_from_sparse(n: int, nargs: int, out_dim: int, entries) -> np.ndarray:
    """Expand entries given on strictly increasing input tuples with signs."""
    F = current_field()
    T = zeros(*([n] * nargs), out_dim)
    for idx, val in entries:
        inputs, o = tuple(idx[:nargs]), idx[nargs]
        if any(inputs[i] >= inputs[i + 1] for i in range(nargs - 1)):
            raise ValueError(f"antisymmetric entry {tuple(idx)} is not on a strictly increasing tuple")
        v = F(val)
        for perm in permutations(range(nargs)):
            T[tuple(inputs[p] for p in perm) + (o,)] += permutation_sign(perm) * v
    return T


def to_sparse(T: np.ndarray, antisymmetric_args: int = 0) -> list[tuple[tuple[int, ...], object]]:
    """Nonzero entries in lexicographic order.

    With ``antisymmetric_args = k`` only strictly increasing leading k-tuples
    are emitted (the remaining entries follow by sign).
    """
    out = []
    for idx in product(*(range(s) for s in T.shape)):
        if antisymmetric_args and any(
            idx[i] >= idx[i + 1] for i in range(antisymmetric_args - 1)
        ):
            continue
        v = T[idx]
        if v:
            out.append((idx, v))
    return out


def antisymmetry_defects(T: np.ndarray, nargs: int) -> list[tuple[tuple[int, ...], object, object]]:
    """``(input tuple, lhs, rhs)`` wherever ``T`` fails to be alternating.

    Each tuple is checked against its transpositions of adjacent slots; only
    non-decreasing input tuples are reported.
    """
    failures = []
    n = T.shape[0]
    for inputs in product(range(n), repeat=nargs):
        if any(inputs[i] > inputs[i + 1] for i in range(nargs - 1)):
            continue
        lhs = T[inputs]
        bad = False
        for perm in permutations(range(nargs)):
            other = tuple(inputs[p] for p in perm)
            s = permutation_sign(perm)
            if other == inputs and s == -1:
                if any(bool(x) for x in lhs):
                    bad = True
            elif not np.array_equal(T[other], s * lhs):
                bad = True
            if bad:
                failures.append((inputs, tuple(lhs), tuple(s * T[other])))
                break
    return failures


def difference_entries(lhs: np.ndarray, rhs: np.ndarray, nargs: int, ordered: bool = False):
    """Input tuples where ``lhs`` and ``rhs`` (both with output axis last) differ."""
    lhs = np.asarray(lhs, dtype=object)
    rhs = np.asarray(rhs, dtype=object)
    if lhs.shape != rhs.shape:
        raise ValueError(f"shape mismatch {lhs.shape} vs {rhs.shape}")
    if lhs.size == 0:
        return []
    nonzero = _truthy(lhs - rhs)
    nonzero = nonzero.reshape(lhs.shape[:nargs] + (-1,)).any(axis=-1)
    out = []
    for idx in zip(*np.nonzero(nonzero)):
        idx = tuple(int(i) for i in idx)
        if ordered and any(idx[i] >= idx[i + 1] for i in range(nargs - 1)):
            continue
        out.append((idx, tuple(lhs[idx].reshape(-1)), tuple(rhs[idx].reshape(-1))))
    return out


_truthy_ufunc = np.frompyfunc(bool, 1, 1)


def _truthy(arr: np.ndarray) -> np.ndarray:
    return _truthy_ufunc(arr).astype(bool)


def freeze(T) -> np.ndarray:
    return asarray(T)
