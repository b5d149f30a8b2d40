"""Weak morphisms ``(f0, f1, eps)`` of 2-term L-infinity algebras and their homotopies."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import l2a as _l2a
from .exactla import (
    asarray,
    coordinates,
    identity,
    is_zero,
    rank,
    solve_affine,
    zeros,
)
from .l2a import (
    InvalidStructureError,
    TwoTermL2A,
    cached,
    homology,
)
from .multilinear import (
    antisymmetry_defects,
    difference_entries,
    postcompose,
    precompose,
    relabel,
)
from .reports import (
    FOUND,
    LINEAR_OBSTRUCTION,
    UNKNOWN,
    ReportBuilder,
    SearchResult,
    ValidationReport,
)

__all__ = [
    "L2AMorphism",
    "L2ATransformation",
    "CompositionError",
    "identity_morphism",
    "zero_morphism",
    "validate_morphism",
    "compose_morphisms",
    "validate_transformation",
    "compose_transformations",
    "induced_homology_maps",
    "is_quasi_iso",
    "find_transformation",
    "linearized_solve",
]


class CompositionError(ValueError):
    pass


def _set(obj, name, value, shape):
    arr = asarray(value) if np.size(value) else asarray(zeros(*shape))
    if arr.shape != tuple(shape):
        raise ValueError(f"{name}: expected shape {tuple(shape)}, got {arr.shape}")
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True, eq=False)
class L2AMorphism:
    source: TwoTermL2A
    target: TwoTermL2A
    f0: np.ndarray
    f1: np.ndarray
    eps: np.ndarray
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        W, V = self.source, self.target
        _set(self, "f0", self.f0, (V.dim_v0, W.dim_v0))
        _set(self, "f1", self.f1, (V.dim_v1, W.dim_v1))
        _set(self, "eps", self.eps, (W.dim_v0, W.dim_v0, V.dim_v1))

    @property
    def is_strict(self) -> bool:
        return is_zero(self.eps)

    def same_as(self, other: "L2AMorphism") -> bool:
        return (
            self.source.same_as(other.source)
            and self.target.same_as(other.target)
            and all(np.array_equal(getattr(self, k), getattr(other, k)) for k in ("f0", "f1", "eps"))
        )

    def __repr__(self):
        return f"<L2AMorphism {self.source!r} -> {self.target!r}>"


@dataclass(frozen=True, eq=False)
class L2ATransformation:
    """A homotopy ``theta: W0 -> V1`` from ``from_m`` (g) to ``to_m`` (f)."""

    from_m: L2AMorphism
    to_m: L2AMorphism
    theta: np.ndarray

    def __post_init__(self):
        W, V = self.from_m.source, self.from_m.target
        _set(self, "theta", self.theta, (V.dim_v1, W.dim_v0))


def identity_morphism(L: TwoTermL2A) -> L2AMorphism:
    return L2AMorphism(L, L, identity(L.dim_v0), identity(L.dim_v1), zeros(L.dim_v0, L.dim_v0, L.dim_v1))


def zero_morphism(W: TwoTermL2A, V: TwoTermL2A) -> L2AMorphism:
    return L2AMorphism(
        W, V, zeros(V.dim_v0, W.dim_v0), zeros(V.dim_v1, W.dim_v1), zeros(W.dim_v0, W.dim_v0, V.dim_v1)
    )


def validate_morphism(f: L2AMorphism) -> ValidationReport:
    return cached(f, "validation", lambda: _validate_morphism(f))


def _validate_morphism(f: L2AMorphism) -> ValidationReport:
    W, V = f.source, f.target
    rb = ReportBuilder("morphism")
    f0, f1, eps = f.f0, f.f1, f.eps

    diff = f0 @ W.d - V.d @ f1
    for (i, j) in zip(*np.nonzero(np.frompyfunc(bool, 1, 1)(diff).astype(bool))):
        rb.fail("chain_map", ((f0 @ W.d)[i, j],), ((V.d @ f1)[i, j],), (int(i), int(j)))
    rb.add("eps_antisymmetry", antisymmetry_defects(eps, 2))

    # [f0 x, f0 y] - f0[x,y] = d eps(x,y)
    lhs = precompose(V.b00, f0, f0) - postcompose(f0, W.b00)
    rb.add("bracket_defect", difference_entries(lhs, postcompose(V.d, eps), 2))

    # [f0 x, f1 k] - f1[x,k] = eps(x, dk)
    lhs = precompose(V.b01, f0, f1) - postcompose(f1, W.b01)
    rb.add("action_defect", difference_entries(lhs, precompose(eps, None, W.d), 2))

    lhs = precompose(V.jac, f0, f0, f0) - postcompose(f1, W.jac)
    rb.add("jacobiator_defect", difference_entries(lhs, _jacobiator_rhs(f), 3))
    return rb.build()


def _cyclic(A):
    return A + relabel(A, "yzxa->xyza") + relabel(A, "zxya->xyza")


def _jacobiator_rhs(f: L2AMorphism):
    W, V = f.source, f.target
    A = np.einsum("yzm,xma->xyza", W.b00, f.eps)  # eps(x, [y,z])
    B = np.einsum("yzn,xna->xyza", f.eps, precompose(V.b01, f.f0, None))  # [f0 x, eps(y,z)]
    return _cyclic(A) + _cyclic(B)


def ensure_valid_morphism(f: L2AMorphism) -> None:
    r = validate_morphism(f)
    if not r.valid:
        raise InvalidStructureError(r)


def compose_morphisms(g: L2AMorphism, f: L2AMorphism) -> L2AMorphism:
    """``g o f`` with ``gamma(x,y) = g1 eps(x,y) + delta(f0 x, f0 y)``."""
    if f.target is not g.source and not f.target.same_as(g.source):
        raise CompositionError(
            f"cannot compose: target {f.target!r} of the first differs from source {g.source!r}"
        )
    ensure_valid_morphism(f)
    ensure_valid_morphism(g)
    gamma = postcompose(g.f1, f.eps) + precompose(g.eps, f.f0, f.f0)
    return L2AMorphism(f.source, g.target, g.f0 @ f.f0, g.f1 @ f.f1, gamma)


# ---------------------------------------------------------------------------
# transformations


def _transformation_residuals(f: L2AMorphism, g: L2AMorphism, theta) -> list[tuple[str, np.ndarray, np.ndarray, int]]:
    """(axiom, lhs, rhs, number of inputs) for a candidate ``theta`` from g to f."""
    W, V = f.source, f.target
    theta = np.asarray(theta, dtype=object)
    derived = precompose(V.b01, V.d, None)
    g0_theta = precompose(V.b01, g.f0, theta)  # [g0 x, theta y] indexed (x, y)
    lhs3 = precompose(derived, theta, theta) - postcompose(theta, W.b00)
    rhs3 = f.eps - g.eps + relabel(g0_theta, "yxa->xya") - g0_theta
    return [
        ("boundary", f.f0 - g.f0, V.d @ theta, 1),
        ("degree_one", f.f1 - g.f1, theta @ W.d, 1),
        ("bracket", lhs3, rhs3, 2),
    ]


def validate_transformation(t: L2ATransformation) -> ValidationReport:
    f, g = t.to_m, t.from_m
    rb = ReportBuilder("transformation")
    if not (f.source.same_as(g.source) and f.target.same_as(g.target)):
        raise CompositionError("transformation between non-parallel morphisms")
    for name, lhs, rhs, n in _transformation_residuals(f, g, t.theta):
        if n == 1:
            # matrices: report per column (input basis vector)
            rb.add(name, difference_entries(lhs.T, rhs.T, 1))
        else:
            rb.add(name, difference_entries(lhs, rhs, n))
    return rb.build()


def compose_transformations(t1: L2ATransformation, t2: L2ATransformation) -> L2ATransformation:
    """``t1: g => f`` after ``t2: h => g`` gives ``h => f`` with ``theta1 + theta2``."""
    if t2.to_m is not t1.from_m and not t2.to_m.same_as(t1.from_m):
        raise CompositionError("middle morphisms do not agree")
    return L2ATransformation(t2.from_m, t1.to_m, t1.theta + t2.theta)


def linearized_solve(residual, shape, particular_system):
    """Solve ``residual(X) = 0`` over the affine space of a linear system.

    ``particular_system`` returns ``(A, b)`` for the linear constraints on
    ``vec(X)`` (row-major).  ``residual`` maps a candidate matrix to a flat
    array.  The residual is assumed affine on the solution set of the linear
    constraints; the final candidate is re-checked, so a non-affine residual
    can only yield ``unknown``, never a wrong answer.
    """
    A, b = particular_system
    sol = solve_affine(A, b)
    if sol is None:
        return SearchResult(LINEAR_OBSTRUCTION, detail="linear constraints are inconsistent")
    x0, N = sol
    X0 = x0.reshape(shape)
    r0 = residual(X0)
    if N.shape[1] == 0 or r0.size == 0:
        if is_zero(r0):
            return SearchResult(FOUND, X0)
        return SearchResult(LINEAR_OBSTRUCTION, detail="unique linear solution fails the bracket condition")
    cols = [residual(X0 + N[:, i].reshape(shape)) - r0 for i in range(N.shape[1])]
    M = np.stack(cols, axis=1) if cols else zeros(r0.size, 0)
    sol2 = solve_affine(M, -r0)
    if sol2 is None:
        return SearchResult(LINEAR_OBSTRUCTION, detail="bracket condition has no solution on the affine space")
    c, _ = sol2
    X = X0 + (N @ c).reshape(shape)
    if not is_zero(residual(X)):
        return SearchResult(UNKNOWN, detail="bracket condition is not affine on the solution space")
    return SearchResult(FOUND, X)


def _kron(A, B):
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    out = zeros(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            if A[i, j]:
                out[i * B.shape[0] : (i + 1) * B.shape[0], j * B.shape[1] : (j + 1) * B.shape[1]] = A[i, j] * B
    return out


def find_transformation(f: L2AMorphism, g: L2AMorphism) -> SearchResult:
    """Look for a transformation from ``g`` to ``f``.

    The two linear axioms cut out an affine space; on it ``d theta = f0 - g0``
    is fixed, so the quadratic term ``[theta x, theta y] = [d theta x, theta y]``
    becomes affine and the third axiom is solved exactly.
    """
    if not (f.source.same_as(g.source) and f.target.same_as(g.target)):
        raise CompositionError("find_transformation needs parallel morphisms")
    ensure_valid_morphism(f)
    ensure_valid_morphism(g)
    W, V = f.source, f.target
    shape = (V.dim_v1, W.dim_v0)
    # vec row-major: (d theta) = kron(d, I) vec, (theta dW) = kron(I, dW^T) vec
    A = np.concatenate([_kron(V.d, identity(W.dim_v0)), _kron(identity(V.dim_v1), W.d.T)], axis=0)
    b = np.concatenate([(f.f0 - g.f0).reshape(-1), (f.f1 - g.f1).reshape(-1)])

    def residual(theta):
        parts = [(lhs - rhs).reshape(-1) for _, lhs, rhs, _ in _transformation_residuals(f, g, theta)]
        return np.concatenate(parts) if parts else zeros(0)

    res = linearized_solve(residual, shape, (A, b))
    if res.found:
        t = L2ATransformation(g, f, res.witness)
        if not validate_transformation(t).valid:
            return SearchResult(UNKNOWN, detail="candidate failed validation")
        return SearchResult(FOUND, t)
    return res


# ---------------------------------------------------------------------------
# homology


def induced_homology_maps(f: L2AMorphism) -> tuple[np.ndarray, np.ndarray]:
    """``(H0(f), H1(f))`` in the coordinates of :func:`lie2alg.l2a.homology`."""
    ensure_valid_morphism(f)
    return cached(f, "homology_maps", lambda: _induced(f))


def _induced(f: L2AMorphism):
    HW, HV = homology(f.source), homology(f.target)
    H0 = HV.h0.projection @ f.f0 @ HW.h0.section
    H1 = coordinates(HV.h1_basis, f.f1 @ HW.h1_basis)
    H0, H1 = asarray(H0), asarray(H1)
    _check_homomorphism(f, HW, HV, H0, H1)
    return H0, H1


def _check_homomorphism(f, HW, HV, H0, H1):
    lhs = precompose(HV.h0_bracket, H0, H0)
    rhs = postcompose(H0, HW.h0_bracket)
    if not np.array_equal(lhs, rhs):
        raise _l2a.WellDefinednessFailure("H0(f) is not a Lie homomorphism")
    lhs = precompose(HV.h0_action_on_h1, H0, H1)
    rhs = postcompose(H1, HW.h0_action_on_h1)
    if not np.array_equal(lhs, rhs):
        raise _l2a.WellDefinednessFailure("H1(f) is not H0(f)-equivariant")


def _invertible(M) -> bool:
    return M.shape[0] == M.shape[1] and rank(M) == M.shape[0]


def is_quasi_iso(f: L2AMorphism) -> bool:
    H0, H1 = induced_homology_maps(f)
    return _invertible(H0) and _invertible(H1)
