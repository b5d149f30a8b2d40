"""2-term L-infinity algebras ``[d: V1 -> V0]`` given by structure constants.

Only two brackets are stored: ``b00`` on V0 and ``b01: V0 x V1 -> V1``.  The
other orientation is ``[h, x] := -b01(x, h)``.  The Jacobiator ``jac`` is a
fully antisymmetric trilinear map ``V0^3 -> V1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exactla import (
    QuotientPresentation,
    asarray,
    coordinates,
    is_zero,
    kernel_basis,
    quotient,
    zeros,
)
from .multilinear import (
    antisymmetric_from_sparse,
    antisymmetry_defects,
    difference_entries,
    evaluate,
    from_sparse,
    postcompose,
    precompose,
    relabel,
)
from .reports import ReportBuilder, ValidationReport

__all__ = [
    "AXIOMS",
    "TwoTermL2A",
    "HomologyPair",
    "InvalidStructureError",
    "WellDefinednessFailure",
    "validate_l2a",
    "derived_bracket_v1",
    "jacobi_defect_v1",
    "homology",
    "is_strict",
    "jacobi_tensor",
]

AXIOMS = {
    "bracket_antisymmetry": "[x,y] = -[y,x]",
    "mixed_antisymmetry": "[x,h] = -[h,x]",
    "jacobiator_antisymmetry": "<x,y,z> is alternating",
    "d_equivariance": "d[x,h] = [x,dh]",
    "derived_symmetry": "[dh,k] = [h,dk]",
    "jacobiator_boundary": "d<x,y,z> = [x,[y,z]] + [y,[z,x]] + [z,[x,y]]",
    "jacobiator_mixed": "<x,y,dh> = [x,[y,h]] + [y,[h,x]] + [h,[x,y]]",
    "jacobiator_coherence": "[<x,y,z>,w] - [<w,x,y>,z] + [<z,w,x>,y] - [<y,z,w>,x] = sum of six <[.,.],.,.>",
}


class InvalidStructureError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(report.text(limit=5))
        self.report = report


class WellDefinednessFailure(ArithmeticError):
    pass


def _frozen(obj, name, value, shape):
    arr = asarray(value) if np.size(value) else asarray(zeros(*shape))
    if arr.shape != tuple(shape):
        raise ValueError(f"{name}: expected shape {tuple(shape)}, got {arr.shape}")
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True, eq=False)
class TwoTermL2A:
    dim_v1: int
    dim_v0: int
    d: np.ndarray
    b00: np.ndarray
    b01: np.ndarray
    jac: np.ndarray
    name: str = ""
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        n1, n0 = self.dim_v1, self.dim_v0
        _frozen(self, "d", self.d, (n0, n1))
        _frozen(self, "b00", self.b00, (n0, n0, n0))
        _frozen(self, "b01", self.b01, (n0, n1, n1))
        _frozen(self, "jac", self.jac, (n0, n0, n0, n1))

    @classmethod
    def from_sparse(cls, dim_v1, dim_v0, d=None, b00=(), b01=(), jac=(), name=""):
        """Build from sparse entries.

        ``b00`` entries are ``((i, j, k), value)`` with ``i < j``; ``jac`` entries
        ``((i, j, k, out), value)`` with ``i < j < k``; both are expanded with signs.
        ``b01`` entries ``((x, h, out), value)`` are taken as given.
        """
        return cls(
            dim_v1,
            dim_v0,
            zeros(dim_v0, dim_v1) if d is None else d,
            antisymmetric_from_sparse(dim_v0, 2, dim_v0, b00),
            from_sparse((dim_v0, dim_v1, dim_v1), b01),
            antisymmetric_from_sparse(dim_v0, 3, dim_v1, jac),
            name,
        )

    def replace(self, **changes) -> "TwoTermL2A":
        data = dict(
            dim_v1=self.dim_v1,
            dim_v0=self.dim_v0,
            d=self.d,
            b00=self.b00,
            b01=self.b01,
            jac=self.jac,
            name=self.name,
        )
        data.update(changes)
        return TwoTermL2A(**data)

    @property
    def b10(self) -> np.ndarray:
        """``[h, x]`` as a tensor ``V1 x V0 -> V1``."""
        return -relabel(self.b01, "xha->hxa")

    def same_as(self, other: "TwoTermL2A") -> bool:
        return (
            self.dim_v1 == other.dim_v1
            and self.dim_v0 == other.dim_v0
            and all(
                np.array_equal(getattr(self, k), getattr(other, k))
                for k in ("d", "b00", "b01", "jac")
            )
        )

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<TwoTermL2A{label} [{self.dim_v1} -> {self.dim_v0}]>"


def cached(obj, key, compute):
    cache = obj._cache
    if key not in cache:
        cache[key] = compute()
    return cache[key]


def jacobi_tensor(T: np.ndarray) -> np.ndarray:
    """``[a,[b,c]] + [b,[c,a]] + [c,[a,b]]`` for a bilinear ``T: X x X -> X``."""
    A = _outer_inner(T)
    return A + relabel(A, "bcaz->abcz") + relabel(A, "cabz->abcz")


def _outer_inner(T: np.ndarray) -> np.ndarray:
    # A[a,b,c] = T(a, T(b,c))
    return np.einsum("bcm,amz->abcz", T, T)


def validate_l2a(L: TwoTermL2A) -> ValidationReport:
    """Check all seven axioms on basis tuples (exact equality)."""
    return cached(L, "validation", lambda: _validate(L))


def _validate(L: TwoTermL2A) -> ValidationReport:
    rb = ReportBuilder(f"l2a {L.name or ''}".strip())
    d, b00, b01, jac = L.d, L.b00, L.b01, L.jac

    rb.add("bracket_antisymmetry", antisymmetry_defects(b00, 2))
    # [h,x] is defined as -[x,h], so mixed_antisymmetry holds by construction.
    rb.add("jacobiator_antisymmetry", antisymmetry_defects(jac, 3))

    lhs = postcompose(d, b01)
    rhs = precompose(b00, None, d)
    rb.add("d_equivariance", difference_entries(lhs, rhs, 2))

    lhs = precompose(b01, d, None)  # [dh, k] indexed (h, k)
    rhs = -relabel(precompose(b01, d, None), "kha->hka")  # [h, dk] = -b01(dk, h)
    rb.add("derived_symmetry", difference_entries(lhs, rhs, 2))

    lhs = postcompose(d, jac)
    rhs = jacobi_tensor(b00)
    rb.add("jacobiator_boundary", difference_entries(lhs, rhs, 3))

    lhs = precompose(jac, None, None, d)
    rhs = _mixed_jacobi(L)
    rb.add("jacobiator_mixed", difference_entries(lhs, rhs, 3))

    if not is_zero(jac):
        lhs, rhs = _coherence_sides(b00, jac, -relabel(b01, "xha->hxa"))
        rb.add("jacobiator_coherence", difference_entries(lhs, rhs, 4))
    return rb.build()


def _mixed_jacobi(L: TwoTermL2A) -> np.ndarray:
    """``[x,[y,h]] + [y,[h,x]] + [h,[x,y]]`` indexed ``(x, y, h)``."""
    b00, b01 = L.b00, L.b01
    t1 = np.einsum("yhm,xma->xyha", b01, b01)
    t2 = -np.einsum("xhm,yma->xyha", b01, b01)
    t3 = -np.einsum("xym,mha->xyha", b00, b01)
    return t1 + t2 + t3


def _coherence_sides(b0: np.ndarray, jac: np.ndarray, b10: np.ndarray):
    """Both sides of the degree-0 coherence axiom, indexed ``(x, y, z, w)``.

    ``b0`` is the bracket on the degree-0 space, ``jac`` lands in the degree-1
    space and ``b10`` is ``[h, x]`` from degree 1 x degree 0 into degree 1.
    """
    P = np.einsum("xyzm,mwa->xyzwa", jac, b10)  # [<x,y,z>, w]
    lhs = (
        P
        - relabel(P, "wxyza->xyzwa")
        + relabel(P, "zwxya->xyzwa")
        - relabel(P, "yzwxa->xyzwa")
    )
    Q = np.einsum("pqm,mrsa->pqrsa", b0, jac)  # <[p,q], r, s>
    rhs = (
        Q
        + relabel(Q, "zwxya->xyzwa")
        + relabel(Q, "xzwya->xyzwa")
        + relabel(Q, "wyxza->xyzwa")
        + relabel(Q, "xwyza->xyzwa")
        + relabel(Q, "yzxwa->xyzwa")
    )
    return lhs, rhs


def ensure_valid(L: TwoTermL2A) -> None:
    report = validate_l2a(L)
    if not report.valid:
        raise InvalidStructureError(report)


def is_strict(L: TwoTermL2A) -> bool:
    return is_zero(L.jac)


def derived_bracket_v1(L: TwoTermL2A) -> np.ndarray:
    """``[h, k] := [dh, k]`` on V1."""
    ensure_valid(L)
    return cached(L, "derived", lambda: asarray(precompose(L.b01, L.d, None)))


def jacobi_defect_v1(L: TwoTermL2A, h, k, l) -> np.ndarray:
    """``[h,[k,l]] + [k,[l,h]] + [l,[h,k]]`` for the derived bracket on V1."""
    B = derived_bracket_v1(L)
    br = lambda u, v: evaluate(B, u, v)
    h, k, l = (asarray(v) for v in (h, k, l))
    return br(h, br(k, l)) + br(k, br(l, h)) + br(l, br(h, k))


@dataclass(frozen=True, eq=False)
class HomologyPair:
    """``H1 = ker d`` (abelian) and ``H0 = coker d`` with induced structure."""

    h1_basis: np.ndarray
    h0: QuotientPresentation
    h0_bracket: np.ndarray
    h0_action_on_h1: np.ndarray

    @property
    def dim_h1(self) -> int:
        return self.h1_basis.shape[1]

    @property
    def dim_h0(self) -> int:
        return self.h0.dim

    @property
    def h1_bracket(self) -> np.ndarray:
        n = self.dim_h1
        return zeros(n, n, n)

    def h1_coordinates(self, v) -> np.ndarray:
        return coordinates(self.h1_basis, v)


def homology(L: TwoTermL2A) -> HomologyPair:
    ensure_valid(L)
    return cached(L, "homology", lambda: _homology(L))


def _homology(L: TwoTermL2A) -> HomologyPair:
    K = kernel_basis(L.d)
    H0 = quotient(L.dim_v0, L.d)
    P, S = H0.projection, H0.section

    # Representatives only matter modulo im d.
    if not is_zero(postcompose(P, precompose(L.b00, None, L.d))):
        raise WellDefinednessFailure("bracket on H0 depends on representatives")
    # b01(dh, k) for k in ker d is both the action of im d and the derived bracket on H1.
    if not is_zero(precompose(L.b01, L.d, K)):
        raise WellDefinednessFailure("action on H1 depends on representatives")

    h0_bracket = postcompose(P, precompose(L.b00, S, S))
    acted = precompose(L.b01, S, K)  # (q, r, v1), lands in ker d
    if not is_zero(postcompose(L.d, acted)):
        raise WellDefinednessFailure("action of H0 leaves H1")
    action = (
        np.moveaxis(coordinates(K, np.moveaxis(acted, -1, 0).reshape(L.dim_v1, -1)), 0, -1)
        .reshape(H0.dim, K.shape[1], K.shape[1])
        if acted.size
        else zeros(H0.dim, K.shape[1], K.shape[1])
    )
    return HomologyPair(asarray(K), H0, asarray(h0_bracket), asarray(action))
