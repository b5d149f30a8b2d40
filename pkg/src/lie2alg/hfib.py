"""Homotopy fibers ``C1 -> C0 -> C-1`` of butterflies and morphisms.

The fiber of ``B: W -> V`` is the NW-SE diagonal ``W1 -> E -> V0`` together
with brackets in each degree, a mixed bracket ``C0 x C1 -> C1`` and two
Jacobiators.  Homology sits in a 7-term exact sequence with the homology of
W and V; :func:`long_exact_sequence` builds and checks it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .butterfly import (
    Butterfly,
    _split_bracket,
    butterfly_homology_maps,
    ensure_valid_butterfly,
)
from .exactla import (
    QuotientPresentation,
    asarray,
    coordinates,
    hstack,
    identity,
    is_zero,
    kernel_basis,
    left_inverse,
    quotient,
    rank,
    vstack,
    zeros,
)
from .l2a import (
    InvalidStructureError,
    WellDefinednessFailure,
    _coherence_sides,
    cached,
    homology,
    jacobi_tensor,
)
from .morph import L2AMorphism, ensure_valid_morphism
from .multilinear import (
    antisymmetry_defects,
    difference_entries,
    postcompose,
    precompose,
    relabel,
)
from .reports import ReportBuilder, ValidationReport

__all__ = [
    "HomotopyFiber",
    "HfibHomology",
    "LongExactSequence",
    "ConeComparison",
    "validate_hfib_structure",
    "hfib_of_butterfly",
    "hfib_of_morphism",
    "hfib_homology",
    "long_exact_sequence",
    "mapping_cone_check",
    "chain_maps_of_hfib",
    "validate_chain_maps",
]


def _put(obj, name, value, shape):
    arr = asarray(value) if np.size(value) else asarray(zeros(*shape))
    if arr.shape != tuple(shape):
        raise ValueError(f"{name}: expected shape {tuple(shape)}, got {arr.shape}")
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True, eq=False)
class HomotopyFiber:
    c1_dim: int
    c0_dim: int
    cm1_dim: int
    d1: np.ndarray
    d0: np.ndarray
    br1: np.ndarray
    br0: np.ndarray
    brm1: np.ndarray
    br01: np.ndarray
    jac0: np.ndarray
    jacm1: np.ndarray
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        a, b, c = self.c1_dim, self.c0_dim, self.cm1_dim
        for name, shape in (
            ("d1", (b, a)),
            ("d0", (c, b)),
            ("br1", (a, a, a)),
            ("br0", (b, b, b)),
            ("brm1", (c, c, c)),
            ("br01", (b, a, a)),
            ("jac0", (b, b, b, a)),
            ("jacm1", (c, c, c, b)),
        ):
            _put(self, name, getattr(self, name), shape)

    @property
    def br10(self) -> np.ndarray:
        return -relabel(self.br01, "ahz->haz")

    def same_as(self, other: "HomotopyFiber") -> bool:
        names = ("d1", "d0", "br1", "br0", "brm1", "br01", "jac0", "jacm1")
        return all(np.array_equal(getattr(self, n), getattr(other, n)) for n in names)


def validate_hfib_structure(c: HomotopyFiber) -> ValidationReport:
    return cached(c, "validation", lambda: _validate(c))


def _validate(c: HomotopyFiber) -> ValidationReport:
    rb = ReportBuilder("hfib")
    d1, d0 = c.d1, c.d0
    rb.add("complex", difference_entries((d0 @ d1).T, zeros(c.c1_dim, c.cm1_dim), 1))
    for name in ("br1", "br0", "brm1"):
        rb.add(f"{name}_antisymmetry", antisymmetry_defects(getattr(c, name), 2))
    rb.add("jac0_antisymmetry", antisymmetry_defects(c.jac0, 3))
    rb.add("jacm1_antisymmetry", antisymmetry_defects(c.jacm1, 3))
    # [.,.]_10 is stored as -[.,.]_01, so that bullet holds by construction.

    rb.add(
        "mixed_equivariance",
        difference_entries(postcompose(d1, c.br01), precompose(c.br0, None, d1), 2),
    )
    rb.add("derived_bracket_left", difference_entries(c.br1, precompose(c.br01, d1, None), 2))
    rb.add("derived_bracket_right", difference_entries(c.br1, precompose(c.br10, None, d1), 2))
    rb.add(
        "d0_bracket",
        difference_entries(postcompose(d0, c.br0), precompose(c.brm1, d0, d0), 2),
    )
    lhs = precompose(c.jacm1, d0, d0, d0) + postcompose(d1, c.jac0)
    rb.add("jacobiator_boundary", difference_entries(lhs, jacobi_tensor(c.br0), 3))

    b01, b10, b0 = c.br01, c.br10, c.br0
    rhs = (
        np.einsum("bhm,amz->abhz", b01, b01)
        + np.einsum("ham,bmz->abhz", b10, b01)
        + np.einsum("abm,hmz->abhz", b0, b10)
    )
    rb.add("jacobiator_mixed", difference_entries(precompose(c.jac0, None, None, d1), rhs, 3))

    if not is_zero(c.jac0):
        lhs, rhs = _coherence_sides(b0, c.jac0, b10)
        rb.add("jacobiator_coherence", difference_entries(lhs, rhs, 4))
    return rb.build()


def _ensure(c: HomotopyFiber) -> None:
    r = validate_hfib_structure(c)
    if not r.valid:
        raise InvalidStructureError(r)


def hfib_of_butterfly(b: Butterfly) -> HomotopyFiber:
    ensure_valid_butterfly(b)

    def build():
        W, V = b.source, b.target
        s = b.sigma
        c = HomotopyFiber(
            W.dim_v1,
            b.dim_e,
            V.dim_v0,
            b.kappa,
            b.rho,
            precompose(W.b01, W.d, None),
            b.e_bracket,
            V.b00,
            precompose(W.b01, s, None),
            precompose(W.jac, s, s, s),
            postcompose(b.iota, V.jac),
        )
        _ensure(c)
        return c

    return cached(b, "hfib", build)


def hfib_of_morphism(f: L2AMorphism) -> HomotopyFiber:
    """``W1 -> V1 ⊕ W0 -> V0`` with ``(-f1, d)`` and ``d + f0``."""
    ensure_valid_morphism(f)
    W, V = f.source, f.target
    v1, w0, w1 = V.dim_v1, W.dim_v0, W.dim_v1
    n = v1 + w0
    br01 = zeros(n, w1, w1)
    br01[v1:] = W.b01
    jac0 = zeros(n, n, n, w1)
    jac0[v1:, v1:, v1:] = W.jac
    jacm1 = zeros(V.dim_v0, V.dim_v0, V.dim_v0, n)
    jacm1[..., :v1] = V.jac
    c = HomotopyFiber(
        w1,
        n,
        V.dim_v0,
        vstack(-f.f1, W.d),
        hstack(V.d, f.f0),
        precompose(W.b01, W.d, None),
        _split_bracket(V, W.b00, f.f0, f.eps),
        V.b00,
        br01,
        jac0,
        jacm1,
    )
    _ensure(c)
    return c


@dataclass(frozen=True, eq=False)
class HfibHomology:
    h1_basis: np.ndarray  # ker d1 inside C1
    cycles0: np.ndarray  # ker d0 inside C0
    h0: QuotientPresentation  # (ker d0) / (im d1), in cycle coordinates
    hm1: QuotientPresentation  # C-1 / im d0
    h1_bracket: np.ndarray
    h0_bracket: np.ndarray

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.h1_basis.shape[1], self.h0.dim, self.hm1.dim


def hfib_homology(c: HomotopyFiber) -> HfibHomology:
    if not is_zero(c.d0 @ c.d1):
        raise ValueError("not a complex: d0 d1 != 0")
    return cached(c, "homology", lambda: _hfib_homology(c))


def _hfib_homology(c: HomotopyFiber) -> HfibHomology:
    K1 = kernel_basis(c.d1)
    Z = kernel_basis(c.d0)
    Q0 = quotient(Z.shape[1], coordinates(Z, c.d1))
    Qm1 = quotient(c.cm1_dim, c.d0)

    h1_br = precompose(c.br1, K1, K1)
    h1_bracket = (
        np.moveaxis(coordinates(K1, np.moveaxis(h1_br, -1, 0).reshape(c.c1_dim, -1)), 0, -1).reshape(
            K1.shape[1], K1.shape[1], K1.shape[1]
        )
        if h1_br.size
        else zeros(K1.shape[1], K1.shape[1], K1.shape[1])
    )

    Zl = left_inverse(Z)
    B = c.d1
    if not is_zero(postcompose(Q0.projection @ Zl, precompose(c.br0, Z, B))):
        raise WellDefinednessFailure("bracket on H0(hfib) depends on representatives")
    rep = Z @ Q0.section
    h0_bracket = postcompose(Q0.projection @ Zl, precompose(c.br0, rep, rep))
    return HfibHomology(asarray(K1), asarray(Z), Q0, Qm1, asarray(h1_bracket), asarray(h0_bracket))


NODES = ("H1(hfib)", "H1(W)", "H1(V)", "H0(hfib)", "H0(W)", "H0(V)", "H-1(hfib)")


@dataclass(frozen=True, eq=False)
class LongExactSequence:
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]  # maps[i]: node i -> node i+1

    def exactness(self) -> list[tuple[str, bool]]:
        """Exactness at both ends and at the five interior nodes."""
        out = [("0 -> " + NODES[0], rank(self.maps[0]) == self.dims[0])]
        for i in range(1, 6):
            a, b = self.maps[i - 1], self.maps[i]
            ok = is_zero(b @ a) and rank(a) + rank(b) == self.dims[i]
            out.append((NODES[i], ok))
        out.append((NODES[6] + " -> 0", rank(self.maps[5]) == self.dims[6]))
        return out

    @property
    def is_exact(self) -> bool:
        return all(ok for _, ok in self.exactness())

    def table(self) -> str:
        lines = [f"{name:>10}  dim {d}" for name, d in zip(NODES, self.dims)]
        bad = [name for name, ok in self.exactness() if not ok]
        lines.append("exact at all nodes" if not bad else "NOT exact at: " + ", ".join(bad))
        return "\n".join(lines)


def long_exact_sequence(b: Butterfly) -> LongExactSequence:
    c = hfib_of_butterfly(b)
    H = hfib_homology(c)
    HW, HV = homology(b.source), homology(b.target)
    H0B, H1B = butterfly_homology_maps(b)

    m1 = coordinates(HW.h1_basis, H.h1_basis)
    # k in H1(V) goes to the class of iota(k), a cycle of d0 = rho
    m3 = H.h0.projection @ left_inverse(H.cycles0) @ b.iota @ HV.h1_basis
    m4 = HW.h0.projection @ b.sigma @ H.cycles0 @ H.h0.section
    m6 = H.hm1.projection @ HV.h0.section
    maps = tuple(asarray(m) for m in (m1, H1B, m3, m4, H0B, m6))
    dims = (H.dims[0], HW.dim_h1, HV.dim_h1, H.dims[1], HW.dim_h0, HV.dim_h0, H.dims[2])
    for i, m in enumerate(maps):
        if m.shape != (dims[i + 1], dims[i]):
            raise AssertionError(f"map {i + 1} has shape {m.shape}")
    return LongExactSequence(dims, maps)


@dataclass(frozen=True)
class ConeComparison:
    hfib_dims: tuple[int, int, int]
    cone_dims: tuple[int, int, int]  # degrees 2, 1, 0

    @property
    def agree(self) -> bool:
        return self.hfib_dims == self.cone_dims

    def text(self) -> str:
        status = "agree" if self.agree else "DISAGREE"
        return f"hfib H1,H0,H-1 = {self.hfib_dims}; cone H2,H1,H0 = {self.cone_dims}; {status}"


def mapping_cone_check(f: L2AMorphism) -> ConeComparison:
    """Compare hfib homology with the cone ``W1 -> W0 ⊕ V1 -> V0`` of the chain map (f1, f0)."""
    ensure_valid_morphism(f)
    W, V = f.source, f.target
    d2 = vstack(-W.d, f.f1)
    d1 = hstack(f.f0, V.d)
    r2, r1 = rank(d2), rank(d1)
    cone = (W.dim_v1 - r2, W.dim_v0 + V.dim_v1 - r1 - r2, V.dim_v0 - r1)
    return ConeComparison(hfib_homology(hfib_of_morphism(f)).dims, cone)


@dataclass(frozen=True, eq=False)
class HfibChainMaps:
    """``hfib -> W`` as (C1 -> W1, C0 -> W0) and ``V -> hfib[-1]`` as (V1 -> C0, V0 -> C-1)."""

    to_w: tuple[np.ndarray, np.ndarray]
    from_v: tuple[np.ndarray, np.ndarray]


def chain_maps_of_hfib(b: Butterfly) -> HfibChainMaps:
    ensure_valid_butterfly(b)
    return HfibChainMaps(
        (identity(b.source.dim_v1), b.sigma),
        (b.iota, identity(b.target.dim_v0)),
    )


def validate_chain_maps(b: Butterfly) -> ValidationReport:
    """Chain-map squares and on-the-nose bracket compatibility of both maps."""
    c = hfib_of_butterfly(b)
    m = chain_maps_of_hfib(b)
    W, V = b.source, b.target
    (t1, t0), (u1, u0) = m.to_w, m.from_v
    rb = ReportBuilder("hfib chain maps")

    rb.add("to_w_square", difference_entries((t0 @ c.d1).T, (W.d @ t1).T, 1))
    rb.add("to_w_br1", difference_entries(postcompose(t1, c.br1), precompose(W.b01, W.d @ t1, t1), 2))
    rb.add("to_w_br0", difference_entries(postcompose(t0, c.br0), precompose(W.b00, t0, t0), 2))
    rb.add("to_w_br01", difference_entries(postcompose(t1, c.br01), precompose(W.b01, t0, t1), 2))
    rb.add("to_w_jac", difference_entries(postcompose(t1, c.jac0), precompose(W.jac, t0, t0, t0), 3))

    rb.add("from_v_square", difference_entries((c.d0 @ u1).T, (u0 @ V.d).T, 1))
    derived_v = precompose(V.b01, V.d, None)
    rb.add("from_v_br1", difference_entries(postcompose(u1, derived_v), precompose(c.br0, u1, u1), 2))
    rb.add("from_v_brm1", difference_entries(postcompose(u0, V.b00), precompose(c.brm1, u0, u0), 2))
    rb.add("from_v_jac", difference_entries(postcompose(u1, V.jac), precompose(c.jacm1, u0, u0, u0), 3))
    return rb.build()
