"""Butterflies between 2-term L-infinity algebras and their bicategory.

A butterfly ``W -> V`` has a center ``E`` with an antisymmetric bracket and four
maps::

    W1          V1
      kappa   iota
          E
      sigma   rho
    W0          V0

with ``0 -> V1 -> E -> W0 -> 0`` (NE-SW) short exact.  Composites remember
how their center was built (a subquotient of the direct sum of the factors'
centers) so unitors and associators are written down on representatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exactla import (
    QuotientPresentation,
    asarray,
    block_diag,
    coordinates,
    fiber_product,
    hstack,
    identity,
    inverse,
    is_zero,
    left_inverse,
    pushout,
    quotient,
    rank,
    right_section,
    vstack,
    zeros,
)
from .l2a import (
    InvalidStructureError,
    TwoTermL2A,
    WellDefinednessFailure,
    cached,
    derived_bracket_v1,
    ensure_valid,
    jacobi_tensor,
)
from .morph import (
    CompositionError,
    L2AMorphism,
    _kron,
    ensure_valid_morphism,
    induced_homology_maps,
    linearized_solve,
)
from .multilinear import (
    antisymmetry_defects,
    difference_entries,
    postcompose,
    precompose,
)
from .reports import FOUND, LINEAR_OBSTRUCTION, UNKNOWN, ReportBuilder, SearchResult, ValidationReport

__all__ = [
    "Butterfly",
    "Butterfly2Cell",
    "CenterPresentation",
    "NotAnEquivalence",
    "validate_butterfly",
    "morphism_to_butterfly",
    "butterfly_to_morphism",
    "identity_butterfly",
    "compose_butterflies",
    "validate_butterfly_2cell",
    "find_butterfly_2cell",
    "identity_2cell",
    "vertical_compose",
    "horizontal_compose",
    "flip",
    "is_equivalence",
    "butterfly_homology_maps",
    "compose_strict_left",
    "compose_strict_right",
    "left_unitor",
    "right_unitor",
    "associator",
    "pentagon_sides",
    "zigzag",
    "transport",
]


class NotAnEquivalence(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CenterPresentation:
    """How a composite center sits inside ``ambient = E_first ⊕ E_second``.

    ``fiber_basis`` spans the relevant subspace of the ambient space (all of it
    for a pushout), ``quotient`` is the further quotient in fiber coordinates.
    """

    kind: str
    factors: tuple
    ambient_dims: tuple[int, int]
    fiber_basis: np.ndarray
    quotient: QuotientPresentation

    @property
    def rep(self) -> np.ndarray:
        """center coordinates -> ambient representatives"""
        return self.fiber_basis @ self.quotient.section

    @property
    def cls(self) -> np.ndarray:
        """ambient vectors (in the fiber subspace) -> center coordinates"""
        return self.quotient.projection @ left_inverse(self.fiber_basis)


def _set(obj, name, value, shape):
    arr = asarray(value) if np.size(value) else asarray(zeros(*shape))
    if arr.shape != tuple(shape):
        raise ValueError(f"{name}: expected shape {tuple(shape)}, got {arr.shape}")
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True, eq=False)
class Butterfly:
    source: TwoTermL2A
    target: TwoTermL2A
    dim_e: int
    e_bracket: np.ndarray
    kappa: np.ndarray
    iota: np.ndarray
    sigma: np.ndarray
    rho: np.ndarray
    presentation: Optional[CenterPresentation] = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        W, V, e = self.source, self.target, self.dim_e
        _set(self, "e_bracket", self.e_bracket, (e, e, e))
        _set(self, "kappa", self.kappa, (e, W.dim_v1))
        _set(self, "iota", self.iota, (e, V.dim_v1))
        _set(self, "sigma", self.sigma, (W.dim_v0, e))
        _set(self, "rho", self.rho, (V.dim_v0, e))

    def same_as(self, other: "Butterfly") -> bool:
        return (
            self.dim_e == other.dim_e
            and self.source.same_as(other.source)
            and self.target.same_as(other.target)
            and all(
                np.array_equal(getattr(self, k), getattr(other, k))
                for k in ("e_bracket", "kappa", "iota", "sigma", "rho")
            )
        )

    def __repr__(self):
        return f"<Butterfly {self.source!r} -> {self.target!r}, dim E = {self.dim_e}>"


@dataclass(frozen=True, eq=False)
class Butterfly2Cell:
    from_b: Butterfly
    to_b: Butterfly
    phi: np.ndarray

    def __post_init__(self):
        _set(self, "phi", self.phi, (self.to_b.dim_e, self.from_b.dim_e))


# ---------------------------------------------------------------------------
# validation


def _matrix_check(rb: ReportBuilder, name: str, lhs, rhs) -> None:
    lhs = np.asarray(lhs, dtype=object)
    rhs = np.asarray(rhs, dtype=object)
    rb.add(name, difference_entries(lhs.T, rhs.T, 1))


def validate_butterfly(b: Butterfly) -> ValidationReport:
    return cached(b, "validation", lambda: _validate_butterfly(b))


def _validate_butterfly(b: Butterfly) -> ValidationReport:
    W, V = b.source, b.target
    ensure_valid(W)
    ensure_valid(V)
    rb = ReportBuilder("butterfly")
    T, kappa, iota, sigma, rho = b.e_bracket, b.kappa, b.iota, b.sigma, b.rho

    rb.add("bracket_antisymmetry", antisymmetry_defects(T, 2))
    _matrix_check(rb, "square_w", sigma @ kappa, W.d)
    _matrix_check(rb, "square_v", rho @ iota, V.d)
    _matrix_check(rb, "nw_se_complex", rho @ kappa, zeros(V.dim_v0, W.dim_v1))
    _matrix_check(rb, "ne_sw_complex", sigma @ iota, zeros(W.dim_v0, V.dim_v1))
    if rank(iota) != V.dim_v1:
        rb.fail("iota_injective", (rank(iota),), (V.dim_v1,))
    if rank(sigma) != W.dim_v0:
        rb.fail("sigma_surjective", (rank(sigma),), (W.dim_v0,))
    if b.dim_e != V.dim_v1 + W.dim_v0:
        rb.fail("ne_sw_exact", (b.dim_e,), (V.dim_v1 + W.dim_v0,))

    rb.add("rho_bracket", difference_entries(postcompose(rho, T), precompose(V.b00, rho, rho), 2))
    rb.add("sigma_bracket", difference_entries(postcompose(sigma, T), precompose(W.b00, sigma, sigma), 2))
    # [a, iota h] = iota [rho a, h]
    rb.add(
        "iota_equivariance",
        difference_entries(precompose(T, None, iota), postcompose(iota, precompose(V.b01, rho, None)), 2),
    )
    rb.add(
        "kappa_equivariance",
        difference_entries(precompose(T, None, kappa), postcompose(kappa, precompose(W.b01, sigma, None)), 2),
    )
    lhs = postcompose(iota, precompose(V.jac, rho, rho, rho)) + postcompose(
        kappa, precompose(W.jac, sigma, sigma, sigma)
    )
    rb.add("jacobiator", difference_entries(lhs, jacobi_tensor(T), 3))
    return rb.build()


def ensure_valid_butterfly(b: Butterfly) -> None:
    r = validate_butterfly(b)
    if not r.valid:
        raise InvalidStructureError(r)


# ---------------------------------------------------------------------------
# morphisms <-> butterflies


def _split_bracket(V: TwoTermL2A, W0_bracket, f0, eps) -> np.ndarray:
    """Bracket on ``V1 ⊕ W0``: ``([k,l] + [f0 x,l] + [k,f0 y] + eps(x,y), [x,y])``."""
    v1, w0 = V.dim_v1, W0_bracket.shape[0]
    n = v1 + w0
    T = zeros(n, n, n)
    derived = precompose(V.b01, V.d, None)
    act = precompose(V.b01, f0, None)  # [f0 x, l] indexed (x, l)
    T[:v1, :v1, :v1] = derived
    T[v1:, :v1, :v1] = act
    T[:v1, v1:, :v1] = -np.swapaxes(act, 0, 1)
    T[v1:, v1:, :v1] = eps
    T[v1:, v1:, v1:] = W0_bracket
    return T


def morphism_to_butterfly(f: L2AMorphism) -> Butterfly:
    """The butterfly with center ``V1 ⊕ W0`` attached to a morphism ``W -> V``."""
    ensure_valid_morphism(f)
    W, V = f.source, f.target
    v1, w0 = V.dim_v1, W.dim_v0
    T = _split_bracket(V, W.b00, f.f0, f.eps)
    kappa = vstack(-f.f1, W.d)
    iota = vstack(identity(v1), zeros(w0, v1))
    sigma = hstack(zeros(w0, v1), identity(w0))
    rho = hstack(V.d, f.f0)
    return Butterfly(W, V, v1 + w0, T, kappa, iota, sigma, rho)


def identity_butterfly(L: TwoTermL2A) -> Butterfly:
    """Center ``V1 ⊕ V0`` with ``[(k,x),(l,y)] = ([k,l] + [x,l] + [k,y], [x,y])``."""
    ensure_valid(L)

    def build():
        v1, v0 = L.dim_v1, L.dim_v0
        n = v1 + v0
        T = zeros(n, n, n)
        T[:v1, :v1, :v1] = derived_bracket_v1(L)
        T[v1:, :v1, :v1] = L.b01  # [x, l]
        T[:v1, v1:, :v1] = L.b10  # [k, y]
        T[v1:, v1:, v1:] = L.b00
        kappa = vstack(-identity(v1), L.d)
        iota = vstack(identity(v1), zeros(v0, v1))
        sigma = hstack(zeros(v0, v1), identity(v0))
        rho = hstack(L.d, identity(v0))
        return Butterfly(L, L, n, T, kappa, iota, sigma, rho)

    return cached(L, "identity_butterfly", build)


def butterfly_to_morphism(b: Butterfly, s=None) -> L2AMorphism:
    """``f0 = rho s``, ``f1 = iota^-1 (s d - kappa)``, ``eps = iota^-1([s,s] - s[,])``."""
    ensure_valid_butterfly(b)
    W, V = b.source, b.target
    if s is None:
        s = right_section(b.sigma)
    s = asarray(s)
    if not np.array_equal(b.sigma @ s, identity(W.dim_v0)):
        raise ValueError("s is not a section of sigma")
    f0 = b.rho @ s
    f1 = _through_iota(b, s @ W.d - b.kappa)
    e = precompose(b.e_bracket, s, s) - postcompose(s, W.b00)
    w0 = W.dim_v0
    flat = np.moveaxis(e, -1, 0).reshape(b.dim_e, -1)
    eps = np.moveaxis(_through_iota(b, flat), 0, -1).reshape(w0, w0, V.dim_v1)
    return L2AMorphism(W, V, f0, f1, eps)


def _through_iota(b: Butterfly, M) -> np.ndarray:
    M = np.asarray(M, dtype=object)
    if M.shape[1] == 0:
        return zeros(b.target.dim_v1, 0)
    out = left_inverse(b.iota) @ M
    if not np.array_equal(b.iota @ out, M):
        raise WellDefinednessFailure("value does not factor through iota")
    return out


def butterfly_homology_maps(b: Butterfly) -> tuple[np.ndarray, np.ndarray]:
    """``(H0(B), H1(B))``; independent of the section used."""
    return cached(b, "homology_maps", lambda: induced_homology_maps(butterfly_to_morphism(b)))


# ---------------------------------------------------------------------------
# composition


def _direct_sum_bracket(T1, T2) -> np.ndarray:
    n1, n2 = T1.shape[0], T2.shape[0]
    n = n1 + n2
    T = zeros(n, n, n)
    T[:n1, :n1, :n1] = T1
    T[n1:, n1:, n1:] = T2
    return T


def _induced_bracket(T_amb, pres: CenterPresentation) -> np.ndarray:
    rep, cls = pres.rep, pres.cls
    D = pres.fiber_basis @ pres.quotient.subspace_basis
    # the killed subspace must be an ideal of the fiber subspace
    if not is_zero(postcompose(cls, precompose(T_amb, pres.fiber_basis, D))):
        raise WellDefinednessFailure("induced bracket depends on representatives")
    return postcompose(cls, precompose(T_amb, rep, rep))


def _same(a: TwoTermL2A, b: TwoTermL2A) -> bool:
    return a is b or a.same_as(b)


def compose_butterflies(b2: Butterfly, b1: Butterfly) -> Butterfly:
    """``b2 o b1``: fiber product of the centers over V0 modulo the diagonal V1."""
    if not _same(b1.target, b2.source):
        raise CompositionError(
            f"cannot compose: {b1!r} ends at {b1.target!r} but {b2!r} starts at {b2.source!r}"
        )
    key = ("compose_after", id(b1))
    hit = b2._cache.get(key)
    if hit is not None and hit[0] is b1:
        return hit[1]
    ensure_valid_butterfly(b1)
    ensure_valid_butterfly(b2)
    W, U = b1.source, b2.target
    e, f = b1.dim_e, b2.dim_e
    P = fiber_product(b1.rho, b2.sigma)
    diag = vstack(b1.iota, b2.kappa)
    Q = quotient(P.shape[1], coordinates(P, diag))
    pres = CenterPresentation("compose", (b1, b2), (e, f), asarray(P), Q)
    rep, cls = pres.rep, pres.cls
    T_amb = _direct_sum_bracket(b1.e_bracket, b2.e_bracket)
    if not is_zero(postcompose(hstack(b1.rho, -b2.sigma), precompose(T_amb, P, P))):
        raise WellDefinednessFailure("fiber product is not closed under the bracket")
    out = Butterfly(
        W,
        U,
        Q.dim,
        _induced_bracket(T_amb, pres),
        cls @ vstack(b1.kappa, zeros(f, W.dim_v1)),
        cls @ vstack(zeros(e, U.dim_v1), b2.iota),
        b1.sigma @ rep[:e],
        b2.rho @ rep[e:],
        pres,
    )
    b2._cache[key] = (b1, out)
    return out


def compose_strict_left(f: L2AMorphism, b: Butterfly) -> Butterfly:
    """``b o f`` for strict ``f``: pull the extension back along ``f0``."""
    ensure_valid_morphism(f)
    if not f.is_strict:
        raise ValueError("compose_strict_left needs a strict morphism")
    if not _same(f.target, b.source):
        raise CompositionError(f"cannot compose: {f!r} ends where {b!r} does not start")
    ensure_valid_butterfly(b)
    W, U = f.source, b.target
    w0, e = W.dim_v0, b.dim_e
    P = fiber_product(f.f0, b.sigma)
    Q = quotient(P.shape[1], zeros(P.shape[1], 0))
    pres = CenterPresentation("strict_left", (f, b), (w0, e), asarray(P), Q)
    rep, cls = pres.rep, pres.cls
    T_amb = _direct_sum_bracket(W.b00, b.e_bracket)
    return Butterfly(
        W,
        U,
        Q.dim,
        _induced_bracket(T_amb, pres),
        cls @ vstack(W.d, b.kappa @ f.f1),
        cls @ vstack(zeros(w0, U.dim_v1), b.iota),
        rep[:w0],
        b.rho @ rep[w0:],
        pres,
    )


def compose_strict_right(b: Butterfly, g: L2AMorphism) -> Butterfly:
    """``g o b`` for strict ``g``: push the extension forward along ``g1``."""
    ensure_valid_morphism(g)
    if not g.is_strict:
        raise ValueError("compose_strict_right needs a strict morphism")
    if not _same(b.target, g.source):
        raise CompositionError(f"cannot compose: {b!r} ends where {g!r} does not start")
    ensure_valid_butterfly(b)
    W, U = b.source, g.target
    e, u1 = b.dim_e, U.dim_v1
    Q = pushout(b.iota, g.f1)
    pres = CenterPresentation("strict_right", (b, g), (e, u1), identity(e + u1), Q)
    rep, cls = pres.rep, pres.cls
    # [(a,k),(a',k')] = ([a,a'], [k,k'] + [g0 rho a, k'] - [g0 rho a', k])
    n = e + u1
    T_amb = zeros(n, n, n)
    T_amb[:e, :e, :e] = b.e_bracket
    T_amb[e:, e:, e:] = precompose(U.b01, U.d, None)
    act = precompose(U.b01, g.f0 @ b.rho, None)  # (a, k)
    T_amb[:e, e:, e:] = act
    T_amb[e:, :e, e:] = -np.swapaxes(act, 0, 1)
    return Butterfly(
        W,
        U,
        Q.dim,
        _induced_bracket(T_amb, pres),
        cls @ vstack(b.kappa, zeros(u1, W.dim_v1)),
        cls @ vstack(zeros(e, u1), identity(u1)),
        b.sigma @ rep[:e],
        U.d @ rep[e:] + g.f0 @ b.rho @ rep[:e],
        pres,
    )


# ---------------------------------------------------------------------------
# 2-cells


def validate_butterfly_2cell(c: Butterfly2Cell) -> ValidationReport:
    b, b2 = c.from_b, c.to_b
    if not (_same(b.source, b2.source) and _same(b.target, b2.target)):
        raise CompositionError("2-cell between non-parallel butterflies")
    phi = c.phi
    rb = ReportBuilder("butterfly 2-cell")
    _matrix_check(rb, "kappa", phi @ b.kappa, b2.kappa)
    _matrix_check(rb, "iota", phi @ b.iota, b2.iota)
    _matrix_check(rb, "sigma", b2.sigma @ phi, b.sigma)
    _matrix_check(rb, "rho", b2.rho @ phi, b.rho)
    rb.add(
        "bracket",
        difference_entries(postcompose(phi, b.e_bracket), precompose(b2.e_bracket, phi, phi), 2),
    )
    if phi.shape[0] != phi.shape[1] or rank(phi) != phi.shape[0]:
        rb.fail("invertible", (rank(phi),), (phi.shape[0],))
    return rb.build()


def identity_2cell(b: Butterfly) -> Butterfly2Cell:
    return Butterfly2Cell(b, b, identity(b.dim_e))


def vertical_compose(c2: Butterfly2Cell, c1: Butterfly2Cell) -> Butterfly2Cell:
    if not c1.to_b.same_as(c2.from_b):
        raise CompositionError("2-cells are not composable")
    return Butterfly2Cell(c1.from_b, c2.to_b, c2.phi @ c1.phi)


def horizontal_compose(c2: Butterfly2Cell, c1: Butterfly2Cell) -> Butterfly2Cell:
    """``c2 * c1 : B2 o B1 => B2' o B1'`` acting factorwise on representatives."""
    src = compose_butterflies(c2.from_b, c1.from_b)
    dst = compose_butterflies(c2.to_b, c1.to_b)
    phi = dst.presentation.cls @ block_diag(c1.phi, c2.phi) @ src.presentation.rep
    return Butterfly2Cell(src, dst, phi)


def find_butterfly_2cell(b: Butterfly, b2: Butterfly) -> SearchResult:
    """Search for a 2-cell ``b => b2``.

    Commuting with iota and sigma forces ``phi = phi0 + iota' n sigma`` for a
    map ``n: W0 -> V1``; on that family the bracket condition is affine, so the
    search is exact whenever the inputs are valid.
    """
    if not (_same(b.source, b2.source) and _same(b.target, b2.target)):
        raise CompositionError("find_butterfly_2cell needs parallel butterflies")
    ensure_valid_butterfly(b)
    ensure_valid_butterfly(b2)
    W, V = b.source, b.target
    if b.dim_e != b2.dim_e:
        return SearchResult(LINEAR_OBSTRUCTION, detail="centers have different dimensions")
    s, s2 = right_section(b.sigma), right_section(b2.sigma)
    phi0 = hstack(b2.iota, s2) @ inverse(hstack(b.iota, s))
    shape = (V.dim_v1, W.dim_v0)
    # rho' iota' n sigma = d n sigma ; iota' n sigma kappa = iota' n dW
    A = np.concatenate([_kron(V.d, b.sigma.T), _kron(b2.iota, W.d.T)], axis=0)
    rhs = np.concatenate([(b.rho - b2.rho @ phi0).reshape(-1), (b2.kappa - phi0 @ b.kappa).reshape(-1)])

    def phi_of(n):
        return phi0 + b2.iota @ n @ b.sigma

    def residual(n):
        phi = phi_of(n)
        parts = [
            (b2.rho @ phi - b.rho).reshape(-1),
            (phi @ b.kappa - b2.kappa).reshape(-1),
            (postcompose(phi, b.e_bracket) - precompose(b2.e_bracket, phi, phi)).reshape(-1),
        ]
        return np.concatenate(parts)

    res = linearized_solve(residual, shape, (A, rhs))
    if not res.found:
        return res
    cell = Butterfly2Cell(b, b2, phi_of(res.witness))
    if not validate_butterfly_2cell(cell).valid:
        return SearchResult(UNKNOWN, detail="candidate failed validation")
    return SearchResult(FOUND, cell)


# ---------------------------------------------------------------------------
# equivalences


def _equivalence_by_rank(b: Butterfly) -> bool:
    W, V = b.source, b.target
    return (
        rank(b.kappa) == W.dim_v1
        and rank(b.rho) == V.dim_v0
        and b.dim_e == W.dim_v1 + V.dim_v0
    )


def is_equivalence(b: Butterfly) -> bool:
    """NW-SE sequence short exact; cross-checked against invertibility on homology."""
    ensure_valid_butterfly(b)
    by_rank = _equivalence_by_rank(b)
    H0, H1 = butterfly_homology_maps(b)
    by_homology = all(M.shape[0] == M.shape[1] == rank(M) for M in (H0, H1))
    if by_rank != by_homology:
        raise AssertionError("rank and homology criteria for equivalence disagree")
    return by_rank


def flip(b: Butterfly) -> Butterfly:
    """Reflect along the vertical axis: the inverse of an equivalence."""
    ensure_valid_butterfly(b)
    if not _equivalence_by_rank(b):
        raise NotAnEquivalence("the NW-SE sequence is not short exact")
    return Butterfly(b.target, b.source, b.dim_e, b.e_bracket, b.iota, b.kappa, b.rho, b.sigma)


# ---------------------------------------------------------------------------
# coherence


def left_unitor(b: Butterfly) -> Butterfly2Cell:
    """``id_V o b => b`` via ``(a, (k, x)) -> a + iota k``."""
    comp = compose_butterflies(identity_butterfly(b.target), b)
    V = b.target
    m = hstack(identity(b.dim_e), b.iota, zeros(b.dim_e, V.dim_v0))
    return Butterfly2Cell(comp, b, m @ comp.presentation.rep)


def right_unitor(b: Butterfly) -> Butterfly2Cell:
    """``b o id_W => b`` via ``((k, x), a) -> a - kappa k``."""
    comp = compose_butterflies(b, identity_butterfly(b.source))
    W = b.source
    m = hstack(-b.kappa, zeros(b.dim_e, W.dim_v0), identity(b.dim_e))
    return Butterfly2Cell(comp, b, m @ comp.presentation.rep)


def associator(b3: Butterfly, b2: Butterfly, b1: Butterfly) -> Butterfly2Cell:
    """``(b3 o b2) o b1 => b3 o (b2 o b1)``, identity on representatives in E1 ⊕ E2 ⊕ E3."""
    b32 = compose_butterflies(b3, b2)
    b21 = compose_butterflies(b2, b1)
    left = compose_butterflies(b32, b1)
    right = compose_butterflies(b3, b21)
    e1, e2 = b1.dim_e, b2.dim_e
    rep = left.presentation.rep
    a1, c32 = rep[:e1], rep[e1:]
    lifted = b32.presentation.rep @ c32  # rows: E2 then E3
    a2, a3 = lifted[:e2], lifted[e2:]
    q21 = b21.presentation.cls @ vstack(a1, a2)
    phi = right.presentation.cls @ vstack(q21, a3)
    return Butterfly2Cell(left, right, phi)


def pentagon_sides(b4: Butterfly, b3: Butterfly, b2: Butterfly, b1: Butterfly):
    """The two composite 2-cells ``((b4 b3) b2) b1 => b4 (b3 (b2 b1))``."""
    path_a = vertical_compose(
        associator(b4, b3, compose_butterflies(b2, b1)),
        associator(compose_butterflies(b4, b3), b2, b1),
    )
    step1 = horizontal_compose(associator(b4, b3, b2), identity_2cell(b1))
    step2 = associator(b4, compose_butterflies(b3, b2), b1)
    step3 = horizontal_compose(identity_2cell(b4), associator(b3, b2, b1))
    path_b = vertical_compose(step3, vertical_compose(step2, step1))
    return path_a, path_b


# ---------------------------------------------------------------------------
# zig-zag and change of basis


def zigzag(b: Butterfly):
    """The 2-term algebra ``[kappa + iota: W1 ⊕ V1 -> E]`` and its projections to W and V."""
    ensure_valid_butterfly(b)
    W, V = b.source, b.target
    w1, v1, e = W.dim_v1, V.dim_v1, b.dim_e
    n1 = w1 + v1
    b01 = zeros(e, n1, n1)
    b01[:, :w1, :w1] = precompose(W.b01, b.sigma, None)
    b01[:, w1:, w1:] = precompose(V.b01, b.rho, None)
    jac = np.concatenate(
        [precompose(W.jac, b.sigma, b.sigma, b.sigma), precompose(V.jac, b.rho, b.rho, b.rho)], axis=-1
    )
    name = f"zigzag({W.name or 'W'},{V.name or 'V'})"
    E = TwoTermL2A(n1, e, hstack(b.kappa, b.iota), b.e_bracket, b01, jac, name)
    p_w = L2AMorphism(E, W, b.sigma, hstack(identity(w1), zeros(w1, v1)), zeros(e, e, w1))
    p_v = L2AMorphism(E, V, b.rho, hstack(zeros(v1, w1), identity(v1)), zeros(e, e, v1))
    return E, p_w, p_v


def transport(b: Butterfly, A) -> Butterfly:
    """The same butterfly after the change of center coordinates ``A: E -> E``."""
    A = asarray(A)
    Ai = inverse(A)
    return Butterfly(
        b.source,
        b.target,
        b.dim_e,
        postcompose(A, precompose(b.e_bracket, Ai, Ai)),
        A @ b.kappa,
        A @ b.iota,
        b.sigma @ Ai,
        b.rho @ Ai,
    )
