"""Example objects: Lie algebras, derivation crossed modules, extensions, families.

Everything returned here has passed its validator.  Random data only ever
enters through validity-preserving operations (sections of identity
butterflies, composition, change of center basis).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .butterfly import (
    Butterfly,
    butterfly_to_morphism,
    compose_butterflies,
    ensure_valid_butterfly,
    find_butterfly_2cell,
    identity_butterfly,
    is_equivalence,
    morphism_to_butterfly,
    transport,
)
from .exactla import (
    asarray,
    coordinates,
    current_field,
    hstack,
    identity,
    is_zero,
    kernel_basis,
    left_inverse,
    rank,
    right_section,
    vstack,
    zeros,
)
from .l2a import InvalidStructureError, TwoTermL2A, cached, derived_bracket_v1, ensure_valid, jacobi_tensor
from .morph import (
    L2AMorphism,
    ensure_valid_morphism,
    identity_morphism,
    linearized_solve,
    zero_morphism,
)
from .multilinear import antisymmetric_from_sparse, antisymmetry_defects, difference_entries, postcompose, precompose
from .reports import FOUND, UNKNOWN, ReportBuilder, SearchResult, ValidationReport

__all__ = [
    "LieAlgebra",
    "Extension",
    "lie_algebra",
    "derivations",
    "der_crossed_module",
    "lie_as_l2a",
    "extension",
    "EXTENSIONS",
    "validate_lie",
    "validate_extension",
    "extension_to_butterfly",
    "butterfly_to_extension",
    "extension_isomorphism",
    "find_lie_splitting",
    "make_family",
    "FAMILIES",
    "random_twist",
    "corpus_objects",
    "corpus_morphisms",
    "corpus_butterflies",
    "corpus_equivalences",
    "composable_chains",
]


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    dim: int
    bracket: np.ndarray
    name: str = ""
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.dim
        arr = asarray(self.bracket) if np.size(self.bracket) else asarray(zeros(n, n, n))
        if arr.shape != (n, n, n):
            raise ValueError(f"bracket: expected shape {(n, n, n)}, got {arr.shape}")
        object.__setattr__(self, "bracket", arr)

    @classmethod
    def from_sparse(cls, dim: int, entries, name: str = "") -> "LieAlgebra":
        return cls(dim, antisymmetric_from_sparse(dim, 2, dim, entries), name)

    def ad(self, x) -> np.ndarray:
        """Matrix of ``[x, .]``."""
        return postcompose(identity(self.dim), np.tensordot(asarray(x), self.bracket, axes=([0], [0]))).T

    def __repr__(self):
        return f"<LieAlgebra {self.name or ''} dim {self.dim}>"


def validate_lie(g: LieAlgebra) -> ValidationReport:
    def run():
        rb = ReportBuilder(f"lie algebra {g.name}".strip())
        rb.add("antisymmetry", antisymmetry_defects(g.bracket, 2))
        n = g.dim
        rb.add("jacobi", difference_entries(jacobi_tensor(g.bracket), zeros(n, n, n, n), 3))
        return rb.build()

    return cached(g, "validation", run)


def _ensure_lie(g: LieAlgebra) -> None:
    r = validate_lie(g)
    if not r.valid:
        raise InvalidStructureError(r)


def lie_algebra(name: str) -> LieAlgebra:
    """Built-ins: ``sl2`` (e, f, h), ``h3`` (x, y, z), ``aff2`` (x, y), ``abelian<n>``, ``gl2``."""
    if name == "sl2":
        return LieAlgebra.from_sparse(3, [((0, 1, 2), 1), ((0, 2, 0), -2), ((1, 2, 1), 2)], "sl2")
    if name == "h3":
        return LieAlgebra.from_sparse(3, [((0, 1, 2), 1)], "h3")
    if name == "aff2":
        return LieAlgebra.from_sparse(2, [((0, 1, 1), 1)], "aff2")
    if name == "gl2":
        # sl2 plus a central element
        return LieAlgebra.from_sparse(4, [((0, 1, 2), 1), ((0, 2, 0), -2), ((1, 2, 1), 2)], "gl2")
    if name.startswith("abelian"):
        n = int(name[len("abelian"):] or 1)
        return LieAlgebra(n, zeros(n, n, n), f"abelian{n}")
    raise ValueError(f"unknown Lie algebra {name!r}")


def lie_as_l2a(g: LieAlgebra) -> TwoTermL2A:
    """``[0 -> g]``."""
    _ensure_lie(g)
    return TwoTermL2A(0, g.dim, zeros(g.dim, 0), g.bracket, zeros(g.dim, 0, 0), zeros(g.dim, g.dim, g.dim, 0), g.name)


def derivations(g: LieAlgebra) -> np.ndarray:
    """Basis of Der(g) as an array of shape ``(k, n, n)``; ``D[i] @ v`` applies ``D_i``."""
    _ensure_lie(g)

    def solve():
        n = g.dim
        B = g.bracket
        # unknown D (n x n) flattened row-major: D[a, b] at a*n + b
        rows = []
        for x, y in itertools.product(range(n), repeat=2):
            for out in range(n):
                row = zeros(n * n)
                # (D[x,y])_out = sum_m B[x,y,m] D[out, m]
                for m in range(n):
                    row[out * n + m] += B[x, y, m]
                # [Dx, y]_out = sum_m D[m, x] B[m, y, out];  [x, Dy]_out = sum_m D[m, y] B[x, m, out]
                for m in range(n):
                    row[m * n + x] -= B[m, y, out]
                    row[m * n + y] -= B[x, m, out]
                rows.append(row)
        A = np.stack(rows) if rows else zeros(0, n * n)
        K = kernel_basis(A)
        Ds = asarray(np.moveaxis(K, 1, 0).reshape(K.shape[1], n, n))
        _check_closed(Ds)
        return Ds

    return cached(g, "derivations", solve)


def _flat_basis(Ds: np.ndarray) -> np.ndarray:
    k = Ds.shape[0]
    return Ds.reshape(k, -1).T


def _check_closed(Ds: np.ndarray) -> None:
    F = _flat_basis(Ds)
    for i, j in itertools.combinations(range(Ds.shape[0]), 2):
        coordinates(F, (Ds[i] @ Ds[j] - Ds[j] @ Ds[i]).reshape(-1))


def der_crossed_module(g: LieAlgebra) -> TwoTermL2A:
    """``[g -> Der(g)]`` with ``d v = ad_v`` and derivations acting on g."""
    Ds = derivations(g)
    k, n = Ds.shape[0], g.dim
    F = _flat_basis(Ds)
    d = hstack(*[coordinates(F, g.ad(identity(n)[:, v]).reshape(-1)).reshape(k, 1) for v in range(n)]) if n else zeros(k, 0)
    b00 = zeros(k, k, k)
    for i, j in itertools.product(range(k), repeat=2):
        b00[i, j] = coordinates(F, (Ds[i] @ Ds[j] - Ds[j] @ Ds[i]).reshape(-1))
    b01 = asarray(np.moveaxis(Ds, 2, 1))  # b01[i, h, :] = D_i e_h
    L = TwoTermL2A(n, k, d, b00, b01, zeros(k, k, k, n), f"Der({g.name})")
    ensure_valid(L)
    return L


@dataclass(frozen=True, eq=False)
class Extension:
    """``0 -> V --inj--> L --proj--> W -> 0``."""

    V: LieAlgebra
    W: LieAlgebra
    L: LieAlgebra
    inj: np.ndarray
    proj: np.ndarray
    name: str = ""


def validate_extension(e: Extension) -> ValidationReport:
    rb = ReportBuilder(f"extension {e.name}".strip())
    for g in (e.V, e.W, e.L):
        for f in validate_lie(g).failures:
            rb.fail(f"{g.name}:{f.axiom}", f.lhs, f.rhs, f.indices)
    inj, proj = asarray(e.inj), asarray(e.proj)
    if rank(inj) != e.V.dim:
        rb.fail("inj_injective", (rank(inj),), (e.V.dim,))
    if rank(proj) != e.W.dim:
        rb.fail("proj_surjective", (rank(proj),), (e.W.dim,))
    if e.L.dim != e.V.dim + e.W.dim:
        rb.fail("exact_middle", (e.L.dim,), (e.V.dim + e.W.dim,))
    rb.add("proj_inj", difference_entries((proj @ inj).T, zeros(e.V.dim, e.W.dim), 1))
    rb.add("inj_bracket", difference_entries(postcompose(inj, e.V.bracket), precompose(e.L.bracket, inj, inj), 2))
    rb.add("proj_bracket", difference_entries(postcompose(proj, e.L.bracket), precompose(e.W.bracket, proj, proj), 2))
    return rb.build()


def _ensure_extension(e: Extension) -> None:
    r = validate_extension(e)
    if not r.valid:
        raise InvalidStructureError(r)


def _direct_sum(a: LieAlgebra, b: LieAlgebra, name="") -> LieAlgebra:
    n = a.dim + b.dim
    T = zeros(n, n, n)
    T[: a.dim, : a.dim, : a.dim] = a.bracket
    T[a.dim :, a.dim :, a.dim :] = b.bracket
    return LieAlgebra(n, T, name or f"{a.name}+{b.name}")


def extension(name: str) -> Extension:
    """Built-in extensions: ``split_abelian``, ``heisenberg``, ``sl2_plus_k``, ``aff2``, ``split_sl2_k``."""
    K1, K2 = lie_algebra("abelian1"), lie_algebra("abelian2")
    if name == "split_abelian":
        e = Extension(K1, K2, _direct_sum(K1, K2, "abelian3"), vstack(identity(1), zeros(2, 1)), hstack(zeros(2, 1), identity(2)), name)
    elif name == "heisenberg":
        # center z = e2 is the kernel; x, y map to the abelian quotient
        e = Extension(K1, K2, lie_algebra("h3"), vstack(zeros(2, 1), identity(1)), hstack(identity(2), zeros(2, 1)), name)
    elif name == "sl2_plus_k":
        sl2 = lie_algebra("sl2")
        L = _direct_sum(sl2, K1, "sl2+k")
        e = Extension(sl2, K1, L, vstack(identity(3), zeros(1, 3)), hstack(zeros(1, 3), identity(1)), name)
    elif name == "aff2":
        # span(y) is an ideal with quotient spanned by x
        e = Extension(K1, K1, lie_algebra("aff2"), asarray([[0], [1]]), asarray([[1, 0]]), name)
    elif name == "split_sl2_k":
        # K as kernel, sl2 as quotient
        sl2 = lie_algebra("sl2")
        L = _direct_sum(K1, sl2, "k+sl2")
        e = Extension(K1, sl2, L, vstack(identity(1), zeros(3, 1)), hstack(zeros(3, 1), identity(3)), name)
    else:
        raise ValueError(f"unknown extension {name!r}")
    _ensure_extension(e)
    return e


EXTENSIONS = ("split_abelian", "heisenberg", "sl2_plus_k", "aff2", "split_sl2_k")


def extension_to_butterfly(e: Extension) -> Butterfly:
    """Butterfly ``[0 -> W] -> Der(V)`` with center L."""
    _ensure_extension(e)
    src, tgt = lie_as_l2a(e.W), der_crossed_module(e.V)
    inj, proj = asarray(e.inj), asarray(e.proj)
    F = _flat_basis(derivations(e.V))
    back = left_inverse(inj)
    cols = []
    for l in range(e.L.dim):
        ad = e.L.ad(identity(e.L.dim)[:, l]) @ inj
        restricted = back @ ad
        if not np.array_equal(inj @ restricted, ad):
            raise InvalidStructureError(validate_extension(e))
        cols.append(coordinates(F, restricted.reshape(-1)).reshape(-1, 1))
    rho = hstack(*cols) if cols else zeros(tgt.dim_v0, 0)
    b = Butterfly(src, tgt, e.L.dim, e.L.bracket, zeros(e.L.dim, 0), inj, proj, rho)
    ensure_valid_butterfly(b)
    return b


def butterfly_to_extension(b: Butterfly) -> Extension:
    ensure_valid_butterfly(b)
    if b.source.dim_v1 != 0:
        raise ValueError("source must have zero degree-1 space")
    W = LieAlgebra(b.source.dim_v0, b.source.b00, b.source.name)
    T = b.target
    V = LieAlgebra(T.dim_v1, derived_bracket_v1(T), "V")
    L = LieAlgebra(b.dim_e, b.e_bracket, "E")
    e = Extension(V, W, L, b.iota, b.sigma)
    _ensure_extension(e)
    return e


def extension_isomorphism(e1: Extension, e2: Extension):
    """An isomorphism ``L1 -> L2`` commuting with inj and proj, or None.

    Such a map is the same thing as a 2-cell between the associated
    butterflies into Der(V), whose search is decisive.
    """
    if e1.V.dim != e2.V.dim or e1.W.dim != e2.W.dim or e1.L.dim != e2.L.dim:
        return None
    for a, b in ((e1.V, e2.V), (e1.W, e2.W)):
        if not np.array_equal(a.bracket, b.bracket):
            return None
    res = find_butterfly_2cell(extension_to_butterfly(e1), extension_to_butterfly(e2))
    return res.witness.phi if res.found else None


def find_lie_splitting(e: Extension) -> SearchResult:
    """Look for a bracket-preserving section ``s: W -> L`` of ``proj``.

    ``s = s0 + inj n``; the condition is affine in ``n`` when V is abelian, and
    then the answer is decisive.  Otherwise a failure to find is ``unknown``.
    """
    _ensure_extension(e)
    inj, proj = asarray(e.inj), asarray(e.proj)
    s0 = right_section(proj)
    shape = (e.V.dim, e.W.dim)

    def s_of(n):
        return s0 + inj @ n

    def residual(n):
        s = s_of(n)
        return (precompose(e.L.bracket, s, s) - postcompose(s, e.W.bracket)).reshape(-1)

    res = linearized_solve(residual, shape, (zeros(0, shape[0] * shape[1]), zeros(0)))
    if res.found:
        return SearchResult(FOUND, s_of(res.witness))
    if not is_zero(e.V.bracket):
        return SearchResult(UNKNOWN, detail="splitting condition is quadratic for nonabelian kernel")
    return res


# ---------------------------------------------------------------------------
# families


def _ideal_inclusion(g: LieAlgebra, ideal) -> TwoTermL2A:
    I = asarray(ideal)
    m = I.shape[1]
    back = left_inverse(I)
    b01 = zeros(g.dim, m, m)
    for x in range(g.dim):
        img = g.ad(identity(g.dim)[:, x]) @ I
        if not np.array_equal(I @ (back @ img), img):
            raise ValueError("not an ideal")
        b01[x] = (back @ img).T
    return TwoTermL2A(m, g.dim, I, g.bracket, b01, zeros(g.dim, g.dim, g.dim, m), f"{g.name}>ideal{m}")


def _killing(g: LieAlgebra) -> np.ndarray:
    ads = [g.ad(identity(g.dim)[:, i]) for i in range(g.dim)]
    K = zeros(g.dim, g.dim)
    for i, j in itertools.product(range(g.dim), repeat=2):
        K[i, j] = np.trace(ads[i] @ ads[j])
    return K


def _string_type(g: LieAlgebra, scale=1) -> TwoTermL2A:
    n = g.dim
    F = current_field()
    # <x,y,z> = scale * K(x, [y,z]); alternating because K is invariant
    jac = np.einsum("xm,yzm->xyz", _killing(g), g.bracket) * F(scale)
    return TwoTermL2A(1, n, zeros(n, 1), g.bracket, zeros(n, 1, 1), jac.reshape(n, n, n, 1), f"string({g.name},{scale})")


def _acyclic() -> TwoTermL2A:
    """``[K^3 -id-> K^3]`` with a non-Lie bracket; its Jacobiator is the Jacobi defect."""
    B = antisymmetric_from_sparse(3, 2, 3, [((0, 1, 1), 1), ((0, 1, 2), -1), ((0, 2, 2), "1/2"), ((1, 2, 0), 1)])
    return TwoTermL2A(3, 3, identity(3), B, B, jacobi_tensor(B), "acyclic")


FAMILIES = ("abelian", "shift", "ideal_inclusion", "identity_xmod", "der", "string_type", "lie", "acyclic")


def make_family(name: str, *params) -> TwoTermL2A:
    """Named validated objects.

    ``abelian n1 n0``, ``shift n``, ``ideal_inclusion g`` (center of h3,
    span(y) in aff2, K in gl2), ``identity_xmod g``, ``der g``,
    ``string_type g [scale]``, ``lie g``, ``acyclic``.
    """
    if name == "abelian":
        n1, n0 = (int(p) for p in params)
        L = TwoTermL2A(n1, n0, zeros(n0, n1), zeros(n0, n0, n0), zeros(n0, n1, n1), zeros(n0, n0, n0, n1), f"abelian({n1},{n0})")
    elif name == "shift":
        (n,) = (int(p) for p in params)
        L = TwoTermL2A(n, 0, zeros(0, n), zeros(0, 0, 0), zeros(0, n, n), zeros(0, 0, 0, n), f"shift({n})")
    elif name == "ideal_inclusion":
        g = lie_algebra(params[0])
        ideals = {"h3": [[0], [0], [1]], "aff2": [[0], [1]], "gl2": [[0], [0], [0], [1]], "sl2": identity(3)}
        if g.name not in ideals:
            raise ValueError(f"no built-in ideal for {g.name}")
        L = _ideal_inclusion(g, ideals[g.name])
    elif name == "identity_xmod":
        g = lie_algebra(params[0])
        L = _ideal_inclusion(g, identity(g.dim)).replace(name=f"id({g.name})")
    elif name == "der":
        L = der_crossed_module(lie_algebra(params[0]))
    elif name == "string_type":
        g = lie_algebra(params[0])
        L = _string_type(g, params[1] if len(params) > 1 else 1)
    elif name == "lie":
        L = lie_as_l2a(lie_algebra(params[0]))
    elif name == "acyclic":
        if params:
            raise ValueError("acyclic takes no parameters")
        L = _acyclic()
    else:
        raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    ensure_valid(L)
    return L


# ---------------------------------------------------------------------------
# randomness


def _random_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    F = current_field()
    while True:
        A = asarray(np.vectorize(F, otypes=[object])(rng.integers(-2, 3, size=(n, n))) if n else zeros(0, 0))
        if rank(A) == n:
            return A


def random_twist(b: Butterfly, seed: int) -> Butterfly:
    """``b o A`` for a random automorphism butterfly A of the source, in a random center basis.

    A comes from a random (non-canonical) section of the identity butterfly,
    read as a morphism and turned back into a butterfly.
    """
    ensure_valid_butterfly(b)
    rng = np.random.default_rng(seed)
    F = current_field()
    W = b.source
    n = asarray(np.vectorize(F, otypes=[object])(rng.integers(-2, 3, size=(W.dim_v1, W.dim_v0)))) if W.dim_v1 * W.dim_v0 else zeros(W.dim_v1, W.dim_v0)
    s = vstack(n, identity(W.dim_v0))
    auto = morphism_to_butterfly(butterfly_to_morphism(identity_butterfly(W), s))
    twisted = compose_butterflies(b, auto)
    out = transport(twisted, _random_invertible(rng, twisted.dim_e))
    ensure_valid_butterfly(out)
    return out


# ---------------------------------------------------------------------------
# corpus


_CORPUS: dict = {}


def _memo(key: str, build):
    if key not in _CORPUS:
        _CORPUS[key] = build()
    return _CORPUS[key]


def corpus_objects() -> list[TwoTermL2A]:
    return _memo("objects", _build_objects)


def _build_objects() -> list[TwoTermL2A]:
    specs = [
        ("abelian", 1, 2),
        ("abelian", 2, 1),
        ("shift", 2),
        ("lie", "sl2"),
        ("lie", "h3"),
        ("lie", "aff2"),
        ("ideal_inclusion", "h3"),
        ("ideal_inclusion", "aff2"),
        ("ideal_inclusion", "gl2"),
        ("identity_xmod", "sl2"),
        ("identity_xmod", "aff2"),
        ("der", "sl2"),
        ("der", "h3"),
        ("der", "aff2"),
        ("der", "abelian1"),
        ("string_type", "sl2", 1),
        ("string_type", "sl2", "1/2"),
        ("acyclic",),
    ]
    return [make_family(*s) for s in specs]


def _strict(W, V, f0, f1=None) -> L2AMorphism:
    f1 = zeros(V.dim_v1, W.dim_v1) if f1 is None else f1
    f = L2AMorphism(W, V, f0, f1, zeros(W.dim_v0, W.dim_v0, V.dim_v1))
    ensure_valid_morphism(f)
    return f


def _chain_objects(gname: str):
    """``[0 -> g] -> [I -> g] -> [g -> g] -> [g -> Der g]`` and the maps between them."""
    g = lie_algebra(gname)
    lie = make_family("lie", gname)
    ideal = make_family("ideal_inclusion", gname)
    idx = make_family("identity_xmod", gname)
    der = make_family("der", gname)
    n = g.dim
    a = _strict(lie, ideal, identity(n))
    b = _strict(ideal, idx, identity(n), ideal.d)
    ad = der.d  # coordinates of ad_v
    c = _strict(idx, der, ad, identity(n))
    return [a, b, c]


def corpus_morphisms() -> list[L2AMorphism]:
    return _memo("morphisms", _build_morphisms)


def _build_morphisms() -> list[L2AMorphism]:
    objs = corpus_objects()
    out = [identity_morphism(L) for L in objs]
    out += [zero_morphism(objs[i], objs[j]) for i, j in ((0, 1), (3, 4), (4, 9), (15, 3), (12, 13))]
    for g in ("sl2", "h3", "aff2"):
        out += _chain_objects(g)
    # the truncation of a string-type object to its degree-0 Lie algebra
    st, sl2 = objs[15], objs[3]
    out.append(_strict(st, sl2, identity(3)))
    # non-strict morphisms read off twisted identity butterflies
    for k, L in enumerate((objs[0], objs[6], objs[9], objs[15], objs[17])):
        out.append(butterfly_to_morphism(random_twist(identity_butterfly(L), 100 + k)))
    for f in out:
        ensure_valid_morphism(f)
    return out


def corpus_butterflies() -> list[Butterfly]:
    return _memo("butterflies", _build_butterflies)


def _build_butterflies() -> list[Butterfly]:
    out = [morphism_to_butterfly(f) for f in corpus_morphisms()]
    out += [extension_to_butterfly(extension(n)) for n in EXTENSIONS]
    objs = corpus_objects()
    out += [random_twist(identity_butterfly(objs[i]), 7 + i) for i in (1, 7, 11, 16)]
    for b in out:
        ensure_valid_butterfly(b)
    return out


def corpus_equivalences() -> list[Butterfly]:
    return [b for b in corpus_butterflies() if is_equivalence(b)]


def composable_chains(length: int) -> list[list[Butterfly]]:
    """Composable lists ``[b1, b2, ...]`` with ``b_{i+1}`` after ``b_i``."""
    chains = []
    for g in ("sl2", "aff2", "h3"):
        ms = [morphism_to_butterfly(f) for f in _chain_objects(g)]
        start = random_twist(identity_butterfly(ms[0].source), 31)
        full = [start] + ms
        for i in range(len(full) - length + 1):
            chains.append(full[i : i + length])
    objs = corpus_objects()
    for k, i in enumerate((0, 6, 15, 17)):
        L = objs[i]
        chains.append([random_twist(identity_butterfly(L), 50 + 10 * k + j) for j in range(length)])
    return chains
