"""Exact linear algebra over Q or F_p.

Matrices are 2-D numpy arrays of ``dtype=object`` whose entries are field
elements (``gmpy2.mpq`` for the rationals, :class:`GFElement` for a prime
field).  A linear map ``X -> Y`` is stored with shape ``(dim Y, dim X)`` and
applied as ``A @ v``.

Every choice (pivots, sections, quotient coordinates) follows the RREF pivot
columns with lowest index first, so identical inputs give identical outputs.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from fractions import Fraction
import re

import gmpy2
import numpy as np
from gmpy2 import mpq

__all__ = [
    "QQ",
    "GF",
    "GFElement",
    "DimensionError",
    "NotSurjectiveError",
    "NotInSpanError",
    "QuotientPresentation",
    "current_field",
    "use_field",
    "set_field",
    "asmat",
    "asvec",
    "zeros",
    "identity",
    "hstack",
    "vstack",
    "block_diag",
    "rref",
    "rank",
    "kernel_basis",
    "image_basis",
    "quotient",
    "solve_affine",
    "right_section",
    "left_inverse",
    "inverse",
    "coordinates",
    "fiber_product",
    "pushout",
    "is_zero",
    "same_subspace",
]


class DimensionError(ValueError):
    pass


class NotSurjectiveError(ValueError):
    pass


class NotInSpanError(ValueError):
    pass


_RATIONAL = re.compile(r"^(-?[0-9]+)(?:/([0-9]+))?$")


class RationalField:
    """The rationals, backed by gmpy2's reduced ``mpq``."""

    name = "q"

    def __call__(self, x):
        if isinstance(x, GFElement):
            raise TypeError("cannot coerce a prime-field element into Q")
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, np.integer):
            x = int(x)
        return mpq(x)

    @property
    def zero(self):
        return mpq(0)

    @property
    def one(self):
        return mpq(1)

    def parse(self, text: str):
        m = _RATIONAL.match(text)
        if m is None:
            raise ValueError(f"not a rational literal: {text!r}")
        num, den = m.group(1), m.group(2)
        if num.startswith("-0") or (len(num.lstrip("-")) > 1 and num.lstrip("-")[0] == "0"):
            raise ValueError(f"non-canonical rational {text!r}: leading zero")
        if den is None:
            return mpq(int(num))
        d = int(den)
        if den.startswith("0") and d != 0:
            raise ValueError(f"non-canonical rational {text!r}: leading zero")
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        value = mpq(int(num), d)
        if d == 1 or value.denominator != d:
            raise ValueError(f"non-canonical rational {text!r}: expected {self.format(value)!r}")
        return value

    def format(self, x) -> str:
        x = mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class GFElement:
    """Element of the prime field F_p; interoperates with Python ints."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else GFElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return GFElement(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return GFElement(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return GFElement(-self.v, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"GF({self.p})({self.v})"


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = int(p)
        self.name = f"fp:{self.p}"

    def __call__(self, x):
        if isinstance(x, GFElement):
            if x.p != self.p:
                raise ValueError(f"element of F_{x.p} used in F_{self.p}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (int, np.integer)):
            return GFElement(int(x), self.p)
        q = mpq(x) if not isinstance(x, Fraction) else mpq(x.numerator, x.denominator)
        num, den = int(q.numerator), int(q.denominator)
        if den % self.p == 0:
            raise ZeroDivisionError(f"{q} has no image in F_{self.p}")
        return GFElement(num * pow(den, -1, self.p), self.p)

    @property
    def zero(self):
        return GFElement(0, self.p)

    @property
    def one(self):
        return GFElement(1, self.p)

    def parse(self, text: str):
        if not re.fullmatch(r"0|[1-9][0-9]*", text) or int(text) >= self.p:
            raise ValueError(f"non-canonical element of F_{self.p}: {text!r}")
        return GFElement(int(text), self.p)

    def format(self, x) -> str:
        return str(self(x).v)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str):
    if name == "q":
        return QQ
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    raise ValueError(f"unknown field {name!r}; use 'q' or 'fp:<p>'")


_field = contextvars.ContextVar("lie2alg_field", default=QQ)


def current_field():
    return _field.get()


def set_field(field) -> None:
    _field.set(field)


@contextlib.contextmanager
def use_field(field):
    token = _field.set(field)
    try:
        yield field
    finally:
        _field.reset(token)


# ---------------------------------------------------------------------------
# construction


def _coerce(arr: np.ndarray) -> np.ndarray:
    F = current_field()
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for i, x in enumerate(flat_in):
        flat_out[i] = F(x)
    return out


def asarray(data, shape=None) -> np.ndarray:
    """Object array of field elements, read-only."""
    arr = np.array(data, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    arr = _coerce(arr)
    arr.setflags(write=False)
    return arr


def asmat(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    m = asarray(data, None if rows is None else (rows, cols))
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    return m


def asvec(data) -> np.ndarray:
    v = asarray(data)
    if v.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {v.shape}")
    return v


def zeros(*shape: int) -> np.ndarray:
    F = current_field()
    out = np.empty(shape, dtype=object)
    out.fill(F.zero)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    one = current_field().one
    for i in range(n):
        out[i, i] = one
    return out


def hstack(*blocks) -> np.ndarray:
    return np.concatenate([np.asarray(b, dtype=object) for b in blocks], axis=1)


def vstack(*blocks) -> np.ndarray:
    return np.concatenate([np.asarray(b, dtype=object) for b in blocks], axis=0)


def block_diag(*blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def is_zero(arr) -> bool:
    return not any(bool(x) for x in np.asarray(arr, dtype=object).reshape(-1))


# ---------------------------------------------------------------------------
# elimination


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and the (increasing) pivot columns."""
    R = _coerce(np.asarray(m, dtype=object))
    if R.ndim != 2:
        raise DimensionError(f"rref needs a matrix, got shape {R.shape}")
    nrows, ncols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if R[i, c]), None)
        if p is None:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(nrows):
            if i != r and R[i, c]:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(m) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m) -> np.ndarray:
    """Columns spanning ``ker m``; one column per free variable."""
    m = np.asarray(m, dtype=object)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return identity(ncols)
    R, pivots = rref(m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    K = zeros(ncols, len(free))
    one = current_field().one
    for j, f in enumerate(free):
        K[f, j] = one
        for i, p in enumerate(pivots):
            K[p, j] = -R[i, f]
    return K


def image_basis(m) -> np.ndarray:
    """The pivot columns of ``m``: a basis of its column space."""
    m = np.asarray(m, dtype=object)
    if m.shape[1] == 0:
        return zeros(m.shape[0], 0)
    _, pivots = rref(m)
    return _coerce(m[:, pivots])


def inverse(m) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError(f"inverse of non-square shape {m.shape}")
    R, pivots = rref(hstack(m, identity(n)))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def right_section(a) -> np.ndarray:
    """``S`` with ``a @ S = I``, supported on the pivot columns of ``a``."""
    a = np.asarray(a, dtype=object)
    m, n = a.shape
    if m == 0:
        return zeros(n, 0)
    R, pivots = rref(a)
    if len(pivots) != m:
        raise NotSurjectiveError(f"map of rank {len(pivots)} onto dimension {m} has no section")
    S = zeros(n, m)
    S[pivots, :] = inverse(a[:, pivots])
    return S


def left_inverse(k) -> np.ndarray:
    """``L`` with ``L @ k = I`` for injective ``k``, supported on pivot rows."""
    k = np.asarray(k, dtype=object)
    n, r = k.shape
    if r == 0:
        return zeros(0, n)
    _, rows = rref(k.T)
    if len(rows) != r:
        raise ValueError("left inverse of a non-injective map")
    L = zeros(r, n)
    L[:, rows] = inverse(k[rows, :])
    return L


def coordinates(basis, v) -> np.ndarray:
    """Coordinates of ``v`` (vector or matrix of columns) in an injective ``basis``."""
    basis = np.asarray(basis, dtype=object)
    v = np.asarray(v, dtype=object)
    c = left_inverse(basis) @ v
    if not np.array_equal(basis @ c, v):
        raise NotInSpanError("vector does not lie in the span of the basis")
    return _coerce(np.asarray(c, dtype=object))


def solve_affine(a, b):
    """Solve ``a x = b``.

    Returns ``(particular, nullspace)`` or ``None`` when there is no solution.
    The particular solution has every free variable set to zero.
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"system with {a.shape[0]} rows but rhs of length {b.shape[0]}")
    n = a.shape[1]
    if a.shape[0] == 0:
        return zeros(n), identity(n)
    R, pivots = rref(hstack(a, b.reshape(-1, 1)))
    if pivots and pivots[-1] == n:
        return None
    x = zeros(n)
    for i, p in enumerate(pivots):
        x[p] = R[i, n]
    return x, kernel_basis(a)


def same_subspace(u, v) -> bool:
    """Whether two column sets span the same subspace."""
    ru, rv = rank(u), rank(v)
    return ru == rv == rank(hstack(u, v))


# ---------------------------------------------------------------------------
# quotients, fiber products, pushouts


@dataclass(frozen=True, eq=False)
class QuotientPresentation:
    """A quotient ``K^ambient_dim / span(subspace_basis)`` with chosen coordinates.

    ``projection`` sends ambient vectors to quotient coordinates, ``section``
    sends quotient coordinates back to representatives spanned by standard
    basis vectors (the non-pivot ones).
    """

    ambient_dim: int
    subspace_basis: np.ndarray
    projection: np.ndarray
    section: np.ndarray

    @property
    def dim(self) -> int:
        return self.projection.shape[0]

    def check(self) -> None:
        q = self.dim
        assert np.array_equal(self.projection @ self.section, identity(q))
        assert is_zero(self.projection @ self.subspace_basis)
        assert q == self.ambient_dim - rank(self.subspace_basis)


def quotient(ambient_dim: int, subspace_basis) -> QuotientPresentation:
    U = np.asarray(subspace_basis, dtype=object)
    if U.ndim != 2 or U.shape[0] != ambient_dim:
        raise DimensionError(
            f"subspace basis of shape {U.shape} does not live in dimension {ambient_dim}"
        )
    U = _coerce(U)
    _, pivots = rref(hstack(U, identity(ambient_dim)))
    k = U.shape[1]
    sub_cols = [p for p in pivots if p < k]
    comp = [p - k for p in pivots if p >= k]
    S = zeros(ambient_dim, len(comp))
    one = current_field().one
    for j, c in enumerate(comp):
        S[c, j] = one
    B = hstack(U[:, sub_cols], S)
    P = inverse(B)[len(sub_cols) :, :] if ambient_dim else zeros(0, 0)
    return QuotientPresentation(ambient_dim, U, P, S)


def fiber_product(f, g) -> np.ndarray:
    """Basis (columns in A ⊕ B) of ``{(a, b) : f a = g b}``."""
    f = np.asarray(f, dtype=object)
    g = np.asarray(g, dtype=object)
    if f.shape[0] != g.shape[0]:
        raise DimensionError(f"codomains differ: {f.shape[0]} vs {g.shape[0]}")
    return kernel_basis(hstack(f, -g))


def pushout(f, g) -> QuotientPresentation:
    """``(A ⊕ B) / {(f c, -g c)}`` for ``f: C -> A``, ``g: C -> B``."""
    f = np.asarray(f, dtype=object)
    g = np.asarray(g, dtype=object)
    if f.shape[1] != g.shape[1]:
        raise DimensionError(f"domains differ: {f.shape[1]} vs {g.shape[1]}")
    return quotient(f.shape[0] + g.shape[0], vstack(f, -g))
