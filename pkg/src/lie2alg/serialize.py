"""JSON documents for every structure in the package.

A document is ``{"format_version": 1, "kind": ..., "field": "q" | "fp:<p>", ...}``.
Tensors are written sparsely as ``{"shape": [...], "entries": [{"idx": [...],
"val": "p/q"}, ...]}`` in lexicographic index order.  For antisymmetric
tensors (brackets on a single space, Jacobiators, ``eps``) only entries whose
input indices are strictly increasing are written or accepted; the remaining
entries follow by sign.  Nested structures (the source of a morphism, ...)
are written as the same payload without the three header keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from typing import Any, Callable

import numpy as np

from .butterfly import Butterfly, Butterfly2Cell
from .corpus import Extension, LieAlgebra
from .exactla import current_field, field_from_name, use_field, zeros
from .hfib import HomotopyFiber
from .l2a import TwoTermL2A
from .morph import L2AMorphism, L2ATransformation
from .multilinear import permutation_sign, to_sparse

FORMAT_VERSION = 1

KINDS = ("l2a", "morphism", "transformation", "butterfly", "butterfly2cell", "hfib", "extension", "lie_algebra")


class FormatError(ValueError):
    def __init__(self, message: str, path: str = "$", line: int | None = None, col: int | None = None):
        where = f" at line {line}, column {col}" if line is not None else f" at {path}"
        super().__init__(message + where)
        self.path, self.line, self.col = path, line, col


@dataclass(frozen=True)
class Document:
    kind: str
    value: Any
    field: str = "q"


def field_name(F) -> str:
    p = getattr(F, "p", None)
    return "q" if p is None else f"fp:{p}"


# ---------------------------------------------------------------------------
# writing


def _tensor(T: np.ndarray, antisym: int = 0) -> dict:
    F = current_field()
    return {
        "shape": list(T.shape),
        "entries": [{"idx": list(idx), "val": F.format(v)} for idx, v in to_sparse(T, antisym)],
    }


def _l2a(L: TwoTermL2A) -> dict:
    return {
        "name": L.name,
        "dim_v1": L.dim_v1,
        "dim_v0": L.dim_v0,
        "d": _tensor(L.d),
        "b00": _tensor(L.b00, 2),
        "b01": _tensor(L.b01),
        "jac": _tensor(L.jac, 3),
    }


def _morphism(f: L2AMorphism) -> dict:
    return {
        "source": _l2a(f.source),
        "target": _l2a(f.target),
        "f0": _tensor(f.f0),
        "f1": _tensor(f.f1),
        "eps": _tensor(f.eps, 2),
    }


def _butterfly(b: Butterfly) -> dict:
    return {
        "source": _l2a(b.source),
        "target": _l2a(b.target),
        "dim_e": b.dim_e,
        "e_bracket": _tensor(b.e_bracket, 2),
        "kappa": _tensor(b.kappa),
        "iota": _tensor(b.iota),
        "sigma": _tensor(b.sigma),
        "rho": _tensor(b.rho),
    }


def _lie(g: LieAlgebra) -> dict:
    return {"name": g.name, "dim": g.dim, "bracket": _tensor(g.bracket, 2)}


def _payload(kind: str, obj) -> dict:
    if kind == "l2a":
        return _l2a(obj)
    if kind == "morphism":
        return _morphism(obj)
    if kind == "transformation":
        return {"from": _morphism(obj.from_m), "to": _morphism(obj.to_m), "theta": _tensor(obj.theta)}
    if kind == "butterfly":
        return _butterfly(obj)
    if kind == "butterfly2cell":
        return {"from": _butterfly(obj.from_b), "to": _butterfly(obj.to_b), "phi": _tensor(obj.phi)}
    if kind == "hfib":
        out = {"c1_dim": obj.c1_dim, "c0_dim": obj.c0_dim, "cm1_dim": obj.cm1_dim}
        for name, anti in _HFIB_TENSORS:
            out[name] = _tensor(getattr(obj, name), anti)
        return out
    if kind == "extension":
        return {
            "name": obj.name,
            "V": _lie(obj.V),
            "W": _lie(obj.W),
            "L": _lie(obj.L),
            "inj": _tensor(np.asarray(obj.inj, dtype=object)),
            "proj": _tensor(np.asarray(obj.proj, dtype=object)),
        }
    if kind == "lie_algebra":
        return _lie(obj)
    raise ValueError(f"unknown kind {kind!r}")


_HFIB_TENSORS = (("d1", 0), ("d0", 0), ("br1", 2), ("br0", 2), ("brm1", 2), ("br01", 0), ("jac0", 3), ("jacm1", 3))

_TYPES = (
    (TwoTermL2A, "l2a"),
    (L2AMorphism, "morphism"),
    (L2ATransformation, "transformation"),
    (Butterfly, "butterfly"),
    (Butterfly2Cell, "butterfly2cell"),
    (HomotopyFiber, "hfib"),
    (Extension, "extension"),
    (LieAlgebra, "lie_algebra"),
)


def kind_of(obj) -> str:
    for cls, kind in _TYPES:
        if isinstance(obj, cls):
            return kind
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize(obj) -> str:
    """Canonical text of a structure (or a :class:`Document`)."""
    if isinstance(obj, Document):
        with use_field(field_from_name(obj.field)):
            return serialize(obj.value)
    kind = kind_of(obj)
    doc = {"format_version": FORMAT_VERSION, "kind": kind, "field": field_name(current_field())}
    doc.update(_payload(kind, obj))
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# reading


class _Reader:
    def __init__(self, F):
        self.F = F

    def obj(self, data, path: str, keys: dict[str, Callable]) -> dict:
        if not isinstance(data, dict):
            raise FormatError("expected an object", path)
        unknown = sorted(set(data) - set(keys))
        if unknown:
            raise FormatError(f"unknown field {unknown[0]!r}", path)
        missing = [k for k in keys if k not in data]
        if missing:
            raise FormatError(f"missing field {missing[0]!r}", path)
        return {k: fn(data[k], f"{path}.{k}") for k, fn in keys.items()}

    def count(self, data, path: str) -> int:
        if not isinstance(data, int) or isinstance(data, bool) or data < 0:
            raise FormatError("expected a non-negative integer", path)
        return data

    def name(self, data, path: str) -> str:
        if not isinstance(data, str):
            raise FormatError("expected a string", path)
        return data

    def scalar(self, data, path: str):
        if not isinstance(data, str):
            raise FormatError("scalar must be a string like \"p/q\"", path)
        try:
            return self.F.parse(data)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad scalar {data!r}: {exc}", path) from None

    def tensor(self, data, path: str, shape: tuple[int, ...], antisym: int = 0) -> np.ndarray:
        t = self.obj(data, path, {"shape": lambda d, p: d, "entries": lambda d, p: d})
        if t["shape"] != list(shape):
            raise FormatError(f"expected shape {list(shape)}, got {t['shape']}", f"{path}.shape")
        if not isinstance(t["entries"], list):
            raise FormatError("entries must be a list", f"{path}.entries")
        T = zeros(*shape)
        seen = set()
        for i, entry in enumerate(t["entries"]):
            ep = f"{path}.entries[{i}]"
            e = self.obj(entry, ep, {"idx": lambda d, p: d, "val": self.scalar})
            idx = e["idx"]
            if (
                not isinstance(idx, list)
                or len(idx) != len(shape)
                or not all(isinstance(j, int) and not isinstance(j, bool) and 0 <= j < n for j, n in zip(idx, shape))
            ):
                raise FormatError(f"index {idx!r} out of range for shape {list(shape)}", f"{ep}.idx")
            idx = tuple(idx)
            if antisym and any(idx[k] >= idx[k + 1] for k in range(antisym - 1)):
                raise FormatError(
                    f"antisymmetric tensor entries need strictly increasing leading {antisym} indices",
                    f"{ep}.idx",
                )
            if idx in seen:
                raise FormatError(f"duplicate index {list(idx)}", f"{ep}.idx")
            seen.add(idx)
            if antisym:
                head, tail = idx[:antisym], idx[antisym:]
                for perm in permutations(range(antisym)):
                    T[tuple(head[p] for p in perm) + tail] = permutation_sign(perm) * e["val"]
            else:
                T[idx] = e["val"]
        return T

    def l2a(self, data, path: str) -> TwoTermL2A:
        if not isinstance(data, dict):
            raise FormatError("expected an object", path)
        n1 = self.count(data.get("dim_v1"), f"{path}.dim_v1")
        n0 = self.count(data.get("dim_v0"), f"{path}.dim_v0")
        body = self.obj(
            data,
            path,
            {
                "name": self.name,
                "dim_v1": lambda d, p: n1,
                "dim_v0": lambda d, p: n0,
                "d": lambda d, p: self.tensor(d, p, (n0, n1)),
                "b00": lambda d, p: self.tensor(d, p, (n0, n0, n0), 2),
                "b01": lambda d, p: self.tensor(d, p, (n0, n1, n1)),
                "jac": lambda d, p: self.tensor(d, p, (n0, n0, n0, n1), 3),
            },
        )
        return TwoTermL2A(n1, n0, body["d"], body["b00"], body["b01"], body["jac"], body["name"])

    def _pair(self, data, path):
        if not isinstance(data, dict):
            raise FormatError("expected an object", path)
        W = self.l2a(data.get("source"), f"{path}.source") if "source" in data else None
        V = self.l2a(data.get("target"), f"{path}.target") if "target" in data else None
        if W is None or V is None:
            raise FormatError("missing field 'source'" if W is None else "missing field 'target'", path)
        return W, V

    def morphism(self, data, path: str) -> L2AMorphism:
        W, V = self._pair(data, path)
        body = self.obj(
            data,
            path,
            {
                "source": lambda d, p: W,
                "target": lambda d, p: V,
                "f0": lambda d, p: self.tensor(d, p, (V.dim_v0, W.dim_v0)),
                "f1": lambda d, p: self.tensor(d, p, (V.dim_v1, W.dim_v1)),
                "eps": lambda d, p: self.tensor(d, p, (W.dim_v0, W.dim_v0, V.dim_v1), 2),
            },
        )
        return L2AMorphism(W, V, body["f0"], body["f1"], body["eps"])

    def butterfly(self, data, path: str) -> Butterfly:
        W, V = self._pair(data, path)
        e = self.count(data.get("dim_e"), f"{path}.dim_e")
        body = self.obj(
            data,
            path,
            {
                "source": lambda d, p: W,
                "target": lambda d, p: V,
                "dim_e": lambda d, p: e,
                "e_bracket": lambda d, p: self.tensor(d, p, (e, e, e), 2),
                "kappa": lambda d, p: self.tensor(d, p, (e, W.dim_v1)),
                "iota": lambda d, p: self.tensor(d, p, (e, V.dim_v1)),
                "sigma": lambda d, p: self.tensor(d, p, (W.dim_v0, e)),
                "rho": lambda d, p: self.tensor(d, p, (V.dim_v0, e)),
            },
        )
        return Butterfly(W, V, e, body["e_bracket"], body["kappa"], body["iota"], body["sigma"], body["rho"])

    def lie(self, data, path: str) -> LieAlgebra:
        if not isinstance(data, dict):
            raise FormatError("expected an object", path)
        n = self.count(data.get("dim"), f"{path}.dim")
        body = self.obj(
            data,
            path,
            {"name": self.name, "dim": lambda d, p: n, "bracket": lambda d, p: self.tensor(d, p, (n, n, n), 2)},
        )
        return LieAlgebra(n, body["bracket"], body["name"])

    def transformation(self, data, path: str) -> L2ATransformation:
        if not isinstance(data, dict):
            raise FormatError("expected an object", path)
        g = self.morphism(data.get("from"), f"{path}.from")
        f = self.morphism(data.get("to"), f"{path}.to")
        body = self.obj(
            data,
            path,
            {
                "from": lambda d, p: g,
                "to": lambda d, p: f,
                "theta": lambda d, p: self.tensor(d, p, (g.target.dim_v1, g.source.dim_v0)),
            },
        )
        return L2ATransformation(g, f, body["theta"])

    def cell(self, data, path: str) -> Butterfly2Cell:
        if not isinstance(data, dict):
            raise FormatError("expected an object", path)
        b = self.butterfly(data.get("from"), f"{path}.from")
        b2 = self.butterfly(data.get("to"), f"{path}.to")
        body = self.obj(
            data,
            path,
            {"from": lambda d, p: b, "to": lambda d, p: b2, "phi": lambda d, p: self.tensor(d, p, (b2.dim_e, b.dim_e))},
        )
        return Butterfly2Cell(b, b2, body["phi"])

    def hfib(self, data, path: str) -> HomotopyFiber:
        if not isinstance(data, dict):
            raise FormatError("expected an object", path)
        a = self.count(data.get("c1_dim"), f"{path}.c1_dim")
        b = self.count(data.get("c0_dim"), f"{path}.c0_dim")
        c = self.count(data.get("cm1_dim"), f"{path}.cm1_dim")
        shapes = {
            "d1": (b, a),
            "d0": (c, b),
            "br1": (a, a, a),
            "br0": (b, b, b),
            "brm1": (c, c, c),
            "br01": (b, a, a),
            "jac0": (b, b, b, a),
            "jacm1": (c, c, c, b),
        }
        keys: dict[str, Callable] = {"c1_dim": lambda d, p: a, "c0_dim": lambda d, p: b, "cm1_dim": lambda d, p: c}
        for name, anti in _HFIB_TENSORS:
            keys[name] = lambda d, p, s=shapes[name], k=anti: self.tensor(d, p, s, k)
        body = self.obj(data, path, keys)
        return HomotopyFiber(a, b, c, *(body[name] for name, _ in _HFIB_TENSORS))

    def extension(self, data, path: str) -> Extension:
        if not isinstance(data, dict):
            raise FormatError("expected an object", path)
        V = self.lie(data.get("V"), f"{path}.V")
        W = self.lie(data.get("W"), f"{path}.W")
        L = self.lie(data.get("L"), f"{path}.L")
        body = self.obj(
            data,
            path,
            {
                "name": self.name,
                "V": lambda d, p: V,
                "W": lambda d, p: W,
                "L": lambda d, p: L,
                "inj": lambda d, p: self.tensor(d, p, (L.dim, V.dim)),
                "proj": lambda d, p: self.tensor(d, p, (W.dim, L.dim)),
            },
        )
        return Extension(V, W, L, body["inj"], body["proj"], body["name"])


_READERS = {
    "l2a": _Reader.l2a,
    "morphism": _Reader.morphism,
    "transformation": _Reader.transformation,
    "butterfly": _Reader.butterfly,
    "butterfly2cell": _Reader.cell,
    "hfib": _Reader.hfib,
    "extension": _Reader.extension,
    "lie_algebra": _Reader.lie,
}


def parse(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, col=exc.colno) from None
    if not isinstance(data, dict):
        raise FormatError("document must be a JSON object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {version!r}", "$.format_version")
    kind = data.get("kind")
    if kind not in _READERS:
        raise FormatError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", "$.kind")
    fname = data.get("field", None)
    if not isinstance(fname, str):
        raise FormatError("missing or non-string field", "$.field")
    try:
        F = field_from_name(fname)
    except ValueError as exc:
        raise FormatError(str(exc), "$.field") from None
    payload = {k: v for k, v in data.items() if k not in ("format_version", "kind", "field")}
    with use_field(F):
        value = _READERS[kind](_Reader(F), payload, "$")
    return Document(kind, value, field_name(F))
