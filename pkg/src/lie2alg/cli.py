"""Command-line driver: ``lie2alg <command> [files...]``.

Exit codes: 0 success (or predicate true), 1 invalid input structure or
predicate false, 2 usage, parse or interface-mismatch errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import TextIO

from . import butterfly as bf
from . import corpus, hfib, morph
from .exactla import current_field, field_from_name, use_field
from .l2a import InvalidStructureError, homology, validate_l2a
from .reports import ValidationReport
from .serialize import FormatError, field_name, parse, serialize

OK, FALSE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class Session:
    def __init__(self, args, out: TextIO):
        self.args = args
        self.out = out
        self.field = None
        self._texts: dict[str, str] = {}

    def read(self, path: str) -> str:
        if path not in self._texts:
            try:
                self._texts[path] = sys.stdin.read() if path == "-" else Path(path).read_text()
            except OSError as exc:
                raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        return self._texts[path]

    def emit(self, text: str) -> None:
        self.out.write(text if text.endswith("\n") else text + "\n")

    def report(self, payload: dict, text: str) -> None:
        if self.args.json:
            self.emit(json.dumps(payload, indent=2, sort_keys=True))
        else:
            self.emit(text)

    def load(self, path: str, *kinds: str):
        try:
            doc = parse(self.read(path))
        except FormatError as exc:
            raise UsageError(f"{path}: {exc}") from None
        if kinds and doc.kind not in kinds:
            raise UsageError(f"{path}: expected {' or '.join(kinds)}, got {doc.kind}")
        if self.field is None:
            self.field = doc.field
        elif doc.field != self.field:
            raise UsageError(f"{path}: field {doc.field} differs from {self.field}")
        return doc


def _validation(value, kind: str) -> ValidationReport:
    return {
        "l2a": validate_l2a,
        "morphism": morph.validate_morphism,
        "transformation": morph.validate_transformation,
        "butterfly": bf.validate_butterfly,
        "butterfly2cell": bf.validate_butterfly_2cell,
        "hfib": hfib.validate_hfib_structure,
        "extension": corpus.validate_extension,
        "lie_algebra": corpus.validate_lie,
    }[kind](value)


def _matrix_text(M) -> str:
    F = current_field()
    if M.size == 0:
        return f"  ({M.shape[0]}x{M.shape[1]} zero-size)"
    return "\n".join("  [" + " ".join(F.format(x) for x in row) + "]" for row in M)


def _matrix_json(M):
    F = current_field()
    return [[F.format(x) for x in row] for row in M]


# ---------------------------------------------------------------------------
# commands


def cmd_validate(s: Session) -> int:
    doc = s.load(s.args.file)
    r = _validation(doc.value, doc.kind)
    s.report(r.as_dict(), r.text(limit=s.args.limit))
    return OK if r.valid else FALSE


def cmd_gen(s: Session) -> int:
    a = s.args
    fam, params = a.family, a.params
    if fam == "extension":
        if len(params) != 1:
            raise UsageError("gen extension NAME")
        s.emit(serialize(corpus.extension(params[0])))
    elif fam == "lie_algebra":
        if len(params) != 1:
            raise UsageError("gen lie_algebra NAME")
        s.emit(serialize(corpus.lie_algebra(params[0])))
    elif fam == "twisted_identity":
        L = corpus.make_family(*params) if params else None
        if L is None:
            raise UsageError("gen twisted_identity FAMILY PARAMS...")
        s.emit(serialize(corpus.random_twist(bf.identity_butterfly(L), a.seed)))
    else:
        s.emit(serialize(corpus.make_family(fam, *params)))
    return OK


def cmd_homology(s: Session) -> int:
    doc = s.load(s.args.file, "l2a", "morphism", "butterfly", "hfib")
    v = doc.value
    if doc.kind == "l2a":
        H = homology(v)
        s.report(
            {"dim_h1": H.dim_h1, "dim_h0": H.dim_h0},
            f"H1: dim {H.dim_h1}\nH0: dim {H.dim_h0}",
        )
    elif doc.kind == "hfib":
        h = hfib.hfib_homology(v).dims
        s.report({"dims": list(h)}, f"H1: dim {h[0]}\nH0: dim {h[1]}\nH-1: dim {h[2]}")
    else:
        H0, H1 = morph.induced_homology_maps(v) if doc.kind == "morphism" else bf.butterfly_homology_maps(v)
        s.report(
            {"H0": _matrix_json(H0), "H1": _matrix_json(H1)},
            "H0 map:\n" + _matrix_text(H0) + "\nH1 map:\n" + _matrix_text(H1),
        )
    return OK


def cmd_compose(s: Session) -> int:
    second = s.load(s.args.second, "morphism", "butterfly")
    first = s.load(s.args.first, "morphism", "butterfly")
    try:
        if second.kind == first.kind == "morphism":
            out = morph.compose_morphisms(second.value, first.value)
        else:
            to_b = lambda d: d.value if d.kind == "butterfly" else bf.morphism_to_butterfly(d.value)
            out = bf.compose_butterflies(to_b(second), to_b(first))
    except morph.CompositionError as exc:
        raise UsageError(f"cannot compose {s.args.second} after {s.args.first}: {exc}") from None
    s.emit(serialize(out))
    return OK


def cmd_to_butterfly(s: Session) -> int:
    s.emit(serialize(bf.morphism_to_butterfly(s.load(s.args.file, "morphism").value)))
    return OK


def cmd_to_morphism(s: Session) -> int:
    s.emit(serialize(bf.butterfly_to_morphism(s.load(s.args.file, "butterfly").value)))
    return OK


def cmd_identity(s: Session) -> int:
    L = s.load(s.args.file, "l2a").value
    s.emit(serialize(morph.identity_morphism(L) if s.args.morphism else bf.identity_butterfly(L)))
    return OK


def cmd_flip(s: Session) -> int:
    b = s.load(s.args.file, "butterfly").value
    try:
        out = bf.flip(b)
    except bf.NotAnEquivalence as exc:
        s.report({"error": "not_an_equivalence", "detail": str(exc)}, f"not an equivalence: {exc}")
        return FALSE
    s.emit(serialize(out))
    return OK


def cmd_is_equiv(s: Session) -> int:
    doc = s.load(s.args.file, "butterfly", "morphism")
    b = doc.value if doc.kind == "butterfly" else bf.morphism_to_butterfly(doc.value)
    res = bf.is_equivalence(b)
    s.report({"equivalence": res}, "equivalence" if res else "not an equivalence")
    return OK if res else FALSE


def cmd_hfib(s: Session) -> int:
    doc = s.load(s.args.file, "butterfly", "morphism")
    c = hfib.hfib_of_butterfly(doc.value) if doc.kind == "butterfly" else hfib.hfib_of_morphism(doc.value)
    s.emit(serialize(c))
    return OK


def cmd_les(s: Session) -> int:
    doc = s.load(s.args.file, "butterfly", "morphism")
    b = doc.value if doc.kind == "butterfly" else bf.morphism_to_butterfly(doc.value)
    les = hfib.long_exact_sequence(b)
    s.report(
        {
            "nodes": list(hfib.NODES),
            "dims": list(les.dims),
            "exactness": [{"node": n, "exact": ok} for n, ok in les.exactness()],
            "exact": les.is_exact,
        },
        les.table(),
    )
    return OK if les.is_exact else FALSE


def cmd_cone_check(s: Session) -> int:
    c = hfib.mapping_cone_check(s.load(s.args.file, "morphism").value)
    s.report({"hfib": list(c.hfib_dims), "cone": list(c.cone_dims), "agree": c.agree}, c.text())
    return OK if c.agree else FALSE


def cmd_find_2cell(s: Session) -> int:
    a = s.load(s.args.source, "butterfly", "morphism")
    b = s.load(s.args.target, "butterfly", "morphism")
    if a.kind != b.kind:
        raise UsageError("find-2cell needs two butterflies or two morphisms")
    try:
        if a.kind == "butterfly":
            res = bf.find_butterfly_2cell(a.value, b.value)
        else:
            # a transformation from the first morphism to the second
            res = morph.find_transformation(b.value, a.value)
    except morph.CompositionError as exc:
        raise UsageError(f"{s.args.source} and {s.args.target} are not parallel: {exc}") from None
    if res.found:
        s.emit(serialize(res.witness))
        return OK
    s.report({"status": res.status, "detail": res.detail}, f"{res.status}: {res.detail}")
    return FALSE


def cmd_zigzag(s: Session) -> int:
    E, p_w, p_v = bf.zigzag(s.load(s.args.file, "butterfly").value)
    s.emit(serialize({"object": E, "p_w": p_w, "p_v": p_v}[s.args.part]))
    return OK


def cmd_der(s: Session) -> int:
    name = s.args.algebra
    if Path(name).exists():
        g = s.load(name, "lie_algebra").value
    else:
        try:
            g = corpus.lie_algebra(name)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    s.emit(serialize(corpus.der_crossed_module(g)))
    return OK


def cmd_ext2bfly(s: Session) -> int:
    s.emit(serialize(corpus.extension_to_butterfly(s.load(s.args.file, "extension").value)))
    return OK


def cmd_bfly2ext(s: Session) -> int:
    b = s.load(s.args.file, "butterfly").value
    if b.source.dim_v1 != 0:
        raise UsageError("bfly2ext needs a butterfly whose source has zero degree-1 space")
    s.emit(serialize(corpus.butterfly_to_extension(b)))
    return OK


def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, defaults: bool):
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable reports")
        parser.add_argument("--seed", type=int, default=d(0), help="seed for randomized generators")
        parser.add_argument("--field", default=d(None), help="q (default) or fp:<p>")

    p = _Parser(prog="lie2alg", description="Exact computations with 2-term L-infinity algebras and butterflies.")
    global_flags(p, True)
    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, *files, help=""):
        sp = sub.add_parser(name, help=help, parents=[common])
        for f in files:
            sp.add_argument(f)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "file", help="check all axioms of any document")
    sp.add_argument("--limit", type=int, default=20, help="failing instances to print")
    sp = add("gen", cmd_gen, "family", help="emit a corpus object")
    sp.add_argument("params", nargs="*")
    add("homology", cmd_homology, "file", help="homology of an object, or induced maps")
    add("compose", cmd_compose, "second", "first", help="SECOND o FIRST (FIRST applied first)")
    add("to-butterfly", cmd_to_butterfly, "file")
    add("to-morphism", cmd_to_morphism, "file")
    sp = add("identity", cmd_identity, "file", help="identity butterfly (or --morphism)")
    sp.add_argument("--morphism", action="store_true")
    add("flip", cmd_flip, "file")
    add("is-equiv", cmd_is_equiv, "file")
    add("hfib", cmd_hfib, "file")
    add("les", cmd_les, "file", help="7-term long exact sequence")
    add("cone-check", cmd_cone_check, "file")
    add("find-2cell", cmd_find_2cell, "source", "target")
    sp = add("zigzag", cmd_zigzag, "file")
    sp.add_argument("--part", choices=("object", "p_w", "p_v"), default="object")
    add("der", cmd_der, "algebra", help="[g -> Der g] for a built-in name or lie_algebra file")
    add("ext2bfly", cmd_ext2bfly, "file")
    add("bfly2ext", cmd_bfly2ext, "file")
    return p


_INPUTS = ("file", "second", "first", "source", "target")


def _peek_field(s: Session) -> str | None:
    """The ``field`` header of the first input document, if it can be read."""
    for key in _INPUTS:
        path = getattr(s.args, key, None)
        if path is None:
            continue
        try:
            head = json.loads(s.read(path))
        except (UsageError, ValueError):
            return None
        return head.get("field") if isinstance(head, dict) and isinstance(head.get("field"), str) else None
    return None


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return USAGE
    except SystemExit as exc:  # --help
        return OK if exc.code in (0, None) else USAGE
    s = Session(args, out)
    try:
        # inputs carry their field; --field must agree with them and sets it for generators
        name = args.field or _peek_field(s) or "q"
        F = field_from_name(name)
        s.field = field_name(F) if (args.field or _peek_field(s)) else None
        with use_field(F):
            return args.fn(s)
    except UsageError as exc:
        err.write(f"lie2alg: {exc}\n")
        return USAGE
    except InvalidStructureError as exc:
        r = exc.report
        s.report(r.as_dict(), r.text(limit=20))
        return FALSE
    except ValueError as exc:
        err.write(f"lie2alg: {exc}\n")
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
