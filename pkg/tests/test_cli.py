import io
import json
import sys

import pytest

from golden_corpus import GOLDEN
from lie2alg.cli import run


def call(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
    try:
        code = run([str(a) for a in argv], out, err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    made = {}
    for name, argv in {
        "sl2": ("gen", "lie", "sl2"),
        "h3": ("gen", "lie", "h3"),
        "string": ("gen", "string_type", "sl2"),
        "heis": ("gen", "extension", "heisenberg"),
        "twist": ("--seed", "4", "gen", "twisted_identity", "identity_xmod", "aff2"),
    }.items():
        code, text, _ = call(*argv)
        assert code == 0
        made[name] = d / f"{name}.json"
        made[name].write_text(text)
    for src in ("sl2", "h3", "string"):
        code, text, _ = call("identity", made[src])
        made[f"id_{src}"] = d / f"id_{src}.json"
        made[f"id_{src}"].write_text(text)
        code, text, _ = call("identity", "--morphism", made[src])
        made[f"idm_{src}"] = d / f"idm_{src}.json"
        made[f"idm_{src}"].write_text(text)
    made["dir"] = d
    return made


def test_every_subcommand_succeeds(files):
    f = files
    cases = [
        ("validate", f["string"]),
        ("homology", f["string"]),
        ("homology", f["twist"]),
        ("compose", f["id_sl2"], f["id_sl2"]),
        ("compose", f["idm_sl2"], f["idm_sl2"]),
        ("to-butterfly", f["idm_string"]),
        ("to-morphism", f["twist"]),
        ("identity", f["string"]),
        ("flip", f["twist"]),
        ("is-equiv", f["twist"]),
        ("hfib", f["twist"]),
        ("les", f["twist"]),
        ("cone-check", f["idm_string"]),
        ("find-2cell", f["id_string"], f["id_string"]),
        ("zigzag", f["twist"]),
        ("zigzag", "--part", "p_w", f["twist"]),
        ("der", "sl2"),
        ("ext2bfly", f["heis"]),
    ]
    for argv in cases:
        code, out, err = call(*argv)
        assert code == 0, (argv, err)
        assert out


def test_bfly2ext_round_trip(files, tmp_path):
    code, text, _ = call("ext2bfly", files["heis"])
    p = tmp_path / "b.json"
    p.write_text(text)
    code, text, err = call("bfly2ext", p)
    assert code == 0, err
    assert json.loads(text)["kind"] == "extension"


def test_output_is_deterministic(files):
    a = call("--json", "les", files["twist"])
    b = call("les", "--json", files["twist"])
    assert a == b
    report = json.loads(a[1])
    assert report["exact"] is True


def test_predicates_return_one(files, tmp_path):
    assert call("is-equiv", files["idm_sl2"])[0] == 0
    # the Heisenberg extension butterfly into Der(k) is not an equivalence
    code, text, _ = call("ext2bfly", files["heis"])
    p = tmp_path / "heis_b.json"
    p.write_text(text)
    assert call("is-equiv", p)[0] == 1
    assert call("flip", p)[0] == 1
    # mixing a butterfly with a morphism is a usage error; convert first
    assert call("find-2cell", files["id_sl2"], files["idm_sl2"])[0] == 2
    code, text, _ = call("to-butterfly", files["idm_sl2"])
    q = tmp_path / "converted.json"
    q.write_text(text)
    assert call("find-2cell", files["id_sl2"], q)[0] == 0
    assert call("find-2cell", files["id_h3"], files["id_sl2"])[0] == 2


def test_usage_and_format_errors(files, tmp_path):
    assert call()[0] == 2
    assert call("nonsense")[0] == 2
    assert call("validate", tmp_path / "none.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(files["sl2"].read_text().replace('"val": "-2"', '"val": "1/0"'))
    code, _, err = call("validate", bad)
    assert code == 2 and "$.b00.entries" in err
    code, _, err = call("compose", files["id_h3"], files["id_sl2"])
    assert code == 2 and "h3" in err and "sl2" in err


def test_invalid_document_exit_one(files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(files["sl2"].read_text().replace('"val": "-2"', '"val": "-7"'))
    code, out, _ = call("validate", bad)
    assert code == 1 and "jacobiator_boundary" in out
    code, out, _ = call("--json", "validate", bad)
    assert json.loads(out)["valid"] is False


def test_stdin_and_field_flag(files):
    code, _, _ = call("validate", "-", stdin=files["string"].read_text())
    assert code == 0
    code, text, _ = call("--field", "fp:3", "gen", "lie", "sl2")
    assert code == 0 and json.loads(text)["field"] == "fp:3"
    assert call("--field", "fp:3", "validate", files["sl2"])[0] == 2
    assert call("--field", "fp:6", "gen", "lie", "sl2")[0] == 2


def test_golden_files_validate():
    for p in sorted(GOLDEN.glob("*.json")):
        assert call("validate", p)[0] == 0, p.name

