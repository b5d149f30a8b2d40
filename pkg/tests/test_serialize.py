import json

import pytest

from golden_corpus import GOLDEN, golden_texts
from lie2alg.butterfly import validate_butterfly
from lie2alg.corpus import make_family
from lie2alg.l2a import validate_l2a
from lie2alg.serialize import Document, FormatError, parse, serialize

GOLDEN_FILES = sorted(GOLDEN.glob("*.json"))


def test_golden_corpus_present():
    assert len(GOLDEN_FILES) >= 15
    assert {p.name for p in GOLDEN_FILES} == set(golden_texts())


@pytest.mark.parametrize("path", GOLDEN_FILES, ids=lambda p: p.stem)
def test_golden_round_trip_byte_identical(path):
    raw = path.read_bytes()
    doc = parse(raw.decode("utf-8"))
    assert serialize(doc).encode("utf-8") == raw


def test_generators_reproduce_golden():
    for name, text in golden_texts().items():
        assert (GOLDEN / name).read_text(encoding="utf-8") == text, name


def test_round_trip_preserves_structure(objects, butterflies):
    for x in list(objects) + list(butterflies):
        text = serialize(x)
        doc = parse(text)
        assert doc.value.same_as(x)
        assert serialize(doc) == text


def test_prime_field_document():
    doc = parse((GOLDEN / "family_lie_sl2_fp5.json").read_text())
    assert doc.field == "fp:5"
    # -2 is stored as 3 in F_5
    assert '"val": "3"' in serialize(doc)


def _doc(**overrides):
    data = json.loads(serialize(make_family("lie", "sl2")))
    data.update(overrides)
    return data


def _error(data) -> FormatError:
    with pytest.raises(FormatError) as info:
        parse(json.dumps(data))
    return info.value


def test_zero_denominator_names_field_path():
    data = _doc()
    data["b00"]["entries"][0]["val"] = "1/0"
    err = _error(data)
    assert err.path == "$.b00.entries[0].val"
    assert "1/0" in str(err)


@pytest.mark.parametrize("bad", ["2/4", "-0", "1.5", "+1"])
def test_non_canonical_scalars_rejected(bad):
    data = _doc()
    data["b00"]["entries"][1]["val"] = bad
    assert "bad scalar" in str(_error(data))


def test_unknown_and_missing_fields():
    err = _error(_doc(extra=1))
    assert "unknown field 'extra'" in str(err)
    data = _doc()
    del data["jac"]
    assert "missing field 'jac'" in str(_error(data))


def test_antisymmetric_index_order_enforced():
    data = _doc()
    data["b00"]["entries"][0]["idx"] = [1, 0, 2]
    err = _error(data)
    assert err.path == "$.b00.entries[0].idx"


def test_duplicate_and_out_of_range_indices():
    data = _doc()
    data["b00"]["entries"].append(dict(data["b00"]["entries"][0]))
    assert "duplicate" in str(_error(data))
    data = _doc()
    data["b00"]["entries"][0]["idx"] = [0, 1, 7]
    assert "out of range" in str(_error(data))


def test_json_syntax_error_has_position():
    with pytest.raises(FormatError) as info:
        parse('{\n  "kind": "l2a",\n  oops\n}')
    assert info.value.line == 3


def test_version_kind_and_field_checked():
    assert "format_version" in str(_error(_doc(format_version=2)))
    assert "unknown kind" in str(_error(_doc(kind="sheaf")))
    assert _error(_doc(field="fp:4")).path == "$.field"


def test_shape_mismatch():
    data = _doc()
    data["b00"]["shape"] = [3, 3, 2]
    assert _error(data).path == "$.b00.shape"


def test_parsed_invalid_structure_still_reports():
    data = _doc()
    # [e, h] = 7e breaks Jacobi ([e, f] = 5h alone would just rescale)
    data["b00"]["entries"][1]["val"] = "-7"
    doc = parse(json.dumps(data))
    assert isinstance(doc, Document)
    assert not validate_l2a(doc.value).valid


def test_butterfly_file_is_valid():
    doc = parse((GOLDEN / "butterfly_twisted_string.json").read_text())
    assert doc.kind == "butterfly"
    assert validate_butterfly(doc.value).valid
