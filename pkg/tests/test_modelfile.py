"""The strict JSON dialect: parsing, serialization, digests."""

import json
from fractions import Fraction as F

import pytest

import causaldp as c
from causaldp.modelfile import (
    canonical_json,
    input_digest,
    load_strict_json,
    parse_text,
    parse_value,
    serialize_input,
    witness_from_json,
)

RR_BUILTIN = """
{"type": "kernel", "builtin": "randomized_response", "n": 2, "bias": "2/3"}
"""

EXTENSIONAL_COIN = """
{
  "type": "kernel",
  "n": 1,
  "data_domain": [0, 1],
  "null_value": 0,
  "output_domain": ["h", "t"],
  "table": [
    [[0], [["h", "1/2"], ["t", "1/2"]]],
    [[1], [["h", "1/2"], ["t", "1/2"]]]
  ]
}
"""


# --- rational strictness ---------------------------------------------------------


def test_decimal_string_rejected_with_guidance():
    with pytest.raises(c.ParseError) as exc:
        parse_text(RR_BUILTIN.replace('"2/3"', '"0.5"'))
    assert "1/2" in str(exc.value)


def test_float_literal_rejected():
    with pytest.raises(c.ParseError) as exc:
        parse_text(RR_BUILTIN.replace('"2/3"', "0.5"))
    assert "float literal" in str(exc.value)


def test_nan_and_infinity_literals_rejected():
    for literal in ("NaN", "Infinity", "-Infinity"):
        with pytest.raises(c.ParseError):
            load_strict_json(f'{{"x": {literal}}}')


def test_malformed_json_is_parse_error():
    with pytest.raises(c.ParseError):
        parse_text("{not json")


def test_integer_weight_rejected_as_rational():
    with pytest.raises(c.ParseError) as exc:
        parse_text(RR_BUILTIN.replace('"2/3"', "1"))
    assert 'rational string like "1/2"' in str(exc.value)


# --- value strictness ------------------------------------------------------------


def test_bool_rejected_as_value():
    bad = EXTENSIONAL_COIN.replace('"null_value": 0', '"null_value": true')
    with pytest.raises(c.ValidationError) as exc:
        parse_text(bad)
    assert "bool" in str(exc.value)


def test_object_rejected_as_value():
    bad = EXTENSIONAL_COIN.replace('"null_value": 0', '"null_value": {"a": 1}')
    with pytest.raises(c.ValidationError):
        parse_text(bad)


def test_nested_arrays_become_tuples():
    assert parse_value("[1, [2, 3], \"x\"]") == (1, (2, 3), "x")
    assert parse_value('"7/2"') == "7/2"  # strings stay strings in value position


def test_unknown_key_rejected():
    bad = RR_BUILTIN.replace('"n": 2', '"n": 2, "extra": 1')
    with pytest.raises(c.ValidationError) as exc:
        parse_text(bad)
    assert "extra" in str(exc.value)


def test_missing_key_rejected():
    bad = '{"type": "kernel", "builtin": "randomized_response", "n": 2}'
    with pytest.raises(c.ValidationError) as exc:
        parse_text(bad)
    assert "bias" in str(exc.value)


def test_duplicate_table_rows_rejected():
    dup = EXTENSIONAL_COIN.replace(
        '[[1], [["h", "1/2"], ["t", "1/2"]]]',
        '[[0], [["h", "1/2"], ["t", "1/2"]]]',
    )
    with pytest.raises(c.ValidationError) as exc:
        parse_text(dup)
    assert "duplicate" in str(exc.value)


def test_row_sum_error_carries_location():
    bad = EXTENSIONAL_COIN.replace('["t", "1/2"]', '["t", "1/3"]')
    with pytest.raises(c.ValidationError) as exc:
        parse_text(bad)
    assert exc.value.location.startswith("kernel")


def test_unknown_type_tag_rejected():
    with pytest.raises(c.ValidationError):
        parse_text('{"type": "mystery"}')


# --- builtins and round-trips ------------------------------------------------------


def test_builtin_rr_expands_to_real_kernel():
    k = parse_text(RR_BUILTIN)
    assert k == c.randomized_response_kernel(2, F(2, 3))


def test_builtin_geo_expands():
    k = parse_text('{"type": "kernel", "builtin": "geometric_count", "n": 3, '
                   '"ratio": "1/2"}')
    assert k == c.geometric_count_kernel(3, F(1, 2))


def test_builtin_hiding_kernels_expand():
    assert parse_text('{"type": "kernel", "builtin": "hidden_pair"}') == \
        c.hidden_pair_kernel()
    assert parse_text('{"type": "kernel", "builtin": "hidden_value"}') == \
        c.hidden_value_kernel()


def test_serialize_then_parse_is_identity_for_kernels():
    for k in (
        c.randomized_response_kernel(2, F(2, 3)),
        c.geometric_count_kernel(2, F(1, 2)),
        c.hidden_pair_kernel(),
        parse_text(EXTENSIONAL_COIN),
    ):
        blob = canonical_json(serialize_input(k))
        assert parse_text(blob) == k


def test_builtin_and_extensional_forms_share_digest():
    # the digest is over the canonical serialization, which always expands
    built = parse_text(RR_BUILTIN)
    blob = canonical_json(serialize_input(built))
    reparsed = parse_text(blob)
    assert input_digest(built) == input_digest(reparsed)
    assert input_digest(built).startswith("sha256:")


def test_frozen_digests_for_bundled_kernels():
    rr = c.randomized_response_kernel(2, F(2, 3))
    hp = c.hidden_pair_kernel()
    assert input_digest(rr) == \
        "sha256:980d12f78a0750c260403574b84f3cbaa2de57e652f8b38e9435b7acd578eb70"
    assert input_digest(hp) == \
        "sha256:10737c850229096d78fce5b87064bfa6f8c294c00e4a3582b894ad80e58c8428"


def test_distribution_round_trip():
    d = c.Dist(("R_1", "R_2"), {(0, 1): F(1, 3), (1, 0): F(2, 3)})
    blob = canonical_json(serialize_input(d))
    assert parse_text(blob) == d


def test_sem_round_trip_preserves_declared_order():
    eq = c.StochasticEquation("Y", ("X",), {(0,): {0: F(1, 2), 1: F(1, 2)},
                                            (1,): {1: F(1)}})
    sem = c.Sem(("X", "Y"), {"X": (0, 1), "Y": (0, 1)}, {"Y": eq})
    blob = canonical_json(serialize_input(sem))
    back = parse_text(blob)
    assert back == sem
    assert back.names == ("X", "Y")


def test_canonical_model_round_trip_with_population():
    k = c.geometric_count_kernel(2, F(1, 2))
    attr = (c.copy_equation("R_2", "R_1", k.data_domain),)
    pop = c.Dist(("R_1",), {(c.POS,): F(1, 2), (c.NEG,): F(1, 2)})
    model = c.CanonicalModel(k, attr, pop)
    blob = canonical_json(serialize_input(model))
    back = parse_text(blob)
    assert back == model


def test_canonical_model_omits_empty_parts():
    model = c.CanonicalModel(c.hidden_value_kernel(), (), None)
    blob = serialize_input(model)
    assert "population" not in blob
    assert "attribute_equations" not in blob


def test_composition_round_trip():
    spec = parse_text(COMPOSITION_TEXT)
    blob = canonical_json(serialize_input(spec))
    assert parse_text(blob) == spec


COMPOSITION_TEXT = """
{
  "type": "composition",
  "x": "X", "y1": "Y1", "y2": "Y2",
  "ratio1": "2/1", "ratio2": "2/1",
  "first": {
    "type": "sem",
    "variables": [["X", [0, 1]], ["Y1", [0, 1]]],
    "equations": [
      {"target": "Y1", "parents": ["X"],
       "rows": [[[0], [[0, "2/3"], [1, "1/3"]]],
                [[1], [[0, "1/3"], [1, "2/3"]]]]}
    ]
  },
  "second": {
    "type": "sem",
    "variables": [["X", [0, 1]], ["Y1", [0, 1]], ["Y2", [0, 1, 2]]],
    "equations": [
      {"target": "Y2", "parents": ["X", "Y1"],
       "rows": [[[0, 0], [[0, "1/1"]]],
                [[0, 1], [[1, "1/1"]]],
                [[1, 0], [[1, "1/1"]]],
                [[1, 1], [[2, "1/1"]]]]}
    ]
  }
}
"""


# --- canonical form and digests -------------------------------------------------------


def test_canonical_json_is_stable_and_newline_terminated():
    obj = {"b": 1, "a": [1, 2], "nested": {"z": "x", "y": "w"}}
    once = canonical_json(obj)
    again = canonical_json(json.loads(once))
    assert once == again
    assert once.endswith("\n")
    assert once.index('"a"') < once.index('"b"')


def test_canonical_json_keeps_unicode_readable():
    assert "é" in canonical_json({"name": "é"})


def test_witness_from_json_restores_tuples():
    w = witness_from_json({"i": 1, "d": [0, 1], "d_prime_i": 1, "o": [1, 0]})
    assert w == {"i": 1, "d": (0, 1), "d_prime_i": 1, "o": (1, 0)}


def test_report_to_json_shape():
    k = c.randomized_response_kernel(1, F(2, 3))
    rep = c.run_check(c.DefinitionId.CLASSIC, k, target_ratio=F(2))
    blob = c.modelfile.report_to_json(rep, input_digest(k))
    assert blob["type"] == "check_report"
    assert blob["definition"] == "classic"
    assert blob["achieved"] == "2/1"
    assert blob["passed"] is True
    assert blob["tool_version"] == c.modelfile.TOOL_VERSION
    assert blob["input_digest"].startswith("sha256:")
    assert blob["epsilon_achieved"] == "0.6931"
    assert blob["epsilon_target"] == "0.6931"
    json.dumps(blob)  # must be plain JSON types throughout


def test_infinite_ratio_serializes_as_inf_string():
    k = c.hidden_value_kernel()
    rep = c.run_check(c.DefinitionId.CLASSIC, k, target_ratio=F(2))
    blob = c.modelfile.report_to_json(rep)
    assert blob["achieved"] == "inf"
    assert blob["passed"] is False
