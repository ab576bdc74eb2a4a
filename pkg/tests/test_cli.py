"""Command-line layer: both expression grammars, canonical output,
and exit-code policy.

Golden outputs below were captured from the library calls the commands
wrap and then frozen byte-for-byte; the CLI is a thin adapter, so any
drift in these bytes is a real interface change.
"""
import json
from fractions import Fraction

import pytest

from ellcob.cli import main, parse_functional, parse_manifold
from ellcob.cobordism import Partition, genus_as_functional
from ellcob.errors import ConsistencyError, FunctionalParseError
from ellcob.genera import ahat, signature

F = Fraction


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFunctionalGrammar:
    def test_single_monomial(self):
        f = parse_functional("p3", 12)
        assert f.coefficients == {Partition((3,)): F(1)}

    def test_rational_prefix_and_products(self):
        f = parse_functional("45*p1*p2 - 1/3 * p1^3", 12)
        assert f.coefficients == {
            Partition((2, 1)): F(45),
            Partition((1, 1, 1)): F(-1, 3),
        }

    def test_leading_minus(self):
        f = parse_functional("-p3", 12)
        assert f.coefficients == {Partition((3,)): F(-1)}

    def test_whitespace_insignificant(self):
        assert (
            parse_functional("  2 * p1 ^ 3+p3", 12).coefficients
            == parse_functional("2*p1^3 + p3", 12).coefficients
        )

    def test_named_genera_resolve(self):
        assert (
            parse_functional("sign", 12).as_row()
            == genus_as_functional(signature, 12).as_row()
        )
        assert (
            parse_functional("ell[0]", 12).as_row()
            == genus_as_functional(ahat, 12).as_row()
        )

    def test_mixed_expression(self):
        f = parse_functional("sign - 45*p1*p2", 12)
        assert f.coefficients[Partition((2, 1))] == F(-13, 945) - 45

    def test_terms_accumulate(self):
        f = parse_functional("p3 + p3 - 2*p3", 12)
        assert f.coefficients == {}

    def test_weight_mismatch_message_and_position(self):
        with pytest.raises(FunctionalParseError, match="weight 2.*needs 3"):
            parse_functional("p1^2", 12)
        try:
            parse_functional("p3 + p1^2", 12)
        except FunctionalParseError as exc:
            assert exc.position == 5
        else:
            pytest.fail("expected a parse error")

    def test_genus_must_stand_alone(self):
        with pytest.raises(FunctionalParseError, match="stand alone"):
            parse_functional("sign*p1", 4)

    def test_unknown_atom_position(self):
        try:
            parse_functional("p1 + junk", 4)
        except FunctionalParseError as exc:
            assert exc.position == 5
        else:
            pytest.fail("expected a parse error")

    def test_dangling_operator(self):
        with pytest.raises(FunctionalParseError):
            parse_functional("p1 +", 4)

    def test_zero_denominator(self):
        with pytest.raises(FunctionalParseError):
            parse_functional("1/0*p1", 4)

    def test_bad_dimension(self):
        with pytest.raises(FunctionalParseError):
            parse_functional("p1", 6)

    def test_span_output_round_trips(self):
        from ellcob.cobordism import elliptic_span

        span, _ = elliptic_span(12, 3)
        for f in span:
            again = parse_functional(f.to_expression(), 12)
            assert again.as_row() == f.as_row()


class TestManifoldGrammar:
    def test_descriptors(self):
        for text, dim in [
            ("cp:3", 6),
            ("hp:2", 8),
            ("pb:3:[2,0,0,0]", 12),
            ("prod(cp:2,cp:2)", 8),
            ("prod(X12:c=2, hp:2)", 20),
            ("X12:c=2", 12),
            ("Y16:c=-1", 16),
            ("Z20:c=4", 20),
            ("X12xHP:2:c=2", 20),
        ]:
            m, _ = parse_manifold(text)
            assert m.real_dimension == dim, text

    def test_spin_parity_warnings(self):
        _, warnings = parse_manifold("X12:c=3")
        assert warnings and "not spin" in warnings[0]
        _, warnings = parse_manifold("Y16:c=3")
        assert not warnings
        _, warnings = parse_manifold("Z20:c=1")
        assert warnings
        _, warnings = parse_manifold("X12xHP:2:c=1")
        assert warnings

    def test_nested_products(self):
        m, _ = parse_manifold("prod(prod(cp:2,cp:2),cp:2)")
        assert m.real_dimension == 12

    def test_garbage_rejected(self):
        for text in ("nonsense", "cp:", "pb:3:[", "prod(cp:2", "cp:2 extra"):
            with pytest.raises(FunctionalParseError):
                parse_manifold(text)


GOLDEN_PONTRYAGIN = (
    '{\n  "dimension": 12,\n  "manifold": "pb:3:[2,0,0,0]",\n  "values": {\n'
    '    "p1*p2": "-48",\n    "p1^3": "-64",\n    "p3": "-8"\n  }\n}\n'
)

GOLDEN_ELLIPTIC = (
    '{\n  "coefficients": [\n    "0",\n    "0",\n    "0",\n    "0"\n  ],\n'
    '  "dimension": 12,\n  "manifold": "pb:3:[2,0,0,0]",\n'
    '  "normalization": "coefficients of q^(k/2)*phi, k = dim/4",\n  "q_order": 3\n}\n'
)

GOLDEN_MEMBER = (
    '{\n  "dimension": 12,\n  "functional": {\n    "coefficients": {\n'
    '      "p3": "1"\n    },\n    "expression": "p3"\n  },\n  "in_span": false,\n'
    '  "q_order": 3,\n  "span_rank": 2,\n  "verdict": "not-in-span"\n}\n'
)

GOLDEN_SPIN = '{\n  "manifold": "hp:2",\n  "spin": true\n}\n'

GOLDEN_GENUS = (
    '{\n  "dimension": 4,\n  "genus": "ahat",\n  "manifold": "cp:2",\n'
    '  "value": "-1/8"\n}\n'
)


class TestGoldenOutputs:
    def test_pontryagin(self, capsys):
        code, out, _ = run(capsys, ["pontryagin", "--manifold", "X12:c=2"])
        assert code == 0 and out == GOLDEN_PONTRYAGIN

    def test_elliptic(self, capsys):
        code, out, _ = run(capsys, ["elliptic", "--manifold", "X12:c=2", "--q-order", "3"])
        assert code == 0 and out == GOLDEN_ELLIPTIC

    def test_member(self, capsys):
        code, out, _ = run(capsys, ["member", "--dim", "12", "-f", "p3"])
        assert code == 0 and out == GOLDEN_MEMBER

    def test_spin(self, capsys):
        code, out, _ = run(capsys, ["spin", "--manifold", "hp:2"])
        assert code == 0 and out == GOLDEN_SPIN

    def test_genus(self, capsys):
        code, out, _ = run(capsys, ["genus", "--manifold", "cp:2", "--which", "ahat"])
        assert code == 0 and out == GOLDEN_GENUS

    def test_byte_identical_repeat(self, capsys):
        _, first, _ = run(capsys, ["span", "--dim", "12", "--q-order", "2"])
        _, second, _ = run(capsys, ["span", "--dim", "12", "--q-order", "2"])
        assert first == second

    def test_pontryagin_csv(self, capsys):
        code, out, _ = run(capsys, ["pontryagin", "--manifold", "X12:c=2", "--csv"])
        assert code == 0 and out == "p1^3,p1*p2,p3\n-64,-48,-8\n"

    def test_elliptic_csv(self, capsys):
        code, out, _ = run(
            capsys, ["elliptic", "--manifold", "hp:1", "--q-order", "1", "--csv"]
        )
        assert code == 0 and out.splitlines()[0] == "q^0,q^1"

    def test_scan_csv(self, capsys):
        code, out, _ = run(
            capsys, ["scan", "--family", "X12", "-f", "p3", "--range", "1..2", "--csv"]
        )
        assert code == 0 and out == "c,value\n1,-8\n2,-64\n"


class TestCommandBehaviour:
    def test_verdict_unbounded(self, capsys):
        code, out, _ = run(capsys, ["verdict", "--dim", "12", "-f", "p3"])
        payload = json.loads(out)
        assert code == 0
        assert payload["verdict"] == "unbounded"
        assert payload["witness"] == "X12"
        assert payload["witness_polynomial"] == ["0", "0", "0", "-8"]
        assert payload["families"]["X12"]["substitution"] == "c -> 2c (spin)"

    def test_verdict_bounded(self, capsys):
        code, out, _ = run(capsys, ["verdict", "--dim", "12", "-f", "sign"])
        payload = json.loads(out)
        assert code == 0 and payload["verdict"] == "bounded_on_families"
        assert payload["witness"] is None

    def test_member_in_span(self, capsys):
        code, out, _ = run(capsys, ["member", "--dim", "12", "--f", "sign"])
        payload = json.loads(out)
        assert code == 0 and payload["verdict"] == "in-span"

    def test_member_not_in_span_dim16(self, capsys):
        code, out, _ = run(capsys, ["member", "--dim", "16", "-f", "p1^4"])
        payload = json.loads(out)
        assert code == 0 and payload["verdict"] == "not-in-span"

    def test_span_rank(self, capsys):
        code, out, _ = run(capsys, ["span", "--dim", "16", "--q-order", "4"])
        payload = json.loads(out)
        assert code == 0 and payload["rank"] == 3
        assert len(payload["functionals"]) == 5

    def test_scan_values_and_polynomial(self, capsys):
        code, out, _ = run(
            capsys, ["scan", "--family", "Y16", "--f", "p4", "--range", "1..3"]
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["polynomial"] == ["0", "0", "0", "288"]
        assert payload["polynomial_string"] == "288*c^3"
        assert payload["values"] == [
            {"c": 1, "value": "288"},
            {"c": 2, "value": "2304"},
            {"c": 3, "value": "7776"},
        ]

    def test_distinct(self, capsys):
        code, out, _ = run(capsys, ["distinct", "--family", "X12", "--range", "1..4"])
        payload = json.loads(out)
        assert code == 0 and payload["distinct"] is True
        assert payload["collisions"] == []
        assert {"pair": [1, 2], "partition": "p1^3"} in payload["separators"]

    def test_warning_goes_to_stderr(self, capsys):
        code, out, err = run(capsys, ["spin", "--manifold", "X12:c=3"])
        assert code == 0 and "not spin" in err and "not spin" not in out

    def test_quiet_suppresses_warning(self, capsys):
        _, _, err = run(capsys, ["spin", "--manifold", "X12:c=3", "--quiet"])
        assert err == ""


class TestExitCodes:
    def test_parse_error_is_2(self, capsys):
        code, _, err = run(capsys, ["member", "--dim", "12", "-f", "p1^2"])
        assert code == 2 and "weight" in err

    def test_bad_manifold_is_2(self, capsys):
        code, _, err = run(capsys, ["pontryagin", "--manifold", "bogus"])
        assert code == 2 and "descriptor" in err

    def test_validation_error_is_2(self, capsys):
        # dimension 6 has no Pontryagin numbers
        code, _, err = run(capsys, ["pontryagin", "--manifold", "cp:3"])
        assert code == 2

    def test_bad_range_is_2(self, capsys):
        code, _, _ = run(capsys, ["scan", "--family", "X12", "-f", "p3", "--range", "5"])
        assert code == 2

    def test_unknown_family_is_2(self, capsys):
        code, _, _ = run(capsys, ["distinct", "--family", "W24", "--range", "1..2"])
        assert code == 2

    def test_argparse_error_is_2(self, capsys):
        code, _, _ = run(capsys, ["no-such-command"])
        assert code == 2

    def test_help_is_0(self, capsys):
        code, _, _ = run(capsys, ["--help"])
        assert code == 0

    def test_consistency_error_is_3(self, capsys, monkeypatch):
        def boom(_):
            raise ConsistencyError("pipelines disagreed")

        monkeypatch.setattr("ellcob.cli.pontryagin_numbers", boom)
        code, _, err = run(capsys, ["pontryagin", "--manifold", "cp:2"])
        assert code == 3 and "consistency" in err
