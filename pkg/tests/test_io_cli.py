import json

import numpy as np
import pytest

from qbec import io as qio
from qbec.channels import KrausChannel, choi, identity_channel, random_channel
from qbec.cli import main
from qbec.errors import ParseError
from qbec.examples import channel_alpha, rho_a, sigma_alpha
from qbec.states import BipartiteState, max_entangled, product_state, random_state, swap


def test_state_round_trip_is_bit_exact():
    rho = random_state(2, 3, 4, seed=0).rho.copy()
    rho[0, 1] = complex(-0.0, rho[0, 1].imag)
    rho[1, 0] = complex(-0.0, -rho[0, 1].imag)
    s = BipartiteState(rho, 2, 3)
    back = qio.loads(qio.dumps(s))
    assert back.dims == (2, 3)
    assert np.array_equal(back.rho.view(np.float64), s.rho.view(np.float64))
    assert np.signbit(back.rho[0, 1].real)


def test_channel_round_trip_is_bit_exact(tmp_path):
    ch = random_channel(3, 2, 4, seed=1)
    path = tmp_path / "ch.json"
    qio.write(path, ch)
    back = qio.read(path)
    assert (back.dim_in, back.dim_out) == (3, 2)
    for a, b in zip(back.kraus, ch.kraus):
        assert np.array_equal(a.view(np.float64), b.view(np.float64))


def test_seventeen_significant_digits():
    assert qio.format_number(0.1) == "0.10000000000000001"
    assert qio.format_number(-0.0) == "-0.0"
    assert qio.format_number(2.0) == "2.0"
    assert float(qio.format_number(1 / 3)) == 1 / 3


def test_file_layout():
    doc = json.loads(qio.dumps(max_entangled(2)))
    assert doc["kind"] == "state"
    assert (doc["dim_a"], doc["dim_b"]) == (2, 2)
    assert doc["matrix"][0][3] == pytest.approx([0.5, 0.0], abs=1e-15)
    doc = json.loads(qio.dumps(identity_channel(2)))
    assert doc["kind"] == "channel"
    assert doc["kraus"] == [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]]


@pytest.mark.parametrize(
    "text, field",
    [
        ("not json", "<document>"),
        ("[1, 2]", "<document>"),
        ('{"kind": "thing"}', "kind"),
        ('{"kind": "state", "dim_b": 1, "matrix": [[[1, 0]]]}', "dim_a"),
        ('{"kind": "state", "dim_a": 0, "dim_b": 1, "matrix": [[[1, 0]]]}', "dim_a"),
        ('{"kind": "state", "dim_a": 1, "dim_b": 1}', "matrix"),
        ('{"kind": "state", "dim_a": 1, "dim_b": 2, "matrix": [[[1, 0]]]}', "matrix"),
        ('{"kind": "state", "dim_a": 1, "dim_b": 1, "matrix": [[1]]}', "matrix"),
        ('{"kind": "state", "dim_a": 1, "dim_b": 1, "matrix": [[["x", 0]]]}', "matrix"),
        ('{"kind": "channel", "dim_in": 1, "dim_out": 1, "kraus": []}', "kraus"),
        ('{"kind": "channel", "dim_in": 1, "dim_out": 1, "kraus": [[[[1, 0]], [[0, 0]]]]}', "kraus"),
    ],
)
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(ParseError) as exc:
        qio.loads(text)
    assert exc.value.field == field
    assert f"'{field}'" in str(exc.value)


def write_state(tmp_path, state, name="s.json"):
    path = tmp_path / name
    qio.write(path, state)
    return str(path)


def test_cli_analyze_max_entangled(tmp_path, capsys):
    path = write_state(tmp_path, max_entangled(3))
    assert main(["analyze", path, "--json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["verdict"] == "NPT"
    assert rec["negativity"] == pytest.approx(1, abs=1e-10)
    assert rec["realignment_value"] == pytest.approx(3, abs=1e-10)


def test_cli_analyze_human_table(tmp_path, capsys):
    path = write_state(tmp_path, sigma_alpha(3.5))
    assert main(["analyze", path]) == 0
    out = capsys.readouterr().out
    assert "verdict" in out and "negativity" in out
    assert "PPT" in out


def test_cli_analyze_unequal_dims(tmp_path, capsys):
    path = write_state(tmp_path, random_state(2, 3, 6, seed=2))
    assert main(["analyze", path, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["realignment_value"] is None


def test_cli_malformed_file_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "state", "dim_a": 2}')
    assert main(["analyze", str(path)]) == 2
    assert "dim_b" in capsys.readouterr().err
    assert main(["analyze", str(tmp_path / "missing.json")]) == 2


def test_cli_wrong_kind_exits_2(tmp_path, capsys):
    path = tmp_path / "ch.json"
    qio.write(path, identity_channel(2))
    assert main(["analyze", str(path)]) == 2
    assert "kind" in capsys.readouterr().err


def test_cli_invalid_state_exits_1(tmp_path, capsys):
    path = write_state(tmp_path, BipartiteState(2 * np.eye(4) / 4, 2, 2))
    assert main(["analyze", path]) == 1
    assert "trace" in capsys.readouterr().err


def test_cli_state_to_channel_rho_a(tmp_path, capsys):
    src = write_state(tmp_path, rho_a(0.5))
    out = tmp_path / "ch.json"
    assert main(["state-to-channel", src, "-o", str(out), "--json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["tp"] and rec["cp"]
    assert rec["tp_defect"] <= 1e-10
    assert rec["choi_error"] <= 1e-10
    ch = qio.read(out)
    assert ch.tp_defect <= 1e-10


def test_cli_state_to_channel_side_b(tmp_path, capsys):
    src = write_state(tmp_path, sigma_alpha(3.5))
    out = tmp_path / "ch.json"
    assert main(["state-to-channel", src, "--side", "B", "-o", str(out), "--json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["side"] == "B"
    np.testing.assert_allclose(choi(qio.read(out)).rho, swap(sigma_alpha(3.5)).rho, atol=1e-12)


def test_cli_state_to_channel_product_warns(tmp_path, capsys):
    e0 = np.diag([1.0, 0.0, 0.0])
    src = write_state(tmp_path, product_state(e0, e0))
    out = tmp_path / "ch.json"
    assert main(["state-to-channel", src, "-o", str(out), "--json"]) == 0
    captured = capsys.readouterr()
    assert "warning:" in captured.err
    rec = json.loads(captured.out)
    assert rec["rank"] == 1 and rec["dim_in"] == 1


def test_cli_channel_to_state(tmp_path, capsys):
    src = tmp_path / "ch.json"
    qio.write(src, channel_alpha(3.5))
    out = tmp_path / "s.json"
    assert main(["channel-to-state", str(src), "-o", str(out)]) == 0
    assert capsys.readouterr().err == ""
    np.testing.assert_allclose(qio.read(out).rho, sigma_alpha(3.5).rho, atol=1e-12)

    qio.write(src, identity_channel(2))
    assert main(["channel-to-state", str(src)]) == 0
    np.testing.assert_allclose(qio.loads(capsys.readouterr().out).rho, max_entangled(2).rho, atol=1e-15)


def test_cli_channel_to_state_warns_when_not_trace_preserving(tmp_path, capsys):
    src = tmp_path / "ch.json"
    qio.write(src, KrausChannel((np.diag([1.0, 0.0]),), 2, 2))
    assert main(["channel-to-state", str(src)]) == 0
    captured = capsys.readouterr()
    assert "not trace preserving" in captured.err
    assert qio.loads(captured.out).trace == pytest.approx(0.5)


def test_cli_example_objects(tmp_path, capsys):
    assert main(["example", "sigma-alpha", "3.5"]) == 0
    np.testing.assert_allclose(qio.loads(capsys.readouterr().out).rho, sigma_alpha(3.5).rho, atol=0)
    out = tmp_path / "ch.json"
    assert main(["example", "channel-a", "0.5", "-o", str(out)]) == 0
    assert qio.read(out).tp_defect < 1e-9
    assert main(["example", "sigma-alpha", "9"]) == 1
    assert "alpha" in capsys.readouterr().err


def test_cli_verify_paper(capsys):
    assert main(["verify-paper"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 8
    assert all(line.startswith("[PASS]") for line in lines)


def test_cli_verify_paper_impossible_tolerance(capsys):
    assert main(["verify-paper", "--tolerance", "1e-30"]) == 1
    captured = capsys.readouterr()
    assert "[FAIL]" in captured.out
    assert "failing checks" in captured.err


def test_cli_verify_paper_other_seed(capsys):
    assert main(["verify-paper", "--seed", "7"]) == 0


def test_cli_verify_paper_json_is_deterministic(capsys):
    assert main(["verify-paper", "--json"]) == 0
    first = capsys.readouterr().out
    assert main(["verify-paper", "--json"]) == 0
    assert capsys.readouterr().out == first
    assert all(row["passed"] for row in json.loads(first))


def test_cli_tolerance_env_and_flag(monkeypatch, capsys):
    monkeypatch.setenv("QBEC_TOLERANCE", "1e-30")
    assert main(["verify-paper"]) == 1
    capsys.readouterr()
    # an explicit flag wins over the environment
    assert main(["verify-paper", "--tolerance", "1e-9"]) == 0
    capsys.readouterr()
    monkeypatch.setenv("QBEC_TOLERANCE", "tiny")
    assert main(["verify-paper"]) == 2
