from __future__ import annotations

import json

import numpy as np
import pytest

from quadstab.cli import UsageError, main, parse, parse_complex
from quadstab.cquiver import ColoredQuiver
from quadstab.ngon import NAngulation
from quadstab.polyspace import Params, Polynomial
from quadstab.serialize import dumps, matrix_from_json, period_vector_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,value", [("2", 2), ("-1.5", -1.5), ("1+2i", 1 + 2j), ("1-2.5i", 1 - 2.5j),
                                        ("3i", 3j), ("-i", -1j), ("i", 1j), ("1e-3-2e1i", 0.001 - 20j)])
def test_complex_grammar(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "1+", "i1", "1i2", "--1", "1+2", "1,5"])
def test_complex_grammar_rejects(text):
    with pytest.raises(UsageError):
        parse_complex(text)


def test_parse_examples():
    inv = parse(["classify", "--N", "4", "--coeffs", "-1"])
    assert inv.params == Params(4, 1) and inv.p == Polynomial([-1])
    inv = parse(["periods", "--N", "4", "--coeffs", "0,-1+0.5i"])
    assert inv.params.n == 2 and inv.p == Polynomial([0, -1 + 0.5j])
    inv = parse(["classify", "--N", "4", "--coeffs", "-1i"])
    assert inv.p == Polynomial([-1j])


@pytest.mark.parametrize("argv", [
    ["classify", "--N", "2", "--coeffs", "-1"],
    ["classify", "--N", "4", "--coeffs", "1+"],
    ["classify", "--N", "4", "--coeffs", "-1", "--n", "2"],
    ["frobnicate"],
    ["classify", "--N", "4"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--N", "4", "--n", "3")
    assert code == 0
    count, payload = out.split("\n", 1)
    assert count == "55"
    angs = [NAngulation.from_json(x) for x in json.loads(payload)]
    assert len({a.key() for a in angs}) == 55


def test_classify_and_round_trip(capsys):
    code, out, _ = run(capsys, "classify", "--N", "4", "--coeffs", "-1")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "HasSaddle(1)"
    code, out, _ = run(capsys, "classify", "--N", "3", "--coeffs", "-1")
    data = json.loads(out)
    assert NAngulation.from_json(data["angulation"]).params == Params(3, 1)


def test_angulate_and_mutate(capsys):
    code, out, _ = run(capsys, "angulate", "--N", "4", "--coeffs", "0,-1+0.5i")
    assert code == 0
    data = json.loads(out)
    assert dumps(NAngulation.from_json(data["angulation"])) == dumps(data["angulation"])
    assert dumps(ColoredQuiver.from_json(data["quiver"])) == dumps(data["quiver"])
    code, out, _ = run(capsys, "mutate", "--N", "4", "--n", "2", "--vertex", "1")
    data = json.loads(out)
    assert data["fv_map"] == [[-1, 1], [0, 1]]
    assert ColoredQuiver.from_json(data["mutated"]) == ColoredQuiver.from_arrows(
        Params(4, 2), [(1, 2, 1, 1), (2, 1, 1, 1)])


def test_periods_and_jacobian(capsys):
    code, out, _ = run(capsys, "periods", "--N", "4", "--coeffs", "0,-1+0.5i")
    assert code == 0
    vals = period_vector_from_json(json.loads(out)["standard"])
    assert np.all(vals.imag > 0)
    code, out, _ = run(capsys, "jacobian", "--N", "4", "--coeffs", "-1", "--chain")
    assert json.loads(out)["abs_det"] == pytest.approx(2.0, abs=1e-6)


def test_uncertified_exit_2(capsys):
    # z^2 - 1 with N = 4 sits on a wall: no chamber, so periods cannot be framed
    code, _, err = run(capsys, "periods", "--N", "4", "--coeffs", "-1")
    assert code == 2
    assert "uncertified" in err


def test_render_to_file(capsys, tmp_path):
    target = tmp_path / "out.svg"
    code, _, _ = run(capsys, "render", "--N", "4", "--coeffs", "-1", "-o", str(target))
    assert code == 0
    text = target.read_text()
    assert text.count('class="saddle"') == 1
    assert text.count('class="separating"') == 6
    assert text.count('class="tick"') == 6


def test_monodromy_walk(capsys):
    code, out, _ = run(capsys, "monodromy", "--N", "4", "--coeffs", "-0.9969173337331-0.0784590957278i,0",
                       "--vertex", "1")
    assert code == 0
    data = json.loads(out)
    assert data["agrees"] and data["walk"] == [[-1, 1], [0, 1]]


def test_wallcross(capsys):
    code, out, _ = run(capsys, "wallcross", "--N", "4", "--coeffs", "-1", "--grid", "0.1,0.05,0.01")
    assert code == 0
    data = json.loads(out)
    assert data["monotone"] and all(r["rotation_ok"] for r in data["rows"])
    code, _, err = run(capsys, "wallcross", "--N", "4", "--coeffs", "-1i")
    assert code == 1 and "saddle" in err


def test_walk_command(capsys, tmp_path):
    P = Params(4, 1)
    samples = [Polynomial([complex(np.exp(1j * np.pi * s))]) for s in np.linspace(0.05, 0.95, 9)]
    path = tmp_path / "path.json"
    path.write_text(json.dumps({"samples": [s.to_json() for s in samples]}))
    code, out, _ = run(capsys, "walk", "--N", "4", "--path", str(path))
    assert code == 0
    data = json.loads(out)
    assert len(data["events"]) == 1
    assert matrix_from_json(data["composite"]).tolist() == [[-1]]
    code, _, _ = run(capsys, "walk", "--N", "4", "--path", str(tmp_path / "missing.json"))
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["roots", "--N", "4", "--coeffs", "0,-1+0.5i"],
    ["graph", "--N", "4", "--n", "2"],
    ["periods", "--N", "3", "--coeffs", "0.2,-1+0.5i"],
])
def test_deterministic_output(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert dumps(json.loads(first)) == first.strip()


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0
    assert len(out.strip().splitlines()) == 5
