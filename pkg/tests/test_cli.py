"""Command-line surface: schemas, determinism, exit codes."""

import json

import pytest

from quantumhouse import cli, jsonio
from quantumhouse import states as S

# Verb invocations whose JSON output must parse into the documented shape.
JSON_CASES = [
    (["state", "--state", "epr", "--format", "json"], {"dims", "re", "im", "id"}),
    (
        ["discord", "--state", "eq1", "--format", "json"],
        {"zero_discord", "witness_basis", "certificate", "diagnostics"},
    ),
    (["classify", "--state", "maxmix4", "--format", "json"], {"class"}),
    (
        ["witness", "--state", "classical-corr", "--format", "json"],
        {"class", "witness", "delta_ab", "delta_a"},
    ),
    (
        ["verify", "--state", "eq1", "--op", "x", "--format", "json"],
        {"operation", "delta_ab", "delta_a", "delta_b"},
    ),
    (
        ["sweep", "--state", "zero-maxmix", "--trials", "50", "--seed", "3", "--format", "json"],
        {"trials", "violations", "max_delta_ab_unnoticed", "examples"},
    ),
    (
        ["demo", "spinq", "--eta", "1e-5", "--format", "json"],
        {"eta", "gate_noise", "ideal", "noisy", "deltas"},
    ),
    (["examples", "verify", "--format", "json"], {"results", "all_pass"}),
    (
        ["game", "exact", "--flavor", "quantum-eq2", "--strategy", "join-bob", "--format", "json"],
        {"flavor", "strategy", "score", "score_exact"},
    ),
    (
        [
            "game", "simulate", "--flavor", "quantum-eq2", "--strategy", "random-guess",
            "--rounds", "500", "--seed", "6", "--format", "json",
        ],
        {
            "flavor", "strategy", "rounds", "seed", "mean_finite", "stderr_mean",
            "catch_rate", "stderr_catch", "caught", "finite_rounds",
        },
    ),
]


@pytest.mark.parametrize("argv,keys", JSON_CASES, ids=lambda case: " ".join(case[:3]) if isinstance(case, list) else "")
def test_json_output_round_trips(argv, keys, capsys):
    code = cli.run(argv)
    assert code in (0, 1)
    payload = json.loads(capsys.readouterr().out)
    assert keys <= set(payload)


@pytest.mark.parametrize("argv,_", JSON_CASES)
def test_byte_identical_reruns(argv, _, capsys):
    cli.run(argv)
    first = capsys.readouterr().out
    cli.run(argv)
    second = capsys.readouterr().out
    assert first == second


def test_state_json_parses_back_as_density(capsys):
    cli.run(["state", "--state", "eq3", "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    dm = jsonio.density_from_json(payload)
    assert dm.dims == (2, 2)


def test_discord_exit_codes(capsys):
    assert cli.run(["discord", "--state", "eq1"]) == 0
    capsys.readouterr()
    assert cli.run(["discord", "--state", "epr"]) == 1
    capsys.readouterr()
    assert cli.run(["discord", "--state", "nonsense"]) == 2


def test_file_input_and_no_validate(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(jsonio.dumps(S.make("classical-corr")))
    assert cli.run(["classify", "--file", str(path)]) == 0
    out = capsys.readouterr().out
    assert "non-product" in out

    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps({"dims": [2], "re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]})
    )
    assert cli.run(["state", "--file", str(bad)]) == 2
    capsys.readouterr()
    assert cli.run(["state", "--file", str(bad), "--no-validate"]) == 0


def test_examples_verify_prints_nine_pass_lines(capsys):
    assert cli.run(["examples", "verify"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    assert len(lines) == 9
    assert all("PASS" in l for l in lines)


def test_demo_structure(capsys):
    cli.run(["demo", "spinq", "--eta", "1e-5", "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    ideal = payload["ideal"]["bell"]["re"]
    assert ideal[0][0] == 0.5 and ideal[0][3] == 0.5 and ideal[3][0] == 0.5 and ideal[3][3] == 0.5
    after = payload["ideal"]["after_flip"]["re"]
    assert after[1][1] == 0.5 and after[1][2] == 0.5 and after[2][1] == 0.5
    assert payload["deltas"]["noisy_a"] < 1e-12


def test_game_exact_negative_infinity(capsys):
    cli.run(["game", "exact", "--strategy", "tamper-computational", "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["score"] == "-inf"


def test_game_simulate_transcript_export(tmp_path, capsys):
    out = tmp_path / "rounds.jsonl"
    code = cli.run(
        [
            "game", "simulate", "--strategy", "join-bob", "--rounds", "40",
            "--seed", "2", "--transcripts", str(out), "--format", "json",
        ]
    )
    assert code == 0
    capsys.readouterr()
    lines = [json.loads(l) for l in out.read_text().strip().splitlines()]
    assert len(lines) == 40
    assert all(l["asked_bob"] for l in lines)
    assert all(l["score"] in (0, 90) for l in lines)


def test_verify_operation_variants(capsys):
    assert cli.run(["verify", "--state", "epr", "--measure", "computational", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert abs(payload["delta_ab"] - 0.5) < 1e-9
    assert payload["delta_a"] < 1e-9

    assert cli.run(["verify", "--state", "classical-corr", "--swap-fresh", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert abs(payload["delta_ab"] - 0.5) < 1e-9
    assert payload["delta_b"] < 1e-9

    assert cli.run(["verify", "--state", "epr", "--op", "x", "--measure", "hadamard"]) == 2


def test_usage_errors_exit_two(capsys):
    assert cli.run(["discord"]) == 2  # no state given
    capsys.readouterr()
    assert cli.run(["frobnicate"]) == 2
    capsys.readouterr()
    assert cli.run(["game", "exact", "--strategy", "nope"]) == 2
