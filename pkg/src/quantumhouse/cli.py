"""Command-line entry point.

Verbs cover state construction, discord verdicts, achievability
classification and witnesses, the impossibility sweep, the device demo, the
nine golden checks, and the game (exact scores, Monte-Carlo, interactive
play, HTTP serving). `--format json` emits one machine-readable JSON object
per invocation; identical argv and seed give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import discord, effect, game, golden, jsonio, states
from .linalg import (
    HADAMARD,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityMatrix,
    MeasurementChannel,
    SwapWithPrepared,
    Unitary,
    apply_local,
    partial_trace,
    trace_distance,
)

_NAMED_OPS = {
    "x": PAULI_X,
    "y": PAULI_Y,
    "z": PAULI_Z,
    "h": HADAMARD,
    "identity": np.eye(2, dtype=np.complex128),
}


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) < 5e-7:
        return f"{z.real:+.6f}"
    return f"{z.real:+.6f}{z.imag:+.6f}i"


def format_matrix(mat: np.ndarray) -> str:
    return "\n".join("  ".join(_fmt_complex(z) for z in row) for row in mat)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _load_state(args) -> DensityMatrix:
    if getattr(args, "state", None):
        return states.make(args.state)
    if getattr(args, "file", None):
        return jsonio.load_path(args.file, validate=not args.no_validate, tol=args.tol)
    raise ValueError("provide --state <id> or --file <path>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhouse",
        description="bipartite state toolkit and the quantum-house guessing game",
    )
    parser.add_argument("--tol", type=float, default=None, help="equality tolerance override")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    # The same flags are accepted after the verb; SUPPRESS keeps them from
    # clobbering values given before it.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_state_flags(p):
        p.add_argument("--state", help=f"named state id ({', '.join(states.NAMED_STATE_IDS)})")
        p.add_argument("--file", help="density-matrix JSON file")
        p.add_argument("--no-validate", action="store_true", help="skip density validation")

    p = sub.add_parser("state", parents=[common], help="print a named or loaded state")
    add_state_flags(p)

    p = sub.add_parser("discord", parents=[common], help="zero-vs-nonzero discord verdict (exit 0 = zero)")
    add_state_flags(p)

    p = sub.add_parser("classify", parents=[common], help="achievability class of a bipartite state")
    add_state_flags(p)

    p = sub.add_parser("witness", parents=[common], help="construct and verify a witness operation")
    add_state_flags(p)
    p.add_argument(
        "--prefer",
        choices=[k.value for k in effect.WitnessKind],
        help="preferred witness kind when several apply",
    )

    p = sub.add_parser("verify", parents=[common], help="verify a given local operation as a witness")
    add_state_flags(p)
    p.add_argument("--op", choices=sorted(_NAMED_OPS), help="single-qubit unitary on Alice's side")
    p.add_argument("--measure", choices=sorted(states.BASES), help="measurement channel on Alice's side")
    p.add_argument("--swap-fresh", action="store_true", help="swap in a fresh marginal copy")

    p = sub.add_parser("sweep", parents=[common], help="random-channel probe of the impossible class")
    add_state_flags(p)
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser("demo", parents=[common], help="device demo outputs")
    p.add_argument("what", choices=("spinq",))
    p.add_argument("--eta", type=float, default=1e-5, help="pseudo-pure preparation weight")
    p.add_argument("--gate-noise", type=float, default=0.0, help="per-gate depolarizing strength")

    p = sub.add_parser("examples", parents=[common], help="golden checks of the nine worked constructions")
    p.add_argument("what", choices=("verify",))

    p = sub.add_parser("game", help="exact scores, simulation, play, serving")
    gsub = p.add_subparsers(dest="mode", required=True)

    def add_game_flags(gp):
        gp.add_argument("--flavor", default="quantum-eq2", choices=sorted(game.FLAVORS))
        gp.add_argument("--strategy", default="join-bob", choices=sorted(game.STRATEGIES))

    gp = gsub.add_parser("exact", parents=[common], help="exact expected score by enumeration")
    add_game_flags(gp)
    gp = gsub.add_parser("simulate", parents=[common], help="seeded Monte-Carlo")
    add_game_flags(gp)
    gp.add_argument("--rounds", type=int, default=100000)
    gp.add_argument("--transcripts", help="write every round transcript to this JSONL file")
    gp = gsub.add_parser("play", parents=[common], help="interactive round as Alice")
    gp.add_argument("--flavor", default="quantum-eq2", choices=sorted(game.FLAVORS))
    gp = gsub.add_parser("serve", parents=[common], help="run the HTTP session server")
    gp.add_argument("--addr", default="127.0.0.1")
    gp.add_argument("--port", type=int, default=8000)
    gp.add_argument("--allow-origin", action="append", default=None)
    gp.add_argument("--journal", default=None, help="directory for append-only session journals")

    return parser


# ---------------------------------------------------------------------------
# Verb handlers


def _cmd_state(args) -> int:
    dm = _load_state(args)
    payload = {"id": getattr(args, "state", None), **jsonio.density_to_json(dm)}
    _emit(args, payload, f"dims: {list(dm.dims)}\n{format_matrix(dm.mat)}")
    return 0


def _cmd_discord(args) -> int:
    dm = _load_state(args)
    verdict = discord.is_zero_discord(
        dm, tol=args.tol if args.tol else discord.DISCORD_TOL, seed=args.seed or 11
    )
    basis = verdict.witness_basis
    payload = {
        "zero_discord": verdict.zero_discord,
        "witness_basis": None
        if basis is None
        else {"re": basis.real.tolist(), "im": basis.imag.tolist()},
        "certificate": verdict.certificate,
        "diagnostics": verdict.diagnostics,
    }
    lines = [f"zero discord: {verdict.zero_discord}"]
    if basis is not None:
        lines.append("witness basis (columns):\n" + format_matrix(basis))
    if verdict.certificate:
        lines.append(f"certificate: {verdict.certificate}")
    _emit(args, payload, "\n".join(lines))
    return 0 if verdict.zero_discord else 1


def _cmd_classify(args) -> int:
    dm = _load_state(args)
    cls = effect.classify(dm, tol=args.tol if args.tol else effect.CLASSIFY_TOL)
    _emit(args, {"class": cls.value}, f"class: {cls.value}")
    return 0


def _cmd_witness(args) -> int:
    dm = _load_state(args)
    prefer = effect.WitnessKind(args.prefer) if args.prefer else None
    w = effect.construct_witness(dm, prefer=prefer)
    cls = effect.classify(dm)
    if w is None:
        _emit(
            args,
            {"class": cls.value, "witness": None, "delta_ab": None, "delta_a": None},
            f"class: {cls.value}\nwitness: impossible (pure factor)",
        )
        return 0
    delta_ab, delta_a = effect.verify_witness(dm, w)
    payload = {
        "class": cls.value,
        "witness": {"kind": w.kind.value},
        "delta_ab": delta_ab,
        "delta_a": delta_a,
    }
    text = (
        f"class: {cls.value}\nwitness: {w.kind.value}\n"
        f"delta_AB: {delta_ab:.9f}\ndelta_A: {delta_a:.3e}"
    )
    if w.side_info is not None:
        payload["witness"]["side_info"] = jsonio.density_to_json(w.side_info)
        text += "\nside info state:\n" + format_matrix(w.side_info.mat)
    _emit(args, payload, text)
    return 0


def _cmd_verify(args) -> int:
    dm = _load_state(args)
    chosen = [bool(args.op), bool(args.measure), args.swap_fresh]
    if sum(chosen) > 1:
        raise ValueError("choose only one of --op, --measure, --swap-fresh")
    if args.measure:
        op = MeasurementChannel(states.basis_matrix(args.measure))
        name = f"measure:{args.measure}"
    elif args.swap_fresh:
        op = SwapWithPrepared(None)
        name = "swap-fresh"
    else:
        name = f"unitary:{args.op or 'x'}"
        op = Unitary(_NAMED_OPS[args.op or "x"])
    post = apply_local(dm, op, target=0)
    delta_ab = trace_distance(dm, post)
    delta_a = trace_distance(partial_trace(dm, 0), partial_trace(post, 0))
    delta_b = trace_distance(partial_trace(dm, 1), partial_trace(post, 1))
    payload = {"operation": name, "delta_ab": delta_ab, "delta_a": delta_a, "delta_b": delta_b}
    _emit(
        args,
        payload,
        f"operation: {name}\ndelta_AB: {delta_ab:.9f}\n"
        f"delta_A: {delta_a:.3e}\ndelta_B: {delta_b:.3e}",
    )
    return 0


def _cmd_sweep(args) -> int:
    dm = _load_state(args)
    report = effect.impossibility_sweep(dm, trials=args.trials, seed=args.seed or 23)
    payload = {
        "trials": report.trials,
        "violations": report.violations,
        "max_delta_ab_unnoticed": report.max_delta_ab_unnoticed,
        "examples": list(report.examples),
    }
    _emit(
        args,
        payload,
        f"trials: {report.trials}\nviolations: {report.violations}\n"
        f"largest joint change with A unchanged: {report.max_delta_ab_unnoticed:.3e}",
    )
    return 0 if report.violations == 0 else 1


def _cmd_demo(args) -> int:
    eta, p = args.eta, args.gate_noise
    bell = states.make("epr")
    ideal_post = apply_local(bell, Unitary(PAULI_X), 0)
    noisy = states.pseudo_pure(np.array([1, 0, 0, 1]) / np.sqrt(2), eta, dims=(2, 2))
    w = effect.witness_from_unitary(PAULI_X)
    report = effect.noisy_metrics(bell, w, effect.NoiseModel(eta=eta, gate_p=p))
    noisy_post = apply_local(noisy, Unitary(PAULI_X), 0)
    if p > 0:
        noisy_post = effect.depolarize(noisy_post, p, target=0)
    ideal_delta = trace_distance(bell, ideal_post)
    sections = {
        "ideal": {
            "bell": jsonio.density_to_json(bell),
            "after_flip": jsonio.density_to_json(ideal_post),
            "marginal_a": jsonio.density_to_json(partial_trace(bell, 0)),
            "marginal_a_after": jsonio.density_to_json(partial_trace(ideal_post, 0)),
        },
        "noisy": {
            "bell": jsonio.density_to_json(noisy),
            "after_flip": jsonio.density_to_json(noisy_post),
            "marginal_a": jsonio.density_to_json(partial_trace(noisy, 0)),
            "marginal_a_after": jsonio.density_to_json(partial_trace(noisy_post, 0)),
        },
    }
    payload = {
        "eta": eta,
        "gate_noise": p,
        **sections,
        "deltas": {
            "ideal_ab": ideal_delta,
            "noisy_ab": report.delta_ab,
            "eta_times_ideal": eta * ideal_delta,
            "noisy_a": report.delta_a,
        },
    }
    lines = [f"eta = {eta}, gate noise = {p}", ""]
    for branch in ("ideal", "noisy"):
        for key, title in (("bell", "bell pair"), ("after_flip", "after flip on first qubit")):
            mat = np.asarray(sections[branch][key]["re"]) + 1j * np.asarray(
                sections[branch][key]["im"]
            )
            lines += [f"[{branch}] {title}:", format_matrix(mat), ""]
        marg = np.asarray(sections[branch]["marginal_a"]["re"])
        lines += [f"[{branch}] first-qubit marginal (before = after):", format_matrix(marg), ""]
    lines += [
        f"joint change ideal: {ideal_delta:.9f}",
        f"joint change noisy: {report.delta_ab:.9e} (eta x ideal = {eta * ideal_delta:.9e})",
        f"local change: {report.delta_a:.3e}",
    ]
    _emit(args, payload, "\n".join(lines))
    return 0


def _cmd_examples(args) -> int:
    results = golden.worked_examples(tol=args.tol if args.tol else golden.GOLDEN_TOL)
    payload = {
        "results": [
            {"index": r.index, "name": r.name, "pass": r.passed, "max_defect": r.max_defect}
            for r in results
        ],
        "all_pass": all(r.passed for r in results),
    }
    lines = [
        f"[{r.index}/9] {r.name} ... {'PASS' if r.passed else 'FAIL'} (defect {r.max_defect:.2e})"
        for r in results
    ]
    _emit(args, payload, "\n".join(lines))
    return 0 if payload["all_pass"] else 1


def _cmd_game_exact(args) -> int:
    score = game.expected_score_exact(args.flavor, args.strategy)
    payload = {
        "flavor": args.flavor,
        "strategy": args.strategy,
        "score": score.to_json(),
        "score_exact": str(score),
    }
    _emit(args, payload, f"expected score: {score}")
    return 0


def _cmd_game_simulate(args) -> int:
    stats = game.simulate(
        args.flavor, args.strategy, args.rounds, args.seed, transcript_path=args.transcripts
    )
    payload = {
        "flavor": args.flavor,
        "strategy": args.strategy,
        "rounds": stats.rounds,
        "seed": args.seed,
        "mean_finite": stats.mean_finite,
        "stderr_mean": stats.stderr_mean,
        "catch_rate": stats.catch_rate,
        "stderr_catch": stats.stderr_catch,
        "caught": stats.caught,
        "finite_rounds": stats.finite_rounds,
    }
    _emit(
        args,
        payload,
        f"rounds: {stats.rounds}\nmean finite score: {stats.mean_finite:.3f} "
        f"(stderr {stats.stderr_mean:.3f})\ncatch rate: {stats.catch_rate:.4f} "
        f"(stderr {stats.stderr_catch:.4f})",
    )
    return 0


def _cmd_game_play(args) -> int:
    session = game.GameSession(args.flavor, args.seed)
    flavor = session.flavor
    print(f"flavor: {flavor.id} -- {flavor.disclosure}")
    print("scoring: 100 alone, 90 with Bob, 0 wrong, -inf if caught\n")
    while True:
        view = session.view("alice")
        if view["phase"] == "done":
            reveal = view["reveal"]
            print(
                f"round over: score {reveal['score']}, the flip was "
                f"{'performed' if reveal['op_applied'] else 'not performed'}"
                + (" (you were caught!)" if reveal["caught"] else "")
            )
            print(f"tally: {view['tally']}\n")
            answer = input("another round? [y/n] ").strip().lower()
            if answer != "y":
                return 0
            session.advance({"type": "new_round"})
            continue
        obs = view["observations"]
        shown = {k: v for k, v in obs.items() if v is not None}
        if shown:
            print(f"phase {view['phase']}; you see: {shown}")
        else:
            print(f"phase {view['phase']}")
        actions = view["legal_actions"]
        for i, a in enumerate(actions):
            print(f"  [{i}] {a}")
        try:
            choice = int(input("choose action: ").strip())
            action = actions[choice]
        except (ValueError, IndexError):
            print("pick one of the listed numbers\n")
            continue
        out = session.advance(action)
        print(f"-> {out}\n")


def _cmd_game_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(journal_dir=args.journal, allow_origins=args.allow_origin)
    uvicorn.run(app, host=args.addr, port=args.port, log_level="warning")
    return 0


_HANDLERS = {
    "state": _cmd_state,
    "discord": _cmd_discord,
    "classify": _cmd_classify,
    "witness": _cmd_witness,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "demo": _cmd_demo,
    "examples": _cmd_examples,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.verb == "game":
            handler = {
                "exact": _cmd_game_exact,
                "simulate": _cmd_game_simulate,
                "play": _cmd_game_play,
                "serve": _cmd_game_serve,
            }[args.mode]
            return handler(args)
        return _HANDLERS[args.verb](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyboardInterrupt, EOFError):
        return 130


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
