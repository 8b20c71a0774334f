"""Record server views across every phase into tests/fixtures/phase_walk.json.

Run from the frontend directory after installing the python package:
    python3 scripts/make_phase_walk_fixture.py
"""

import json
import pathlib
import sys

from fastapi.testclient import TestClient

from quantumhouse.server import create_app

SCRIPTS = [
    ("quantum-eq2", 11, [
        {"type": "pass"},
        {"type": "measure", "basis": "hadamard"},
        {"type": "ask_bob"},
        {"type": "guess", "value": "op"},
        {"type": "new_round"},
        {"type": "pass"},
        {"type": "guess", "value": "noop"},
    ]),
    ("quantum-eq2", 4, [
        {"type": "tamper", "basis": "circular"},
        {"type": "ask_bob"},
        {"type": "guess", "value": "op"},
    ]),
    ("classical-corr-bits", 7, [
        {"type": "tamper", "basis": "computational"},
        {"type": "measure", "basis": "computational"},
        {"type": "guess", "value": "noop"},
    ]),
    ("restricted-device", 3, [
        {"type": "pass"},
        {"type": "ask_bob"},
        {"type": "guess", "value": "noop"},
        {"type": "new_round"},
    ]),
]


def main() -> None:
    client = TestClient(create_app())
    views = []
    for flavor, seed, actions in SCRIPTS:
        created = client.post("/sessions", json={"flavor": flavor, "seed": seed}).json()
        sid = created["id"]
        headers = {"X-Role-Token": created["tokens"]["alice"]}
        views.append(client.get(f"/sessions/{sid}/view", headers=headers).json())
        for action in actions:
            r = client.post(f"/sessions/{sid}/actions", json={"action": action}, headers=headers)
            if r.status_code != 200:
                break
            views.append(r.json())
    out = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "phase_walk.json"
    out.write_text(json.dumps(views, indent=1, sort_keys=True) + "\n")
    phases = sorted({v["phase"] for v in views})
    print(f"wrote {len(views)} views covering phases {phases} -> {out}", file=sys.stderr)
    if set(phases) != {"precheck", "examine", "joint", "done"}:
        raise SystemExit("fixture does not cover all phases")


if __name__ == "__main__":
    main()
