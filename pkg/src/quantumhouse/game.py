"""The hidden-operation guessing game: sessions, exact scoring, simulation.

One round: Charlie hands Alice and Bob a correlated pair and tells Alice how
it was prepared; Alice may probe her half first (risking being caught by
Charlie's check); Charlie then secretly applies the pre-agreed flip with
probability 1/2; Alice examines her half and either guesses alone (100
points when right) or calls in Bob for a joint readout (90 points when
right). Getting caught scores negative infinity, which absorbs every
expectation it touches.

Every preparation in the shipped flavors keeps Alice's half inside the six
single-qubit states of the three conjugate bases, and every measurement is
one of those bases, so all branch probabilities are exact small rationals.
Exact expectations enumerate the finite outcome tree over ``Fraction``;
``simulate`` replays the same machinery with an integer-seeded generator.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .states import BASES

SCORE_ALONE = 100
SCORE_WITH_BOB = 90

# Pauli-X on the six labels (global phases dropped; they carry no probability).
X_MAP = {"0": "1", "1": "0", "+": "+", "-": "-", "+i": "-i", "-i": "+i"}

_BASIS_OF = {lbl: name for name, pair in BASES.items() for lbl in pair}

_HALF = Fraction(1, 2)
_ONE = Fraction(1)
_ZERO = Fraction(0)


def _overlap2(u: str, v: str) -> Fraction:
    """|<u|v>|^2 for the six conjugate-basis labels: 1, 0 or 1/2 exactly."""
    if u == v:
        return _ONE
    if _BASIS_OF[u] == _BASIS_OF[v]:
        return _ZERO
    return _HALF


def measurement_branches(state: str, basis: str) -> list[tuple[Fraction, str]]:
    """Possible outcomes (with exact probabilities) of measuring ``state``."""
    return [(p, lbl) for lbl in BASES[basis] if (p := _overlap2(state, lbl)) > 0]


# ---------------------------------------------------------------------------
# Scores


@dataclass(frozen=True)
class ExtendedScore:
    """A finite rational score, or the absorbing negative infinity."""

    finite: Fraction | None = None

    @classmethod
    def of(cls, value) -> "ExtendedScore":
        return cls(Fraction(value))

    @classmethod
    def neg_infinity(cls) -> "ExtendedScore":
        return cls(None)

    @property
    def is_neg_infinity(self) -> bool:
        return self.finite is None

    def __float__(self) -> float:
        return float("-inf") if self.finite is None else float(self.finite)

    def __le__(self, other: "ExtendedScore") -> bool:
        if self.is_neg_infinity:
            return True
        if other.is_neg_infinity:
            return False
        return self.finite <= other.finite

    def __str__(self) -> str:
        return "-inf" if self.finite is None else str(self.finite)

    def to_json(self):
        if self.finite is None:
            return "-inf"
        if self.finite.denominator == 1:
            return int(self.finite)
        return float(self.finite)


# ---------------------------------------------------------------------------
# Flavors and strategies


@dataclass(frozen=True)
class Item:
    weight: int
    alice: str
    bob: int


@dataclass(frozen=True)
class Flavor:
    """One way Charlie can set up the game.

    ``classical`` marks preparations that are plain correlated bits: probing
    them is always non-destructive, and only the computational basis makes
    sense for Alice's reads.
    """

    id: str
    items: tuple[Item, ...]
    disclosure: str
    classical: bool = False

    @property
    def total_weight(self) -> int:
        return sum(it.weight for it in self.items)

    def item_probability(self, index: int) -> Fraction:
        return Fraction(self.items[index].weight, self.total_weight)


FLAVORS: dict[str, Flavor] = {
    "quantum-eq2": Flavor(
        id="quantum-eq2",
        items=(
            Item(1, "0", 0),
            Item(1, "1", 1),
            Item(1, "+", 0),
            Item(1, "-", 0),
            Item(1, "+i", 1),
            Item(1, "-i", 1),
        ),
        disclosure=(
            "six equally likely pure preparations; your qubit is one of "
            "|0>, |1>, |+>, |->, |+i>, |-i>"
        ),
    ),
    "restricted-device": Flavor(
        id="restricted-device",
        items=(Item(2, "0", 0), Item(1, "0", 1), Item(1, "1", 0), Item(2, "1", 1)),
        disclosure="the preparation device can only emit |0> or |1> on your side",
    ),
    "classical-corr-bits": Flavor(
        id="classical-corr-bits",
        items=(Item(2, "0", 0), Item(1, "0", 1), Item(1, "1", 0), Item(2, "1", 1)),
        disclosure="two correlated classical bits; p(00)=p(11)=1/3, p(01)=p(10)=1/6",
        classical=True,
    ),
}


@dataclass(frozen=True)
class Strategy:
    """How Alice plays a round.

    ``probe_basis`` makes her measure before Charlie's check (and again at
    the examine step unless she calls Bob); the rule decides her guess:
    'coin' guesses at random, 'flip' compares her two readings (or her first
    reading against the joint readout when Bob is involved), 'parity'
    follows the joint-outcome decision rule (01/10 means flipped).
    """

    id: str
    probe_basis: str | None = None
    ask_bob: bool = False
    rule: str = "coin"


STRATEGIES: dict[str, Strategy] = {
    "random-guess": Strategy("random-guess"),
    "join-bob": Strategy("join-bob", ask_bob=True, rule="parity"),
    "tamper-computational": Strategy("tamper-computational", "computational", rule="flip"),
    "tamper-hadamard": Strategy("tamper-hadamard", "hadamard", rule="flip"),
    "tamper-circular": Strategy("tamper-circular", "circular", rule="flip"),
    "restricted-basis-attack": Strategy("restricted-basis-attack", "computational", rule="flip"),
    "classical-local-read": Strategy("classical-local-read", "computational", rule="flip"),
    "local-read-then-bob": Strategy(
        "local-read-then-bob", "computational", ask_bob=True, rule="flip"
    ),
}


def check_applicable(flavor: Flavor, strategy: Strategy) -> None:
    if flavor.classical and strategy.probe_basis not in (None, "computational"):
        raise ValueError(
            f"strategy {strategy.id!r} reads in a basis that does not exist "
            f"for the classical flavor {flavor.id!r}"
        )


def get_flavor(name: str) -> Flavor:
    try:
        return FLAVORS[name]
    except KeyError:
        raise ValueError(f"unknown flavor {name!r}; known: {', '.join(sorted(FLAVORS))}") from None


def get_strategy(name: str) -> Strategy:
    try:
        return STRATEGIES[name]
    except KeyError:
        raise ValueError(
            f"unknown strategy {name!r}; known: {', '.join(sorted(STRATEGIES))}"
        ) from None


# ---------------------------------------------------------------------------
# Exact enumeration


def _score(caught: bool, asked_bob: bool, correct: bool) -> int | None:
    if caught:
        return None
    if not correct:
        return 0
    return SCORE_WITH_BOB if asked_bob else SCORE_ALONE


def _guess_branches(
    strategy: Strategy, o1: str | None, o2: str | None, joint: str | None
) -> list[tuple[Fraction, str]]:
    if strategy.rule == "coin":
        return [(_HALF, "op"), (_HALF, "noop")]
    if strategy.rule == "parity":
        return [(_ONE, "op" if joint in ("01", "10") else "noop")]
    if strategy.rule == "flip":
        seen = joint[0] if strategy.ask_bob else o2
        return [(_ONE, "op" if seen != o1 else "noop")]
    raise ValueError(f"unknown guess rule {strategy.rule!r}")


def _enumerate_rounds(flavor: Flavor, strategy: Strategy) -> Iterator[tuple[Fraction, dict]]:
    """Yield every terminal branch of one round with its exact probability."""
    check_applicable(flavor, strategy)
    for idx, item in enumerate(flavor.items):
        p_item = flavor.item_probability(idx)
        if strategy.probe_basis is not None:
            probe = measurement_branches(item.alice, strategy.probe_basis)
        else:
            probe = [(_ONE, None)]
        for p_probe, o1 in probe:
            state = o1 if o1 is not None else item.alice
            p_pass = _ONE if flavor.classical else _overlap2(state, item.alice)
            p_caught = _ONE - p_pass
            base = p_item * p_probe
            if p_caught > 0:
                yield base * p_caught, {"caught": True, "item": idx}
            if p_pass == 0:
                continue
            # Surviving the check re-prepares the announced state.
            state = state if flavor.classical else item.alice
            for coin in (False, True):
                a_state = X_MAP[state] if coin else state
                w_coin = base * p_pass * _HALF
                if strategy.ask_bob or strategy.probe_basis is None:
                    examine = [(_ONE, None)]
                else:
                    examine = measurement_branches(a_state, strategy.probe_basis)
                for p_ex, o2 in examine:
                    if strategy.ask_bob:
                        joint_branches = [
                            (p, f"{a}{item.bob}")
                            for p, a in measurement_branches(a_state, "computational")
                        ]
                    else:
                        joint_branches = [(_ONE, None)]
                    for p_joint, joint in joint_branches:
                        for p_guess, guess in _guess_branches(strategy, o1, o2, joint):
                            prob = w_coin * p_ex * p_joint * p_guess
                            if prob == 0:
                                continue
                            correct = (guess == "op") == coin
                            yield prob, {
                                "caught": False,
                                "item": idx,
                                "coin": coin,
                                "asked_bob": strategy.ask_bob,
                                "correct": correct,
                                "score": _score(False, strategy.ask_bob, correct),
                            }


def expected_score_exact(flavor: Flavor | str, strategy: Strategy | str) -> ExtendedScore:
    """Exact expected score by full enumeration; -inf if any branch is caught."""
    flavor = get_flavor(flavor) if isinstance(flavor, str) else flavor
    strategy = get_strategy(strategy) if isinstance(strategy, str) else strategy
    total = _ZERO
    value = _ZERO
    caught = _ZERO
    for prob, leaf in _enumerate_rounds(flavor, strategy):
        total += prob
        if leaf["caught"]:
            caught += prob
        else:
            value += prob * leaf["score"]
    assert total == 1
    if caught > 0:
        return ExtendedScore.neg_infinity()
    return ExtendedScore(value)


def catch_probability_exact(flavor: Flavor | str, strategy: Strategy | str) -> Fraction:
    flavor = get_flavor(flavor) if isinstance(flavor, str) else flavor
    strategy = get_strategy(strategy) if isinstance(strategy, str) else strategy
    return sum(
        (prob for prob, leaf in _enumerate_rounds(flavor, strategy) if leaf["caught"]),
        _ZERO,
    )


def step4_outcome_distribution(
    flavor: Flavor | str, basis: str, op_applied: bool
) -> dict[str, Fraction]:
    """Exact distribution of an untampered examine-step readout in ``basis``,
    conditioned on whether the flip happened. Equality across the condition
    is the information-hiding property the game is built on."""
    flavor = get_flavor(flavor) if isinstance(flavor, str) else flavor
    dist: dict[str, Fraction] = {lbl: _ZERO for lbl in BASES[basis]}
    for idx, item in enumerate(flavor.items):
        state = X_MAP[item.alice] if op_applied else item.alice
        for p, lbl in measurement_branches(state, basis):
            dist[lbl] += flavor.item_probability(idx) * p
    return dist


def joint_outcome_distribution(flavor: Flavor | str, op_applied: bool) -> dict[str, Fraction]:
    """Exact distribution of the joint computational readout."""
    flavor = get_flavor(flavor) if isinstance(flavor, str) else flavor
    dist: dict[str, Fraction] = {}
    for idx, item in enumerate(flavor.items):
        state = X_MAP[item.alice] if op_applied else item.alice
        for p, a in measurement_branches(state, "computational"):
            key = f"{a}{item.bob}"
            dist[key] = dist.get(key, _ZERO) + flavor.item_probability(idx) * p
    return dist


# ---------------------------------------------------------------------------
# Live sessions


class IllegalActionError(Exception):
    """Action not available in the current phase."""


class WrongRoleError(Exception):
    """Action exists in this phase but belongs to another role."""


# Action types that exist at all in each phase (legality for anyone).
_PHASE_ACTION_TYPES = {
    "precheck": ("pass", "tamper"),
    "examine": ("measure", "guess", "ask_bob"),
    "joint": ("guess",),
    "done": ("new_round",),
}


class GameSession:
    """One multi-round game; single-writer, deterministic given its seed.

    ``keep_transcripts=False`` retains only the latest round's transcript,
    which keeps long Monte-Carlo runs lean.
    """

    def __init__(self, flavor: Flavor | str, seed: int, keep_transcripts: bool = True):
        self.flavor = get_flavor(flavor) if isinstance(flavor, str) else flavor
        self.seed = int(seed)
        self._rng = random.Random(self.seed)
        self.round_index = 0
        self.keep_transcripts = keep_transcripts
        self.transcripts: list[dict] = []
        self.last_transcript: dict | None = None
        self.caught_rounds = 0
        self.finite_total = 0  # round scores are integers
        self.finite_rounds = 0
        self.any_neg_inf = False
        # Expanded item table for O(1) weighted sampling.
        self._item_table = [
            i for i, it in enumerate(self.flavor.items) for _ in range(it.weight)
        ]
        self._start_round()

    # -- round lifecycle ----------------------------------------------------

    def _start_round(self) -> None:
        items = self.flavor.items
        self._item_idx = self._item_table[self._rng.randrange(len(self._item_table))]
        item = items[self._item_idx]
        self._alice_state = item.alice
        self._bob_bit = item.bob
        self.phase = "precheck"
        self._precheck: dict | None = None
        self._caught = False
        self._op_applied: bool | None = None
        self._measured: dict | None = None
        self._asked_bob = False
        self._joint: str | None = None
        self._guess: str | None = None
        self._score: ExtendedScore | None = None
        self._correct: bool | None = None

    def _finish(self, score: ExtendedScore) -> None:
        self._score = score
        self.phase = "done"
        if score.is_neg_infinity:
            self.caught_rounds += 1
            self.any_neg_inf = True
        else:
            self.finite_total += int(score.finite)
            self.finite_rounds += 1
        self.last_transcript = self._transcript()
        if self.keep_transcripts:
            self.transcripts.append(self.last_transcript)

    def _transcript(self) -> dict:
        return {
            "flavor": self.flavor.id,
            "round": self.round_index,
            "item_index": self._item_idx,
            "item": {"alice": self.flavor.items[self._item_idx].alice, "bob": self._bob_bit},
            "precheck": self._precheck,
            "caught": self._caught,
            "op_applied": self._op_applied,
            "examine": self._measured,
            "asked_bob": self._asked_bob,
            "joint_outcome": self._joint,
            "guess": self._guess,
            "correct": self._correct,
            "score": self._score.to_json() if self._score is not None else None,
        }

    # -- mechanics ----------------------------------------------------------

    def _run_check_and_coin(self) -> None:
        prepared = self.flavor.items[self._item_idx].alice
        if not self.flavor.classical:
            p_pass = _overlap2(self._alice_state, prepared)
            if p_pass == 0 or (p_pass == _HALF and self._rng.getrandbits(1)):
                self._caught = True
                self._finish(ExtendedScore.neg_infinity())
                return
            self._alice_state = prepared
        self._op_applied = bool(self._rng.getrandbits(1))
        if self._op_applied:
            self._alice_state = X_MAP[self._alice_state]
        self.phase = "examine"

    def _measure(self, basis: str) -> str:
        # All reachable probabilities are 0, 1/2 or 1, so one coin suffices.
        a, b = BASES[basis]
        if _BASIS_OF[self._alice_state] == basis:
            return self._alice_state
        outcome = b if self._rng.getrandbits(1) else a
        self._alice_state = outcome
        return outcome

    # -- public surface -----------------------------------------------------

    def legal_actions(self, role: str = "alice") -> list[dict]:
        if role != "alice":
            return [{"type": "new_round"}] if self.phase == "done" else []
        if self.phase == "precheck":
            bases = ["computational"] if self.flavor.classical else sorted(BASES)
            return [{"type": "pass"}] + [{"type": "tamper", "basis": b} for b in bases]
        if self.phase == "examine":
            actions: list[dict] = []
            if self._measured is None:
                bases = ["computational"] if self.flavor.classical else sorted(BASES)
                actions += [{"type": "measure", "basis": b} for b in bases]
            actions += [
                {"type": "guess", "value": "op"},
                {"type": "guess", "value": "noop"},
                {"type": "ask_bob"},
            ]
            return actions
        if self.phase == "joint":
            return [{"type": "guess", "value": "op"}, {"type": "guess", "value": "noop"}]
        return [{"type": "new_round"}]

    def _check_basis(self, basis) -> str:
        if basis not in BASES or (self.flavor.classical and basis != "computational"):
            raise IllegalActionError(f"basis {basis!r} is not available here")
        return basis

    def advance(self, action: dict, role: str = "alice") -> dict:
        """Apply one action; returns the acting role's fresh observations."""
        atype = action.get("type")
        if atype not in _PHASE_ACTION_TYPES[self.phase]:
            raise IllegalActionError(f"action {atype!r} is not available in phase {self.phase!r}")
        if atype == "new_round":
            self.round_index += 1
            self._start_round()
            return {"phase": self.phase}
        if role != "alice":
            raise WrongRoleError(f"only alice may post {atype!r}")
        if self.phase == "precheck":
            if atype == "pass":
                self._precheck = {"action": "pass", "outcome": None}
            else:
                basis = self._check_basis(action.get("basis"))
                outcome = self._measure(basis)
                self._precheck = {"action": "tamper", "basis": basis, "outcome": outcome}
            self._run_check_and_coin()
            return {"phase": self.phase, "caught": self._caught,
                    "precheck": self._precheck}
        if atype == "measure":
            if self._measured is not None:
                raise IllegalActionError("already measured this round")
            basis = self._check_basis(action.get("basis"))
            outcome = self._measure(basis)
            self._measured = {"basis": basis, "outcome": outcome}
            return {"phase": self.phase, "outcome": outcome}
        if atype == "ask_bob":
            self._asked_bob = True
            a_out = self._measure("computational")
            self._joint = f"{a_out}{self._bob_bit}"
            self.phase = "joint"
            return {"phase": self.phase, "joint_outcome": self._joint}
        return self._apply_guess(action)

    def _apply_guess(self, action: dict) -> dict:
        value = action.get("value")
        if value not in ("op", "noop"):
            raise IllegalActionError(f"guess value must be 'op' or 'noop', got {value!r}")
        self._guess = value
        self._correct = (value == "op") == self._op_applied
        self._finish(ExtendedScore.of(_score(False, self._asked_bob, self._correct)))
        return {"phase": self.phase, "correct": self._correct,
                "score": self._score.to_json()}

    def tally(self) -> dict:
        total = "-inf" if self.any_neg_inf else self.finite_total
        mean = (
            self.finite_total / self.finite_rounds if self.finite_rounds else None
        )
        return {
            "rounds": self.caught_rounds + self.finite_rounds,
            "caught_rounds": self.caught_rounds,
            "total": total,
            "finite_mean": mean,
        }

    def view(self, role: str = "alice") -> dict:
        """Role-scoped snapshot; hidden data appears only after scoring."""
        obs: dict = {}
        if role in ("alice", "charlie-observer"):
            if self._precheck is not None:
                obs["precheck"] = self._precheck
            if self.phase in ("examine", "joint", "done"):
                obs["caught"] = self._caught
            if self._measured is not None:
                obs["examine"] = self._measured
        if self._joint is not None:
            obs["joint_outcome"] = self._joint
        if self.phase == "done":
            obs["caught"] = self._caught
        reveal = self._transcript() if self.phase == "done" else None
        return {
            "flavor": self.flavor.id,
            "phase": self.phase,
            "role": role,
            "round_index": self.round_index,
            "legal_actions": self.legal_actions(role),
            "observations": obs,
            "tally": self.tally(),
            "reveal": reveal,
        }


def new_session(flavor: Flavor | str, seed: int) -> GameSession:
    return GameSession(flavor, seed)


# ---------------------------------------------------------------------------
# Strategy-driven play and Monte-Carlo


def play_round(session: GameSession, strategy: Strategy) -> dict:
    """Drive one round of ``session`` with a strategy; returns its transcript."""
    check_applicable(session.flavor, strategy)
    if session.phase == "done":
        session.advance({"type": "new_round"})
    if strategy.probe_basis is None:
        session.advance({"type": "pass"})
    else:
        session.advance({"type": "tamper", "basis": strategy.probe_basis})
    if session.phase == "done":
        return session.last_transcript
    o1 = (session._precheck or {}).get("outcome")
    if strategy.rule == "coin":
        guess = "op" if session._rng.getrandbits(1) else "noop"
        session.advance({"type": "guess", "value": guess})
    elif strategy.rule == "parity":
        obs = session.advance({"type": "ask_bob"})
        joint = obs["joint_outcome"]
        session.advance({"type": "guess", "value": "op" if joint in ("01", "10") else "noop"})
    elif strategy.ask_bob:
        obs = session.advance({"type": "ask_bob"})
        seen = obs["joint_outcome"][0]
        session.advance({"type": "guess", "value": "op" if seen != o1 else "noop"})
    else:
        obs = session.advance({"type": "measure", "basis": strategy.probe_basis})
        session.advance({"type": "guess", "value": "op" if obs["outcome"] != o1 else "noop"})
    return session.last_transcript


@dataclass(frozen=True)
class SimStats:
    rounds: int
    caught: int
    finite_rounds: int
    mean_finite: float
    std_finite: float
    catch_rate: float

    @property
    def stderr_mean(self) -> float:
        return self.std_finite / math.sqrt(self.finite_rounds) if self.finite_rounds else 0.0

    @property
    def stderr_catch(self) -> float:
        p = self.catch_rate
        return math.sqrt(p * (1 - p) / self.rounds) if self.rounds else 0.0


def simulate(
    flavor: Flavor | str,
    strategy: Strategy | str,
    rounds: int,
    seed: int,
    transcript_path: str | None = None,
) -> SimStats:
    """Seeded Monte-Carlo over full session rounds.

    The mean is reported over finite-score rounds only; the catch rate is
    reported separately so the negative-infinity absorption stays visible.
    ``transcript_path`` streams every round transcript out as JSON lines.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    flavor = get_flavor(flavor) if isinstance(flavor, str) else flavor
    strategy = get_strategy(strategy) if isinstance(strategy, str) else strategy
    session = GameSession(flavor, seed, keep_transcripts=False)
    sink = open(transcript_path, "w", encoding="utf-8") if transcript_path else None
    total = 0.0
    total_sq = 0.0
    caught = 0
    finite = 0
    for _ in range(rounds):
        t = play_round(session, strategy)
        if sink is not None:
            sink.write(json.dumps(t, sort_keys=True) + "\n")
        if t["score"] == "-inf":
            caught += 1
        else:
            s = float(t["score"])
            total += s
            total_sq += s * s
            finite += 1
    if sink is not None:
        sink.close()
    mean = total / finite if finite else 0.0
    var = max(total_sq / finite - mean * mean, 0.0) if finite else 0.0
    return SimStats(
        rounds=rounds,
        caught=caught,
        finite_rounds=finite,
        mean_finite=mean,
        std_finite=math.sqrt(var),
        catch_rate=caught / rounds,
    )
