"""Deterministic discrete-event execution of the shipping transaction catalog.

A run fires every catalog transaction of the chosen stages in ascending
(stage, ordinal) order; transactions sharing an ordinal are shuffled by the
seeded generator, the only freedom the chronology leaves.  A single container
travels the flow; its state advances only on ContainerMovement transactions,
per the move table below.  Movements whose leg subsumes an unnumbered phase
(packing, the sea passage, the empty return) record those as via states.

Monitors observe every event and record violations; they never block
execution, so traces for the same inputs stay comparable.  Adversary actions
rewrite single events: Drop suppresses the effect (the event is still recorded
as dropped, keeping seq contiguous), Tamper flips a delivered document's
integrity, Forge substitutes a fabricated document, Replay re-delivers the
genuine document a second time.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from portsec import catalog as cat
from portsec.catalog import (
    Actor,
    DocumentKind,
    Medium,
    Stage,
    TransactionId,
    TransactionSpec,
    parse_txid,
)
from portsec.common import Severity

ENGINE_VERSION = "1"

MAX_SEED = 2**64 - 1


class ScenarioError(ValueError):
    """Bad run configuration, reported before any event fires."""


class ReplayError(ValueError):
    """Trace cannot be replayed: wrong engine version or corrupted content."""


class ContainerState(str, Enum):
    EMPTY_AT_DEPOT = "EmptyAtDepot"
    AT_EXPORTER = "AtExporter"
    PACKED_SEALED = "PackedSealed"
    AT_ORIGIN_RAILWAY = "AtOriginRailway"
    AT_ORIGIN_TERMINAL = "AtOriginTerminal"
    AT_INSPECTION = "AtInspection"
    LOADED_ON_SHIP = "LoadedOnShip"
    AT_SEA = "AtSea"
    AT_DEST_TERMINAL = "AtDestTerminal"
    AT_DEST_RAILWAY = "AtDestRailway"
    AT_IMPORTER = "AtImporter"
    EMPTY_RETURN = "EmptyReturn"


_S = ContainerState

# Legal transition per ContainerMovement transaction: (from, to, via states
# passed through on the way).  In catalog order the legs chain from the depot
# all the way back to it.
CONTAINER_MOVES: dict[str, tuple[ContainerState, ContainerState, tuple[ContainerState, ...]]] = {
    "2.2": (_S.EMPTY_AT_DEPOT, _S.AT_EXPORTER, ()),
    "2.3a": (_S.AT_EXPORTER, _S.AT_ORIGIN_RAILWAY, (_S.PACKED_SEALED,)),
    "2.4a": (_S.AT_ORIGIN_RAILWAY, _S.AT_ORIGIN_TERMINAL, ()),
    "3.1a": (_S.AT_ORIGIN_TERMINAL, _S.AT_INSPECTION, ()),
    "3.3": (_S.AT_INSPECTION, _S.AT_INSPECTION, ()),
    "3.4a": (_S.AT_INSPECTION, _S.AT_ORIGIN_TERMINAL, ()),
    "4.9": (_S.AT_ORIGIN_TERMINAL, _S.LOADED_ON_SHIP, ()),
    "5.14": (_S.LOADED_ON_SHIP, _S.AT_DEST_TERMINAL, (_S.AT_SEA,)),
    "6.4a": (_S.AT_DEST_TERMINAL, _S.AT_DEST_RAILWAY, ()),
    "6.7a": (_S.AT_DEST_RAILWAY, _S.AT_IMPORTER, ()),
    "6.8a": (_S.AT_IMPORTER, _S.EMPTY_AT_DEPOT, (_S.EMPTY_RETURN,)),
}


class AdversaryKind(str, Enum):
    TAMPER = "Tamper"
    DROP = "Drop"
    FORGE = "Forge"
    REPLAY = "Replay"


class DocumentIntegrity(str, Enum):
    GENUINE = "Genuine"
    TAMPERED = "Tampered"
    FORGED = "Forged"


@dataclass(frozen=True)
class AdversaryAction:
    kind: AdversaryKind
    target: TransactionId
    detail: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "target": str(self.target), "detail": self.detail}

    @classmethod
    def from_dict(cls, data: dict) -> "AdversaryAction":
        return cls(
            kind=AdversaryKind(data["kind"]),
            target=parse_txid(data["target"]),
            detail=data.get("detail", ""),
        )


@dataclass
class DocumentInstance:
    kind: DocumentKind
    issuer: Actor
    holders: set[Actor]
    issued_at: int
    integrity: DocumentIntegrity = DocumentIntegrity.GENUINE


@dataclass(frozen=True)
class Violation:
    monitor: str
    seq: int
    message: str
    severity: Severity

    def to_dict(self) -> dict:
        return {
            "monitor": self.monitor,
            "seq": self.seq,
            "message": self.message,
            "severity": self.severity.value,
        }


@dataclass(frozen=True)
class Event:
    seq: int
    transaction: TransactionId
    effect: dict
    adversary_action: AdversaryAction | None = None

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "transaction": str(self.transaction),
            "effect": self.effect,
            "adversary_action": self.adversary_action.to_dict() if self.adversary_action else None,
        }


@dataclass(frozen=True)
class ShipmentTrace:
    seed: int
    events: tuple[Event, ...]
    violations: tuple[Violation, ...]
    final_state: ContainerState
    stages: tuple[Stage, ...]
    adversaries: tuple[AdversaryAction, ...]
    version: str = ENGINE_VERSION

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "seed": self.seed,
            "stages": [s.value for s in self.stages],
            "adversaries": [a.to_dict() for a in self.adversaries],
            "events": [e.to_dict() for e in self.events],
            "violations": [v.to_dict() for v in self.violations],
            "final_state": self.final_state.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ShipmentTrace":
        events = tuple(
            Event(
                seq=entry["seq"],
                transaction=parse_txid(entry["transaction"]),
                effect=entry["effect"],
                adversary_action=(
                    AdversaryAction.from_dict(entry["adversary_action"])
                    if entry.get("adversary_action")
                    else None
                ),
            )
            for entry in data["events"]
        )
        violations = tuple(
            Violation(v["monitor"], v["seq"], v["message"], Severity(v["severity"]))
            for v in data["violations"]
        )
        return cls(
            seed=data["seed"],
            events=events,
            violations=violations,
            final_state=ContainerState(data["final_state"]),
            stages=tuple(Stage(s) for s in data["stages"]),
            adversaries=tuple(AdversaryAction.from_dict(a) for a in data["adversaries"]),
            version=data.get("version", ""),
        )


class RunState:
    """Mutable execution state exposed to monitors."""

    def __init__(self, scenario_ids: set[str], initial_state: ContainerState):
        self.scenario_ids = scenario_ids
        self.container_state = initial_state
        self.documents: list[DocumentInstance] = []
        self.fired: set[str] = set()
        self.dropped: set[str] = set()
        # txid -> document instance index delivered by that transaction (last delivery wins)
        self.delivered: dict[str, int] = {}

    def in_scenario(self, txid: str) -> bool:
        return txid in self.scenario_ids

    def delivered_instance(self, txid: str) -> DocumentInstance | None:
        index = self.delivered.get(txid)
        return self.documents[index] if index is not None else None


def _resolve_stages(scenario) -> tuple[Stage, ...]:
    if scenario is None:
        return tuple(Stage)
    stages = []
    for item in scenario:
        stage = item if isinstance(item, Stage) else Stage(item)
        if stage not in stages:
            stages.append(stage)
    return tuple(sorted(stages, key=lambda s: s.number))


def _validate_adversaries(
    adversaries: tuple[AdversaryAction, ...], scenario_ids: set[str]
) -> None:
    seen: set[str] = set()
    for action in adversaries:
        target = str(action.target)
        if target not in scenario_ids:
            raise ScenarioError(f"adversary target {target} is outside the chosen stages")
        if target in seen:
            raise ScenarioError(f"multiple adversary actions target {target}")
        seen.add(target)
        spec = cat.transaction(action.target)
        needs_document = action.kind in (AdversaryKind.TAMPER, AdversaryKind.FORGE, AdversaryKind.REPLAY)
        if needs_document and spec.document is None:
            raise ScenarioError(
                f"{action.kind.value} targets {target}, which carries no document"
            )


def _schedule(stages: tuple[Stage, ...], rng: random.Random) -> list[TransactionSpec]:
    wanted = {s.number for s in stages}
    specs = [s for s in cat.full_catalog() if s.id.stage in wanted]
    ordered: list[TransactionSpec] = []
    group: list[TransactionSpec] = []
    group_key: tuple[int, int] | None = None
    for spec in specs:
        key = (spec.id.stage, spec.id.ordinal)
        if key != group_key:
            if len(group) > 1:
                rng.shuffle(group)
            ordered.extend(group)
            group = []
            group_key = key
        group.append(spec)
    if len(group) > 1:
        rng.shuffle(group)
    ordered.extend(group)
    return ordered


def _initial_state(specs: list[TransactionSpec]) -> ContainerState:
    # Partial-stage runs start wherever their first movement expects the box.
    for spec in specs:
        if spec.medium is Medium.CONTAINER_MOVEMENT:
            return CONTAINER_MOVES[str(spec.id)][0]
    return ContainerState.EMPTY_AT_DEPOT


def _find_instance(state: RunState, kind: DocumentKind, holder: Actor) -> int | None:
    best = None
    for index, instance in enumerate(state.documents):
        if instance.kind is kind and holder in instance.holders:
            if best is None or instance.issued_at >= state.documents[best].issued_at:
                best = index
    return best


def _deliver(state: RunState, spec: TransactionSpec, seq: int,
             action: AdversaryAction | None) -> dict:
    """Issue or transfer the document for a document-bearing transaction."""
    kind = spec.document
    assert kind is not None
    if action is not None and action.kind is AdversaryKind.FORGE:
        issuer = spec.from_actor
        try:
            issuer = Actor(action.detail)
        except ValueError:
            pass
        # The claimed issuer counts as a holder: the forgery plants the copy
        # in the system of record under that party's name.
        state.documents.append(
            DocumentInstance(kind, issuer, {issuer, spec.to_actor}, seq, DocumentIntegrity.FORGED)
        )
        index = len(state.documents) - 1
    else:
        index = _find_instance(state, kind, spec.from_actor)
        if index is None:
            state.documents.append(
                DocumentInstance(kind, spec.from_actor, {spec.from_actor}, seq)
            )
            index = len(state.documents) - 1
        instance = state.documents[index]
        instance.holders.add(spec.to_actor)
        if action is not None and action.kind is AdversaryKind.TAMPER:
            instance.integrity = DocumentIntegrity.TAMPERED
    instance = state.documents[index]
    state.delivered[str(spec.id)] = index
    return {
        "type": "document",
        "document": kind.value,
        "issuer": instance.issuer.value,
        "from": spec.from_actor.value,
        "to": spec.to_actor.value,
        "integrity": instance.integrity.value,
        "instance": index,
    }


def _move(state: RunState, spec: TransactionSpec) -> dict:
    txid = str(spec.id)
    from_state, to_state, via = CONTAINER_MOVES[txid]
    effect = {
        "type": "container",
        "from_state": state.container_state.value,
        "to_state": to_state.value,
        "via": [s.value for s in via],
    }
    state.container_state = to_state
    return effect


def run(
    scenario=None,
    adversaries=None,
    seed: int = 0,
) -> ShipmentTrace:
    """Execute the catalog for the chosen stages under the given seed.

    `scenario` is None for the full flow or an iterable of stage names /
    Stage members.  Identical inputs yield identical traces.
    """
    from portsec.monitors import build_monitors  # monitors imports this module

    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed <= MAX_SEED:
        raise ScenarioError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    stages = _resolve_stages(scenario)
    actions = tuple(adversaries or ())
    rng = random.Random(seed)
    specs = _schedule(stages, rng)
    scenario_ids = {str(s.id) for s in specs}
    _validate_adversaries(actions, scenario_ids)
    by_target = {str(a.target): a for a in actions}

    state = RunState(scenario_ids, _initial_state(specs))
    monitors = build_monitors()
    events: list[Event] = []
    violations: list[Violation] = []
    seq = 0

    def emit(spec: TransactionSpec, effect: dict, action: AdversaryAction | None) -> None:
        nonlocal seq
        seq += 1
        event = Event(seq, spec.id, effect, action)
        events.append(event)
        if effect["type"] != "dropped":
            state.fired.add(str(spec.id))
        for monitor in monitors:
            violations.extend(monitor.on_event(state, spec, event))

    for spec in specs:
        action = by_target.get(str(spec.id))
        if action is not None and action.kind is AdversaryKind.DROP:
            state.dropped.add(str(spec.id))
            emit(spec, {"type": "dropped"}, action)
            continue
        if spec.medium is Medium.CONTAINER_MOVEMENT:
            effect = _move(state, spec)
            emit(spec, effect, None)
        elif spec.document is not None:
            deliver_action = action if action and action.kind is not AdversaryKind.REPLAY else None
            effect = _deliver(state, spec, seq + 1, deliver_action)
            emit(spec, effect, deliver_action)
            if action is not None and action.kind is AdversaryKind.REPLAY:
                emit(spec, dict(effect), action)
        else:
            emit(spec, {"type": "communication"}, None)

    return ShipmentTrace(
        seed=seed,
        events=tuple(events),
        violations=tuple(violations),
        final_state=state.container_state,
        stages=stages,
        adversaries=actions,
    )


def replay(trace: ShipmentTrace) -> ShipmentTrace:
    """Re-execute a trace from its recorded inputs; the result must match."""
    if trace.version != ENGINE_VERSION:
        raise ReplayError(
            f"trace was produced by engine version {trace.version!r}, expected {ENGINE_VERSION!r}"
        )
    for position, event in enumerate(trace.events, start=1):
        if event.seq != position:
            raise ReplayError(f"corrupted trace: event at position {position} has seq {event.seq}")
    result = run(trace.stages, trace.adversaries, trace.seed)
    if result != trace:
        raise ReplayError("trace does not reproduce under the recorded inputs")
    return result
