"""Invariant monitors evaluated after every simulation event.

Monitors observe and record; they never block execution.  Each check is
scoped to the transactions actually present in the scenario, so partial-stage
runs are not flagged for documents their stages never carry.
"""

from __future__ import annotations

from dataclasses import dataclass

from portsec.catalog import Actor, DocumentKind, Medium, TransactionSpec
from portsec.common import Severity
from portsec.simulator import (
    CONTAINER_MOVES,
    DocumentIntegrity,
    Event,
    RunState,
    Violation,
)


@dataclass(frozen=True)
class MonitorDescriptor:
    id: str
    name: str
    description: str


class Monitor:
    descriptor: MonitorDescriptor

    def on_event(self, state: RunState, spec: TransactionSpec, event: Event) -> list[Violation]:
        raise NotImplementedError


# Hand-off -> transfer note documenting it, and the party expected to issue
# the note (the receiver of custody in that interchange).
_NOTE_FOR_HANDOFF = {
    "2.3a": ("2.4b", Actor.RAILWAY_TERMINAL),
    "2.4a": ("2.5b", Actor.PORT_TERMINAL),
    "6.4a": ("6.7b", Actor.RAILWAY_TERMINAL),
}
_NOTE_EXPECTATIONS = {note: (handoff, issuer) for handoff, (note, issuer) in _NOTE_FOR_HANDOFF.items()}

# Movement -> order that must have been genuinely delivered before it fires.
_ORDER_BEFORE_MOVE = {
    "6.4a": ("6.2", "rail move"),
}


class InterchangeProvenance(Monitor):
    descriptor = MonitorDescriptor(
        "M1",
        "interchange-provenance",
        "every container hand-off is documented by a transfer note issued by the "
        "receiving party, and ordered rail moves carry their transfer order",
    )

    def on_event(self, state, spec, event):
        violations = []
        txid = str(spec.id)
        if txid in _NOTE_EXPECTATIONS:
            handoff, expected_issuer = _NOTE_EXPECTATIONS[txid]
            if event.effect["type"] == "dropped":
                violations.append(Violation(
                    "M1", event.seq,
                    f"hand-off {handoff} interchange at {expected_issuer.value} lacks "
                    f"its transfer note ({txid} dropped)",
                    Severity.MEDIUM,
                ))
            elif event.effect["type"] == "document":
                issuer = event.effect["issuer"]
                if issuer != expected_issuer.value:
                    violations.append(Violation(
                        "M1", event.seq,
                        f"transfer note {txid} issued by {issuer}, expected "
                        f"{expected_issuer.value}",
                        Severity.MEDIUM,
                    ))
        if txid in _ORDER_BEFORE_MOVE and event.effect["type"] == "container":
            order_id, label = _ORDER_BEFORE_MOVE[txid]
            if state.in_scenario(order_id):
                instance = state.delivered_instance(order_id)
                if order_id not in state.fired or instance is None:
                    violations.append(Violation(
                        "M1", event.seq,
                        f"{label} {txid} without its transfer order ({order_id})",
                        Severity.MEDIUM,
                    ))
                elif instance.integrity is not DocumentIntegrity.GENUINE:
                    violations.append(Violation(
                        "M1", event.seq,
                        f"{label} {txid} backed by a {instance.integrity.value} "
                        f"transfer order ({order_id})",
                        Severity.MEDIUM,
                    ))
        return violations


# report -> authorizations -> first movement gated by the chain
_DG_CHAINS = (
    ("1.10b", ("1.11a", "1.12a", "1.12b"), "2.2"),
    ("5.6", ("5.7", "5.8"), "5.14"),
)


class DangerousGoodsChain(Monitor):
    descriptor = MonitorDescriptor(
        "M2",
        "dangerous-goods-chain",
        "dangerous goods report precedes authorization, authorization precedes movement",
    )

    def on_event(self, state, spec, event):
        violations = []
        txid = str(spec.id)
        for report_id, auth_ids, movement_id in _DG_CHAINS:
            if txid in auth_ids and event.effect["type"] == "document":
                if state.in_scenario(report_id) and report_id not in state.fired:
                    violations.append(Violation(
                        "M2", event.seq,
                        f"dangerous goods authorization {txid} issued without a "
                        f"preceding report ({report_id})",
                        Severity.HIGH,
                    ))
            if txid == movement_id and event.effect["type"] == "container":
                for auth_id in auth_ids:
                    if state.in_scenario(auth_id) and auth_id not in state.fired:
                        violations.append(Violation(
                            "M2", event.seq,
                            f"dangerous goods moved ({txid}) without authorization "
                            f"({auth_id})",
                            Severity.HIGH,
                        ))
        return violations


class TransitionLegality(Monitor):
    descriptor = MonitorDescriptor(
        "M3",
        "container-transition-legality",
        "every container movement starts from the state its leg expects",
    )

    def on_event(self, state, spec, event):
        if spec.medium is not Medium.CONTAINER_MOVEMENT or event.effect["type"] != "container":
            return []
        expected_from, _, _ = CONTAINER_MOVES[str(spec.id)]
        actual = event.effect["from_state"]
        if actual != expected_from.value:
            return [Violation(
                "M3", event.seq,
                f"movement {spec.id} fired with container {actual}, expected "
                f"{expected_from.value}",
                Severity.HIGH,
            )]
        return []


_MOVEMENT_ENABLING = {
    DocumentKind.DELIVERY_ORDER,
    DocumentKind.CUSTOMS_CLEARANCE,
    DocumentKind.DANGEROUS_GOODS_AUTHORIZATION,
    DocumentKind.MOORING_AUTHORIZATION,
    DocumentKind.TRANSFER_ORDER,
    DocumentKind.ACCEPTANCE_ORDER,
}


class DocumentIntegrityMonitor(Monitor):
    descriptor = MonitorDescriptor(
        "M4",
        "document-integrity",
        "no tampered or forged document is accepted by a receiving party",
    )

    def on_event(self, state, spec, event):
        if event.effect["type"] != "document":
            return []
        if event.effect["integrity"] == DocumentIntegrity.GENUINE.value:
            return []
        kind = DocumentKind(event.effect["document"])
        severity = Severity.HIGH if kind in _MOVEMENT_ENABLING else Severity.MEDIUM
        if str(spec.id) == "6.6":
            message = "container released without genuine delivery order"
        else:
            message = (
                f"{kind.value} accepted by {event.effect['to']} on {spec.id} is "
                f"{event.effect['integrity']}"
            )
        return [Violation("M4", event.seq, message, severity)]


# clearance -> gated movement
_CLEARANCE_GATES = (
    ("3.5a", "4.9", "loaded for export"),
    ("5.12", "5.14", "discharged at destination"),
    ("6.1", "6.4a", "released to the rail terminal"),
)


class ClearanceBeforeMovement(Monitor):
    descriptor = MonitorDescriptor(
        "M5",
        "clearance-before-loading",
        "customs clearance is genuinely delivered before the movement it gates",
    )

    def on_event(self, state, spec, event):
        violations = []
        txid = str(spec.id)
        for clearance_id, movement_id, action in _CLEARANCE_GATES:
            if txid != movement_id or event.effect["type"] != "container":
                continue
            if not state.in_scenario(clearance_id):
                continue
            instance = state.delivered_instance(clearance_id)
            if clearance_id not in state.fired or instance is None:
                violations.append(Violation(
                    "M5", event.seq,
                    f"container {action} without customs clearance ({clearance_id})",
                    Severity.HIGH,
                ))
            elif instance.integrity is not DocumentIntegrity.GENUINE:
                violations.append(Violation(
                    "M5", event.seq,
                    f"container {action} without genuine customs clearance "
                    f"({clearance_id} was {instance.integrity.value})",
                    Severity.HIGH,
                ))
        return violations


class DuplicateDelivery(Monitor):
    descriptor = MonitorDescriptor(
        "M6",
        "duplicate-delivery",
        "a document delivery identical to an earlier one indicates a replay",
    )

    def __init__(self):
        self._seen: set[tuple] = set()

    def on_event(self, state, spec, event):
        if event.effect["type"] != "document":
            return []
        key = (
            event.effect["document"],
            event.effect["issuer"],
            event.effect["from"],
            event.effect["to"],
            str(spec.id),
        )
        if key in self._seen:
            return [Violation(
                "M6", event.seq,
                f"duplicate delivery of {event.effect['document']} from "
                f"{event.effect['from']} to {event.effect['to']} on {spec.id}",
                Severity.LOW,
            )]
        self._seen.add(key)
        return []


_MONITOR_CLASSES = (
    InterchangeProvenance,
    DangerousGoodsChain,
    TransitionLegality,
    DocumentIntegrityMonitor,
    ClearanceBeforeMovement,
    DuplicateDelivery,
)


def build_monitors() -> list[Monitor]:
    """Fresh monitor instances for one run."""
    return [cls() for cls in _MONITOR_CLASSES]


def monitors() -> list[MonitorDescriptor]:
    """Descriptors of every monitor the engine runs."""
    return [cls.descriptor for cls in _MONITOR_CLASSES]
