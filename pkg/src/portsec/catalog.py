"""Transaction catalog for the door-to-door container shipping flow.

The flow runs in six stages (booking, forwarding, outbound customs, outbound
shipping, inbound shipping, delivery) of numbered transactions among fifteen
parties.  Each transaction moves a paper document, a digital document, the
container itself, or is a plain communication.  Numbering is chronological:
within a stage, a smaller ordinal strictly precedes a larger one, and every
transaction of an earlier stage precedes every transaction of a later stage.
Transactions sharing an ordinal and distinguished by a letter (e.g. 4.16a and
4.16b) are simultaneous and mutually unordered.

Stage ordinals are not necessarily contiguous: inbound shipping has no 5.5.

Descriptions are normative identifiers used by tests, not display prose.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from portsec.common import Defect


class Actor(str, Enum):
    EXPORTER = "Exporter"
    IMPORTER = "Importer"
    FORWARDER = "Forwarder"
    CONSIGNEE = "Consignee"
    CARGO_SHIP = "CargoShip"
    INLAND_CARRIER = "InlandCarrier"
    RAILWAY_TERMINAL = "RailwayTerminal"
    DEPOT = "Depot"
    PORT_TERMINAL = "PortTerminal"
    PORT_AUTHORITY = "PortAuthority"
    HARBOR_MASTER = "HarborMaster"
    CUSTOMS_OFFICE = "CustomsOffice"
    INSPECTION_SITE = "InspectionSite"
    STEVEDORES = "Stevedores"
    MARITIME_RESCUE = "MaritimeRescue"


class Medium(str, Enum):
    PAPER_DOCUMENT = "PaperDocument"
    DIGITAL_DOCUMENT = "DigitalDocument"
    CONTAINER_MOVEMENT = "ContainerMovement"
    COMMUNICATION = "Communication"


class DocumentKind(str, Enum):
    BILL_OF_LADING = "BillOfLading"
    ADVANCE_SHIP_NOTICE = "AdvanceShipNotice"
    DELIVERY_ORDER = "DeliveryOrder"
    ACCEPTANCE_ORDER = "AcceptanceOrder"
    TRANSFER_NOTE = "TransferNote"
    DELIVERY_NOTE = "DeliveryNote"
    UNLOADING_LIST = "UnloadingList"
    LOADING_LIST = "LoadingList"
    SINGLE_ADMINISTRATIVE_DOCUMENT = "SingleAdministrativeDocument"
    DANGEROUS_GOODS_REPORT = "DangerousGoodsReport"
    DANGEROUS_GOODS_AUTHORIZATION = "DangerousGoodsAuthorization"
    BAYPLAN = "Bayplan"
    CARGO_MANIFEST = "CargoManifest"
    ENTRY_SUMMARY_DECLARATION = "EntrySummaryDeclaration"
    SHIPMENT_INSTRUCTIONS = "ShipmentInstructions"
    PORT_CALL_NUMBER = "PortCallNumber"
    MOORING_AUTHORIZATION = "MooringAuthorization"
    CUSTOMS_CLEARANCE = "CustomsClearance"
    DEPARTURE_NOTICE = "DepartureNotice"
    CARRIAGE_DOCUMENTS = "CarriageDocuments"
    TRANSFER_ORDER = "TransferOrder"
    GOODS_AGREEMENT = "GoodsAgreement"


class Stage(str, Enum):
    BOOKING = "Booking"
    FORWARDING = "Forwarding"
    OUTBOUND_CUSTOMS = "OutboundCustoms"
    OUTBOUND_SHIPPING = "OutboundShipping"
    INBOUND_SHIPPING = "InboundShipping"
    DELIVERY = "Delivery"

    @property
    def number(self) -> int:
        return _STAGE_NUMBERS[self]

    @classmethod
    def from_number(cls, number: int) -> "Stage":
        for stage, n in _STAGE_NUMBERS.items():
            if n == number:
                return stage
        raise ValueError(f"no stage numbered {number}")


_STAGE_NUMBERS = {
    Stage.BOOKING: 1,
    Stage.FORWARDING: 2,
    Stage.OUTBOUND_CUSTOMS: 3,
    Stage.OUTBOUND_SHIPPING: 4,
    Stage.INBOUND_SHIPPING: 5,
    Stage.DELIVERY: 6,
}

# Expected transaction count per stage, in stage order.
STAGE_SIZES = {
    Stage.BOOKING: 18,
    Stage.FORWARDING: 10,
    Stage.OUTBOUND_CUSTOMS: 9,
    Stage.OUTBOUND_SHIPPING: 22,
    Stage.INBOUND_SHIPPING: 21,
    Stage.DELIVERY: 12,
}


class TransactionIdError(ValueError):
    """Raised for malformed transaction id text."""


class UnknownTransactionError(KeyError):
    """Raised when an id does not exist in the catalog."""


@dataclass(frozen=True)
class TransactionId:
    stage: int
    ordinal: int
    letter: str | None = None

    def __str__(self) -> str:
        return f"{self.stage}.{self.ordinal}{self.letter or ''}"

    @property
    def sort_key(self) -> tuple[int, int, str]:
        # Letter is only a deterministic tie-break; lettered ids are unordered.
        return (self.stage, self.ordinal, self.letter or "")


_TXID_RE = re.compile(r"^(\d+)\.(\d+)([a-z]*)$")


def parse_txid(text: str) -> TransactionId:
    """Parse the canonical "s.o" / "s.o<letter>" form; format(parse(x)) == x."""
    match = _TXID_RE.match(text)
    if match is None:
        if "." not in text:
            raise TransactionIdError(f"malformed transaction id {text!r}: missing ordinal")
        raise TransactionIdError(f"malformed transaction id {text!r}")
    stage, ordinal, letters = int(match.group(1)), int(match.group(2)), match.group(3)
    if not 1 <= stage <= 6:
        raise TransactionIdError(f"malformed transaction id {text!r}: stage {stage} outside 1..6")
    if ordinal < 1:
        raise TransactionIdError(f"malformed transaction id {text!r}: ordinal {ordinal} below 1")
    if len(letters) > 1:
        raise TransactionIdError(f"malformed transaction id {text!r}: multi-letter suffix {letters!r}")
    return TransactionId(stage, ordinal, letters or None)


@dataclass(frozen=True)
class TransactionSpec:
    id: TransactionId
    from_actor: Actor
    to_actor: Actor
    medium: Medium
    document: DocumentKind | None
    description: str

    @property
    def stage(self) -> Stage:
        return Stage.from_number(self.id.stage)


@dataclass(frozen=True)
class StageCatalog:
    stage: Stage
    transactions: tuple[TransactionSpec, ...]


_A = Actor
_M = Medium
_D = DocumentKind

# One row per numbered edge: (id, from, to, medium, document, description).
_ROWS = (
    # Stage 1: booking.
    ("1.1", _A.EXPORTER, _A.IMPORTER, _M.PAPER_DOCUMENT, _D.GOODS_AGREEMENT,
     "goods agreement on the purchase to be shipped"),
    ("1.2a", _A.EXPORTER, _A.FORWARDER, _M.COMMUNICATION, None,
     "exporter contacts the freight forwarder"),
    ("1.3", _A.FORWARDER, _A.CONSIGNEE, _M.COMMUNICATION, None,
     "forwarder requests shipment with the seaport consignee"),
    ("1.4", _A.CONSIGNEE, _A.FORWARDER, _M.COMMUNICATION, None,
     "consignee returns shipment terms"),
    ("1.5", _A.FORWARDER, _A.CONSIGNEE, _M.COMMUNICATION, None,
     "forwarder confirms the negotiated booking"),
    ("1.6a", _A.CONSIGNEE, _A.CARGO_SHIP, _M.PAPER_DOCUMENT, _D.BILL_OF_LADING,
     "bill of lading issued to the cargo ship"),
    ("1.6b", _A.CONSIGNEE, _A.FORWARDER, _M.PAPER_DOCUMENT, _D.BILL_OF_LADING,
     "bill of lading issued to the forwarder"),
    ("1.7", _A.FORWARDER, _A.EXPORTER, _M.PAPER_DOCUMENT, _D.BILL_OF_LADING,
     "bill of lading passed to the exporter"),
    ("1.8", _A.EXPORTER, _A.IMPORTER, _M.PAPER_DOCUMENT, _D.BILL_OF_LADING,
     "bill of lading passed to the importer"),
    ("1.9", _A.EXPORTER, _A.FORWARDER, _M.DIGITAL_DOCUMENT, _D.ADVANCE_SHIP_NOTICE,
     "advance ship notice announces readiness to ship"),
    ("1.10a", _A.FORWARDER, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.ADVANCE_SHIP_NOTICE,
     "advance ship notice forwarded to the consignee"),
    ("1.10b", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_REPORT,
     "dangerous goods reported to the port authority"),
    ("1.11a", _A.PORT_AUTHORITY, _A.HARBOR_MASTER, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_AUTHORIZATION,
     "dangerous goods authorization sent to the harbor master for approval"),
    ("1.11b", _A.CONSIGNEE, _A.FORWARDER, _M.DIGITAL_DOCUMENT, _D.DELIVERY_ORDER,
     "delivery order, with the acceptance order, sent to the forwarder"),
    ("1.12a", _A.HARBOR_MASTER, _A.PORT_AUTHORITY, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_AUTHORIZATION,
     "harbor master records and returns the approved authorization"),
    ("1.12b", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_AUTHORIZATION,
     "dangerous goods authorization delivered to the consignee"),
    ("1.12c", _A.FORWARDER, _A.RAILWAY_TERMINAL, _M.DIGITAL_DOCUMENT, _D.ACCEPTANCE_ORDER,
     "acceptance order passed to the railway terminal"),
    ("1.12d", _A.FORWARDER, _A.INLAND_CARRIER, _M.DIGITAL_DOCUMENT, _D.DELIVERY_ORDER,
     "delivery order passed to the inland carrier"),
    # Stage 2: forwarding.
    ("2.1", _A.INLAND_CARRIER, _A.DEPOT, _M.PAPER_DOCUMENT, _D.DELIVERY_ORDER,
     "delivery order presented at the depot to collect the container"),
    ("2.2", _A.DEPOT, _A.EXPORTER, _M.CONTAINER_MOVEMENT, None,
     "empty container hauled to the exporter"),
    ("2.3a", _A.EXPORTER, _A.RAILWAY_TERMINAL, _M.CONTAINER_MOVEMENT, None,
     "packed and sealed container hauled to the railway terminal"),
    ("2.3b", _A.EXPORTER, _A.INLAND_CARRIER, _M.PAPER_DOCUMENT, _D.DELIVERY_NOTE,
     "signed delivery note for the packed container"),
    ("2.3c", _A.INLAND_CARRIER, _A.RAILWAY_TERMINAL, _M.PAPER_DOCUMENT, _D.ACCEPTANCE_ORDER,
     "acceptance order presented at the railway terminal"),
    ("2.4a", _A.RAILWAY_TERMINAL, _A.PORT_TERMINAL, _M.CONTAINER_MOVEMENT, None,
     "container railed to the port terminal"),
    ("2.4b", _A.RAILWAY_TERMINAL, _A.INLAND_CARRIER, _M.PAPER_DOCUMENT, _D.TRANSFER_NOTE,
     "transfer note documenting the railway interchange"),
    ("2.4c", _A.RAILWAY_TERMINAL, _A.PORT_TERMINAL, _M.DIGITAL_DOCUMENT, _D.UNLOADING_LIST,
     "unloading list documenting the railed goods"),
    ("2.5a", _A.CONSIGNEE, _A.PORT_TERMINAL, _M.DIGITAL_DOCUMENT, _D.ACCEPTANCE_ORDER,
     "acceptance order sent to the terminal"),
    ("2.5b", _A.PORT_TERMINAL, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.TRANSFER_NOTE,
     "transfer note documenting the terminal interchange"),
    # Stage 3: outbound customs.
    ("3.1a", _A.PORT_TERMINAL, _A.CUSTOMS_OFFICE, _M.CONTAINER_MOVEMENT, None,
     "container taken to the customs checkpoint"),
    ("3.1b", _A.CONSIGNEE, _A.CUSTOMS_OFFICE, _M.DIGITAL_DOCUMENT, _D.SINGLE_ADMINISTRATIVE_DOCUMENT,
     "customs declaration filed as a single administrative document"),
    ("3.2", _A.CUSTOMS_OFFICE, _A.INSPECTION_SITE, _M.COMMUNICATION, None,
     "red circuit initiated: container routed to physical inspection"),
    ("3.3", _A.CUSTOMS_OFFICE, _A.INSPECTION_SITE, _M.CONTAINER_MOVEMENT, None,
     "container moved to the inspection site"),
    ("3.4a", _A.INSPECTION_SITE, _A.PORT_TERMINAL, _M.CONTAINER_MOVEMENT, None,
     "certified container returned through the checkpoint to the port terminal"),
    ("3.4b", _A.INSPECTION_SITE, _A.CUSTOMS_OFFICE, _M.DIGITAL_DOCUMENT, _D.CUSTOMS_CLEARANCE,
     "inspection certification lodged with the customs office"),
    ("3.4c", _A.CUSTOMS_OFFICE, _A.PORT_TERMINAL, _M.DIGITAL_DOCUMENT, _D.CUSTOMS_CLEARANCE,
     "certification relayed to the port terminal"),
    ("3.5a", _A.CUSTOMS_OFFICE, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.CUSTOMS_CLEARANCE,
     "clearance documentation sent to the consignee"),
    ("3.5b", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_REPORT,
     "dangerous goods at the checkpoint tracked with the port authority"),
    # Stage 4: outbound shipping.
    ("4.1", _A.CONSIGNEE, _A.PORT_TERMINAL, _M.DIGITAL_DOCUMENT, _D.SHIPMENT_INSTRUCTIONS,
     "shipment instructions sent to the terminal"),
    ("4.2", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.COMMUNICATION, None,
     "docking requested for the cargo ship"),
    ("4.3a", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.PORT_CALL_NUMBER,
     "port call number issued for the docking"),
    ("4.3b", _A.PORT_AUTHORITY, _A.HARBOR_MASTER, _M.DIGITAL_DOCUMENT, _D.PORT_CALL_NUMBER,
     "port call number recorded with the harbor master"),
    ("4.4", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.COMMUNICATION, None,
     "mooring requested for the cargo ship"),
    ("4.5a", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.MOORING_AUTHORIZATION,
     "mooring authorization granted"),
    ("4.5b", _A.PORT_AUTHORITY, _A.HARBOR_MASTER, _M.DIGITAL_DOCUMENT, _D.MOORING_AUTHORIZATION,
     "mooring authorization recorded with the harbor master"),
    ("4.6", _A.CONSIGNEE, _A.CUSTOMS_OFFICE, _M.DIGITAL_DOCUMENT, _D.LOADING_LIST,
     "loading list reported to the customs office"),
    ("4.7", _A.CARGO_SHIP, _A.PORT_TERMINAL, _M.DIGITAL_DOCUMENT, _D.BAYPLAN,
     "bayplan sent to the terminal by the docked ship"),
    ("4.8", _A.PORT_TERMINAL, _A.STEVEDORES, _M.COMMUNICATION, None,
     "stevedores engaged for unloading and loading"),
    ("4.9", _A.PORT_TERMINAL, _A.CARGO_SHIP, _M.CONTAINER_MOVEMENT, None,
     "container loaded on board by the stevedores"),
    ("4.10", _A.STEVEDORES, _A.PORT_TERMINAL, _M.COMMUNICATION, None,
     "stevedore loading completion reported"),
    ("4.11", _A.PORT_TERMINAL, _A.MARITIME_RESCUE, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_REPORT,
     "loaded dangerous goods reported to maritime rescue"),
    ("4.12", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.COMMUNICATION, None,
     "embarkation requested from the port authority"),
    ("4.13", _A.PORT_AUTHORITY, _A.HARBOR_MASTER, _M.COMMUNICATION, None,
     "embarkation reviewed with the harbor master"),
    ("4.14", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.COMMUNICATION, None,
     "embarkation authorized"),
    ("4.15", _A.CONSIGNEE, _A.CARGO_SHIP, _M.COMMUNICATION, None,
     "ship notified to embark"),
    ("4.16a", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.DIGITAL_DOCUMENT, _D.CARGO_MANIFEST,
     "cargo manifest filed with the port authority"),
    ("4.16b", _A.PORT_AUTHORITY, _A.CUSTOMS_OFFICE, _M.DIGITAL_DOCUMENT, _D.CARGO_MANIFEST,
     "cargo manifest reviewed with the customs office"),
    ("4.17a", _A.CUSTOMS_OFFICE, _A.PORT_AUTHORITY, _M.DIGITAL_DOCUMENT, _D.CARGO_MANIFEST,
     "customs returns the reviewed manifest"),
    ("4.17b", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.CARGO_MANIFEST,
     "manifest acceptance documented to the consignee"),
    ("4.18", _A.PORT_TERMINAL, _A.CARGO_SHIP, _M.DIGITAL_DOCUMENT, _D.BAYPLAN,
     "updated bayplan delivered as the ship departs"),
    # Stage 5: inbound shipping.  The numbering has no 5.5.
    ("5.1", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.COMMUNICATION, None,
     "docking requested at the receiving port"),
    ("5.2a", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.PORT_CALL_NUMBER,
     "port call number issued for the arrival"),
    ("5.2b", _A.PORT_AUTHORITY, _A.HARBOR_MASTER, _M.DIGITAL_DOCUMENT, _D.PORT_CALL_NUMBER,
     "arrival port call number recorded with the harbor master"),
    ("5.3", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.COMMUNICATION, None,
     "mooring requested for the arriving ship"),
    ("5.4a", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.MOORING_AUTHORIZATION,
     "mooring authorization granted for the arrival"),
    ("5.4b", _A.PORT_AUTHORITY, _A.HARBOR_MASTER, _M.DIGITAL_DOCUMENT, _D.MOORING_AUTHORIZATION,
     "arrival mooring authorization recorded with the harbor master"),
    ("5.6", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_REPORT,
     "inbound dangerous goods reported to the port authority"),
    ("5.7", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_AUTHORIZATION,
     "inbound dangerous goods authorized"),
    ("5.8", _A.PORT_AUTHORITY, _A.HARBOR_MASTER, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_AUTHORIZATION,
     "inbound authorization recorded by the harbor master"),
    ("5.9a", _A.CONSIGNEE, _A.PORT_AUTHORITY, _M.DIGITAL_DOCUMENT, _D.ENTRY_SUMMARY_DECLARATION,
     "entry summary declaration filed"),
    ("5.9b", _A.PORT_AUTHORITY, _A.CUSTOMS_OFFICE, _M.DIGITAL_DOCUMENT, _D.ENTRY_SUMMARY_DECLARATION,
     "entry summary declaration forwarded to customs"),
    ("5.10a", _A.CUSTOMS_OFFICE, _A.PORT_AUTHORITY, _M.COMMUNICATION, None,
     "entry summary declaration accepted"),
    ("5.10b", _A.PORT_AUTHORITY, _A.CONSIGNEE, _M.COMMUNICATION, None,
     "declaration acceptance relayed to the consignee"),
    ("5.11a", _A.CONSIGNEE, _A.CUSTOMS_OFFICE, _M.DIGITAL_DOCUMENT, _D.SINGLE_ADMINISTRATIVE_DOCUMENT,
     "single administrative document filed at the destination"),
    ("5.11b", _A.CONSIGNEE, _A.CUSTOMS_OFFICE, _M.DIGITAL_DOCUMENT, _D.UNLOADING_LIST,
     "unloading list filed with customs"),
    ("5.12", _A.CUSTOMS_OFFICE, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.CUSTOMS_CLEARANCE,
     "inbound customs clearance granted"),
    ("5.13", _A.PORT_TERMINAL, _A.STEVEDORES, _M.COMMUNICATION, None,
     "stevedores engaged to work the arriving ship"),
    ("5.14", _A.CARGO_SHIP, _A.PORT_TERMINAL, _M.CONTAINER_MOVEMENT, None,
     "container discharged at the destination terminal"),
    ("5.15", _A.STEVEDORES, _A.PORT_TERMINAL, _M.COMMUNICATION, None,
     "discharge completion reported"),
    ("5.16", _A.PORT_TERMINAL, _A.PORT_AUTHORITY, _M.DIGITAL_DOCUMENT, _D.DANGEROUS_GOODS_REPORT,
     "dangerous goods yard locations reported"),
    ("5.17", _A.PORT_TERMINAL, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.CARGO_MANIFEST,
     "manifest of dangerous goods sent to the consignee"),
    # Stage 6: delivery.
    ("6.1", _A.CONSIGNEE, _A.PORT_TERMINAL, _M.DIGITAL_DOCUMENT, _D.CUSTOMS_CLEARANCE,
     "customs clearance, with the delivery order, sent to the terminal"),
    ("6.2", _A.CONSIGNEE, _A.RAILWAY_TERMINAL, _M.DIGITAL_DOCUMENT, _D.TRANSFER_ORDER,
     "transfer order for the outbound rail move"),
    ("6.3", _A.RAILWAY_TERMINAL, _A.PORT_TERMINAL, _M.DIGITAL_DOCUMENT, _D.LOADING_LIST,
     "loading and unloading list for internal transport"),
    ("6.4a", _A.PORT_TERMINAL, _A.RAILWAY_TERMINAL, _M.CONTAINER_MOVEMENT, None,
     "container moved to the railway terminal"),
    ("6.4b", _A.PORT_TERMINAL, _A.CONSIGNEE, _M.DIGITAL_DOCUMENT, _D.DEPARTURE_NOTICE,
     "departure notice returned to the consignee"),
    ("6.4c", _A.PORT_TERMINAL, _A.RAILWAY_TERMINAL, _M.DIGITAL_DOCUMENT, _D.ACCEPTANCE_ORDER,
     "acceptance document accompanying the container"),
    ("6.5", _A.CONSIGNEE, _A.INLAND_CARRIER, _M.DIGITAL_DOCUMENT, _D.CARRIAGE_DOCUMENTS,
     "carriage documents for the final haul"),
    ("6.6", _A.INLAND_CARRIER, _A.RAILWAY_TERMINAL, _M.PAPER_DOCUMENT, _D.DELIVERY_ORDER,
     "delivery order presented to take the container"),
    ("6.7a", _A.RAILWAY_TERMINAL, _A.IMPORTER, _M.CONTAINER_MOVEMENT, None,
     "container delivered to the importer and unloaded"),
    ("6.7b", _A.RAILWAY_TERMINAL, _A.INLAND_CARRIER, _M.PAPER_DOCUMENT, _D.TRANSFER_NOTE,
     "transfer note documenting the delivery interchange"),
    ("6.8a", _A.IMPORTER, _A.DEPOT, _M.CONTAINER_MOVEMENT, None,
     "empty container returned to the depot for storage"),
    ("6.8b", _A.INLAND_CARRIER, _A.DEPOT, _M.PAPER_DOCUMENT, _D.ACCEPTANCE_ORDER,
     "acceptance order presented with the returned container"),
)


def _build() -> tuple[TransactionSpec, ...]:
    specs = tuple(
        TransactionSpec(parse_txid(txid), frm, to, medium, document, description)
        for txid, frm, to, medium, document, description in _ROWS
    )
    return tuple(sorted(specs, key=lambda s: s.id.sort_key))


_CATALOG: tuple[TransactionSpec, ...] = _build()
_BY_ID: dict[str, TransactionSpec] = {str(s.id): s for s in _CATALOG}


def full_catalog() -> list[TransactionSpec]:
    """All 92 transactions in stable (stage, ordinal, letter) order."""
    return list(_CATALOG)


def stage_catalogs() -> list[StageCatalog]:
    """The catalog grouped into the six ordered stages."""
    groups: dict[Stage, list[TransactionSpec]] = {stage: [] for stage in Stage}
    for spec in _CATALOG:
        groups[spec.stage].append(spec)
    return [StageCatalog(stage, tuple(specs)) for stage, specs in groups.items()]


def transaction(txid: TransactionId | str) -> TransactionSpec:
    key = str(txid) if isinstance(txid, TransactionId) else str(parse_txid(txid))
    try:
        return _BY_ID[key]
    except KeyError:
        raise UnknownTransactionError(f"no transaction {key} in catalog") from None


def prerequisites(txid: TransactionId | str) -> set[TransactionId]:
    """Every id that must precede `txid`: earlier stages plus smaller ordinals
    of the same stage.  Lettered ids sharing stage and ordinal are unordered."""
    target = transaction(txid).id
    result = set()
    for spec in _CATALOG:
        other = spec.id
        if other.stage < target.stage:
            result.add(other)
        elif other.stage == target.stage and other.ordinal < target.ordinal:
            result.add(other)
    return result


def validate_catalog(specs: list[TransactionSpec] | None = None) -> list[Defect]:
    """Structural checks; empty for the built-in catalog."""
    if specs is None:
        specs = list(_CATALOG)
    defects: list[Defect] = []
    seen: set[str] = set()
    for spec in specs:
        key = str(spec.id)
        if key in seen:
            defects.append(Defect("duplicate-id", key, f"transaction id {key} appears more than once"))
        seen.add(key)
        for endpoint in (spec.from_actor, spec.to_actor):
            if not isinstance(endpoint, Actor):
                defects.append(Defect("endpoint", key, f"{key} endpoint {endpoint!r} is not a known actor"))
        if spec.from_actor == spec.to_actor:
            defects.append(Defect("self-loop", key, f"{key} has identical endpoints"))
        carries = spec.medium in (Medium.PAPER_DOCUMENT, Medium.DIGITAL_DOCUMENT)
        if carries and spec.document is None:
            defects.append(Defect("document-medium", key, f"{key} is a document transaction without a document kind"))
        if not carries and spec.document is not None:
            defects.append(Defect("document-medium", key, f"{key} is a {spec.medium.value} transaction naming a document"))
    counts: dict[int, int] = {}
    for spec in specs:
        counts[spec.id.stage] = counts.get(spec.id.stage, 0) + 1
    for stage, expected in STAGE_SIZES.items():
        actual = counts.get(stage.number, 0)
        if actual != expected:
            defects.append(Defect(
                "stage-count", stage.value,
                f"stage {stage.value} has {actual} transactions, expected {expected}"))
    return defects


def catalog_to_json(specs: list[TransactionSpec] | None = None) -> list[dict]:
    """Interchange form: one object per transaction, stable order."""
    if specs is None:
        specs = list(_CATALOG)
    return [
        {
            "id": str(s.id),
            "stage": s.stage.value,
            "from": s.from_actor.value,
            "to": s.to_actor.value,
            "medium": s.medium.value,
            "document": s.document.value if s.document else None,
            "description": s.description,
        }
        for s in specs
    ]


def catalog_from_json(data: list[dict]) -> list[TransactionSpec]:
    specs = []
    for entry in data:
        document = entry.get("document")
        spec = TransactionSpec(
            id=parse_txid(entry["id"]),
            from_actor=Actor(entry["from"]),
            to_actor=Actor(entry["to"]),
            medium=Medium(entry["medium"]),
            document=DocumentKind(document) if document else None,
            description=entry["description"],
        )
        expected_stage = Stage(entry["stage"])
        if spec.stage is not expected_stage:
            raise ValueError(f"transaction {entry['id']} declared in stage {entry['stage']}")
        specs.append(spec)
    return specs
