"""Declarative architecture model of a port software system.

A model names hosts, principals with integer privilege ranks, components and
their services, resources with analyst-assigned value, component-to-resource
access, inter-component channels, trust relationships, user entry points and
third-party dependencies.  The JSON layout is normatively defined by
schemas/system-model.schema.json; all cross-references are string ids.

Models are immutable after parsing and safe for concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from importlib import resources

import jsonschema

from portsec.common import Defect


class ModelError(ValueError):
    """Parse or schema failure; `errors` lists every problem with its location."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


class ResourceKind(str, Enum):
    FILE = "File"
    DATABASE = "Database"
    DATABASE_TABLE = "DatabaseTable"
    LOG = "Log"
    CONFIG = "Config"
    CREDENTIAL_STORE = "CredentialStore"
    DEVICE = "Device"


class ValueLevel(str, Enum):
    HIGH = "High"
    MEDIUM = "Medium"
    LOW = "Low"

    @property
    def weight(self) -> int:
        return {"High": 3, "Medium": 2, "Low": 1}[self.value]


class ChannelPayload(str, Enum):
    CREDENTIALS = "Credentials"
    SESSION_ID = "SessionId"
    DOCUMENTS = "Documents"
    COMMANDS = "Commands"


class AccessMode(str, Enum):
    READ = "Read"
    WRITE = "Write"
    DELETE = "Delete"


class PasswordStorage(str, Enum):
    PLAINTEXT = "plaintext"
    TWO_WAY_ENCRYPTION = "two_way_encryption"
    SALTED_HASH = "salted_hash"


class KeyLocation(str, Enum):
    NONE = "none"
    DATABASE = "database"
    CONFIG = "config"
    LOG = "log"
    EXTERNAL = "external"


@dataclass(frozen=True)
class Host:
    name: str


@dataclass(frozen=True)
class Principal:
    name: str
    rank: int


@dataclass(frozen=True)
class Service:
    name: str
    authz_checked_per_request: bool
    validates_input: bool
    sanitizes_paths: bool | None = None  # file services only

    @property
    def is_file_service(self) -> bool:
        return self.sanitizes_paths is not None


@dataclass(frozen=True)
class Component:
    id: str
    host: str
    runs_as: str
    services: tuple[Service, ...] = ()


@dataclass(frozen=True)
class Rotation:
    max_files: int
    entries_per_file: int


@dataclass(frozen=True)
class Resource:
    id: str
    kind: ResourceKind
    value: ValueLevel
    owner: str
    password_storage: PasswordStorage | None = None
    key_location: KeyLocation | None = None
    rotation: Rotation | None = None


@dataclass(frozen=True)
class AccessEdge:
    component: str
    resource: str
    modes: frozenset[AccessMode]


@dataclass(frozen=True)
class Channel:
    source: str
    target: str
    encrypted: bool
    carries: frozenset[ChannelPayload]
    authenticated: bool


@dataclass(frozen=True)
class TrustEdge:
    trusting: str
    source: str  # component id or entry point id
    data: str
    validated_server_side: bool
    authz_relevant: bool = False


@dataclass(frozen=True)
class EntryPoint:
    id: str
    actor_role: str
    component: str
    authenticated: bool


@dataclass(frozen=True)
class Dependency:
    component: str
    package: str
    version: str


@dataclass(frozen=True)
class SystemModel:
    hosts: tuple[Host, ...] = ()
    principals: tuple[Principal, ...] = ()
    components: tuple[Component, ...] = ()
    resources: tuple[Resource, ...] = ()
    access: tuple[AccessEdge, ...] = ()
    channels: tuple[Channel, ...] = ()
    trust: tuple[TrustEdge, ...] = ()
    entry_points: tuple[EntryPoint, ...] = ()
    dependencies: tuple[Dependency, ...] = ()

    @cached_property
    def hosts_by_name(self) -> dict[str, Host]:
        return {h.name: h for h in self.hosts}

    @cached_property
    def principals_by_name(self) -> dict[str, Principal]:
        return {p.name: p for p in self.principals}

    @cached_property
    def components_by_id(self) -> dict[str, Component]:
        return {c.id: c for c in self.components}

    @cached_property
    def resources_by_id(self) -> dict[str, Resource]:
        return {r.id: r for r in self.resources}

    @cached_property
    def entry_points_by_id(self) -> dict[str, EntryPoint]:
        return {e.id: e for e in self.entry_points}


def model_schema() -> dict:
    text = resources.files("portsec").joinpath("schemas/system-model.schema.json").read_text()
    return json.loads(text)


def _json_path(error: jsonschema.ValidationError) -> str:
    parts = ["$"]
    for element in error.absolute_path:
        if isinstance(element, int):
            parts.append(f"[{element}]")
        else:
            parts.append(f".{element}")
    return "".join(parts)


def parse_model(document: str | dict) -> SystemModel:
    """Parse and fully validate a model document (JSON text or parsed object).

    Raises ModelError carrying every schema violation, dangling reference or
    invariant breach with its location.
    """
    if isinstance(document, str):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ModelError(
                [f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"]
            ) from exc
    else:
        data = document

    if isinstance(data, dict):
        for key in ("entry_points", "resources"):
            if key not in data:
                raise ModelError([f"missing {key}"])

    schema_errors = sorted(
        jsonschema.Draft7Validator(model_schema()).iter_errors(data),
        key=lambda e: list(e.absolute_path),
    )
    if schema_errors:
        raise ModelError([f"{_json_path(e)}: {e.message}" for e in schema_errors])

    model = _build_model(data)
    defects = validate_model(model)
    if defects:
        raise ModelError([f"{d.kind} ({d.subject}): {d.message}" for d in defects])
    return model


def load_model(path) -> SystemModel:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_model(handle.read())


def _build_model(data: dict) -> SystemModel:
    def service(entry: dict) -> Service:
        return Service(
            name=entry["name"],
            authz_checked_per_request=entry["authz_checked_per_request"],
            validates_input=entry["validates_input"],
            sanitizes_paths=entry.get("sanitizes_paths"),
        )

    def resource(entry: dict) -> Resource:
        attrs = entry.get("attrs", {})
        rotation = attrs.get("rotation")
        return Resource(
            id=entry["id"],
            kind=ResourceKind(entry["kind"]),
            value=ValueLevel(entry["value"]),
            owner=entry["owner"],
            password_storage=(
                PasswordStorage(attrs["password_storage"]) if "password_storage" in attrs else None
            ),
            key_location=(
                KeyLocation(attrs["key_location"]) if "key_location" in attrs else None
            ),
            rotation=Rotation(rotation["max_files"], rotation["entries_per_file"]) if rotation else None,
        )

    return SystemModel(
        hosts=tuple(Host(h["name"]) for h in data["hosts"]),
        principals=tuple(Principal(p["name"], p["rank"]) for p in data["principals"]),
        components=tuple(
            Component(c["id"], c["host"], c["runs_as"], tuple(service(s) for s in c["services"]))
            for c in data["components"]
        ),
        resources=tuple(resource(r) for r in data["resources"]),
        access=tuple(
            AccessEdge(a["component"], a["resource"], frozenset(AccessMode(m) for m in a["modes"]))
            for a in data["access"]
        ),
        channels=tuple(
            Channel(
                c["source"], c["target"], c["encrypted"],
                frozenset(ChannelPayload(p) for p in c["carries"]), c["authenticated"],
            )
            for c in data["channels"]
        ),
        trust=tuple(
            TrustEdge(
                t["trusting"], t["source"], t["data"], t["validated_server_side"],
                t.get("authz_relevant", False),
            )
            for t in data["trust"]
        ),
        entry_points=tuple(
            EntryPoint(e["id"], e["actor_role"], e["component"], e["authenticated"])
            for e in data["entry_points"]
        ),
        dependencies=tuple(
            Dependency(d["component"], d["package"], d["version"]) for d in data["dependencies"]
        ),
    )


def _version_parses(text: str) -> bool:
    parts = text.split(".")
    return 1 <= len(parts) <= 4 and all(p.isdigit() for p in parts)


def validate_model(model: SystemModel) -> list[Defect]:
    """Every invariant as data defects; empty for the bundled corpus."""
    defects: list[Defect] = []

    def unique(kind: str, names: list[str]) -> None:
        seen: set[str] = set()
        for name in names:
            if name in seen:
                defects.append(Defect(f"duplicate-{kind}", name, f"{kind} {name!r} is not unique"))
            seen.add(name)

    unique("host", [h.name for h in model.hosts])
    unique("principal", [p.name for p in model.principals])
    unique("component", [c.id for c in model.components])
    unique("resource", [r.id for r in model.resources])
    unique("entry-point", [e.id for e in model.entry_points])

    # Component, resource and entry ids share the analysis graph namespace.
    shared: dict[str, str] = {}
    for kind, ids in (
        ("component", [c.id for c in model.components]),
        ("resource", [r.id for r in model.resources]),
        ("entry-point", [e.id for e in model.entry_points]),
    ):
        for item in ids:
            if item in shared and shared[item] != kind:
                defects.append(Defect(
                    "id-collision", item,
                    f"id {item!r} used as both {shared[item]} and {kind}"))
            shared.setdefault(item, kind)

    hosts = {h.name for h in model.hosts}
    principals = {p.name for p in model.principals}
    components = {c.id for c in model.components}
    resources_ = {r.id for r in model.resources}
    entries = {e.id for e in model.entry_points}

    for component in model.components:
        if component.host not in hosts:
            defects.append(Defect("dangling-host", component.id,
                                  f"component {component.id} runs on unknown host {component.host!r}"))
        if component.runs_as not in principals:
            defects.append(Defect("dangling-principal", component.id,
                                  f"component {component.id} runs as unknown principal {component.runs_as!r}"))
        unique("service", [s.name for s in component.services])

    for resource in model.resources:
        if resource.owner not in principals:
            defects.append(Defect("dangling-owner", resource.id,
                                  f"resource {resource.id} owned by unknown principal {resource.owner!r}"))
        if resource.kind is ResourceKind.CREDENTIAL_STORE and resource.password_storage is None:
            defects.append(Defect("credential-store-attrs", resource.id,
                                  f"credential store {resource.id} lacks password_storage"))
        if resource.rotation is not None:
            if resource.rotation.max_files < 1 or resource.rotation.entries_per_file < 1:
                defects.append(Defect("rotation-positive", resource.id,
                                      f"log {resource.id} rotation values must be positive"))

    for edge in model.access:
        if edge.component not in components:
            defects.append(Defect("dangling-component", edge.component,
                                  f"access edge names unknown component {edge.component!r}"))
        if edge.resource not in resources_:
            defects.append(Defect("dangling-resource", edge.resource,
                                  f"access edge names unknown resource {edge.resource!r}"))

    for channel in model.channels:
        for endpoint in (channel.source, channel.target):
            if endpoint not in components:
                defects.append(Defect("dangling-component", endpoint,
                                      f"channel endpoint {endpoint!r} is not a component"))
        if channel.source == channel.target:
            defects.append(Defect("channel-self-loop", channel.source,
                                  f"channel endpoints must differ ({channel.source!r})"))

    for trust in model.trust:
        if trust.trusting not in components:
            defects.append(Defect("dangling-component", trust.trusting,
                                  f"trust edge trusting unknown component {trust.trusting!r}"))
        if trust.source not in components and trust.source not in entries:
            defects.append(Defect("dangling-source", trust.source,
                                  f"trust source {trust.source!r} is neither component nor entry point"))

    for entry in model.entry_points:
        if entry.component not in components:
            defects.append(Defect("dangling-component", entry.id,
                                  f"entry point {entry.id} targets unknown component {entry.component!r}"))

    for dependency in model.dependencies:
        if dependency.component not in components:
            defects.append(Defect("dangling-component", dependency.component,
                                  f"dependency names unknown component {dependency.component!r}"))
        if not _version_parses(dependency.version):
            defects.append(Defect("version-format", dependency.package,
                                  f"dependency {dependency.package} version {dependency.version!r} "
                                  f"is not 1-4 dot-separated integers"))

    if not model.entry_points:
        defects.append(Defect("missing-entry-points", "model", "model has no entry points"))
    if not model.resources:
        defects.append(Defect("missing-resources", "model", "model has no resources"))
    return defects


def privilege_dominates(model: SystemModel, a: Principal | str, b: Principal | str) -> bool:
    """True iff principal `a` runs at a rank at least `b`'s within `model`."""
    def resolve(principal: Principal | str) -> Principal:
        if isinstance(principal, Principal):
            own = model.principals_by_name.get(principal.name)
            if own is None or own.rank != principal.rank:
                raise ValueError(f"principal {principal.name!r} does not belong to this model")
            return own
        found = model.principals_by_name.get(principal)
        if found is None:
            raise ValueError(f"unknown principal {principal!r}")
        return found

    return resolve(a).rank >= resolve(b).rank


def serialize_model(model: SystemModel) -> dict:
    """Schema-shaped dict; parse(serialize(parse(x))) is a fixed point."""
    def resource(r: Resource) -> dict:
        entry: dict = {"id": r.id, "kind": r.kind.value, "value": r.value.value, "owner": r.owner}
        attrs: dict = {}
        if r.password_storage is not None:
            attrs["password_storage"] = r.password_storage.value
        if r.key_location is not None:
            attrs["key_location"] = r.key_location.value
        if r.rotation is not None:
            attrs["rotation"] = {
                "max_files": r.rotation.max_files,
                "entries_per_file": r.rotation.entries_per_file,
            }
        if attrs:
            entry["attrs"] = attrs
        return entry

    def service(s: Service) -> dict:
        entry = {
            "name": s.name,
            "authz_checked_per_request": s.authz_checked_per_request,
            "validates_input": s.validates_input,
        }
        if s.sanitizes_paths is not None:
            entry["sanitizes_paths"] = s.sanitizes_paths
        return entry

    return {
        "hosts": [{"name": h.name} for h in model.hosts],
        "principals": [{"name": p.name, "rank": p.rank} for p in model.principals],
        "components": [
            {"id": c.id, "host": c.host, "runs_as": c.runs_as,
             "services": [service(s) for s in c.services]}
            for c in model.components
        ],
        "resources": [resource(r) for r in model.resources],
        "access": [
            {"component": a.component, "resource": a.resource,
             "modes": sorted(m.value for m in a.modes)}
            for a in model.access
        ],
        "channels": [
            {"source": c.source, "target": c.target, "encrypted": c.encrypted,
             "carries": sorted(p.value for p in c.carries), "authenticated": c.authenticated}
            for c in model.channels
        ],
        "trust": [
            {"trusting": t.trusting, "source": t.source, "data": t.data,
             "validated_server_side": t.validated_server_side, "authz_relevant": t.authz_relevant}
            for t in model.trust
        ],
        "entry_points": [
            {"id": e.id, "actor_role": e.actor_role, "component": e.component,
             "authenticated": e.authenticated}
            for e in model.entry_points
        ],
        "dependencies": [
            {"component": d.component, "package": d.package, "version": d.version}
            for d in model.dependencies
        ],
    }
