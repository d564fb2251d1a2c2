"""Decidable weakness rules over a system model.

Seven rule classes, each a pure predicate over the model (plus an offline
advisory catalog for dependency checks):

  R1  cleartext channel carrying credentials or session ids
  R2  authorization decided on client-supplied data never revalidated server side
  R3  service reachable from an entry point without per-request authorization
  R4  file service that does not sanitize paths and can write or delete
  R5  recoverable password storage or a leaked encryption key location
  R6  log whose rotation lets an entry-reachable writer erase history
  R7  dependency version inside a known advisory range

Findings are deterministic: ordered by severity, rule id, then subjects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from portsec.archmodel import (
    AccessMode,
    ChannelPayload,
    Dependency,
    KeyLocation,
    PasswordStorage,
    ResourceKind,
    SystemModel,
)
from portsec.common import Severity
from portsec.surfaces import build_graph, _reachable

RULE_IDS = ("R1", "R2", "R3", "R4", "R5", "R6", "R7")

# One class tag per finding family in the published assessment taxonomy.
PAPER_CLASSES = {
    "R1": "unencrypted-traffic",
    "R2": "improper-authorization-design",
    "R3": "unchecked-client-authorization",
    "R4": "file-service-path-traversal",
    "R5": "recoverable-password-storage",
    "R6": "log-history-erasure",
    "R7": "vulnerable-third-party-components",
}

DEFAULT_INJECT_RATE = 1000  # log entries per second an attacker can add


@dataclass(frozen=True)
class LogErasureEstimate:
    seconds: Fraction
    max_files: int
    entries_per_file: int
    inject_rate: Fraction

    def to_dict(self) -> dict:
        return {
            "seconds": str(self.seconds),
            "max_files": self.max_files,
            "entries_per_file": self.entries_per_file,
            "inject_rate": str(self.inject_rate),
        }


@dataclass(frozen=True)
class Finding:
    rule: str
    severity: Severity
    subjects: tuple[str, ...]
    message: str
    paper_class: str
    estimate: LogErasureEstimate | None = None

    def to_dict(self) -> dict:
        entry = {
            "rule": self.rule,
            "severity": self.severity.value,
            "subjects": list(self.subjects),
            "message": self.message,
            "paper_class": self.paper_class,
        }
        if self.estimate is not None:
            entry["estimate"] = self.estimate.to_dict()
        return entry


class AdvisoryError(ValueError):
    """Malformed advisory catalog."""


@dataclass(frozen=True)
class AdvisoryEntry:
    package: str
    min_version: str
    max_version: str
    advisory_id: str


@dataclass(frozen=True)
class AdvisoryCatalog:
    entries: tuple[AdvisoryEntry, ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> "AdvisoryCatalog":
        entries = []
        for raw in data.get("entries", []):
            entry = AdvisoryEntry(raw["package"], raw["min"], raw["max"], raw["advisory_id"])
            try:
                low, high = parse_version(entry.min_version), parse_version(entry.max_version)
            except ValueError as exc:
                raise AdvisoryError(f"advisory {entry.advisory_id}: {exc}") from exc
            if _pad(low) > _pad(high):
                raise AdvisoryError(
                    f"advisory {entry.advisory_id}: range minimum {entry.min_version} "
                    f"exceeds maximum {entry.max_version}"
                )
            entries.append(entry)
        return cls(tuple(entries))

    @classmethod
    def load(cls, path) -> "AdvisoryCatalog":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


def parse_version(text: str) -> tuple[int, ...]:
    """1-4 dot-separated non-negative integers; no pre-release tags."""
    parts = text.split(".")
    if not 1 <= len(parts) <= 4 or not all(p.isdigit() for p in parts):
        raise ValueError(f"unparseable version {text!r}")
    return tuple(int(p) for p in parts)


def _pad(version: tuple[int, ...]) -> tuple[int, int, int, int]:
    return tuple(version[i] if i < len(version) else 0 for i in range(4))


def version_in_range(version: str, low: str, high: str) -> bool:
    """Inclusive component-wise comparison; missing components count as zero."""
    v = _pad(parse_version(version))
    return _pad(parse_version(low)) <= v <= _pad(parse_version(high))


def match_advisories(
    deps: list[Dependency], catalog: AdvisoryCatalog
) -> list[tuple[Dependency, str]]:
    """Dependencies whose version falls inside an advisory range.

    Dependencies with unparseable versions are skipped here; check() reports
    them as error findings.
    """
    matches = []
    for dep in deps:
        try:
            parse_version(dep.version)
        except ValueError:
            continue
        for entry in catalog.entries:
            if entry.package == dep.package and version_in_range(
                dep.version, entry.min_version, entry.max_version
            ):
                matches.append((dep, entry.advisory_id))
    return matches


def erase_time(max_files: int, entries_per_file: int, inject_rate) -> LogErasureEstimate:
    """Seconds to cycle a rotated log's entire history at the given inject rate."""
    rate = Fraction(inject_rate)
    if max_files <= 0 or entries_per_file <= 0 or rate <= 0:
        raise ValueError("erase_time requires positive max_files, entries_per_file and inject_rate")
    seconds = Fraction(max_files * entries_per_file) / rate
    return LogErasureEstimate(seconds, max_files, entries_per_file, rate)


def _entry_reachable_components(model: SystemModel) -> set[str]:
    graph = build_graph(model)
    reachable = set()
    for component in model.components:
        if any(_reachable(graph, entry.id, component.id) for entry in model.entry_points):
            reachable.add(component.id)
    return reachable


def check(
    model: SystemModel,
    rules=None,
    advisories: AdvisoryCatalog | None = None,
    inject_rate=DEFAULT_INJECT_RATE,
) -> list[Finding]:
    """Evaluate the selected rules (default: all) against the model."""
    selected = set(RULE_IDS if rules is None else rules)
    unknown = selected - set(RULE_IDS)
    if unknown:
        raise ValueError(f"unknown rule ids: {sorted(unknown)}")
    advisories = advisories or AdvisoryCatalog()
    findings: list[Finding] = []

    reachable = _entry_reachable_components(model)
    entry_ids = {e.id for e in model.entry_points}

    if "R1" in selected:
        for channel in model.channels:
            sensitive = channel.carries & {ChannelPayload.CREDENTIALS, ChannelPayload.SESSION_ID}
            if channel.encrypted or not sensitive:
                continue
            exposures = ["info-exposure"]
            if ChannelPayload.SESSION_ID in sensitive:
                exposures.insert(0, "session-hijack")
            if ChannelPayload.CREDENTIALS in sensitive:
                exposures.insert(0, "password-sniff")
            findings.append(Finding(
                "R1", Severity.HIGH, (channel.source, channel.target),
                f"cleartext channel {channel.source} -> {channel.target} carries "
                f"{', '.join(sorted(p.value for p in sensitive))} "
                f"({'/'.join(exposures)})",
                PAPER_CLASSES["R1"],
            ))

    if "R2" in selected:
        for trust in model.trust:
            if trust.source in entry_ids and not trust.validated_server_side and trust.authz_relevant:
                findings.append(Finding(
                    "R2", Severity.HIGH, (trust.trusting, trust.source),
                    f"{trust.trusting} authorizes on client-supplied {trust.data!r} "
                    f"from {trust.source} without server-side validation",
                    PAPER_CLASSES["R2"],
                ))

    if "R3" in selected:
        for component in model.components:
            if component.id not in reachable:
                continue
            for service in component.services:
                if not service.authz_checked_per_request:
                    findings.append(Finding(
                        "R3", Severity.HIGH, (component.id,),
                        f"service {service.name!r} on {component.id} is reachable from "
                        f"an entry point but does not check authorization per request",
                        PAPER_CLASSES["R3"],
                    ))

    if "R4" in selected:
        destructive = {AccessMode.WRITE, AccessMode.DELETE}
        for component in model.components:
            unsafe = [s for s in component.services
                      if s.is_file_service and not s.sanitizes_paths]
            if not unsafe:
                continue
            writable = sorted(
                edge.resource for edge in model.access
                if edge.component == component.id and edge.modes & destructive
            )
            if not writable:
                continue
            for service in unsafe:
                findings.append(Finding(
                    "R4", Severity.HIGH, (component.id, *writable),
                    f"file service {service.name!r} on {component.id} does not sanitize "
                    f"paths and can write or delete {', '.join(writable)}",
                    PAPER_CLASSES["R4"],
                ))

    if "R5" in selected:
        leaky = {KeyLocation.DATABASE, KeyLocation.CONFIG, KeyLocation.LOG}
        for resource in model.resources:
            if resource.kind is not ResourceKind.CREDENTIAL_STORE:
                continue
            problems = []
            if resource.password_storage is not PasswordStorage.SALTED_HASH:
                storage = resource.password_storage.value if resource.password_storage else "unspecified"
                problems.append(f"passwords stored with {storage}")
            if resource.key_location in leaky:
                problems.append(f"encryption key kept in {resource.key_location.value}")
            if problems:
                findings.append(Finding(
                    "R5", Severity.HIGH, (resource.id,),
                    f"credential store {resource.id}: {'; '.join(problems)}",
                    PAPER_CLASSES["R5"],
                ))

    if "R6" in selected:
        for resource in model.resources:
            if resource.kind is not ResourceKind.LOG or resource.rotation is None:
                continue
            writers = sorted(
                edge.component for edge in model.access
                if edge.resource == resource.id
                and AccessMode.WRITE in edge.modes
                and edge.component in reachable
            )
            if not writers:
                continue
            estimate = erase_time(
                resource.rotation.max_files, resource.rotation.entries_per_file, inject_rate
            )
            findings.append(Finding(
                "R6", Severity.MEDIUM, (resource.id, *writers),
                f"log {resource.id} rotates after {resource.rotation.max_files} files of "
                f"{resource.rotation.entries_per_file} entries; entry-reachable "
                f"{', '.join(writers)} can erase its history in {estimate.seconds} s "
                f"at {estimate.inject_rate} entries/s",
                PAPER_CLASSES["R6"],
                estimate=estimate,
            ))

    if "R7" in selected:
        for dep in model.dependencies:
            try:
                parse_version(dep.version)
            except ValueError:
                findings.append(Finding(
                    "R7", Severity.HIGH, (dep.component,),
                    f"dependency {dep.package} of {dep.component} has unparseable "
                    f"version {dep.version!r}",
                    PAPER_CLASSES["R7"],
                ))
        for dep, advisory_id in match_advisories(list(model.dependencies), advisories):
            findings.append(Finding(
                "R7", Severity.HIGH, (dep.component,),
                f"dependency {dep.package} {dep.version} of {dep.component} falls in "
                f"advisory {advisory_id}",
                PAPER_CLASSES["R7"],
            ))

    findings.sort(key=lambda f: (-f.severity.weight, f.rule, f.subjects, f.message))
    return findings
