"""Container shipping workflow simulation and architectural security assessment."""

__version__ = "0.1.0"

from portsec.catalog import (
    Actor,
    DocumentKind,
    Medium,
    Stage,
    TransactionId,
    TransactionSpec,
    full_catalog,
    parse_txid,
    prerequisites,
    validate_catalog,
)
from portsec.simulator import AdversaryAction, AdversaryKind, ShipmentTrace, replay, run
from portsec.monitors import monitors
from portsec.archmodel import SystemModel, parse_model, privilege_dominates, validate_model
from portsec.surfaces import attack_surface, cut_points, enumerate_paths, impact_surface, rank_assets
from portsec.rules import AdvisoryCatalog, Finding, check, erase_time, match_advisories
from portsec.render import render_dot

__all__ = [
    "Actor",
    "AdversaryAction",
    "AdversaryKind",
    "AdvisoryCatalog",
    "DocumentKind",
    "Finding",
    "Medium",
    "ShipmentTrace",
    "Stage",
    "SystemModel",
    "TransactionId",
    "TransactionSpec",
    "attack_surface",
    "check",
    "cut_points",
    "enumerate_paths",
    "erase_time",
    "full_catalog",
    "impact_surface",
    "match_advisories",
    "monitors",
    "parse_model",
    "parse_txid",
    "prerequisites",
    "privilege_dominates",
    "rank_assets",
    "render_dot",
    "replay",
    "run",
    "validate_catalog",
    "validate_model",
]
