"""Primitives shared across modules: severity scale, validation defects, stable JSON."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum


class Severity(str, Enum):
    HIGH = "High"
    MEDIUM = "Medium"
    LOW = "Low"

    @property
    def weight(self) -> int:
        return {"High": 3, "Medium": 2, "Low": 1}[self.value]


@dataclass(frozen=True)
class Defect:
    """One structural problem reported by a validation pass (data, not an error)."""

    kind: str
    subject: str
    message: str


def canonical_dumps(payload) -> str:
    """Byte-stable JSON used for every emitted file and stream."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
