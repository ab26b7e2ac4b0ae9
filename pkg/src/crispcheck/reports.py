"""Versioned JSON reports with a determinism hash.

Re-running a script with equal budgets reproduces every verdict bit for
bit; timing fields are the one exception and are excluded from the hash.
"""

from __future__ import annotations

import hashlib
import json

SCHEMA_VERSION = 1
TIMING_KEYS = {"timing_ms", "total_timing_ms"}


def strip_timing(doc):
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items()
                if k not in TIMING_KEYS and k != "determinism_hash"}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc


def canonical_bytes(doc) -> bytes:
    """Deterministic byte form with timing removed; the comparison target
    for the determinism acceptance criterion."""
    return json.dumps(strip_timing(doc), sort_keys=True,
                      separators=(",", ":")).encode()


def determinism_hash(doc) -> str:
    return hashlib.sha256(canonical_bytes(doc)).hexdigest()


def finalize(doc: dict) -> dict:
    doc["determinism_hash"] = determinism_hash(doc)
    return doc


def input_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()
