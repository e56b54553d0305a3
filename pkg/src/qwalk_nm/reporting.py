"""Deterministic file output: CSV series, JSON documents, run manifests.

CSV cells use the shortest round-trip decimal representation (repr) so a
given configuration always produces byte-identical files; line ends are
'\\n' on every platform.  The manifest lists every emitted file with its
SHA-256 so a run can be audited later.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Iterable, Sequence

from .errors import ConfigError, IntegrityError

SCHEMA_VERSION = 1
SEED_ENV_VAR = "QWALK_NM_SEED"
MANIFEST_NAME = "manifest.json"


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # plain-float repr is the shortest round-trip decimal; the cast
        # also strips numpy scalar types, whose repr is not bare
        return repr(float(value))
    return str(value)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_cell(v) for v in row) + "\n")


def write_json(path: str, payload: dict) -> None:
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sha256_of(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: str, command: str, config: dict, conventions: dict,
                   wall_time_s: float, file_names: Sequence[str],
                   regime: dict | None = None) -> str:
    """Write manifest.json referencing every emitted file with its checksum."""
    files = {}
    for name in file_names:
        path = os.path.join(out_dir, name)
        files[name] = {"sha256": sha256_of(path), "bytes": os.path.getsize(path)}
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "regime": regime,
        "conventions": conventions,
        "seed_env": {SEED_ENV_VAR: os.environ.get(SEED_ENV_VAR)},
        "wall_time_s": wall_time_s,
        "files": files,
    }
    path = os.path.join(out_dir, MANIFEST_NAME)
    write_json(path, payload)
    return path


def audit_manifest(out_dir: str) -> list[str]:
    """Re-hash every file referenced by a manifest; return mismatch report.

    Raises ConfigError when the directory has no manifest; raises nothing
    for checksum mismatches (they are returned so the caller can decide).
    """
    path = os.path.join(out_dir, MANIFEST_NAME)
    if not os.path.isfile(path):
        raise ConfigError(f"no {MANIFEST_NAME} in {out_dir!r}")
    with open(path) as fh:
        manifest = json.load(fh)
    problems = []
    for name, entry in manifest.get("files", {}).items():
        target = os.path.join(out_dir, name)
        if not os.path.isfile(target):
            problems.append(f"{name}: missing")
            continue
        actual = sha256_of(target)
        if actual != entry.get("sha256"):
            problems.append(f"{name}: checksum mismatch")
        elif os.path.getsize(target) != entry.get("bytes"):
            problems.append(f"{name}: size mismatch")
    return problems


def require_clean_audit(out_dir: str) -> None:
    problems = audit_manifest(out_dir)
    if problems:
        raise IntegrityError("; ".join(problems))
