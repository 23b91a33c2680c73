"""Deterministic output files with embedded provenance.

Every data file carries a manifest: the canonical config that produced it, a
sha256 over that config, and the tool version.  No timestamps, hostnames or
other machine state are recorded, so rerunning the same config rewrites every
file byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import os

from ._version import __version__


def canonical_json(obj):
    """Key-sorted, whitespace-free JSON; the hashing and embedding form."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_sha256(desc):
    return hashlib.sha256(canonical_json(desc).encode("utf-8")).hexdigest()


def build_manifest(desc, **extras):
    """Manifest dict for a run described by `desc` (see describe_ensemble)."""
    manifest = {
        "tool": {"name": "dqwalk", "version": __version__},
        "config": desc,
        "config_sha256": config_sha256(desc),
    }
    manifest.update(extras)
    return manifest


def _cell(value):
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def write_text(path, text):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_csv(path, columns, rows, manifest):
    """CSV with a '# manifest: ...' comment line above the header.

    Floats are written in shortest round-trip form, so files parse back to
    the exact binary values that were computed.
    """
    lines = [f"# manifest: {canonical_json(manifest)}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    write_text(path, "\n".join(lines) + "\n")


def write_json(path, manifest, series):
    """JSON payload: the manifest plus named column arrays."""
    payload = {"manifest": manifest, "series": series}
    write_text(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def write_manifest(path, manifest):
    write_text(path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")
