"""Grid stack file (GSF) I/O and forecast-run manifests.

A GSF file is one UTF-8 JSON header line (grid spec, variable, level, valid
time, byte order, dtype) terminated by a newline, followed by nlat*nlon raw
little-endian float32 values in row-major lat-then-lon order. One file holds
one variable at one level and time. A manifest JSON lists the files of a
forecast run, grouped by ensemble member.
"""

from __future__ import annotations

import json
from datetime import datetime
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import ManifestError
from ..ioutil import atomic_write_bytes, atomic_write_text, json_dumps
from .grid import Field, FieldSet, GridSpec

GSF_FORMAT = "GSF"
GSF_VERSION = 1
MANIFEST_FORMAT = "tcens-run-manifest"
MANIFEST_VERSION = 1


def format_time(t: datetime) -> str:
    return t.isoformat()


def parse_time(s: str) -> datetime:
    return datetime.fromisoformat(s.replace("Z", "+00:00").replace("+00:00", ""))


def write_gsf(f: Field, path: str | Path) -> None:
    """Write a field. Masked values are stored as NaN and restored on read."""
    header = {
        "format": GSF_FORMAT,
        "version": GSF_VERSION,
        "spec": {
            "lat0": f.spec.lat0,
            "lon0": f.spec.lon0,
            "dlat": f.spec.dlat,
            "dlon": f.spec.dlon,
            "nlat": f.spec.nlat,
            "nlon": f.spec.nlon,
            "wraps_lon": f.spec.wraps_lon,
        },
        "variable": f.variable,
        "level": f.level,
        "valid_time": format_time(f.valid_time),
        "byte_order": "little-endian",
        "dtype": "float32",
    }
    payload = f.masked_values().astype("<f4").tobytes()
    atomic_write_bytes(path, json.dumps(header, sort_keys=True).encode() + b"\n" + payload)


def read_gsf(path: str | Path) -> Field:
    raw = Path(path).read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise ValueError(f"{path}: missing GSF header line")
    header = json.loads(raw[:nl].decode())
    if header.get("format") != GSF_FORMAT:
        raise ValueError(f"{path}: not a GSF file")
    spec = GridSpec(**header["spec"])
    count = spec.nlat * spec.nlon
    vals = np.frombuffer(raw, dtype="<f4", count=count, offset=nl + 1)
    if vals.size != count:
        raise ValueError(f"{path}: expected {count} values, found {vals.size}")
    vals = vals.astype(np.float64).reshape(spec.shape)
    bad = ~np.isfinite(vals)
    return Field(
        spec,
        vals,
        header["variable"],
        header["level"],
        parse_time(header["valid_time"]),
        mask=bad if bad.any() else None,
    )


def write_run_manifest(
    path: str | Path,
    storm_id: str,
    init_time: datetime,
    step_hours: float,
    member_files: Mapping[int | str, Sequence[str]],
) -> None:
    """Write a manifest mapping member ids to GSF paths relative to it."""
    doc = {
        "format": MANIFEST_FORMAT,
        "version": MANIFEST_VERSION,
        "storm_id": storm_id,
        "init_time": format_time(init_time),
        "step_hours": step_hours,
        "members": [
            {"member_id": mid, "files": sorted(files)}
            for mid, files in sorted(member_files.items(), key=lambda kv: str(kv[0]))
        ],
    }
    atomic_write_text(path, json_dumps(doc))


def read_run_manifest(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != MANIFEST_FORMAT:
        raise ManifestError(f"{path}: not a run manifest")
    return doc


def manifest_member_ids(doc: dict) -> list:
    return [m["member_id"] for m in doc["members"]]


def _member_entry(doc: dict, member_id) -> dict:
    for m in doc["members"]:
        if m["member_id"] == member_id:
            return m
    raise ManifestError(f"member {member_id!r} not in manifest")


def validate_run_manifest(
    path: str | Path, required: Iterable[tuple[str, str]] = ()
) -> list[str]:
    """Collect manifest problems without loading field data.

    ``required`` lists (variable, level) pairs each member must provide at
    every time. Returns a list of human-readable issues, empty when clean.
    """
    issues: list[str] = []
    base = Path(path).parent
    try:
        doc = read_run_manifest(path)
    except (ManifestError, json.JSONDecodeError, OSError) as exc:
        return [str(exc)]
    if not doc["members"]:
        issues.append("manifest lists no members")
    required = list(required)
    for m in doc["members"]:
        mid = m["member_id"]
        if not m["files"]:
            issues.append(f"member {mid}: no files")
            continue
        by_time: dict[str, set[tuple[str, str]]] = {}
        for rel in m["files"]:
            fp = base / rel
            if not fp.exists():
                issues.append(f"member {mid}: missing file {rel}")
                continue
            try:
                with open(fp, "rb") as fh:
                    header = json.loads(fh.readline().decode())
                by_time.setdefault(header["valid_time"], set()).add(
                    (header["variable"], header["level"])
                )
            except (ValueError, KeyError) as exc:
                issues.append(f"member {mid}: unreadable header in {rel}: {exc}")
        for t, have in sorted(by_time.items()):
            for pair in required:
                if pair not in have:
                    issues.append(f"member {mid}: {pair[0]}@{pair[1]} absent at {t}")
    return issues


def load_member_run(path: str | Path, member_id) -> list[FieldSet]:
    """Load one member's fields grouped into per-time FieldSets."""
    doc = read_run_manifest(path)
    base = Path(path).parent
    entry = _member_entry(doc, member_id)
    by_time: dict[datetime, list[Field]] = {}
    for rel in entry["files"]:
        f = read_gsf(base / rel)
        by_time.setdefault(f.valid_time, []).append(f)
    return [FieldSet(by_time[t]) for t in sorted(by_time)]
