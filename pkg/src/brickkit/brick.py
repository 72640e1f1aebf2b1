"""Packing a directory tree into a brick and getting it back out.

A brick is an ordinary directory: one payload file per source file at the
same relative path, plus a BRICK-MANIFEST index written last, so a brick
with a manifest is by construction a completely written brick.

Verification has two depths. The shallow pass proves the stored payloads
are the ones the manifest describes (existence, size, payload digest).
The deep pass additionally decodes every payload and proves the original
bytes are recoverable (authentication, decompression, plaintext digest).
"""

from __future__ import annotations

import os
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import payload as payload_mod
from .errors import ConfigError, IntegrityError
from .manifest import (
    DEFAULT_KDF_ITERATIONS,
    MANIFEST_FILENAME,
    ChunkEntry,
    KdfParams,
    Manifest,
    check_relative_path,
    is_encrypted,
    parse_manifest,
    serialize_manifest,
    sorted_entries,
    validate_chain,
)

# Shallow findings, ordered by precedence; deep adds the last three.
KIND_MISSING = "missing-payload"
KIND_SIZE = "size-mismatch"
KIND_PAYLOAD_DIGEST = "payload-digest-mismatch"
KIND_EXTRA = "extra-file"
KIND_DECODE = "decode-failure"
KIND_PLAIN_SIZE = "plain-size-mismatch"
KIND_PLAIN_DIGEST = "plain-digest-mismatch"


def _default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


@dataclass(frozen=True)
class PackResult:
    manifest: Manifest
    brick_dir: Path
    plain_bytes: int
    payload_bytes: int


@dataclass(frozen=True)
class Finding:
    """One defect found in one stored file."""

    path: str
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.path}: {self.detail}"


@dataclass(frozen=True)
class VerifyReport:
    brick_dir: Path
    entry_count: int
    bytes_checked: int
    deep: bool
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings


@dataclass(frozen=True)
class UnpackResult:
    dest_dir: Path
    file_count: int
    bytes_written: int


def _require_empty_dir(target: Path, what: str) -> None:
    if target.exists():
        if not target.is_dir():
            raise ConfigError(f"{what} {target} exists and is not a directory")
        if any(target.iterdir()):
            raise ConfigError(f"{what} {target} is not empty")


def _collect_source(source_dir: Path) -> list[tuple[str, Path]]:
    """Map the tree to (stored path, real path), enforcing what a brick can hold."""
    found: list[tuple[str, Path]] = []
    seen: dict[str, str] = {}
    for real in sorted(source_dir.rglob("*")):
        relative = real.relative_to(source_dir).as_posix()
        if real.is_symlink() or not (real.is_file() or real.is_dir()):
            raise ConfigError(f"{relative}: only regular files can be packed")
        if real.is_dir():
            continue
        stored = unicodedata.normalize("NFC", relative)
        try:
            check_relative_path(stored)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if stored == MANIFEST_FILENAME:
            raise ConfigError(f"source contains a file named {MANIFEST_FILENAME}")
        if stored in seen:
            raise ConfigError(
                f"{relative!r} and {seen[stored]!r} normalize to the same stored path"
            )
        seen[stored] = relative
        found.append((stored, real))
    return found


def _resolve_key(
    chain: tuple[str, ...], passphrase: str | None, kdf: KdfParams | None
) -> bytes | None:
    if not is_encrypted(chain):
        return None
    if passphrase is None:
        raise ConfigError("codec chain encrypts but no passphrase was provided")
    assert kdf is not None
    return payload_mod.derive_key(passphrase, kdf)


def pack(
    source_dir: Path,
    brick_dir: Path,
    dataset_name: str | None = None,
    codec_chain: tuple[str, ...] = ("none",),
    passphrase: str | None = None,
    kdf_iterations: int = DEFAULT_KDF_ITERATIONS,
    workers: int | None = None,
) -> PackResult:
    """Pack source_dir into a new brick at brick_dir."""
    source_dir = Path(source_dir)
    brick_dir = Path(brick_dir)
    if not source_dir.is_dir():
        raise ConfigError(f"source {source_dir} is not a directory")
    _require_empty_dir(brick_dir, "destination")
    try:
        chain = validate_chain(codec_chain)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    kdf = None
    if is_encrypted(chain):
        kdf = KdfParams(iterations=kdf_iterations, salt=payload_mod.new_salt())
    elif passphrase is not None:
        raise ConfigError("passphrase provided but the codec chain does not encrypt")
    key = _resolve_key(chain, passphrase, kdf)

    files = _collect_source(source_dir)
    brick_dir.mkdir(parents=True, exist_ok=True)

    def store(item: tuple[str, Path]) -> ChunkEntry:
        stored, real = item
        plain = real.read_bytes()
        encoded = payload_mod.encode_payload(plain, chain, key)
        out = brick_dir / stored
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(encoded)
        return ChunkEntry(
            path=stored,
            plain_size=len(plain),
            plain_sha256=payload_mod.sha256_hex(plain),
            payload_size=len(encoded),
            payload_sha256=payload_mod.sha256_hex(encoded),
        )

    with ThreadPoolExecutor(max_workers=workers or _default_workers()) as pool:
        entries = sorted_entries(list(pool.map(store, files)))

    manifest = Manifest(
        dataset_name=dataset_name or source_dir.name,
        created_at=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        codec_chain=chain,
        entries=entries,
        kdf=kdf,
    )
    (brick_dir / MANIFEST_FILENAME).write_bytes(serialize_manifest(manifest))
    return PackResult(
        manifest=manifest,
        brick_dir=brick_dir,
        plain_bytes=sum(entry.plain_size for entry in entries),
        payload_bytes=sum(entry.payload_size for entry in entries),
    )


def load_manifest(brick_dir: Path) -> Manifest:
    path = Path(brick_dir) / MANIFEST_FILENAME
    if not path.is_file():
        raise IntegrityError(f"{brick_dir} has no {MANIFEST_FILENAME}; not a brick")
    return parse_manifest(path.read_bytes())


def _check_entry(
    brick_dir: Path,
    entry: ChunkEntry,
    deep: bool,
    chain: tuple[str, ...],
    key: bytes | None,
) -> tuple[Finding | None, int]:
    """Most precise single finding for one entry, plus bytes read."""
    stored = brick_dir / entry.path
    if not stored.is_file():
        return Finding(entry.path, KIND_MISSING, "payload file not found"), 0
    actual_size = stored.stat().st_size
    if actual_size != entry.payload_size:
        detail = f"payload is {actual_size} bytes, manifest says {entry.payload_size}"
        return Finding(entry.path, KIND_SIZE, detail), 0
    digest, size = payload_mod.sha256_file(stored)
    if digest != entry.payload_sha256:
        return Finding(entry.path, KIND_PAYLOAD_DIGEST, "stored bytes do not match"), size
    if not deep:
        return None, size
    try:
        plain = payload_mod.decode_payload(stored.read_bytes(), chain, key)
    except IntegrityError as exc:
        return Finding(entry.path, KIND_DECODE, str(exc)), size
    if len(plain) != entry.plain_size:
        detail = f"decoded to {len(plain)} bytes, manifest says {entry.plain_size}"
        return Finding(entry.path, KIND_PLAIN_SIZE, detail), size
    if payload_mod.sha256_hex(plain) != entry.plain_sha256:
        return Finding(entry.path, KIND_PLAIN_DIGEST, "decoded bytes do not match"), size
    return None, size


def verify(
    brick_dir: Path,
    deep: bool = False,
    passphrase: str | None = None,
    workers: int | None = None,
) -> VerifyReport:
    """Check a brick against its manifest; never raises for per-file defects."""
    brick_dir = Path(brick_dir)
    manifest = load_manifest(brick_dir)
    key = None
    if deep:
        key = _resolve_key(manifest.codec_chain, passphrase, manifest.kdf)

    def check(entry: ChunkEntry) -> tuple[Finding | None, int]:
        return _check_entry(brick_dir, entry, deep, manifest.codec_chain, key)

    with ThreadPoolExecutor(max_workers=workers or _default_workers()) as pool:
        results = list(pool.map(check, manifest.entries))

    findings = [finding for finding, _ in results if finding is not None]
    bytes_checked = sum(size for _, size in results)

    known = set(manifest.entry_map())
    for real in sorted(brick_dir.rglob("*")):
        if real.is_dir():
            continue
        relative = real.relative_to(brick_dir).as_posix()
        if relative == MANIFEST_FILENAME or relative in known:
            continue
        findings.append(Finding(relative, KIND_EXTRA, "not listed in the manifest"))

    findings.sort(key=lambda finding: finding.path)
    return VerifyReport(
        brick_dir=brick_dir,
        entry_count=len(manifest.entries),
        bytes_checked=bytes_checked,
        deep=deep,
        findings=tuple(findings),
    )


def unpack(
    brick_dir: Path,
    dest_dir: Path,
    passphrase: str | None = None,
    workers: int | None = None,
) -> UnpackResult:
    """Restore the original tree, proving every file before it is written.

    Fails fast on the first bad payload; files already restored are left in
    place so a rerun after repair can be compared against them.
    """
    brick_dir = Path(brick_dir)
    dest_dir = Path(dest_dir)
    manifest = load_manifest(brick_dir)
    _require_empty_dir(dest_dir, "destination")
    key = _resolve_key(manifest.codec_chain, passphrase, manifest.kdf)
    dest_dir.mkdir(parents=True, exist_ok=True)

    def restore(entry: ChunkEntry) -> int:
        finding, _ = _check_entry(brick_dir, entry, True, manifest.codec_chain, key)
        if finding is not None:
            raise IntegrityError(str(finding))
        plain = payload_mod.decode_payload(
            (brick_dir / entry.path).read_bytes(), manifest.codec_chain, key
        )
        out = dest_dir / entry.path
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(plain)
        return len(plain)

    with ThreadPoolExecutor(max_workers=workers or _default_workers()) as pool:
        written = list(pool.map(restore, manifest.entries))

    return UnpackResult(
        dest_dir=dest_dir, file_count=len(written), bytes_written=sum(written)
    )
