"""The self-describing index a brick carries: BRICK-MANIFEST files.

Line-oriented UTF-8 text, chosen over a binary layout so a brick remains
readable decades from now with nothing but a text editor:

    BRICK-MANIFEST v1
    dataset: <label>
    created: <UTC timestamp>
    codec: <comma-separated codec chain>
    kdf: pbkdf2-hmac-sha256          (encrypted bricks only)
    iterations: <count>              (encrypted bricks only)
    salt: <16 bytes as hex>          (encrypted bricks only)
    <blank line>
    <path>TAB<plain_size>TAB<plain_sha256>TAB<payload_size>TAB<payload_sha256>
    ...
    digest: <sha256 hex of all entry-line bytes including the LFs>

Entry paths are NFC-normalized, '/'-separated, with '%', control bytes, and
bytes above 0x7E percent-encoded so the file stays printable ASCII.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass

from .errors import ManifestError, UnsupportedVersionError

MANIFEST_FILENAME = "BRICK-MANIFEST"
FORMAT_VERSION = "1"

CODEC_NONE = "none"
CODEC_DEFLATE = "deflate"
CODEC_AES_256_GCM = "aes-256-gcm"

VALID_CHAINS = (
    (CODEC_NONE,),
    (CODEC_DEFLATE,),
    (CODEC_AES_256_GCM,),
    (CODEC_DEFLATE, CODEC_AES_256_GCM),
)

KDF_ALGORITHM = "pbkdf2-hmac-sha256"
DEFAULT_KDF_ITERATIONS = 210_000
SALT_BYTES = 16

_HEX_DIGEST_RE = re.compile(r"^[0-9a-f]{64}$")


def validate_chain(chain: tuple[str, ...]) -> tuple[str, ...]:
    """Check a codec chain against the four supported combinations."""
    chain = tuple(chain)
    if chain not in VALID_CHAINS:
        supported = ", ".join("[" + ",".join(c) + "]" for c in VALID_CHAINS)
        raise ValueError(f"unsupported codec chain {list(chain)}; supported: {supported}")
    return chain


def is_encrypted(chain: tuple[str, ...]) -> bool:
    return CODEC_AES_256_GCM in chain


def check_relative_path(path: str) -> str:
    """Reject absolute paths, '..' escapes, and unstorable names."""
    if path == "":
        raise ValueError("empty path")
    if path.startswith("/"):
        raise ValueError(f"absolute path not allowed: {path!r}")
    if "\x00" in path:
        raise ValueError(f"path contains NUL: {path!r}")
    for segment in path.split("/"):
        if segment in ("", ".", ".."):
            raise ValueError(f"path has a {segment!r} segment: {path!r}")
    return path


def encode_path(path: str) -> str:
    """NFC-normalize and percent-encode a path for its manifest line."""
    raw = unicodedata.normalize("NFC", path).encode("utf-8")
    out = []
    for byte in raw:
        if byte <= 0x1F or byte == 0x25 or byte > 0x7E:  # controls, '%', DEL and up
            out.append(f"%{byte:02X}")
        else:
            out.append(chr(byte))
    return "".join(out)


def decode_path(text: str) -> str:
    """Invert encode_path; an escaped separator or NUL is always an error."""
    out = bytearray()
    i = 0
    while i < len(text):
        char = text[i]
        if char == "%":
            pair = text[i + 1 : i + 3]
            if len(pair) != 2 or not re.fullmatch(r"[0-9A-Fa-f]{2}", pair):
                raise ValueError(f"bad percent escape in path: {text!r}")
            byte = int(pair, 16)
            if byte == 0x2F:
                raise ValueError(f"escaped '/' in path: {text!r}")
            out.append(byte)
            i += 3
        else:
            if ord(char) > 0x7E or ord(char) <= 0x1F:
                raise ValueError(f"unescaped byte in path: {text!r}")
            out.append(ord(char))
            i += 1
    try:
        path = out.decode("utf-8")
    except UnicodeDecodeError:
        raise ValueError(f"path is not valid UTF-8: {text!r}") from None
    return check_relative_path(path)


@dataclass(frozen=True)
class KdfParams:
    """How to turn the passphrase into the content key."""

    algorithm: str = KDF_ALGORITHM
    iterations: int = DEFAULT_KDF_ITERATIONS
    salt: bytes = b""

    def __post_init__(self) -> None:
        if self.algorithm != KDF_ALGORITHM:
            raise ValueError(f"unsupported kdf {self.algorithm!r}")
        if self.iterations < 1:
            raise ValueError("kdf iterations must be >= 1")
        if len(self.salt) != SALT_BYTES:
            raise ValueError(f"salt must be {SALT_BYTES} bytes")


@dataclass(frozen=True)
class ChunkEntry:
    """One stored file: where it lives and the digests that prove it."""

    path: str
    plain_size: int
    plain_sha256: str
    payload_size: int
    payload_sha256: str

    def __post_init__(self) -> None:
        check_relative_path(self.path)
        if self.plain_size < 0 or self.payload_size < 0:
            raise ValueError(f"negative size for {self.path!r}")
        for digest in (self.plain_sha256, self.payload_sha256):
            if not _HEX_DIGEST_RE.match(digest):
                raise ValueError(f"malformed sha256 digest {digest!r} for {self.path!r}")

    def line(self) -> bytes:
        """The entry's manifest line, LF included."""
        return (
            f"{encode_path(self.path)}\t{self.plain_size}\t{self.plain_sha256}"
            f"\t{self.payload_size}\t{self.payload_sha256}\n"
        ).encode("ascii")


@dataclass(frozen=True)
class Manifest:
    """Complete description of a packed brick."""

    dataset_name: str
    created_at: str
    codec_chain: tuple[str, ...]
    entries: tuple[ChunkEntry, ...]
    kdf: KdfParams | None = None
    format_version: str = FORMAT_VERSION

    def __post_init__(self) -> None:
        if self.format_version != FORMAT_VERSION:
            raise ValueError(f"unsupported format version {self.format_version!r}")
        validate_chain(self.codec_chain)
        if is_encrypted(self.codec_chain) != (self.kdf is not None):
            raise ValueError("kdf parameters must be present exactly when the chain encrypts")
        for label in (self.dataset_name, self.created_at):
            if any(ord(c) < 0x20 for c in label):
                raise ValueError("header values must not contain control characters")
        previous = None
        for entry in self.entries:
            if previous is not None and not (previous < entry.path):
                raise ValueError(
                    f"entries not strictly ascending: {previous!r} then {entry.path!r}"
                )
            previous = entry.path

    def entries_digest(self) -> str:
        digest = hashlib.sha256()
        for entry in self.entries:
            digest.update(entry.line())
        return digest.hexdigest()

    def entry_map(self) -> dict[str, ChunkEntry]:
        return {entry.path: entry for entry in self.entries}


def sorted_entries(entries: list[ChunkEntry]) -> tuple[ChunkEntry, ...]:
    """Sort entries by path code points, rejecting duplicates."""
    ordered = tuple(sorted(entries, key=lambda entry: entry.path))
    for first, second in zip(ordered, ordered[1:]):
        if first.path == second.path:
            raise ValueError(f"duplicate entry path {first.path!r}")
    return ordered


def serialize_manifest(manifest: Manifest) -> bytes:
    """Serialize to bytes; the entries section is deterministic per tree."""
    lines = [
        f"{MANIFEST_FILENAME} v{manifest.format_version}\n",
        f"dataset: {manifest.dataset_name}\n",
        f"created: {manifest.created_at}\n",
        f"codec: {','.join(manifest.codec_chain)}\n",
    ]
    if manifest.kdf is not None:
        lines += [
            f"kdf: {manifest.kdf.algorithm}\n",
            f"iterations: {manifest.kdf.iterations}\n",
            f"salt: {manifest.kdf.salt.hex()}\n",
        ]
    lines.append("\n")
    body = "".join(lines).encode("utf-8")
    body += b"".join(entry.line() for entry in manifest.entries)
    body += f"digest: {manifest.entries_digest()}\n".encode("ascii")
    return body


def _fail(line_number: int, message: str) -> ManifestError:
    return ManifestError(message, line=line_number)


def parse_manifest(data: bytes) -> Manifest:
    """Parse and fully validate manifest bytes.

    Any structural defect raises with the line it was found on; a digest
    mismatch or truncation never yields a partial manifest.
    """
    if not data.endswith(b"\n"):
        raise ManifestError("truncated: missing final newline")
    raw_lines = data.split(b"\n")[:-1]
    if not raw_lines:
        raise ManifestError("empty manifest")

    def text(index: int) -> str:
        try:
            return raw_lines[index].decode("utf-8")
        except UnicodeDecodeError:
            raise _fail(index + 1, "not valid UTF-8") from None

    first = text(0)
    if first != f"{MANIFEST_FILENAME} v{FORMAT_VERSION}":
        if first.startswith(f"{MANIFEST_FILENAME} v"):
            raise UnsupportedVersionError(
                f"unsupported version {first.removeprefix(MANIFEST_FILENAME + ' v')!r}", line=1
            )
        raise _fail(1, f"not a {MANIFEST_FILENAME} file")

    headers: dict[str, str] = {}
    index = 1
    while index < len(raw_lines):
        line = text(index)
        if line == "":
            break
        key, sep, value = line.partition(": ")
        if not sep or key not in ("dataset", "created", "codec", "kdf", "iterations", "salt"):
            raise _fail(index + 1, f"unrecognized header line {line!r}")
        if key in headers:
            raise _fail(index + 1, f"duplicate header {key!r}")
        headers[key] = value
        index += 1
    else:
        raise ManifestError("truncated: header never ends")

    for required in ("dataset", "created", "codec"):
        if required not in headers:
            raise _fail(index + 1, f"missing {required!r} header")
    try:
        chain = validate_chain(tuple(headers["codec"].split(",")))
    except ValueError as exc:
        raise _fail(index + 1, str(exc)) from None

    kdf = None
    if is_encrypted(chain):
        for required in ("kdf", "iterations", "salt"):
            if required not in headers:
                raise _fail(index + 1, f"encrypted chain requires the {required!r} header")
        try:
            kdf = KdfParams(
                algorithm=headers["kdf"],
                iterations=int(headers["iterations"]),
                salt=bytes.fromhex(headers["salt"]),
            )
        except ValueError as exc:
            raise _fail(index + 1, f"bad kdf parameters: {exc}") from None
    elif any(key in headers for key in ("kdf", "iterations", "salt")):
        raise _fail(index + 1, "kdf headers present but the chain does not encrypt")

    index += 1  # past the blank line
    entries: list[ChunkEntry] = []
    section = hashlib.sha256()
    declared_digest = None
    while index < len(raw_lines):
        line = text(index)
        if line.startswith("digest: "):
            declared_digest = line.removeprefix("digest: ")
            if index != len(raw_lines) - 1:
                raise _fail(index + 2, "content after the digest line")
            break
        fields = line.split("\t")
        if len(fields) != 5:
            raise _fail(index + 1, f"expected 5 tab-separated fields, got {len(fields)}")
        try:
            entry = ChunkEntry(
                path=decode_path(fields[0]),
                plain_size=int(fields[1]),
                plain_sha256=fields[2],
                payload_size=int(fields[3]),
                payload_sha256=fields[4],
            )
        except ValueError as exc:
            raise _fail(index + 1, str(exc)) from None
        if entries and not (entries[-1].path < entry.path):
            raise _fail(index + 1, f"entries not strictly ascending at {entry.path!r}")
        entries.append(entry)
        section.update(raw_lines[index] + b"\n")
        index += 1

    if declared_digest is None:
        raise ManifestError("truncated: missing digest line")
    if declared_digest != section.hexdigest():
        raise ManifestError("entries digest mismatch: manifest is corrupt")

    try:
        return Manifest(
            dataset_name=headers["dataset"],
            created_at=headers["created"],
            codec_chain=chain,
            entries=tuple(entries),
            kdf=kdf,
        )
    except ValueError as exc:
        raise ManifestError(str(exc)) from None
