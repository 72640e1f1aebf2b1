"""Per-file payload transforms: compression, encryption, digests.

A payload is the stored form of one file, produced by applying the brick's
codec chain in order. Chains always place encryption last, so the ciphertext
layout is uniform: 12-byte random nonce, then ciphertext with the 16-byte
GCM tag appended.
"""

from __future__ import annotations

import hashlib
import os
import zlib
from pathlib import Path

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.pbkdf2 import PBKDF2HMAC

from .errors import IntegrityError
from .manifest import CODEC_AES_256_GCM, CODEC_DEFLATE, CODEC_NONE, KdfParams

KEY_BYTES = 32
NONCE_BYTES = 12
TAG_BYTES = 16
DEFLATE_LEVEL = 6

_HASH_CHUNK = 1 << 20

# Fixed test vector; refuse to run if the hash primitive is miscompiled.
_SHA256_ABC = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def self_test() -> None:
    if hashlib.sha256(b"abc").hexdigest() != _SHA256_ABC:
        raise RuntimeError("sha256 known-answer test failed; refusing to run")


self_test()


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: Path) -> tuple[str, int]:
    """Stream a file; returns (hex digest, size in bytes)."""
    digest = hashlib.sha256()
    size = 0
    with open(path, "rb") as handle:
        while chunk := handle.read(_HASH_CHUNK):
            digest.update(chunk)
            size += len(chunk)
    return digest.hexdigest(), size


def derive_key(passphrase: str, kdf: KdfParams) -> bytes:
    """Stretch a passphrase into the 32-byte content key."""
    return PBKDF2HMAC(
        algorithm=hashes.SHA256(),
        length=KEY_BYTES,
        salt=kdf.salt,
        iterations=kdf.iterations,
    ).derive(passphrase.encode("utf-8"))


def new_salt() -> bytes:
    return os.urandom(16)


def encode_payload(plain: bytes, chain: tuple[str, ...], key: bytes | None) -> bytes:
    """Apply the codec chain in order to produce the stored payload."""
    data = plain
    for codec in chain:
        if codec == CODEC_NONE:
            pass
        elif codec == CODEC_DEFLATE:
            compressor = zlib.compressobj(DEFLATE_LEVEL, zlib.DEFLATED, -zlib.MAX_WBITS)
            data = compressor.compress(data) + compressor.flush()
        elif codec == CODEC_AES_256_GCM:
            if key is None:
                raise ValueError("codec chain encrypts but no key was derived")
            nonce = os.urandom(NONCE_BYTES)
            data = nonce + AESGCM(key).encrypt(nonce, data, None)
        else:
            raise ValueError(f"unknown codec {codec!r}")
    return data


def decode_payload(payload: bytes, chain: tuple[str, ...], key: bytes | None) -> bytes:
    """Invert encode_payload; every defect surfaces as IntegrityError."""
    data = payload
    for codec in reversed(chain):
        if codec == CODEC_NONE:
            pass
        elif codec == CODEC_DEFLATE:
            try:
                decompressor = zlib.decompressobj(-zlib.MAX_WBITS)
                data = decompressor.decompress(data) + decompressor.flush()
                if decompressor.unconsumed_tail or not decompressor.eof:
                    raise IntegrityError("deflate stream is truncated")
            except zlib.error as exc:
                raise IntegrityError(f"deflate stream corrupt: {exc}") from None
        elif codec == CODEC_AES_256_GCM:
            if key is None:
                raise ValueError("codec chain encrypts but no key was derived")
            if len(data) < NONCE_BYTES + TAG_BYTES:
                raise IntegrityError("ciphertext shorter than nonce plus tag")
            try:
                data = AESGCM(key).decrypt(data[:NONCE_BYTES], data[NONCE_BYTES:], None)
            except InvalidTag:
                raise IntegrityError(
                    "authentication failed: wrong passphrase or corrupt payload"
                ) from None
        else:
            raise ValueError(f"unknown codec {codec!r}")
    return data
