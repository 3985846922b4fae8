"""Bit-array serialization: hex strings and raw binary files (MSB first)."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def bits_from_bytes(data: bytes, length: int | None = None) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    return bits if length is None else bits[:length]


def bits_to_bytes(bits) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def bits_from_hex(text: str) -> np.ndarray:
    """Four bits per hex digit; an optional ``0x`` prefix is ignored."""
    text = text.strip().lower().removeprefix("0x")
    if len(text) % 2:
        text += "0"
        return bits_from_bytes(bytes.fromhex(text))[:-4]
    return bits_from_bytes(bytes.fromhex(text))


def bits_to_hex(bits) -> str:
    """Hex encoding of a bit array, zero-padded on the right to a whole digit."""
    bits = np.asarray(bits, dtype=np.uint8)
    digits = -(-bits.size // 4)
    return bits_to_bytes(bits).hex()[:digits]


def read_bits(path: str | Path, length: int | None = None) -> np.ndarray:
    return bits_from_bytes(Path(path).read_bytes(), length)


def write_bits(path: str | Path, bits) -> None:
    Path(path).write_bytes(bits_to_bytes(bits))
