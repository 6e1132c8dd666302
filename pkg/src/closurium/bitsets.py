"""Conversions between Python int bitsets and numpy boolean masks."""

from __future__ import annotations

import numpy as np


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    """Boolean array of length ``n`` whose entry ``i`` is bit ``i`` of ``bits``."""
    if n == 0:
        return np.zeros(0, dtype=bool)
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def mask_to_bits(mask: np.ndarray) -> int:
    if mask.size == 0:
        return 0
    return int.from_bytes(np.packbits(mask.astype(bool), bitorder="little").tobytes(), "little")


def indices_to_bits(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << int(i)
    return out
