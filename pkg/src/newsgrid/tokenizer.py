"""Byte-level tokenizer with a 256-entry base alphabet plus specials.

Any text encodes losslessly as its UTF-8 byte sequence, so no language can
produce out-of-vocabulary tokens; learned merge tables are a plug-in
concern, not required for pipeline correctness.
"""
from __future__ import annotations

__all__ = ["ByteTokenizer", "Tokenizer"]

from typing import Protocol


class Tokenizer(Protocol):
    """Minimal encoder contract the featurizer depends on."""

    vocab_size: int
    bos_id: int
    eos_id: int
    pad_id: int
    unk_id: int

    def encode(self, text: str) -> list[int]: ...

    def decode(self, ids: list[int]) -> str: ...


class ByteTokenizer:
    """Deterministic byte-level tokenizer: ids 0..3 are specials, 4..259 bytes."""

    def __init__(self) -> None:
        self.bos_id = 0
        self.eos_id = 1
        self.pad_id = 2
        self.unk_id = 3
        self._base = 4
        self.vocab_size = self._base + 256

    @property
    def special_ids(self) -> frozenset[int]:
        return frozenset({self.bos_id, self.eos_id, self.pad_id, self.unk_id})

    def encode(self, text: str) -> list[int]:
        return [self._base + b for b in text.encode("utf-8")]

    def decode(self, ids: list[int]) -> str:
        data = bytes(i - self._base for i in ids if i >= self._base)
        return data.decode("utf-8", errors="replace")
