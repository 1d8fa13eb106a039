"""4-bit CRC protection of S-box entries.

Each S-box octet is stored as a 12-bit codeword: the value in bits 11..4 and
the residue of ``value * x**4 mod g(x)`` in bits 3..0, with
``g(x) = x**4 + x**3 + 1``. Plain polynomial remainder: MSB first, no initial
value, no reflection, no output XOR.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .verdict import CRC, CheckerVerdict

POLY = 0b11001
DEGREE = 4


def crc4(data: int) -> int:
    """Return the 4-bit residue of ``data * x**4`` modulo ``g(x)``."""
    if not 0 <= data <= 0xFF:
        raise ValueError(f"data must be an octet, got {data!r}")
    reg = data << DEGREE
    for bit in range(11, DEGREE - 1, -1):
        if reg & (1 << bit):
            reg ^= POLY << (bit - DEGREE)
    return reg


def residue12(word: int) -> int:
    """Remainder of a full 12-bit codeword modulo ``g(x)``; zero when consistent."""
    reg = word & 0xFFF
    for bit in range(11, DEGREE - 1, -1):
        if reg & (1 << bit):
            reg ^= POLY << (bit - DEGREE)
    return reg


class CodedEntry(NamedTuple):
    value: int
    crc: int

    @classmethod
    def encode(cls, value: int) -> CodedEntry:
        return cls(value, crc4(value))

    @property
    def word(self) -> int:
        return (self.value << DEGREE) | self.crc

    @classmethod
    def from_word(cls, word: int) -> CodedEntry:
        return cls((word >> DEGREE) & 0xFF, word & 0xF)


class CrcArray(tuple):
    """Immutable 256-entry lookup of ``crc4`` residues indexed by octet."""

    __slots__ = ()

    def __new__(cls, table: Sequence[int]):
        if len(table) != 256:
            raise ValueError("CRC array needs exactly 256 entries")
        return super().__new__(cls, table)


def build_crc_array() -> CrcArray:
    return CrcArray([crc4(n) for n in range(256)])


_DEFAULT_ARRAY = build_crc_array()


def verify_entry(entry: CodedEntry, array: CrcArray = _DEFAULT_ARRAY) -> CheckerVerdict:
    if entry.crc == array[entry.value]:
        return CheckerVerdict(CRC, True)
    return CheckerVerdict(
        CRC, False, detail=f"entry {entry.value:#04x} carries crc {entry.crc:#x}, expected {array[entry.value]:#x}"
    )


def check_access(si: CodedEntry, sj: CodedEntry, array: CrcArray = _DEFAULT_ARRAY) -> CheckerVerdict:
    """Check both S-box words read during one swap."""
    vi = verify_entry(si, array)
    if not vi.ok:
        return CheckerVerdict(CRC, False, detail="S[i]: " + vi.detail)
    vj = verify_entry(sj, array)
    if not vj.ok:
        return CheckerVerdict(CRC, False, detail="S[j]: " + vj.detail)
    return vi
