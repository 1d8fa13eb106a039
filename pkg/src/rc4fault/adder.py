"""Nibble parity-prediction checker for the 8-bit datapath adders.

The predicted parity of each sum nibble is the XOR of both operand nibble
parities and of every carry *entering* a bit of that nibble. For the low
nibble those are the carry-in and the carries out of bits 0..2; for the high
nibble they are the carries out of bits 3..6. The carry out of bit 7 leaves
the byte and plays no part.
"""

from __future__ import annotations

from typing import NamedTuple

from .verdict import ADDITION, CheckerVerdict

_NIBBLE_PARITY = tuple(bin(n).count("1") & 1 for n in range(16))


class AdditionRecord(NamedTuple):
    """One observed addition.

    ``carries`` packs the ripple carry out of bit k into bit k (C0..C7).
    ``claimed_sum`` is whatever the adder drove onto its output and may be
    faulty.
    """

    add: int
    aug: int
    cin: int
    carries: int
    claimed_sum: int

    @property
    def carry_bits(self) -> tuple[int, ...]:
        return tuple((self.carries >> k) & 1 for k in range(8))


def ripple_add(add: int, aug: int, cin: int = 0) -> AdditionRecord:
    """8-bit ripple-carry addition with every carry recorded."""
    full = add + aug + cin
    # carry into bit k is bit k of a ^ b ^ sum; carry out of bit k is that of bit k+1
    carries = ((add ^ aug ^ full) >> 1) & 0xFF
    return AdditionRecord(add, aug, cin, carries, full & 0xFF)


def nibble_parity(n: int) -> int:
    return _NIBBLE_PARITY[n & 0xF]


def predict_parities(rec: AdditionRecord) -> tuple[int, int]:
    c = rec.carries
    low_carries = rec.cin ^ nibble_parity(c & 0b0111)
    high_carries = nibble_parity((c >> 3) & 0xF)
    low = nibble_parity(rec.add) ^ nibble_parity(rec.aug) ^ low_carries
    high = nibble_parity(rec.add >> 4) ^ nibble_parity(rec.aug >> 4) ^ high_carries
    return low, high


def check_addition(rec: AdditionRecord) -> CheckerVerdict:
    low, high = predict_parities(rec)
    s = rec.claimed_sum
    bad = []
    if low != nibble_parity(s):
        bad.append("low")
    if high != nibble_parity(s >> 4):
        bad.append("high")
    if bad:
        return CheckerVerdict(
            ADDITION,
            False,
            detail=f"{rec.add:#04x}+{rec.aug:#04x}={s:#04x}: {'/'.join(bad)} nibble parity mismatch",
        )
    return CheckerVerdict(ADDITION, True)
