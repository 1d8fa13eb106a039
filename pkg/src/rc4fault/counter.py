"""Parity-pattern checker for the ``i`` up-counter.

Within a window of eight consecutive counts starting at a multiple of 8,
counts ``k`` and ``k + 4`` differ only in bit 2. So the even-position parity
(bits 0, 2, 4, 6) complements across the two halves, the odd-position parity
(bits 1, 3, 5, 7) repeats, and the parity of bits 3 and 7 stays constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .verdict import COUNTER, CheckerVerdict

WINDOW = 8
_HALF = WINDOW // 2

EVEN_BITS = 0x55
ODD_BITS = 0xAA
MSB_BITS = 0x88

_PARITY = tuple(bin(n).count("1") & 1 for n in range(256))


def even_parity(v: int) -> int:
    return _PARITY[v & EVEN_BITS]


def odd_parity(v: int) -> int:
    return _PARITY[v & ODD_BITS]


def msb_parity(v: int) -> int:
    """XOR of the top bit of each nibble (bits 7 and 3)."""
    return _PARITY[v & MSB_BITS]


@dataclass(frozen=True)
class CounterWindow:
    counts: tuple[int, ...]

    @property
    def full(self) -> bool:
        return len(self.counts) == WINDOW


NOT_READY = CheckerVerdict(COUNTER, True, ready=False, detail="window not full")


def check_window(w: CounterWindow | Sequence[int]) -> CheckerVerdict:
    counts = w.counts if isinstance(w, CounterWindow) else tuple(w)
    if len(counts) != WINDOW:
        return NOT_READY
    failures = []
    for k in range(_HALF):
        a, b = counts[k], counts[k + _HALF]
        if _PARITY[a & EVEN_BITS] == _PARITY[b & EVEN_BITS]:
            failures.append(f"even parity of slots {k}/{k + _HALF} not complementary")
        if _PARITY[a & ODD_BITS] != _PARITY[b & ODD_BITS]:
            failures.append(f"odd parity of slots {k}/{k + _HALF} differs")
    first = _PARITY[counts[0] & MSB_BITS]
    if any(_PARITY[c & MSB_BITS] != first for c in counts[1:]):
        failures.append("nibble-MSB parity not constant")
    if failures:
        return CheckerVerdict(COUNTER, False, detail="; ".join(failures))
    return CheckerVerdict(COUNTER, True)


@dataclass
class CounterBuffer:
    """Eight-slot capture register fed with one ``i`` sample per clock.

    A new window starts after the previous one has been checked; slots not yet
    written in the current window are ``None``.
    """

    slots: list = field(default_factory=lambda: [None] * WINDOW)
    filled: int = 0
    checked: bool = False

    def reset(self) -> None:
        self.slots = [None] * WINDOW
        self.filled = 0
        self.checked = False

    def sample(self, i: int) -> None:
        if self.checked or self.filled == WINDOW:
            self.reset()
        self.slots[self.filled] = i & 0xFF
        self.filled += 1

    @property
    def ready(self) -> bool:
        return self.filled == WINDOW and not self.checked

    def holds(self, slot: int) -> bool:
        return slot < self.filled and not self.checked

    def corrupt(self, slot: int, mask: int) -> tuple[int, int]:
        pre = self.slots[slot]
        self.slots[slot] = pre ^ mask
        return pre, self.slots[slot]

    def window(self) -> CounterWindow:
        return CounterWindow(tuple(self.slots[: self.filled]))

    def check(self) -> CheckerVerdict:
        if not self.ready:
            return NOT_READY
        verdict = check_window(self.window())
        self.checked = True
        return verdict
