from __future__ import annotations

from dataclasses import dataclass

CRC = "crc"
ADDITION = "addition"
COUNTER = "counter"

CHECKERS = (CRC, ADDITION, COUNTER)


@dataclass(frozen=True)
class CheckerVerdict:
    """Pass/fail output of one checker for one evaluation.

    ``ready`` is False when the checker abstained (e.g. the counter window is
    not full yet); an abstaining checker always reports ``ok``.
    """

    checker: str
    ok: bool
    ready: bool = True
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def no_fault(*verdicts: CheckerVerdict) -> bool:
    """AND-reduce verdicts into the ``no_fault`` line."""
    return all(v.ok for v in verdicts)
