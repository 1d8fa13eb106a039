"""Exhaustive detection-efficiency tables for the three checkers.

Every nonzero 8-bit fault mask is pushed through the real checker functions
(brute-force simulation) and the verdicts are cross-checked against a
closed-form rule for each checker. Rows are grouped by mask weight and
compared with the published counts.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .adder import check_addition, ripple_add
from .counter import WINDOW, EVEN_BITS, MSB_BITS, ODD_BITS, check_window
from .crc import POLY, CodedEntry, build_crc_array, crc4, verify_entry
from .verdict import ADDITION, CHECKERS, COUNTER, CRC

MASKS = range(1, 256)
WEIGHTS = range(1, 9)

# (detected, undetected) per weight 1..8 as published
PUBLISHED = {
    CRC: ((8, 0), (21, 7), (56, 0), (70, 0), (56, 0), (0, 28), (8, 0), (0, 1)),
    ADDITION: ((8, 0), (16, 12), (56, 0), (32, 38), (56, 0), (16, 12), (8, 0), (0, 1)),
    COUNTER: ((8, 0), (20, 8), (56, 0), (55, 15), (56, 0), (20, 8), (8, 0), (1, 0)),
}
PUBLISHED_EFFICIENCY = {CRC: 86, ADDITION: 75, COUNTER: 88}


class OracleMismatch(AssertionError):
    """Simulated verdicts disagree with the closed-form detection rule."""


def weight(m: int) -> int:
    return bin(m).count("1")


@dataclass(frozen=True)
class WeightRow:
    weight: int
    combinations: int
    detected: int
    undetected: int
    paper_detected: int
    paper_undetected: int

    @property
    def paper_delta(self) -> tuple[int, int]:
        return self.detected - self.paper_detected, self.undetected - self.paper_undetected


@dataclass
class EfficiencyReport:
    checker: str
    rows: list[WeightRow]
    undetected_masks: tuple[int, ...]
    notes: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(r.combinations for r in self.rows)

    @property
    def detected_total(self) -> int:
        return sum(r.detected for r in self.rows)

    @property
    def undetected_total(self) -> int:
        return sum(r.undetected for r in self.rows)

    @property
    def efficiency(self) -> Fraction:
        return Fraction(self.detected_total, self.total)

    @property
    def efficiency_percent(self) -> float:
        return round(float(self.efficiency) * 100, 1)

    @property
    def paper_totals(self) -> tuple[int, int]:
        return sum(r.paper_detected for r in self.rows), sum(r.paper_undetected for r in self.rows)

    @property
    def matches_paper(self) -> bool:
        return all(r.paper_delta == (0, 0) for r in self.rows)

    def to_dict(self) -> dict:
        pd, pu = self.paper_totals
        return {
            "checker": self.checker,
            "per_weight": [
                {
                    "weight": r.weight,
                    "combinations": r.combinations,
                    "detected": r.detected,
                    "undetected": r.undetected,
                    "paper_detected": r.paper_detected,
                    "paper_undetected": r.paper_undetected,
                    "paper_delta": list(r.paper_delta),
                }
                for r in self.rows
            ],
            "totals": {
                "faults": self.total,
                "detected": self.detected_total,
                "undetected": self.undetected_total,
                "paper_detected": pd,
                "paper_undetected": pu,
                "paper_delta": [self.detected_total - pd, self.undetected_total - pu],
            },
            "efficiency_exact": f"{self.efficiency.numerator}/{self.efficiency.denominator}",
            "efficiency_percent": self.efficiency_percent,
            "paper_efficiency_percent": PUBLISHED_EFFICIENCY[self.checker],
            "matches_paper": self.matches_paper,
            "undetected_masks": [f"{m:02x}" for m in self.undetected_masks],
            "notes": list(self.notes),
        }


def _build(checker: str, is_detected: Callable[[int], bool], notes: list[str]) -> EfficiencyReport:
    counts = {w: [0, 0] for w in WEIGHTS}
    missed = []
    for m in MASKS:
        if is_detected(m):
            counts[weight(m)][0] += 1
        else:
            counts[weight(m)][1] += 1
            missed.append(m)
    rows = []
    for w in WEIGHTS:
        det, und = counts[w]
        pdet, pund = PUBLISHED[checker][w - 1]
        rows.append(WeightRow(w, comb(8, w), det, und, pdet, pund))
    report = EfficiencyReport(checker, rows, tuple(missed), notes)
    for r in rows:
        if r.paper_delta != (0, 0):
            report.notes.append(
                f"weight {r.weight}: measured {r.detected}/{r.undetected} detected/undetected, "
                f"published {r.paper_detected}/{r.paper_undetected}"
            )
    return report


# -- closed-form rules -------------------------------------------------------


def _gf2_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def crc_rule(m: int) -> bool:
    """Value fault with intact CRC is caught unless the mask is a multiple of g(x)."""
    return _gf2_mod(m, POLY) != 0


def addition_rule(m: int) -> bool:
    return weight(m & 0x0F) % 2 == 1 or weight(m & 0xF0) % 2 == 1


def counter_rule(m: int) -> bool:
    return any(weight(m & bits) % 2 for bits in (EVEN_BITS, ODD_BITS, MSB_BITS))


# -- simulations ---------------------------------------------------------------


_CRC_ARRAY = build_crc_array()


def _simulate_crc(m: int) -> bool:
    array = _CRC_ARRAY
    verdicts = {verify_entry(CodedEntry(v ^ m, crc4(v)), array).ok for v in range(256)}
    if len(verdicts) != 1:
        raise OracleMismatch(f"CRC verdict for mask {m:#04x} depends on the stored value")
    return not verdicts.pop()


# operand triples chosen to exercise no carries, full ripple, carry-in and wraparound
_ADD_SAMPLES = tuple(
    ripple_add(a, b, c)
    for a, b, c in [
        (0x00, 0x00, 0), (0x0F, 0x01, 0), (0xFF, 0x01, 0), (0xFF, 0xFF, 1), (0x80, 0x80, 0),
        (0x7F, 0x01, 1), (0x55, 0xAA, 0), (0x12, 0x34, 0), (0xF0, 0x10, 0), (0x3C, 0xC3, 1),
        (0x99, 0x66, 0), (0x01, 0xFE, 1), (0xA5, 0x5A, 1), (0x08, 0x08, 0), (0xEE, 0x22, 0),
        (0x4D, 0xB7, 1),
    ]
)


def simulate_addition(m: int, records=_ADD_SAMPLES) -> bool:
    verdicts = {check_addition(r._replace(claimed_sum=r.claimed_sum ^ m)).ok for r in records}
    if len(verdicts) != 1:
        raise OracleMismatch(f"addition verdict for mask {m:#04x} depends on the operands")
    return not verdicts.pop()


_WINDOWS = tuple(tuple(range(v, v + WINDOW)) for v in range(0, 256, WINDOW))


def _simulate_counter(m: int) -> bool:
    verdicts = set()
    for base in _WINDOWS:
        for slot in range(WINDOW):
            counts = list(base)
            counts[slot] ^= m
            verdicts.add(check_window(counts).ok)
    if len(verdicts) != 1:
        raise OracleMismatch(f"counter verdict for mask {m:#04x} depends on slot or window")
    return not verdicts.pop()


def _cross_checked(simulate, rule, checker):
    def detected(m: int) -> bool:
        sim = simulate(m)
        if sim != rule(m):
            raise OracleMismatch(f"{checker}: mask {m:#04x} simulated={sim} closed-form={rule(m)}")
        return sim

    return detected


def evaluate_crc() -> EfficiencyReport:
    """Value-field faults, CRC field intact, every mask against every stored value."""
    notes = [
        "fault universe: 8-bit mask XORed into the value field, 4-bit CRC intact",
        "undetected masks are exactly the nonzero multiples of g(x)=x^4+x^3+1 of degree <= 7; "
        "the published 219/36 split is not reproducible with a plain remainder CRC over g(x) "
        "(no bit order, initial value or fault universe variant was assumed to force it)",
    ]
    return _build(CRC, _cross_checked(_simulate_crc, crc_rule, CRC), notes)


def evaluate_addition() -> EfficiencyReport:
    notes = ["fault universe: 8-bit mask XORed into the adder output; operands and carries intact"]
    return _build(ADDITION, _cross_checked(simulate_addition, addition_rule, ADDITION), notes)


def evaluate_counter() -> EfficiencyReport:
    notes = [
        "fault universe: 8-bit mask XORed into one buffered count; all 8 slots x 32 aligned windows tested",
    ]
    return _build(COUNTER, _cross_checked(_simulate_counter, counter_rule, COUNTER), notes)


EVALUATORS = {CRC: evaluate_crc, ADDITION: evaluate_addition, COUNTER: evaluate_counter}


def evaluate(checkers=CHECKERS) -> list[EfficiencyReport]:
    return [EVALUATORS[c]() for c in checkers]


# -- rendering ---------------------------------------------------------------

CSV_FIELDS = (
    "checker", "weight", "combinations", "detected", "undetected",
    "paper_detected", "paper_undetected", "paper_delta_detected", "paper_delta_undetected",
)


def to_json(reports: list[EfficiencyReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"


def to_csv(reports: list[EfficiencyReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for rep in reports:
        for r in rep.rows:
            w.writerow((rep.checker, r.weight, r.combinations, r.detected, r.undetected,
                        r.paper_detected, r.paper_undetected, *r.paper_delta))
        pd, pu = rep.paper_totals
        w.writerow((rep.checker, "total", rep.total, rep.detected_total, rep.undetected_total,
                    pd, pu, rep.detected_total - pd, rep.undetected_total - pu))
    return buf.getvalue()


def to_text(reports: list[EfficiencyReport]) -> str:
    out = []
    for rep in reports:
        out.append(f"{rep.checker} checker")
        header = f"{'faulty bits':>11}  {'combinations':>12}  {'detected':>8}  {'undetected':>10}  {'published':>9}  {'delta':>8}"
        out.append(header)
        out.append("-" * len(header))
        for r in rep.rows:
            dd, du = r.paper_delta
            out.append(
                f"{r.weight:>11}  {f'8C{r.weight}={r.combinations}':>12}  {r.detected:>8}  {r.undetected:>10}  "
                f"{f'{r.paper_detected}/{r.paper_undetected}':>9}  {f'{dd:+d}/{du:+d}':>8}"
            )
        pd, pu = rep.paper_totals
        out.append("-" * len(header))
        out.append(
            f"{'total':>11}  {rep.total:>12}  {rep.detected_total:>8}  {rep.undetected_total:>10}  "
            f"{f'{pd}/{pu}':>9}  {f'{rep.detected_total - pd:+d}/{rep.undetected_total - pu:+d}':>8}"
        )
        out.append(
            f"efficiency {rep.efficiency_percent:.1f}% ({rep.efficiency.numerator}/{rep.efficiency.denominator}),"
            f" published {PUBLISHED_EFFICIENCY[rep.checker]}%"
        )
        for note in rep.notes:
            out.append(f"  * {note}")
        out.append("")
    return "\n".join(out)
