"""Transient bit-flip injection into datapath registers and storage.

A fault is a one-shot XOR of a mask into a site at a given clock cycle and
edge. Faults are applied at the start of their half-cycle, before the
datapath and the checkers act.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, MutableMapping, Optional

from .core import Rc4State
from .counter import WINDOW, CounterBuffer


class FaultSpecError(ValueError):
    pass


class Edge(enum.IntEnum):
    RISING = 0
    FALLING = 1

    @classmethod
    def parse(cls, text: str) -> Edge:
        t = text.strip().lower()
        if t in ("rising", "rise", "r", "pos", "posedge"):
            return cls.RISING
        if t in ("falling", "fall", "f", "neg", "negedge"):
            return cls.FALLING
        raise FaultSpecError(f"unknown clock edge {text!r}")

    def __str__(self) -> str:
        return self.name.lower()


class Target(enum.Enum):
    SBOX_VALUE = "sbox"
    SBOX_CRC = "sbox_crc"
    J_REGISTER = "j"
    I_COUNTER = "i"
    ADDER_SUM = "adder"
    COUNTER_SLOT = "counter_slot"

    @classmethod
    def parse(cls, text: str) -> Target:
        t = text.strip().lower()
        for member in cls:
            if t in (member.value, member.name.lower()):
                return member
        raise FaultSpecError(f"unknown fault target {text!r}")


# number of valid indices per target; None means the target has no index
_INDEX_RANGE = {
    Target.SBOX_VALUE: 256,
    Target.SBOX_CRC: 256,
    Target.J_REGISTER: None,
    Target.I_COUNTER: None,
    Target.ADDER_SUM: 2,
    Target.COUNTER_SLOT: WINDOW,
}


@dataclass(frozen=True)
class FaultSpec:
    cycle: int
    edge: Edge
    target: Target
    index: int
    mask: int

    def __post_init__(self):
        object.__setattr__(self, "edge", Edge(self.edge))
        if not isinstance(self.target, Target):
            object.__setattr__(self, "target", Target.parse(str(self.target)))
        width = 4 if self.target is Target.SBOX_CRC else 8
        if not 0 < self.mask < (1 << width):
            raise FaultSpecError(f"mask {self.mask:#x} must be a nonzero {width}-bit value for {self.target.value}")
        if self.cycle < 0:
            raise FaultSpecError(f"cycle must be non-negative, got {self.cycle}")
        span = _INDEX_RANGE[self.target]
        if span is None:
            if self.index != 0:
                raise FaultSpecError(f"{self.target.value} takes no index (use 0)")
        elif not 0 <= self.index < span:
            raise FaultSpecError(f"index {self.index} out of range for {self.target.value} (0..{span - 1})")

    def __str__(self) -> str:
        return f"{self.target.value}:{self.index}:{self.mask:02x}:{self.cycle}:{self.edge}"


_SEP = re.compile(r"[:,\s]+")


def parse_fault_spec(text: str) -> FaultSpec:
    """Parse ``target:index:mask:cycle:edge`` (``,`` or whitespace also accepted).

    The mask is hex; ``index`` may be ``-`` for the ``i`` / ``j`` registers.
    """
    parts = [p for p in _SEP.split(text.strip()) if p]
    if len(parts) != 5:
        raise FaultSpecError(f"expected target:index:mask:cycle:edge, got {text!r}")
    target, index, mask, cycle, edge = parts
    try:
        idx = 0 if index == "-" else int(index, 0)
        m = int(mask, 16)
        cyc = int(cycle, 10)
    except ValueError as exc:
        raise FaultSpecError(f"bad number in fault spec {text!r}: {exc}") from exc
    return FaultSpec(cyc, Edge.parse(edge), Target.parse(target), idx, m)


def read_fault_file(path) -> list[FaultSpec]:
    specs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                specs.append(parse_fault_spec(line))
            except FaultSpecError as exc:
                raise FaultSpecError(f"{path}:{lineno}: {exc}") from exc
    return specs


class FaultPlan:
    """Immutable, time-ordered set of armed faults."""

    def __init__(self, specs: Iterable[FaultSpec] = ()):
        self._specs = tuple(sorted(specs, key=lambda s: (s.cycle, s.edge)))
        self._due: dict[tuple[int, Edge], tuple[FaultSpec, ...]] = {}
        for spec in self._specs:
            key = (spec.cycle, spec.edge)
            self._due[key] = self._due.get(key, ()) + (spec,)

    @property
    def specs(self) -> tuple[FaultSpec, ...]:
        return self._specs

    def due(self, cycle: int, edge: Edge) -> tuple[FaultSpec, ...]:
        return self._due.get((cycle, edge), ())

    def __len__(self) -> int:
        return len(self._specs)

    def __iter__(self):
        return iter(self._specs)

    def __repr__(self) -> str:
        return f"FaultPlan({list(map(str, self._specs))})"


def arm(specs: Iterable[FaultSpec | str]) -> FaultPlan:
    parsed = []
    for spec in specs:
        if isinstance(spec, str):
            spec = parse_fault_spec(spec)
        elif not isinstance(spec, FaultSpec):
            raise FaultSpecError(f"not a fault spec: {spec!r}")
        parsed.append(spec)
    return FaultPlan(parsed)


EMPTY_PLAN = FaultPlan()


@dataclass
class LogEntry:
    spec: FaultSpec
    cycle: int
    edge: Edge
    pre: Optional[int]
    post: Optional[int]
    note: str = ""

    @property
    def applied(self) -> bool:
        return self.pre is not None and self.pre != self.post


class FaultLog(list):
    """Append-only record of fired faults."""

    def entries_for(self, spec: FaultSpec) -> list[LogEntry]:
        return [e for e in self if e.spec == spec]


def apply_due(
    plan: FaultPlan,
    cycle: int,
    edge: Edge,
    state: Rc4State,
    counter: Optional[CounterBuffer] = None,
    adder_faults: Optional[MutableMapping[int, int]] = None,
) -> list[LogEntry]:
    """XOR every fault due at ``(cycle, edge)`` into its site.

    Adder faults are latched into ``adder_faults`` (addition index -> mask)
    and corrupt the sum produced during this half-cycle; their log entries
    carry ``pre``/``post`` of ``None`` until the caller fills them in.
    """
    fired = []
    for spec in plan.due(cycle, edge):
        t, m = spec.target, spec.mask
        if t is Target.SBOX_VALUE:
            e = state.sbox[spec.index]
            state.sbox[spec.index] = e._replace(value=e.value ^ m)
            entry = LogEntry(spec, cycle, edge, e.word, state.sbox[spec.index].word)
        elif t is Target.SBOX_CRC:
            e = state.sbox[spec.index]
            state.sbox[spec.index] = e._replace(crc=e.crc ^ m)
            entry = LogEntry(spec, cycle, edge, e.word, state.sbox[spec.index].word)
        elif t is Target.J_REGISTER:
            pre = state.j
            state.j ^= m
            entry = LogEntry(spec, cycle, edge, pre, state.j)
        elif t is Target.I_COUNTER:
            pre = state.i
            state.i ^= m
            entry = LogEntry(spec, cycle, edge, pre, state.i)
        elif t is Target.ADDER_SUM:
            if edge is not Edge.RISING or adder_faults is None:
                entry = LogEntry(spec, cycle, edge, None, None, "no-op: adders only drive on the rising edge")
            else:
                adder_faults[spec.index] = adder_faults.get(spec.index, 0) ^ m
                entry = LogEntry(spec, cycle, edge, None, None, "latched into adder output")
        else:
            if counter is None or not counter.holds(spec.index):
                entry = LogEntry(spec, cycle, edge, None, None, f"no-op: counter slot {spec.index} not filled")
            else:
                pre, post = counter.corrupt(spec.index, m)
                entry = LogEntry(spec, cycle, edge, pre, post)
        fired.append(entry)
    return fired
