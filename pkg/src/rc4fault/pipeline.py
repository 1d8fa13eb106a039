"""Dual-edge, cycle-accurate scheduler for the checked RC4 datapath.

Schedule per clock cycle:

* rising edge: inject due faults, sample ``i`` into the counter buffer,
  perform the step's two additions, run the addition checker;
* falling edge: inject due faults, read and swap ``S[i]``/``S[j]`` (and read
  the keystream byte in PRGA), run the CRC checker on the two swapped words,
  run the counter checker when eight samples are buffered.

After each half-cycle ``no_fault`` is the AND of the latest verdict of each
checker; when it drops the machine halts and nothing more happens. KSA takes
256 cycles. PRGA spends one initial cycle presenting ``i = 0`` and then emits
one byte per cycle, so ``n`` bytes take ``n + 1`` cycles.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Optional

from . import core
from .adder import check_addition
from .core import N, Phase, Rc4State, SecretKey
from .counter import CounterBuffer
from .crc import check_access
from .faults import EMPTY_PLAN, Edge, FaultLog, FaultPlan, LogEntry, Target, apply_due
from .verdict import ADDITION, CHECKERS, COUNTER, CRC, CheckerVerdict

KSA_CYCLES = N
TRACE_FIELDS = ("cycle", "edge", "i", "j", "crc_ok", "add_ok", "cnt_ok", "z_hex")


@dataclass(frozen=True, order=True)
class ClockPhase:
    cycle: int
    edge: Edge

    def __str__(self) -> str:
        return f"{self.cycle}/{self.edge}"


class RunState(enum.Enum):
    RUNNING = "running"
    HALTED = "halted"
    DONE = "done"


@dataclass
class PipelineStatus:
    state: RunState = RunState.RUNNING
    bytes_emitted: int = 0
    no_fault: bool = True
    halted_at: Optional[ClockPhase] = None
    offending: tuple[str, ...] = ()
    details: tuple[str, ...] = ()

    def describe(self) -> str:
        if self.state is RunState.HALTED:
            return (
                f"HALTED at cycle {self.halted_at.cycle} {self.halted_at.edge} edge "
                f"by {','.join(self.offending)} checker after {self.bytes_emitted} bytes"
            )
        return f"{self.state.name} after {self.bytes_emitted} bytes"


@dataclass(frozen=True)
class TraceRecord:
    cycle: int
    edge: Edge
    phase: Phase
    i: int
    j: int
    crc_ok: bool
    add_ok: bool
    cnt_ok: bool
    z: Optional[int] = None

    def row(self) -> tuple:
        return (
            self.cycle,
            str(self.edge),
            self.i,
            self.j,
            int(self.crc_ok),
            int(self.add_ok),
            int(self.cnt_ok),
            "" if self.z is None else f"{self.z:02x}",
        )


@dataclass
class RunResult:
    keystream: bytes
    status: PipelineStatus
    log: FaultLog
    trace: list[TraceRecord] = field(default_factory=list)
    cycles: int = 0

    @property
    def prga_cycles(self) -> int:
        return max(0, self.cycles - KSA_CYCLES)


class Pipeline:
    """One checked RC4 machine; build a fresh instance per run."""

    def __init__(
        self,
        key: SecretKey | bytes,
        plan: FaultPlan = EMPTY_PLAN,
        *,
        checkers: bool = True,
        trace: bool = False,
    ):
        self.state: Rc4State = core.new_state(key)
        self.plan = plan
        self.checkers = checkers
        self.record_trace = trace
        self.counter = CounterBuffer()
        self.status = PipelineStatus()
        self.log = FaultLog()
        self.trace: list[TraceRecord] = []
        self.latest = {name: CheckerVerdict(name, True, ready=False) for name in CHECKERS}
        self.stream = bytearray()
        self.cycle = 0

    # -- half-cycle plumbing -------------------------------------------------

    def _inject(self, edge: Edge, adder_faults: Optional[dict] = None) -> list[LogEntry]:
        fired = apply_due(self.plan, self.cycle, edge, self.state, self.counter, adder_faults)
        self.log.extend(fired)
        return fired

    def _settle(self, edge: Edge, verdicts: list[CheckerVerdict], z: Optional[int] = None) -> bool:
        """Latch verdicts, gate output on ``no_fault``; return False once halted."""
        if self.checkers:
            for v in verdicts:
                self.latest[v.checker] = v
        ok = all(v.ok for v in self.latest.values())
        self.status.no_fault = ok
        if ok and z is not None:
            self.stream.append(z)
            self.status.bytes_emitted += 1
        if self.record_trace:
            self.trace.append(
                TraceRecord(
                    self.cycle,
                    edge,
                    self.state.phase,
                    self.state.i,
                    self.state.j,
                    self.latest[CRC].ok,
                    self.latest[ADDITION].ok,
                    self.latest[COUNTER].ok,
                    z if ok else None,
                )
            )
        if not ok:
            bad = [v for v in self.latest.values() if not v.ok]
            self.status.state = RunState.HALTED
            self.status.halted_at = ClockPhase(self.cycle, edge)
            self.status.offending = tuple(v.checker for v in bad)
            self.status.details = tuple(v.detail for v in bad)
        return ok

    def _check_additions(self, adds, fired: list[LogEntry]) -> list[CheckerVerdict]:
        for entry in fired:
            if entry.spec.target is Target.ADDER_SUM and entry.edge is Edge.RISING:
                rec = adds[entry.spec.index] if adds else None
                if rec is None:
                    entry.note = "no-op: adder idle this cycle"
                else:
                    entry.pre = (rec.add + rec.aug + rec.cin) & 0xFF
                    entry.post = rec.claimed_sum
        if not self.checkers or not adds:
            return []
        verdicts = [check_addition(r) for r in adds]
        for v in verdicts:
            if not v.ok:
                return [v]
        return verdicts[:1]

    def _falling_checks(self, si, sj) -> list[CheckerVerdict]:
        if not self.checkers:
            return []
        out = [check_access(si, sj)]
        if self.counter.ready:
            out.append(self.counter.check())
        return out

    # -- cycles ----------------------------------------------------------------

    def _ksa_cycle(self) -> bool:
        adder_faults: dict[int, int] = {}
        fired = self._inject(Edge.RISING, adder_faults)
        self.counter.sample(self.state.i)
        adds = core.ksa_rise(self.state, adder_faults)
        if not self._settle(Edge.RISING, self._check_additions(adds, fired)):
            return False
        self._inject(Edge.FALLING)
        si, sj = core.ksa_fall(self.state)
        return self._settle(Edge.FALLING, self._falling_checks(si, sj))

    def _prga_prime_cycle(self) -> bool:
        self.counter.reset()
        adder_faults: dict[int, int] = {}
        fired = self._inject(Edge.RISING, adder_faults)
        self.counter.sample(self.state.i)
        if not self._settle(Edge.RISING, self._check_additions((), fired)):
            return False
        self._inject(Edge.FALLING)
        checks = [self.counter.check()] if self.checkers and self.counter.ready else []
        return self._settle(Edge.FALLING, checks)

    def _prga_cycle(self) -> bool:
        adder_faults: dict[int, int] = {}
        fired = self._inject(Edge.RISING, adder_faults)
        adds = core.prga_rise(self.state, adder_faults)
        self.counter.sample(self.state.i)
        if not self._settle(Edge.RISING, self._check_additions(adds, fired)):
            return False
        self._inject(Edge.FALLING)
        si, sj, z = core.prga_fall(self.state)
        return self._settle(Edge.FALLING, self._falling_checks(si, sj), z)

    def run(self, n_bytes: int) -> RunResult:
        if n_bytes < 0:
            raise ValueError("n_bytes must be non-negative")
        if self.status.state is not RunState.RUNNING or self.cycle:
            raise RuntimeError("a Pipeline instance runs once")
        schedule = [self._ksa_cycle] * KSA_CYCLES + [self._prga_prime_cycle] + [self._prga_cycle] * n_bytes
        for step in schedule:
            alive = step()
            self.cycle += 1
            if not alive:
                break
        else:
            self.status.state = RunState.DONE
        return RunResult(bytes(self.stream), self.status, self.log, self.trace, self.cycle)


def run(
    key: SecretKey | bytes,
    n_bytes: int,
    plan: FaultPlan = EMPTY_PLAN,
    *,
    checkers: bool = True,
    trace: bool = False,
) -> RunResult:
    return Pipeline(key, plan, checkers=checkers, trace=trace).run(n_bytes)


def throughput_probe(key: SecretKey | bytes, n_bytes: int, checkers_enabled: bool = True) -> int:
    """Total clock cycles of a fault-free run."""
    return run(key, n_bytes, checkers=checkers_enabled).cycles


def write_trace_csv(trace: list[TraceRecord], fh: io.TextIOBase) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_FIELDS)
    for rec in trace:
        w.writerow(rec.row())
