"""RC4 key scheduling and keystream generation over a CRC-coded S-box.

Each step is split into the two half-cycles the hardware uses: additions on
the rising edge (``*_rise``) and the swap / keystream read on the falling
edge (``*_fall``). ``ksa_step`` and ``prga_step`` run both halves back to
back and return a :class:`StepTap` describing everything a checker can see.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .adder import AdditionRecord, ripple_add
from .crc import CodedEntry

N = 256
MIN_KEY_LEN = 5
MAX_KEY_LEN = 16

_IDENTITY = tuple(CodedEntry.encode(n) for n in range(N))


class RejectedKeyError(ValueError):
    """Key length outside the supported 5..16 byte range."""


class PhaseError(RuntimeError):
    """A step was requested in the wrong algorithm phase."""


class Phase(enum.Enum):
    KSA = "ksa"
    PRGA = "prga"


@dataclass(frozen=True)
class SecretKey:
    data: bytes

    def __post_init__(self):
        data = bytes(self.data)
        object.__setattr__(self, "data", data)
        if not MIN_KEY_LEN <= len(data) <= MAX_KEY_LEN:
            raise RejectedKeyError(
                f"key length {len(data)} outside [{MIN_KEY_LEN}, {MAX_KEY_LEN}] bytes"
            )

    @classmethod
    def from_hex(cls, text: str) -> SecretKey:
        try:
            data = bytes.fromhex(text.strip())
        except ValueError as exc:
            raise RejectedKeyError(f"key is not valid hex: {text!r}") from exc
        return cls(data)

    def __len__(self) -> int:
        return len(self.data)

    def __getitem__(self, idx: int) -> int:
        return self.data[idx]

    def hex(self) -> str:
        return self.data.hex()


@dataclass
class Rc4State:
    key: SecretKey
    i: int = 0
    j: int = 0
    sbox: list = field(default_factory=lambda: list(_IDENTITY))
    phase: Phase = Phase.KSA
    ksa_steps: int = 0
    # keystream index latched between the PRGA rising and falling edges
    t: int = 0

    def values(self) -> list[int]:
        return [e.value for e in self.sbox]

    def copy(self) -> Rc4State:
        return Rc4State(self.key, self.i, self.j, list(self.sbox), self.phase, self.ksa_steps, self.t)


@dataclass(frozen=True)
class StepTap:
    i: int
    j_new: int
    addends: tuple[AdditionRecord, ...]
    read_si: CodedEntry
    read_sj: CodedEntry
    z: Optional[int] = None


def new_state(key: SecretKey | bytes) -> Rc4State:
    if not isinstance(key, SecretKey):
        key = SecretKey(key)
    return Rc4State(key)


def _faulty(rec: AdditionRecord, mask: int) -> AdditionRecord:
    return rec._replace(claimed_sum=rec.claimed_sum ^ mask) if mask else rec


def ksa_rise(state: Rc4State, sum_faults: Mapping[int, int] | None = None) -> tuple[AdditionRecord, AdditionRecord]:
    """Rising edge of a KSA step: ``j + S[i]`` then ``+ key[i mod l]``."""
    if state.phase is not Phase.KSA:
        raise PhaseError("KSA step requested after key scheduling finished")
    sf = sum_faults or {}
    key = state.key.data
    first = _faulty(ripple_add(state.j, state.sbox[state.i].value), sf.get(0, 0))
    second = _faulty(ripple_add(first.claimed_sum, key[state.i % len(key)]), sf.get(1, 0))
    state.j = second.claimed_sum
    return first, second


def ksa_fall(state: Rc4State) -> tuple[CodedEntry, CodedEntry]:
    """Falling edge of a KSA step: read and swap whole coded words, advance ``i``."""
    if state.phase is not Phase.KSA:
        raise PhaseError("KSA step requested after key scheduling finished")
    s, i, j = state.sbox, state.i, state.j
    si, sj = s[i], s[j]
    s[i], s[j] = sj, si
    state.i = (i + 1) & 0xFF
    state.ksa_steps += 1
    if state.ksa_steps == N:
        state.phase = Phase.PRGA
        state.i = state.j = 0
    return si, sj


def prga_rise(state: Rc4State, sum_faults: Mapping[int, int] | None = None) -> tuple[AdditionRecord, AdditionRecord]:
    """Rising edge of a PRGA step: advance ``i``, update ``j``, form the output index.

    ``S[i] + S[j]`` is symmetric, so the output index computed from the
    pre-swap words equals the one RC4 forms after the swap.
    """
    if state.phase is not Phase.PRGA:
        raise PhaseError("PRGA step requested before key scheduling finished")
    sf = sum_faults or {}
    state.i = (state.i + 1) & 0xFF
    si = state.sbox[state.i].value
    upd = _faulty(ripple_add(state.j, si), sf.get(0, 0))
    state.j = upd.claimed_sum
    idx = _faulty(ripple_add(si, state.sbox[state.j].value), sf.get(1, 0))
    state.t = idx.claimed_sum
    return upd, idx


def prga_fall(state: Rc4State) -> tuple[CodedEntry, CodedEntry, int]:
    if state.phase is not Phase.PRGA:
        raise PhaseError("PRGA step requested before key scheduling finished")
    s, i, j = state.sbox, state.i, state.j
    si, sj = s[i], s[j]
    s[i], s[j] = sj, si
    return si, sj, s[state.t].value


def ksa_step(state: Rc4State) -> StepTap:
    if state.phase is not Phase.KSA:
        raise PhaseError("KSA already ran 256 steps")
    i = state.i
    adds = ksa_rise(state)
    j_new = state.j
    si, sj = ksa_fall(state)
    return StepTap(i, j_new, adds, si, sj)


def prga_step(state: Rc4State) -> StepTap:
    adds = prga_rise(state)
    si, sj, z = prga_fall(state)
    return StepTap(state.i, state.j, adds, si, sj, z)


def run_ksa(state: Rc4State) -> Rc4State:
    while state.phase is Phase.KSA:
        ksa_step(state)
    return state


def keystream(key: SecretKey | bytes, n: int) -> bytes:
    """Keystream of ``n`` bytes from the stepped core (no checkers, no faults)."""
    state = run_ksa(new_state(key))
    return bytes(prga_step(state).z for _ in range(n))
