"""Bit-accurate model of an RC4 datapath guarded by concurrent fault checkers."""

from .core import PhaseError, RejectedKeyError, SecretKey, keystream, new_state
from .faults import Edge, FaultPlan, FaultSpec, Target, arm
from .pipeline import Pipeline, RunState, run, throughput_probe

__all__ = [
    "Edge",
    "FaultPlan",
    "FaultSpec",
    "PhaseError",
    "Pipeline",
    "RejectedKeyError",
    "RunState",
    "SecretKey",
    "Target",
    "arm",
    "keystream",
    "new_state",
    "run",
    "throughput_probe",
]
