"""Logical pulse-schedule export for a converged candidate.

The schedule mirrors the circuit order on a sequential timeline with two
regions: per-qubit local channels (single-qubit rotations, recorded as
axis/angle with a nominal duration) and one global channel (the analog
blocks with their exact omega, delta, phi, duration).  Rotations of one
layer run concurrently across qubits; a global block never overlaps any
local entry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .ansatz import AnalogBlock, AnsatzTemplate, Genome, Rotation, build_circuit

DEFAULT_ROTATION_NS = 100.0

GLOBAL_CHANNEL = "global"


def local_channel(qubit: int) -> str:
    return f"local{qubit}"


@dataclass(frozen=True)
class PulseEntry:
    channel: str
    start_ns: float
    duration_ns: float
    kind: str  # "rotation" or "analog_block"
    axis: Optional[str] = None
    angle: Optional[float] = None
    omega: Optional[float] = None
    delta: Optional[float] = None
    phi: Optional[float] = None

    def to_json_dict(self) -> dict:
        d = {"channel": self.channel, "start_ns": self.start_ns, "duration_ns": self.duration_ns, "kind": self.kind}
        if self.kind == "rotation":
            d["axis"] = self.axis
            d["angle"] = self.angle
        else:
            d["omega"] = self.omega
            d["delta"] = self.delta
            d["phi"] = self.phi
        return d

    @property
    def end_ns(self) -> float:
        return self.start_ns + self.duration_ns


@dataclass(frozen=True)
class PulseSchedule:
    n_qubits: int
    entries: tuple[PulseEntry, ...]

    def __post_init__(self):
        by_channel: dict[str, list[PulseEntry]] = {}
        for e in self.entries:
            by_channel.setdefault(e.channel, []).append(e)
        for channel, entries in by_channel.items():
            entries = sorted(entries, key=lambda e: e.start_ns)
            for a, b in zip(entries, entries[1:]):
                if b.start_ns < a.end_ns - 1e-9:
                    raise ValueError(f"overlapping entries on channel {channel}")
        for g in by_channel.get(GLOBAL_CHANNEL, []):
            for channel, entries in by_channel.items():
                if channel == GLOBAL_CHANNEL:
                    continue
                for e in entries:
                    if e.start_ns < g.end_ns - 1e-9 and g.start_ns < e.end_ns - 1e-9:
                        raise ValueError("global entry overlaps a local entry")

    @property
    def total_duration_ns(self) -> float:
        return max((e.end_ns for e in self.entries), default=0.0)

    def to_json_dict(self) -> dict:
        return {"n_qubits": self.n_qubits, "entries": [e.to_json_dict() for e in self.entries]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "PulseSchedule":
        entries = []
        for e in d["entries"]:
            entries.append(
                PulseEntry(
                    channel=e["channel"],
                    start_ns=e["start_ns"],
                    duration_ns=e["duration_ns"],
                    kind=e["kind"],
                    axis=e.get("axis"),
                    angle=e.get("angle"),
                    omega=e.get("omega"),
                    delta=e.get("delta"),
                    phi=e.get("phi"),
                )
            )
        return cls(d["n_qubits"], tuple(entries))


def export_schedule(g: Genome, tpl: AnsatzTemplate, rotation_duration_ns: float = DEFAULT_ROTATION_NS) -> PulseSchedule:
    """Lay the circuit's operation list onto the sequential timeline.

    Rotations of one per-qubit layer share a start time; each analog block
    starts after everything before it has finished.
    """
    ops = build_circuit(g, tpl)
    entries: list[PulseEntry] = []
    clock = 0.0
    i = 0
    while i < len(ops):
        op = ops[i]
        if isinstance(op, AnalogBlock):
            entries.append(
                PulseEntry(
                    channel=GLOBAL_CHANNEL,
                    start_ns=clock,
                    duration_ns=op.params.duration_ns,
                    kind="analog_block",
                    omega=op.params.omega,
                    delta=op.params.delta,
                    phi=op.params.phi,
                )
            )
            clock += op.params.duration_ns
            i += 1
        else:
            # consume one layer of rotations (consecutive Rotation ops)
            layer = []
            while i < len(ops) and isinstance(ops[i], Rotation):
                layer.append(ops[i])
                i += 1
                if len(layer) == tpl.n_qubits:
                    break
            for r in layer:
                entries.append(
                    PulseEntry(
                        channel=local_channel(r.qubit),
                        start_ns=clock,
                        duration_ns=rotation_duration_ns,
                        kind="rotation",
                        axis=r.axis,
                        angle=r.angle,
                    )
                )
            clock += rotation_duration_ns
    return PulseSchedule(tpl.n_qubits, tuple(entries))


def save_schedule(s: PulseSchedule, path) -> None:
    Path(path).write_text(json.dumps(s.to_json_dict(), indent=2) + "\n")


def load_schedule(path) -> PulseSchedule:
    return PulseSchedule.from_json_dict(json.loads(Path(path).read_text()))


def render_ascii(s: PulseSchedule, width: int = 78) -> str:
    """Quick timeline view: one row per channel, time left to right."""
    total = s.total_duration_ns or 1.0
    channels = [GLOBAL_CHANNEL] + [local_channel(q) for q in range(s.n_qubits)]
    label_w = max(len(c) for c in channels) + 1
    bar_w = max(10, width - label_w - 2)
    lines = [f"{'':{label_w}} 0 {'-' * (bar_w - 10)} {total:.0f} ns"]
    for channel in channels:
        row = [" "] * bar_w
        for e in s.entries:
            if e.channel != channel:
                continue
            a = int(e.start_ns / total * (bar_w - 1))
            b = max(a + 1, int(e.end_ns / total * (bar_w - 1)) + 1)
            mark = "#" if e.kind == "analog_block" else (e.axis or "?")
            for j in range(a, min(b, bar_w)):
                row[j] = mark
        lines.append(f"{channel:{label_w}}|{''.join(row)}|")
    return "\n".join(lines)
