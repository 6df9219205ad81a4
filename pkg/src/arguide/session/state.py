"""Live session state."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from ..geometry import SceneSnapshot
from ..guidance import CompiledStep
from ..plan import TaskPlan


@dataclass(frozen=True)
class StepRecord:
    """One compiled step plus its frozen wire form.

    ``export_text`` is the canonical scene-graph JSON; re-serving a cached
    step returns this exact string, byte-identical to its first emission.
    """

    step_index: int
    compiled: CompiledStep
    export_doc: dict
    export_text: str


@dataclass
class TimerState:
    generation: int
    step_index: int
    total_seconds: int


@dataclass
class SessionState:
    session_id: str
    plan: TaskPlan
    initial_snapshot: SceneSnapshot
    current_step: int = 0
    snapshots: dict[int, SceneSnapshot] = field(default_factory=dict)
    records: dict[int, StepRecord] = field(default_factory=dict)
    timer: TimerState | None = None
    timer_generation: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def check_invariants(self) -> None:
        assert 0 <= self.current_step < len(self.plan.steps)
        for index in self.records:
            assert index in self.snapshots, f"compiled step {index} lacks a snapshot"
