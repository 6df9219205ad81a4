"""Append-only per-session journal for crash recovery.

One JSONL file per session. Recovery restores the plan and navigation
position; snapshots and compiled guidance are not persisted (clients re-send
a snapshot to recompile after a restart).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..plan import TaskPlan, parse_plan, serialize_plan


class Journal:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.jsonl"

    def append(self, session_id: str, event: dict) -> None:
        with self._path(session_id).open("a", encoding="utf-8") as f:
            f.write(json.dumps(event, sort_keys=True) + "\n")

    def record_created(self, session_id: str, plan: TaskPlan) -> None:
        self.append(session_id, {"event": "created", "plan": serialize_plan(plan)})

    def record_step(self, session_id: str, event: str, step_index: int) -> None:
        self.append(session_id, {"event": event, "step": step_index})


@dataclass(frozen=True)
class RecoveredSession:
    session_id: str
    plan: TaskPlan
    current_step: int


def recover(directory: str | Path) -> list[RecoveredSession]:
    """Rebuild plan + position for every journaled session."""
    sessions = []
    directory = Path(directory)
    if not directory.is_dir():
        return sessions
    for path in sorted(directory.glob("*.jsonl")):
        plan: TaskPlan | None = None
        step = 0
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            event = json.loads(line)
            if event.get("event") == "created":
                plan = parse_plan(event["plan"])
            elif "step" in event:
                step = int(event["step"])
        if plan is not None:
            sessions.append(RecoveredSession(path.stem, plan, step))
    return sessions
