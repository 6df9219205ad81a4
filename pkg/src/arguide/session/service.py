"""Session orchestration: plan generation, per-step compilation, navigation.

Each session's mutations are serialized under that session's lock; vision and
compile work runs outside it so distinct sessions proceed in parallel. A
failed compile leaves the session at its prior valid step.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass
from typing import Callable

from ..errors import GuidanceError
from ..geometry import SceneSnapshot
from ..guidance import AssetLibrary, compile_step, default_asset_library, export_json, export_step
from ..plan import TaskPlan, VisualType
from ..vision import FrameRef, Gateway
from .journal import Journal
from .state import SessionState, StepRecord, TimerState


class EmptyQuery(GuidanceError):
    pass


class UnknownSession(GuidanceError):
    pass


class EndOfPlan(GuidanceError):
    pass


class AtFirstStep(GuidanceError):
    pass


class SnapshotRequired(GuidanceError):
    """Advancing into a step never compiled before needs a fresh snapshot."""


@dataclass(frozen=True)
class CreatedSession:
    session_id: str
    plan: TaskPlan
    first_step: StepRecord
    plan_retries: int


@dataclass(frozen=True)
class SessionSummary:
    session_id: str
    query: str
    step_count: int
    current_step: int
    compiled_steps: tuple[int, ...]
    instructions: tuple[str, ...]


class SessionService:
    def __init__(
        self,
        gateway: Gateway,
        *,
        assets: AssetLibrary | None = None,
        journal_dir: str | None = None,
        id_factory: Callable[[], str] | None = None,
    ) -> None:
        self.gateway = gateway
        self.assets = assets or default_asset_library()
        self.journal = Journal(journal_dir) if journal_dir else None
        self._id_factory = id_factory or (lambda: uuid.uuid4().hex[:12])
        self._sessions: dict[str, SessionState] = {}
        self._registry_lock = threading.Lock()

    # -- helpers ------------------------------------------------------------

    def _get(self, session_id: str) -> SessionState:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r}")
        return session

    def _compile(self, session: SessionState, step_index: int, snap: SceneSnapshot) -> StepRecord:
        step = session.plan.steps[step_index]
        compiled = compile_step(
            step,
            snap,
            self.gateway,
            step_index=step_index,
            initial_snapshot=session.initial_snapshot,
            assets=self.assets,
        )
        doc = export_step(compiled, step, snap)
        return StepRecord(
            step_index=step_index,
            compiled=compiled,
            export_doc=doc,
            export_text=export_json(doc),
        )

    def _enter_step(self, session: SessionState, step_index: int) -> None:
        """Update position and timer state; caller holds the session lock."""
        session.current_step = step_index
        session.timer_generation += 1
        step = session.plan.steps[step_index]
        if step.visual_type == VisualType.WIDGET:
            session.timer = TimerState(
                generation=session.timer_generation,
                step_index=step_index,
                total_seconds=step.wait_seconds(),
            )
        else:
            session.timer = None

    # -- operations -----------------------------------------------------------

    def create_session(
        self,
        query: str,
        initial_snapshot: SceneSnapshot,
        *,
        session_id: str | None = None,
    ) -> CreatedSession:
        """Start a session; the initial snapshot becomes the axis-defining frame.

        ``session_id`` is normally server-generated; relay clients propose
        their own so later messages can reference the session before the
        creation reply arrives.
        """
        if not query or not query.strip():
            raise EmptyQuery("query is blank")
        frame = FrameRef(frame_id=initial_snapshot.scene_id, image=initial_snapshot.image)
        result = self.gateway.request_task_plan(query, frame)
        session = SessionState(
            session_id=session_id or self._id_factory(),
            plan=result.plan,
            initial_snapshot=initial_snapshot,
        )
        record = self._compile(session, 0, initial_snapshot)
        with session.lock:
            session.snapshots[0] = initial_snapshot
            session.records[0] = record
            self._enter_step(session, 0)
            session.check_invariants()
        with self._registry_lock:
            self._sessions[session.session_id] = session
        if self.journal:
            self.journal.record_created(session.session_id, result.plan)
            self.journal.record_step(session.session_id, "compiled", 0)
        return CreatedSession(
            session_id=session.session_id,
            plan=result.plan,
            first_step=record,
            plan_retries=result.retries,
        )

    def advance(self, session_id: str, snapshot: SceneSnapshot | None = None) -> StepRecord:
        """Move forward one step, compiling against the supplied snapshot.

        Without a snapshot the cached compilation for that step is re-served
        (only possible after navigating back). Compile errors propagate and
        the session stays at its prior step.
        """
        session = self._get(session_id)
        with session.lock:
            next_index = session.current_step + 1
            if next_index >= len(session.plan.steps):
                raise EndOfPlan(f"session is at the final step {session.current_step}")
            cached = session.records.get(next_index)
        if snapshot is None:
            if cached is None:
                raise SnapshotRequired(f"step {next_index} has no snapshot yet")
            record = cached
        else:
            record = self._compile(session, next_index, snapshot)
        with session.lock:
            if snapshot is not None:
                session.snapshots[next_index] = snapshot
                session.records[next_index] = record
            self._enter_step(session, next_index)
            session.check_invariants()
        if self.journal:
            self.journal.record_step(session_id, "advanced", next_index)
        return record

    def back(self, session_id: str) -> StepRecord:
        """Step back and re-serve the cached guidance without recompiling."""
        session = self._get(session_id)
        with session.lock:
            if session.current_step == 0:
                raise AtFirstStep("already at the first step")
            prev_index = session.current_step - 1
            record = session.records[prev_index]
            self._enter_step(session, prev_index)
            session.check_invariants()
        if self.journal:
            self.journal.record_step(session_id, "back", prev_index)
        return record

    def current_record(self, session_id: str) -> StepRecord:
        session = self._get(session_id)
        with session.lock:
            return session.records[session.current_step]

    def summary(self, session_id: str) -> SessionSummary:
        session = self._get(session_id)
        with session.lock:
            return SessionSummary(
                session_id=session.session_id,
                query=session.plan.source_query,
                step_count=len(session.plan.steps),
                current_step=session.current_step,
                compiled_steps=tuple(sorted(session.records)),
                instructions=tuple(s.instruction for s in session.plan.steps),
            )

    def timer_state(self, session_id: str) -> TimerState | None:
        session = self._get(session_id)
        with session.lock:
            return session.timer

    def timer_still_active(self, session_id: str, generation: int) -> bool:
        session = self._get(session_id)
        with session.lock:
            return session.timer is not None and session.timer.generation == generation

    def state_fingerprint(self, session_id: str) -> tuple:
        """Hashable digest of observable session state (for protocol checks)."""
        session = self._get(session_id)
        with session.lock:
            return (
                session.current_step,
                tuple(sorted(session.records)),
                tuple(session.records[i].export_text for i in sorted(session.records)),
            )
