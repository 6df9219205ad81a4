"""Replay labeled fixture bundles through the full pipeline.

Mock mode routes all provider traffic to the bundle's canned replies (the
gateway runs one-shot, no corrective retries, so metrics reflect single-call
behavior). Live mode exists for bench runs against real providers and
requires configuration up front.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from ..errors import GuidanceError
from ..guidance import CompileError, compile_step
from ..plan import TaskPlan
from ..vision import (
    FrameRef,
    Gateway,
    LatencyRecorder,
    LiveProvider,
    LiveProviderConfig,
    MockProvider,
)
from .metrics import StepOutcome


class BundleFormatError(GuidanceError):
    """The bundle directory is missing or malformed; names the file/field."""


class ConfigError(GuidanceError):
    pass


def normalize_component(text: str) -> str:
    return re.sub(r"\s+", " ", text.strip().lower())


@dataclass(frozen=True)
class StepLabel:
    expected_visual_type: int
    expected_key_component: str
    instruction_correct: bool = True
    guidance_correct: bool = True


@dataclass(frozen=True)
class FixtureBundle:
    bundle_id: str
    path: Path
    query: str
    labels: tuple[StepLabel, ...]

    @staticmethod
    def load(path: str | Path) -> "FixtureBundle":
        path = Path(path)
        eval_path = path / "eval_labels.json"
        if not eval_path.exists():
            raise BundleFormatError(f"{eval_path}: missing eval_labels.json")
        try:
            doc = json.loads(eval_path.read_text())
            steps = [StepLabel(**s) for s in doc["steps"]]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise BundleFormatError(f"{eval_path}: {exc}") from exc
        labels_path = path / "labels.json"
        query = ""
        if labels_path.exists():
            query = json.loads(labels_path.read_text()).get("query", "")
        for i, label in enumerate(steps):
            if label.expected_visual_type not in (1, 2, 3, 4, 5):
                raise BundleFormatError(
                    f"{eval_path}: steps[{i}].expected_visual_type out of range"
                )
        return FixtureBundle(bundle_id=path.name, path=path, query=query, labels=tuple(steps))


@dataclass(frozen=True)
class StepDetail:
    step_index: int
    kinds: tuple[str, ...]
    category: str | None
    error: str | None
    vision_s: float | None
    geometry_s: float | None
    total_s: float | None
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReplayResult:
    bundle_id: str
    plan: TaskPlan
    outcomes: tuple[StepOutcome, ...]
    details: tuple[StepDetail, ...]
    recorder: LatencyRecorder


def replay(
    bundle: FixtureBundle,
    mode: str = "mock",
    live_config: LiveProviderConfig | None = None,
) -> ReplayResult:
    """Run one bundle end to end and score it against its labels."""
    if mode == "mock":
        provider = MockProvider(bundle.path)
    elif mode == "live":
        if live_config is None:
            raise ConfigError("live mode needs provider configuration")
        live_config.api_key()  # fails fast when the key env is unset
        provider = LiveProvider(live_config)
    else:
        raise ConfigError(f"unknown replay mode {mode!r}")

    recorder = LatencyRecorder()
    gateway = Gateway(provider, recorder=recorder, eval_mode=True, sleep=lambda _: None)
    scene_ids = provider.scene_ids() if isinstance(provider, MockProvider) else []
    snapshots = {sid: provider.load_scene(sid) for sid in scene_ids}
    ordered = [snapshots[sid] for sid in sorted(snapshots)]
    if not ordered:
        raise BundleFormatError(f"{bundle.path}: bundle has no scenes")

    initial = ordered[0]
    plan = gateway.request_task_plan(
        bundle.query, FrameRef(frame_id=initial.scene_id, image=initial.image)
    ).plan

    outcomes: list[StepOutcome] = []
    details: list[StepDetail] = []
    for i, label in enumerate(bundle.labels):
        step = plan.steps[i] if i < len(plan.steps) else None
        if step is None:
            outcomes.append(
                StepOutcome.from_verdicts(bundle.bundle_id, i, label.expected_visual_type,
                                          False, False, False, False)
            )
            details.append(StepDetail(i, (), None, "missing from plan", None, None, None))
            continue
        type_correct = int(step.visual_type) == label.expected_visual_type
        component_correct = normalize_component(step.target) == normalize_component(
            label.expected_key_component
        )
        instruction_correct = label.instruction_correct
        plan_correct = instruction_correct and type_correct and component_correct

        guidance_correct = False
        if plan_correct:
            snap = ordered[i] if i < len(ordered) else ordered[-1]
            try:
                compiled = compile_step(step, snap, gateway, step_index=i, initial_snapshot=initial)
            except CompileError as exc:
                details.append(
                    StepDetail(i, (), None, f"{exc.stage}: {exc.cause}", None, None, None)
                )
            else:
                guidance_correct = label.guidance_correct
                details.append(
                    StepDetail(
                        i,
                        compiled.kinds,
                        compiled.category,
                        None,
                        compiled.timing.vision_s,
                        compiled.timing.geometry_s,
                        compiled.timing.total_s,
                        compiled.notes,
                    )
                )
        else:
            details.append(StepDetail(i, (), None, "plan fields incorrect", None, None, None))
        outcomes.append(
            StepOutcome.from_verdicts(
                bundle.bundle_id,
                i,
                label.expected_visual_type,
                instruction_correct,
                type_correct,
                component_correct,
                guidance_correct,
            )
        )
    return ReplayResult(
        bundle_id=bundle.bundle_id,
        plan=plan,
        outcomes=tuple(outcomes),
        details=tuple(details),
        recorder=recorder,
    )
