"""The uniform request surface over vision providers.

Owns prompt rendering, reply parsing, validation, retries with corrective
feedback (plan requests only, disabled in eval mode), latency accounting per
call kind and visual type, and a bounded in-flight slot pool.
"""

from __future__ import annotations

import logging
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, replace

from ..errors import GuidanceError
from ..geometry import BoundingBox2D
from ..plan import MalformedDocument, PlanSchemaError, TaskPlan, parse_plan
from .mock import CORRECTION_MARKER
from .parsing import parse_bounding_box_reply, parse_rotation_reply, parse_translation_reply
from .prompts import render_prompt
from .provider import BBOX, PLAN, ROTATION, SEGMENTATION, TRANSLATION, VisionProvider
from .types import (
    BoundingBoxResult,
    EmptyMask,
    FrameRef,
    ParseError,
    ProviderTimeout,
    RotationResult,
    SegmentationMask,
    TranslationResult,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LatencySample:
    component: str
    seconds: float
    visual_type: int | None
    status: str  # ok | error | cancelled


class LatencyRecorder:
    """Thread-safe collector of per-call latency samples."""

    def __init__(self) -> None:
        self._samples: list[LatencySample] = []
        self._lock = threading.Lock()

    def record(self, sample: LatencySample) -> None:
        with self._lock:
            self._samples.append(sample)

    def samples(self, component: str | None = None, visual_type: int | None = None) -> list[LatencySample]:
        with self._lock:
            out = list(self._samples)
        if component is not None:
            out = [s for s in out if s.component == component]
        if visual_type is not None:
            out = [s for s in out if s.visual_type == visual_type]
        return out

    def mean_seconds(self, component: str, visual_type: int | None = None) -> float | None:
        picked = [s for s in self.samples(component, visual_type) if s.status == "ok"]
        if not picked:
            return None
        return sum(s.seconds for s in picked) / len(picked)


@dataclass(frozen=True)
class GatewayConfig:
    plan_retries: int = 2
    other_retries: int = 1
    backoff_base_s: float = 0.5
    max_in_flight: int = 8
    corrective_feedback: bool = True

    def __post_init__(self) -> None:
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")


@dataclass(frozen=True)
class PlanResult:
    plan: TaskPlan
    retries: int


class Gateway:
    def __init__(
        self,
        provider: VisionProvider,
        *,
        config: GatewayConfig | None = None,
        recorder: LatencyRecorder | None = None,
        sleep=time.sleep,
        eval_mode: bool = False,
    ) -> None:
        self.provider = provider
        self.config = config or GatewayConfig()
        if eval_mode and self.config.corrective_feedback:
            self.config = replace(self.config, corrective_feedback=False)
        self.recorder = recorder or LatencyRecorder()
        self.warnings: list[str] = []
        self._sleep = sleep
        self._slots = threading.BoundedSemaphore(self.config.max_in_flight)

    @contextmanager
    def _timed_slot(self, component: str, visual_type: int | None):
        self._slots.acquire()
        start = time.perf_counter()
        status = "ok"
        try:
            yield
        except GuidanceError:
            status = "error"
            raise
        except BaseException:
            status = "cancelled"
            raise
        finally:
            self._slots.release()
            self.recorder.record(
                LatencySample(component, time.perf_counter() - start, visual_type, status)
            )

    def _warn(self, message: str) -> None:
        log.warning("%s", message)
        self.warnings.append(message)

    def _backoff(self, attempt: int) -> None:
        self._sleep(self.config.backoff_base_s * (2 ** attempt))

    # -- plan ---------------------------------------------------------------

    def request_task_plan(self, query: str, initial_frame: FrameRef) -> PlanResult:
        """Request a plan; retries schema violations with corrective feedback."""
        self.provider.require(PLAN)
        base_prompt = render_prompt("plan", {})
        prompt = base_prompt
        last_error: GuidanceError | None = None
        for attempt in range(self.config.plan_retries + 1):
            with self._timed_slot("plan", None):
                reply = self.provider.plan_reply(prompt, query, initial_frame)
            try:
                plan = parse_plan(reply)
                plan = replace(plan, source_query=query)
                return PlanResult(plan=plan, retries=attempt)
            except (MalformedDocument, PlanSchemaError) as exc:
                last_error = exc
                if attempt >= self.config.plan_retries:
                    break
                if self.config.corrective_feedback:
                    prompt = (
                        f"{base_prompt}\n\n{CORRECTION_MARKER}: {exc}. "
                        "Reply again with corrected JSON only."
                    )
                self._backoff(attempt)
        assert last_error is not None
        raise last_error

    # -- grounding ------------------------------------------------------------

    def _with_retry(self, component: str, visual_type: int | None, call):
        retries = self.config.other_retries
        for attempt in range(retries + 1):
            try:
                with self._timed_slot(component, visual_type):
                    return call()
            except (ParseError, ProviderTimeout):
                if attempt >= retries:
                    raise
                self._backoff(attempt)

    def request_bounding_box(
        self, frame: FrameRef, key_component: str, visual_type: int | None = None
    ) -> BoundingBoxResult:
        self.provider.require(BBOX)
        prompt = render_prompt("bbox", {"key_component": key_component})

        def call() -> BoundingBoxResult:
            reply = self.provider.bbox_reply(prompt, frame)
            return parse_bounding_box_reply(reply, frame.width, frame.height)

        return self._with_retry("bbox", visual_type, call)

    def request_translation_target(
        self,
        frame: FrameRef,
        key_component: str,
        instruction: str,
        visual_type: int | None = None,
    ) -> TranslationResult:
        self.provider.require(TRANSLATION)
        prompt = render_prompt(
            "translation", {"key_component": key_component, "instruction": instruction}
        )

        def call() -> TranslationResult:
            reply = self.provider.translation_reply(prompt, frame)
            result, clamp_warnings = parse_translation_reply(reply, frame.width, frame.height)
            for w in clamp_warnings:
                self._warn(f"translation {key_component!r}: {w}")
            return result

        return self._with_retry("translation", visual_type, call)

    def request_rotation_info(
        self,
        initial_frame: FrameRef,
        current_frame: FrameRef,
        key_component: str,
        instruction: str,
        visual_type: int | None = None,
    ) -> RotationResult:
        self.provider.require(ROTATION)
        prompt = render_prompt(
            "rotation", {"key_component": key_component, "instruction": instruction}
        )

        def call() -> RotationResult:
            reply = self.provider.rotation_reply(prompt, initial_frame, current_frame)
            return parse_rotation_reply(reply)

        return self._with_retry("rotation", visual_type, call)

    def request_segmentation(
        self, frame: FrameRef, box: BoundingBox2D, visual_type: int | None = None
    ) -> SegmentationMask:
        self.provider.require(SEGMENTATION)
        x0, y0, x1, y1 = crop_bounds(box)

        def call() -> SegmentationMask:
            data = self.provider.segmentation_reply(frame, box)
            mask = SegmentationMask.from_png(data)
            if (mask.width, mask.height) != (x1 - x0, y1 - y0):
                raise ParseError(
                    f"mask is {mask.width}x{mask.height}, crop is {x1 - x0}x{y1 - y0}"
                )
            if mask.true_count == 0:
                raise EmptyMask(f"mask for box {box} has no foreground")
            return mask

        return self._with_retry("segmentation", visual_type, call)


def crop_bounds(box: BoundingBox2D) -> tuple[int, int, int, int]:
    """Integer crop rectangle (x0, y0, x1, y1) covering the box."""
    import math

    return (
        math.floor(box.x_min),
        math.floor(box.y_min),
        math.ceil(box.x_max),
        math.ceil(box.y_max),
    )
