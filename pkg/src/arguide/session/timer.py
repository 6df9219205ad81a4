"""Countdown ticks for widget steps.

The tick sequence for a total of T seconds is T, T-1, ..., 1, 0 with the
final tick flagged expired; a zero-second widget emits the single expired
tick. Pacing and early termination on step change belong to the runner, not
the sequence.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterator


@dataclass(frozen=True)
class TimerTick:
    session_id: str
    step_index: int
    remaining_seconds: int
    expired: bool


def countdown(total_seconds: int) -> Iterator[tuple[int, bool]]:
    if total_seconds < 0:
        raise ValueError("negative countdown")
    for remaining in range(total_seconds, -1, -1):
        yield remaining, remaining == 0


def run_timer(
    session_id: str,
    step_index: int,
    total_seconds: int,
    emit: Callable[[TimerTick], None],
    *,
    still_active: Callable[[], bool],
    interval_s: float = 1.0,
    sleep: Callable[[float], None] = time.sleep,
) -> bool:
    """Emit ticks at the given interval until done or deactivated.

    Returns True when the countdown ran to its expired tick, False when the
    step changed mid-count (no expired flag is ever emitted in that case).
    """
    for i, (remaining, expired) in enumerate(countdown(total_seconds)):
        if i > 0:
            sleep(interval_s)
        if not still_active():
            return False
        emit(TimerTick(session_id, step_index, remaining, expired))
    return True
