// Countdown chip state fed by server timer_tick messages.

export interface TimerDisplay {
  stepIndex: number;
  remainingSeconds: number;
  expired: boolean;
}

export function formatMmSs(totalSeconds: number): string {
  const clamped = Math.max(0, Math.floor(totalSeconds));
  const mm = Math.floor(clamped / 60);
  const ss = clamped % 60;
  return `${String(mm).padStart(2, "0")}:${String(ss).padStart(2, "0")}`;
}

export function applyTick(
  current: TimerDisplay | null,
  tick: { step_index: number; remaining_seconds: number; expired: boolean },
): TimerDisplay {
  return {
    stepIndex: tick.step_index,
    remainingSeconds: tick.remaining_seconds,
    expired: tick.expired,
  };
}

export function chipText(timer: TimerDisplay | null): string {
  if (timer === null) return "";
  return formatMmSs(timer.remainingSeconds);
}
