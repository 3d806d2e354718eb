import { BACKOFF_CAP_MS } from "./config.js";

/** Exponential backoff: base * 2^attempt, capped at five minutes. */
export function backoffDelayMs(attempt: number, baseMs: number): number {
  const exponent = Math.min(attempt, 30); // avoid overflow long before the cap
  return Math.min(baseMs * 2 ** exponent, BACKOFF_CAP_MS);
}
