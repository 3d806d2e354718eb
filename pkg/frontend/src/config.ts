export interface TrackerConfig {
  /** CSS class marking the elements to track as fragments. */
  fragmentCssClass: string;
  /** Base URL of the ingestion service, e.g. "https://collect.example". */
  endpointUrl: string;
  userId: string;
  /** Seconds between periodic flushes. */
  flushIntervalS: number;
  /** Buffer size that triggers an immediate flush; also the batch cap. */
  flushMaxEvents: number;
  /** Event types to capture; omit for all. */
  enabledKinds?: ReadonlySet<string>;
  /** Mirrors the server-side ancestor-propagation switch (informational). */
  propagateMode: "ancestors" | "self-only";
  /** Reuse a stored session after reload instead of registering a new one. */
  resumeSession: boolean;
  /** Local-storage key namespace. */
  storageKey: string;
  /** Retry backoff base in ms; doubles per attempt, capped at 5 minutes. */
  backoffBaseMs: number;
}

export const BACKOFF_CAP_MS = 5 * 60 * 1000;

export type TrackerOptions = Partial<TrackerConfig> &
  Pick<TrackerConfig, "endpointUrl" | "userId">;

export function resolveConfig(options: TrackerOptions): TrackerConfig {
  const config: TrackerConfig = {
    fragmentCssClass: "rl-fragment",
    flushIntervalS: 30,
    flushMaxEvents: 50,
    propagateMode: "ancestors",
    resumeSession: true,
    storageKey: "readlens.tracker",
    backoffBaseMs: 1000,
    ...options,
  };
  if (config.flushIntervalS <= 0 || config.flushMaxEvents <= 0) {
    throw new Error("flush thresholds must be positive");
  }
  if (!config.endpointUrl) {
    throw new Error("endpointUrl is required");
  }
  if (!config.userId) {
    throw new Error("userId is required");
  }
  return config;
}
