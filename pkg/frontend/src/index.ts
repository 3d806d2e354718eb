export { backoffDelayMs } from "./backoff.js";
export { EventBuffer, type StoredSession } from "./buffer.js";
export { BACKOFF_CAP_MS, resolveConfig, type TrackerConfig, type TrackerOptions } from "./config.js";
export { browserEnvironment, type TrackerEnvironment } from "./env.js";
export {
  discoverFragments,
  fragmentAt,
  fragmentRecords,
  fragmentRects,
  type FragmentRegistry,
  type RegisteredFragment,
} from "./fragments.js";
export { isVisible, orientationOf, pageRectOf, viewportRect } from "./geometry.js";
export { Flusher, registerSession, type RegistrationBlock } from "./transport.js";
export { initTracker, Tracker, type GestureAdapter } from "./tracker.js";
export {
  eventBatchSchema,
  fragmentRecordSchema,
  rectSchema,
  sessionResponseSchema,
  wireEventSchema,
  type EventBatch,
  type WireEvent,
  type WireRect,
} from "./types.js";
