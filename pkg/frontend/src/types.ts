/**
 * Wire format shared with the ingestion service: one tagged-union object per
 * event, `type` first, flat payload fields, integer-millisecond timestamps,
 * page-space geometry. The zod schemas double as the conformance check every
 * emitted event must pass.
 */
import { z } from "zod";

export const rectSchema = z.object({
  x: z.number().finite(),
  y: z.number().finite(),
  width: z.number().finite().nonnegative(),
  height: z.number().finite().nonnegative(),
});
export type WireRect = z.infer<typeof rectSchema>;

export const fragmentRectsSchema = z.record(z.string(), rectSchema);

const base = {
  event_id: z.string().min(1),
  session_id: z.string().min(1),
  page_id: z.string().min(1),
  client_time: z.number().int(),
};

export const scrollEventSchema = z.object({
  type: z.literal("scroll"),
  ...base,
  viewport: rectSchema,
  fragment_rects: fragmentRectsSchema,
});

export const mouseMoveEventSchema = z.object({
  type: z.literal("mouse_move"),
  ...base,
  x: z.number().finite(),
  y: z.number().finite(),
});

export const mouseEnterEventSchema = z.object({
  type: z.literal("mouse_enter"),
  ...base,
  fragment_id: z.string().min(1),
});

export const mouseLeaveEventSchema = z.object({
  type: z.literal("mouse_leave"),
  ...base,
  fragment_id: z.string().min(1),
});

export const contactEventSchema = z.object({
  type: z.literal("contact"),
  ...base,
  x: z.number().finite(),
  y: z.number().finite(),
  contact_kind: z.enum(["click", "tap", "press"]),
  fragment_id: z.string().min(1).optional(),
});

export const keyUpEventSchema = z.object({
  type: z.literal("key_up"),
  ...base,
  selection_present: z.boolean(),
});

export const selectionEventSchema = z.object({
  type: z.literal("selection"),
  ...base,
  fragment_id: z.string().min(1),
  text_length: z.number().int().nonnegative(),
});

export const clipboardEventSchema = z.object({
  type: z.literal("clipboard"),
  ...base,
  fragment_id: z.string().min(1),
  action: z.enum(["cut", "copy"]),
  text_length: z.number().int().nonnegative(),
});

export const pinchEventSchema = z.object({
  type: z.literal("pinch"),
  ...base,
  scale: z.number().positive(),
  viewport_after: rectSchema,
  fragment_rects: fragmentRectsSchema,
});

export const swipePhaseEventSchema = z.object({
  type: z.literal("swipe_phase"),
  ...base,
  phase: z.enum(["start", "during", "end"]),
  visible_fragments: z.array(z.string()),
});

export const orientationEventSchema = z.object({
  type: z.literal("orientation"),
  ...base,
  new_orientation: z.enum(["portrait", "landscape"]),
  visible_fragments: z.array(z.string()),
});

export const wireEventSchema = z.discriminatedUnion("type", [
  scrollEventSchema,
  mouseMoveEventSchema,
  mouseEnterEventSchema,
  mouseLeaveEventSchema,
  contactEventSchema,
  keyUpEventSchema,
  selectionEventSchema,
  clipboardEventSchema,
  pinchEventSchema,
  swipePhaseEventSchema,
  orientationEventSchema,
]);
export type WireEvent = z.infer<typeof wireEventSchema>;

export const fragmentRecordSchema = z.object({
  fragment_id: z.string().min(1),
  page_id: z.string().min(1),
  parent_id: z.string().min(1).nullable(),
  dom_path: z.string(),
});
export type FragmentRecord = z.infer<typeof fragmentRecordSchema>;

export const eventBatchSchema = z.object({
  session_id: z.string().min(1),
  page_id: z.string().min(1),
  sent_at: z.number().int(),
  events: z.array(wireEventSchema),
  page: z
    .object({
      page_id: z.string().min(1),
      url: z.string().min(1),
      page_class: z.enum(["overview", "detail"]),
    })
    .optional(),
  fragments: z.array(fragmentRecordSchema).optional(),
  indicators: z
    .array(
      z.object({
        fragment_id: z.string().nullable().optional(),
        kind: z.string().min(1),
        value: z.number(),
      }),
    )
    .optional(),
});
export type EventBatch = z.infer<typeof eventBatchSchema>;

export const sessionResponseSchema = z.object({
  session_id: z.string().min(1),
  user_id: z.string().min(1),
  device_class: z.enum(["desktop", "mobile"]),
  started_at: z.number().int(),
  token: z.string().min(1),
  page_id: z.string().min(1),
});
export type SessionResponse = z.infer<typeof sessionResponseSchema>;
