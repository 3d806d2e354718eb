/**
 * The tracker wires platform events to wire-format events: geometry is
 * sampled in the handler (page space), events land in a storage-backed
 * buffer, and batches leave for the ingestion service every 30 seconds or
 * as soon as 50 events are waiting, whichever comes first.
 *
 * Touch gestures (tap, press, pinch, swipe) arrive through the `gestures`
 * adapter; wire a recognizer such as hammer.js to it in production. Swipe
 * phases snapshot the currently visible fragments so the server can work
 * out what was skipped.
 */
import { EventBuffer } from "./buffer.js";
import { resolveConfig, type TrackerConfig, type TrackerOptions } from "./config.js";
import type { ElementLike, SelectionLike, TrackerEnvironment } from "./env.js";
import {
  discoverFragments,
  fragmentAt,
  fragmentRecords,
  fragmentRects,
  type FragmentRegistry,
} from "./fragments.js";
import { isVisible, orientationOf, pageRectOf, viewportRect } from "./geometry.js";
import { Flusher, registerSession } from "./transport.js";
import { wireEventSchema, type WireEvent } from "./types.js";

export interface GestureAdapter {
  tap(pageX: number, pageY: number): void;
  press(pageX: number, pageY: number): void;
  pinch(scale: number): void;
  swipeStart(): void;
  swipeDuring(): void;
  swipeEnd(): void;
}

export class Tracker {
  readonly config: TrackerConfig;
  readonly gestures: GestureAdapter;
  private readonly buffer: EventBuffer;
  private registry: FragmentRegistry = { fragments: [], duplicateIds: [] };
  private flusher: Flusher | null = null;
  private intervalHandle: ReturnType<TrackerEnvironment["clock"]["setInterval"]> | null = null;
  private lastOrientation: "portrait" | "landscape" | null = null;

  constructor(
    private readonly env: TrackerEnvironment,
    options: TrackerOptions,
  ) {
    this.config = resolveConfig(options);
    this.buffer = new EventBuffer(env.storage, this.config.storageKey);
    this.gestures = {
      tap: (x, y) => this.emitContact(x, y, "tap"),
      press: (x, y) => this.emitContact(x, y, "press"),
      pinch: (scale) => this.emitPinch(scale),
      swipeStart: () => this.emitSwipePhase("start"),
      swipeDuring: () => this.emitSwipePhase("during"),
      swipeEnd: () => this.emitSwipePhase("end"),
    };
  }

  async init(): Promise<void> {
    const stored = this.buffer.session;
    if (!(this.config.resumeSession && stored && stored.user_id === this.config.userId)) {
      const session = await registerSession(this.env.http, this.config, {
        pageUrl: this.env.window.location.href,
        userAgent: this.env.window.navigator.userAgent,
      });
      this.buffer.setSession(session);
    }
    const pageId = this.session.page_id;
    this.registry = discoverFragments(this.env.document, this.config.fragmentCssClass, pageId);

    const registration = {
      fragments: fragmentRecords(this.registry, pageId),
      indicators:
        this.registry.duplicateIds.length > 0
          ? [{ kind: "duplicate_fragment_ids", value: this.registry.duplicateIds.length }]
          : undefined,
    };
    this.flusher = new Flusher(this.env.http, this.env.clock, this.config, this.buffer, registration);

    this.installListeners();
    this.emitScroll(); // geometry snapshot for the freshly loaded page
    this.intervalHandle = this.env.clock.setInterval(
      () => void this.flushNow(),
      this.config.flushIntervalS * 1000,
    );
  }

  stop(): void {
    if (this.intervalHandle) {
      this.env.clock.clearInterval(this.intervalHandle);
      this.intervalHandle = null;
    }
  }

  get session() {
    const session = this.buffer.session;
    if (!session) throw new Error("tracker not initialized");
    return session;
  }

  bufferSize(): number {
    return this.buffer.size();
  }

  flushNow(): Promise<void> {
    return this.flusher ? this.flusher.flush() : Promise.resolve();
  }

  // --- capture ------------------------------------------------------------

  private installListeners(): void {
    const win = this.env.window;
    const doc = this.env.document;
    win.addEventListener("scroll", () => this.emitScroll());
    win.addEventListener("orientationchange", () => this.emitOrientation());
    doc.addEventListener("mousemove", (ev: { pageX: number; pageY: number }) =>
      this.emit({ type: "mouse_move", x: ev.pageX, y: ev.pageY }),
    );
    doc.addEventListener("click", (ev: { pageX: number; pageY: number }) =>
      this.emitContact(ev.pageX, ev.pageY, "click"),
    );
    doc.addEventListener("keyup", () => {
      this.emit({ type: "key_up", selection_present: this.selectedText().length > 0 });
      this.emitSelection();
    });
    doc.addEventListener("mouseup", () => this.emitSelection());
    doc.addEventListener("cut", () => this.emitClipboard("cut"));
    doc.addEventListener("copy", () => this.emitClipboard("copy"));
    for (const fragment of this.registry.fragments) {
      fragment.element.addEventListener("mouseenter", () =>
        this.emit({ type: "mouse_enter", fragment_id: fragment.id }),
      );
      fragment.element.addEventListener("mouseleave", () =>
        this.emit({ type: "mouse_leave", fragment_id: fragment.id }),
      );
    }
  }

  private emit(partial: Record<string, unknown> & { type: WireEvent["type"] }): void {
    if (this.config.enabledKinds && !this.config.enabledKinds.has(partial.type)) return;
    const session = this.buffer.session;
    if (!session) return;
    const event = wireEventSchema.parse({
      ...partial,
      event_id: this.buffer.nextEventId(session.session_id),
      session_id: session.session_id,
      page_id: session.page_id,
      client_time: this.env.clock.now(),
    });
    const size = this.buffer.push(event);
    if (size >= this.config.flushMaxEvents) {
      void this.flushNow();
    }
  }

  private emitScroll(): void {
    this.emit({
      type: "scroll",
      viewport: viewportRect(this.env.window),
      fragment_rects: fragmentRects(this.registry, this.env.window),
    });
  }

  private emitContact(pageX: number, pageY: number, contactKind: "click" | "tap" | "press"): void {
    const fragment = fragmentAt(this.registry, this.env.window, pageX, pageY);
    this.emit({
      type: "contact",
      x: pageX,
      y: pageY,
      contact_kind: contactKind,
      ...(fragment ? { fragment_id: fragment.id } : {}),
    });
  }

  private emitPinch(scale: number): void {
    this.emit({
      type: "pinch",
      scale,
      viewport_after: viewportRect(this.env.window),
      fragment_rects: fragmentRects(this.registry, this.env.window),
    });
  }

  private emitSwipePhase(phase: "start" | "during" | "end"): void {
    this.emit({ type: "swipe_phase", phase, visible_fragments: this.visibleFragmentIds() });
  }

  private emitOrientation(): void {
    const orientation = orientationOf(this.env.window);
    if (orientation === this.lastOrientation) return;
    this.lastOrientation = orientation;
    this.emit({
      type: "orientation",
      new_orientation: orientation,
      visible_fragments: this.visibleFragmentIds(),
    });
  }

  private emitSelection(): void {
    const text = this.selectedText();
    if (text.length === 0) return;
    const fragment = this.selectionFragment();
    if (!fragment) return; // unattributable selection carries no signal
    this.emit({ type: "selection", fragment_id: fragment.id, text_length: text.length });
  }

  private emitClipboard(action: "cut" | "copy"): void {
    const text = this.selectedText();
    const fragment = this.selectionFragment();
    if (!fragment) return;
    this.emit({
      type: "clipboard",
      fragment_id: fragment.id,
      action,
      text_length: text.length,
    });
  }

  private selectedText(): string {
    const selection: SelectionLike | null = this.env.window.getSelection();
    return selection ? selection.toString() : "";
  }

  private selectionFragment() {
    const selection = this.env.window.getSelection();
    const anchor = selection?.anchorElement;
    if (!anchor) return null;
    // innermost registered fragment containing the anchor element
    let best: { id: string; element: ElementLike } | null = null;
    for (const fragment of this.registry.fragments) {
      if (fragment.element === anchor || fragment.element.contains(anchor)) {
        if (!best || best.element.contains(fragment.element)) {
          best = fragment;
        }
      }
    }
    return best;
  }

  private visibleFragmentIds(): string[] {
    const viewport = viewportRect(this.env.window);
    return this.registry.fragments
      .filter((f) => isVisible(pageRectOf(f.element, this.env.window), viewport))
      .map((f) => f.id)
      .sort();
  }
}

export async function initTracker(env: TrackerEnvironment, options: TrackerOptions): Promise<Tracker> {
  const tracker = new Tracker(env, options);
  await tracker.init();
  return tracker;
}
