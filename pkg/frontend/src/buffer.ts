/**
 * Durable event buffer. Every mutation is written through to Web Storage, so
 * a reload (or crash) loses nothing: unflushed events reappear on the next
 * init and leave with the next successful flush. Events are only removed
 * once the server acknowledged the batch that carried them.
 */
import type { StorageLike } from "./env.js";
import type { WireEvent } from "./types.js";

export interface StoredSession {
  session_id: string;
  token: string;
  user_id: string;
  page_id: string;
}

interface BufferState {
  version: 1;
  session: StoredSession | null;
  next_seq: number;
  dropped: number;
  events: WireEvent[];
}

const EMPTY: BufferState = { version: 1, session: null, next_seq: 0, dropped: 0, events: [] };

export class EventBuffer {
  private state: BufferState;

  constructor(
    private readonly storage: StorageLike,
    private readonly key: string,
  ) {
    this.state = this.load();
  }

  private load(): BufferState {
    const raw = this.storage.getItem(this.key);
    if (!raw) return { ...EMPTY, events: [] };
    try {
      const parsed = JSON.parse(raw) as BufferState;
      if (parsed.version !== 1 || !Array.isArray(parsed.events)) {
        return { ...EMPTY, events: [] };
      }
      return parsed;
    } catch {
      return { ...EMPTY, events: [] };
    }
  }

  private persist(): void {
    try {
      this.storage.setItem(this.key, JSON.stringify(this.state));
    } catch {
      // quota exceeded: shed the oldest half of the backlog, keep a counter
      const shed = Math.max(1, Math.floor(this.state.events.length / 2));
      this.state.events = this.state.events.slice(shed);
      this.state.dropped += shed;
      try {
        this.storage.setItem(this.key, JSON.stringify(this.state));
      } catch {
        // still failing: hold the buffer in memory only
      }
    }
  }

  get session(): StoredSession | null {
    return this.state.session;
  }

  setSession(session: StoredSession): void {
    this.state.session = session;
    this.persist();
  }

  nextEventId(sessionId: string): string {
    const seq = this.state.next_seq;
    this.state.next_seq += 1;
    return `${sessionId}-e${seq}`;
  }

  push(event: WireEvent): number {
    this.state.events.push(event);
    this.persist();
    return this.state.events.length;
  }

  size(): number {
    return this.state.events.length;
  }

  peek(maxEvents: number): WireEvent[] {
    return this.state.events.slice(0, maxEvents);
  }

  /** Remove exactly the acknowledged events (by id) after a 2xx flush. */
  acknowledge(eventIds: string[]): void {
    const acked = new Set(eventIds);
    this.state.events = this.state.events.filter((ev) => !acked.has(ev.event_id));
    this.persist();
  }

  /** Events shed under storage pressure since the last takeDropCount(). */
  takeDropCount(): number {
    const n = this.state.dropped;
    if (n > 0) {
      this.state.dropped = 0;
      this.persist();
    }
    return n;
  }

  clearAll(): void {
    this.state = { ...EMPTY, events: [] };
    this.storage.removeItem(this.key);
  }
}
