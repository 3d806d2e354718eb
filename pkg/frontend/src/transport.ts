/**
 * HTTP transport to the ingestion service: session registration and batch
 * delivery. A flush either clears exactly the events it sent (2xx) or leaves
 * the buffer untouched for the next attempt.
 */
import { backoffDelayMs } from "./backoff.js";
import type { EventBuffer, StoredSession } from "./buffer.js";
import type { Clock, HttpClient, TimerHandle } from "./env.js";
import type { TrackerConfig } from "./config.js";
import {
  eventBatchSchema,
  sessionResponseSchema,
  type EventBatch,
  type FragmentRecord,
} from "./types.js";

export interface RegisterOptions {
  pageUrl: string;
  userAgent: string;
  pageClass?: "overview" | "detail";
}

export async function registerSession(
  http: HttpClient,
  config: TrackerConfig,
  options: RegisterOptions,
): Promise<StoredSession> {
  const resp = await http.post(
    `${config.endpointUrl}/sessions`,
    {
      user_id: config.userId,
      user_agent: options.userAgent,
      page_url: options.pageUrl,
      ...(options.pageClass ? { page_class: options.pageClass } : {}),
    },
    {},
  );
  if (resp.status !== 201) {
    throw new Error(`session registration failed with status ${resp.status}`);
  }
  const body = sessionResponseSchema.parse(await resp.json());
  return {
    session_id: body.session_id,
    token: body.token,
    user_id: body.user_id,
    page_id: body.page_id,
  };
}

export interface RegistrationBlock {
  page?: EventBatch["page"];
  fragments: FragmentRecord[];
  indicators?: { fragment_id?: string | null; kind: string; value: number }[];
}

export class Flusher {
  private attempt = 0;
  private retryHandle: TimerHandle | null = null;
  private inFlight: Promise<void> | null = null;
  /** Registry blocks ride along on the first successful batch only. */
  private registrationPending = true;

  constructor(
    private readonly http: HttpClient,
    private readonly clock: Clock,
    private readonly config: TrackerConfig,
    private readonly buffer: EventBuffer,
    private readonly registration: RegistrationBlock,
  ) {}

  /** Flush at most one batch; chains while the buffer stays over the cap. */
  flush(): Promise<void> {
    if (this.inFlight) return this.inFlight;
    this.inFlight = this.flushOnce().finally(() => {
      this.inFlight = null;
    });
    return this.inFlight;
  }

  private async flushOnce(): Promise<void> {
    const session = this.buffer.session;
    if (!session || this.buffer.size() === 0) return;
    const events = this.buffer.peek(this.config.flushMaxEvents);
    const batch: EventBatch = {
      session_id: session.session_id,
      page_id: session.page_id,
      sent_at: this.clock.now(),
      events,
    };
    const indicators: NonNullable<EventBatch["indicators"]> = [];
    if (this.registrationPending) {
      if (this.registration.page) batch.page = this.registration.page;
      batch.fragments = this.registration.fragments;
      indicators.push(...(this.registration.indicators ?? []));
    }
    const dropped = this.buffer.takeDropCount();
    if (dropped > 0) {
      indicators.push({ kind: "buffer_dropped_events", value: dropped });
    }
    if (indicators.length > 0) {
      batch.indicators = indicators;
    }
    eventBatchSchema.parse(batch); // the wire contract is non-negotiable

    let status = 0;
    try {
      const resp = await this.http.post(
        `${this.config.endpointUrl}/sessions/${session.session_id}/events`,
        batch,
        { Authorization: `Bearer ${session.token}` },
      );
      status = resp.status;
    } catch {
      status = 0; // network failure: treated like any non-2xx
    }
    if (status >= 200 && status < 300) {
      this.attempt = 0;
      this.registrationPending = false;
      this.buffer.acknowledge(events.map((ev) => ev.event_id));
      if (this.buffer.size() > 0) {
        await this.flushOnce(); // drain the backlog in max-sized chunks
      }
      return;
    }
    this.scheduleRetry();
  }

  private scheduleRetry(): void {
    const delay = backoffDelayMs(this.attempt, this.config.backoffBaseMs);
    this.attempt += 1;
    if (this.retryHandle) this.clock.clearTimeout(this.retryHandle);
    this.retryHandle = this.clock.setTimeout(() => {
      this.retryHandle = null;
      void this.flush();
    }, delay);
  }

  get retryAttempts(): number {
    return this.attempt;
  }
}
