/**
 * Structural views of the host environment. The tracker only touches these
 * narrow surfaces, so tests (and non-browser hosts) can supply fakes; in a
 * real page, `browserEnvironment(window)` adapts the live globals.
 */

export interface RectLike {
  left: number;
  top: number;
  width: number;
  height: number;
}

export interface ElementLike {
  getBoundingClientRect(): RectLike;
  addEventListener(type: string, handler: (ev: any) => void): void;
  contains(other: unknown): boolean;
  getAttribute(name: string): string | null;
  readonly parentElement: ElementLike | null;
}

export interface DocumentLike {
  querySelectorAll(selector: string): ArrayLike<ElementLike>;
  addEventListener(type: string, handler: (ev: any) => void): void;
}

export interface SelectionLike {
  toString(): string;
  /** Element owning the selection anchor, when the host can provide it. */
  anchorElement?: unknown;
}

export interface WindowLike {
  readonly scrollX: number;
  readonly scrollY: number;
  readonly innerWidth: number;
  readonly innerHeight: number;
  readonly location: { href: string };
  readonly navigator: { userAgent: string };
  addEventListener(type: string, handler: (ev: any) => void): void;
  getSelection(): SelectionLike | null;
}

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface TimerHandle {
  readonly id: number;
}

export interface Clock {
  now(): number;
  setInterval(fn: () => void, ms: number): TimerHandle;
  clearInterval(handle: TimerHandle): void;
  setTimeout(fn: () => void, ms: number): TimerHandle;
  clearTimeout(handle: TimerHandle): void;
}

export interface HttpResponse {
  status: number;
  json(): Promise<unknown>;
}

export interface HttpClient {
  post(url: string, body: unknown, headers: Record<string, string>): Promise<HttpResponse>;
}

export interface TrackerEnvironment {
  window: WindowLike;
  document: DocumentLike;
  storage: StorageLike;
  clock: Clock;
  http: HttpClient;
}

interface BrowserGlobals {
  document: unknown;
  localStorage: unknown;
  fetch(input: string, init?: unknown): Promise<{ status: number; json(): Promise<unknown> }>;
  setInterval(fn: () => void, ms: number): unknown;
  clearInterval(id: unknown): void;
  setTimeout(fn: () => void, ms: number): unknown;
  clearTimeout(id: unknown): void;
}

/** Adapt real browser globals to the tracker's structural interfaces. */
export function browserEnvironment(win: WindowLike & BrowserGlobals): TrackerEnvironment {
  let nextId = 1;
  const handles = new Map<number, unknown>();
  const wrap = (raw: unknown): TimerHandle => {
    const id = nextId++;
    handles.set(id, raw);
    return { id };
  };
  return {
    window: win,
    document: win.document as DocumentLike,
    storage: win.localStorage as StorageLike,
    clock: {
      now: () => Date.now(),
      setInterval: (fn, ms) => wrap(win.setInterval(fn, ms)),
      clearInterval: (h) => win.clearInterval(handles.get(h.id)),
      setTimeout: (fn, ms) => wrap(win.setTimeout(fn, ms)),
      clearTimeout: (h) => win.clearTimeout(handles.get(h.id)),
    },
    http: {
      post: async (url, body, headers) => {
        const resp = await win.fetch(url, {
          method: "POST",
          headers: { "Content-Type": "application/json", ...headers },
          body: JSON.stringify(body),
        });
        return { status: resp.status, json: () => resp.json() };
      },
    },
  };
}
