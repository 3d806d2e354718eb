/**
 * Page-space geometry. Client rects are viewport-relative; adding the scroll
 * offsets yields document coordinates, which stay put while the user scrolls.
 * Geometry is sampled at event time, never at flush time: layout may have
 * changed by the time a batch leaves the buffer.
 */
import type { ElementLike, WindowLike } from "./env.js";
import type { WireRect } from "./types.js";

export function pageRectOf(element: ElementLike, win: WindowLike): WireRect {
  const rect = element.getBoundingClientRect();
  return {
    x: rect.left + win.scrollX,
    y: rect.top + win.scrollY,
    width: rect.width,
    height: rect.height,
  };
}

export function viewportRect(win: WindowLike): WireRect {
  return { x: win.scrollX, y: win.scrollY, width: win.innerWidth, height: win.innerHeight };
}

export function intersectionArea(a: WireRect, b: WireRect): number {
  const w = Math.min(a.x + a.width, b.x + b.width) - Math.max(a.x, b.x);
  const h = Math.min(a.y + a.height, b.y + b.height) - Math.max(a.y, b.y);
  return w > 0 && h > 0 ? w * h : 0;
}

/** Same visibility rule the server applies by default. */
export function isVisible(fragment: WireRect, viewport: WireRect, minFraction = 0.5): boolean {
  const fragArea = fragment.width * fragment.height;
  const vpArea = viewport.width * viewport.height;
  if (fragArea <= 0 || vpArea <= 0) return false;
  const inter = intersectionArea(fragment, viewport);
  if (inter / fragArea >= minFraction) return true;
  return fragment.height > viewport.height && inter / vpArea >= minFraction;
}

export function orientationOf(win: WindowLike): "portrait" | "landscape" {
  return win.innerHeight >= win.innerWidth ? "portrait" : "landscape";
}
