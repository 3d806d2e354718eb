/**
 * Fragment discovery: every element carrying the configured CSS class is
 * registered, and DOM ancestry among registered elements becomes the parent
 * forest. An element may pin its id with `data-fragment-id`; duplicates are
 * reported, with the later occurrences re-keyed so tracking can continue.
 */
import type { DocumentLike, ElementLike, WindowLike } from "./env.js";
import { pageRectOf } from "./geometry.js";
import type { FragmentRecord, WireRect } from "./types.js";

export interface RegisteredFragment {
  id: string;
  element: ElementLike;
  parentId: string | null;
  domPath: string;
}

export interface FragmentRegistry {
  fragments: RegisteredFragment[];
  duplicateIds: string[];
}

export function discoverFragments(
  document: DocumentLike,
  cssClass: string,
  pageId: string,
): FragmentRegistry {
  const nodes = document.querySelectorAll(`.${cssClass}`);
  const elements: ElementLike[] = Array.prototype.slice.call(nodes);
  const seen = new Set<string>();
  const duplicates: string[] = [];
  const byElement = new Map<ElementLike, RegisteredFragment>();
  const fragments: RegisteredFragment[] = [];

  elements.forEach((element, index) => {
    let id = element.getAttribute("data-fragment-id") ?? `${pageId}-frag${index}`;
    if (seen.has(id)) {
      duplicates.push(id);
      id = `${id}~dup${index}`;
    }
    seen.add(id);
    const fragment: RegisteredFragment = {
      id,
      element,
      parentId: null,
      domPath: element.getAttribute("data-fragment-path") ?? `.${cssClass}[${index}]`,
    };
    byElement.set(element, fragment);
    fragments.push(fragment);
  });

  // nearest registered ancestor becomes the parent
  for (const fragment of fragments) {
    let node = fragment.element.parentElement;
    while (node) {
      const ancestor = byElement.get(node);
      if (ancestor) {
        fragment.parentId = ancestor.id;
        break;
      }
      node = node.parentElement;
    }
  }
  if (duplicates.length > 0) {
    // eslint-disable-next-line no-console
    console.error(`readlens tracker: duplicate fragment ids: ${duplicates.join(", ")}`);
  }
  return { fragments, duplicateIds: duplicates };
}

export function fragmentRecords(registry: FragmentRegistry, pageId: string): FragmentRecord[] {
  return registry.fragments.map((f) => ({
    fragment_id: f.id,
    page_id: pageId,
    parent_id: f.parentId,
    dom_path: f.domPath,
  }));
}

export function fragmentRects(registry: FragmentRegistry, win: WindowLike): Record<string, WireRect> {
  const rects: Record<string, WireRect> = {};
  for (const fragment of registry.fragments) {
    rects[fragment.id] = pageRectOf(fragment.element, win);
  }
  return rects;
}

/** Innermost registered fragment containing a page-space point. */
export function fragmentAt(
  registry: FragmentRegistry,
  win: WindowLike,
  x: number,
  y: number,
): RegisteredFragment | null {
  let best: { fragment: RegisteredFragment; area: number } | null = null;
  for (const fragment of registry.fragments) {
    const rect = pageRectOf(fragment.element, win);
    const inside =
      x >= rect.x && x <= rect.x + rect.width && y >= rect.y && y <= rect.y + rect.height;
    if (!inside) continue;
    const area = rect.width * rect.height;
    if (best === null || area < best.area) {
      best = { fragment, area };
    }
  }
  return best ? best.fragment : null;
}
