import type { EntityView } from "./types.js";

// A render-ready partition of the normalized text: plain stretches and
// entity stretches, in order, concatenating back to the exact input.

export interface Segment {
  text: string;
  entity: EntityView | null;
}

function usable(normalized: string, entity: EntityView): boolean {
  return (
    Number.isInteger(entity.start) &&
    Number.isInteger(entity.end) &&
    entity.start >= 0 &&
    entity.end <= normalized.length &&
    entity.start < entity.end
  );
}

export function toSegments(
  normalized: string,
  entities: readonly EntityView[],
): Segment[] {
  const ordered = entities
    .filter((e) => usable(normalized, e))
    .sort((a, b) => a.start - b.start || a.end - b.end);

  const segments: Segment[] = [];
  let cursor = 0;
  for (const entity of ordered) {
    if (entity.start < cursor) continue; // overlaps an accepted span, drop it
    if (entity.start > cursor) {
      segments.push({ text: normalized.slice(cursor, entity.start), entity: null });
    }
    segments.push({ text: normalized.slice(entity.start, entity.end), entity });
    cursor = entity.end;
  }
  if (cursor < normalized.length) {
    segments.push({ text: normalized.slice(cursor), entity: null });
  }
  return segments;
}
