/** Result grid rendering: tiles in service order, type-colored borders,
 * client-side type filtering, placeholder tiles on image failure.
 */

import { brickWallLayout, conventionalLayout, PlacedBrick } from "./layout.js";
import { ViewState } from "./state.js";
import { PALETTE, SearchResult } from "./types.js";

const GAP = 8;

export interface GridHooks {
  imageUrl(figureId: string): string;
  onOpen(figureId: string): void;
}

function tileSizes(
  results: readonly SearchResult[],
  state: ViewState,
  containerWidth: number,
): Map<string, PlacedBrick> {
  const bricks = results.map((r) => ({
    id: r.figure_id,
    // natural dimensions arrive with the detail payload only; the search
    // payload carries none, so tiles assume 4:3 until the image loads
    width: 4,
    height: 3,
  }));
  const placed =
    state.layout === "brick-wall"
      ? brickWallLayout(bricks, state.brickSize, containerWidth, GAP).flat()
      : conventionalLayout(bricks, state.brickSize);
  return new Map(placed.map((p) => [p.id, p]));
}

export function renderGrid(
  container: HTMLElement,
  results: readonly SearchResult[],
  state: ViewState,
  hooks: GridHooks,
): void {
  container.textContent = "";
  container.style.display = "flex";
  container.style.flexWrap = "wrap";
  container.style.gap = `${GAP}px`;
  if (results.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No figures matched.";
    container.appendChild(empty);
    return;
  }
  const width = container.clientWidth || 1024;
  const sizes = tileSizes(results, state, width);
  for (const r of results) {
    const tile = document.createElement("figure");
    tile.className = "tile";
    tile.dataset.figureId = r.figure_id;
    tile.dataset.label = r.label;
    const placed = sizes.get(r.figure_id);
    if (placed) {
      tile.style.width = `${placed.w}px`;
      tile.style.height = `${placed.h}px`;
    }
    tile.style.margin = "0";
    tile.style.border = `3px solid ${PALETTE[r.label] ?? PALETTE.unclassified}`;
    tile.style.boxSizing = "border-box";
    tile.style.overflow = "hidden";

    const img = document.createElement("img");
    img.src = hooks.imageUrl(r.figure_id);
    img.alt = r.snippet;
    img.style.width = "100%";
    img.style.height = "100%";
    img.style.objectFit = "cover";
    img.addEventListener("error", () => {
      // failed fetch keeps its slot as a placeholder, never a dropped tile
      const ph = document.createElement("div");
      ph.className = "placeholder";
      ph.textContent = "image unavailable";
      ph.style.width = "100%";
      ph.style.height = "100%";
      img.replaceWith(ph);
    });
    tile.appendChild(img);
    tile.addEventListener("click", () => hooks.onOpen(r.figure_id));
    container.appendChild(tile);
  }
  applyTypeFilter(container, state);
}

/** Hide/show tiles per the active filters; no re-fetch, no reorder. */
export function applyTypeFilter(
  container: HTMLElement,
  state: ViewState,
): void {
  const tiles = container.querySelectorAll<HTMLElement>(".tile");
  for (const tile of tiles) {
    const label = tile.dataset.label ?? "unclassified";
    const visible =
      state.filters.has(label as never) || label === "unclassified";
    tile.style.display = visible ? "" : "none";
  }
}

/** Re-apply tile geometry for a new brick size or layout; same DOM nodes. */
export function relayout(
  container: HTMLElement,
  results: readonly SearchResult[],
  state: ViewState,
): void {
  const width = container.clientWidth || 1024;
  const sizes = tileSizes(results, state, width);
  const tiles = container.querySelectorAll<HTMLElement>(".tile");
  for (const tile of tiles) {
    const placed = sizes.get(tile.dataset.figureId ?? "");
    if (placed) {
      tile.style.width = `${placed.w}px`;
      tile.style.height = `${placed.h}px`;
    }
  }
}
