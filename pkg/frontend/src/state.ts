/** View state and its URL round trip; searches stay shareable as links. */

import {
  ALL_LABELS,
  BRICK_MAX,
  BRICK_MIN,
  Label,
  LayoutMode,
} from "./types.js";

export interface ViewState {
  query: string;
  /** Types currently shown; always a subset of the known labels. */
  filters: Set<Label>;
  layout: LayoutMode;
  brickSize: number;
  selected: string | null;
  page: number;
}

export function clampBrickSize(px: number): number {
  if (!Number.isFinite(px)) return 160;
  return Math.min(BRICK_MAX, Math.max(BRICK_MIN, Math.round(px)));
}

export function defaultState(): ViewState {
  return {
    query: "",
    filters: new Set<Label>(ALL_LABELS),
    layout: "brick-wall",
    brickSize: 160,
    selected: null,
    page: 0,
  };
}

function isLabel(s: string): s is Label {
  return (ALL_LABELS as readonly string[]).includes(s);
}

export function stateToUrl(state: ViewState): string {
  const p = new URLSearchParams();
  if (state.query) p.set("q", state.query);
  if (state.filters.size !== ALL_LABELS.length) {
    p.set("types", [...state.filters].sort().join(","));
  }
  if (state.layout !== "brick-wall") p.set("layout", state.layout);
  if (state.brickSize !== 160) p.set("size", String(state.brickSize));
  if (state.page !== 0) p.set("page", String(state.page));
  if (state.selected) p.set("fig", state.selected);
  const s = p.toString();
  return s ? `?${s}` : "";
}

export function stateFromUrl(search: string): ViewState {
  const state = defaultState();
  const p = new URLSearchParams(search);
  state.query = p.get("q") ?? "";
  const types = p.get("types");
  if (types !== null) {
    const kept = types.split(",").filter(isLabel);
    state.filters = new Set<Label>(kept);
  }
  const layout = p.get("layout");
  if (layout === "conventional") state.layout = layout;
  const size = p.get("size");
  if (size !== null) state.brickSize = clampBrickSize(Number(size));
  const page = p.get("page");
  if (page !== null) {
    const n = Number(page);
    state.page = Number.isInteger(n) && n >= 0 ? n : 0;
  }
  state.selected = p.get("fig");
  return state;
}
