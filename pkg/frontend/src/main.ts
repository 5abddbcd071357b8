/** Application wiring: toolbar, grid, modal, and URL state sync. */

import { ApiClient } from "./api.js";
import { applyTypeFilter, relayout, renderGrid } from "./grid.js";
import { DetailModal } from "./modal.js";
import {
  clampBrickSize,
  stateFromUrl,
  stateToUrl,
  ViewState,
} from "./state.js";
import { ALL_LABELS, Label, SearchResult } from "./types.js";

interface Config {
  serviceBaseUrl: string;
}

export async function start(root: Document = document): Promise<void> {
  const cfgRes = await fetch("./config.json");
  const cfg = (await cfgRes.json()) as Config;
  const api = new ApiClient(cfg.serviceBaseUrl);
  const state = stateFromUrl(root.defaultView?.location.search ?? "");

  const grid = root.getElementById("grid") as HTMLElement;
  const modalRoot = root.getElementById("modal") as HTMLElement;
  const queryInput = root.getElementById("query") as HTMLInputElement;
  const filterBox = root.getElementById("filters") as HTMLElement;
  const slider = root.getElementById("brick-size") as HTMLInputElement;
  const layoutToggle = root.getElementById("layout") as HTMLSelectElement;
  const pagePrev = root.getElementById("page-prev") as HTMLButtonElement;
  const pageNext = root.getElementById("page-next") as HTMLButtonElement;

  const modal = new DetailModal(modalRoot, api, () => {
    state.selected = null;
    pushUrl();
  });

  let results: SearchResult[] = [];

  function pushUrl(): void {
    const url = stateToUrl(state) || root.defaultView?.location.pathname || "";
    root.defaultView?.history.replaceState(null, "", url);
  }

  async function runSearch(): Promise<void> {
    if (!state.query.trim()) {
      results = [];
      renderGrid(grid, results, state, hooks);
      return;
    }
    try {
      const res = await api.search(state.query, state.page);
      results = res.results;
    } catch (err) {
      if ((err as Error).name === "AbortError") return; // superseded query
      results = [];
    }
    renderGrid(grid, results, state, hooks);
  }

  const hooks = {
    imageUrl: (id: string) => api.imageUrl(id),
    onOpen: (id: string) => {
      state.selected = id;
      pushUrl();
      void modal.open(id);
    },
  };

  // toolbar wiring
  queryInput.value = state.query;
  queryInput.addEventListener("change", () => {
    state.query = queryInput.value;
    state.page = 0;
    pushUrl();
    void runSearch();
  });

  for (const label of ALL_LABELS) {
    const wrap = root.createElement("label");
    const cb = root.createElement("input");
    cb.type = "checkbox";
    cb.value = label;
    cb.checked = state.filters.has(label);
    cb.addEventListener("change", () => {
      if (cb.checked) state.filters.add(label);
      else state.filters.delete(label);
      pushUrl();
      applyTypeFilter(grid, state); // client-side only, no re-fetch
    });
    wrap.append(cb, root.createTextNode(label));
    filterBox.appendChild(wrap);
  }

  slider.min = "96";
  slider.max = "512";
  slider.value = String(state.brickSize);
  slider.addEventListener("input", () => {
    state.brickSize = clampBrickSize(Number(slider.value));
    pushUrl();
    relayout(grid, results, state); // geometry only, no re-fetch
  });

  layoutToggle.value = state.layout;
  layoutToggle.addEventListener("change", () => {
    state.layout =
      layoutToggle.value === "conventional" ? "conventional" : "brick-wall";
    pushUrl();
    relayout(grid, results, state);
  });

  pagePrev.addEventListener("click", () => {
    if (state.page > 0) {
      state.page -= 1;
      pushUrl();
      void runSearch();
    }
  });
  pageNext.addEventListener("click", () => {
    state.page += 1;
    pushUrl();
    void runSearch();
  });

  if (state.selected) void modal.open(state.selected);
  await runSearch();
}

export type { ViewState, Label };
