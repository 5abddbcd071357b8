/** Shared domain types mirroring the service's JSON payloads. */

export const SINGLETON_LABELS = [
  "equation",
  "diagram",
  "photo",
  "plot",
  "table",
] as const;

export const ALL_LABELS = [...SINGLETON_LABELS, "multichart"] as const;

export type Label = (typeof ALL_LABELS)[number];

/** Border palette per figure type; declared arbitrary, kept fixed. */
export const PALETTE: Record<string, string> = {
  equation: "#808080",
  diagram: "#2c6fbb",
  photo: "#2e8b57",
  plot: "#c0392b",
  table: "#e67e22",
  multichart: "#8e44ad",
  unclassified: "#bbbbbb",
};

export interface PaperSummary {
  paper_id: string;
  title: string;
  journal: string;
  year: number;
  abstract?: string;
  authors?: string;
}

export interface SearchResult {
  figure_id: string;
  snippet: string;
  label: string;
  alef_score: number;
  paper: PaperSummary;
}

export interface SearchResponse {
  total: number;
  page: number;
  size: number;
  results: SearchResult[];
}

export interface FigureDetail {
  figure: {
    figure_id: string;
    caption: string;
    label: string;
    width: number;
    height: number;
    class_probs?: number[];
    parent_figure_id?: string | null;
    bbox_in_parent?: number[] | null;
  };
  paper: PaperSummary & { source_uri?: string };
  siblings: string[];
  children: string[];
}

export interface VerificationReply {
  accepted: boolean;
  written: boolean;
}

export type LayoutMode = "brick-wall" | "conventional";

export const BRICK_MIN = 96;
export const BRICK_MAX = 512;
