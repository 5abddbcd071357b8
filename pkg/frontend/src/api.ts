/** HTTP client for the figure search service.
 *
 * Searches cancel any in-flight predecessor. A verification submission is
 * exactly one POST; only a network failure triggers a single retry, reusing
 * the same client token so the server can deduplicate.
 */

import {
  FigureDetail,
  SearchResponse,
  VerificationReply,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export function newClientToken(): string {
  const c = globalThis.crypto as Crypto | undefined;
  if (c?.randomUUID) return c.randomUUID();
  return `t-${Date.now()}-${Math.random().toString(36).slice(2)}`;
}

export class ApiClient {
  private searchController: AbortController | null = null;

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  async search(
    query: string,
    page = 0,
    size = 20,
  ): Promise<SearchResponse> {
    this.searchController?.abort();
    const controller = new AbortController();
    this.searchController = controller;
    const p = new URLSearchParams({
      q: query,
      page: String(page),
      size: String(size),
    });
    const res = await this.fetchImpl(`${this.baseUrl}/search?${p}`, {
      signal: controller.signal,
    });
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as SearchResponse;
  }

  async figureDetail(figureId: string): Promise<FigureDetail> {
    const res = await this.fetchImpl(
      `${this.baseUrl}/figures/${encodeFigureId(figureId)}`,
    );
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as FigureDetail;
  }

  imageUrl(figureId: string): string {
    return `${this.baseUrl}/figures/${encodeFigureId(figureId)}/image`;
  }

  async submitVerification(
    figureId: string,
    label: string,
    clientToken: string,
  ): Promise<VerificationReply> {
    const post = () =>
      this.fetchImpl(`${this.baseUrl}/verifications`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({
          figure_id: figureId,
          proposed_label: label,
          client_token: clientToken,
        }),
      });
    let res: Response;
    try {
      res = await post();
    } catch {
      // network failure: one retry, same token, server dedupes
      res = await post();
    }
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as VerificationReply;
  }
}

/** Figure ids contain slashes that must survive as path segments. */
function encodeFigureId(id: string): string {
  return id.split("/").map(encodeURIComponent).join("/");
}
