/** End-to-end against the real service: the UI client is the only consumer,
 * and the verification log is inspected server-side.

 * Requires python3 with the backend package installed (as in CI).
 */
import { execFileSync, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, newClientToken } from "../src/api.js";

const PY = process.env.FIGMINE_PYTHON ?? "python3";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const addr = srv.address();
      if (addr && typeof addr === "object") {
        const port = addr.port;
        srv.close(() => resolve(port));
      } else {
        srv.close(() => reject(new Error("no port")));
      }
    });
  });
}

async function waitForHealthy(base: string, ms = 30_000): Promise<void> {
  const deadline = Date.now() + ms;
  for (;;) {
    try {
      const res = await fetch(`${base}/healthz`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("service never became healthy");
    await new Promise((r) => setTimeout(r, 250));
  }
}

let work: string;
let server: ChildProcess | null = null;
let base: string;
let logPath: string;

beforeAll(async () => {
  work = mkdtempSync(join(tmpdir(), "figmine-ui-"));
  const demo = join(work, "demo");
  const manifest = join(work, "manifest");
  logPath = join(work, "verifications.jsonl");
  const run = (...args: string[]) =>
    execFileSync(PY, ["-m", "figmine.cli", ...args], { stdio: "pipe" });
  run("demo-corpus", "--out", demo, "--papers", "6", "--seed", "5");
  run("ingest", "--images", join(demo, "images"),
      "--metadata", join(demo, "metadata.jsonl"), "--out", manifest);

  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  server = spawn(
    PY,
    ["-m", "figmine.cli", "serve", "--manifest", manifest,
     "--verification-log", logPath, "--host", "127.0.0.1",
     "--port", String(port)],
    { stdio: "ignore" },
  );
  await waitForHealthy(base);
}, 60_000);

afterAll(() => {
  server?.kill();
  rmSync(work, { recursive: true, force: true });
});

describe("service integration", () => {
  it("searches and fetches detail through the client", async () => {
    const api = new ApiClient(base);
    const res = await api.search("figure");
    expect(res.total).toBeGreaterThan(0);
    const first = res.results[0]!;
    const detail = await api.figureDetail(first.figure_id);
    expect(detail.figure.figure_id).toBe(first.figure_id);
    expect(detail.paper.title.length).toBeGreaterThan(0);
  });

  it("records exactly one log row per verification submission", async () => {
    const api = new ApiClient(base);
    const res = await api.search("figure");
    const fid = res.results[0]!.figure_id;
    const token = newClientToken();

    const first = await api.submitVerification(fid, "plot", token);
    expect(first).toEqual({ accepted: true, written: true });
    // a duplicate (retry after a lost response) must not add a second row
    const second = await api.submitVerification(fid, "plot", token);
    expect(second).toEqual({ accepted: true, written: false });

    const rows = readFileSync(logPath, "utf8")
      .split("\n")
      .filter((l) => l.trim().length > 0)
      .map((l) => JSON.parse(l) as { client_token: string });
    expect(rows.filter((r) => r.client_token === token)).toHaveLength(1);
  });

  it("serves the figure image the tiles point at", async () => {
    const api = new ApiClient(base);
    const res = await api.search("figure");
    const url = api.imageUrl(res.results[0]!.figure_id);
    const img = await fetch(url);
    expect(img.status).toBe(200);
    expect(img.headers.get("content-type")).toBe("image/png");
    const bytes = new Uint8Array(await img.arrayBuffer());
    expect([...bytes.slice(0, 4)]).toEqual([0x89, 0x50, 0x4e, 0x47]);
  });
});
