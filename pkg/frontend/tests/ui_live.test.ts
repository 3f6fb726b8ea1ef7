import { spawn, type ChildProcess } from "node:child_process";
import net from "node:net";

import { afterAll, beforeAll, describe, expect, it, vi } from "vitest";

import { FetchLike, ServiceClient } from "../src/api.js";
import { mountApp, type App } from "../src/app.js";
import type { UploadResponse } from "../src/types.js";

// End-to-end script against a live service process: upload a four-blob
// dataset, build its tree, then drive the mounted UI through selection and
// eta changes while counting every request on the wire.

/** Four well-separated blobs; strictly increasing consecutive gaps along one
 * axis make each blob collapse to a single component of interest. */
function caterpillarBlobs(nBlobs = 4, per = 250, sep = 50, d = 4): number[][] {
  const rows: number[][] = [];
  for (let b = 0; b < nBlobs; b++) {
    const center = new Array<number>(d).fill(0);
    if (b > 0) center[(b - 1) % d] = sep;
    let x = 0;
    for (let j = 0; j < per; j++) {
      const p = [...center];
      p[0] += x;
      rows.push(p);
      x += 0.001 * (1 + (j + per * b) / (8 * per));
    }
  }
  return rows;
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = net.createServer();
    srv.listen(0, "127.0.0.1", () => {
      const port = (srv.address() as net.AddressInfo).port;
      srv.close(() => resolve(port));
    });
    srv.on("error", reject);
  });
}

/** Upload without FormData: the test realm's FormData is jsdom's, which the
 * node fetch cannot serialize, so write the multipart body by hand. */
async function uploadCsv(base: string, csv: string): Promise<UploadResponse> {
  const boundary = "----topoproj-live-test";
  const body =
    `--${boundary}\r\n` +
    `Content-Disposition: form-data; name="file"; filename="blobs.csv"\r\n` +
    `Content-Type: text/csv\r\n\r\n${csv}\r\n--${boundary}--\r\n`;
  const resp = await fetch(`${base}/datasets`, {
    method: "POST",
    headers: { "Content-Type": `multipart/form-data; boundary=${boundary}` },
    body,
  });
  expect(resp.status).toBe(200);
  return resp.json() as Promise<UploadResponse>;
}

let proc: ChildProcess;
let base: string;
let stderrTail = "";

beforeAll(async () => {
  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  proc = spawn("python3", ["-m", "topoproj.cli", "serve", "--serve-port", String(port)],
    { stdio: ["ignore", "pipe", "pipe"] });
  proc.stdout!.on("data", () => {});
  proc.stderr!.on("data", (chunk: Buffer) => {
    stderrTail = (stderrTail + chunk.toString()).slice(-4000);
  });
  const deadline = Date.now() + 45_000;
  for (;;) {
    try {
      await fetch(`${base}/datasets/none/hierarchy`);
      return; // any HTTP response at all means the server is up
    } catch {
      if (proc.exitCode !== null || Date.now() > deadline) {
        throw new Error(`service did not come up:\n${stderrTail}`);
      }
      await new Promise((r) => setTimeout(r, 250));
    }
  }
});

afterAll(async () => {
  if (!proc) return;
  proc.kill("SIGTERM");
  await new Promise<void>((resolve) => {
    const hard = setTimeout(() => {
      proc.kill("SIGKILL");
      resolve();
    }, 5_000);
    proc.on("exit", () => {
      clearTimeout(hard);
      resolve();
    });
  });
});

describe("explorer against a live service", () => {
  it("selects, recolors, and resimplifies a four-blob dataset", async () => {
    const csv = caterpillarBlobs().map((r) => r.join(",")).join("\n") + "\n";
    const up = await uploadCsv(base, csv);
    expect(up.n).toBe(1000);
    expect(up.d).toBe(4);

    const log: { method: string; url: string; body?: string }[] = [];
    const countingFetch: FetchLike = (url, init) => {
      log.push({
        method: init?.method ?? "GET",
        url,
        body: typeof init?.body === "string" ? init.body : undefined,
      });
      return fetch(url, init);
    };
    const client = new ServiceClient(base, countingFetch);
    await client.computeMst(up.dataset_id, { method: "exact" });

    const layoutPosts = () =>
      log.filter((r) => r.method === "POST" && r.url.endsWith("/layout"));
    const hierarchyGets = () =>
      log.filter((r) => r.method === "GET" && r.url.includes("/hierarchy"));

    const root = document.createElement("div");
    document.body.appendChild(root);
    const app: App = mountApp(root, client);
    try {
      await app.explorer.openDataset(up.dataset_id);

      // initial load: one hierarchy fetch, one layout for the empty selection
      expect(hierarchyGets().length).toBe(1);
      expect(layoutPosts().length).toBe(1);
      expect(JSON.parse(layoutPosts()[0].body!)).toEqual({ selected: [] });

      const status = root.querySelector("span.status")!;
      expect(status.textContent).toContain("eta=10"); // default 1% of n
      expect(status.textContent).toContain("4 components");

      const coiBoxes = () =>
        [...root.querySelectorAll("svg.treemap rect.coi")] as SVGRectElement[];
      const hulls = () =>
        [...root.querySelectorAll("polygon.hull")] as SVGPolygonElement[];
      expect(coiBoxes().length).toBe(4);
      expect(hulls().length).toBe(0);

      const click = (node: Element) =>
        node.dispatchEvent(new MouseEvent("click", { bubbles: true }));
      const settled = async (posts: number) => {
        await vi.waitFor(() => {
          expect(layoutPosts().length).toBe(posts);
          expect(app.explorer.state.busy).toBe(false);
        }, { timeout: 30_000 });
      };

      // clicking the structural frame is inert: no request, no selection
      const frame = root.querySelector("svg.treemap rect.frame")!;
      click(frame);
      expect(layoutPosts().length).toBe(1);

      // each render replaces the boxes, so clicks must requery by id
      const clickBox = (id: number) => click(coiBoxes().find(
        (b) => b.getAttribute("data-node") === String(id))!);

      // first selection: exactly one more layout request, one hull
      const [idA, idB] = coiBoxes().map((b) => Number(b.getAttribute("data-node")));
      clickBox(idA);
      await settled(2);
      expect(JSON.parse(layoutPosts()[1].body!)).toEqual({ selected: [idA] });
      expect(hulls().length).toBe(1);

      // second selection: one more request carrying both ids, two hulls
      clickBox(idB);
      await settled(3);
      expect(JSON.parse(layoutPosts()[2].body!))
        .toEqual({ selected: [idA, idB].sort((a, b) => a - b) });
      expect(hulls().length).toBe(2);

      // each hull and its member points wear exactly their box's color
      const colorsOf = (id: number) => {
        const box = coiBoxes().find(
          (b) => b.getAttribute("data-node") === String(id))!;
        const hull = hulls().find(
          (h) => h.getAttribute("data-comp") === String(id))!;
        const dot = root.querySelector(`circle.pt[data-comp="${id}"]`)!;
        return { box: box.getAttribute("fill"), hull: hull.getAttribute("stroke"),
                 dot: dot.getAttribute("fill") };
      };
      for (const id of [idA, idB]) {
        const c = colorsOf(id);
        expect(c.hull).toBe(c.box);
        expect(c.dot).toBe(c.box);
        expect(coiBoxes().find((b) => b.getAttribute("data-node") === String(id))!
          .classList.contains("selected")).toBe(true);
      }

      // recoloring is client-side: same invariant, not one extra request
      const modeSel = root.querySelector("select.mode") as HTMLSelectElement;
      modeSel.value = "component";
      modeSel.dispatchEvent(new Event("change", { bubbles: true }));
      for (const id of [idA, idB]) {
        const c = colorsOf(id);
        expect(c.hull).toBe(c.box);
        expect(c.dot).toBe(c.box);
      }
      expect(layoutPosts().length).toBe(3);
      expect(hierarchyGets().length).toBe(1);

      // eta change: one hierarchy refetch, selection cleared, hulls dropped
      const etaInput = root.querySelector("input.eta") as HTMLInputElement;
      const applyBtn = [...root.querySelectorAll("button")]
        .find((b) => b.textContent === "apply")!;
      etaInput.value = "2%";
      click(applyBtn);
      await vi.waitFor(() => {
        expect(hierarchyGets().length).toBe(2);
        expect(layoutPosts().length).toBe(4);
        expect(app.explorer.state.busy).toBe(false);
      }, { timeout: 30_000 });

      expect(hierarchyGets()[1].url).toContain("eta=2%25");
      expect(JSON.parse(layoutPosts()[3].body!)).toEqual({ selected: [] });
      expect(app.explorer.state.selection.size).toBe(0);
      expect(status.textContent).toContain("eta=20");
      expect(hulls().length).toBe(0);
      expect(root.querySelectorAll("rect.selected").length).toBe(0);
      expect(coiBoxes().length).toBe(4); // still one box per blob

      // the whole script issued no request beyond the counted ones
      expect(log.length).toBe(1 + 2 + 4); // mst + 2 hierarchy + 4 layout
    } finally {
      root.remove();
    }
  }, 120_000);
});
