/** Headless end-to-end flow against a live statviz service.
 *
 * These tests drive the same GalleryStore the browser UI uses; the DOM
 * layer stays thin and everything observable lives in store state.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { after, before, test } from "node:test";
import assert from "node:assert/strict";

import { ApiClient } from "../src/api.js";
import { GalleryStore, insertAfterParent, type CandidateView } from "../src/state.js";

let server: ChildProcess;
let base = "";

function startService(): Promise<string> {
  const storeDir = mkdtempSync(join(tmpdir(), "statviz-ui-"));
  server = spawn("python3", [
    "-m", "statviz.cli", "serve",
    "--port", "0",
    "--templates", join(storeDir, "templates.jsonl"),
  ], { stdio: ["ignore", "pipe", "inherit"] });
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("service did not start")), 30000);
    server.stdout!.on("data", (chunk: Buffer) => {
      const match = /serving on (http:\/\/[^\s]+)/.exec(chunk.toString());
      if (match) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
    server.on("exit", (code) => reject(new Error(`service exited: ${code}`)));
  });
}

before(async () => {
  base = await startService();
});

after(() => {
  server.kill();
});

function freshStore(): GalleryStore {
  return new GalleryStore(new ApiClient(base));
}

const STATEMENT = "More than 40% of students like football.";

test("gallery order equals API score order", async () => {
  const store = freshStore();
  await store.submitStatement(STATEMENT, 3, 8);
  assert.equal(store.state.error, null);
  assert.ok(store.state.sessionId);
  assert.equal(store.state.candidates.length, 8);

  const api = new ApiClient(base);
  const raw = await api.listCandidates(store.state.sessionId!, 8);
  assert.deepEqual(
    store.state.candidates.map((c) => c.id),
    raw.candidates.map((c) => c.id),
  );
  const totals = store.state.candidates.map((c) => c.scores.total);
  for (let i = 1; i < totals.length; i++) {
    assert.ok(totals[i] <= totals[i - 1] + 1e-12, "non-increasing totals");
  }
  // scores come from the API payload verbatim; the UI computes nothing
  assert.deepEqual(store.state.candidates[0].scores, raw.candidates[0].scores);
});

test("statement tags highlight all four entity kinds", async () => {
  const store = freshStore();
  await store.submitStatement(STATEMENT);
  const labels = new Set(store.state.tags.map((t) => t.label[0]));
  assert.ok(labels.has("B"));
  const kinds = new Set(
    store.state.tags.filter((t) => t.label !== "O").map((t) => t.label.slice(2)),
  );
  assert.deepEqual([...kinds].sort(), ["M", "N", "P", "W"]);
});

test("unparsable statement shows inline error", async () => {
  const store = freshStore();
  await store.submitStatement("hello world");
  assert.equal(store.state.error, "no proportion fact found");
  assert.equal(store.state.candidates.length, 0);
});

test("re-submitting the same statement and seed yields an identical gallery", async () => {
  const a = freshStore();
  const b = freshStore();
  await a.submitStatement("2 in 5 adults drink coffee every morning.", 9, 5);
  await b.submitStatement("2 in 5 adults drink coffee every morning.", 9, 5);
  assert.deepEqual(
    a.state.candidates.map((c) => c.local_id),
    b.state.candidates.map((c) => c.local_id),
  );
  assert.deepEqual(
    a.state.candidates.map((c) => c.svg),
    b.state.candidates.map((c) => c.svg),
  );
});

test("refine dialog disables constraint-violating assets", async () => {
  const store = freshStore();
  await store.submitStatement("65% of coffee are consumed in breakfast.", 1, 20);
  const target = store.state.candidates.find((c) =>
    Object.values(c.slots).includes("filled_icon"),
  );
  assert.ok(target, "expected a filled-icon candidate");
  await store.openRefine(target!.id);
  const dialog = store.state.dialog!;
  assert.equal(dialog.slotKind, "filled_icon");

  await store.setAssetQuery("ring circle frame water cup");
  const ring = store.state.dialog!.icons.find((i) => i.id === "ring");
  assert.ok(ring, "hollow ring icon should be listed");
  assert.equal(ring!.allowed, false);
  assert.equal(ring!.constraint, "hollow_not_fillable");
  const allowed = store.state.dialog!.icons.filter((i) => i.allowed !== false);
  assert.ok(allowed.length > 0, "some icons remain selectable");
});

test("applying a refine inserts the child right after its parent", async () => {
  const store = freshStore();
  await store.submitStatement(STATEMENT, 0, 6);
  const parent = store.state.candidates[1];
  const before_ids = store.state.candidates.map((c) => c.id);

  const child = await store.applyRefine(parent.id, { palette: "coffee" });
  assert.ok(child);
  assert.equal(child!.parent, parent.id);
  assert.equal(child!.palette, "coffee");
  assert.ok(child!.refined, "derived candidates carry the refined badge flag");

  const ids = store.state.candidates.map((c) => c.id);
  assert.equal(ids.indexOf(child!.id), ids.indexOf(parent.id) + 1);
  // all other candidates keep their relative order
  assert.deepEqual(ids.filter((id) => id !== child!.id), before_ids);
  // unspecified choices preserved
  assert.equal(child!.blueprint, parent.blueprint);
  assert.deepEqual(child!.icons, parent.icons);
});

test("concurrent refines on one candidate are queued, lineage stays clear", async () => {
  const store = freshStore();
  await store.submitStatement(STATEMENT, 0, 4);
  const parent = store.state.candidates[0];
  const [a, b] = await Promise.all([
    store.applyRefine(parent.id, { palette: "coffee" }),
    store.applyRefine(parent.id, { palette: "forest" }),
  ]);
  assert.ok(a && b);
  assert.notEqual(a!.id, b!.id);
  assert.equal(a!.parent, parent.id);
  assert.equal(b!.parent, parent.id);
  const ids = store.state.candidates.map((c) => c.id);
  // both children directly follow the parent (latest insertion first)
  assert.equal(ids.indexOf(b!.id), ids.indexOf(parent.id) + 1);
  assert.equal(ids.indexOf(a!.id), ids.indexOf(parent.id) + 2);
});

test("blocked refine surfaces the constraint in the dialog", async () => {
  const store = freshStore();
  await store.submitStatement("65% of coffee are consumed in breakfast.", 1, 20);
  const target = store.state.candidates.find((c) =>
    Object.values(c.slots).includes("filled_icon"),
  )!;
  await store.openRefine(target.id);
  const slot = Object.entries(target.slots).find(([, k]) => k === "filled_icon")![0];
  const result = await store.applyRefine(target.id, { icon: "ring", icon_slot: slot });
  assert.equal(result, null);
  assert.match(store.state.dialog!.error ?? "", /hollow_not_fillable/);
});

test("export download equals the API export body byte-for-byte", async () => {
  const store = freshStore();
  await store.submitStatement(STATEMENT, 5, 3);
  const candidate = store.state.candidates[0];
  const viaStore = await store.exportCandidate(candidate.id);
  const direct = await fetch(`${base}/api/export/${candidate.id}.svg`);
  const directBody = await direct.text();
  assert.equal(viaStore, directBody);
  assert.equal(viaStore, candidate.svg); // inline preview is the same document
});

test("saved template persists and re-renders identically", async () => {
  const store = freshStore();
  await store.submitStatement(STATEMENT, 2, 3);
  const candidate = store.state.candidates[2];
  const tid = await store.saveTemplate(candidate.id, "my pick");
  assert.ok(store.state.templates.some((t) => t.id === tid && t.label === "my pick"));

  const exported = await store.exportCandidate(candidate.id);
  const reloaded = await store.api.templateSvg(tid);
  assert.equal(reloaded, exported);
});

test("insertAfterParent is a pure, order-preserving insertion", () => {
  const mk = (id: string, parent: string | null): CandidateView =>
    ({ id, parent } as CandidateView);
  const base_list = [mk("a", null), mk("b", null), mk("c", null)];
  const child = mk("b1", "b");
  const out = insertAfterParent(base_list, child);
  assert.deepEqual(out.map((c) => c.id), ["a", "b", "b1", "c"]);
  assert.deepEqual(base_list.map((c) => c.id), ["a", "b", "c"]); // untouched
  const orphan = mk("x", "missing");
  assert.deepEqual(insertAfterParent(base_list, orphan).map((c) => c.id),
    ["a", "b", "c", "x"]);
});
