import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { DiagramEditor, EditorApi } from "../src/editor.js";
import { CdxDocument, CheckResult, diagramProblems } from "../src/model.js";

class StubApi implements EditorApi {
  puts: CdxDocument[] = [];
  failNext = false;
  checkResult: CheckResult = { moves: [], classColors: {}, attributeColors: {} };

  async putDiagram(_sessionId: string, doc: CdxDocument): Promise<void> {
    if (this.failNext) {
      this.failNext = false;
      throw new Error("boom");
    }
    this.puts.push(doc);
  }

  async check(): Promise<CheckResult> {
    return this.checkResult;
  }
}

describe("gestures", () => {
  let api: StubApi;
  let editor: DiagramEditor;

  beforeEach(() => {
    vi.useFakeTimers();
    api = new StubApi();
    editor = new DiagramEditor(api, "s1", {}, { syncDebounceMs: 100, animationMs: 0 });
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  const settle = () => vi.advanceTimersByTimeAsync(250);

  it("createClass appends one snapshot", async () => {
    const id = editor.createClass(100, 100, "Customer");
    await settle();
    expect(api.puts).toHaveLength(1);
    expect(api.puts[0]?.classes[0]?.name).toBe("Customer");
    expect(editor.diagram.classes[0]?.id).toBe(id);
  });

  it("every completed gesture syncs once", async () => {
    const c1 = editor.createClass(50, 50, "Customer");
    await settle();
    const c2 = editor.createClass(300, 50, "Order");
    await settle();
    editor.addAttribute(c1, "name");
    await settle();
    editor.createRelationship(c1, c2, "1", "*");
    await settle();
    expect(api.puts).toHaveLength(4);
  });

  it("drag previews do not sync; the drop does", async () => {
    const id = editor.createClass(10, 10, "Cart");
    await settle();
    for (let step = 0; step < 30; step++) {
      editor.previewMove(id, 10 + step * 10, 20 + step * 5);
    }
    expect(api.puts).toHaveLength(1);
    editor.moveClass(id, 310, 170);
    await settle();
    expect(api.puts).toHaveLength(2);
    expect(api.puts[1]?.classes[0]?.x).toBe(310);
  });

  it("attribute changes resize the box and stay valid", async () => {
    const id = editor.createClass(0, 0, "Customer");
    const a1 = editor.addAttribute(id, "name");
    editor.addAttribute(id, "address");
    editor.renameAttribute(a1, "full name");
    await settle();
    const box = editor.diagram.classes[0]!;
    expect(box.attributes.map((a) => a.name)).toEqual(["full name", "address"]);
    expect(box.height).toBeGreaterThan(58);
    expect(diagramProblems(editor.diagram)).toEqual([]);
  });

  it("deleting a class drops its relationships", async () => {
    const c1 = editor.createClass(0, 0, "A");
    const c2 = editor.createClass(200, 0, "B");
    editor.createRelationship(c1, c2);
    editor.deleteElement(c2);
    await settle();
    expect(editor.diagram.classes).toHaveLength(1);
    expect(editor.diagram.relationships).toHaveLength(0);
    expect(diagramProblems(editor.diagram)).toEqual([]);
  });

  it("rapid gestures coalesce but never lose the final state", async () => {
    const id = editor.createClass(0, 0, "A");
    editor.renameClass(id, "AB");
    editor.renameClass(id, "ABC");
    await settle();
    expect(api.puts.length).toBe(1);
    expect(api.puts[api.puts.length - 1]?.classes[0]?.name).toBe("ABC");
  });

  it("the serialized state is always a valid document", async () => {
    const c1 = editor.createClass(0, 0, "Customer");
    const c2 = editor.createClass(250, 0, "Order");
    editor.addAttribute(c1, "name");
    editor.createRelationship(c1, c2, "1", "1..*", "places");
    editor.deleteElement(c1);
    await settle();
    for (const doc of api.puts) {
      expect(doc.format).toBe("cdx/1");
    }
    expect(diagramProblems(editor.diagram)).toEqual([]);
  });
});

describe("sync failure handling", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("keeps the edit, reports failed state, and retries", async () => {
    const api = new StubApi();
    const states: string[] = [];
    const notices: string[] = [];
    const editor = new DiagramEditor(
      api,
      "s1",
      { onSyncState: (s) => states.push(s), onNotice: (n) => notices.push(n) },
      { syncDebounceMs: 50, animationMs: 0 },
    );
    api.failNext = true;
    editor.createClass(5, 5, "Customer");
    await vi.advanceTimersByTimeAsync(200);
    expect(editor.syncState).toBe("failed");
    expect(api.puts).toHaveLength(0);
    expect(notices.some((n) => n.includes("sync failed"))).toBe(true);

    await editor.retrySync();
    expect(editor.syncState).toBe("idle");
    expect(api.puts).toHaveLength(1);
    expect(states).toContain("failed");
    expect(states[states.length - 1]).toBe("idle");
  });
});

describe("invokeCheck", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("flushes pending edits first so the checked snapshot is current", async () => {
    const api = new StubApi();
    const editor = new DiagramEditor(api, "s1", {}, { syncDebounceMs: 5000, animationMs: 0 });
    const id = editor.createClass(10, 10, "Customer");
    api.checkResult = {
      moves: [{ classId: id, x: 40, y: 40, corresponding: true }],
      classColors: { [id]: "red" },
      attributeColors: {},
    };
    const result = await editor.invokeCheck();
    expect(api.puts).toHaveLength(1);
    expect(result).not.toBeNull();
    const box = editor.diagram.classes[0]!;
    expect([box.x, box.y]).toEqual([40, 40]);
    expect(editor.lastCheck?.classColors[id]).toBe("red");
  });

  it("animated moves land on the exact final coordinates", async () => {
    vi.useRealTimers();
    const api = new StubApi();
    const editor = new DiagramEditor(api, "s1", {}, { syncDebounceMs: 1, animationMs: 48 });
    const id = editor.createClass(500, 400, "Customer");
    api.checkResult = {
      moves: [{ classId: id, x: 37, y: 73, corresponding: true }],
      classColors: { [id]: "red" },
      attributeColors: {},
    };
    await editor.invokeCheck();
    const box = editor.diagram.classes[0]!;
    expect([box.x, box.y]).toEqual([37, 73]);
  });
});
