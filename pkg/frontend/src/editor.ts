/**
 * Editor state and gestures. Every completed gesture (a drop, a confirmed
 * rename, a created element) bumps the model and schedules one snapshot sync;
 * keystrokes and drag movement never sync on their own. At most one PUT is in
 * flight; further edits during a sync queue exactly one follow-up. A failed
 * sync keeps the dirty flag and reports through onSyncState so the UI can
 * show a retry indicator; nothing is ever dropped silently.
 */

import { ApiError } from "./api.js";
import {
  CdxDocument,
  CheckResult,
  ClassBox,
  Diagram,
  Multiplicity,
  emptyDiagram,
  toDocument,
} from "./model.js";

/** The slice of the service the editor needs; ApiClient satisfies it. */
export interface EditorApi {
  putDiagram(sessionId: string, doc: CdxDocument): Promise<void>;
  check(sessionId: string): Promise<CheckResult>;
}

export type SyncState = "idle" | "pending" | "failed";

export interface EditorEvents {
  onChange?: (editor: DiagramEditor) => void;
  onSyncState?: (state: SyncState) => void;
  onCheckApplied?: (result: CheckResult) => void;
  onNotice?: (message: string) => void;
}

export interface EditorOptions {
  /** Milliseconds to wait after a gesture before pushing a snapshot. */
  syncDebounceMs?: number;
  /** Duration of the check animation; 0 applies positions immediately. */
  animationMs?: number;
}

const CLASS_WIDTH = 170;
const HEADER_HEIGHT = 40;
const ATTRIBUTE_HEIGHT = 18;

function classHeight(attributeCount: number): number {
  return HEADER_HEIGHT + ATTRIBUTE_HEIGHT * attributeCount;
}

export class DiagramEditor {
  diagram: Diagram = emptyDiagram();
  selection: string | null = null;
  lastCheck: CheckResult | null = null;
  syncState: SyncState = "idle";

  private counters = { class: 0, attribute: 0, relationship: 0 };
  private dirty = false;
  private syncInFlight = false;
  private debounceHandle: ReturnType<typeof setTimeout> | null = null;
  private animationHandle: ReturnType<typeof setInterval> | null = null;
  private readonly syncDebounceMs: number;
  private readonly animationMs: number;

  constructor(
    private readonly api: EditorApi,
    readonly sessionId: string,
    private readonly events: EditorEvents = {},
    options: EditorOptions = {},
  ) {
    this.syncDebounceMs = options.syncDebounceMs ?? 400;
    this.animationMs = options.animationMs ?? 300;
  }

  // ----------------------------------------------------------- gestures

  createClass(x: number, y: number, name?: string): string {
    const id = `c${++this.counters.class}`;
    this.diagram.classes.push({
      id,
      name: name ?? `Class${this.counters.class}`,
      x: Math.round(x),
      y: Math.round(y),
      width: CLASS_WIDTH,
      height: classHeight(0),
      attributes: [],
    });
    this.selection = id;
    this.commitGesture();
    return id;
  }

  renameClass(classId: string, name: string): void {
    this.requireClass(classId).name = name;
    this.commitGesture();
  }

  addAttribute(classId: string, name: string): string {
    const box = this.requireClass(classId);
    const id = `a${++this.counters.attribute}`;
    box.attributes.push({ id, name });
    box.height = classHeight(box.attributes.length);
    this.commitGesture();
    return id;
  }

  renameAttribute(attributeId: string, name: string): void {
    for (const box of this.diagram.classes) {
      const attr = box.attributes.find((a) => a.id === attributeId);
      if (attr) {
        attr.name = name;
        this.commitGesture();
        return;
      }
    }
    throw new Error(`no attribute ${attributeId}`);
  }

  /** Called on drop; drag previews go through previewMove and do not sync. */
  moveClass(classId: string, x: number, y: number): void {
    const box = this.requireClass(classId);
    box.x = Math.round(x);
    box.y = Math.round(y);
    this.commitGesture();
  }

  previewMove(classId: string, x: number, y: number): void {
    const box = this.requireClass(classId);
    box.x = Math.round(x);
    box.y = Math.round(y);
    this.events.onChange?.(this);
  }

  createRelationship(
    classA: string,
    classB: string,
    multA: Multiplicity = null,
    multB: Multiplicity = null,
    name = "",
  ): string {
    this.requireClass(classA);
    this.requireClass(classB);
    const id = `r${++this.counters.relationship}`;
    this.diagram.relationships.push({ id, name, endA: classA, endB: classB, multA, multB });
    this.commitGesture();
    return id;
  }

  deleteElement(elementId: string): void {
    const classIndex = this.diagram.classes.findIndex((box) => box.id === elementId);
    if (classIndex >= 0) {
      this.diagram.classes.splice(classIndex, 1);
      this.diagram.relationships = this.diagram.relationships.filter(
        (edge) => edge.endA !== elementId && edge.endB !== elementId,
      );
      if (this.selection === elementId) this.selection = null;
      this.commitGesture();
      return;
    }
    for (const box of this.diagram.classes) {
      const attrIndex = box.attributes.findIndex((attr) => attr.id === elementId);
      if (attrIndex >= 0) {
        box.attributes.splice(attrIndex, 1);
        box.height = classHeight(box.attributes.length);
        this.commitGesture();
        return;
      }
    }
    const relIndex = this.diagram.relationships.findIndex((edge) => edge.id === elementId);
    if (relIndex >= 0) {
      this.diagram.relationships.splice(relIndex, 1);
      this.commitGesture();
      return;
    }
    throw new Error(`no element ${elementId}`);
  }

  // ----------------------------------------------------------- syncing

  get syncPending(): boolean {
    return this.dirty || this.syncInFlight || this.debounceHandle !== null;
  }

  private commitGesture(): void {
    this.dirty = true;
    this.events.onChange?.(this);
    if (this.debounceHandle !== null) clearTimeout(this.debounceHandle);
    this.debounceHandle = setTimeout(() => {
      this.debounceHandle = null;
      void this.flushSync();
    }, this.syncDebounceMs);
    this.setSyncState("pending");
  }

  /** Push the current diagram if dirty; loops while edits keep arriving. */
  async flushSync(): Promise<void> {
    if (this.syncInFlight) return;
    this.syncInFlight = true;
    try {
      while (this.dirty) {
        this.dirty = false;
        await this.api.putDiagram(this.sessionId, toDocument(this.diagram));
      }
      this.setSyncState("idle");
    } catch (error) {
      this.dirty = true; // keep the unsent edit; the UI offers a retry
      this.setSyncState("failed");
      this.events.onNotice?.(`sync failed: ${describe(error)}`);
    } finally {
      this.syncInFlight = false;
    }
  }

  async retrySync(): Promise<void> {
    if (this.debounceHandle !== null) {
      clearTimeout(this.debounceHandle);
      this.debounceHandle = null;
    }
    await this.flushSync();
  }

  private setSyncState(state: SyncState): void {
    this.syncState = state;
    this.events.onSyncState?.(state);
  }

  // ----------------------------------------------------------- checking

  /**
   * The check button. Refuses while a sync is pending so the server-side
   * "latest snapshot" is really what is on screen, then animates the
   * returned moves and recolors every element name.
   */
  async invokeCheck(): Promise<CheckResult | null> {
    if (this.syncPending) {
      if (this.debounceHandle !== null) {
        clearTimeout(this.debounceHandle);
        this.debounceHandle = null;
      }
      await this.flushSync();
      if (this.syncPending) {
        this.events.onNotice?.("cannot check while edits are unsynced");
        return null;
      }
    }
    let result: CheckResult;
    try {
      result = await this.api.check(this.sessionId);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.events.onNotice?.("draw something first");
        return null;
      }
      throw error;
    }
    this.lastCheck = result;
    await this.applyCheck(result);
    this.events.onCheckApplied?.(result);
    return result;
  }

  /** Animate class positions to the returned moves, then pin them exactly. */
  applyCheck(result: CheckResult): Promise<void> {
    if (this.animationHandle !== null) {
      clearInterval(this.animationHandle);
      this.animationHandle = null;
    }
    const targets = new Map(result.moves.map((move) => [move.classId, move]));
    const finish = () => {
      for (const box of this.diagram.classes) {
        const move = targets.get(box.id);
        if (move) {
          box.x = move.x;
          box.y = move.y;
        }
      }
      this.events.onChange?.(this);
    };
    if (this.animationMs <= 0) {
      finish();
      return Promise.resolve();
    }
    const starts = new Map(
      this.diagram.classes.map((box) => [box.id, { x: box.x, y: box.y }]),
    );
    const startedAt = Date.now();
    return new Promise((resolve) => {
      this.animationHandle = setInterval(() => {
        const t = Math.min(1, (Date.now() - startedAt) / this.animationMs);
        for (const box of this.diagram.classes) {
          const move = targets.get(box.id);
          const from = starts.get(box.id);
          if (move && from) {
            box.x = Math.round(from.x + (move.x - from.x) * t);
            box.y = Math.round(from.y + (move.y - from.y) * t);
          }
        }
        this.events.onChange?.(this);
        if (t >= 1) {
          clearInterval(this.animationHandle!);
          this.animationHandle = null;
          finish();
          resolve();
        }
      }, 16);
    });
  }

  // ----------------------------------------------------------- helpers

  private requireClass(classId: string): ClassBox {
    const box = this.diagram.classes.find((candidate) => candidate.id === classId);
    if (!box) throw new Error(`no class ${classId}`);
    return box;
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
