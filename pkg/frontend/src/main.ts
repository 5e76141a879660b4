/**
 * Browser entry point. Expects query parameters:
 *
 *   ?api=http://127.0.0.1:8080&token=...&exercise=<id>[&session=<id>][&learner=<name>]
 *
 * Without a session id a new session is created for the given learner name.
 * The interface never shows a similarity value; the check button only moves
 * boxes and recolors names.
 */

import { ApiClient } from "./api.js";
import { DiagramEditor } from "./editor.js";
import type { Multiplicity } from "./model.js";
import { renderDiagram } from "./render.js";

const MULTIPLICITY_CHOICES = ["", "1", "0..1", "1..*", "*"];

function queryParam(name: string): string | null {
  return new URLSearchParams(window.location.search).get(name);
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  parent?: Element,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  parent?.appendChild(node);
  return node;
}

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");

  const apiBase = queryParam("api") ?? "";
  const token = queryParam("token") ?? "";
  const exerciseId = queryParam("exercise");
  if (!exerciseId) {
    root.textContent = "Missing ?exercise= parameter.";
    return;
  }
  const api = new ApiClient(apiBase, token);
  const exercise = await api.getExercise(exerciseId);
  const sessionId =
    queryParam("session") ??
    (await api.createSession(exerciseId, queryParam("learner") ?? "anonymous"));

  const toolbar = el("div", { class: "toolbar" }, root);
  const addClassButton = el("button", {}, toolbar, "add class");
  const addAttributeButton = el("button", {}, toolbar, "add attribute");
  const relationshipButton = el("button", {}, toolbar, "add relationship");
  const deleteButton = el("button", {}, toolbar, "delete");
  const checkButton = el("button", { class: "check" }, toolbar, "check");
  const submitButton = el("button", {}, toolbar, "submit");
  const syncBadge = el("span", { class: "sync-badge" }, toolbar, "");
  const notice = el("span", { class: "notice" }, toolbar, "");

  const problem = el("details", { class: "problem" }, root);
  el("summary", {}, problem, "problem statement");
  el("pre", {}, problem, exercise.problemText);

  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", "1000");
  svg.setAttribute("height", "640");
  svg.setAttribute("class", "canvas");
  root.appendChild(svg);

  let pendingRelationshipEnd: string | null = null;

  const editor = new DiagramEditor(api, sessionId, {
    onChange: (e) => renderDiagram(svg, e.diagram, e.lastCheck, e.selection),
    onSyncState: (state) => {
      syncBadge.textContent = state === "idle" ? "" : state === "pending" ? "syncing…" : "sync failed, click to retry";
      syncBadge.className = `sync-badge ${state}`;
    },
    onNotice: (message) => {
      notice.textContent = message;
      setTimeout(() => {
        if (notice.textContent === message) notice.textContent = "";
      }, 4000);
    },
  });

  syncBadge.addEventListener("click", () => void editor.retrySync());

  addClassButton.addEventListener("click", () => {
    const name = window.prompt("class name", "");
    if (!name) return;
    editor.createClass(60 + Math.random() * 400, 60 + Math.random() * 300, name);
  });

  addAttributeButton.addEventListener("click", () => {
    if (!editor.selection) return void (notice.textContent = "select a class first");
    const name = window.prompt("attribute name", "");
    if (!name) return;
    editor.addAttribute(editor.selection, name);
  });

  relationshipButton.addEventListener("click", () => {
    if (!editor.selection) return void (notice.textContent = "select the first class");
    pendingRelationshipEnd = editor.selection;
    notice.textContent = "now click the second class";
  });

  deleteButton.addEventListener("click", () => {
    if (editor.selection) editor.deleteElement(editor.selection);
  });

  checkButton.addEventListener("click", () => void editor.invokeCheck());
  submitButton.addEventListener("click", () => void api.submit(sessionId));

  // Selection, relationship completion, double-click rename, drag to move.
  let drag: { classId: string; offsetX: number; offsetY: number; moved: boolean } | null = null;

  svg.addEventListener("mousedown", (event) => {
    const target = (event.target as Element).closest("[data-class-id]");
    if (!target) {
      editor.selection = null;
      renderDiagram(svg, editor.diagram, editor.lastCheck, null);
      return;
    }
    const classId = target.getAttribute("data-class-id")!;
    if (pendingRelationshipEnd && pendingRelationshipEnd !== classId) {
      const multA = window.prompt(`multiplicity at ${pendingRelationshipEnd} (${MULTIPLICITY_CHOICES.join(", ")})`, "") ?? "";
      const multB = window.prompt(`multiplicity at ${classId}`, "") ?? "";
      const name = window.prompt("relationship name (optional)", "") ?? "";
      editor.createRelationship(
        pendingRelationshipEnd,
        classId,
        (MULTIPLICITY_CHOICES.includes(multA) && multA !== "" ? multA : null) as Multiplicity,
        (MULTIPLICITY_CHOICES.includes(multB) && multB !== "" ? multB : null) as Multiplicity,
        name,
      );
      pendingRelationshipEnd = null;
      notice.textContent = "";
      return;
    }
    editor.selection = classId;
    const box = editor.diagram.classes.find((candidate) => candidate.id === classId)!;
    drag = { classId, offsetX: event.offsetX - box.x, offsetY: event.offsetY - box.y, moved: false };
    renderDiagram(svg, editor.diagram, editor.lastCheck, classId);
  });

  svg.addEventListener("mousemove", (event) => {
    if (!drag) return;
    drag.moved = true;
    editor.previewMove(drag.classId, event.offsetX - drag.offsetX, event.offsetY - drag.offsetY);
  });

  svg.addEventListener("mouseup", (event) => {
    if (!drag) return;
    if (drag.moved) {
      editor.moveClass(drag.classId, event.offsetX - drag.offsetX, event.offsetY - drag.offsetY);
    }
    drag = null;
  });

  svg.addEventListener("dblclick", (event) => {
    const classTarget = (event.target as Element).closest("[data-class-id]");
    const attributeTarget = (event.target as Element).closest("[data-attribute-id]");
    if (attributeTarget) {
      const attributeId = attributeTarget.getAttribute("data-attribute-id")!;
      const name = window.prompt("attribute name");
      if (name) editor.renameAttribute(attributeId, name);
    } else if (classTarget) {
      const classId = classTarget.getAttribute("data-class-id")!;
      const name = window.prompt("class name");
      if (name) editor.renameClass(classId, name);
    }
  });

  renderDiagram(svg, editor.diagram, null, null);
}

void start();
