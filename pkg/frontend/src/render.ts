/**
 * SVG renderer. Relationships draw first so class boxes sit on top; classes
 * draw in model order, which stacks later-created boxes above earlier ones
 * when they overlap (the parked pile at the origin relies on this). Check
 * colors apply to name text only, never to box geometry.
 */

import type { CheckResult, ClassBox, Diagram } from "./model.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const HEADER_HEIGHT = 28;
const ATTRIBUTE_HEIGHT = 18;

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
  parent?: Element,
): SVGElementTagNameMap[K] {
  const element = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    element.setAttribute(key, String(value));
  }
  parent?.appendChild(element);
  return element;
}

function center(box: ClassBox): { x: number; y: number } {
  return { x: box.x + box.width / 2, y: box.y + box.height / 2 };
}

/** Point on the box border along the line from its center toward (tx, ty). */
function borderPoint(box: ClassBox, tx: number, ty: number): { x: number; y: number } {
  const c = center(box);
  const dx = tx - c.x;
  const dy = ty - c.y;
  if (dx === 0 && dy === 0) return c;
  const scaleX = dx !== 0 ? box.width / 2 / Math.abs(dx) : Infinity;
  const scaleY = dy !== 0 ? box.height / 2 / Math.abs(dy) : Infinity;
  const scale = Math.min(scaleX, scaleY);
  return { x: c.x + dx * scale, y: c.y + dy * scale };
}

export function renderDiagram(
  svg: SVGSVGElement,
  diagram: Diagram,
  check: CheckResult | null = null,
  selection: string | null = null,
): void {
  while (svg.firstChild) svg.removeChild(svg.firstChild);

  const byId = new Map(diagram.classes.map((box) => [box.id, box]));
  const edgeLayer = svgElement("g", { class: "relationships" }, svg);
  for (const edge of diagram.relationships) {
    const boxA = byId.get(edge.endA);
    const boxB = byId.get(edge.endB);
    if (!boxA || !boxB) continue;
    const group = svgElement("g", { class: "relationship", "data-relationship-id": edge.id }, edgeLayer);
    const cb = center(boxB);
    const ca = center(boxA);
    const pa = borderPoint(boxA, cb.x, cb.y);
    const pb = borderPoint(boxB, ca.x, ca.y);
    svgElement(
      "line",
      { x1: pa.x, y1: pa.y, x2: pb.x, y2: pb.y, stroke: "#555", "stroke-width": 1.5 },
      group,
    );
    const labelFor = (value: string | null, px: number, py: number, cx: number, cy: number) => {
      if (!value) return;
      const toward = { x: cx - px, y: cy - py };
      const length = Math.hypot(toward.x, toward.y) || 1;
      const text = svgElement(
        "text",
        {
          x: px + (toward.x / length) * 14,
          y: py + (toward.y / length) * 14 - 4,
          class: "multiplicity",
          "font-size": 11,
          fill: "#333",
        },
        group,
      );
      text.textContent = value;
    };
    labelFor(edge.multA, pa.x, pa.y, cb.x, cb.y);
    labelFor(edge.multB, pb.x, pb.y, ca.x, ca.y);
    if (edge.name) {
      const text = svgElement(
        "text",
        {
          x: (pa.x + pb.x) / 2,
          y: (pa.y + pb.y) / 2 - 5,
          class: "relationship-name",
          "font-size": 11,
          fill: "#333",
          "text-anchor": "middle",
        },
        group,
      );
      text.textContent = edge.name;
    }
  }

  const classLayer = svgElement("g", { class: "classes" }, svg);
  for (const box of diagram.classes) {
    const group = svgElement(
      "g",
      {
        class: "class-box" + (selection === box.id ? " selected" : ""),
        "data-class-id": box.id,
        transform: `translate(${box.x}, ${box.y})`,
      },
      classLayer,
    );
    svgElement(
      "rect",
      {
        width: box.width,
        height: box.height,
        fill: "#fffef8",
        stroke: selection === box.id ? "#2266cc" : "#333",
        "stroke-width": selection === box.id ? 2 : 1,
      },
      group,
    );
    svgElement(
      "line",
      { x1: 0, y1: HEADER_HEIGHT, x2: box.width, y2: HEADER_HEIGHT, stroke: "#333" },
      group,
    );
    const nameText = svgElement(
      "text",
      {
        x: box.width / 2,
        y: HEADER_HEIGHT / 2 + 4,
        class: "class-name",
        "text-anchor": "middle",
        "font-size": 13,
        "font-weight": "bold",
        fill: check?.classColors[box.id] ?? "black",
      },
      group,
    );
    nameText.textContent = box.name;
    box.attributes.forEach((attr, index) => {
      const attrText = svgElement(
        "text",
        {
          x: 8,
          y: HEADER_HEIGHT + ATTRIBUTE_HEIGHT * (index + 1) - 5,
          class: "attribute-name",
          "data-attribute-id": attr.id,
          "font-size": 11,
          fill: check?.attributeColors[attr.id] ?? "black",
        },
        group,
      );
      attrText.textContent = attr.name;
    });
  }
}
