/**
 * Diagram model mirrored from the cdx/1 interchange format, plus the shapes
 * of the check endpoint's response. The editor keeps coordinates as integers
 * at all times so its state is always serializable to a valid document.
 */

export type Multiplicity = "1" | "0..1" | "1..*" | "*" | null;

export const MULTIPLICITY_TOKENS: readonly Multiplicity[] = ["1", "0..1", "1..*", "*", null];

export interface AttributeNode {
  id: string;
  name: string;
}

export interface ClassBox {
  id: string;
  name: string;
  x: number;
  y: number;
  width: number;
  height: number;
  attributes: AttributeNode[];
}

export interface RelationshipEdge {
  id: string;
  name: string;
  endA: string;
  endB: string;
  multA: Multiplicity;
  multB: Multiplicity;
}

export interface Diagram {
  classes: ClassBox[];
  relationships: RelationshipEdge[];
}

export interface CdxDocument {
  format: "cdx/1";
  classes: Array<{
    id: string;
    name: string;
    x: number;
    y: number;
    width: number;
    height: number;
    attributes: Array<{ id: string; name: string }>;
  }>;
  relationships: Array<{
    id: string;
    name: string;
    endA: string;
    endB: string;
    multA?: string;
    multB?: string;
  }>;
}

export interface CheckMove {
  classId: string;
  x: number;
  y: number;
  corresponding: boolean;
}

export type NameColor = "red" | "black" | "blue";

export interface CheckResult {
  moves: CheckMove[];
  classColors: Record<string, NameColor>;
  attributeColors: Record<string, NameColor>;
}

export function emptyDiagram(): Diagram {
  return { classes: [], relationships: [] };
}

export function toDocument(diagram: Diagram): CdxDocument {
  return {
    format: "cdx/1",
    classes: diagram.classes.map((box) => ({
      id: box.id,
      name: box.name,
      x: Math.round(box.x),
      y: Math.round(box.y),
      width: Math.round(box.width),
      height: Math.round(box.height),
      attributes: box.attributes.map((attr) => ({ id: attr.id, name: attr.name })),
    })),
    relationships: diagram.relationships.map((edge) => {
      const entry: CdxDocument["relationships"][number] = {
        id: edge.id,
        name: edge.name,
        endA: edge.endA,
        endB: edge.endB,
      };
      if (edge.multA !== null) entry.multA = edge.multA;
      if (edge.multB !== null) entry.multB = edge.multB;
      return entry;
    }),
  };
}

export function fromDocument(doc: CdxDocument): Diagram {
  return {
    classes: doc.classes.map((box) => ({
      id: box.id,
      name: box.name,
      x: box.x,
      y: box.y,
      width: box.width,
      height: box.height,
      attributes: box.attributes.map((attr) => ({ id: attr.id, name: attr.name })),
    })),
    relationships: doc.relationships.map((edge) => ({
      id: edge.id,
      name: edge.name ?? "",
      endA: edge.endA,
      endB: edge.endB,
      multA: (edge.multA as Multiplicity) ?? null,
      multB: (edge.multB as Multiplicity) ?? null,
    })),
  };
}

/** Structural sanity used by tests and before every sync. */
export function diagramProblems(diagram: Diagram): string[] {
  const problems: string[] = [];
  const ids = new Set<string>();
  for (const box of diagram.classes) {
    if (ids.has(box.id)) problems.push(`duplicate id ${box.id}`);
    ids.add(box.id);
    if (box.name.trim() === "") problems.push(`class ${box.id} has an empty name`);
    if (box.width <= 0 || box.height <= 0) problems.push(`class ${box.id} has a bad size`);
    for (const attr of box.attributes) {
      if (ids.has(attr.id)) problems.push(`duplicate id ${attr.id}`);
      ids.add(attr.id);
      if (attr.name.trim() === "") problems.push(`attribute ${attr.id} has an empty name`);
    }
  }
  const classIds = new Set(diagram.classes.map((box) => box.id));
  for (const edge of diagram.relationships) {
    if (ids.has(edge.id)) problems.push(`duplicate id ${edge.id}`);
    ids.add(edge.id);
    if (!classIds.has(edge.endA)) problems.push(`relationship ${edge.id} endA dangling`);
    if (!classIds.has(edge.endB)) problems.push(`relationship ${edge.id} endB dangling`);
  }
  return problems;
}
