/**
 * Feature-model diagram: a layered tree whose nodes are colored by decision
 * state (selected green, deselected red, undecided neutral), refreshed after
 * every service response. Models too large for a readable diagram fall back
 * to a collapsible outline with the same coloring.
 */

import { SessionController } from "./session.js";
import type { ConstraintDoc, ModelNode, StatesMap } from "./types.js";

export const COLORS = {
  selected: "#2e7d32",
  deselected: "#c62828",
  undecided: "#9e9e9e",
} as const;

const NODE_WIDTH = 128;
const NODE_HEIGHT = 26;
const H_GAP = 10;
const V_GAP = 44;

interface Laid {
  node: ModelNode;
  x: number;
  y: number;
  children: Laid[];
}

function layout(node: ModelNode, depth: number, cursor: { x: number }): Laid {
  const children = node.children.map((child) => layout(child, depth + 1, cursor));
  let x: number;
  if (children.length === 0) {
    x = cursor.x;
    cursor.x += NODE_WIDTH + H_GAP;
  } else {
    x = (children[0].x + children[children.length - 1].x) / 2;
  }
  return { node, x, y: depth * (NODE_HEIGHT + V_GAP), children };
}

function countNodes(node: ModelNode): number {
  return 1 + node.children.reduce((sum, child) => sum + countNodes(child), 0);
}

const SVG_NS = "http://www.w3.org/2000/svg";

function drawNode(svg: SVGElement, laid: Laid, states: StatesMap): void {
  for (const child of laid.children) {
    const edge = document.createElementNS(SVG_NS, "line");
    edge.setAttribute("x1", String(laid.x + NODE_WIDTH / 2));
    edge.setAttribute("y1", String(laid.y + NODE_HEIGHT));
    edge.setAttribute("x2", String(child.x + NODE_WIDTH / 2));
    edge.setAttribute("y2", String(child.y));
    edge.setAttribute("stroke", "#777");
    svg.appendChild(edge);
    drawNode(svg, child, states);
  }
  const state = states[laid.node.name]?.state ?? "undecided";
  const rect = document.createElementNS(SVG_NS, "rect");
  rect.setAttribute("x", String(laid.x));
  rect.setAttribute("y", String(laid.y));
  rect.setAttribute("width", String(NODE_WIDTH));
  rect.setAttribute("height", String(NODE_HEIGHT));
  rect.setAttribute("rx", "4");
  rect.setAttribute("fill", COLORS[state]);
  rect.dataset.feature = laid.node.name;
  rect.dataset.state = state;
  svg.appendChild(rect);

  const text = document.createElementNS(SVG_NS, "text");
  text.setAttribute("x", String(laid.x + NODE_WIDTH / 2));
  text.setAttribute("y", String(laid.y + NODE_HEIGHT / 2 + 4));
  text.setAttribute("text-anchor", "middle");
  text.setAttribute("fill", "#fff");
  text.setAttribute("font-size", "10");
  text.textContent = laid.node.name;
  svg.appendChild(text);
}

function renderDiagram(container: HTMLElement, root: ModelNode, states: StatesMap): void {
  const cursor = { x: 0 };
  const laid = layout(root, 0, cursor);
  let depth = 0;
  const walk = (l: Laid, d: number) => {
    depth = Math.max(depth, d);
    l.children.forEach((child) => walk(child, d + 1));
  };
  walk(laid, 0);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(cursor.x));
  svg.setAttribute("height", String((depth + 1) * (NODE_HEIGHT + V_GAP)));
  svg.classList.add("model-diagram");
  drawNode(svg, laid, states);
  container.appendChild(svg);
}

function renderOutline(container: HTMLElement, node: ModelNode, states: StatesMap): void {
  const details = document.createElement("details");
  details.open = true;
  const summary = document.createElement("summary");
  const state = states[node.name]?.state ?? "undecided";
  summary.textContent = node.name;
  summary.dataset.feature = node.name;
  summary.dataset.state = state;
  summary.style.color = COLORS[state];
  details.appendChild(summary);
  for (const child of node.children) renderOutline(details, child, states);
  container.appendChild(details);
}

export function renderVisualizer(
  container: HTMLElement,
  root: ModelNode,
  constraints: ConstraintDoc[],
  controller: SessionController,
  maxDiagramNodes = 150,
): void {
  const redraw = (states: StatesMap) => {
    container.textContent = "";
    if (countNodes(root) <= maxDiagramNodes) {
      renderDiagram(container, root, states);
    } else {
      const outline = document.createElement("div");
      outline.className = "model-outline";
      renderOutline(outline, root, states);
      container.appendChild(outline);
    }
    const list = document.createElement("ul");
    list.className = "constraint-list";
    for (const constraint of constraints) {
      const item = document.createElement("li");
      item.textContent = `${constraint.lhs} ${constraint.op} ${constraint.rhs}`;
      list.appendChild(item);
    }
    container.appendChild(list);
  };
  redraw(controller.currentStates);
  controller.subscribe(redraw);
}
