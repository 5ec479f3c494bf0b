/**
 * Tri-state feature tree. Each row shows the feature, its current state and
 * origin, and include/exclude controls. Clicking issues a decide call; a
 * rejected decision surfaces the conflict explanation while the control
 * reverts to the authoritative server state, so the view can never show an
 * invalid configuration.
 */

import { SessionController } from "./session.js";
import type { ModelNode, StateEntry, StatesMap } from "./types.js";

function stateOf(states: StatesMap, name: string): StateEntry {
  return states[name] ?? { state: "undecided", origin: null };
}

function renderNode(
  node: ModelNode,
  controller: SessionController,
  conflictBox: HTMLElement,
  isRoot: boolean,
): HTMLLIElement {
  const item = document.createElement("li");
  item.dataset.feature = node.name;

  const row = document.createElement("div");
  row.className = "feature-row";
  row.dataset.feature = node.name;

  const label = document.createElement("span");
  label.className = "feature-name";
  label.textContent = node.name + (node.group ? ` (${node.group})` : "");
  row.appendChild(label);

  const stateBadge = document.createElement("span");
  stateBadge.className = "badge badge-state";
  row.appendChild(stateBadge);

  const originBadge = document.createElement("span");
  originBadge.className = "badge badge-origin";
  row.appendChild(originBadge);

  const makeButton = (text: string, value: "selected" | "deselected") => {
    const button = document.createElement("button");
    button.textContent = text;
    button.className = value === "selected" ? "btn-include" : "btn-exclude";
    button.addEventListener("click", () => {
      conflictBox.textContent = "";
      void controller.decide(node.name, value).then((outcome) => {
        if (!outcome.ok) {
          conflictBox.textContent = outcome.conflict ?? "decision rejected";
        }
      });
    });
    row.appendChild(button);
    return button;
  };

  const include = makeButton("include", "selected");
  const exclude = makeButton("exclude", "deselected");

  const sync = (states: StatesMap) => {
    const entry = stateOf(states, node.name);
    stateBadge.textContent = entry.state;
    stateBadge.dataset.state = entry.state;
    originBadge.textContent = entry.origin ?? "";
    originBadge.dataset.origin = entry.origin ?? "";
    originBadge.style.display = entry.origin && entry.origin !== "user" ? "" : "none";
    const decided = entry.state !== "undecided";
    include.disabled = decided;
    exclude.disabled = decided || isRoot;
  };
  sync(controller.currentStates);
  controller.subscribe(sync);

  item.appendChild(row);
  if (node.children.length > 0) {
    const list = document.createElement("ul");
    for (const child of node.children) {
      list.appendChild(renderNode(child, controller, conflictBox, false));
    }
    item.appendChild(list);
  }
  return item;
}

export function renderTree(
  container: HTMLElement,
  model: ModelNode,
  controller: SessionController,
): void {
  container.textContent = "";
  const conflictBox = document.createElement("div");
  conflictBox.className = "conflict-box";
  container.appendChild(conflictBox);

  const undoButton = document.createElement("button");
  undoButton.className = "btn-undo";
  undoButton.textContent = "undo";
  undoButton.addEventListener("click", () => {
    conflictBox.textContent = "";
    void controller.undo().catch((error) => {
      conflictBox.textContent = String(error.message ?? error);
    });
  });
  container.appendChild(undoButton);

  const rootList = document.createElement("ul");
  rootList.className = "feature-tree";
  rootList.appendChild(renderNode(model, controller, conflictBox, true));
  container.appendChild(rootList);
}
