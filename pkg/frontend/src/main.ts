/** Boots the configurator against the service named in window.API_BASE. */

import { ApiClient } from "./api.js";
import { SessionController } from "./session.js";
import { renderStatusBar } from "./status.js";
import { renderTree } from "./tree.js";
import { renderVisualizer } from "./visualizer.js";

declare global {
  interface Window {
    API_BASE?: string;
    MODEL_NAME?: string;
  }
}

export async function boot(root: HTMLElement): Promise<SessionController> {
  const base = window.API_BASE ?? "http://127.0.0.1:8080";
  const modelName = window.MODEL_NAME ?? "traceability";
  const api = new ApiClient(base);
  const controller = new SessionController(api, modelName);

  const model = await api.getModel(modelName);
  await controller.start();

  const statusBar = root.querySelector<HTMLElement>("#status-bar");
  const treePanel = root.querySelector<HTMLElement>("#tree-panel");
  const diagramPanel = root.querySelector<HTMLElement>("#diagram-panel");
  if (!statusBar || !treePanel || !diagramPanel) {
    throw new Error("missing layout panels");
  }
  renderStatusBar(statusBar, controller);
  renderTree(treePanel, model.root, controller);
  renderVisualizer(diagramPanel, model.root, model.constraints, controller);
  return controller;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot(document.getElementById("app") as HTMLElement).catch((error) => {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = `failed to reach the configuration service: ${error}`;
    document.body.prepend(banner);
  });
}
