/**
 * Validity/completeness indicators and the product download button. The
 * button is enabled only when the configuration is complete and valid;
 * otherwise it shows how many features remain undecided.
 */

import { ApiError } from "./api.js";
import { SessionController } from "./session.js";
import type { Status } from "./types.js";

export function triggerDownload(blob: Blob, filename: string): void {
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  document.body.appendChild(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}

export function renderStatusBar(
  container: HTMLElement,
  controller: SessionController,
  onArchive: (blob: Blob) => void = (blob) =>
    triggerDownload(blob, `${controller.model}.zip`),
): void {
  container.textContent = "";

  const validBadge = document.createElement("span");
  validBadge.className = "indicator indicator-valid";
  container.appendChild(validBadge);

  const completeBadge = document.createElement("span");
  completeBadge.className = "indicator indicator-complete";
  container.appendChild(completeBadge);

  const finalizeButton = document.createElement("button");
  finalizeButton.className = "btn-finalize";
  finalizeButton.textContent = "finalize";
  finalizeButton.addEventListener("click", () => {
    void controller.finalize();
  });
  container.appendChild(finalizeButton);

  const downloadButton = document.createElement("button");
  downloadButton.className = "btn-download";
  container.appendChild(downloadButton);

  const problemBox = document.createElement("div");
  problemBox.className = "problem-box";
  container.appendChild(problemBox);

  downloadButton.addEventListener("click", () => {
    problemBox.textContent = "";
    void controller
      .generate()
      .then(onArchive)
      .catch((error) => {
        if (error instanceof ApiError && error.status === 422) {
          const detail = error.detail as { undecided?: string[] };
          const missing = detail?.undecided ?? [];
          problemBox.textContent = `still undecided: ${missing.join(", ")}`;
        } else {
          problemBox.textContent = String(error.message ?? error);
        }
      });
  });

  const sync = (_: unknown, status: Status) => {
    validBadge.textContent = status.valid ? "valid" : "invalid";
    validBadge.dataset.ok = String(status.valid);
    completeBadge.textContent = status.complete
      ? "complete"
      : `incomplete (${status.undecided.length} undecided)`;
    completeBadge.dataset.ok = String(status.complete);
    downloadButton.disabled = !(status.valid && status.complete);
    downloadButton.textContent = status.complete
      ? "download product"
      : `download product (${status.undecided.length} undecided)`;
    finalizeButton.disabled = status.complete;
  };
  sync(controller.currentStates, controller.currentStatus);
  controller.subscribe(sync);
}
