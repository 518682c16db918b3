/** Browser bootstrap. Configuration is one knob: the API base URL. */

import { initConsole } from "./app.js";

declare global {
  interface Window {
    WNFORGE_API_BASE?: string;
  }
}

function boot(): void {
  const mount = document.getElementById("app");
  if (!mount) {
    return;
  }
  initConsole(mount, { apiBase: window.WNFORGE_API_BASE ?? "" }).catch((exc) => {
    const message = exc instanceof Error ? exc.message : String(exc);
    mount.textContent = "";
    const error = document.createElement("p");
    error.className = "error";
    error.textContent = `cannot reach the wnforge service: ${message}`;
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", boot);
    mount.append(error, retry);
  });
}

boot();
