/** Shared handle the app gives to each screen. */

import type { ApiClient } from "./api.js";
import type { LanguagesPayload } from "./types.js";

export interface AppContext {
  client: ApiClient;
  /** Current editor name, from the header field; sent as X-Actor. */
  getActor(): string;
  /** Language inventory, loaded once at startup. */
  getLanguages(): LanguagesPayload;
  /** The pivot language code. */
  pivot(): string;
  /** Switch to the Edit screen with a synset key preloaded. */
  gotoEdit(key: string): void;
}
