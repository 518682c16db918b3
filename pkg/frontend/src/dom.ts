/** Small DOM builders; the console renders without a framework. */

export type Child = Node | string | null | undefined;

export interface Attrs {
  [name: string]: string | boolean | EventListener | undefined;
}

/**
 * Create an element. Attribute values: string sets the attribute, boolean
 * toggles it, a function with an "on"-prefixed name becomes a listener.
 */
export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, attrs: Attrs = {}, ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    if (value === undefined || value === false) {
      continue;
    }
    if (typeof value === "function") {
      node.addEventListener(name.replace(/^on/, ""), value);
    } else if (value === true) {
      node.setAttribute(name, "");
      // Reflect the common boolean properties so tests and code can read
      // them back without going through getAttribute.
      if (name === "disabled" || name === "checked" || name === "readonly") {
        (node as unknown as Record<string, boolean>)[
          name === "readonly" ? "readOnly" : name] = true;
      }
    } else {
      node.setAttribute(name, value);
      if (name === "value" && (node instanceof HTMLInputElement
          || node instanceof HTMLTextAreaElement
          || node instanceof HTMLSelectElement)) {
        node.value = value;
      }
    }
  }
  for (const child of children) {
    if (child === null || child === undefined) {
      continue;
    }
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

export function replaceChildrenOf(node: HTMLElement, ...children: Child[]): void {
  clear(node);
  for (const child of children) {
    if (child !== null && child !== undefined) {
      node.append(child);
    }
  }
}

/** Format a reliability for display: one decimal, or "-" when unknown. */
export function fmtReliability(value: number | null | undefined): string {
  return value === null || value === undefined ? "-" : value.toFixed(1);
}
