/**
 * Page wiring: form controls <-> UISearchState <-> URL <-> search service.
 *
 * Every state change is pushed into the URL (history.replaceState), and the
 * page is bootstrapped from location.search, so any view is linkable.  Each
 * search carries a monotonically increasing request id; a response whose id
 * is no longer current is discarded, so a slow earlier request can never
 * overwrite the results of a later one.  On errors the previous results stay
 * on screen behind an error banner.
 */

import { ApiError, SearchClient } from "./api.js";
import {
  clearError,
  renderError,
  renderFilterChips,
  renderResults,
} from "./render.js";
import {
  alphaToSlider,
  isFieldType,
  parseState,
  serializeState,
  sliderToAlpha,
  type UISearchState,
} from "./state.js";

interface PageElements {
  form: HTMLFormElement;
  queryInput: HTMLInputElement;
  alphaSlider: HTMLInputElement;
  alphaLabel: HTMLElement;
  filterField: HTMLSelectElement;
  filterMatch: HTMLInputElement;
  addFilter: HTMLButtonElement;
  chips: HTMLElement;
  errorBanner: HTMLElement;
  results: HTMLElement;
}

function requireElement<T extends Element>(doc: Document, id: string): T {
  const node = doc.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as unknown as T;
}

export function collectElements(doc: Document): PageElements {
  return {
    form: requireElement(doc, "search-form"),
    queryInput: requireElement(doc, "query-input"),
    alphaSlider: requireElement(doc, "alpha-slider"),
    alphaLabel: requireElement(doc, "alpha-label"),
    filterField: requireElement(doc, "filter-field"),
    filterMatch: requireElement(doc, "filter-match"),
    addFilter: requireElement(doc, "add-filter"),
    chips: requireElement(doc, "filter-chips"),
    errorBanner: requireElement(doc, "error-banner"),
    results: requireElement(doc, "results"),
  };
}

export class SearchApp {
  state: UISearchState;
  private requestCounter = 0;

  constructor(
    private readonly doc: Document,
    private readonly elements: PageElements,
    private readonly client: SearchClient,
    private readonly replaceUrl: (queryString: string) => void,
  ) {
    this.state = parseState(doc.defaultView?.location.search ?? "");
  }

  start(): void {
    const els = this.elements;
    els.form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.update({ query: els.queryInput.value });
      void this.runSearch();
    });
    els.alphaSlider.addEventListener("input", () => {
      this.update({ alpha: sliderToAlpha(Number(els.alphaSlider.value)) });
      void this.runSearch();
    });
    els.addFilter.addEventListener("click", () => {
      const fieldType = els.filterField.value;
      const match = els.filterMatch.value.trim();
      if (!isFieldType(fieldType) || match === "") return;
      this.update({ filters: [...this.state.filters, { fieldType, match }] });
      els.filterMatch.value = "";
      void this.runSearch();
    });
    this.syncControls();
    if (this.state.query !== "") void this.runSearch();
  }

  update(partial: Partial<UISearchState>): void {
    this.state = { ...this.state, ...partial };
    this.replaceUrl(serializeState(this.state));
    this.syncControls();
  }

  removeFilter(index: number): void {
    this.update({ filters: this.state.filters.filter((_, i) => i !== index) });
    void this.runSearch();
  }

  private syncControls(): void {
    const els = this.elements;
    els.queryInput.value = this.state.query;
    els.alphaSlider.value = alphaToSlider(this.state.alpha).toString();
    els.alphaLabel.textContent = `α = ${this.state.alpha.toFixed(2)}`;
    renderFilterChips(this.doc, els.chips, this.state.filters, (i) => this.removeFilter(i));
  }

  async runSearch(): Promise<void> {
    if (this.state.query.trim() === "") return;
    const requestId = ++this.requestCounter;
    try {
      const response = await this.client.search(this.state);
      if (requestId !== this.requestCounter) return; // stale response
      clearError(this.elements.errorBanner);
      renderResults(this.doc, this.elements.results, response);
    } catch (err) {
      if (requestId !== this.requestCounter) return;
      const message =
        err instanceof ApiError ? err.message : "search service unreachable";
      renderError(this.elements.errorBanner, message);
      // previous results stay on screen
    }
  }
}

export function bootstrap(doc: Document): SearchApp {
  const win = doc.defaultView;
  if (win === null) throw new Error("document is not attached to a window");
  const app = new SearchApp(
    doc,
    collectElements(doc),
    new SearchClient({ baseUrl: "" }),
    (qs) => win.history.replaceState(null, "", qs === "" ? win.location.pathname : `?${qs}`),
  );
  app.start();
  return app;
}

if (typeof document !== "undefined" && document.getElementById("search-form") !== null) {
  bootstrap(document);
}
