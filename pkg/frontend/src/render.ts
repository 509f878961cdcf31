/**
 * DOM rendering for search results.
 *
 * Results are rendered strictly in the order the service returned them — the
 * server owns ranking, the client never re-sorts.  Each card shows the score
 * decomposition alpha * S_D + (1 - alpha) * S_cmax so the slider's effect is
 * visible per result.
 */

import type { SearchResponse, SearchResult } from "./api.js";
import type { FilterChip } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function fmt(score: number): string {
  return score.toFixed(4);
}

export function renderResultCard(
  doc: Document,
  result: SearchResult,
  alpha: number,
): HTMLElement {
  const card = el(doc, "article", "result-card");
  card.dataset.arcId = result.arc_id;

  const header = el(doc, "header", "result-header");
  header.appendChild(el(doc, "h3", "result-title", result.title));
  header.appendChild(el(doc, "span", "result-arc-id", result.arc_id));
  if (result.boosted) {
    header.appendChild(el(doc, "span", "boost-indicator", "filter boost"));
  }
  card.appendChild(header);

  const docPart = alpha * result.document_score;
  const chunkPart = (1 - alpha) * result.chunk_max_score;
  const scores = el(doc, "div", "score-breakdown");
  scores.appendChild(el(doc, "span", "score-final", `score ${fmt(result.final_score)}`));
  scores.appendChild(
    el(doc, "span", "score-doc", `document ${fmt(result.document_score)} × α = ${fmt(docPart)}`),
  );
  scores.appendChild(
    el(
      doc,
      "span",
      "score-chunk",
      `best chunk ${fmt(result.chunk_max_score)} × (1−α) = ${fmt(chunkPart)}`,
    ),
  );
  card.appendChild(scores);

  const chunk = el(doc, "div", "best-chunk");
  chunk.appendChild(el(doc, "span", "field-badge", result.best_chunk.field_type));
  chunk.appendChild(el(doc, "span", "chunk-text", result.best_chunk.chunk_text));
  card.appendChild(chunk);

  if (result.summary !== undefined) {
    card.appendChild(el(doc, "p", "result-summary", result.summary));
  }
  return card;
}

export function renderResults(
  doc: Document,
  container: HTMLElement,
  response: SearchResponse,
): void {
  container.replaceChildren();
  if (response.warning) {
    container.appendChild(el(doc, "p", "warning-banner", response.warning));
  }
  if (response.results.length === 0) {
    container.appendChild(el(doc, "p", "no-results", "No matching ARCs."));
    return;
  }
  for (const result of response.results) {
    container.appendChild(renderResultCard(doc, result, response.params.alpha));
  }
}

export function renderFilterChips(
  doc: Document,
  container: HTMLElement,
  filters: FilterChip[],
  onRemove: (index: number) => void,
): void {
  container.replaceChildren();
  filters.forEach((filter, index) => {
    const chip = el(doc, "span", "filter-chip", `${filter.fieldType}: ${filter.match}`);
    const remove = el(doc, "button", "chip-remove", "×");
    remove.type = "button";
    remove.addEventListener("click", () => onRemove(index));
    chip.appendChild(remove);
    container.appendChild(chip);
  });
}

export function renderError(banner: HTMLElement, message: string): void {
  banner.textContent = message;
  banner.hidden = false;
}

export function clearError(banner: HTMLElement): void {
  banner.textContent = "";
  banner.hidden = true;
}
