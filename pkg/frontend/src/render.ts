// DOM builders. Everything user-controlled goes through textContent, never
// innerHTML. The orderings rendered here come verbatim from the API.

import type {
  Favorite,
  ScreenDetail,
  SearchResponse,
  Suggestion,
} from "./types.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function renderSuggestions(
  listEl: HTMLElement,
  suggestions: Suggestion[],
  onPick: (s: Suggestion) => void,
): void {
  const doc = listEl.ownerDocument;
  clear(listEl);
  listEl.hidden = suggestions.length === 0;
  for (const suggestion of suggestions) {
    const item = el(doc, "li", "suggestion");
    item.dataset.value = suggestion.value;
    item.appendChild(el(doc, "span", "suggestion-value", suggestion.value));
    item.appendChild(el(doc, "span", `badge badge-${suggestion.category}`, suggestion.category));
    item.addEventListener("click", () => onPick(suggestion));
    listEl.appendChild(item);
  }
}

export function renderQueryError(
  container: HTMLElement,
  message: string,
  query: string,
  offset?: number,
): void {
  const doc = container.ownerDocument;
  clear(container);
  const box = el(doc, "div", "query-error");
  box.appendChild(el(doc, "p", "query-error-message", message));
  if (offset !== undefined && offset >= 0 && query) {
    const marker = el(doc, "pre", "query-error-marker");
    marker.textContent = `${query}\n${" ".repeat(Math.min(offset, query.length))}^`;
    box.appendChild(marker);
  }
  container.appendChild(box);
}

export function renderResults(
  container: HTMLElement,
  response: SearchResponse,
  onOpen: (docId: string) => void,
): void {
  const doc = container.ownerDocument;
  clear(container);

  const status = el(
    doc,
    "p",
    "status",
    response.total === 0
      ? "No screens matched."
      : `${response.total} screens · showing page ${response.page + 1} · ${response.canonical_query}`,
  );
  status.id = "search-status";
  container.appendChild(status);

  const grid = el(doc, "div", "results-grid");
  grid.id = "results-grid";
  for (const hit of response.results) {
    const card = el(doc, "article", "result-card");
    card.dataset.docId = hit.doc_id;
    const img = el(doc, "img", "thumb");
    img.src = hit.thumbnail;
    img.alt = `screen of ${hit.app_name}`;
    img.loading = "lazy";
    card.appendChild(img);
    card.appendChild(el(doc, "h3", "app-name", hit.app_name));
    card.appendChild(el(doc, "p", "snippet", hit.snippet));
    card.appendChild(el(doc, "p", "score", hit.score.toFixed(3)));
    card.addEventListener("click", () => onOpen(hit.doc_id));
    grid.appendChild(card);
  }
  container.appendChild(grid);
}

export interface DetailCallbacks {
  isFavorite: boolean;
  onToggleFavorite: () => void;
  onOpen: (docId: string) => void;
}

export function renderDetail(
  container: HTMLElement,
  detail: ScreenDetail,
  callbacks: DetailCallbacks,
): void {
  const doc = container.ownerDocument;
  clear(container);
  const page = el(doc, "div", "detail");

  const header = el(doc, "header", "detail-header");
  header.appendChild(el(doc, "h2", "detail-app", detail.app.app_name));
  header.appendChild(el(doc, "p", "detail-doc", detail.doc_id));
  const favButton = el(doc, "button", "favorite-toggle");
  favButton.id = "favorite-toggle";
  favButton.textContent = callbacks.isFavorite ? "★ favorited" : "☆ favorite";
  favButton.setAttribute("aria-pressed", String(callbacks.isFavorite));
  favButton.addEventListener("click", callbacks.onToggleFavorite);
  header.appendChild(favButton);
  const store = el(doc, "a", "store-link", "view in store");
  store.href = detail.app.store_url;
  store.target = "_blank";
  header.appendChild(store);
  page.appendChild(header);

  const shot = el(doc, "img", "detail-image");
  shot.src = detail.image;
  shot.alt = `screenshot ${detail.doc_id}`;
  page.appendChild(shot);

  // palette swatches keep the API's proportion-descending order
  const palette = el(doc, "div", "palette");
  palette.id = "palette";
  for (const entry of detail.palette) {
    const swatch = el(doc, "div", "swatch");
    swatch.style.backgroundColor = `#${entry.hex}`;
    swatch.dataset.hex = entry.hex;
    swatch.dataset.proportion = String(entry.proportion);
    swatch.title = `#${entry.hex} · ${(entry.proportion * 100).toFixed(1)}%`;
    swatch.style.flexGrow = String(Math.max(entry.proportion, 0.02));
    palette.appendChild(swatch);
  }
  page.appendChild(palette);

  const componentsTitle = el(doc, "h3", undefined, "Components");
  page.appendChild(componentsTitle);
  const componentList = el(doc, "ul", "component-list");
  for (const cls of detail.component_classes) {
    componentList.appendChild(el(doc, "li", "component", cls));
  }
  page.appendChild(componentList);

  const sectionFor = (title: string, ids: { docId: string; label: string }[]) => {
    page.appendChild(el(doc, "h3", undefined, title));
    const list = el(doc, "ul", "screen-links");
    for (const { docId, label } of ids) {
      const item = el(doc, "li", "screen-link");
      const link = el(doc, "a", undefined, label);
      link.href = `#/screen/${encodeURIComponent(docId)}`;
      link.addEventListener("click", (event) => {
        event.preventDefault();
        callbacks.onOpen(docId);
      });
      item.appendChild(link);
      list.appendChild(item);
    }
    page.appendChild(list);
  };
  sectionFor(
    "Similar screens",
    detail.similar.map((s) => ({
      docId: s.doc_id,
      label: `${s.doc_id} (${s.similarity.toFixed(2)})`,
    })),
  );
  sectionFor(
    "More from this app",
    detail.same_app.map((d) => ({ docId: d, label: d })),
  );

  container.appendChild(page);
}

export function renderFavorites(
  container: HTMLElement,
  favorites: Favorite[],
  onOpen: (docId: string) => void,
): void {
  const doc = container.ownerDocument;
  clear(container);
  container.appendChild(el(doc, "h2", undefined, "Favorites"));
  if (favorites.length === 0) {
    container.appendChild(el(doc, "p", "status", "Nothing favorited yet."));
    return;
  }
  const list = el(doc, "ul", "favorites-list");
  list.id = "favorites-list";
  for (const favorite of favorites) {
    const item = el(doc, "li", "favorite");
    const link = el(doc, "a", undefined, favorite.doc_id);
    link.href = `#/screen/${encodeURIComponent(favorite.doc_id)}`;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      onOpen(favorite.doc_id);
    });
    item.appendChild(link);
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderBanner(container: HTMLElement, message: string, onRetry?: () => void): void {
  const doc = container.ownerDocument;
  clear(container);
  const banner = el(doc, "div", "banner");
  banner.appendChild(el(doc, "span", undefined, message));
  if (onRetry) {
    const retry = el(doc, "button", "retry", "retry");
    retry.addEventListener("click", onRetry);
    banner.appendChild(retry);
  }
  container.appendChild(banner);
}
