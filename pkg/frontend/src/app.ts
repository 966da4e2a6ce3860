// Controller: wires the DOM shell to the API client and keeps the whole UI
// state in the URL hash. The UI never ranks or filters on its own; each
// displayed ordering comes straight from a response.

import { ApiClient, ApiError } from "./api.js";
import { debounce } from "./debounce.js";
import {
  renderBanner,
  renderDetail,
  renderFavorites,
  renderQueryError,
  renderResults,
  renderSuggestions,
} from "./render.js";
import {
  PAGE_SIZE,
  type Route,
  type UiSearchState,
  defaultState,
  normalizeState,
  parseHash,
  routeToHash,
} from "./state.js";

export const SUGGEST_DEBOUNCE_MS = 200;

export const SCREEN_TYPE_CHIPS = ["login", "settings", "list", "map", "browser", "media", "other"];
export const UI_TYPE_CHIPS = [
  "button", "edittext", "checkbox", "textview", "imageview",
  "recyclerview", "webview", "videoview", "progressbar",
];

interface WindowLike {
  location: { hash: string };
  addEventListener(type: string, listener: () => void): void;
}

export class App {
  private state: UiSearchState = defaultState();
  private searchAbort: AbortController | null = null;
  private suggestAbort: AbortController | null = null;
  private total = 0;
  private selfNavigatedTo: string | null = null;
  private readonly suggestSoon: ReturnType<typeof debounce<[string]>>;

  constructor(
    private readonly doc: Document,
    private readonly win: WindowLike,
    private readonly api: ApiClient,
  ) {
    this.suggestSoon = debounce((prefix: string) => {
      void this.loadSuggestions(prefix);
    }, SUGGEST_DEBOUNCE_MS);
  }

  private $(id: string): HTMLElement {
    const node = this.doc.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
  }

  private input(id: string): HTMLInputElement {
    return this.$(id) as HTMLInputElement;
  }

  init(): void {
    this.buildChips();
    this.bindEvents();
    this.win.addEventListener("hashchange", () => {
      // navigate() already routed self-initiated changes synchronously
      if (this.selfNavigatedTo === this.win.location.hash) {
        this.selfNavigatedTo = null;
        return;
      }
      void this.route(parseHash(this.win.location.hash));
    });
    void this.route(parseHash(this.win.location.hash));
  }

  // --- wiring ---

  private buildChips(): void {
    const makeChip = (container: HTMLElement, value: string, group: string) => {
      const label = this.doc.createElement("label");
      label.className = "chip";
      const box = this.doc.createElement("input");
      box.type = "checkbox";
      box.value = value;
      box.dataset.group = group;
      box.addEventListener("change", () => this.onFiltersChanged());
      label.appendChild(box);
      label.appendChild(this.doc.createTextNode(value));
      container.appendChild(label);
    };
    const uiChips = this.$("chips-ui");
    for (const value of UI_TYPE_CHIPS) makeChip(uiChips, value, "ui");
    const screenChips = this.$("chips-screen");
    for (const value of SCREEN_TYPE_CHIPS) makeChip(screenChips, value, "screen");
  }

  private bindEvents(): void {
    const form = this.$("search-form") as HTMLFormElement;
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.onSubmit();
    });
    const query = this.input("query");
    query.addEventListener("input", () => {
      this.suggestSoon(query.value);
    });
    this.input("color-enabled").addEventListener("change", () => this.onFiltersChanged());
    this.input("color-picker").addEventListener("change", () => this.onFiltersChanged());
    this.input("tolerance").addEventListener("change", () => this.onFiltersChanged());
    this.$("page-prev").addEventListener("click", () => this.turnPage(-1));
    this.$("page-next").addEventListener("click", () => this.turnPage(+1));
    this.$("favorites-link").addEventListener("click", (event) => {
      event.preventDefault();
      this.navigate({ kind: "favorites" });
    });
    this.$("home-link").addEventListener("click", (event) => {
      event.preventDefault();
      this.navigate({ kind: "search", state: this.state });
    });
  }

  private readStateFromControls(): UiSearchState {
    const colorEnabled = this.input("color-enabled").checked;
    const picked = this.input("color-picker").value.replace(/^#/, "");
    const chips = (group: string): string[] =>
      Array.from(this.doc.querySelectorAll<HTMLInputElement>(`input[data-group="${group}"]`))
        .filter((box) => box.checked)
        .map((box) => box.value);
    return normalizeState({
      query: this.input("query").value,
      color: colorEnabled && picked ? picked : null,
      tolerance: Number(this.input("tolerance").value),
      uiFilters: chips("ui"),
      screenTypeFilters: chips("screen"),
      page: 0,
    });
  }

  private writeStateToControls(): void {
    this.input("query").value = this.state.query;
    this.input("color-enabled").checked = this.state.color !== null;
    if (this.state.color) this.input("color-picker").value = `#${this.state.color}`;
    this.input("tolerance").value = String(this.state.tolerance);
    for (const box of Array.from(
      this.doc.querySelectorAll<HTMLInputElement>("input[data-group]"),
    )) {
      const group = box.dataset.group === "ui" ? this.state.uiFilters : this.state.screenTypeFilters;
      box.checked = group.includes(box.value);
    }
  }

  // --- navigation ---

  navigate(route: Route): Promise<void> {
    const hash = routeToHash(route);
    if (this.win.location.hash !== hash) {
      this.selfNavigatedTo = hash;
      this.win.location.hash = hash;
    }
    return this.route(parseHash(hash));
  }

  private async route(route: Route): Promise<void> {
    this.hideSuggestions();
    if (route.kind === "screen") {
      await this.showDetail(route.docId);
      return;
    }
    if (route.kind === "favorites") {
      await this.showFavorites();
      return;
    }
    this.state = route.state;
    this.writeStateToControls();
    this.showSection("search");
    if (this.state.query) {
      await this.runSearch();
    }
  }

  private onSubmit(): void {
    this.suggestSoon.cancel();
    this.hideSuggestions();
    this.navigate({ kind: "search", state: this.readStateFromControls() });
  }

  private onFiltersChanged(): void {
    if (this.state.query || this.input("query").value.trim()) {
      this.onSubmit();
    }
  }

  private turnPage(delta: number): void {
    const next = this.state.page + delta;
    if (next < 0) return;
    if (delta > 0 && (next * PAGE_SIZE) >= this.total) return;
    this.navigate({ kind: "search", state: { ...this.state, page: next } });
  }

  // --- data flows ---

  private async runSearch(): Promise<void> {
    this.searchAbort?.abort();
    this.searchAbort = new AbortController();
    const results = this.$("results");
    try {
      const response = await this.api.search(this.state, PAGE_SIZE, this.searchAbort.signal);
      this.total = response.total;
      renderResults(results, response, (docId) => this.navigate({ kind: "screen", docId }));
      this.updatePager();
    } catch (error) {
      if (this.isAbort(error)) return;
      if (error instanceof ApiError && error.status < 500) {
        renderQueryError(results, `${error.code}: ${error.message}`, this.state.query, error.offset);
      } else {
        renderBanner(results, "search failed — the service may be unreachable", () => {
          void this.runSearch();
        });
      }
    }
  }

  private async loadSuggestions(prefix: string): Promise<void> {
    const trimmed = prefix.trim();
    const list = this.$("suggestions");
    if (!trimmed) {
      this.hideSuggestions();
      return;
    }
    this.suggestAbort?.abort();
    this.suggestAbort = new AbortController();
    try {
      const lastWord = trimmed.split(/\s+/).pop() ?? trimmed;
      const response = await this.api.suggest(lastWord, 8, this.suggestAbort.signal);
      renderSuggestions(list as HTMLElement, response.suggestions, (s) => {
        const query = this.input("query");
        const words = query.value.trim().split(/\s+/);
        words[words.length - 1] = s.value;
        query.value = words.join(" ");
        this.hideSuggestions();
      });
    } catch (error) {
      if (!this.isAbort(error)) this.hideSuggestions();
    }
  }

  private async showDetail(docId: string): Promise<void> {
    this.showSection("detail");
    const container = this.$("detail");
    try {
      const [detail, favorites] = await Promise.all([
        this.api.screenDetail(docId),
        this.api.favorites(),
      ]);
      let favorite = favorites.some((f) => f.doc_id === docId);
      const rerender = () => {
        renderDetail(container, detail, {
          isFavorite: favorite,
          onToggleFavorite: () => {
            void (async () => {
              if (favorite) {
                await this.api.removeFavorite(docId);
              } else {
                await this.api.addFavorite(docId);
              }
              favorite = !favorite;
              rerender();
            })();
          },
          onOpen: (other) => this.navigate({ kind: "screen", docId: other }),
        });
      };
      rerender();
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        renderBanner(container, `screen not found: ${docId}`);
      } else if (!this.isAbort(error)) {
        renderBanner(container, "could not load screen details", () => {
          void this.showDetail(docId);
        });
      }
    }
  }

  private async showFavorites(): Promise<void> {
    this.showSection("favorites");
    const container = this.$("favorites");
    try {
      const favorites = await this.api.favorites();
      renderFavorites(container, favorites, (docId) => this.navigate({ kind: "screen", docId }));
    } catch {
      renderBanner(container, "could not load favorites", () => {
        void this.showFavorites();
      });
    }
  }

  // --- small helpers ---

  private updatePager(): void {
    const pager = this.$("pager");
    pager.hidden = this.total <= PAGE_SIZE;
    this.$("page-label").textContent = `page ${this.state.page + 1} of ${Math.max(
      1,
      Math.ceil(this.total / PAGE_SIZE),
    )}`;
  }

  private showSection(name: "search" | "detail" | "favorites"): void {
    for (const section of ["search", "detail", "favorites"]) {
      this.$(`section-${section}`).hidden = section !== name;
    }
  }

  private hideSuggestions(): void {
    const list = this.$("suggestions");
    list.hidden = true;
    while (list.firstChild) list.removeChild(list.firstChild);
  }

  private isAbort(error: unknown): boolean {
    return error instanceof DOMException && error.name === "AbortError";
  }
}
