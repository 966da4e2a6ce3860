"""Search engine facade: query execution, screen details, similar screens
and favorites, independent of any transport. The HTTP service and the CLI
are both thin layers over this class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .colors import ColorSpec, parse_color_token, tolerance_from_scalar
from .errors import UnknownDoc
from .favorites import FavoritesStore
from .indexing import Index, PredefinedFilters, execute, ui_term
from .model import QueryAst, ScreenRecord, canonical_query_string
from .querylang import Vocabulary, parse, suggest

MAX_PAGE_SIZE = 50
DEFAULT_PAGE_SIZE = 10
SNIPPET_LENGTH = 160


@dataclass(frozen=True)
class SearchHit:
    doc_id: str
    score: float
    app_name: str
    thumbnail: str
    snippet: str


@dataclass(frozen=True)
class SearchPage:
    query: str
    canonical_query: str
    total: int
    page: int
    page_size: int
    results: tuple[SearchHit, ...]


@dataclass(frozen=True)
class ScreenDetail:
    record: ScreenRecord
    similar: tuple[tuple[str, float], ...]
    same_app: tuple[str, ...]


def thumb_url(doc_id: str) -> str:
    return f"/static/thumbs/{doc_id}.png"


def full_url(doc_id: str) -> str:
    return f"/static/full/{doc_id}.png"


def _snippet(record: ScreenRecord) -> str:
    joined = " · ".join(record.component_texts)
    if len(joined) > SNIPPET_LENGTH:
        joined = joined[:SNIPPET_LENGTH - 1] + "…"
    return joined


class SearchEngine:
    def __init__(self, index: Index, favorites: FavoritesStore):
        self.index = index
        self.favorites = favorites
        self.vocab = Vocabulary.from_index(index)
        self._class_sets: dict[str, frozenset[str]] = {
            doc_id: frozenset(ui_term(c) for c in rec.component_classes)
            for doc_id, rec in index.docs.items()
        }

    # --- search ---

    def parse_query(self, q: str) -> QueryAst:
        return parse(q, self.vocab)

    def search(self, q: str,
               color: str | None = None,
               tolerance: float | None = None,
               ui_types=(), screen_types=(),
               page: int = 0, page_size: int = DEFAULT_PAGE_SIZE) -> SearchPage:
        """Parse and execute a query with optional color and facet filters.

        ``tolerance`` is the slider scalar in [0,1]; it controls the HSL
        deltas used both for color atoms in the query and for the picker
        color. Pages past the end come back empty with the true total.
        """
        if page < 0:
            raise ValueError(f"page must be >= 0, got {page}")
        if not 1 <= page_size <= MAX_PAGE_SIZE:
            raise ValueError(f"page_size must be in [1,{MAX_PAGE_SIZE}], got {page_size}")

        ast = self.parse_query(q)
        color_spec: ColorSpec | None = parse_color_token(color) if color else None
        tol = tolerance_from_scalar(tolerance) if tolerance is not None else None
        predefined = PredefinedFilters(
            ui_types=tuple(t.strip().lower() for t in ui_types if t.strip()),
            screen_types=tuple(t.strip().lower() for t in screen_types if t.strip()),
        )

        ranked = execute(self.index, ast,
                         color_filter=color_spec,
                         tolerance=tol,
                         predefined=predefined if predefined else None,
                         top_k=max(len(self.index), 1))
        start = page * page_size
        window = ranked[start:start + page_size]
        hits = []
        for doc_id, score in window:
            rec = self.index.docs[doc_id]
            hits.append(SearchHit(doc_id=doc_id, score=score,
                                  app_name=rec.app.app_name,
                                  thumbnail=thumb_url(doc_id),
                                  snippet=_snippet(rec)))
        return SearchPage(query=q, canonical_query=canonical_query_string(ast),
                          total=len(ranked), page=page, page_size=page_size,
                          results=tuple(hits))

    def suggest(self, prefix: str, limit: int = 10) -> list[tuple[str, str]]:
        return suggest(prefix, self.vocab, limit)

    # --- screen views ---

    def _record(self, doc_id: str) -> ScreenRecord:
        rec = self.index.docs.get(doc_id)
        if rec is None:
            raise UnknownDoc(f"no such screen: {doc_id}")
        return rec

    def similar_screens(self, doc_id: str, k: int = 5) -> list[tuple[str, float]]:
        """Top-k structurally similar screens by Jaccard over component-class
        sets, excluding the screen itself and its own app's screens."""
        rec = self._record(doc_id)
        own = self._class_sets[doc_id]
        scored = []
        for other_id in self.index.doc_ids:
            if other_id == doc_id:
                continue
            other = self.index.docs[other_id]
            if other.app.package_id == rec.app.package_id:
                continue
            theirs = self._class_sets[other_id]
            union = own | theirs
            sim = len(own & theirs) / len(union) if union else 0.0
            scored.append((other_id, sim))
        scored.sort(key=lambda ds: (-ds[1], ds[0]))
        return scored[:k]

    def same_app_screens(self, doc_id: str) -> list[str]:
        rec = self._record(doc_id)
        return [d for d in self.index.doc_ids
                if d != doc_id
                and self.index.docs[d].app.package_id == rec.app.package_id]

    def screen_detail(self, doc_id: str, similar_k: int = 5) -> ScreenDetail:
        rec = self._record(doc_id)
        return ScreenDetail(
            record=rec,
            similar=tuple(self.similar_screens(doc_id, similar_k)),
            same_app=tuple(self.same_app_screens(doc_id)),
        )

    # --- favorites ---

    def favorites_add(self, doc_id: str) -> None:
        self._record(doc_id)  # UnknownDoc for nonexistent ids
        self.favorites.add(doc_id)

    def favorites_remove(self, doc_id: str) -> None:
        self.favorites.remove(doc_id)

    def favorites_list(self) -> list[tuple[str, float]]:
        return self.favorites.list()


def open_engine(index_dir: str | Path,
                favorites_path: str | Path | None = None) -> SearchEngine:
    """Load an index directory and attach its favorites store."""
    from .indexing import load_index

    index_dir = Path(index_dir)
    index = load_index(index_dir)
    favorites = FavoritesStore(favorites_path or index_dir / "favorites.json")
    return SearchEngine(index, favorites)
