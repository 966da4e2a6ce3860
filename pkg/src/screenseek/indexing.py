"""Multi-field inverted index over ScreenRecords with boolean retrieval and
BM25 ranking, plus ``scan_match``, a brute-force per-document evaluator used
as an independent oracle for the index path.

Index structures are immutable once built; readers may share an Index freely.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .colors import (ACHROMATIC_SATURATION, DEFAULT_COLOR_TOLERANCE,
                     ColorSpec, ColorTolerance, color_matches, parse_color_token)
from .errors import CorruptIndex, DuplicateDocId, IndexIoError
from .model import And, Atom, Or, QueryAst, ScreenRecord, iter_atoms

FIELDS = ("appname", "text", "ui", "screen_type")

BM25_K1 = 1.2
BM25_B = 0.75

INDEX_FORMAT = "screenseek-index"
INDEX_VERSION = 1

_TOKEN_RE = re.compile(r"[^\W_]+")


def analyze(raw: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs. No stemming, no stopwords."""
    return _TOKEN_RE.findall(raw.lower())


def ui_term(class_name: str) -> str:
    """Indexable term for a component class: lowercase final path segment."""
    return class_name.rsplit(".", 1)[-1].lower()


def record_field_terms(record: ScreenRecord) -> dict[str, list[str]]:
    """Analyzed terms per field for one record; shared by index build and scan."""
    return {
        "appname": analyze(record.app.app_name),
        "text": analyze(" ".join(record.component_texts)),
        "ui": [ui_term(c) for c in record.component_classes],
        "screen_type": [record.screen_type],
    }


@dataclass(frozen=True)
class PredefinedFilters:
    """Faceted restrictions applied on top of the parsed query.

    A document must contain every requested ui type and its screen type must
    be one of the requested labels (when either list is non-empty).
    """

    ui_types: tuple[str, ...] = ()
    screen_types: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.ui_types or self.screen_types)


class Index:
    """Per-field postings + document store + palette color table."""

    def __init__(self, doc_ids: list[str], docs: dict[str, ScreenRecord],
                 postings: dict[str, dict[str, dict[int, int]]],
                 palettes: dict[str, list[tuple[float, float, float, float]]]):
        if doc_ids != sorted(doc_ids):
            raise ValueError("doc_ids must be sorted")
        self.doc_ids = list(doc_ids)
        self.docs = dict(docs)
        self.postings = postings
        self.palettes = palettes

        n = len(doc_ids)
        self.field_lengths: dict[str, list[int]] = {}
        self.avg_field_length: dict[str, float] = {}
        for fld in FIELDS:
            lengths = [0] * n
            for term_map in postings.get(fld, {}).values():
                for ord_, tf in term_map.items():
                    lengths[ord_] += tf
            self.field_lengths[fld] = lengths
            self.avg_field_length[fld] = (sum(lengths) / n) if n else 0.0

        # Flat palette arrays for vectorized color matching.
        doc_refs: list[int] = []
        hsl_rows: list[tuple[float, float, float]] = []
        for ord_, doc_id in enumerate(doc_ids):
            for h, s, light, _prop in palettes.get(doc_id, []):
                doc_refs.append(ord_)
                hsl_rows.append((h, s, light))
        self._color_doc = np.asarray(doc_refs, dtype=np.int64)
        self._color_hsl = (np.asarray(hsl_rows, dtype=np.float64)
                           if hsl_rows else np.empty((0, 3)))

        self._term_sets: dict[tuple[str, str], frozenset[int]] = {}
        self._all_ords = frozenset(range(n))

    def __len__(self) -> int:
        return len(self.doc_ids)

    @property
    def records(self) -> list[ScreenRecord]:
        return [self.docs[d] for d in self.doc_ids]

    def field_terms(self, field: str) -> list[str]:
        return sorted(self.postings.get(field, {}).keys())

    def _term_ords(self, field: str, term: str) -> frozenset[int]:
        key = (field, term)
        cached = self._term_sets.get(key)
        if cached is None:
            cached = frozenset(self.postings.get(field, {}).get(term, {}).keys())
            self._term_sets[key] = cached
        return cached

    def term_match_ords(self, field: str, terms: list[str]) -> set[int]:
        """Ordinals of docs whose field contains all given terms."""
        result = set(self._all_ords)
        for term in terms:
            result &= self._term_ords(field, term)
            if not result:
                break
        return result

    def color_match_ords(self, spec: ColorSpec, tol: ColorTolerance) -> set[int]:
        """Ordinals of docs with at least one palette entry matching ``spec``."""
        if self._color_hsl.shape[0] == 0:
            return set()
        hsl = self._color_hsl
        qh, qs, ql = spec.hsl
        ok = (np.abs(hsl[:, 1] - qs) <= tol.max_sat_delta) \
            & (np.abs(hsl[:, 2] - ql) <= tol.max_light_delta)
        skip_hue = (hsl[:, 1] < ACHROMATIC_SATURATION) | (qs < ACHROMATIC_SATURATION)
        d = np.abs(hsl[:, 0] - qh) % 360.0
        ok &= skip_hue | (np.minimum(d, 360.0 - d) <= tol.max_hue_delta)
        return set(self._color_doc[ok].tolist())

    def bm25(self, field: str, terms: list[str], ord_: int) -> float:
        """BM25 contribution of ``terms`` in one field of one document."""
        n = len(self.doc_ids)
        dl = self.field_lengths[field][ord_]
        avg = self.avg_field_length[field] or 1.0
        score = 0.0
        for term in terms:
            term_map = self.postings.get(field, {}).get(term)
            if not term_map:
                continue
            tf = term_map.get(ord_, 0)
            if tf == 0:
                continue
            df = len(term_map)
            idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
            score += idf * (tf * (BM25_K1 + 1.0)) \
                / (tf + BM25_K1 * (1.0 - BM25_B + BM25_B * dl / avg))
        return score


def build_index(records: list[ScreenRecord]) -> Index:
    """Index a record list. Raises DuplicateDocId on colliding doc ids."""
    seen: set[str] = set()
    for rec in records:
        if rec.doc_id in seen:
            raise DuplicateDocId(f"duplicate doc_id {rec.doc_id!r}")
        seen.add(rec.doc_id)

    docs = {rec.doc_id: rec for rec in records}
    doc_ids = sorted(docs)
    ord_of = {doc_id: i for i, doc_id in enumerate(doc_ids)}

    postings: dict[str, dict[str, dict[int, int]]] = {fld: {} for fld in FIELDS}
    palettes: dict[str, list[tuple[float, float, float, float]]] = {}
    for rec in records:
        ord_ = ord_of[rec.doc_id]
        for fld, terms in record_field_terms(rec).items():
            for term, tf in sorted(Counter(terms).items()):
                postings[fld].setdefault(term, {})[ord_] = tf
        palettes[rec.doc_id] = [(e.hsl[0], e.hsl[1], e.hsl[2], e.proportion)
                                for e in rec.palette]

    # Normalize posting maps to ordinal order for reproducible serialization.
    for fld in FIELDS:
        for term, term_map in postings[fld].items():
            postings[fld][term] = dict(sorted(term_map.items()))

    return Index(doc_ids, docs, postings, palettes)


def _eval_node(index: Index, node: QueryAst, tol: ColorTolerance) -> set[int]:
    if isinstance(node, Atom):
        if node.category == "color":
            return index.color_match_ords(parse_color_token(node.value), tol)
        return index.term_match_ords(node.category, analyze(node.value))
    child_sets = [_eval_node(index, c, tol) for c in node.children]
    if isinstance(node, And):
        return set.intersection(*child_sets)
    if isinstance(node, Or):
        return set.union(*child_sets)
    raise TypeError(f"not a query node: {node!r}")


def _predefined_ords(index: Index, predefined: PredefinedFilters) -> set[int]:
    ords = set(index._all_ords)
    for ui_type in predefined.ui_types:
        ords &= index._term_ords("ui", ui_type)
    if predefined.screen_types:
        allowed: set[int] = set()
        for label in predefined.screen_types:
            allowed |= index._term_ords("screen_type", label)
        ords &= allowed
    return ords


def execute(index: Index, ast: QueryAst,
            color_filter: ColorSpec | None = None,
            tolerance: ColorTolerance | None = None,
            predefined: PredefinedFilters | None = None,
            top_k: int = 10) -> list[tuple[str, float]]:
    """Run a query: boolean evaluation, facet/color filtering, BM25 ranking.

    The active tolerance applies to color atoms inside the query and to the
    external color-picker filter. Color matches contribute nothing to the
    score; ties are broken by doc_id ascending. Returns at most ``top_k``
    (doc_id, score) pairs, highest score first.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    tol = tolerance if tolerance is not None else DEFAULT_COLOR_TOLERANCE

    candidates = _eval_node(index, ast, tol)
    if predefined:
        candidates &= _predefined_ords(index, predefined)
    if color_filter is not None:
        candidates &= index.color_match_ords(color_filter, tol)

    scores = dict.fromkeys(candidates, 0.0)
    for atom in iter_atoms(ast):
        if atom.category == "color":
            continue
        terms = analyze(atom.value)
        matched = candidates & index.term_match_ords(atom.category, terms)
        for ord_ in matched:
            scores[ord_] += index.bm25(atom.category, terms, ord_)

    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(index.doc_ids[ord_], score) for ord_, score in ranked[:top_k]]


def _scan_eval(node: QueryAst, term_sets: dict[str, set[str]],
               palette_hsl: list[tuple[float, float, float]],
               tol: ColorTolerance) -> bool:
    if isinstance(node, Atom):
        if node.category == "color":
            spec = parse_color_token(node.value)
            return any(color_matches(hsl, spec, tol) for hsl in palette_hsl)
        return all(t in term_sets[node.category] for t in analyze(node.value))
    if isinstance(node, And):
        return all(_scan_eval(c, term_sets, palette_hsl, tol) for c in node.children)
    if isinstance(node, Or):
        return any(_scan_eval(c, term_sets, palette_hsl, tol) for c in node.children)
    raise TypeError(f"not a query node: {node!r}")


def scan_match(records: list[ScreenRecord], ast: QueryAst,
               color_filter: ColorSpec | None = None,
               tolerance: ColorTolerance | None = None,
               predefined: PredefinedFilters | None = None) -> set[str]:
    """Brute-force oracle: evaluate the query predicate per document.

    Shares only the analyzer and the scalar color matcher with the index
    path; no index structures are consulted.
    """
    tol = tolerance if tolerance is not None else DEFAULT_COLOR_TOLERANCE
    out: set[str] = set()
    for rec in records:
        term_sets = {fld: set(terms) for fld, terms in record_field_terms(rec).items()}
        palette_hsl = [e.hsl for e in rec.palette]
        if not _scan_eval(ast, term_sets, palette_hsl, tol):
            continue
        if predefined:
            if any(t not in term_sets["ui"] for t in predefined.ui_types):
                continue
            if predefined.screen_types and rec.screen_type not in predefined.screen_types:
                continue
        if color_filter is not None:
            if not any(color_matches(hsl, color_filter, tol) for hsl in palette_hsl):
                continue
        out.add(rec.doc_id)
    return out


# --- persistence ---

_POSTINGS_FILE = "postings.json"
_DOCS_FILE = "docs.json"
_COLORS_FILE = "colors.json"
_META_FILE = "meta.json"


def _canonical_json(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False).encode("utf-8")


def save_index(index: Index, path: str | Path) -> None:
    """Write the index as a directory of checksummed JSON files."""
    root = Path(path)
    try:
        root.mkdir(parents=True, exist_ok=True)
        payloads = {
            _POSTINGS_FILE: {
                fld: {term: [[ord_, tf] for ord_, tf in term_map.items()]
                      for term, term_map in index.postings.get(fld, {}).items()}
                for fld in FIELDS
            },
            _DOCS_FILE: {
                "doc_ids": index.doc_ids,
                "records": [index.docs[d].to_dict() for d in index.doc_ids],
            },
            _COLORS_FILE: {
                "palettes": {doc_id: [list(row) for row in rows]
                             for doc_id, rows in index.palettes.items()},
            },
        }
        checksums = {}
        for name, payload in payloads.items():
            blob = _canonical_json(payload)
            (root / name).write_bytes(blob)
            checksums[name] = hashlib.sha256(blob).hexdigest()
        meta = {"format": INDEX_FORMAT, "version": INDEX_VERSION,
                "doc_count": len(index), "checksums": checksums}
        (root / _META_FILE).write_bytes(_canonical_json(meta))
    except OSError as exc:
        raise IndexIoError(f"cannot write index to {root}: {exc}") from exc


def _read_checked(root: Path, name: str, checksums: dict) -> bytes:
    try:
        blob = (root / name).read_bytes()
    except OSError as exc:
        raise IndexIoError(f"cannot read index file {root / name}: {exc}") from exc
    digest = hashlib.sha256(blob).hexdigest()
    if checksums.get(name) != digest:
        raise CorruptIndex(f"checksum mismatch for {name}")
    return blob


def load_index(path: str | Path) -> Index:
    """Load an index directory; checksum or version problems raise CorruptIndex."""
    root = Path(path)
    meta_path = root / _META_FILE
    try:
        meta_blob = meta_path.read_bytes()
    except OSError as exc:
        raise IndexIoError(f"cannot read index metadata {meta_path}: {exc}") from exc
    try:
        meta = json.loads(meta_blob)
    except json.JSONDecodeError as exc:
        raise CorruptIndex(f"unparseable index metadata: {exc}") from exc
    if meta.get("format") != INDEX_FORMAT:
        raise CorruptIndex(f"not a {INDEX_FORMAT} directory: {root}")
    if meta.get("version") != INDEX_VERSION:
        raise CorruptIndex(
            f"unsupported index version {meta.get('version')!r}, expected {INDEX_VERSION}")

    checksums = meta.get("checksums", {})
    try:
        postings_raw = json.loads(_read_checked(root, _POSTINGS_FILE, checksums))
        docs_raw = json.loads(_read_checked(root, _DOCS_FILE, checksums))
        colors_raw = json.loads(_read_checked(root, _COLORS_FILE, checksums))
    except json.JSONDecodeError as exc:
        raise CorruptIndex(f"unparseable index payload: {exc}") from exc

    try:
        doc_ids = list(docs_raw["doc_ids"])
        records = [ScreenRecord.from_dict(d) for d in docs_raw["records"]]
        docs = {rec.doc_id: rec for rec in records}
        if sorted(docs) != doc_ids:
            raise CorruptIndex("document store does not match doc_ids")
        postings = {
            fld: {term: {int(ord_): int(tf) for ord_, tf in pairs}
                  for term, pairs in postings_raw.get(fld, {}).items()}
            for fld in FIELDS
        }
        palettes = {doc_id: [tuple(row) for row in rows]
                    for doc_id, rows in colors_raw["palettes"].items()}
        return Index(doc_ids, docs, postings, palettes)
    except CorruptIndex:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptIndex(f"malformed index payload: {exc}") from exc
