"""Corpus ingestion: manifest loading, quality filters, frequent-screen
selection, and ScreenRecord emission.

Disk layout per app::

    corpus/<package_id>/manifest.json            app metadata + capture list
    corpus/<package_id>/screens/<capture_id>.png
    corpus/<package_id>/screens/<capture_id>.xml
    corpus/<package_id>/screens/<capture_id>.meta.json   optional

The filters mirror three corpus-quality problems: home-screen captures from
failed launches, dark tutorial overlays, and screens holding nothing but
layout containers. Apps whose store metadata cannot be resolved are dropped
entirely.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .colors import DEFAULT_PALETTE_CONFIG, PaletteConfig, extract_palette, rgb_to_hsl
from .errors import ImageTooSmall, ManifestError, ResolverFailure, ScreenSeekError
from .hierarchy import parse_hierarchy
from .images import load_image
from .model import (AppMeta, GuiNode, ScreenCapture, ScreenRecord,
                    classify_screen_type, iter_nodes, make_doc_id)

LAUNCHER_PACKAGE_MARKER = "com.android.launcher"

DEFAULT_CONTAINER_CLASSES = frozenset({
    "View", "ViewGroup", "FrameLayout", "LinearLayout", "RelativeLayout",
    "GridLayout", "TableLayout", "TableRow", "ScrollView",
    "HorizontalScrollView", "ListView", "RecyclerView", "ViewPager",
})


@dataclass(frozen=True)
class OverlayParams:
    border_fraction: float = 0.1
    bins_per_channel: int = 16
    dominance_threshold: float = 0.85
    min_darkness: float = 0.35  # max lightness of the dominant border color


@dataclass(frozen=True)
class IngestConfig:
    top_screens: int = 6
    palette_size: int = 6
    container_classes: frozenset[str] = DEFAULT_CONTAINER_CLASSES
    overlay: OverlayParams = field(default_factory=OverlayParams)
    palette: PaletteConfig = field(default_factory=lambda: DEFAULT_PALETTE_CONFIG)
    screen_type_keywords: dict | None = None


@dataclass
class FilterReport:
    """Per-reason counts of dropped captures plus the kept total."""

    launcher: int = 0
    overlay: int = 0
    container_only: int = 0
    no_store_meta: int = 0
    duplicate: int = 0
    error: int = 0
    kept: int = 0

    @property
    def dropped(self) -> int:
        return (self.launcher + self.overlay + self.container_only
                + self.no_store_meta + self.duplicate + self.error)

    @property
    def total(self) -> int:
        return self.dropped + self.kept

    def as_dict(self) -> dict:
        return {
            "launcher": self.launcher,
            "overlay": self.overlay,
            "container_only": self.container_only,
            "no_store_meta": self.no_store_meta,
            "duplicate": self.duplicate,
            "error": self.error,
            "kept": self.kept,
        }


@dataclass(frozen=True)
class CaptureEntry:
    capture_id: str
    image_path: Path
    xml_path: Path
    activity_name: str | None = None
    visit_count: int = 1


@dataclass(frozen=True)
class AppManifest:
    package_id: str
    root: Path
    app: dict | None  # raw store-metadata payload; validated by the resolver
    captures: tuple[CaptureEntry, ...]


@dataclass(frozen=True)
class CorpusManifest:
    root: Path
    apps: tuple[AppManifest, ...]

    @property
    def capture_count(self) -> int:
        return sum(len(a.captures) for a in self.apps)


def load_manifest(corpus_dir: str | Path) -> CorpusManifest:
    """Scan a corpus directory into a CorpusManifest.

    Subdirectories without a manifest.json are ignored. Duplicate capture ids
    or missing referenced files are manifest errors.
    """
    root = Path(corpus_dir)
    if not root.is_dir():
        raise ManifestError(f"corpus directory not found: {root}")
    apps = []
    for app_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        mf_path = app_dir / "manifest.json"
        if not mf_path.is_file():
            continue
        try:
            data = json.loads(mf_path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ManifestError(f"unreadable manifest {mf_path}: {exc}") from exc
        if not isinstance(data, dict) or not isinstance(data.get("captures", []), list):
            raise ManifestError(f"malformed manifest {mf_path}")
        package_id = data.get("package_id") or app_dir.name

        captures = []
        seen: set[str] = set()
        for entry in data.get("captures", []):
            cid = entry.get("capture_id") if isinstance(entry, dict) else None
            if not cid:
                raise ManifestError(f"capture entry without capture_id in {mf_path}")
            if cid in seen:
                raise ManifestError(f"duplicate capture_id {cid!r} in {mf_path}")
            seen.add(cid)
            image = app_dir / (entry.get("image") or f"screens/{cid}.png")
            xml = app_dir / (entry.get("xml") or f"screens/{cid}.xml")
            activity = entry.get("activity_name")
            visit = entry.get("visit_count")
            meta_path = app_dir / "screens" / f"{cid}.meta.json"
            if meta_path.is_file():
                try:
                    extra = json.loads(meta_path.read_text("utf-8"))
                except (OSError, json.JSONDecodeError) as exc:
                    raise ManifestError(f"unreadable capture meta {meta_path}: {exc}") from exc
                activity = extra.get("activity_name", activity)
                visit = extra.get("visit_count", visit)
            if not image.is_file():
                raise ManifestError(f"missing image file {image}")
            if not xml.is_file():
                raise ManifestError(f"missing hierarchy dump {xml}")
            captures.append(CaptureEntry(
                capture_id=cid, image_path=image, xml_path=xml,
                activity_name=activity,
                visit_count=1 if visit is None else int(visit)))
        apps.append(AppManifest(package_id=package_id, root=app_dir,
                                app=data.get("app"), captures=tuple(captures)))
    return CorpusManifest(root=root, apps=tuple(apps))


# --- store metadata resolution ---

class StoreMetadataResolver(Protocol):
    def resolve(self, package_id: str) -> AppMeta | None:
        """AppMeta for the package, or None when the app has no store entry."""
        ...


def _app_meta_from_raw(raw, package_id: str) -> AppMeta | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ResolverFailure(f"store metadata for {package_id} is not an object")
    app_name = raw.get("app_name")
    store_url = raw.get("store_url", "")
    if not isinstance(app_name, str) or not isinstance(store_url, str):
        raise ResolverFailure(f"malformed store metadata for {package_id}")
    try:
        return AppMeta(
            package_id=raw.get("package_id") or package_id,
            app_name=app_name,
            store_url=store_url,
            description=raw.get("description"),
        )
    except ValueError as exc:
        raise ResolverFailure(f"malformed store metadata for {package_id}: {exc}") from exc


class CorpusStoreResolver:
    """Reads store metadata from the app's manifest.json inside the corpus."""

    def __init__(self, corpus_root: str | Path):
        self.root = Path(corpus_root)

    def resolve(self, package_id: str) -> AppMeta | None:
        path = self.root / package_id / "manifest.json"
        if not path.is_file():
            return None
        try:
            data = json.loads(path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ResolverFailure(f"unreadable store metadata {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ResolverFailure(f"malformed store metadata {path}")
        return _app_meta_from_raw(data.get("app"), package_id)


class DictResolver:
    """In-memory resolver for tests and third-party corpora."""

    def __init__(self, mapping: dict[str, AppMeta]):
        self.mapping = mapping

    def resolve(self, package_id: str) -> AppMeta | None:
        return self.mapping.get(package_id)


def resolve_store_metadata(package_id: str,
                           resolver: StoreMetadataResolver) -> AppMeta | None:
    """Look up store metadata; None means the whole app must be dropped."""
    return resolver.resolve(package_id)


# --- capture filters ---

def is_launcher_screen(capture: ScreenCapture) -> bool:
    """True when any hierarchy node's package names the Android launcher."""
    return any(LAUNCHER_PACKAGE_MARKER in node.package
               for node in iter_nodes(capture.hierarchy))


def detect_overlay(image, params: OverlayParams = OverlayParams()) -> bool:
    """Detect a dark scrim overlay from the screenshot's border colors.

    A quantized color histogram is taken over the outer border frame; the
    screen counts as overlaid when a single bin dominates and that bin's
    center color is dark.
    """
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an HxWx3 RGB array, got shape {arr.shape}")
    h, w = arr.shape[:2]
    bh = int(h * params.border_fraction)
    bw = int(w * params.border_fraction)

    parts = [
        arr[:bh, :],                 # top band
        arr[max(h - bh, bh):, :],    # bottom band
        arr[bh:h - bh, :bw],         # left band between the horizontal bands
        arr[bh:h - bh, max(w - bw, bw):],
    ]
    border = np.concatenate([p.reshape(-1, 3) for p in parts], axis=0)
    if border.shape[0] == 0:
        raise ImageTooSmall(
            f"border frame is empty for a {w}x{h} image at fraction {params.border_fraction}")

    bins = params.bins_per_channel
    width = 256 // bins
    q = np.minimum(border.astype(np.int64) // width, bins - 1)
    keys = (q[:, 0] * bins + q[:, 1]) * bins + q[:, 2]
    counts = np.bincount(keys, minlength=bins ** 3)
    dominant = int(np.argmax(counts))
    share = counts[dominant] / border.shape[0]
    if share < params.dominance_threshold:
        return False

    center = tuple(((dominant // bins ** (2 - i)) % bins) * width + width // 2
                   for i in range(3))
    _, _, lightness = rgb_to_hsl(center)
    return lightness <= params.min_darkness


def is_container_only(root: GuiNode, container_classes=DEFAULT_CONTAINER_CLASSES) -> bool:
    """True when every node is a pure layout container (by final class segment)."""
    return all(node.short_class_name in container_classes
               for node in iter_nodes(root))


def fingerprint_screen(root: GuiNode) -> str:
    """Hash of the pre-order (class, text) sequence; equal hash = same screen."""
    pairs = [[node.class_name, node.text] for node in iter_nodes(root)]
    payload = json.dumps(pairs, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def select_top_screens(captures: list[ScreenCapture], k: int = 6) -> list[ScreenCapture]:
    """Pick one representative for each of the k most frequently seen screens.

    Captures are grouped by fingerprint; a group's frequency is the sum of
    its visit counts. The group representative is the capture with the
    highest visit count (ties by capture_id); group ties are broken by the
    representative's capture_id for determinism.
    """
    if not captures:
        return []
    packages = {c.app.package_id for c in captures}
    if len(packages) > 1:
        raise ValueError(f"captures span multiple apps: {sorted(packages)}")

    groups: dict[str, list[ScreenCapture]] = {}
    for cap in captures:
        groups.setdefault(fingerprint_screen(cap.hierarchy), []).append(cap)

    ranked = []
    for caps in groups.values():
        freq = sum(c.visit_count for c in caps)
        rep = min(caps, key=lambda c: (-c.visit_count, c.capture_id))
        ranked.append((freq, rep))
    ranked.sort(key=lambda fr: (-fr[0], fr[1].capture_id))
    return [rep for _, rep in ranked[:k]]


# --- pipeline ---

def _emit_record(cap: ScreenCapture, cfg: IngestConfig) -> ScreenRecord:
    nodes = list(iter_nodes(cap.hierarchy))
    classes = tuple(n.class_name for n in nodes)
    texts = tuple(n.text for n in nodes if n.text)
    palette = extract_palette(cap.image, cfg.palette_size, cfg.palette)
    return ScreenRecord(
        doc_id=make_doc_id(cap.app.package_id, cap.capture_id),
        app=cap.app,
        activity_name=cap.activity_name or "",
        component_classes=classes,
        component_texts=texts,
        palette=palette,
        image_path=cap.image_path or "",
        screen_type=classify_screen_type(cap.activity_name, texts,
                                         cfg.screen_type_keywords),
    )


def build_corpus(manifest: CorpusManifest,
                 config: IngestConfig | None = None,
                 resolver: StoreMetadataResolver | None = None,
                 ) -> tuple[list[ScreenRecord], FilterReport]:
    """Run the full ingestion pipeline over a corpus.

    Per app: resolve store metadata (no metadata drops the app), then per
    capture parse + filter (launcher, overlay, container-only), then keep the
    top-k most frequent screens and emit records. A bad capture never aborts
    the corpus; it is counted as an error drop.
    """
    cfg = config or IngestConfig()
    resolver = resolver or CorpusStoreResolver(manifest.root)
    report = FilterReport()
    records: list[ScreenRecord] = []

    for app_mf in manifest.apps:
        n_caps = len(app_mf.captures)
        try:
            meta = resolve_store_metadata(app_mf.package_id, resolver)
        except ResolverFailure:
            report.error += n_caps
            continue
        if meta is None:
            report.no_store_meta += n_caps
            continue

        survivors: list[ScreenCapture] = []
        for entry in sorted(app_mf.captures, key=lambda e: e.capture_id):
            try:
                capture = ScreenCapture(
                    app=meta,
                    capture_id=entry.capture_id,
                    image=load_image(entry.image_path),
                    hierarchy=parse_hierarchy(entry.xml_path.read_bytes()),
                    activity_name=entry.activity_name,
                    visit_count=entry.visit_count,
                    image_path=str(entry.image_path),
                )
                if is_launcher_screen(capture):
                    report.launcher += 1
                elif detect_overlay(capture.image, cfg.overlay):
                    report.overlay += 1
                elif is_container_only(capture.hierarchy, cfg.container_classes):
                    report.container_only += 1
                else:
                    survivors.append(capture)
            except (ScreenSeekError, OSError, ValueError):
                report.error += 1

        selected = select_top_screens(survivors, cfg.top_screens)
        report.duplicate += len(survivors) - len(selected)
        for cap in selected:
            records.append(_emit_record(cap, cfg))
            report.kept += 1

    records.sort(key=lambda r: (r.app.package_id, r.doc_id))
    return records, report
