import itertools
import json

import numpy as np
import pytest

from conftest import (FIXTURE_LABELS, framed_image, hierarchy_xml, solid_image,
                      xml_node)
from screenseek.errors import ImageTooSmall, ManifestError, ResolverFailure
from screenseek.hierarchy import parse_hierarchy
from screenseek.ingest import (DEFAULT_CONTAINER_CLASSES, CorpusStoreResolver,
                               DictResolver, IngestConfig, OverlayParams,
                               build_corpus, detect_overlay, fingerprint_screen,
                               is_container_only, is_launcher_screen,
                               load_manifest, resolve_store_metadata,
                               select_top_screens)
from screenseek.model import AppMeta, GuiNode, ScreenCapture

APP = AppMeta("com.example.app", "Example")


def capture(hierarchy, capture_id="c0", visit_count=1, image=None, app=APP):
    return ScreenCapture(app=app, capture_id=capture_id, image=image,
                         hierarchy=hierarchy, visit_count=visit_count)


def node(cls, *children, package="com.example.app", text=""):
    return GuiNode(class_name=cls, package=package, text=text,
                   children=tuple(children))


# --- launcher filter ---

def test_launcher_detected_by_package_substring():
    cap = capture(node("android.widget.FrameLayout",
                       package="com.android.launcher3"))
    assert is_launcher_screen(cap)


def test_launcher_negative():
    cap = capture(node("android.widget.FrameLayout", package="com.example.pizza"))
    assert not is_launcher_screen(cap)


def test_launcher_found_in_any_node():
    tree = node("android.widget.FrameLayout",
                node("android.view.View", package="com.android.launcher"),
                package="com.example.app")
    assert is_launcher_screen(capture(tree))


# --- overlay filter ---

def _border_histogram_share(img: np.ndarray, frac: float, bins: int):
    """Independent pixel-count oracle for the dominant border bin."""
    h, w = img.shape[:2]
    bh, bw = int(h * frac), int(w * frac)
    mask = np.zeros((h, w), dtype=bool)
    mask[:bh, :] = True
    mask[h - bh:, :] = True
    mask[:, :bw] = True
    mask[:, w - bw:] = True
    border = img[mask].reshape(-1, 3)
    width = 256 // bins
    counts: dict[tuple, int] = {}
    for px in border:
        key = tuple(int(c) // width for c in px)
        counts[key] = counts.get(key, 0) + 1
    dominant, count = max(counts.items(), key=lambda kv: kv[1])
    return dominant, count / border.shape[0]


def test_overlay_black_frame_detected():
    img = framed_image(100, 100, (0, 0, 0), (200, 180, 160), frac=0.15)
    params = OverlayParams()
    _, share = _border_histogram_share(img, params.border_fraction,
                                       params.bins_per_channel)
    assert share == 1.0  # the 10% frame sits inside the 15% black band
    assert detect_overlay(img, params) is True


def test_overlay_white_image_not_dark():
    img = solid_image(100, 100, (255, 255, 255))
    assert detect_overlay(img) is False  # dominant but lightness 1.0 > 0.35


def test_overlay_noise_border_has_no_dominant_bin():
    rng = np.random.default_rng(42)
    img = rng.integers(0, 256, size=(100, 100, 3), dtype=np.uint8)
    params = OverlayParams()
    _, share = _border_histogram_share(img, params.border_fraction,
                                       params.bins_per_channel)
    assert share < params.dominance_threshold
    assert detect_overlay(img, params) is False


def test_overlay_dark_but_not_dominant():
    # half the border black, half white: no bin reaches 85%
    img = solid_image(100, 100, (0, 0, 0))
    img[:, 50:] = (255, 255, 255)
    assert detect_overlay(img) is False


def test_overlay_tiny_image_rejected():
    with pytest.raises(ImageTooSmall):
        detect_overlay(solid_image(4, 4, (0, 0, 0)))


# --- container-only filter ---

def test_container_only_true_for_pure_containers():
    tree = node("android.view.View",
                node("android.widget.GridLayout"),
                node("android.widget.LinearLayout"))
    assert is_container_only(tree)


def test_container_only_false_with_a_button():
    tree = node("android.widget.LinearLayout",
                node("android.widget.Button"))
    assert not is_container_only(tree)


def test_container_only_empty_set_matches_nothing():
    tree = node("android.view.View")
    assert not is_container_only(tree, frozenset())


def test_container_default_set():
    assert "RecyclerView" in DEFAULT_CONTAINER_CLASSES
    assert "Button" not in DEFAULT_CONTAINER_CLASSES


# --- fingerprints ---

def test_fingerprint_deterministic():
    t1 = node("a.X", node("a.Y", text="hi"))
    t2 = node("a.X", node("a.Y", text="hi"))
    assert fingerprint_screen(t1) == fingerprint_screen(t2)


def test_fingerprint_sensitive_to_text():
    t1 = node("a.X", node("a.Y", text="hi"))
    t2 = node("a.X", node("a.Y", text="ho"))
    assert fingerprint_screen(t1) != fingerprint_screen(t2)


def test_fingerprint_sensitive_to_sibling_order():
    t1 = node("a.X", node("a.Y"), node("a.Z"))
    t2 = node("a.X", node("a.Z"), node("a.Y"))
    assert fingerprint_screen(t1) != fingerprint_screen(t2)


def test_fingerprint_ignores_bounds():
    from screenseek.model import BoundingBox
    t1 = GuiNode(class_name="a.X", bounds=BoundingBox(0, 0, 10, 10))
    t2 = GuiNode(class_name="a.X", bounds=BoundingBox(5, 5, 90, 90))
    assert fingerprint_screen(t1) == fingerprint_screen(t2)


# --- top-screen selection ---

def _distinct_tree(i):
    return node("a.Root", node("a.Leaf", text=f"screen {i}"))


def test_select_fewer_groups_than_k():
    caps = [capture(_distinct_tree(i % 3), capture_id=f"c{i}") for i in range(10)]
    assert len(select_top_screens(caps, k=6)) == 3


def test_select_top_six_of_eight_by_frequency():
    counts = {0: 9, 1: 3, 2: 7, 3: 1, 4: 5, 5: 2, 6: 8, 7: 4}
    caps = [capture(_distinct_tree(i), capture_id=f"c{i}", visit_count=v)
            for i, v in counts.items()]
    picked = [c.capture_id for c in select_top_screens(caps, k=6)]
    # frozen expectation: sort counts by hand -> 9,8,7,5,4,3
    assert picked == ["c0", "c6", "c2", "c4", "c7", "c1"]


def test_select_group_frequency_sums_visits():
    caps = [
        capture(_distinct_tree(0), capture_id="a", visit_count=2),
        capture(_distinct_tree(0), capture_id="b", visit_count=3),
        capture(_distinct_tree(1), capture_id="c", visit_count=4),
    ]
    picked = select_top_screens(caps, k=1)
    # group 0 frequency 5 beats group 1 frequency 4; rep is highest visit "b"
    assert [c.capture_id for c in picked] == ["b"]


def test_select_tie_breaks_by_capture_id():
    caps = [
        capture(_distinct_tree(0), capture_id="z", visit_count=2),
        capture(_distinct_tree(1), capture_id="a", visit_count=2),
    ]
    picked = select_top_screens(caps, k=1)
    assert [c.capture_id for c in picked] == ["a"]


def test_select_rejects_mixed_apps():
    other = AppMeta("com.other.app", "Other")
    caps = [capture(_distinct_tree(0)), capture(_distinct_tree(1), app=other)]
    with pytest.raises(ValueError):
        select_top_screens(caps)


# --- store metadata resolution ---

def test_resolver_present(tmp_path):
    app_dir = tmp_path / "com.a.b"
    app_dir.mkdir()
    (app_dir / "manifest.json").write_text(json.dumps(
        {"app": {"app_name": "AB", "store_url": "https://x"}, "captures": []}))
    meta = resolve_store_metadata("com.a.b", CorpusStoreResolver(tmp_path))
    assert meta == AppMeta("com.a.b", "AB", "https://x")


def test_resolver_absent(tmp_path):
    (tmp_path / "com.a.b").mkdir()
    resolver = CorpusStoreResolver(tmp_path)
    assert resolve_store_metadata("com.a.b", resolver) is None
    # manifest without an app block is also "absent"
    (tmp_path / "com.a.b" / "manifest.json").write_text('{"captures": []}')
    assert resolve_store_metadata("com.a.b", resolver) is None


def test_resolver_corrupt(tmp_path):
    app_dir = tmp_path / "com.a.b"
    app_dir.mkdir()
    (app_dir / "manifest.json").write_text("{not json")
    with pytest.raises(ResolverFailure):
        CorpusStoreResolver(tmp_path).resolve("com.a.b")
    (app_dir / "manifest.json").write_text('{"app": {"app_name": ""}}')
    with pytest.raises(ResolverFailure):
        CorpusStoreResolver(tmp_path).resolve("com.a.b")
    (app_dir / "manifest.json").write_text('{"app": "garbage"}')
    with pytest.raises(ResolverFailure):
        CorpusStoreResolver(tmp_path).resolve("com.a.b")


def test_dict_resolver():
    resolver = DictResolver({"com.a.b": APP})
    assert resolver.resolve("com.a.b") is APP
    assert resolver.resolve("com.missing") is None


# --- manifest loading ---

def test_load_manifest_fixture(fixture_corpus_dir):
    manifest = load_manifest(fixture_corpus_dir)
    assert [a.package_id for a in manifest.apps] == \
        ["com.chat.talk", "com.gone.app", "com.pizza.go"]
    assert manifest.capture_count == 12


def test_load_manifest_rejects_duplicates(tmp_path):
    from conftest import write_png
    app = tmp_path / "com.x.y"
    write_png(app / "screens" / "c1.png", solid_image(10, 10, (1, 2, 3)))
    (app / "screens" / "c1.xml").write_bytes(
        hierarchy_xml(xml_node("a.B", bounds="[0,0][9,9]")))
    (app / "manifest.json").write_text(json.dumps({
        "captures": [{"capture_id": "c1"}, {"capture_id": "c1"}]}))
    with pytest.raises(ManifestError):
        load_manifest(tmp_path)


def test_load_manifest_rejects_missing_files(tmp_path):
    app = tmp_path / "com.x.y"
    app.mkdir(parents=True)
    (app / "manifest.json").write_text(json.dumps({
        "captures": [{"capture_id": "c1"}]}))
    with pytest.raises(ManifestError):
        load_manifest(tmp_path)


# --- the full pipeline ---

def test_build_corpus_fixture_counts(fixture_corpus):
    records, report = fixture_corpus
    assert report.kept == 5
    assert report.launcher == 2
    assert report.overlay == 1
    assert report.container_only == 2
    assert report.no_store_meta == 2
    assert report.duplicate == 0
    assert report.error == 0
    assert report.dropped + report.kept == 12
    assert sorted(r.doc_id for r in records) == sorted(FIXTURE_LABELS["kept"])


def test_build_corpus_records_are_ordered_and_complete(fixture_corpus):
    records, _ = fixture_corpus
    ids = [r.doc_id for r in records]
    assert ids == sorted(ids)
    pizza = next(r for r in records if r.doc_id == "com.pizza.go/cap-a1")
    assert pizza.app.app_name == "Pizza Go"
    assert "android.widget.EditText" in pizza.component_classes
    assert "Order now" in pizza.component_texts
    assert "" not in pizza.component_texts
    assert pizza.screen_type == "other"
    settings = next(r for r in records if r.doc_id == "com.pizza.go/cap-a5")
    assert settings.screen_type == "settings"
    login = next(r for r in records if r.doc_id == "com.chat.talk/cap-b1")
    assert login.screen_type == "login"


def test_build_corpus_red_screen_palette(fixture_corpus):
    records, _ = fixture_corpus
    pizza = next(r for r in records if r.doc_id == "com.pizza.go/cap-a1")
    top = pizza.palette.entries[0]
    assert top.rgb == (255, 0, 0)
    assert top.proportion == pytest.approx(0.9, abs=1e-6)


def test_build_corpus_empty_manifest(tmp_path):
    (tmp_path / "empty").mkdir()
    records, report = build_corpus(load_manifest(tmp_path / "empty"))
    assert records == []
    assert report.total == 0


def test_build_corpus_collapses_duplicates(tmp_path):
    from conftest import build_fixture_corpus, write_png
    root = tmp_path / "corpus"
    app_dir = root / "com.dup.app"
    xml = hierarchy_xml(xml_node(
        "android.widget.LinearLayout",
        xml_node("android.widget.Button", text="Same"), package="com.dup.app"))
    entries = []
    for i in range(4):
        cid = f"c{i}"
        write_png(app_dir / "screens" / f"{cid}.png",
                  solid_image(50, 50, (200, 200, 200)))
        (app_dir / "screens" / f"{cid}.xml").write_bytes(xml)
        entries.append({"capture_id": cid, "visit_count": i + 1})
    (app_dir / "manifest.json").write_text(json.dumps({
        "app": {"app_name": "Dup", "store_url": "https://x"},
        "captures": entries}))
    records, report = build_corpus(load_manifest(root))
    assert len(records) == 1
    assert report.duplicate == 3
    assert report.kept == 1
    # representative is the highest-visit capture
    assert records[0].doc_id == "com.dup.app/c3"


def test_build_corpus_counts_bad_captures_as_errors(tmp_path, monkeypatch):
    from conftest import write_png
    root = tmp_path / "corpus"
    app_dir = root / "com.bad.app"
    write_png(app_dir / "screens" / "ok.png", solid_image(50, 50, (250, 250, 250)))
    (app_dir / "screens" / "ok.xml").write_bytes(hierarchy_xml(xml_node(
        "android.widget.LinearLayout",
        xml_node("android.widget.Button", text="Go"))))
    write_png(app_dir / "screens" / "bad.png", solid_image(50, 50, (250, 250, 250)))
    (app_dir / "screens" / "bad.xml").write_bytes(b"<hierarchy><node class=")
    (app_dir / "manifest.json").write_text(json.dumps({
        "app": {"app_name": "Bad", "store_url": "https://x"},
        "captures": [{"capture_id": "ok"}, {"capture_id": "bad"}]}))
    records, report = build_corpus(load_manifest(root))
    assert report.error == 1
    assert report.kept == 1
    assert report.total == 2
    assert [r.doc_id for r in records] == ["com.bad.app/ok"]


def test_build_corpus_deterministic(fixture_corpus_dir, fixture_corpus):
    records1, report1 = fixture_corpus
    records2, report2 = build_corpus(load_manifest(fixture_corpus_dir))
    blob1 = json.dumps([r.to_dict() for r in records1], sort_keys=True)
    blob2 = json.dumps([r.to_dict() for r in records2], sort_keys=True)
    assert blob1 == blob2
    assert report1.as_dict() == report2.as_dict()


def test_filter_predicates_order_insensitive(fixture_corpus_dir):
    """The kept set is the same regardless of predicate evaluation order."""
    manifest = load_manifest(fixture_corpus_dir)
    cfg = IngestConfig()
    resolver = CorpusStoreResolver(manifest.root)
    from screenseek.images import load_image

    predicates = {
        "launcher": lambda cap: is_launcher_screen(cap),
        "overlay": lambda cap: detect_overlay(cap.image, cfg.overlay),
        "container": lambda cap: is_container_only(cap.hierarchy,
                                                   cfg.container_classes),
    }
    results = set()
    for order in itertools.permutations(predicates):
        kept = []
        for app_mf in manifest.apps:
            meta = resolver.resolve(app_mf.package_id)
            if meta is None:
                continue
            for entry in app_mf.captures:
                cap = ScreenCapture(
                    app=meta, capture_id=entry.capture_id,
                    image=load_image(entry.image_path),
                    hierarchy=parse_hierarchy(entry.xml_path.read_bytes()),
                    visit_count=entry.visit_count)
                if not any(predicates[name](cap) for name in order):
                    kept.append(f"{app_mf.package_id}/{entry.capture_id}")
        results.add(tuple(sorted(kept)))
    assert len(results) == 1
    assert set(results.pop()) == set(FIXTURE_LABELS["kept"])


# --- image decoding contract ---

def test_load_image_composites_alpha_over_white(tmp_path):
    from PIL import Image
    import numpy as np
    from screenseek.images import load_image

    rgba = np.zeros((10, 10, 4), dtype=np.uint8)
    rgba[:, :] = (200, 0, 0, 0)  # fully transparent red
    rgba[:5, :] = (0, 0, 200, 255)  # opaque blue
    path = tmp_path / "a.png"
    Image.fromarray(rgba, mode="RGBA").save(path)
    arr = load_image(path)
    assert arr.shape == (10, 10, 3)
    assert tuple(arr[0, 0]) == (0, 0, 200)
    assert tuple(arr[9, 9]) == (255, 255, 255)  # transparency became white


def test_load_image_rejects_16_bit(tmp_path):
    from PIL import Image
    from screenseek.errors import UnsupportedImage
    from screenseek.images import load_image

    deep = Image.new("I;16", (8, 8))
    path = tmp_path / "deep.png"
    deep.save(path)
    with pytest.raises(UnsupportedImage):
        load_image(path)
