"""Shared fixtures: a hand-labeled capture corpus on disk plus image/XML
builders used across the suite.

Fixture corpus layout (12 captures):
  com.pizza.go   a1 good, a2 launcher, a3 overlay, a4 container-only, a5 good
  com.chat.talk  b1 good, b2 launcher, b3 container-only, b4 good, b5 good
  com.gone.app   c1, c2 -- manifest has no store metadata, whole app dropped
Expected: kept 5, launcher 2, overlay 1, container_only 2, no_store_meta 2.
"""

import json
from pathlib import Path
from xml.sax.saxutils import quoteattr

import numpy as np
import pytest
from PIL import Image

from screenseek.engine import SearchEngine
from screenseek.favorites import FavoritesStore
from screenseek.indexing import build_index
from screenseek.ingest import build_corpus, load_manifest

XML_HEADER = "<?xml version='1.0' encoding='UTF-8' standalone='yes' ?>"


def xml_node(cls, *children, text="", package="com.example.app",
             bounds="[0,0][1080,1920]", resource_id="", content_desc="",
             clickable=False, enabled=True, focusable=False,
             scrollable=False, checked=False, selected=False):
    flags = {
        "clickable": clickable, "enabled": enabled, "focusable": focusable,
        "scrollable": scrollable, "checked": checked, "selected": selected,
    }
    attrs = [
        f"class={quoteattr(cls)}",
        f"text={quoteattr(text)}",
        f"package={quoteattr(package)}",
        f"resource-id={quoteattr(resource_id)}",
        f"content-desc={quoteattr(content_desc)}",
        f"bounds={quoteattr(bounds)}",
    ]
    attrs += [f'{name}="{str(val).lower()}"' for name, val in flags.items()]
    inner = "".join(children)
    return f"<node {' '.join(attrs)}>{inner}</node>"


def hierarchy_xml(*tops):
    return f'{XML_HEADER}<hierarchy rotation="0">{"".join(tops)}</hierarchy>'.encode()


def solid_image(w, h, rgb):
    arr = np.zeros((h, w, 3), dtype=np.uint8)
    arr[:, :] = rgb
    return arr


def framed_image(w, h, frame_rgb, center_rgb, frac=0.15):
    arr = solid_image(w, h, frame_rgb)
    bw, bh = int(w * frac), int(h * frac)
    arr[bh:h - bh, bw:w - bw] = center_rgb
    return arr


def banded_image(w, h, top_rgb, body_rgb, top_rows):
    arr = solid_image(w, h, body_rgb)
    arr[:top_rows, :] = top_rgb
    return arr


def write_png(path: Path, arr: np.ndarray):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


def _write_app(root: Path, package_id: str, app_block, captures):
    """captures: list of (capture_id, image_array, xml_bytes, extra_entry)."""
    app_dir = root / package_id
    entries = []
    for capture_id, image, xml, extra in captures:
        write_png(app_dir / "screens" / f"{capture_id}.png", image)
        (app_dir / "screens" / f"{capture_id}.xml").write_bytes(xml)
        entry = {"capture_id": capture_id}
        entry.update(extra)
        entries.append(entry)
    manifest = {"captures": entries}
    if app_block is not None:
        manifest["app"] = app_block
    (app_dir / "manifest.json").write_text(json.dumps(manifest, indent=1))


FIXTURE_LABELS = {
    "kept": ["com.pizza.go/cap-a1", "com.pizza.go/cap-a5",
             "com.chat.talk/cap-b1", "com.chat.talk/cap-b4",
             "com.chat.talk/cap-b5"],
    "launcher": ["com.pizza.go/cap-a2", "com.chat.talk/cap-b2"],
    "overlay": ["com.pizza.go/cap-a3"],
    "container_only": ["com.pizza.go/cap-a4", "com.chat.talk/cap-b3"],
    "no_store_meta": ["com.gone.app/cap-c1", "com.gone.app/cap-c2"],
}

RED = (255, 0, 0)
WHITE = (255, 255, 255)
BLUE = (33, 150, 243)
GREEN = (76, 175, 80)
LIGHT_GRAY = (224, 224, 224)
BLACK = (0, 0, 0)


def build_fixture_corpus(root: Path) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    pizza = "com.pizza.go"
    chat = "com.chat.talk"
    gone = "com.gone.app"

    _write_app(root, pizza, {
        "app_name": "Pizza Go",
        "store_url": f"https://play.example.com/store/apps/details?id={pizza}",
        "description": "Order pizza fast.",
    }, [
        ("cap-a1",
         banded_image(100, 100, WHITE, RED, top_rows=10),
         hierarchy_xml(xml_node(
             "android.widget.LinearLayout",
             xml_node("android.widget.TextView", text="Order now", package=pizza,
                      bounds="[0,0][1080,200]"),
             xml_node("android.widget.EditText", text="", package=pizza,
                      bounds="[0,200][1080,400]", focusable=True),
             xml_node("android.widget.Button", text="Order", package=pizza,
                      bounds="[0,400][1080,600]", clickable=True),
             package=pizza)),
         {"activity_name": f"{pizza}.OrderActivity", "visit_count": 5}),
        ("cap-a2",
         solid_image(100, 100, WHITE),
         hierarchy_xml(xml_node("android.widget.FrameLayout",
                                package="com.android.launcher3")),
         {"visit_count": 1}),
        ("cap-a3",
         framed_image(100, 100, BLACK, WHITE, frac=0.15),
         hierarchy_xml(xml_node(
             "android.widget.FrameLayout",
             xml_node("android.widget.Button", text="Got it", package=pizza,
                      clickable=True),
             package=pizza)),
         {"visit_count": 2}),
        ("cap-a4",
         solid_image(100, 100, WHITE),
         hierarchy_xml(xml_node(
             "android.widget.LinearLayout",
             xml_node("android.widget.FrameLayout", package=pizza),
             xml_node("android.view.View", package=pizza),
             package=pizza)),
         {"visit_count": 3}),
        ("cap-a5",
         banded_image(100, 100, WHITE, BLUE, top_rows=20),
         hierarchy_xml(xml_node(
             "android.widget.ScrollView",
             xml_node("android.widget.TextView", text="Settings", package=pizza),
             xml_node("android.widget.CheckBox", text="Notifications",
                      package=pizza, checked=True),
             package=pizza, scrollable=True)),
         {"activity_name": f"{pizza}.SettingsActivity", "visit_count": 4}),
    ])

    _write_app(root, chat, {
        "app_name": "Chat Talk",
        "store_url": f"https://play.example.com/store/apps/details?id={chat}",
        "description": "Talk with friends.",
    }, [
        ("cap-b1",
         banded_image(100, 100, WHITE, GREEN, top_rows=30),
         hierarchy_xml(xml_node(
             "android.widget.LinearLayout",
             xml_node("android.widget.TextView", text="Welcome", package=chat),
             xml_node("android.widget.EditText", text="Login", package=chat),
             xml_node("android.widget.EditText", text="Password", package=chat),
             xml_node("android.widget.Button", text="Sign in", package=chat,
                      clickable=True),
             package=chat)),
         {"activity_name": f"{chat}.LoginActivity", "visit_count": 7}),
        ("cap-b2",
         solid_image(100, 100, WHITE),
         hierarchy_xml(xml_node(
             "android.widget.FrameLayout",
             xml_node("android.view.View", package="com.android.launcher"),
             package=chat)),
         {"visit_count": 1}),
        ("cap-b3",
         solid_image(100, 100, WHITE),
         hierarchy_xml(xml_node(
             "android.view.View",
             xml_node("android.widget.GridLayout", package=chat),
             package=chat)),
         {"visit_count": 2}),
        ("cap-b4",
         solid_image(100, 100, WHITE, ),
         hierarchy_xml(xml_node(
             "android.widget.LinearLayout",
             xml_node("androidx.recyclerview.widget.RecyclerView",
                      xml_node("android.widget.TextView", text="Alice", package=chat),
                      xml_node("android.widget.TextView", text="Bob", package=chat),
                      package=chat, scrollable=True),
             package=chat)),
         {"activity_name": f"{chat}.ChatListActivity", "visit_count": 6}),
        ("cap-b5",
         solid_image(100, 100, LIGHT_GRAY),
         hierarchy_xml(xml_node(
             "android.widget.FrameLayout",
             xml_node("android.widget.VideoView", package=chat),
             xml_node("android.widget.Button", text="Play", package=chat,
                      clickable=True),
             package=chat)),
         {"activity_name": f"{chat}.MediaPlayerActivity", "visit_count": 2}),
    ])

    _write_app(root, gone, None, [
        ("cap-c1",
         solid_image(100, 100, WHITE),
         hierarchy_xml(xml_node(
             "android.widget.LinearLayout",
             xml_node("android.widget.Button", text="Hello", package=gone),
             package=gone)),
         {"visit_count": 1}),
        ("cap-c2",
         solid_image(100, 100, WHITE),
         hierarchy_xml(xml_node(
             "android.widget.LinearLayout",
             xml_node("android.widget.TextView", text="Bye", package=gone),
             package=gone)),
         {"visit_count": 1}),
    ])
    return root


@pytest.fixture(scope="session")
def fixture_corpus_dir(tmp_path_factory) -> Path:
    return build_fixture_corpus(tmp_path_factory.mktemp("corpus"))


@pytest.fixture(scope="session")
def fixture_corpus(fixture_corpus_dir):
    """(records, report) from running the full pipeline on the fixture corpus."""
    manifest = load_manifest(fixture_corpus_dir)
    return build_corpus(manifest)


@pytest.fixture(scope="session")
def fixture_index(fixture_corpus):
    records, _ = fixture_corpus
    return build_index(records)


@pytest.fixture()
def fixture_engine(fixture_index, tmp_path):
    return SearchEngine(fixture_index, FavoritesStore(tmp_path / "favorites.json"))
