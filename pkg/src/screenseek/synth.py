"""Synthetic corpora and randomized queries.

Backs the ``oracle-check`` command and the randomized equivalence batteries:
records are generated deterministically from a seed, and query trees are
drawn partly from the corpus vocabulary (to hit) and partly from fresh
words (to miss).
"""

from __future__ import annotations

import random

from .colors import WEB_COLORS, make_palette
from .indexing import Index, PredefinedFilters, execute, scan_match
from .model import (AppMeta, Atom, QueryAst, ScreenRecord, classify_screen_type,
                    make_and, make_doc_id, make_or)

WIDGET_CLASSES = [
    "android.widget.Button", "android.widget.TextView", "android.widget.EditText",
    "android.widget.ImageView", "android.widget.CheckBox", "android.widget.RadioButton",
    "android.widget.Switch", "android.widget.SeekBar", "android.widget.ProgressBar",
    "android.widget.Spinner", "android.widget.RatingBar", "android.webkit.WebView",
    "android.widget.ImageButton", "android.widget.ToggleButton",
    "android.widget.VideoView", "android.widget.SearchView",
]

CONTAINER_CLASSES = [
    "android.view.View", "android.widget.FrameLayout", "android.widget.LinearLayout",
    "android.widget.RelativeLayout", "android.widget.GridLayout",
    "android.widget.ScrollView", "android.widget.ListView",
    "androidx.recyclerview.widget.RecyclerView",
]

APP_WORDS = [
    "pizza", "chat", "bank", "music", "photo", "weather", "news", "taxi",
    "fitness", "recipe", "travel", "shop", "mail", "game", "notes", "radio",
]

TEXT_WORDS = [
    "order", "now", "login", "password", "welcome", "settings", "profile",
    "search", "submit", "cancel", "next", "back", "share", "save", "delete",
    "play", "pause", "checkout", "cart", "total", "free", "premium", "map",
    "gallery", "camera", "video", "history", "home", "menu", "help",
]

ACTIVITY_STEMS = [
    "Main", "Login", "Settings", "List", "Map", "Browser", "Media", "Detail",
    "Checkout", "Profile", "Gallery", "Search",
]

_COLOR_NAMES = sorted(WEB_COLORS)


def _random_palette(rng: random.Random):
    n = rng.randint(1, 6)
    pairs = []
    for _ in range(n):
        rgb = (rng.randrange(256), rng.randrange(256), rng.randrange(256))
        pairs.append((rgb, rng.randint(1, 100)))
    return make_palette(pairs)


def make_records(n: int, seed: int = 0,
                 apps: int | None = None) -> list[ScreenRecord]:
    """Deterministically generate ``n`` plausible screen records."""
    rng = random.Random(seed)
    n_apps = apps if apps is not None else max(1, n // 4)
    app_metas = []
    for j in range(n_apps):
        w1, w2 = rng.choice(APP_WORDS), rng.choice(APP_WORDS)
        pkg = f"com.{w1}.{w2}{j}"
        app_metas.append(AppMeta(
            package_id=pkg,
            app_name=f"{w1.capitalize()} {w2.capitalize()}",
            store_url=f"https://play.example.com/store/apps/details?id={pkg}",
            description=f"A {w1} app for {w2} lovers.",
        ))

    records = []
    for i in range(n):
        app = app_metas[i % n_apps]
        classes = [rng.choice(CONTAINER_CLASSES)]
        classes += [rng.choice(WIDGET_CLASSES + CONTAINER_CLASSES)
                    for _ in range(rng.randint(2, 11))]
        texts = tuple(" ".join(rng.choices(TEXT_WORDS, k=rng.randint(1, 3)))
                      for _ in range(rng.randint(0, 5)))
        activity = None
        if rng.random() < 0.8:
            activity = f"{app.package_id}.{rng.choice(ACTIVITY_STEMS)}Activity"
        records.append(ScreenRecord(
            doc_id=make_doc_id(app.package_id, f"s{i:05d}"),
            app=app,
            activity_name=activity or "",
            component_classes=tuple(classes),
            component_texts=texts,
            palette=_random_palette(rng),
            image_path="",
            screen_type=classify_screen_type(activity, texts),
        ))
    return records


def _term_pools(records: list[ScreenRecord]) -> dict[str, list[str]]:
    from .indexing import record_field_terms

    pools: dict[str, set[str]] = {"appname": set(), "text": set(), "ui": set()}
    for rec in records:
        terms = record_field_terms(rec)
        for fld in pools:
            pools[fld].update(terms[fld])
    return {fld: sorted(vals) for fld, vals in pools.items()}


def random_atom(rng: random.Random, pools: dict[str, list[str]]) -> Atom:
    category = rng.choice(("color", "ui", "appname", "text"))
    if category == "color":
        if rng.random() < 0.6:
            value = rng.choice(_COLOR_NAMES)
        else:
            value = f"{rng.randrange(16 ** 6):06x}"
        return Atom("color", value)
    pool = pools.get(category) or TEXT_WORDS
    if rng.random() < 0.8:
        value = rng.choice(pool)
    else:
        value = rng.choice(("zzz", "qqq", "nothing", "missing"))
    if category == "text" and rng.random() < 0.2:
        value = f"{value} {rng.choice(pool)}"
    return Atom(category, value)


def random_query_ast(rng: random.Random, pools: dict[str, list[str]],
                     max_depth: int = 3) -> QueryAst:
    def node(depth: int) -> QueryAst:
        if depth >= max_depth or rng.random() < 0.45:
            return random_atom(rng, pools)
        children = [node(depth + 1) for _ in range(rng.randint(2, 3))]
        return make_and(children) if rng.random() < 0.5 else make_or(children)

    return node(1)


def random_filters(rng: random.Random, pools: dict[str, list[str]]):
    """Optional color filter, tolerance and predefined facets for a battery run."""
    from .colors import parse_color_token, tolerance_from_scalar

    color = None
    tolerance = None
    if rng.random() < 0.3:
        color = parse_color_token(rng.choice(_COLOR_NAMES))
        tolerance = tolerance_from_scalar(round(rng.random(), 3))
    predefined = None
    if rng.random() < 0.25:
        ui_pool = pools.get("ui") or ["button"]
        predefined = PredefinedFilters(
            ui_types=tuple(rng.sample(ui_pool, k=min(len(ui_pool), rng.randint(1, 2)))),
            screen_types=tuple(rng.sample(
                ["login", "settings", "list", "map", "browser", "media", "other"],
                k=rng.randint(0, 2))),
        )
    return color, tolerance, predefined


def oracle_battery(index: Index, records: list[ScreenRecord],
                   seed: int, n_queries: int,
                   with_filters: bool = True) -> list[dict]:
    """Compare indexed retrieval against the brute-force scan for randomized
    queries. Returns one entry per mismatch (empty list = all equivalent)."""
    rng = random.Random(seed)
    pools = _term_pools(records)
    top_k = max(len(index), 1)
    mismatches = []
    for i in range(n_queries):
        ast = random_query_ast(rng, pools)
        color, tolerance, predefined = (
            random_filters(rng, pools) if with_filters else (None, None, None))
        indexed = {doc_id for doc_id, _ in execute(
            index, ast, color_filter=color, tolerance=tolerance,
            predefined=predefined, top_k=top_k)}
        scanned = scan_match(records, ast, color_filter=color,
                             tolerance=tolerance, predefined=predefined)
        if indexed != scanned:
            from .model import canonical_query_string

            mismatches.append({
                "query_index": i,
                "query": canonical_query_string(ast),
                "only_indexed": sorted(indexed - scanned),
                "only_scanned": sorted(scanned - indexed),
            })
    return mismatches
