"""Core data model: screens, apps, GUI hierarchies, palettes and query trees.

Everything here is an immutable value object; instances can be shared freely
across threads once constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ATOM_CATEGORIES = ("color", "ui", "appname", "text")

SCREEN_TYPES = ("login", "settings", "list", "map", "browser", "media", "other")

# Keyword table driving screen-type labeling. Matched as lowercase substrings
# of the activity name and component texts; first label in SCREEN_TYPES order
# with a hit wins.
DEFAULT_SCREEN_TYPE_KEYWORDS: dict[str, tuple[str, ...]] = {
    "login": ("login", "log in", "signin", "sign in", "signup", "sign up",
              "register", "password", "authenticate"),
    "settings": ("settings", "setting", "preference", "preferences", "config",
                 "options"),
    "list": ("list", "feed", "inbox", "history"),
    "map": ("map", "maps", "navigation", "location"),
    "browser": ("browser", "webview", "web page", "website"),
    "media": ("media", "video", "player", "music", "audio", "photo", "gallery",
              "camera"),
}


@dataclass(frozen=True)
class BoundingBox:
    """Pixel-space rectangle from a hierarchy dump's ``bounds`` attribute."""

    left: int
    top: int
    right: int
    bottom: int

    def __post_init__(self):
        if min(self.left, self.top, self.right, self.bottom) < 0:
            raise ValueError(f"negative bounds: {self}")
        if self.left > self.right or self.top > self.bottom:
            raise ValueError(f"inverted bounds: {self}")

    @property
    def width(self) -> int:
        return self.right - self.left

    @property
    def height(self) -> int:
        return self.bottom - self.top


@dataclass(frozen=True)
class GuiNode:
    """One node of a screen's GUI hierarchy.

    Child bounds are not required to be contained in the parent's: real
    dumps violate containment routinely, so nothing here asserts it.
    """

    class_name: str
    text: str = ""
    content_desc: str = ""
    resource_id: str = ""
    package: str = ""
    bounds: BoundingBox = field(default_factory=lambda: BoundingBox(0, 0, 0, 0))
    clickable: bool = False
    enabled: bool = True
    focusable: bool = False
    scrollable: bool = False
    checked: bool = False
    selected: bool = False
    children: tuple[GuiNode, ...] = ()

    def __post_init__(self):
        if not self.class_name:
            raise ValueError("GuiNode.class_name must be non-empty")

    @property
    def short_class_name(self) -> str:
        """Final segment of the class path, e.g. ``android.widget.Button`` -> ``Button``."""
        return self.class_name.rsplit(".", 1)[-1]


def iter_nodes(root: GuiNode):
    """Yield nodes in pre-order (root first, children in document order)."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


@dataclass(frozen=True)
class ColorEntry:
    """One palette entry: a color in both RGB and HSL plus its pixel share."""

    rgb: tuple[int, int, int]
    hsl: tuple[float, float, float]
    proportion: float

    def __post_init__(self):
        if any(not (0 <= c <= 255) for c in self.rgb):
            raise ValueError(f"rgb out of range: {self.rgb}")
        if not (0.0 <= self.proportion <= 1.0):
            raise ValueError(f"proportion out of range: {self.proportion}")

    @property
    def hex(self) -> str:
        return "%02x%02x%02x" % self.rgb


PALETTE_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Palette:
    """Up to six (color, proportion) entries, sorted by proportion descending."""

    entries: tuple[ColorEntry, ...]

    def __post_init__(self):
        if not 1 <= len(self.entries) <= 6:
            raise ValueError(f"palette must have 1..6 entries, got {len(self.entries)}")
        props = [e.proportion for e in self.entries]
        if any(a < b for a, b in zip(props, props[1:])):
            raise ValueError("palette entries not sorted by proportion descending")
        total = sum(props)
        if abs(total - 1.0) > PALETTE_SUM_TOLERANCE:
            raise ValueError(f"palette proportions sum to {total}, expected 1")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class AppMeta:
    """App identity and store metadata."""

    package_id: str
    app_name: str
    store_url: str = ""
    description: str | None = None

    def __post_init__(self):
        if not self.package_id:
            raise ValueError("AppMeta.package_id must be non-empty")
        if not self.app_name:
            raise ValueError("AppMeta.app_name must be non-empty")


@dataclass(frozen=True, eq=False)
class ScreenCapture:
    """A raw capture (screenshot + parsed hierarchy) before filtering.

    ``image`` is an HxWx3 uint8 array; equality is identity because arrays
    don't compare element-wise sensibly here.
    """

    app: AppMeta
    capture_id: str
    image: object  # numpy ndarray, kept loose to avoid importing numpy here
    hierarchy: GuiNode
    activity_name: str | None = None
    visit_count: int = 1
    image_path: str | None = None

    def __post_init__(self):
        if self.visit_count < 1:
            raise ValueError(f"visit_count must be >= 1, got {self.visit_count}")


def make_doc_id(package_id: str, capture_id: str) -> str:
    """Stable document id, constant across re-index runs."""
    return f"{package_id}/{capture_id}"


@dataclass(frozen=True)
class ScreenRecord:
    """A filtered, indexable screen document."""

    doc_id: str
    app: AppMeta
    activity_name: str
    component_classes: tuple[str, ...]
    component_texts: tuple[str, ...]
    palette: Palette
    image_path: str
    screen_type: str

    def __post_init__(self):
        if not self.component_classes:
            raise ValueError("ScreenRecord.component_classes must be non-empty")
        if self.screen_type not in SCREEN_TYPES:
            raise ValueError(f"unknown screen_type: {self.screen_type}")

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "app": {
                "package_id": self.app.package_id,
                "app_name": self.app.app_name,
                "store_url": self.app.store_url,
                "description": self.app.description,
            },
            "activity_name": self.activity_name,
            "component_classes": list(self.component_classes),
            "component_texts": list(self.component_texts),
            "palette": [
                {"rgb": list(e.rgb), "hsl": list(e.hsl), "proportion": e.proportion}
                for e in self.palette
            ],
            "image_path": self.image_path,
            "screen_type": self.screen_type,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScreenRecord":
        app = d["app"]
        return cls(
            doc_id=d["doc_id"],
            app=AppMeta(
                package_id=app["package_id"],
                app_name=app["app_name"],
                store_url=app.get("store_url", ""),
                description=app.get("description"),
            ),
            activity_name=d["activity_name"],
            component_classes=tuple(d["component_classes"]),
            component_texts=tuple(d["component_texts"]),
            palette=Palette(tuple(
                ColorEntry(tuple(e["rgb"]), tuple(e["hsl"]), e["proportion"])
                for e in d["palette"]
            )),
            image_path=d["image_path"],
            screen_type=d["screen_type"],
        )


def classify_screen_type(activity_name: str | None,
                         component_texts,
                         keywords: dict[str, tuple[str, ...]] | None = None) -> str:
    """Assign a screen-type label by keyword lookup over activity name and texts."""
    table = keywords if keywords is not None else DEFAULT_SCREEN_TYPE_KEYWORDS
    haystack = " ".join([activity_name or "", *component_texts]).lower()
    for label in SCREEN_TYPES:
        for kw in table.get(label, ()):
            if kw in haystack:
                return label
    return "other"


# --- query trees ---

@dataclass(frozen=True)
class Atom:
    """A typed query leaf: ``category:value`` with a lowercase value."""

    category: str
    value: str

    def __post_init__(self):
        if self.category not in ATOM_CATEGORIES:
            raise ValueError(f"unknown atom category: {self.category}")
        if self.value != self.value.lower():
            raise ValueError(f"atom value not lowercase: {self.value!r}")


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And requires at least 2 children")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or requires at least 2 children")


QueryAst = Atom | And | Or


def make_and(children) -> QueryAst:
    """Build an And node, flattening nested Ands; a single child passes through."""
    flat = []
    for c in children:
        flat.extend(c.children if isinstance(c, And) else [c])
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def make_or(children) -> QueryAst:
    """Build an Or node, flattening nested Ors; a single child passes through."""
    flat = []
    for c in children:
        flat.extend(c.children if isinstance(c, Or) else [c])
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def _atom_text(atom: Atom) -> str:
    value = atom.value
    if any(ch.isspace() for ch in value):
        value = f'"{value}"'
    return f"{atom.category}:{value}"


def canonical_query_string(ast: QueryAst) -> str:
    """Deterministic textual rendering of a query tree.

    Atoms render as ``category:value``; And/Or render infix. Parentheses are
    emitted exactly where needed to survive re-parsing: around an Or nested
    under an And and around an And nested under an Or.
    """
    if isinstance(ast, Atom):
        return _atom_text(ast)
    if isinstance(ast, And):
        parts = []
        for child in ast.children:
            s = canonical_query_string(child)
            if isinstance(child, Or):
                s = f"({s})"
            parts.append(s)
        return " AND ".join(parts)
    if isinstance(ast, Or):
        parts = []
        for child in ast.children:
            s = canonical_query_string(child)
            if isinstance(child, And):
                s = f"({s})"
            parts.append(s)
        return " OR ".join(parts)
    raise TypeError(f"not a query node: {ast!r}")


def iter_atoms(ast: QueryAst):
    """Yield every Atom in the tree, left to right, with repetition."""
    if isinstance(ast, Atom):
        yield ast
    else:
        for child in ast.children:
            yield from iter_atoms(child)
