"""Parser for UI-automation hierarchy dumps (``<hierarchy>`` of ``<node>``s)."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from .errors import MalformedBounds, MalformedXml
from .model import BoundingBox, GuiNode

_BOUNDS_RE = re.compile(r"\[(\d+),(\d+)\]\[(\d+),(\d+)\]")

_FLAG_ATTRS = ("clickable", "enabled", "focusable", "scrollable", "checked", "selected")


def parse_bounds(raw: str) -> BoundingBox:
    """Parse a ``[x1,y1][x2,y2]`` bounds attribute."""
    m = _BOUNDS_RE.fullmatch(raw.strip())
    if m is None:
        raise MalformedBounds(f"bounds not of the form [int,int][int,int]: {raw!r}")
    left, top, right, bottom = (int(v) for v in m.groups())
    if left > right or top > bottom:
        raise MalformedBounds(f"inverted bounds: {raw!r}")
    return BoundingBox(left, top, right, bottom)


def _convert(elem: ET.Element) -> GuiNode:
    class_name = elem.get("class", "")
    if not class_name:
        raise MalformedXml("node element missing 'class' attribute")
    raw_bounds = elem.get("bounds")
    if raw_bounds is None:
        raise MalformedBounds("node element missing 'bounds' attribute")
    children = tuple(_convert(child) for child in elem if child.tag == "node")
    flags = {attr: elem.get(attr, "false") == "true" for attr in _FLAG_ATTRS}
    return GuiNode(
        class_name=class_name,
        text=elem.get("text", ""),
        content_desc=elem.get("content-desc", ""),
        resource_id=elem.get("resource-id", ""),
        package=elem.get("package", ""),
        bounds=parse_bounds(raw_bounds),
        children=children,
        **flags,
    )


def parse_hierarchy(xml_bytes: bytes) -> GuiNode:
    """Parse a hierarchy dump into its root GuiNode.

    Accepts either a ``<hierarchy>`` document or a bare ``<node>`` root. When
    the hierarchy element wraps several top-level nodes, a synthetic "ROOT"
    node is introduced to hold them.
    """
    try:
        root = ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        raise MalformedXml(f"unparseable hierarchy dump: {exc}") from exc

    if root.tag == "node":
        return _convert(root)
    if root.tag != "hierarchy":
        raise MalformedXml(f"expected <hierarchy> or <node> root, got <{root.tag}>")

    tops = [_convert(child) for child in root if child.tag == "node"]
    if not tops:
        raise MalformedXml("hierarchy contains no node elements")
    if len(tops) == 1:
        return tops[0]
    box = BoundingBox(
        min(n.bounds.left for n in tops),
        min(n.bounds.top for n in tops),
        max(n.bounds.right for n in tops),
        max(n.bounds.bottom for n in tops),
    )
    return GuiNode(class_name="ROOT", bounds=box, children=tuple(tops))
