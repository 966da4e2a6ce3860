"""screenseek: a search engine over corpora of mobile-app screen captures.

Screens are ingested from screenshot + GUI-hierarchy dumps, quality-filtered,
reduced to their most frequently visited variants, and indexed across app
name, component text, component type, screen type and color palette. Queries
use a small language of typed tokens with AND/OR composition.
"""

from .colors import (ColorSpec, ColorTolerance, color_matches, extract_palette,
                     hsl_to_rgb, parse_color_token, rgb_to_hsl,
                     tolerance_from_scalar)
from .engine import SearchEngine, open_engine
from .errors import ScreenSeekError
from .hierarchy import parse_hierarchy
from .indexing import (Index, PredefinedFilters, analyze, build_index, execute,
                       load_index, save_index, scan_match)
from .ingest import (FilterReport, IngestConfig, build_corpus, load_manifest,
                     select_top_screens)
from .model import (AppMeta, Atom, And, BoundingBox, ColorEntry, GuiNode, Or,
                    Palette, QueryAst, ScreenCapture, ScreenRecord,
                    canonical_query_string)
from .querylang import Vocabulary, parse, suggest

__version__ = "0.1.0"

__all__ = [
    "AppMeta", "And", "Atom", "BoundingBox", "ColorEntry", "ColorSpec",
    "ColorTolerance", "FilterReport", "GuiNode", "Index", "IngestConfig",
    "Or", "Palette", "PredefinedFilters", "QueryAst", "ScreenCapture",
    "ScreenRecord", "ScreenSeekError", "SearchEngine", "Vocabulary",
    "analyze", "build_corpus", "build_index", "canonical_query_string",
    "color_matches", "execute", "extract_palette", "hsl_to_rgb", "load_index",
    "load_manifest", "open_engine", "parse", "parse_color_token",
    "parse_hierarchy", "rgb_to_hsl", "save_index", "scan_match",
    "select_top_screens", "suggest", "tolerance_from_scalar",
]
