"""Image assets written next to the index: full-size copies and thumbnails,
laid out as ``<index>/{full,thumbs}/<package_id>/<capture_id>.png`` so the
service can serve them statically by doc_id.
"""

from __future__ import annotations

import shutil
from pathlib import Path

from .images import load_image, save_thumbnail
from .model import ScreenRecord

THUMBNAIL_MAX_DIM = 360


def write_image_assets(records: list[ScreenRecord], index_dir: str | Path,
                       thumb_max: int = THUMBNAIL_MAX_DIM) -> int:
    """Copy each record's screenshot and write its thumbnail. Returns the
    number of records with assets; records whose source image is missing are
    skipped (the index itself stays usable without images)."""
    index_dir = Path(index_dir)
    written = 0
    for rec in records:
        src = Path(rec.image_path) if rec.image_path else None
        if src is None or not src.is_file():
            continue
        full_dest = index_dir / "full" / f"{rec.doc_id}.png"
        full_dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(src, full_dest)
        save_thumbnail(load_image(src), index_dir / "thumbs" / f"{rec.doc_id}.png",
                       max_dim=thumb_max)
        written += 1
    return written
