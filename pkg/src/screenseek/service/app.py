"""HTTP API over the search engine.

Every user-facing failure comes back as a structured 4xx JSON payload of the
form ``{"error": {"code", "message", "offset"?}}``; malformed input never
produces a 5xx.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..engine import SearchEngine, full_url, open_engine, thumb_url
from ..errors import QueryError, ScreenSeekError, UnknownColor, UnknownDoc
from . import schemas

_BAD_REQUEST_ERRORS = (QueryError, UnknownColor)


def _error_payload(code: str, message: str, offset: int | None = None) -> dict:
    body: dict = {"code": code, "message": message}
    if offset is not None:
        body["offset"] = offset
    return {"error": body}


def create_app(index_dir: str | Path,
               favorites_path: str | Path | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    """Load an index directory and build the service around it."""
    engine = open_engine(index_dir, favorites_path)
    return build_app(engine, assets_dir=Path(index_dir), ui_dir=ui_dir)


def build_app(engine: SearchEngine,
              assets_dir: Path | None = None,
              ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="screenseek", docs_url="/api/docs", openapi_url="/api/openapi.json")

    @app.exception_handler(ScreenSeekError)
    async def handle_domain_error(request: Request, exc: ScreenSeekError):
        if isinstance(exc, UnknownDoc):
            status = 404
        elif isinstance(exc, _BAD_REQUEST_ERRORS):
            status = 400
        else:
            status = 500
        offset = getattr(exc, "offset", None)
        return JSONResponse(status_code=status,
                            content=_error_payload(exc.code, str(exc), offset))

    @app.exception_handler(ValueError)
    async def handle_value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content=_error_payload("InvalidParameter", str(exc)))

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(p) for p in first.get("loc", ()))
        msg = first.get("msg", "invalid request")
        return JSONResponse(status_code=400,
                            content=_error_payload("InvalidParameter", f"{loc}: {msg}"))

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_error(request: Request, exc: StarletteHTTPException):
        code = "NotFound" if exc.status_code == 404 else "HttpError"
        return JSONResponse(status_code=exc.status_code,
                            content=_error_payload(code, str(exc.detail)))

    def _split_multi(values: list[str] | None) -> list[str]:
        out: list[str] = []
        for v in values or []:
            out.extend(part for part in v.split(",") if part.strip())
        return out

    @app.get("/api/search", response_model=schemas.SearchResponse)
    def search(q: str,
               color: str | None = None,
               tol: float | None = Query(default=None, ge=0.0, le=1.0),
               ui: list[str] | None = Query(default=None),
               screen_type: list[str] | None = Query(default=None),
               page: int = Query(default=0, ge=0),
               page_size: int = Query(default=10, ge=1, le=50)):
        page_result = engine.search(
            q, color=color, tolerance=tol,
            ui_types=_split_multi(ui), screen_types=_split_multi(screen_type),
            page=page, page_size=page_size)
        return schemas.SearchResponse(
            query=page_result.query,
            canonical_query=page_result.canonical_query,
            total=page_result.total,
            page=page_result.page,
            page_size=page_result.page_size,
            results=[schemas.SearchHitModel(**hit.__dict__) for hit in page_result.results],
        )

    @app.get("/api/suggest", response_model=schemas.SuggestResponse)
    def suggest(prefix: str = "", limit: int = Query(default=10, ge=1, le=100)):
        items = engine.suggest(prefix, limit)
        return schemas.SuggestResponse(
            prefix=prefix,
            suggestions=[schemas.SuggestionModel(value=v, category=c) for v, c in items],
        )

    @app.get("/api/favorites", response_model=schemas.FavoritesResponse)
    def favorites_list():
        return schemas.FavoritesResponse(favorites=[
            schemas.FavoriteModel(doc_id=d, added_at=t)
            for d, t in engine.favorites_list()
        ])

    @app.post("/api/favorites/{doc_id:path}", response_model=schemas.StatusResponse)
    def favorites_add(doc_id: str):
        engine.favorites_add(doc_id)
        return schemas.StatusResponse()

    @app.delete("/api/favorites/{doc_id:path}", response_model=schemas.StatusResponse)
    def favorites_remove(doc_id: str):
        engine.favorites_remove(doc_id)
        return schemas.StatusResponse()

    @app.get("/api/screens/{doc_id:path}/similar", response_model=schemas.SimilarResponse)
    def similar(doc_id: str, k: int = Query(default=5, ge=1, le=50)):
        pairs = engine.similar_screens(doc_id, k)
        return schemas.SimilarResponse(doc_id=doc_id, similar=[
            schemas.SimilarScreenModel(doc_id=d, similarity=s) for d, s in pairs
        ])

    @app.get("/api/screens/{doc_id:path}", response_model=schemas.ScreenDetailResponse)
    def screen_detail(doc_id: str):
        detail = engine.screen_detail(doc_id)
        rec = detail.record
        return schemas.ScreenDetailResponse(
            doc_id=rec.doc_id,
            app=schemas.AppModel(package_id=rec.app.package_id,
                                 app_name=rec.app.app_name,
                                 store_url=rec.app.store_url,
                                 description=rec.app.description),
            activity_name=rec.activity_name,
            screen_type=rec.screen_type,
            palette=[schemas.PaletteEntryModel(rgb=list(e.rgb), hex=e.hex,
                                               hsl=list(e.hsl),
                                               proportion=e.proportion)
                     for e in rec.palette],
            component_classes=list(rec.component_classes),
            component_texts=list(rec.component_texts),
            image=full_url(rec.doc_id),
            thumbnail=thumb_url(rec.doc_id),
            similar=[schemas.SimilarScreenModel(doc_id=d, similarity=s)
                     for d, s in detail.similar],
            same_app=list(detail.same_app),
        )

    def _serve_asset(kind: str, doc_path: str) -> FileResponse:
        if assets_dir is None:
            raise UnknownDoc("image assets are not available for this index")
        if not doc_path.endswith(".png"):
            raise UnknownDoc(f"no such asset: {doc_path}")
        base = (assets_dir / kind).resolve()
        target = (base / doc_path).resolve()
        if not target.is_relative_to(base) or not target.is_file():
            raise UnknownDoc(f"no such asset: {doc_path}")
        return FileResponse(target, media_type="image/png")

    @app.get("/static/thumbs/{doc_path:path}")
    def thumb(doc_path: str):
        return _serve_asset("thumbs", doc_path)

    @app.get("/static/full/{doc_path:path}")
    def full(doc_path: str):
        return _serve_asset("full", doc_path)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
