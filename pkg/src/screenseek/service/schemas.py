"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ErrorBody(BaseModel):
    code: str
    message: str
    offset: int | None = None


class ErrorResponse(BaseModel):
    error: ErrorBody


class SearchHitModel(BaseModel):
    doc_id: str
    score: float
    app_name: str
    thumbnail: str
    snippet: str


class SearchResponse(BaseModel):
    query: str
    canonical_query: str
    total: int
    page: int
    page_size: int
    results: list[SearchHitModel]


class AppModel(BaseModel):
    package_id: str
    app_name: str
    store_url: str
    description: str | None = None


class PaletteEntryModel(BaseModel):
    rgb: list[int]
    hex: str
    hsl: list[float]
    proportion: float


class SimilarScreenModel(BaseModel):
    doc_id: str
    similarity: float


class ScreenDetailResponse(BaseModel):
    doc_id: str
    app: AppModel
    activity_name: str
    screen_type: str
    palette: list[PaletteEntryModel]
    component_classes: list[str]
    component_texts: list[str]
    image: str
    thumbnail: str
    similar: list[SimilarScreenModel]
    same_app: list[str]


class SimilarResponse(BaseModel):
    doc_id: str
    similar: list[SimilarScreenModel]


class SuggestionModel(BaseModel):
    value: str
    category: str


class SuggestResponse(BaseModel):
    prefix: str
    suggestions: list[SuggestionModel]


class FavoriteModel(BaseModel):
    doc_id: str
    added_at: float


class FavoritesResponse(BaseModel):
    favorites: list[FavoriteModel]


class StatusResponse(BaseModel):
    ok: bool = Field(default=True)
