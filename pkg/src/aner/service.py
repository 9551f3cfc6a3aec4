"""HTTP front end: the annotation API consumed by the browser UI.

One POST endpoint runs a selected pipeline and returns spans decorated
with a Wikipedia link and a per-class display color. Pipelines are
built once at application construction (so a bad model path fails the
boot, not a request) and shared read-only across requests.

Wire schema, pinned here:
  POST /api/ner   {"text": str, "model": str}
                  -> {"normalized": str,
                      "entities": [{"surface", "class", "start", "end",
                                    "url", "color"}],
                      "model": str, "ms": float}
  GET /api/models -> ["aner", ...]
  GET /healthz    -> {"status": "ok"}

Error statuses on POST /api/ner:
  400 body is not decodable text     404 unknown model id
  413 text over the configured limit 422 body fails the schema
  500 opaque "annotation failed" (internals never leak to callers)
"""

from __future__ import annotations

import colorsys
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping
from urllib.parse import quote, unquote

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .errors import LinkError, ServiceConfigError
from .pipeline import NerPipeline, NerResult, PipelineConfig, build_pipeline
from .tags import LabelInventory

DEFAULT_WIKIPEDIA_BASE = "https://ar.wikipedia.org"

# Successive hues a golden angle apart spread any number of classes
# almost uniformly around the color wheel.
_GOLDEN_ANGLE = 137.50776405003785


def wikipedia_link(surface: str, base: str = DEFAULT_WIKIPEDIA_BASE) -> str:
    """Article URL for an entity surface: spaces become underscores,
    everything is percent-encoded. Decoding the path segment and
    mapping underscores back to spaces recovers the surface (for
    surfaces that do not themselves contain underscores)."""
    if not surface or not surface.strip():
        raise LinkError("cannot link an empty surface")
    return f"{base.rstrip('/')}/wiki/{quote(surface.replace(' ', '_'), safe='')}"


def surface_from_link(url: str) -> str:
    """Inverse of ``wikipedia_link`` for roundtrip checking."""
    return unquote(url.rsplit("/wiki/", 1)[-1]).replace("_", " ")


def class_color(entity_class: str, inventory: LabelInventory) -> str:
    """Deterministic display color (``#rrggbb``) for an entity class.

    Hue advances by the golden angle per class index, and lightness
    cycles through four levels so neighbors on the wheel stay apart
    after 8-bit quantization; the same class always gets the same
    color, and distinct classes get distinct colors.
    """
    try:
        index = inventory.classes.index(entity_class)
    except ValueError:
        raise LinkError(f"class {entity_class!r} is not in the inventory") from None
    hue = (index * _GOLDEN_ANGLE) % 360.0 / 360.0
    lightness = 0.38 + 0.08 * (index % 4)
    r, g, b = colorsys.hls_to_rgb(hue, lightness, 0.72)
    return f"#{round(r * 255):02x}{round(g * 255):02x}{round(b * 255):02x}"


def decorate_result(
    result: NerResult, inventory: LabelInventory, wikipedia_base: str
) -> dict:
    """Shape one annotation result into the wire schema."""
    return {
        "normalized": result.normalized_text,
        "entities": [
            {
                "surface": span.surface,
                "class": span.entity_class,
                "start": span.char_start,
                "end": span.char_end,
                "url": wikipedia_link(span.surface, wikipedia_base),
                "color": class_color(span.entity_class, inventory),
            }
            for span in result.spans
        ],
        "model": result.model_id,
        "ms": result.elapsed_ms,
    }


def _default_models() -> dict[str, PipelineConfig]:
    return {
        "aner": PipelineConfig(classifier="gazetteer", model_id="aner"),
        "mock": PipelineConfig(classifier="mock", model_id="mock"),
    }


@dataclass(frozen=True)
class ServiceConfig:
    """Serving settings: which pipelines exist and basic limits."""

    models: Mapping[str, PipelineConfig] = field(default_factory=_default_models)
    host: str = "127.0.0.1"
    port: int = 8000
    request_char_limit: int = 10_000
    wikipedia_base: str = DEFAULT_WIKIPEDIA_BASE

    def __post_init__(self):
        if not self.models:
            raise ServiceConfigError("at least one model must be configured")
        if self.request_char_limit <= 0:
            raise ServiceConfigError("request_char_limit must be positive")
        object.__setattr__(self, "models", MappingProxyType(dict(self.models)))


class NerRequest(BaseModel):
    text: str
    model: str


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    """Build the application, constructing every configured pipeline."""
    config = config or ServiceConfig()
    pipelines: dict[str, NerPipeline] = {
        model_id: build_pipeline(model_config)
        for model_id, model_config in config.models.items()
    }

    app = FastAPI(title="aner", docs_url=None, redoc_url=None)

    @app.get("/healthz")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/models")
    def models() -> list[str]:
        return list(pipelines)

    @app.post("/api/ner")
    def ner(request: NerRequest) -> dict:
        if len(request.text) > config.request_char_limit:
            raise HTTPException(
                status_code=413,
                detail=f"text exceeds the {config.request_char_limit} character limit",
            )
        pipeline = pipelines.get(request.model)
        if pipeline is None:
            raise HTTPException(
                status_code=404,
                detail=f"unknown model {request.model!r}; see /api/models",
            )
        try:
            result = pipeline.annotate(request.text)
            return decorate_result(result, pipeline.inventory, config.wikipedia_base)
        except HTTPException:
            raise
        except Exception:
            # Deliberate catch-all boundary: nothing from the pipeline
            # internals may leak to callers.
            raise HTTPException(status_code=500, detail="annotation failed") from None

    return app


def serve(config: ServiceConfig | None = None):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    config = config or ServiceConfig()
    uvicorn.run(create_app(config), host=config.host, port=config.port)
