"""Request validation and dispatch for the adapter wire protocol.

Requests and responses are single JSON documents::

    {"op": "transcribe", "audio": "<path>", "language": "en",
     "segments": [{"start": s, "end": e}, ...]?, "condition_on_previous": false}
        -> {"texts": ["...", ...]}

    {"op": "separate", "audio": "<path>", "model": "mdx|mdx_extra", "out": "<path>"}
        -> {"vocals": "<path>"}

With segments present the response carries exactly one text per segment, in
segment order; without them the transcriber's native long-form segmentation
decides the count.
"""

from __future__ import annotations

SEPARATION_MODELS = ("mdx", "mdx_extra")


class BadRequest(Exception):
    """The request document violates the wire protocol."""


def _require(doc: dict, field: str, kind: type) -> object:
    if field not in doc:
        raise BadRequest(f"missing field {field!r}")
    value = doc[field]
    if not isinstance(value, kind):
        raise BadRequest(f"field {field!r} must be {kind.__name__}, got {type(value).__name__}")
    return value


def parse_segments(doc: dict) -> list[tuple[float, float]] | None:
    if "segments" not in doc or doc["segments"] is None:
        return None
    raw = doc["segments"]
    if not isinstance(raw, list):
        raise BadRequest("'segments' must be a list")
    segments = []
    for item in raw:
        try:
            start, end = float(item["start"]), float(item["end"])
        except (TypeError, KeyError, ValueError) as exc:
            raise BadRequest(f"malformed segment {item!r}") from exc
        if not 0 <= start < end:
            raise BadRequest(f"segment [{start}, {end}) is not a valid time span")
        segments.append((start, end))
    return segments


def handle(request: dict, transcriber_factory, separator_factory) -> dict:
    """Validate a request and produce the response document.

    Backends arrive as zero-argument factories so that a protocol-invalid
    request never pays (or needs) model loading.
    """
    if not isinstance(request, dict):
        raise BadRequest("request must be a JSON object")
    op = _require(request, "op", str)

    if op == "transcribe":
        audio = _require(request, "audio", str)
        language = request.get("language")
        if language is not None and not isinstance(language, str):
            raise BadRequest("'language' must be a string")
        segments = parse_segments(request)
        condition = bool(request.get("condition_on_previous", False))
        texts = transcriber_factory().transcribe(audio, language, segments, condition)
        if segments is not None and len(texts) != len(segments):
            raise BadRequest(
                f"backend produced {len(texts)} texts for {len(segments)} segments"
            )
        return {"texts": list(texts)}

    if op == "separate":
        audio = _require(request, "audio", str)
        out = _require(request, "out", str)
        model = _require(request, "model", str)
        if model not in SEPARATION_MODELS:
            raise BadRequest(
                f"unknown separation model {model!r}; expected one of {SEPARATION_MODELS}"
            )
        vocals = separator_factory().separate(audio, model, out)
        return {"vocals": str(vocals)}

    raise BadRequest(f"unknown op {op!r}")
