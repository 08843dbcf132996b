"""HTTP facade over one feature model.

Endpoints (JSON in, JSON out, CORS open so a browser UI served from
anywhere can talk to it):

    GET  /api/model                       the model
    GET  /api/count?version=&selected=&deselected=
                                          products compatible with the
                                          given partial decisions
    POST /api/validate  {selected, deselected?, version?}
    POST /api/propagate {selected, deselected?, version?}
    POST /api/derive    {selected, productName, version?}

Undecided features count as deselected for /api/validate and
/api/derive, so a client only has to send its positive picks plus any
explicit rejections. Bodies that are not JSON objects give 400; unknown
feature names and failed derivations give 422.

The server holds one immutable model and shares it across threads; no
handler mutates anything, so there is no locking.
"""

from __future__ import annotations

import json
import mimetypes
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from . import analysis, derive
from .errors import InvalidConfigurationError, SplforgeError, UnknownFeatureError
from .model import Configuration, FeatureModel

DEFAULT_PORT = 8437
PORT_ENV_VAR = "SPLFORGE_PORT"

_MAX_BODY = 1 << 20


class _ApiError(Exception):
    def __init__(self, status: int, message: str, **extra) -> None:
        super().__init__(message)
        self.status = status
        self.payload = {"error": message, **extra}


def model_to_json(model: FeatureModel) -> dict:
    features = []
    for name in sorted(model.features):
        feature = model.features[name]
        group = model.group_of(name)
        features.append({
            "id": name,
            "name": name,
            "parent": feature.parent,
            "variability": feature.variability.value,
            "version": feature.version,
            "module": feature.asset.module_id if feature.asset else None,
            "layers": [l.value for l in feature.asset.layers] if feature.asset else None,
            "group": group.name if group else None,
        })
    groups = [
        {
            "name": group.name,
            "kind": group.kind.value,
            "parent": group.parent,
            "members": list(group.members),
        }
        for group in sorted(model.groups, key=lambda g: g.name)
    ]
    constraints = [
        {"kind": c.kind.value, "source": c.source, "target": c.target}
        for c in sorted(model.constraints, key=lambda c: c.sort_key())
    ]
    return {
        "name": model.name,
        "root": model.root,
        "maxVersion": model.max_version,
        "features": features,
        "groups": groups,
        "constraints": constraints,
    }


def manifest_to_json(manifest: derive.ProductManifest) -> dict:
    return {
        "productName": manifest.product_name,
        "modelName": manifest.model_name,
        "version": manifest.version,
        "features": list(manifest.features),
        "modules": [
            {"id": module, "layers": [l.code for l in layers]}
            for module, layers in manifest.modules
        ],
        "languages": list(manifest.languages),
        "cycles": manifest.cycle_count,
    }


def _violations_json(violations) -> list[dict]:
    return [
        {"kind": v.kind, "features": list(v.features), "message": v.message}
        for v in violations
    ]


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    # -- plumbing ---------------------------------------------------------

    def log_message(self, format: str, *args) -> None:
        pass  # tests and scripted runs need quiet, deterministic output

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self._cors()
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_file(self, path: Path) -> None:
        body = path.read_bytes()
        content_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        self.send_response(200)
        self._cors()
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length > _MAX_BODY:
            raise _ApiError(413, "request body too large")
        raw = self.rfile.read(length) if length else b""
        try:
            parsed = json.loads(raw.decode("utf-8")) if raw else None
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise _ApiError(400, "request body is not valid JSON") from None
        if not isinstance(parsed, dict):
            raise _ApiError(400, "request body must be a JSON object")
        return parsed

    @property
    def _model(self) -> FeatureModel:
        return self.server.model  # type: ignore[attr-defined]

    # -- request decoding ---------------------------------------------------

    def _released(self, version) -> FeatureModel:
        if version is None:
            return self._model
        if not isinstance(version, int) or isinstance(version, bool) or version < 1:
            raise _ApiError(400, "version must be a positive integer")
        try:
            return analysis.filter_by_version(self._model, version)
        except SplforgeError as exc:
            raise _ApiError(422, str(exc)) from None

    @staticmethod
    def _names(body: dict, key: str) -> frozenset[str]:
        value = body.get(key, [])
        if not isinstance(value, list) or any(not isinstance(n, str) for n in value):
            raise _ApiError(400, f"{key} must be a list of feature names")
        return frozenset(value)

    @staticmethod
    def _partial(model: FeatureModel, selected, deselected) -> Configuration:
        try:
            return Configuration.for_model(model, selected, deselected)
        except UnknownFeatureError as exc:
            raise _ApiError(422, str(exc)) from None
        except SplforgeError as exc:
            raise _ApiError(422, str(exc)) from None

    @staticmethod
    def _total(model: FeatureModel, selected, deselected) -> Configuration:
        undecided = frozenset(model.features) - selected - deselected
        return _Handler._partial(model, selected, deselected | undecided)

    # -- endpoints ----------------------------------------------------------

    def _get_model(self, query: dict) -> None:
        self._send_json(200, model_to_json(self._model))

    def _get_count(self, query: dict) -> None:
        version = None
        if "version" in query:
            raw = query["version"][0]
            if not raw.isdigit() or int(raw) < 1:
                raise _ApiError(400, "version must be a positive integer")
            version = int(raw)
        model = self._released(version)
        fixed: dict[str, bool] = {}
        for key, value in (("selected", True), ("deselected", False)):
            for chunk in query.get(key, []):
                for name in filter(None, chunk.split(",")):
                    if name not in model.features:
                        raise _ApiError(422, f"unknown feature: {name}")
                    fixed[name] = value
        try:
            analysis._require_exact(model)
        except SplforgeError as exc:
            raise _ApiError(422, str(exc)) from None
        count = sum(1 for _ in analysis._solutions(model, fixed))
        self._send_json(200, {"products": count})

    def _post_validate(self, body: dict) -> None:
        model = self._released(body.get("version"))
        config = self._total(
            model, self._names(body, "selected"), self._names(body, "deselected"))
        result = analysis.validate(model, config)
        self._send_json(200, {
            "valid": result.valid,
            "violations": _violations_json(result.violations),
        })

    def _post_propagate(self, body: dict) -> None:
        model = self._released(body.get("version"))
        partial = self._partial(
            model, self._names(body, "selected"), self._names(body, "deselected"))
        result = analysis.propagate(model, partial)
        self._send_json(200, {
            "forcedSelected": sorted(result.forced_selected),
            "forcedDeselected": sorted(result.forced_deselected),
            "conflict": result.conflict,
            "openFeatures": sorted(result.open_features),
        })

    def _post_derive(self, body: dict) -> None:
        product_name = body.get("productName")
        if not isinstance(product_name, str) or not product_name:
            raise _ApiError(400, "productName must be a non-empty string")
        version = body.get("version")
        if version is None:
            version = self._model.max_version
        released = self._released(version)
        config = self._total(
            released, self._names(body, "selected"), self._names(body, "deselected"))
        try:
            manifest = derive.derive_product(self._model, config, product_name, version)
        except InvalidConfigurationError as exc:
            raise _ApiError(422, str(exc),
                            violations=_violations_json(exc.violations)) from None
        except SplforgeError as exc:
            raise _ApiError(422, str(exc)) from None
        self._send_json(200, {
            "manifest": manifest_to_json(manifest),
            "text": derive.write_manifest(manifest),
        })

    # -- dispatch -----------------------------------------------------------

    def do_OPTIONS(self) -> None:  # noqa: N802 (stdlib naming)
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:  # noqa: N802
        url = urlsplit(self.path)
        query = parse_qs(url.query)
        try:
            if url.path == "/api/model":
                self._get_model(query)
            elif url.path == "/api/count":
                self._get_count(query)
            elif url.path.startswith("/api/"):
                raise _ApiError(404, f"no such endpoint: {url.path}")
            else:
                self._serve_static(url.path)
        except _ApiError as exc:
            self._send_json(exc.status, exc.payload)

    def do_POST(self) -> None:  # noqa: N802
        url = urlsplit(self.path)
        handlers = {
            "/api/validate": self._post_validate,
            "/api/propagate": self._post_propagate,
            "/api/derive": self._post_derive,
        }
        try:
            handler = handlers.get(url.path)
            if handler is None:
                raise _ApiError(404, f"no such endpoint: {url.path}")
            handler(self._read_body())
        except _ApiError as exc:
            self._send_json(exc.status, exc.payload)

    def _serve_static(self, path: str) -> None:
        ui_dir: Path | None = self.server.ui_dir  # type: ignore[attr-defined]
        if ui_dir is None:
            raise _ApiError(404, f"no such endpoint: {path}")
        relative = path.lstrip("/") or "index.html"
        target = (ui_dir / relative).resolve()
        if not target.is_relative_to(ui_dir) or not target.is_file():
            raise _ApiError(404, f"not found: {path}")
        self._send_file(target)


def make_server(
    model: FeatureModel,
    host: str = "127.0.0.1",
    port: int = DEFAULT_PORT,
    ui_dir: Path | None = None,
) -> ThreadingHTTPServer:
    """Build (but do not start) the server; port 0 picks a free port."""
    server = ThreadingHTTPServer((host, port), _Handler)
    server.model = model  # type: ignore[attr-defined]
    server.ui_dir = ui_dir.resolve() if ui_dir else None  # type: ignore[attr-defined]
    return server
