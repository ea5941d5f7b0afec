"""Read-only HTTP service for scenes, goldens, config, and viewer assets.

Every response is immutable and cacheable; the service never writes to the
scene directory.  Navigation state lives entirely client-side, so the server
is safe for any number of concurrent readers.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .config import Config
from .tiles import MAGIC, load_manifest, tile_filename

CACHE_HEADER = "public, max-age=3600"

CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".txt": "text/plain; charset=utf-8",
    ".map": "application/json",
}

FALLBACK_INDEX = b"""<!doctype html>
<title>ramacity</title>
<p>Scene service is running. The viewer bundle is not built; see the
<code>frontend/</code> directory for build instructions.</p>
<p>API: <a href="/api/manifest">/api/manifest</a>,
/api/tile/{ix}/{iy}, <a href="/api/goldens">/api/goldens</a>,
<a href="/api/config">/api/config</a></p>
"""


class SceneService(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, scene_dir, cfg: Config, static_dir=None, goldens_text: str = ""):
        self.scene_dir = Path(scene_dir)
        self.cfg = cfg
        self.static_dir = Path(static_dir) if static_dir else None
        self.manifest_bytes = json.dumps(
            load_manifest(self.scene_dir), sort_keys=True, indent=2
        ).encode()
        self.goldens_bytes = goldens_text.encode()
        super().__init__(("127.0.0.1", cfg.http_port), _Handler)


class _Handler(BaseHTTPRequestHandler):
    server: SceneService

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/api/manifest":
            return self._send(200, "application/json", self.server.manifest_bytes)
        if path.startswith("/api/tile/"):
            return self._tile(path)
        if path == "/api/goldens":
            return self._send(200, "text/plain; charset=utf-8", self.server.goldens_bytes)
        if path == "/api/config":
            body = json.dumps(self.server.cfg.to_dict(), sort_keys=True, indent=2).encode()
            return self._send(200, "application/json", body)
        return self._static(path)

    def _tile(self, path):
        parts = path[len("/api/tile/") :].split("/")
        if len(parts) != 2:
            return self._send(400, "text/plain", b"expected /api/tile/{ix}/{iy}\n")
        try:
            ix, iy = int(parts[0]), int(parts[1])
        except ValueError:
            return self._send(400, "text/plain", b"tile indices must be integers\n")
        tile_path = self.server.scene_dir / tile_filename(ix, iy)
        if not tile_path.is_file():
            return self._send(404, "text/plain", b"no such tile\n")
        data = tile_path.read_bytes()
        assert data[:4] == MAGIC
        return self._send(200, "application/octet-stream", data)

    def _static(self, path):
        if path == "/":
            path = "/index.html"
        elif path == "/selftest":
            path = "/selftest.html"
        root = self.server.static_dir
        if root is None:
            if path == "/index.html":
                return self._send(200, "text/html; charset=utf-8", FALLBACK_INDEX)
            return self._send(404, "text/plain", b"not found\n")
        target = (root / path.lstrip("/")).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            return self._send(404, "text/plain", b"not found\n")
        ctype = CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        return self._send(200, ctype, target.read_bytes())

    def _send(self, status, ctype, body: bytes):
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Cache-Control", CACHE_HEADER)
        self.end_headers()
        self.wfile.write(body)


def serve_forever(scene_dir, cfg: Config, static_dir=None, goldens_text: str = ""):
    srv = SceneService(scene_dir, cfg, static_dir, goldens_text)
    try:
        srv.serve_forever()
    finally:
        srv.server_close()
