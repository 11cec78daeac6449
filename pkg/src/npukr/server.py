"""Annotation backend: tokenize pasted text, store token-index clusters.

Documents and clusters persist as newline-delimited TSV files in a storage
directory; the clusters file uses the gold-annotation format, so saved
annotations feed the evaluate command directly. Writes go through a lock
(last write wins), reads see the latest completed write.

API (JSON bodies, UTF-8):
  POST /api/documents                {"text": ...} -> document payload
  GET  /api/documents                -> {"documents": [...]}
  GET  /api/documents/<doc_id>       -> document payload with clusters
  PUT  /api/documents/<doc_id>/clusters
       {"clusters": [{"sentence_id":..., "start":..., "end":...}, ...]}
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .tokenizer import tokenize

logger = logging.getLogger(__name__)

_DOC_ID = re.compile(r"^[0-9a-f]{12}$")


class StorageError(RuntimeError):
    pass


class AnnotationStore:
    """File-backed document and cluster storage."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _tokens_path(self, doc_id: str) -> Path:
        return self.directory / f"{doc_id}.tokens.tsv"

    def _clusters_path(self, doc_id: str) -> Path:
        return self.directory / f"{doc_id}.clusters.tsv"

    def create_document(self, text: str) -> dict:
        """Tokenize and persist; the id is a content hash, so re-posting the
        same text lands on the same document."""
        sentences = tokenize(text)
        doc_id = hashlib.sha1(text.encode("utf-8")).hexdigest()[:12]
        lines = []
        payload_sents = []
        for i, tokens in enumerate(sentences, start=1):
            sid = f"s{i}"
            payload_sents.append(
                {
                    "sentence_id": sid,
                    "tokens": [
                        {"index": j, "form": form}
                        for j, form in enumerate(tokens, start=1)
                    ],
                }
            )
            for j, form in enumerate(tokens, start=1):
                lines.append(f"{sid}\t{j}\t{form}")
        with self._lock:
            tmp = self._tokens_path(doc_id).with_suffix(".tmp")
            tmp.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
            tmp.replace(self._tokens_path(doc_id))
        return {"doc_id": doc_id, "sentences": payload_sents}

    def get_document(self, doc_id: str) -> dict | None:
        path = self._tokens_path(doc_id)
        if not path.exists():
            return None
        sentences: dict[str, list[dict]] = {}
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            sid, idx, form = line.split("\t", 2)
            sentences.setdefault(sid, []).append({"index": int(idx), "form": form})
        return {
            "doc_id": doc_id,
            "sentences": [
                {"sentence_id": sid, "tokens": toks} for sid, toks in sentences.items()
            ],
            "clusters": self.get_clusters(doc_id),
        }

    def list_documents(self) -> list[dict]:
        docs = []
        for path in sorted(self.directory.glob("*.tokens.tsv")):
            doc_id = path.name.removesuffix(".tokens.tsv")
            n_sentences = len(
                {line.split("\t", 1)[0] for line in path.read_text(encoding="utf-8").splitlines() if line}
            )
            docs.append(
                {
                    "doc_id": doc_id,
                    "n_sentences": n_sentences,
                    "n_clusters": len(self.get_clusters(doc_id)),
                }
            )
        return docs

    def get_clusters(self, doc_id: str) -> list[dict]:
        path = self._clusters_path(doc_id)
        if not path.exists():
            return []
        clusters = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            _, sid, start, end = line.split("\t")
            clusters.append({"sentence_id": sid, "start": int(start), "end": int(end)})
        return clusters

    def save_clusters(self, doc_id: str, clusters: list[dict]) -> int:
        """Validate against the stored tokens and persist in gold format."""
        doc = self.get_document(doc_id)
        if doc is None:
            raise KeyError(doc_id)
        sent_len = {s["sentence_id"]: len(s["tokens"]) for s in doc["sentences"]}
        rows = []
        per_sent: dict[str, list[tuple[int, int]]] = {}
        for c in clusters:
            try:
                sid = c["sentence_id"]
                start, end = int(c["start"]), int(c["end"])
            except (KeyError, TypeError, ValueError):
                raise ValueError(f"malformed cluster record {c!r}") from None
            if sid not in sent_len:
                raise ValueError(f"unknown sentence_id {sid!r}")
            if not (1 <= start <= end <= sent_len[sid]):
                raise ValueError(
                    f"span [{start}, {end}] outside sentence {sid!r} "
                    f"({sent_len[sid]} tokens)"
                )
            per_sent.setdefault(sid, []).append((start, end))
            rows.append(f"{doc_id}\t{sid}\t{start}\t{end}")
        for sid, spans in per_sent.items():
            spans.sort()
            for (s1, e1), (s2, _) in zip(spans, spans[1:]):
                if s2 <= e1:
                    raise ValueError(f"overlapping clusters in sentence {sid!r}")
        with self._lock:
            tmp = self._clusters_path(doc_id).with_suffix(".tmp")
            try:
                tmp.write_text(
                    "\n".join(rows) + ("\n" if rows else ""), encoding="utf-8"
                )
                tmp.replace(self._clusters_path(doc_id))
            except OSError as exc:
                raise StorageError(str(exc)) from exc
        return len(rows)


def make_handler(store: AnnotationStore, ui_dir: Path | None = None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # route through logging, not stderr
            logger.info("%s " + fmt, self.address_string(), *args)

        def _send(self, status: int, payload: dict | list) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _error(self, status: int, message: str) -> None:
            self._send(status, {"error": message})

        def _read_json(self) -> dict | None:
            try:
                length = int(self.headers.get("Content-Length", "0"))
                data = self.rfile.read(length)
                parsed = json.loads(data.decode("utf-8"))
            except (ValueError, UnicodeDecodeError):
                return None
            return parsed if isinstance(parsed, dict) else None

        def do_OPTIONS(self):  # CORS preflight for the browser UI
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            if parts == ["api", "documents"]:
                self._send(200, {"documents": store.list_documents()})
                return
            if len(parts) == 3 and parts[:2] == ["api", "documents"]:
                doc = store.get_document(parts[2]) if _DOC_ID.match(parts[2]) else None
                if doc is None:
                    self._error(404, f"unknown document {parts[2]!r}")
                else:
                    self._send(200, doc)
                return
            if ui_dir is not None:
                self._serve_static(parts)
                return
            self._error(404, "no such route")

        def _serve_static(self, parts: list[str]) -> None:
            rel = "/".join(parts) if parts else "index.html"
            target = (ui_dir / rel).resolve()
            if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
                self._error(404, "no such file")
                return
            ctype = {
                ".html": "text/html; charset=utf-8",
                ".js": "text/javascript; charset=utf-8",
                ".css": "text/css; charset=utf-8",
                ".map": "application/json",
            }.get(target.suffix, "application/octet-stream")
            body = target.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_POST(self):
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            if parts == ["api", "documents"]:
                payload = self._read_json()
                if payload is None or not isinstance(payload.get("text"), str):
                    self._error(400, "expected a JSON body with a 'text' string")
                    return
                try:
                    self._send(201, store.create_document(payload["text"]))
                except OSError as exc:
                    self._error(500, f"storage failure: {exc}")
                return
            if len(parts) == 4 and parts[:2] == ["api", "documents"] and parts[3] == "clusters":
                self._save_clusters(parts[2])
                return
            self._error(404, "no such route")

        def do_PUT(self):
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            if len(parts) == 4 and parts[:2] == ["api", "documents"] and parts[3] == "clusters":
                self._save_clusters(parts[2])
                return
            self._error(404, "no such route")

        def _save_clusters(self, doc_id: str) -> None:
            payload = self._read_json()
            if payload is None or not isinstance(payload.get("clusters"), list):
                self._error(400, "expected a JSON body with a 'clusters' list")
                return
            try:
                count = store.save_clusters(doc_id, payload["clusters"])
            except KeyError:
                self._error(404, f"unknown document {doc_id!r}")
                return
            except ValueError as exc:
                self._error(400, str(exc))
                return
            except StorageError as exc:
                self._error(500, f"storage failure: {exc}")
                return
            self._send(200, {"doc_id": doc_id, "saved": count})

    return Handler


def make_server(
    storage: str | Path,
    host: str = "127.0.0.1",
    port: int = 8000,
    ui_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    store = AnnotationStore(storage)
    handler = make_handler(store, Path(ui_dir) if ui_dir else None)
    return ThreadingHTTPServer((host, port), handler)
