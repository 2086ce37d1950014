"""Blob and document stores behind tiny interfaces.

The defaults are filesystem-backed: blobs as files under a root, documents
as JSON files grouped by collection. Writes go through a temp file and a
rename so readers never observe half-written content.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Protocol


class BlobStore(Protocol):
    def put(self, name: str, data: bytes) -> None: ...
    def get(self, name: str) -> bytes: ...
    def exists(self, name: str) -> bool: ...


class DocumentStore(Protocol):
    def put(self, collection: str, doc_id: str, doc: dict) -> None: ...
    def get(self, collection: str, doc_id: str) -> dict: ...
    def list(self, collection: str) -> list[dict]: ...
    def exists(self, collection: str, doc_id: str) -> bool: ...


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class FsBlobStore:
    def __init__(self, root) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, name: str) -> Path:
        path = (self.root / name).resolve()
        if not str(path).startswith(str(self.root.resolve())):
            raise ValueError(f"blob name escapes store root: {name!r}")
        return path

    def put(self, name: str, data: bytes) -> None:
        _atomic_write(self._path(name), data)

    def get(self, name: str) -> bytes:
        return self._path(name).read_bytes()

    def exists(self, name: str) -> bool:
        return self._path(name).is_file()


class FsDocumentStore:
    def __init__(self, root) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, collection: str, doc_id: str) -> Path:
        if "/" in doc_id or doc_id.startswith("."):
            raise ValueError(f"bad document id {doc_id!r}")
        return self.root / collection / f"{doc_id}.json"

    def put(self, collection: str, doc_id: str, doc: dict) -> None:
        with self._lock:
            _atomic_write(self._path(collection, doc_id),
                          json.dumps(doc, indent=2).encode("utf-8"))

    def get(self, collection: str, doc_id: str) -> dict:
        path = self._path(collection, doc_id)
        if not path.is_file():
            raise KeyError(f"{collection}/{doc_id}")
        return json.loads(path.read_text(encoding="utf-8"))

    def list(self, collection: str) -> list[dict]:
        folder = self.root / collection
        if not folder.is_dir():
            return []
        docs = []
        for path in sorted(folder.glob("*.json")):
            docs.append(json.loads(path.read_text(encoding="utf-8")))
        return docs

    def exists(self, collection: str, doc_id: str) -> bool:
        return self._path(collection, doc_id).is_file()
