"""Service configuration: file plus environment-variable overrides.

Defaults: listen on 127.0.0.1:8080, store everything under ./triagekit-data
(blobs/ and docs/ inside it), 10 MiB upload cap, one training worker.
Environment variables TRIAGEKIT_HOST, TRIAGEKIT_PORT, TRIAGEKIT_DATA_DIR,
TRIAGEKIT_BLOB_ROOT, TRIAGEKIT_DOC_ROOT, TRIAGEKIT_MAX_UPLOAD_BYTES,
TRIAGEKIT_WORKERS, and TRIAGEKIT_CONSOLE_DIR override both defaults and the
config file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import yaml


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    data_dir: str = "triagekit-data"
    blob_root: Optional[str] = None
    doc_root: Optional[str] = None
    max_upload_bytes: int = 10 * 1024 * 1024
    workers: int = 1
    console_dir: Optional[str] = None

    @property
    def blobs(self) -> str:
        return self.blob_root or str(Path(self.data_dir) / "blobs")

    @property
    def docs(self) -> str:
        return self.doc_root or str(Path(self.data_dir) / "docs")

    @classmethod
    def load(cls, path: Optional[str] = None) -> "ServiceConfig":
        values: dict = {}
        if path:
            loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
            if not isinstance(loaded, dict):
                raise ValueError("service config must be a mapping")
            known = set(cls.__dataclass_fields__)
            unknown = set(loaded) - known
            if unknown:
                raise ValueError(f"unknown service config keys: {sorted(unknown)}")
            values.update(loaded)
        env = {
            "host": os.environ.get("TRIAGEKIT_HOST"),
            "port": os.environ.get("TRIAGEKIT_PORT"),
            "data_dir": os.environ.get("TRIAGEKIT_DATA_DIR"),
            "blob_root": os.environ.get("TRIAGEKIT_BLOB_ROOT"),
            "doc_root": os.environ.get("TRIAGEKIT_DOC_ROOT"),
            "max_upload_bytes": os.environ.get("TRIAGEKIT_MAX_UPLOAD_BYTES"),
            "workers": os.environ.get("TRIAGEKIT_WORKERS"),
            "console_dir": os.environ.get("TRIAGEKIT_CONSOLE_DIR"),
        }
        for key, value in env.items():
            if value is not None:
                values[key] = value
        for int_key in ("port", "max_upload_bytes", "workers"):
            if int_key in values:
                values[int_key] = int(values[int_key])
        return cls(**values)
