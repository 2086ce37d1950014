"""HTTP service: classification API, training jobs, model registry,
deployment management, and batch CSV classification.

Run with `triagekit-serve [--config service.yaml]` or mount `create_app()`
under any ASGI server.
"""

from __future__ import annotations

import argparse
from contextlib import asynccontextmanager
from datetime import datetime
from typing import Optional

import uvicorn
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..assign import assign
from ..config import ConfigError, TrainingConfig
from ..corpus import IssueRecord
from ..pipeline import train_pipeline
from ..textprep import rainbow_stopwords
from .batch import BatchHeaderError, classify_batch
from .config import ServiceConfig
from .deployment import DeploymentError, DeploymentManager
from .jobs import JobManager
from .registry import ModelRegistry, RegistryError
from .stores import FsBlobStore, FsDocumentStore

API = "/api/v1"


class ClassifyRequest(BaseModel):
    key: Optional[str] = None
    summary: str = ""
    description: str = ""


class DeploymentRequest(BaseModel):
    strategy: str
    models: dict[str, str]


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    cfg = config or ServiceConfig.load()
    blobs = FsBlobStore(cfg.blobs)
    docs = FsDocumentStore(cfg.docs)
    registry = ModelRegistry(blobs, docs)
    stopwords = rainbow_stopwords()
    deployments = DeploymentManager(registry, docs, stopwords)

    def run_training(request: dict) -> dict:
        training = TrainingConfig.from_dict(request)
        trained = train_pipeline(training)
        model_ids: dict[str, str] = {}
        report_ids: dict[str, Optional[str]] = {}
        for stage, model in trained.models.items():
            report = trained.reports.get(stage)
            model_id = registry.register(model, report, stage=stage)
            model_ids[stage] = model_id
            report_ids[stage] = registry.entry(model_id).get("report_id")
        return {"strategy": training.strategy, "model_ids": model_ids,
                "report_ids": report_ids}

    jobs = JobManager(docs, run_training, workers=cfg.workers)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        jobs.start()
        yield
        jobs.stop()

    app = FastAPI(title="triagekit service", lifespan=lifespan)
    app.state.config = cfg
    app.state.registry = registry
    app.state.deployments = deployments
    app.state.jobs = jobs

    @app.get(API + "/health")
    def health():
        active = deployments.current()
        return {"status": "ok",
                "deployment_version": active.version if active else 0}

    @app.post(API + "/classify")
    def classify(request: ClassifyRequest):
        active = deployments.current()
        if active is None:
            return JSONResponse(status_code=409,
                                content={"detail": "no active deployment"})
        if not request.summary.strip() and not request.description.strip():
            return JSONResponse(
                status_code=422,
                content={"detail": "summary and description are both empty"})
        now = datetime.now()
        issue = IssueRecord(key=request.key or "(adhoc)",
                            summary=request.summary,
                            description=request.description,
                            reporter="", created=now, updated=now)
        result = assign(active.pipeline, issue)
        payload = result.to_dict()
        payload["deployment_version"] = active.version
        return payload

    @app.post(API + "/classify/batch")
    async def classify_batch_endpoint(request: Request, format: str = "csv"):
        active = deployments.current()
        if active is None:
            return JSONResponse(status_code=409,
                                content={"detail": "no active deployment"})
        body = await request.body()
        if len(body) > cfg.max_upload_bytes:
            return JSONResponse(
                status_code=413,
                content={"detail": f"upload exceeds {cfg.max_upload_bytes} bytes"})
        try:
            text = body.decode("utf-8", errors="replace")
            csv_out, rows = classify_batch(active.pipeline, text)
        except BatchHeaderError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        if format == "json":
            return {"rows": rows, "deployment_version": active.version}
        return Response(content=csv_out, media_type="text/csv",
                        headers={"X-Deployment-Version": str(active.version)})

    @app.post(API + "/train")
    def submit_training(request: dict):
        try:
            TrainingConfig.from_dict(request)
        except ConfigError as exc:
            return JSONResponse(status_code=422,
                                content={"detail": "invalid training config",
                                         "errors": exc.errors})
        job_id = jobs.submit(request)
        return {"job_id": job_id}

    @app.get(API + "/jobs/{job_id}")
    def get_job(job_id: str):
        try:
            return jobs.get(job_id)
        except KeyError:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown job {job_id!r}"})

    @app.get(API + "/jobs")
    def list_jobs():
        return {"jobs": jobs.list_jobs()}

    @app.get(API + "/models")
    def list_models():
        return {"models": registry.list_models()}

    @app.get(API + "/models/{model_id}/report")
    def get_report(model_id: str):
        try:
            return registry.get_report(model_id)
        except RegistryError as exc:
            return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.put(API + "/deployment")
    def put_deployment(request: DeploymentRequest):
        if request.strategy not in ("S1", "S2"):
            return JSONResponse(status_code=422,
                                content={"detail": "strategy must be S1 or S2"})
        try:
            deployment = deployments.activate(request.strategy, request.models)
        except DeploymentError as exc:
            return JSONResponse(status_code=409, content={"detail": str(exc)})
        return deployment.descriptor()

    @app.get(API + "/deployment")
    def get_deployment():
        active = deployments.current()
        if active is None:
            return {"active": False, "version": 0}
        return {"active": True, **active.descriptor()}

    if cfg.console_dir:
        from pathlib import Path

        from fastapi.staticfiles import StaticFiles

        console = Path(cfg.console_dir)
        if console.is_dir():
            app.mount("/console", StaticFiles(directory=str(console), html=True),
                      name="console")

    return app


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="triagekit-serve")
    parser.add_argument("--config", default=None, help="service config YAML")
    parser.add_argument("--host", default=None)
    parser.add_argument("--port", type=int, default=None)
    args = parser.parse_args(argv)
    cfg = ServiceConfig.load(args.config)
    host = args.host or cfg.host
    port = args.port or cfg.port
    uvicorn.run(create_app(cfg), host=host, port=port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
