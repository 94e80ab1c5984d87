"""FastAPI service wrapping the extraction package.

Fitted models are immutable, so they are kept in a process-local registry
guarded by a lock and can serve concurrent transform requests.  Model ids
are opaque tokens returned by the fit and import endpoints.
"""

import itertools
import math
import threading

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from .. import __version__, benchmark, datasets, fastica
from ..contrast import CONTRAST_NAMES, ContrastFunction, evaluate
from . import schemas


class ModelStore:
    """Thread-safe id -> fitted model registry."""

    def __init__(self):
        self._lock = threading.Lock()
        self._models = {}
        self._counter = itertools.count(1)

    def add(self, model):
        with self._lock:
            model_id = f"ica-{next(self._counter):04d}"
            self._models[model_id] = model
        return model_id

    def get(self, model_id):
        with self._lock:
            model = self._models.get(model_id)
        if model is None:
            raise HTTPException(status_code=404, detail=f"no model with id {model_id!r}")
        return model

    def ids(self):
        with self._lock:
            return sorted(self._models)


def _clean(value):
    return None if value is None or math.isnan(value) else value


def _summary(model_id, model):
    return schemas.ModelSummary(
        model_id=model_id,
        n_components=model.n_components,
        n_features=model.n_features,
        fun=model.config.fun.name,
        seed=model.config.seed,
        n_iter=model.n_iter,
        converged=model.converged,
    )


def create_app():
    app = FastAPI(title="mark-ica", version=__version__)
    store = ModelStore()

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(
            status="ok", version=__version__, contrasts=list(CONTRAST_NAMES)
        )

    @app.get("/datasets", response_model=list[schemas.DatasetInfo])
    def list_datasets():
        return [
            schemas.DatasetInfo(
                name=spec.name,
                n_components=spec.n_components,
                pre_partitioned=spec.test_file is not None,
            )
            for spec in datasets.DATASETS.values()
        ]

    @app.post("/kernel/evaluate", response_model=schemas.KernelEvalResponse)
    def kernel_evaluate(req: schemas.KernelEvalRequest):
        try:
            fun = ContrastFunction(req.fun, req.alpha)
            g, gprime_mean = evaluate(fun, np.asarray(req.values, dtype=np.float64))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return schemas.KernelEvalResponse(
            fun=req.fun, g=g.tolist(), gprime_mean=np.atleast_1d(gprime_mean).tolist()
        )

    @app.post("/ica/fit", response_model=schemas.FitResponse)
    def ica_fit(req: schemas.FitRequest):
        try:
            config = fastica.FastICAConfig(
                n_components=req.n_components,
                fun=ContrastFunction(req.fun, req.alpha),
                tol=req.tol,
                max_iter=req.max_iter,
                seed=req.seed,
                whiten=req.whiten,
            )
            model = fastica.fit(np.asarray(req.data, dtype=np.float64), config)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        model_id = store.add(model)
        return schemas.FitResponse(**_summary(model_id, model).model_dump())

    @app.post("/ica/transform", response_model=schemas.TransformResponse)
    def ica_transform(req: schemas.TransformRequest):
        model = store.get(req.model_id)
        try:
            sources = fastica.transform(model, np.asarray(req.data, dtype=np.float64))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return schemas.TransformResponse(model_id=req.model_id, sources=sources.tolist())

    @app.get("/models", response_model=list[str])
    def list_models():
        return store.ids()

    @app.get("/models/{model_id}", response_model=schemas.ModelSummary)
    def model_summary(model_id: str):
        return _summary(model_id, store.get(model_id))

    @app.get("/models/{model_id}/export", response_class=PlainTextResponse)
    def model_export(model_id: str):
        return fastica.dumps_model(store.get(model_id))

    @app.post("/models/import", response_model=schemas.ModelSummary)
    def model_import(req: schemas.ImportModelRequest):
        try:
            model = fastica.loads_model(req.serialized)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        model_id = store.add(model)
        return _summary(model_id, model)

    @app.post("/bss-demo", response_model=schemas.BssDemoResponse)
    def bss_demo(req: schemas.BssDemoRequest):
        try:
            out = benchmark.bss_demo(
                req.fun, req.seed, kinds=tuple(req.kinds), n_samples=req.n_samples
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return schemas.BssDemoResponse(
            fun=req.fun,
            seed=req.seed,
            amari_index=out["amari_index"],
            n_iter=out["n_iter"],
            converged=out["converged"],
        )

    @app.post("/benchmark/run", response_model=schemas.BenchmarkResponse)
    def benchmark_run(req: schemas.BenchmarkRequest):
        names = req.datasets or list(datasets.DATASET_ORDER)
        unknown = [n for n in names if n not in datasets.DATASETS]
        if unknown:
            raise HTTPException(status_code=400, detail=f"unknown datasets: {unknown}")
        rows = benchmark.run_benchmark(
            specs=names,
            data_dir=req.data_dir,
            ica_seed=req.ica_seed,
            mlp_seed=req.mlp_seed,
            mlp_max_iter=req.mlp_max_iter,
        )
        cells = [
            schemas.BenchmarkCell(
                dataset=r.dataset,
                activation=r.activation,
                extraction=r.extraction,
                training_time_s=_clean(r.training_time_s),
                accuracy=_clean(r.accuracy),
                precision=_clean(r.precision),
                recall=_clean(r.recall),
                f1=_clean(r.f1),
                error=r.error,
            )
            for r in rows
        ]
        return schemas.BenchmarkResponse(rows=cells, csv=benchmark.emit_report(rows))

    return app


app = create_app()
