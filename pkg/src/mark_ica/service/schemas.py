"""Pydantic request/response models for the extraction service."""

from pydantic import BaseModel, Field

from ..contrast import CONTRAST_NAMES


class KernelEvalRequest(BaseModel):
    fun: str = Field(description=f"one of {CONTRAST_NAMES}")
    alpha: float = 1.0
    values: list[list[float]]


class KernelEvalResponse(BaseModel):
    fun: str
    g: list[list[float]]
    gprime_mean: list[float]


class FitRequest(BaseModel):
    data: list[list[float]]
    n_components: int
    fun: str = "logcosh"
    alpha: float = 1.0
    tol: float = 1e-4
    max_iter: int = 200
    seed: int = 42
    whiten: bool = True


class ModelSummary(BaseModel):
    model_id: str
    n_components: int
    n_features: int
    fun: str
    seed: int
    n_iter: int
    converged: bool


class FitResponse(ModelSummary):
    pass


class TransformRequest(BaseModel):
    model_id: str
    data: list[list[float]]


class TransformResponse(BaseModel):
    model_id: str
    sources: list[list[float]]


class ImportModelRequest(BaseModel):
    serialized: str


class BssDemoRequest(BaseModel):
    fun: str = "m_arcsinh"
    seed: int = 0
    kinds: list[str] = ["sine", "square", "sawtooth"]
    n_samples: int = 10000


class BssDemoResponse(BaseModel):
    fun: str
    seed: int
    amari_index: float
    n_iter: int
    converged: bool


class BenchmarkRequest(BaseModel):
    datasets: list[str] | None = None
    data_dir: str | None = None
    ica_seed: int = 42
    mlp_seed: int = 1
    mlp_max_iter: int = 250


class BenchmarkCell(BaseModel):
    dataset: str
    activation: str
    extraction: str
    # numeric fields are null for cells that errored out
    training_time_s: float | None
    accuracy: float | None
    precision: float | None
    recall: float | None
    f1: float | None
    error: str | None = None


class BenchmarkResponse(BaseModel):
    rows: list[BenchmarkCell]
    csv: str


class DatasetInfo(BaseModel):
    name: str
    n_components: int
    pre_partitioned: bool


class HealthResponse(BaseModel):
    status: str
    version: str
    contrasts: list[str]
