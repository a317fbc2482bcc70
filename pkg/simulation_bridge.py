"""
FastAPI bridge exposing the braiding simulator over HTTP.
Provides encoding and frame-table lookups, experiments and circuit export.
"""

import logging
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from braiding import (
    GATE_IDS,
    ExperimentConfig,
    build_protocol,
    configure_logging,
    emit_qasm,
    gauge_table,
    get_encoding,
    get_settings,
    match_reference_table,
    parse_labels,
    run_gate_experiment,
)
from braiding.circuits import build_gate_circuit
from braiding.config import DEFAULT_SHOTS
from braiding.encoding import ENCODING_IDS
from simulator import NoiseModel, SimulationError

logger = logging.getLogger(__name__)

app = FastAPI(title="Braiding Simulation Bridge")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["http://localhost:3000", "http://localhost:5173"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class ExperimentRequest(BaseModel):
    gate: str
    labels: Optional[str] = None
    shots: int = Field(DEFAULT_SHOTS, ge=1)
    seed: Optional[int] = None
    exact: bool = False
    noise_defaults: bool = False
    p_idle: Optional[float] = Field(None, ge=0.0, le=1.0)
    trajectories: int = Field(64, ge=1)
    bootstrap: int = Field(20, ge=0)
    tau: Optional[float] = None


class ExportRequest(BaseModel):
    gate: str
    labels: str
    lower: bool = False
    tau: Optional[float] = None


@app.exception_handler(ValueError)
@app.exception_handler(SimulationError)
async def handle_library_error(request: Request, exc: Exception):
    logger.warning(f"{request.url.path}: {exc}")
    return JSONResponse(status_code=400, content={"status": "error", "message": str(exc)})


@app.get("/status")
async def get_status():
    """Get bridge status and the supported gates and encodings."""
    return {
        "status": "success",
        "gates": list(GATE_IDS),
        "encodings": list(ENCODING_IDS),
        "default_shots": get_settings().shots,
    }


@app.get("/encodings/{encoding_id}")
async def get_encoding_info(encoding_id: str):
    """Get junction, logical observables and gauge table of an encoding."""
    encoding = get_encoding(encoding_id)
    return {
        "status": "success",
        "encoding": encoding.id,
        "physical_qubits": encoding.physical_n,
        "logical_qubits": encoding.n_logical,
        "junction": encoding.junction.to_dict(),
        "logical_observables": [{axis: str(op) for axis, op in ops.items()} for ops in encoding.logical_ops],
        "gauge_table": gauge_table(encoding.id),
    }


@app.get("/protocols/{gate_id}/frames")
async def get_frames(gate_id: str, tau: Optional[float] = None):
    """Get the derived frame table of a gate and its reference-table match."""
    protocol = build_protocol(gate_id, tau)
    match = match_reference_table(protocol.gate_id, protocol.frame_table)
    return {
        "status": "success",
        "gate": protocol.gate_id,
        "encoding": protocol.encoding.id,
        "axes": [axis.label() for axis in protocol.axes],
        "frames": {outcomes: str(c) for outcomes, c in sorted(protocol.frame_table.items())},
        "reference": None if match is None else {
            "column": match.column,
            "bit_order": match.bit_order,
            "letter_order": match.letter_order,
            "matched": match.matched,
        },
    }


@app.post("/experiments")
async def run_experiment(request: ExperimentRequest):
    """Run a gate experiment and return its fidelity records."""
    config = ExperimentConfig(
        gate_id=request.gate,
        labels=parse_labels(request.labels) if request.labels else None,
        shots=request.shots,
        seed=request.seed,
        exact=request.exact,
        trajectories=request.trajectories,
        bootstrap=request.bootstrap,
        tau=request.tau,
    )
    if request.noise_defaults:
        config.noise = NoiseModel.device_defaults(config.encoding_id) if request.p_idle is None else \
            NoiseModel.device_defaults(config.encoding_id, p_idle=request.p_idle)
    result = run_gate_experiment(config)
    return {"status": "success", **result.to_dict()}


@app.post("/export")
async def export_circuit(request: ExportRequest):
    """Return a gate circuit as OpenQASM 3 text."""
    circuit = build_gate_circuit(request.gate, parse_labels(request.labels), request.tau)
    document = emit_qasm(circuit, lower=request.lower)
    return {
        "status": "success",
        "gate": request.gate,
        "labels": request.labels,
        "qasm": document.text,
        "operations": circuit.count_ops(),
    }


if __name__ == "__main__":
    import uvicorn

    settings = get_settings()
    configure_logging()
    print("🚀 Starting Braiding Simulation Bridge...")
    print(f"📡 Clients can connect to: http://{settings.bridge_host}:{settings.bridge_port}")
    print(f"📚 API docs available at: http://{settings.bridge_host}:{settings.bridge_port}/docs")
    uvicorn.run(
        app,
        host=settings.bridge_host,
        port=settings.bridge_port,
        log_level="info"
    )
