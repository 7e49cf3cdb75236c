"""FastAPI service exposing the library's operations.

The service is stateless: every request carries a full generator
description and every response embeds the data needed to reproduce it.
File-shaped outputs (CSV dumps) are returned inline; clients own the disk.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from . import __version__
from .basis import aob_constants, aob_verdict, riesz_bounds, subspace_angle_cosine
from .errors import ConfigError, ExecutionError, RieszLabError
from .formats import csv_text, gram_csv, inner_spec_json, node_list_csv, spectrum_csv, trace_csv
from .hardy import hilbert_transform, pv_hilbert_value, synthesize_unimodular
from .inner import BlaschkeExpInner, TailPolicy, clark_inner, validate_sequence
from .kernels import build_kernel_system, gram_closed_form, gram_quadrature
from .scenarios import generate_sequence, list_scenarios, outward_positions, run_scenario
from .schemas import (
    AngleRequest,
    AngleResponse,
    AobRequest,
    AobResponse,
    ClarkEvalRequest,
    ClarkEvalResponse,
    ComplexNumber,
    FunctionDescriptor,
    GramRequest,
    GramResponse,
    HealthResponse,
    HilbertRequest,
    HilbertResponse,
    RieszRequest,
    RieszResponse,
    ScenarioInfo,
    ScenarioRunRequest,
    ScenarioRunResponse,
    SymbolModel,
    ThetaModel,
    ToeplitzRequest,
    ToeplitzResponse,
    ValidateRequest,
    ValidateResponse,
)
from .toeplitz import (
    build_symbol,
    hankel_decay,
    invertibility_verdict,
    section_spectrum,
    symbol_from_inner_pair,
    unitary_plus_compact_verdict,
)

app = FastAPI(
    title="rieszlab",
    version=__version__,
    description="Reproducing-kernel basis diagnostics for model spaces: "
    "Clark inner functions, Gram systems, Hilbert transforms, Toeplitz sections.",
)


def _sequence_from(req_generator, lambdas=None, nus=None, first_index=0):
    if lambdas is not None:
        if nus is None:
            raise ConfigError("nus required when lambdas are given inline")
        return validate_sequence(lambdas, nus, first_index=first_index)
    if req_generator is None:
        raise ConfigError("either inline nodes or a generator is required")
    return generate_sequence(req_generator.to_params())


def _theta_from(model: ThetaModel):
    if model.kind == "exp":
        return BlaschkeExpInner(model.exp_type, [])
    if model.kind == "blaschke":
        return BlaschkeExpInner(model.exp_type, [z.to_complex() for z in model.zeros])
    seq = generate_sequence(model.sequence.to_params() if model.sequence else {})
    return clark_inner(seq, TailPolicy(pairing=model.pairing, compensate=model.compensate))


def _function_from(desc: FunctionDescriptor):
    if desc.kind == "zero":
        return lambda t: np.zeros_like(np.asarray(t, dtype=float))
    if desc.kind == "poisson":
        return lambda t: desc.height / (1.0 + ((np.asarray(t, dtype=float) - desc.center) / desc.width) ** 2)

    def bump(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            body = np.where(np.abs(s) < 1, 1.0 - s * s, 1.0)
            return np.where(np.abs(s) < 1, np.exp(1.0 - 1.0 / body), 0.0)

    if desc.kind == "bump":
        return lambda t: desc.height * bump((np.asarray(t, dtype=float) - desc.center) / desc.width)
    # bump_pair: odd pair, mean-zero against every symmetric weight
    return lambda t: desc.height * (
        bump((np.asarray(t, dtype=float) - desc.separation) / desc.width)
        - bump((np.asarray(t, dtype=float) + desc.separation) / desc.width)
    )


def _symbol_from(model: SymbolModel):
    if model.kind == "cayley_power":
        k = model.k
        u = lambda t: ((np.asarray(t, dtype=complex) - 1j) / (np.asarray(t, dtype=complex) + 1j)) ** k
        prov = {"kind": "cayley_power", "k": k}
    elif model.kind == "synthesized":
        u = synthesize_unimodular(
            a=_function_from(model.a),
            b=None if model.b.kind == "zero" else _function_from(model.b),
            c=model.c,
            n=model.n,
            resolution=model.resolution,
        )
        prov = {"kind": "synthesized", "n": model.n, "c": model.c,
                "a": model.a.model_dump(), "b": model.b.model_dump()}
    else:
        theta = _theta_from(model.theta)
        seq = generate_sequence(model.sequence.to_params())
        inner = clark_inner(seq, TailPolicy(compensate=model.compensate))
        u = symbol_from_inner_pair(theta, inner)
        prov = {"kind": "inner_pair", "theta": model.theta.model_dump(),
                "sequence": model.sequence.model_dump()}
    return build_symbol(u, resolution=model.resolution, max_resolution=model.resolution,
                        provenance=prov)


@app.exception_handler(RieszLabError)
async def _domain_error_handler(request, exc):
    from fastapi.responses import JSONResponse

    code = 500 if isinstance(exc, ExecutionError) else 422
    return JSONResponse(
        status_code=code,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.get("/health", response_model=HealthResponse)
def health():
    return HealthResponse(status="ok", version=__version__)


@app.post("/sequences/validate", response_model=ValidateResponse)
def validate(req: ValidateRequest):
    seq = _sequence_from(req.generator, req.lambdas, req.nus, req.first_index)
    return ValidateResponse(
        count=len(seq),
        delta=seq.delta,
        discrepancy=seq.discrepancy,
        window=seq.window,
        weight_mass=seq.weight_mass(),
        was_sorted=seq.permutation is not None,
        nodes_csv=node_list_csv(seq.labels, seq.lambdas),
    )


@app.post("/inner/clark/eval", response_model=ClarkEvalResponse)
def clark_eval(req: ClarkEvalRequest):
    seq = generate_sequence(req.generator.to_params())
    inner = clark_inner(seq, TailPolicy(pairing=req.pairing, compensate=req.compensate))
    pts = np.array([p.to_complex() for p in req.points])
    vals = np.atleast_1d(inner(pts))
    node_dev = float(np.max(np.abs(np.atleast_1d(inner(seq.lambdas.astype(complex))) - 1.0)))
    upper = pts[pts.imag > 0]
    positive = bool(inner.herglotz_positivity(upper)) if len(upper) else True
    return ClarkEvalResponse(
        values=[ComplexNumber.wrap(v) for v in vals],
        max_node_deviation=node_dev,
        herglotz_positive=positive,
        spec_json=inner_spec_json(inner.spec),
    )


@app.post("/kernels/gram", response_model=GramResponse)
def gram(req: GramRequest):
    theta = _theta_from(req.theta)
    seq = generate_sequence(req.generator.to_params())
    clark = theta if req.theta.kind == "clark" else None
    system = build_kernel_system(theta, seq, clark=clark)
    positions = outward_positions(len(seq), len(seq) // 2) if req.outward else None
    g = gram_closed_form(system, positions=positions)
    lo, hi = g.conditioning()
    off = float(np.max(np.abs(g.entries - np.eye(len(g)))))
    quad_dev = None
    if req.quadrature_check:
        if len(seq) > 8:
            raise ConfigError("quadrature cross-check limited to windows of <= 8 nodes")
        gq = gram_quadrature(system, positions=positions)
        quad_dev = float(np.max(np.abs(g.entries - gq.entries)))
    return GramResponse(
        size=len(g),
        window=g.window,
        lambda_min=lo,
        lambda_max=hi,
        max_offdiagonal=off,
        gram_csv=gram_csv(g.entries),
        quadrature_max_deviation=quad_dev,
    )


@app.post("/basis/riesz", response_model=RieszResponse)
def riesz(req: RieszRequest):
    theta = _theta_from(req.theta)
    seq = generate_sequence(req.generator.to_params())
    system = build_kernel_system(theta, seq)
    lower, upper = [], []
    center = len(seq) // 2
    for size in req.window_sizes:
        if size > len(seq):
            raise ConfigError(f"window size {size} exceeds the node window {len(seq)}")
        start = center - size // 2
        positions = np.arange(start, start + size)
        g = gram_closed_form(system, positions=positions)
        c, big_c = riesz_bounds(g)
        lower.append(c)
        upper.append(big_c)
    rows = list(zip(req.window_sizes, lower, upper))
    return RieszResponse(
        window_sizes=req.window_sizes,
        lower=lower,
        upper=upper,
        bounds_csv=csv_text(["N", "c", "C"], rows),
    )


@app.post("/basis/aob", response_model=AobResponse)
def aob(req: AobRequest):
    theta = _theta_from(req.theta)
    seq = generate_sequence(req.generator.to_params())
    system = build_kernel_system(theta, seq)
    order = outward_positions(len(seq), len(seq) // 2)
    g = gram_closed_form(system, positions=order)
    tails = aob_constants(g, req.tail_starts)
    verdict = aob_verdict(req.tail_starts, tails)
    rows = [(s, c, C) for s, (c, C) in zip(req.tail_starts, tails)]
    return AobResponse(
        tail_starts=req.tail_starts,
        lower=[c for c, _ in tails],
        upper=[C for _, C in tails],
        verdict=verdict,
        tails_csv=csv_text(["tail_start", "c_N", "C_N"], rows),
    )


@app.post("/basis/angle", response_model=AngleResponse)
def angle(req: AngleRequest):
    theta = _theta_from(req.theta)
    seq = generate_sequence(req.generator.to_params())
    inner = clark_inner(seq)
    system = build_kernel_system(theta, seq, clark=inner)
    order = outward_positions(len(seq), len(seq) // 2)
    cosines = [
        float(subspace_angle_cosine(system, inner, order[s:], resolution=req.resolution))
        for s in req.tail_starts
    ]
    rows = list(zip(req.tail_starts, cosines))
    return AngleResponse(
        tail_starts=req.tail_starts,
        cosines=cosines,
        angles_csv=csv_text(["tail_start", "cosine"], rows),
    )


@app.post("/toeplitz/analyze", response_model=ToeplitzResponse)
def toeplitz_analyze(req: ToeplitzRequest):
    symbol = _symbol_from(req.symbol)
    spec = section_spectrum(symbol, req.sizes, tau=req.tau)
    csv_dump = spectrum_csv(spec.sizes, spec.singular_values)
    trace_dump = trace_csv(symbol.trace.samples) if req.include_trace else None
    if req.detector == "invertibility":
        verdict = invertibility_verdict(symbol, req.sizes)
        return ToeplitzResponse(
            verdict=verdict.verdict, evidence=verdict.evidence,
            winding=spec.winding, spectrum_csv=csv_dump,
            provenance=symbol.provenance, trace_csv=trace_dump,
        )
    if req.detector == "unitary_plus_compact":
        verdict = unitary_plus_compact_verdict(symbol, req.sizes, tau=req.tau)
        return ToeplitzResponse(
            verdict=verdict.verdict, evidence=verdict.evidence,
            winding=spec.winding, spectrum_csv=csv_dump,
            provenance=symbol.provenance, trace_csv=trace_dump,
        )
    hank = hankel_decay(symbol, max(req.sizes))
    evidence = {
        "sizes": spec.sizes,
        "sigma_min": spec.sigma_min,
        "outlier_counts": spec.outlier_counts,
        "tau": spec.tau,
        "hankel_tail_ratios": hank.tail_ratios,
        "hankel_tail_slope": hank.tail_slope,
        "hankel_compact_flag": hank.compact_flag,
    }
    return ToeplitzResponse(
        verdict=None, evidence=evidence, winding=spec.winding,
        spectrum_csv=csv_dump, provenance=symbol.provenance, trace_csv=trace_dump,
    )


@app.post("/hardy/hilbert", response_model=HilbertResponse)
def hilbert(req: HilbertRequest):
    fun = _function_from(req.function)
    grid = np.linspace(req.grid_min, req.grid_max, req.n_grid)
    vals = hilbert_transform(fun, grid, n=req.resolution)
    anchor = pv_hilbert_value(fun, 0.0)
    check = abs(float(hilbert_transform(fun, np.array([0.0]), n=req.resolution)[0]) - anchor)
    rows = list(zip(grid, vals))
    return HilbertResponse(
        grid=[float(x) for x in grid],
        values=[float(v) for v in vals],
        anchor_constant_check=check,
        values_csv=csv_text(["x", "value"], rows),
    )


@app.get("/scenarios", response_model=list[ScenarioInfo])
def scenarios_index():
    return [ScenarioInfo(**info) for info in list_scenarios()]


@app.post("/scenarios/{name}/run", response_model=ScenarioRunResponse)
def scenario_run(name: str, req: ScenarioRunRequest):
    if name not in {info["name"] for info in list_scenarios()}:
        raise HTTPException(status_code=404, detail=f"unknown scenario {name!r}")
    result = run_scenario(name, params=req.params, seed=req.seed)
    return ScenarioRunResponse(
        scenario=result.name,
        passed=result.passed,
        report=result.report_dict(),
        files=result.files(),
    )
