"""Command-line client for the rieszlab service.

The CLI is a thin HTTP client: every command builds a JSON request and
sends it to the service (in-process by default, or a remote instance via
--server), then writes any returned CSV/JSON artifacts under --out.

Exit codes: 0 all checks passed, 2 a scenario check failed, 1 execution
or configuration error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process transport over the same ASGI app the server would run
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app  # imported lazily: keeps --help fast

    return TestClient(app, raise_server_exceptions=False)


def _post(ctx, path: str, payload: dict) -> dict:
    with _client(ctx.obj.get("server")) as client:
        resp = client.post(path, json=payload)
    if resp.status_code >= 400:
        try:
            detail = resp.json()
        except Exception:  # noqa: BLE001
            detail = {"detail": resp.text}
        click.echo(f"error {resp.status_code}: {detail}", err=True)
        sys.exit(1)
    return resp.json()


def _write_out(out_dir, files: dict):
    if out_dir is None:
        return []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, content in sorted(files.items()):
        (out / name).write_text(content)
        written.append(str(out / name))
    return written


def _parse_window(window: str | None):
    if window is None:
        return None
    try:
        lo, hi = window.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError as exc:
        raise click.BadParameter("window must look like -40..40") from exc
    if lo != -hi:
        raise click.BadParameter("generators use symmetric windows: a must equal -b")
    return hi


def _generator_payload(kind, window, delta, rate, nu, calibrate, nodes_file):
    gen = {"kind": kind, "delta": delta, "rate": rate, "calibrate": calibrate}
    if nu is not None:
        gen["nu"] = nu
    half = _parse_window(window)
    if half is not None:
        gen["half"] = half
    if nodes_file is not None:
        gen["kind"] = "file"
        gen["path"] = str(nodes_file)
    return gen


def _theta_payload(theta_kind, exp_type, zeros):
    payload = {"kind": theta_kind, "exp_type": exp_type}
    if zeros:
        payload["zeros"] = [
            {"re": float(p.split(",")[0]), "im": float(p.split(",")[1])}
            for p in zeros.split(";")
            if p
        ]
    return payload


generator_options = [
    click.option("--kind", default="lattice", show_default=True,
                 type=click.Choice(["lattice", "perturbed", "decaying"])),
    click.option("--window", default="-40..40", show_default=True,
                 help="node label window a..b (symmetric)"),
    click.option("--delta", default=0.2, show_default=True, type=float),
    click.option("--rate", default=2.0, show_default=True, type=float),
    click.option("--nu", default=None, type=float, help="uniform Clark weight"),
    click.option("--calibrate", is_flag=True, help="zero the weighted node sum"),
    click.option("--nodes-file", default=None, type=click.Path(exists=True),
                 help="(index, value) CSV overriding the generator"),
]


def with_generator_options(fn):
    for opt in reversed(generator_options):
        fn = opt(fn)
    return fn


theta_options = [
    click.option("--theta-kind", default="exp", show_default=True,
                 type=click.Choice(["exp", "blaschke", "clark"])),
    click.option("--exp-type", default=6.283185307179586, show_default=True, type=float),
    click.option("--zeros", default="", help="Blaschke zeros re,im;re,im"),
]


def with_theta_options(fn):
    for opt in reversed(theta_options):
        fn = opt(fn)
    return fn


@click.group()
@click.option("--server", default=None, help="base URL of a running service "
              "(default: run the service in-process)")
@click.pass_context
def main(ctx, server):
    """Desk-scale diagnostics for reproducing-kernel bases of model spaces."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@with_generator_options
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def validate(ctx, kind, window, delta, rate, nu, calibrate, nodes_file, out):
    """Validate a node/weight window: separation and discrepancy."""
    gen = _generator_payload(kind, window, delta, rate, nu, calibrate, nodes_file)
    data = _post(ctx, "/sequences/validate", {"generator": gen})
    click.echo(
        f"nodes: {data['count']}  delta: {data['delta']:.6g}  "
        f"discrepancy: {data['discrepancy']:.6g}  weight mass: {data['weight_mass']:.6g}"
    )
    _write_out(out, {"nodes.csv": data["nodes_csv"]})


@main.command()
@with_generator_options
@click.option("--points", default="0.25,0.5", show_default=True,
              help="evaluation points re,im;re,im")
@click.option("--compensate/--no-compensate", default=True, show_default=True)
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def clark(ctx, kind, window, delta, rate, nu, calibrate, nodes_file, points,
          compensate, out):
    """Evaluate the Clark inner function of a node window."""
    gen = _generator_payload(kind, window, delta, rate, nu, calibrate, nodes_file)
    pts = [{"re": float(p.split(",")[0]), "im": float(p.split(",")[1])}
           for p in points.split(";") if p]
    data = _post(ctx, "/inner/clark/eval", {
        "generator": gen, "points": pts, "compensate": compensate,
    })
    for p, v in zip(pts, data["values"]):
        click.echo(f"I({p['re']}+{p['im']}i) = {v['re']:.12g} + {v['im']:.12g}i")
    click.echo(f"max node deviation: {data['max_node_deviation']:.3e}  "
               f"Herglotz positive: {data['herglotz_positive']}")
    _write_out(out, {"clark_spec.json": data["spec_json"]})


@main.command()
@with_theta_options
@with_generator_options
@click.option("--outward", is_flag=True)
@click.option("--quad-check", is_flag=True, help="cross-check against quadrature")
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def gram(ctx, theta_kind, exp_type, zeros, kind, window, delta, rate, nu,
         calibrate, nodes_file, outward, quad_check, out):
    """Closed-form Gram matrix of normalized kernels."""
    data = _post(ctx, "/kernels/gram", {
        "theta": _theta_payload(theta_kind, exp_type, zeros),
        "generator": _generator_payload(kind, window, delta, rate, nu, calibrate, nodes_file),
        "outward": outward,
        "quadrature_check": quad_check,
    })
    click.echo(
        f"size: {data['size']}  lambda_min: {data['lambda_min']:.6g}  "
        f"lambda_max: {data['lambda_max']:.6g}  max offdiag: {data['max_offdiagonal']:.3e}"
    )
    if data.get("quadrature_max_deviation") is not None:
        click.echo(f"quadrature deviation: {data['quadrature_max_deviation']:.3e}")
    sidecar = {k: v for k, v in data.items() if k != "gram_csv"}
    _write_out(out, {"gram.csv": data["gram_csv"],
                     "gram_window.json": json.dumps(sidecar, sort_keys=True, indent=2) + "\n"})


@main.command()
@with_theta_options
@with_generator_options
@click.option("--sizes", default="50,100,200", show_default=True)
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def riesz(ctx, theta_kind, exp_type, zeros, kind, window, delta, rate, nu,
          calibrate, nodes_file, sizes, out):
    """Riesz-sequence bounds (c, C) over nested windows."""
    data = _post(ctx, "/basis/riesz", {
        "theta": _theta_payload(theta_kind, exp_type, zeros),
        "generator": _generator_payload(kind, window, delta, rate, nu, calibrate, nodes_file),
        "window_sizes": [int(s) for s in sizes.split(",")],
    })
    for n, c, C in zip(data["window_sizes"], data["lower"], data["upper"]):
        click.echo(f"N={n}: c={c:.6g}  C={C:.6g}")
    _write_out(out, {"riesz_bounds.csv": data["bounds_csv"]})


@main.command()
@with_theta_options
@with_generator_options
@click.option("--tails", default="0,5,10,15,20", show_default=True)
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def aob(ctx, theta_kind, exp_type, zeros, kind, window, delta, rate, nu,
        calibrate, nodes_file, tails, out):
    """Tail Riesz constants (c_N, C_N) in outward enumeration."""
    data = _post(ctx, "/basis/aob", {
        "theta": _theta_payload(theta_kind, exp_type, zeros),
        "generator": _generator_payload(kind, window, delta, rate, nu, calibrate, nodes_file),
        "tail_starts": [int(s) for s in tails.split(",")],
    })
    for s, c, C in zip(data["tail_starts"], data["lower"], data["upper"]):
        click.echo(f"tail {s}: c_N={c:.6g}  C_N={C:.6g}")
    click.echo(f"aob proxy: {data['verdict']['aob_proxy']} "
               f"(threshold {data['verdict']['threshold']})")
    _write_out(out, {"aob_tails.csv": data["tails_csv"]})


@main.command()
@with_theta_options
@with_generator_options
@click.option("--tails", default="5,10,20,40", show_default=True)
@click.option("--grid", "resolution", default=None, type=int,
              help="circle resolution (power of two)")
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def angle(ctx, theta_kind, exp_type, zeros, kind, window, delta, rate, nu,
          calibrate, nodes_file, tails, resolution, out):
    """Cosines of kernel-tail angles to I H^2."""
    data = _post(ctx, "/basis/angle", {
        "theta": _theta_payload(theta_kind, exp_type, zeros),
        "generator": _generator_payload(kind, window, delta, rate, nu, calibrate, nodes_file),
        "tail_starts": [int(s) for s in tails.split(",")],
        "resolution": resolution,
    })
    for s, c in zip(data["tail_starts"], data["cosines"]):
        click.echo(f"tail {s}: cos = {c:.6g}")
    _write_out(out, {"angles.csv": data["angles_csv"]})


@main.command()
@with_theta_options
@with_generator_options
@click.option("--symbol", "symbol_kind", default="inner_pair", show_default=True,
              type=click.Choice(["inner_pair", "synthesized", "cayley_power"]))
@click.option("--detector", default="invertibility", show_default=True,
              type=click.Choice(["invertibility", "unitary_plus_compact", "spectrum"]))
@click.option("--sizes", default="64,128,256", show_default=True)
@click.option("--tau", default=0.1, show_default=True, type=float)
@click.option("--k", default=1, show_default=True, type=int, help="cayley_power exponent")
@click.option("--grid", "resolution", default=4096, show_default=True, type=int,
              help="circle resolution (power of two)")
@click.option("--dump-trace", is_flag=True, help="also write the symbol trace CSV")
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def toeplitz(ctx, theta_kind, exp_type, zeros, kind, window, delta, rate, nu,
             calibrate, nodes_file, symbol_kind, detector, sizes, tau, k,
             resolution, dump_trace, out):
    """Finite-section detectors for Toeplitz symbols."""
    symbol = {
        "kind": symbol_kind,
        "theta": _theta_payload(theta_kind, exp_type, zeros),
        "sequence": _generator_payload(kind, window, delta, rate, nu, calibrate, nodes_file),
        "k": k,
        "resolution": resolution,
    }
    data = _post(ctx, "/toeplitz/analyze", {
        "symbol": symbol,
        "sizes": [int(s) for s in sizes.split(",")],
        "tau": tau,
        "detector": detector,
        "include_trace": dump_trace,
    })
    click.echo(f"verdict: {data['verdict']}  winding: {data['winding']}")
    for key in ("sigma_min", "outlier_counts", "reason"):
        if key in data["evidence"]:
            click.echo(f"  {key}: {data['evidence'][key]}")
    files = {"spectrum.csv": data["spectrum_csv"],
             "evidence.json": json.dumps(data["evidence"], sort_keys=True, indent=2) + "\n",
             "symbol.json": json.dumps(data["provenance"], sort_keys=True, indent=2) + "\n"}
    if data.get("trace_csv"):
        files["trace.csv"] = data["trace_csv"]
    _write_out(out, files)


@main.group()
def scenario():
    """Run or list the reproducible cross-check scenarios."""


@scenario.command("list")
@click.option("--machine", is_flag=True, help="JSON output")
@click.option("--filter", "name_filter", default=None)
@click.pass_context
def scenario_list(ctx, machine, name_filter):
    with _client(ctx.obj.get("server")) as client:
        resp = client.get("/scenarios")
    if resp.status_code >= 400:
        click.echo(f"error {resp.status_code}", err=True)
        sys.exit(1)
    infos = resp.json()
    if name_filter:
        infos = [i for i in infos if name_filter in i["name"]]
    if machine:
        click.echo(json.dumps(infos, sort_keys=True, indent=2))
        return
    for info in infos:
        click.echo(f"{info['name']}")
        click.echo(f"    {info['description']}")
        click.echo(f"    defaults: {json.dumps(info['defaults'], sort_keys=True)}")


@scenario.command("run")
@click.argument("name")
@click.option("--config", default=None, type=click.Path(exists=True),
              help="JSON file of parameter overrides")
@click.option("--param", "params", multiple=True, help="override key=value")
@click.option("--seed", default=None, type=int)
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def scenario_run(ctx, name, config, params, seed, out):
    """Run one scenario and write its report files."""
    overrides = {}
    if config:
        overrides.update(json.loads(Path(config).read_text()))
    for item in params:
        key, _, value = item.partition("=")
        try:
            overrides[key] = json.loads(value)
        except json.JSONDecodeError:
            overrides[key] = value
    with _client(ctx.obj.get("server")) as client:
        resp = client.post(f"/scenarios/{name}/run",
                           json={"params": overrides, "seed": seed})
    if resp.status_code == 404:
        click.echo(f"unknown scenario {name!r}", err=True)
        sys.exit(1)
    if resp.status_code >= 400:
        try:
            detail = resp.json()
        except Exception:  # noqa: BLE001
            detail = resp.text
        click.echo(f"error {resp.status_code}: {detail}", err=True)
        sys.exit(1)
    data = resp.json()
    for check in data["report"]["checks"]:
        mark = "PASS" if check["passed"] else "FAIL"
        click.echo(f"[{mark}] {check['name']}: {check['value']!r} "
                   f"{check['relation']} {check['threshold']!r}")
    written = _write_out(out, data["files"])
    for path in written:
        click.echo(f"wrote {path}")
    sys.exit(0 if data["passed"] else 2)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service with uvicorn."""
    import uvicorn

    uvicorn.run("rieszlab.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
