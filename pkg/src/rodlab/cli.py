"""Command-line client for the rod laboratory.

The CLI is a thin client of the HTTP service: by default it mounts the
FastAPI app in-process (no socket), and with --server it talks to a running
instance instead, so scripted runs and remote runs produce identical files.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import asyncio
import json
import logging
import sys
from pathlib import Path

import click
import httpx

log = logging.getLogger("rodlab")

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class ServiceClient:
    """POST JSON to the service, in-process by default."""

    def __init__(self, server: str | None):
        self.server = server

    def post(self, path: str, payload: dict) -> dict:
        if self.server:
            r = httpx.post(self.server.rstrip("/") + path, json=payload, timeout=1200)
            return self._unwrap(r)
        return self._unwrap(asyncio.run(self._post_inproc(path, payload)))

    async def _post_inproc(self, path: str, payload: dict) -> httpx.Response:
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://rodlab.local", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    @staticmethod
    def _unwrap(r: httpx.Response) -> dict:
        if r.status_code == 200:
            return r.json()
        try:
            body = r.json()
        except ValueError:
            body = {"error": "HTTPError", "detail": r.text}
        detail = f"{body.get('error', 'error')}: {body.get('detail', body)}"
        log.error(detail)
        click.echo(detail, err=True)
        sys.exit(EXIT_NUMERICAL if r.status_code >= 500 else EXIT_VALIDATION)


def _setup_logging(json_logs: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    if json_logs:
        class JsonFormatter(logging.Formatter):
            def format(self, record):
                return json.dumps(
                    {"level": record.levelname, "name": record.name,
                     "message": record.getMessage()}
                )

        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logging.basicConfig(level=logging.INFO, handlers=[handler], force=True)


def _write(out_dir: Path, name: str, content: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    p = out_dir / name
    p.write_text(content)
    log.info("wrote %s", p)
    return p


def _dump(obj: dict) -> str:
    from .exports import json_dumps

    return json_dumps(obj)


def _load_qpath(path: str) -> dict:
    """Accept a bare QuatPath JSON or any summary containing one."""
    data = json.loads(Path(path).read_text())
    for key in ("q", "limit"):
        if key in data and isinstance(data[key], dict) and "z" in data[key]:
            return data[key]
    if "z" in data and "w" in data:
        return {"z": data["z"], "w": data["w"]}
    raise click.UsageError(f"{path} does not contain a coefficient path")


@click.group()
@click.option("--seed", default=0, show_default=True, help="Seed for randomized steps.")
@click.option("--out", default="out", show_default=True, help="Output directory.")
@click.option("--grid-size", default=1024, show_default=True)
@click.option("--json-logs", is_flag=True, help="Emit log lines as JSON.")
@click.option("--server", default=None, help="URL of a running service (default: in-process).")
@click.pass_context
def main(ctx, seed, out, grid_size, json_logs, server):
    """Computational laboratory for generalized elastic rods."""
    _setup_logging(json_logs)
    ctx.obj = {
        "seed": seed,
        "out": Path(out),
        "grid_size": grid_size,
        "client": ServiceClient(server),
    }


def _parse_u_list(u: str) -> list[float]:
    vals = [float(x) for x in u.split(",") if x.strip() != ""]
    if not vals:
        raise click.UsageError("empty u list")
    for v in vals:
        if not 0.0 <= v <= 1.0:
            raise click.UsageError(f"u={v} outside [0, 1]")
    return vals


@main.command()
@click.option("--h", "h", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--u", "u", required=True, help="Comma-separated list of u values in [0, 1].")
@click.option("--epsilon", default=1e-3, show_default=True, help="Pushoff size for linking.")
@click.option("--tube-scale", default=None, type=float, help="Tube radius per unit speed.")
@click.option("--skip-linking", is_flag=True)
@click.pass_context
def family(ctx, h, k, u, epsilon, tube_scale, skip_linking):
    """Critical family member(s) q_u: curve CSV, tube mesh, knot summary."""
    client: ServiceClient = ctx.obj["client"]
    for uv in _parse_u_list(u):
        tag = f"family_h{h}_k{k}_u{uv:g}"
        summary = client.post(
            "/family",
            {
                "params": {"h": h, "k": k, "u": uv},
                "grid_size": ctx.obj["grid_size"],
                "seed": ctx.obj["seed"],
                "with_knot_report": True,
                "with_linking": not skip_linking,
                "epsilon": epsilon,
            },
        )
        qj = summary["q"]
        csv_out = client.post(
            "/export", {"q": qj, "format": "csv", "grid_size": ctx.obj["grid_size"]}
        )
        obj_out = client.post(
            "/export",
            {
                "q": qj,
                "format": "obj",
                "grid_size": ctx.obj["grid_size"],
                "tube_scale": tube_scale,
            },
        )
        _write(ctx.obj["out"], tag + ".csv", csv_out["content"])
        _write(ctx.obj["out"], tag + ".obj", obj_out["content"])
        _write(ctx.obj["out"], tag + ".json", _dump(summary))
        knot = (summary.get("knot_report") or {}).get("knot")
        click.echo(f"u={uv:g}: energy={summary['energy']:.6f} knot={knot} "
                   f"linking={summary['linking']}")


@main.command()
@click.option("--init", type=click.Choice(["random", "file"]), default="random", show_default=True)
@click.option("--init-file", default=None, help="Curve JSON when --init file.")
@click.option("--max-frequency", default=5, show_default=True)
@click.option("--parity", type=click.Choice(["even", "odd"]), default="even", show_default=True)
@click.option("--step", default=1e-3, show_default=True)
@click.option("--grad-tol", default=1e-8, show_default=True)
@click.option("--max-iter", default=200000, show_default=True)
@click.option("--record-every", default=100, show_default=True)
@click.pass_context
def flow(ctx, init, init_file, max_frequency, parity, step, grad_tol, max_iter, record_every):
    """Projected gradient flow to a critical point."""
    client: ServiceClient = ctx.obj["client"]
    payload = {
        "seed": ctx.obj["seed"],
        "max_frequency": max_frequency,
        "parity": parity,
        "step": step,
        "grad_tol": grad_tol,
        "max_iter": max_iter,
        "record_every": record_every,
    }
    if init == "file":
        if not init_file:
            raise click.UsageError("--init file requires --init-file")
        payload["init"] = "given"
        payload["q"] = _load_qpath(init_file)
    else:
        payload["init"] = "random"
    res = client.post("/flow", payload)
    from .exports import flow_csv
    import numpy as np

    tag = f"flow_seed{ctx.obj['seed']}"
    _write(ctx.obj["out"], tag + "_trajectory.csv", flow_csv(np.array(res["trajectory"])))
    _write(ctx.obj["out"], tag + ".json", _dump(res))
    cls = res["classified"]
    label = f"(c, d) = ({cls['c']}, {cls['d']})" if cls else "unclassified"
    click.echo(
        f"converged={res['converged']} iterations={res['iterations']} "
        f"energy={res['energy']:.10f} residual={res['residual']:.3e} {label}"
    )
    if not res["converged"]:
        sys.exit(EXIT_NUMERICAL)


@main.command()
@click.argument("curve_file")
@click.option("--fit-tol", default=1e-8, show_default=True)
@click.pass_context
def classify(ctx, curve_file, fit_tol):
    """Critical-point test and normal form of a coefficient path file."""
    client: ServiceClient = ctx.obj["client"]
    res = client.post("/classify", {"q": _load_qpath(curve_file), "fit_tol": fit_tol})
    _write(ctx.obj["out"], "classify.json", _dump(res))
    if res["critical"]:
        nf = res["normal_form"]
        click.echo(f"critical: normal form c={nf['c']} d={nf['d']}")
    else:
        click.echo(f"not critical (fit residual {res['fit_residual']:.3e})")


@main.command()
@click.argument("curve_file")
@click.pass_context
def invariants(ctx, curve_file):
    """Curvatures, twist and stretch rates along the curve."""
    client: ServiceClient = ctx.obj["client"]
    res = client.post(
        "/invariants",
        {"q": _load_qpath(curve_file), "grid_size": ctx.obj["grid_size"]},
    )
    _write(ctx.obj["out"], "invariants.json", _dump(res))
    click.echo(f"energy={res['energy']:.10f} closure={res['closure']}")


@main.command()
@click.option("--c-max", default=5, show_default=True)
@click.pass_context
def spectrum(ctx, c_max):
    """Table of critical energy levels, sorted ascending."""
    client: ServiceClient = ctx.obj["client"]
    res = client.post("/spectrum", {"c_max": c_max})
    _write(ctx.obj["out"], "spectrum.json", _dump(res))
    for lv in res["levels"]:
        click.echo(f"c={lv['c']:3d} d={lv['d']:3d} energy={lv['energy']:.10f}")


@main.command()
@click.argument("curve_file")
@click.option("--format", "fmt", type=click.Choice(["csv", "obj", "json"]), required=True)
@click.option("--tube-scale", default=None, type=float)
@click.pass_context
def export(ctx, curve_file, fmt, tube_scale):
    """Export a coefficient path file as curve CSV, tube OBJ, or JSON."""
    client: ServiceClient = ctx.obj["client"]
    res = client.post(
        "/export",
        {
            "q": _load_qpath(curve_file),
            "format": fmt,
            "grid_size": ctx.obj["grid_size"],
            "tube_scale": tube_scale,
        },
    )
    stem = Path(curve_file).stem
    _write(ctx.obj["out"], f"{stem}.{fmt if fmt != 'json' else 'export.json'}", res["content"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
