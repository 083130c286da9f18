"""HTTP service exposing the rod laboratory.

Thin wrapper: every endpoint converts its pydantic request into core types,
calls the library, and wraps the result.  Validation failures map to 422,
numerical failures (non-convergence, degenerate projections, intersecting
components) to 500; both carry {"error", "detail"} bodies.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import errors as err
from ..families import (
    CriticalParams,
    FamilyParams,
    energy_level,
    family,
    normal_form,
    predicted_knot,
    singular_u,
)
from ..exports import curve_csv, json_dumps, tube_obj
from ..fourier import FourierSeries
from ..framed import QuatPath, closure_report, hopf, invariants
from ..knots import knot_report, linking
from ..variational import StiefelPoint, energy, fit_lambda, flow, retract
from . import schemas as sc

NUMERICAL = (
    err.NoConvergence,
    err.NonGenericProjection,
    err.ContinuumCoincidence,
    err.RankDeficient,
    err.NotEmbedded,
    err.ComponentsIntersect,
    err.DegenerateQuaternion,
)

app = FastAPI(title="rodlab", version="0.1.0")


@app.exception_handler(err.RodlabError)
async def _rodlab_error(request, exc: err.RodlabError):
    status = 500 if isinstance(exc, NUMERICAL) else 422
    return JSONResponse(
        status_code=status,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


def _series_out(s: FourierSeries) -> list[sc.SeriesCoeff]:
    return [sc.SeriesCoeff(**rec) for rec in s.to_json()]


def _qpath_out(q: QuatPath) -> sc.QuatPathModel:
    return sc.QuatPathModel(z=_series_out(q.z), w=_series_out(q.w))


def _qpath_in(m: sc.QuatPathModel) -> QuatPath:
    return QuatPath(
        FourierSeries.from_json([c.model_dump() for c in m.z]),
        FourierSeries.from_json([c.model_dump() for c in m.w]),
    )


def _critical_out(cp: CriticalParams) -> sc.CriticalParamsModel:
    return sc.CriticalParamsModel(
        c=cp.c,
        d=cp.d,
        xi1=sc.ComplexNumber.wrap(complex(cp.xi1)),
        xi2=sc.ComplexNumber.wrap(complex(cp.xi2)),
        zeta1=sc.ComplexNumber.wrap(complex(cp.zeta1)),
        zeta2=sc.ComplexNumber.wrap(complex(cp.zeta2)),
    )


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/family", response_model=sc.FamilyResponse)
def family_endpoint(req: sc.FamilyRequest) -> sc.FamilyResponse:
    fp = FamilyParams(req.params.h, req.params.k, req.params.u)
    point, fc = family(fp, grid_size=req.grid_size)
    try:
        su = singular_u(fp.h, fp.k)
    except err.RodlabError:
        su = None
    try:
        pred = predicted_knot(fp).to_json()
    except err.GcdViolation as exc:
        pred = {"kind": "unavailable", "detail": str(exc)}
    report = knot_report(fc, seed=req.seed) if req.with_knot_report else None
    lk = linking(fc, req.epsilon, seed=req.seed) if req.with_linking else None
    return sc.FamilyResponse(
        config=req,
        energy=energy(point.q),
        energy_level=energy_level(fp.h + fp.k, fp.h - fp.k),
        singular_u=su,
        predicted_knot=pred,
        q=_qpath_out(point.q),
        closure=closure_report(point.q),
        knot_report=report,
        linking=lk,
    )


def _random_path(seed: int, max_freq: int, parity: str) -> StiefelPoint:
    rng = np.random.default_rng(seed)
    start = 0 if parity == "even" else 1
    ks = [k for k in range(-max_freq, max_freq + 1) if (k - start) % 2 == 0]

    def draw() -> FourierSeries:
        co = rng.normal(size=len(ks)) + 1j * rng.normal(size=len(ks))
        return FourierSeries({k: c for k, c in zip(ks, co)})

    return retract(QuatPath(draw(), draw()))


@app.post("/flow", response_model=sc.FlowResponse)
def flow_endpoint(req: sc.FlowRequest) -> sc.FlowResponse:
    if req.init == "given":
        if req.q is None:
            raise err.BadParity("init='given' requires q")
        q0 = retract(_qpath_in(req.q))
    else:
        q0 = _random_path(req.seed, req.max_frequency, req.parity)
    res = flow(
        q0,
        step=req.step,
        grad_tol=req.grad_tol,
        max_iter=req.max_iter,
        record_every=req.record_every,
    )
    return sc.FlowResponse(
        config=req,
        converged=res.converged,
        iterations=res.iterations,
        energy=energy(res.limit.q),
        residual=res.residual,
        fit_residual=res.fit_residual,
        left_open_stratum=res.left_open_stratum,
        classified=_critical_out(res.classified) if res.classified else None,
        trajectory=[[float(v) for v in row] for row in res.trajectory],
        limit=_qpath_out(res.limit.q),
    )


@app.post("/classify", response_model=sc.ClassifyResponse)
def classify_endpoint(req: sc.ClassifyRequest) -> sc.ClassifyResponse:
    q = _qpath_in(req.q)
    point = StiefelPoint(q)
    fitted, fit_res = fit_lambda(q)
    if fit_res >= req.fit_tol:
        return sc.ClassifyResponse(
            config=req,
            critical=False,
            fit_residual=fit_res,
            detail="not critical: q'' is not a Hermitian multiple of q",
        )
    try:
        nf = normal_form(point, fit_tol=req.fit_tol)
    except err.NotCritical as exc:
        return sc.ClassifyResponse(
            config=req, critical=False, fit_residual=fit_res, detail=str(exc)
        )
    return sc.ClassifyResponse(
        config=req,
        critical=True,
        fit_residual=fit_res,
        normal_form=_critical_out(nf),
        eigenvalues=[float(v) for v in fitted.eigenvalues()],
        detail="normal form computed",
    )


@app.post("/invariants", response_model=sc.InvariantsResponse)
def invariants_endpoint(req: sc.InvariantsRequest) -> sc.InvariantsResponse:
    q = _qpath_in(req.q)
    trace = invariants(q, grid_size=req.grid_size)
    t = trace.grid
    zt, wt = q.z.eval(t), q.w.eval(t)
    speed = (np.abs(zt) ** 2 + np.abs(wt) ** 2).tolist()
    return sc.InvariantsResponse(
        config=req,
        energy=energy(q),
        closure=closure_report(q),
        grid=t.tolist(),
        kappa1=trace.kappa1.tolist(),
        kappa2=trace.kappa2.tolist(),
        tw=trace.tw.tolist(),
        st=trace.st.tolist(),
        speed=speed,
    )


@app.post("/spectrum", response_model=sc.SpectrumResponse)
def spectrum_endpoint(req: sc.SpectrumRequest) -> sc.SpectrumResponse:
    levels = []
    for c in range(1, req.c_max + 1):
        for d in range(c % 2, c + 1, 2):
            levels.append(sc.SpectrumLevel(c=c, d=d, energy=energy_level(c, d)))
    levels.sort(key=lambda lv: (lv.energy, lv.c, lv.d))
    return sc.SpectrumResponse(config=req, levels=levels)


@app.post("/export", response_model=sc.ExportResponse)
def export_endpoint(req: sc.ExportRequest) -> sc.ExportResponse:
    q = _qpath_in(req.q)
    fc = hopf(q, grid_size=req.grid_size)
    if req.format == "csv":
        content = curve_csv(fc)
    elif req.format == "obj":
        content = tube_obj(fc, tube_scale=req.tube_scale)
    else:
        content = json_dumps(
            {
                "q": q.to_json(),
                "energy": energy(q),
                "closure": closure_report(q),
                "gamma": fc.gamma,
                "frame": fc.frame,
                "speed": fc.speed,
                "grid": fc.grid,
            }
        )
    return sc.ExportResponse(config=req, content=content)
