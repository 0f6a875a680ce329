"""FastAPI application wrapping the core toolkit."""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..experiments import (DEFAULTS, ScenarioError, emit_psd_figure, figure_to_csv,
                           figure_to_svg, rows_to_csv, run_sweep, scenario_from_mapping,
                           scenario_to_mapping)
from ..experiments.sweep import CSV_COLUMNS
from .schemas import (HealthResponse, Marker, PsdRequest, PsdResponse, SweepRequest,
                      SweepResponse, ValidateRequest, ValidateResponse)


def _parse_scenario(mapping):
    try:
        return scenario_from_mapping(mapping)
    except ScenarioError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def create_app() -> FastAPI:
    api = FastAPI(title="biofetrx service", version=__version__)

    @api.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(version=__version__)

    @api.get("/defaults")
    def defaults():
        return scenario_to_mapping(scenario_from_mapping(dict(DEFAULTS)))

    @api.post("/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest):
        try:
            scn = scenario_from_mapping(req.scenario)
        except ScenarioError as exc:
            return ValidateResponse(valid=False, errors=[str(exc)])
        return ValidateResponse(valid=True, normalized=scenario_to_mapping(scn))

    @api.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest):
        scn = _parse_scenario(req.scenario)
        rows = run_sweep(scn, trials=req.trials, seed=req.seed, threads=req.threads,
                         mc_observable=req.mc_observable)
        names = [name for name, _ in CSV_COLUMNS]
        dicts = [{name: (None if isinstance(v := getattr(r, name), float) and math.isnan(v) else v)
                  for name in names} for r in rows]
        return SweepResponse(columns=names, rows=dicts, csv=rows_to_csv(rows))

    @api.post("/psd", response_model=PsdResponse)
    def psd(req: PsdRequest):
        scn = _parse_scenario(req.scenario)
        fig = emit_psd_figure(scn, n_points=req.points, f_min=req.f_min, f_max=req.f_max)
        return PsdResponse(
            markers=[Marker(label=lbl, frequency_hz=f) for lbl, f in fig.markers],
            csv=figure_to_csv(fig),
            svg=figure_to_svg(fig) if req.svg else None,
        )

    return api


app = create_app()
