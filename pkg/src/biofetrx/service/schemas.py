"""Pydantic request/response models for the HTTP service.

Scenario payloads are free-form mappings validated by the core scenario
loader, so the service and the YAML config share one source of truth.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str


class SweepRequest(BaseModel):
    scenario: dict[str, Any] = Field(default_factory=dict)
    trials: Optional[int] = Field(default=None, ge=0, description="override scenario.trials")
    seed: Optional[int] = Field(default=None, ge=0, description="override scenario.seed")
    threads: int = Field(default=1, ge=1, le=64)
    mc_observable: str = Field(default="gaussian", pattern="^(gaussian|binomial)$")


class SweepResponse(BaseModel):
    columns: list[str]
    rows: list[dict[str, Any]]
    csv: str


class PsdRequest(BaseModel):
    scenario: dict[str, Any] = Field(default_factory=dict)
    points: int = Field(default=240, ge=16, le=1000)
    f_min: Optional[float] = Field(default=None, gt=0)
    f_max: Optional[float] = Field(default=None, gt=0)
    svg: bool = True


class Marker(BaseModel):
    label: str
    frequency_hz: float


class PsdResponse(BaseModel):
    markers: list[Marker]
    csv: str
    svg: Optional[str] = None


class ValidateRequest(BaseModel):
    scenario: dict[str, Any] = Field(default_factory=dict)


class ValidateResponse(BaseModel):
    valid: bool
    errors: list[str] = Field(default_factory=list)
    normalized: Optional[dict[str, Any]] = None
