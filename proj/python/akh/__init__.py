"""Almost Kahler harmonic-form verification (Python bindings)."""

import json

from ._akh import (
    AkhError,
    ArgumentError,
    DomainError,
    ParseError,
    PreconditionError,
    RecipeError,
    ValidationError,
    catalog,
    croke_constants,
    sphere_volume,
    suites,
)
from . import _akh

__all__ = [
    "AkhError",
    "ArgumentError",
    "DomainError",
    "ParseError",
    "PreconditionError",
    "RecipeError",
    "ValidationError",
    "catalog",
    "convergence",
    "croke_constants",
    "harmonic_table",
    "sphere_volume",
    "suites",
    "verify",
]


def verify(model, suites="all", seed=20240917, tol=None, resolutions=(8, 16, 32), samples=100):
    """Run suites on a catalog model/recipe or TOML path; returns (entries, meta)."""
    if not isinstance(suites, str):
        suites = ",".join(suites)
    report, meta = _akh._verify_json(model, suites, seed, tol, list(resolutions), samples)
    return json.loads(report), json.loads(meta)


def harmonic_table(model):
    """Harmonic dimension table as a dict."""
    return json.loads(_akh._harmonic_json(model))


def convergence(recipe, resolutions=(8, 16, 32), suites=(), seed=20240917):
    """Observed-order rows for a grid recipe."""
    return json.loads(_akh._convergence_json(recipe, list(resolutions), list(suites), seed))
