"""Convex hypersurfaces: curvature bounds, the contracted Gauss solve and reconstruction."""

import json

from ._isoembed import (
    ConfigError,
    ConvergenceError,
    DomainError,
    EmbeddabilityObstruction,
    Family,
    PreconditionError,
    __version__,
    align_rigid,
    bounds,
    cone_report,
    det_gn,
    diameter,
    evaluate,
    phi,
    phi_inverse,
    random_chart_points,
    reconstruct,
    sigma,
    sigma_all,
    solve_contracted_gauss,
)
from ._isoembed import _run_json, _strip_timing
from ._isoembed import format_report as _format_report


def run(command, config=None):
    """Run a CLI command ("verify", "solve", "reconstruct" or "family") and return the report."""
    return json.loads(_run_json(command, json.dumps(config or {})))


def strip_timing(report):
    """The report with every wall-time field removed."""
    return json.loads(_strip_timing(json.dumps(report)))


def format_report(report):
    """Text summary of a report."""
    return _format_report(json.dumps(report))


__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "EmbeddabilityObstruction",
    "Family",
    "PreconditionError",
    "__version__",
    "align_rigid",
    "bounds",
    "cone_report",
    "det_gn",
    "diameter",
    "evaluate",
    "format_report",
    "phi",
    "phi_inverse",
    "random_chart_points",
    "reconstruct",
    "run",
    "sigma",
    "sigma_all",
    "solve_contracted_gauss",
    "strip_timing",
]
