"""Wave-driven desalination co-design toolkit (Python bindings)."""

from ._core import (
    ConfigError,
    HydroFormatError,
    NdbcFormatError,
    design_bounds,
    evaluate,
    kmeans,
    load_params,
    mesh_resolution,
    nominal_design,
    optimize,
    params_checksum,
    parse_ndbc,
    pm_spectrum,
    reference_design,
    size_plant,
    surrogate_coefficients,
)

__all__ = [
    "ConfigError",
    "HydroFormatError",
    "NdbcFormatError",
    "design_bounds",
    "evaluate",
    "kmeans",
    "load_params",
    "mesh_resolution",
    "nominal_design",
    "optimize",
    "params_checksum",
    "parse_ndbc",
    "pm_spectrum",
    "reference_design",
    "size_plant",
    "surrogate_coefficients",
]
