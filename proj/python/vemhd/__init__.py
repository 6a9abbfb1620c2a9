# Copyright The vemhd Authors.
# SPDX-License-Identifier: Apache-2.0
"""Lowest-order virtual element discretization of 2D resistive MHD."""

from ._vemhd import (
    ConvergenceRow,
    ExperimentConfig,
    InfSupError,
    MeshError,
    MeshKind,
    PolyMesh,
    ReconnectionConfig,
    ReconstructionKind,
    build_chain,
    check_suite,
    convergence_mesh,
    infsup_probe,
    interp_E,
    interp_V,
    make_mesh,
    run_convergence,
    run_reconnection,
)

__all__ = [
    "ConvergenceRow",
    "ExperimentConfig",
    "InfSupError",
    "MeshError",
    "MeshKind",
    "PolyMesh",
    "ReconnectionConfig",
    "ReconstructionKind",
    "build_chain",
    "check_suite",
    "convergence_mesh",
    "infsup_probe",
    "interp_E",
    "interp_V",
    "make_mesh",
    "run_convergence",
    "run_reconnection",
]
