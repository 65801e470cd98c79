"""Python bindings for the qdeform core library."""

from ._core import (
    ConfigError,
    DimensionError,
    Error,
    IntegrationError,
    RoleError,
    Deformation,
    JJParams,
    PhaseGrid,
    RingParams,
    build_deformed_hamiltonian,
    build_hamiltonian,
    build_ring_hamiltonian,
    closed_form_rate_n,
    closed_form_rate_phi,
    closed_form_residuals,
    conjugation_form,
    critical_current,
    ehrenfest_compare,
    ej_prime,
    flux_to_s,
    fraunhofer_scan,
    gaussian_wavepacket,
    generalized_rate,
    interior_projector,
    naive_q_rate,
    number_operator,
    phase_operator,
    propagate,
    ring_rate_phi,
    run_cli,
    spectrum,
    standard_rate,
    switching_current,
    verify_qplane,
)

__all__ = [name for name in dir() if not name.startswith("_")]
