"""Physical constants and default run parameters."""

# Physical Constants
PHYSICAL_CONSTANTS = {
    "SI": {"hbar": 1.054571817e-34, "c": 2.99792458e8},
    "natural": {"hbar": 1.0, "c": 1.0},
}

# X-wave Basis
DEFAULT_BASIS = {
    "delta": 1.0,
    "p_max": 24,
    "alpha_rule": "gauss-laguerre",
    "alpha_nodes": 128,
    "projection_nodes": 128,
    "v_points": 257,
    "v_max_fraction": 0.2,        # of omega1, keeps mode velocities within the envelope approximation
    "alpha_samples": 101,
    "alpha_sample_span": 20.0,    # in units of 1/delta
    "alpha_max_span": 40.0,       # Gauss-Legendre alpha window, in units of 1/delta
    "field_window": 0.5,          # r and zeta half-widths, in units of delta (r scaled by 1/b)
    "field_points": 21,
}

# Classical Propagation
DEFAULT_PROPAGATE = {
    "times": [0.0],
    "r_max": 10.0,
    "r_points": 41,
    "zeta_max": 20.0,
    "zeta_points": 81,
    "kperp_nodes": 400,
    "kz_nodes": 400,
    "interpolation": "linear",
}

# Parametric Amplifier
DEFAULT_OPA = {
    "field1": {"omega": 1.0, "k": 1.0, "omega1": 1.0, "omega2": 1.0},
    "field2": {"omega": 1.0, "k": 1.9, "omega1": 0.5, "omega2": 1.0},
    "chi": 1.0,
    "delta": 1.0,
    "p_max": 2,
    "pairs": [(0, 0)],
    "uv_points": 129,
    "small_momenta_fraction": 0.1,
    "v_max_fraction": 1e-5,       # of the group-velocity mismatch
    "sinc_zero_fraction": 0.125,  # first sinc zero at this fraction of v_max when t is not given
    "width_doublings": 4,
}

# Numerical Tolerances
DEFAULT_TOLERANCES = {
    "orthonormality": 1e-8,
    "discrepancy": 1e-6,
    "energy_drift": 1e-8,
    "convergence": 1e-8,
    "residual": 1e-6,
    "aliasing": 1e-8,
}
