"""SABR time-change, weight-function, Dirichlet-form and asymptotics laboratory."""

_NAMES = [
    "ModelParams",
    "absorption_probability",
    "adhoc_subeigen_gap",
    "adhoc_weight",
    "cev_entrance_integral",
    "cev_exact_stratonovich",
    "cev_riemannian_distance",
    "classify_symmetrizable",
    "feller_boundary_class",
    "hamza_closability",
    "hyperbolic_cosh_distance",
    "ks_two_sample",
    "legendre_eval",
    "mass_at_zero",
    "regime_verdict",
    "sabr_cosh_distance",
    "sabr_isometry",
    "simulate_decoupled",
    "simulate_sabr_euler",
]

try:
    from . import _sabrlab as _impl  # wheel layout
except ImportError:  # in-tree build: extension sits next to the package on sys.path
    import _sabrlab as _impl

globals().update({name: getattr(_impl, name) for name in _NAMES})

__all__ = list(_NAMES)
