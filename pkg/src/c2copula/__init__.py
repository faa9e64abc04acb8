"""Twice-differentiable bivariate copulas built from generator functions."""
from .core import (
    AxiomReport,
    Copula,
    Exponential,
    Uniform,
    ValidationReport,
    build_copula,
    check_axioms,
    frechet_lower,
    frechet_upper,
    reconstruct_from_closed_form,
    sklar_compose,
    validate_generator,
)
from .families import (
    ComplexFourierCoefficients,
    FGMParams,
    FourierCoefficients,
    FrankParams,
    archimedean_h,
    fourier_asymmetry,
    frank_triple,
)
from .generators import CustomGenerator, Generator, Independence, ProductGenerator
from .measures import (
    DependenceReport,
    complex_fourier_measures,
    fourier_bound_audit,
    fourier_rho_closed,
    fourier_tau_closed,
    rho_numeric,
    tau_numeric,
)
from .optimal import EpsilonFamily, epsilon_limit_audit, rho_epsilon_closed, table1, tau_epsilon_closed
from .quadrature import QuadratureRule, integrate_1d, integrate_2d
from .sampler import SampleBatch, empirical_rho, empirical_tau, sample

__version__ = "0.1.0"
