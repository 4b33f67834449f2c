"""Shared fixtures: unwraps and transform grids reused across test modules."""

import math
from dataclasses import dataclass
from typing import Optional

import pytest

import levyinvert as li
from levyinvert.oracle import oracle_corpus


@dataclass
class Bundle:
    phi: li.CharFn
    u: li.UnwrappedLog
    rg: Optional[li.RhoHatGrid] = None
    ng: Optional[li.RhoHatGrid] = None


@pytest.fixture(scope="session")
def normal_b():
    phi = li.catalog_normal(0.0, 1.0)
    u = li.unwrap_log(phi, 6.0)
    return Bundle(phi, u,
                  rg=li.rho_hat_grid(u, phi.sigma2, 5.0, 0.02),
                  ng=li.neg_psi2_grid(u, phi.sigma2, 5.0, 0.02))


@pytest.fixture(scope="session")
def cauchy_b():
    phi = li.catalog_cauchy(1.0, 0.0)
    u = li.unwrap_log(phi, 5.0)
    return Bundle(phi, u, rg=li.rho_hat_grid(u, phi.sigma2, 4.0, 0.02))


@pytest.fixture(scope="session")
def gamma11_b():
    phi = li.catalog_gamma(1.0, 1.0)
    u = li.unwrap_log(phi, 81.0)
    return Bundle(phi, u,
                  rg=li.rho_hat_grid(u, phi.sigma2, 80.0, 0.02),
                  ng=li.neg_psi2_grid(u, phi.sigma2, 80.0, 0.02))


@pytest.fixture(scope="session")
def gamma215_b():
    phi = li.catalog_gamma(2.0, 1.5)
    u = li.unwrap_log(phi, 81.0)
    return Bundle(phi, u, ng=li.neg_psi2_grid(u, phi.sigma2, 80.0, 0.02))


@pytest.fixture(scope="session")
def hypcos_b():
    # |phi| = sech(pi z/2) underflows the 1e-12 unwrap guard past z ~ 18;
    # the transform decays like e^{-pi |z|}, so a short grid loses nothing.
    phi = li.catalog_hyperbolic_cosine()
    u = li.unwrap_log(phi, 17.0)
    return Bundle(phi, u,
                  rg=li.rho_hat_grid(u, phi.sigma2, 16.0, 0.02),
                  ng=li.neg_psi2_grid(u, phi.sigma2, 16.0, 0.02))


@pytest.fixture(scope="session")
def negbin_b():
    phi = li.catalog_negative_binomial(1.0, 0.5)
    u = li.unwrap_log(phi, 81.0)
    return Bundle(phi, u, rg=li.rho_hat_grid(u, phi.sigma2, 80.0, 0.02))


@pytest.fixture(scope="session")
def cp_point_b():
    phi = li.catalog_compound_poisson(2.0, li.PointJump(1.0))
    u = li.unwrap_log(phi, 81.0)
    return Bundle(phi, u,
                  rg=li.rho_hat_grid(u, phi.sigma2, 80.0, 0.02),
                  ng=li.neg_psi2_grid(u, phi.sigma2, 80.0, 0.02))


@pytest.fixture(scope="session")
def cp_point2_b():
    phi = li.catalog_compound_poisson(1.0, li.PointJump(2.0))
    u = li.unwrap_log(phi, 81.0)
    return Bundle(phi, u, rg=li.rho_hat_grid(u, phi.sigma2, 80.0, 0.02))


@pytest.fixture(scope="session")
def cp_uniform_b():
    phi = li.catalog_compound_poisson(1.0, li.UniformJump(0.0, 1.0))
    u = li.unwrap_log(phi, 4.5)
    return Bundle(phi, u, rg=li.rho_hat_grid(u, phi.sigma2, 3.0, 0.05))


HYPCOS_REG_KW = {"z_list": (12.0, 14.0, 16.0)}
CAUCHY_REG_KW = {"z_list": (2.0, 3.0, 4.0)}
NORMAL_REG_KW = {"z_list": (3.0, 4.0, 5.0)}


@pytest.fixture(scope="session")
def corpus_bundles():
    """Small-grid bundles for every reference case, for property sweeps."""
    out = {}
    for case in oracle_corpus():
        phi = case.charfn
        u = li.unwrap_log(phi, 4.2)
        rg = li.rho_hat_grid(u, phi.sigma2, 3.0, 0.05)
        ng = None
        if phi.x2_integrable:
            ng = li.neg_psi2_grid(u, phi.sigma2, 3.0, 0.05)
        out[case.name] = (case, Bundle(phi, u, rg=rg, ng=ng))
    return out
