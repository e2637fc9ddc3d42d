from __future__ import annotations

import numpy as np
import pytest

from termshapes.vasicek import ScaleRegime, VasicekModel
from termshapes.verify import SweepConfig, instance_model, sample_instances

REGIME_CLASSES = (
    (ScaleRegime.SEPARATED, "nonnegative"),
    (ScaleRegime.SEPARATED, "negative"),
    (ScaleRegime.PROXIMAL, "nonnegative"),
    (ScaleRegime.PROXIMAL, "negative"),
    (ScaleRegime.CRITICAL, "any"),
)


def draw_models(n: int, seed: int, regime=None, rho_class=None):
    """Random (model, state) pairs from the sweep sampling boxes."""
    rng = np.random.default_rng(seed)
    out = []
    per_stratum = (regime is None) and (rho_class is None)
    strata = REGIME_CLASSES if per_stratum else ((regime, rho_class),)
    for k, (reg, rc) in enumerate(strata):
        count = n // len(strata) if per_stratum else n
        if per_stratum and k < n % len(strata):
            count += 1
        cfg = SweepConfig(
            regime=reg, rho_class=rc, n_samples=count, seed=int(rng.integers(2**31))
        )
        inst = sample_instances(cfg, np.random.default_rng(cfg.seed), count)
        out.extend(instance_model(inst, i) for i in range(count))
    return out


@pytest.fixture(scope="session")
def separated_base() -> VasicekModel:
    return VasicekModel(
        lam=(1.0, 3.0), theta=(0.01, 0.02), kappa=(1.0, 0.8),
        kappa0=0.005, sigma=(0.0, 0.0),
    )


@pytest.fixture(scope="session")
def proximal_base() -> VasicekModel:
    return VasicekModel(
        lam=(1.0, 1.5), theta=(0.01, 0.02), kappa=(1.0, 0.8),
        kappa0=0.005, sigma=(0.0, 0.0),
    )


@pytest.fixture(scope="session")
def critical_base() -> VasicekModel:
    return VasicekModel(
        lam=(0.7, 1.4), theta=(0.01, 0.02), kappa=(1.0, 0.8),
        kappa0=0.005, sigma=(0.0, 0.0),
    )
