from __future__ import annotations

import json
import math

import numpy as np
import pytest

from termshapes import classify as cl
from termshapes import signseq as ss
from termshapes import verify as vf
from termshapes.attain import construct_target
from termshapes.signseq import NAMED_SHAPES, SignSeq
from termshapes.vasicek import ScaleRegime, VasicekModel
from termshapes.verify import (
    SweepConfig,
    decode_shape,
    shape_code,
    state_space_map,
    strict_attainability_mc,
    sweep_theorem,
)

REGIME_CLASSES = [
    (ScaleRegime.SEPARATED, "nonnegative"),
    (ScaleRegime.SEPARATED, "negative"),
    (ScaleRegime.PROXIMAL, "nonnegative"),
    (ScaleRegime.PROXIMAL, "negative"),
    (ScaleRegime.CRITICAL, "any"),
]


class TestShapeCodes:
    def test_roundtrip_named(self):
        for shape in NAMED_SHAPES:
            assert decode_shape(shape_code(shape)) == shape

    def test_roundtrip_other(self):
        for shape in (
            ss.ShapeName.other(4, ss.Sign.MINUS),
            ss.ShapeName.other(6, ss.Sign.PLUS),
        ):
            assert decode_shape(shape_code(shape)) == shape


class TestSweep:
    @pytest.mark.parametrize("regime,rho_class", REGIME_CLASSES)
    def test_no_violations(self, regime, rho_class):
        cfg = SweepConfig(regime=regime, rho_class=rho_class, n_samples=4000, seed=99)
        report = sweep_theorem(cfg)
        assert report.passed
        assert report.samples == 4000
        admissible = cl.admissible_shapes(
            regime, "negative" if rho_class == "negative" else "nonnegative"
        )
        allowed = {str(s) for s in admissible.shapes}
        assert set(report.forward_histogram) <= allowed
        assert set(report.yield_histogram) <= allowed
        assert sum(report.forward_histogram.values()) == 4000

    def test_deterministic_given_seed(self):
        cfg = SweepConfig(
            regime=ScaleRegime.PROXIMAL, rho_class="negative", n_samples=3000, seed=7
        )
        r1, r2 = sweep_theorem(cfg), sweep_theorem(cfg)
        assert r1.to_dict() == r2.to_dict()
        assert json.dumps(r1.to_dict(), sort_keys=True) == json.dumps(
            r2.to_dict(), sort_keys=True
        )

    def test_different_seeds_differ(self):
        base = dict(regime=ScaleRegime.SEPARATED, rho_class="any", n_samples=2000)
        r1 = sweep_theorem(SweepConfig(seed=1, **base))
        r2 = sweep_theorem(SweepConfig(seed=2, **base))
        assert r1.forward_histogram != r2.forward_histogram

    def test_runtime_excluded_from_serialization_by_default(self):
        cfg = SweepConfig(regime=ScaleRegime.CRITICAL, n_samples=100, seed=3)
        report = sweep_theorem(cfg)
        assert "runtime_seconds" not in report.to_dict()
        assert "runtime_seconds" in report.to_dict(include_runtime=True)


class TestBatchAgainstCareful:
    def test_batch_matches_careful_classifier(self):
        # The float32 batch scan may only ever under-detect relative to
        # the careful float64 path: its sequence must be a subsequence,
        # and in practice nearly always identical.
        exact = checked = 0
        for k, (regime, rho_class) in enumerate(REGIME_CLASSES):
            cfg = SweepConfig(
                regime=regime, rho_class=rho_class, n_samples=250, seed=500 + k
            )
            inst = vf.sample_instances(cfg, np.random.default_rng(cfg.seed), 250)
            decays, coeffs = vf._slot_arrays(inst, regime)
            scans = vf._scan_curves(decays, coeffs)
            for i in range(250):
                model, z = vf.instance_model(inst, i)
                for curve, fn in (
                    ("forward", cl.classify_forward),
                    ("yield", cl.classify_yield),
                ):
                    first, changes = scans[curve]
                    code = vf._shape_codes(first[i : i + 1], changes[i : i + 1])[0]
                    batch_shape = decode_shape(int(code))
                    report = fn(model, z)
                    checked += 1
                    if batch_shape == report.shape:
                        exact += 1
                    else:
                        batch_seq = (
                            SignSeq.pure(batch_shape.first, batch_shape.changes)
                            if batch_shape.first
                            else ss.EMPTY_PURE
                        )
                        assert ss.subsequence(batch_seq, report.derivative_sseq)
        assert exact / checked > 0.98


class TestStrictAttainability:
    def test_constructed_shape_attained_with_positive_frequency(self, separated_base):
        sol, _ = construct_target("HDH", separated_base)
        freq = strict_attainability_mc(
            sol.model, sol.state, t=0.01, n_paths=20_000, shape=ss.HDH, seed=5
        )
        assert freq > 0

    def test_zero_volatility_is_all_or_nothing(self, separated_base):
        sol, _ = construct_target("humped", separated_base)
        assert (sol.sigma1, sol.sigma2) == (0.0, 0.0)
        freq = strict_attainability_mc(
            sol.model, sol.state, t=0.01, n_paths=500, shape=ss.HUMPED, seed=6
        )
        assert freq in (0.0, 1.0)
        assert freq == 1.0

    def test_seeds_agree_within_binomial_error(self, separated_base):
        sol, _ = construct_target("HD", separated_base)
        n = 40_000
        f1 = strict_attainability_mc(
            sol.model, sol.state, t=0.5, n_paths=n, shape=ss.HD, seed=21
        )
        f2 = strict_attainability_mc(
            sol.model, sol.state, t=0.5, n_paths=n, shape=ss.HD, seed=22
        )
        pooled = 0.5 * (f1 + f2)
        se = math.sqrt(max(pooled * (1 - pooled), 1e-12) / n)
        assert abs(f1 - f2) < 4 * math.sqrt(2) * se

    def test_validation(self, separated_base):
        with pytest.raises(ValueError):
            strict_attainability_mc(separated_base, (0, 0), 0.0, 10, ss.HD, 0)
        with pytest.raises(ValueError):
            strict_attainability_mc(separated_base, (0, 0), 0.1, 0, ss.HD, 0)


class TestStateSpaceMap:
    def test_single_point_matches_classifier(self):
        model = VasicekModel(
            lam=(0.6, 1.4), theta=(0.01, 0.02), kappa=(1.0, 0.9),
            kappa0=0.0, sigma=(0.3, 0.5), rho=-0.4,
        )
        rows = state_space_map(model, [0.015], [-0.02])
        assert len(rows) == 1
        z1, z2, fwd, yld = rows[0]
        assert (z1, z2) == (0.015, -0.02)
        assert fwd == str(cl.classify_forward(model, (z1, z2)).shape)
        assert yld == str(cl.classify_yield(model, (z1, z2)).shape)

    def test_grid_order_and_count(self):
        model = VasicekModel(
            lam=(0.6, 1.4), theta=(0.01, 0.02), kappa=(1.0, 0.9),
            kappa0=0.0, sigma=(0.3, 0.5), rho=0.2,
        )
        z1 = np.linspace(-0.05, 0.05, 5)
        z2 = np.linspace(-0.04, 0.04, 7)
        rows = state_space_map(model, z1, z2)
        assert len(rows) == 35
        assert rows[0][0] == pytest.approx(z1[0])
        assert rows[1][1] == pytest.approx(z2[1])  # inner axis varies fastest
        adm = cl.admissible_shapes(ScaleRegime.PROXIMAL, "nonnegative")
        labels = {str(s) for s in adm.shapes}
        assert {r[2] for r in rows} <= labels
        assert {r[3] for r in rows} <= labels

    def test_one_factor_bands(self):
        model = VasicekModel(
            lam=(1.0,), theta=(0.02,), kappa=(1.0,), kappa0=0.01, sigma=(0.5,)
        )
        (f_lo, f_hi), (y_lo, y_hi) = cl.one_dim_regions(model)
        zs = np.linspace(-0.5, 0.3, 81)
        rows = state_space_map(model, zs)
        assert len(rows) == 81
        for (z, fwd, yld) in rows:
            if z < f_lo - 1e-9:
                assert fwd == "normal"
            elif f_lo + 1e-9 < z < f_hi - 1e-9:
                assert fwd == "humped"
            elif z > f_hi + 1e-9:
                assert fwd == "inverse"
            if z < y_lo - 1e-9:
                assert yld == "normal"
            elif y_lo + 1e-9 < z < y_hi - 1e-9:
                assert yld == "humped"
            elif z > y_hi + 1e-9:
                assert yld == "inverse"

    def test_grid_argument_validation(self):
        model = VasicekModel(
            lam=(1.0,), theta=(0.0,), kappa=(1.0,), kappa0=0.0, sigma=(0.1,)
        )
        with pytest.raises(ValueError):
            state_space_map(model, [0.0], [0.0])
        two = VasicekModel(
            lam=(1.0, 2.0), theta=(0.0, 0.0), kappa=(1.0, 1.0),
            kappa0=0.0, sigma=(0.1, 0.1), rho=0.0,
        )
        with pytest.raises(ValueError):
            state_space_map(two, [0.0])


class TestPerturbationCheck:
    def test_all_equivalent_below_delta(self):
        report = vf.perturbation_stability_check(n_cases=60, seed=9)
        assert report.passed
        assert report.equivalent_at_zero == 60
        assert report.equivalent_at_half_delta == 60
        assert report.equivalent_at_099_delta == 60
        # far beyond the bound equivalence may fail; only counted
        assert 0 <= report.equivalent_at_100x_delta <= 60

    def test_deterministic(self):
        r1 = vf.perturbation_stability_check(n_cases=20, seed=31)
        r2 = vf.perturbation_stability_check(n_cases=20, seed=31)
        assert r1.to_dict() == r2.to_dict()
