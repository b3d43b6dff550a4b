import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from polybergman import (
    KernelConfig,
    PolyharmonicPolynomial,
    StencilOutOfDomain,
    ZonalBlock,
    build_sphere_rule,
    evaluate,
    from_json,
    homogeneous_part,
    laplacian_power_residual,
    make_rotated_point,
    mean_value_eval,
    random_homogeneous,
    random_polyharmonic,
    scale,
    to_json,
)
from polybergman.polyspace import eval_at_phase, eval_complex


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def monomial_ball_control(n, p):
    """|x|^(2p): annihilated by Delta^(p+1) but not by Delta^p."""
    pole = np.zeros(n)
    pole[0] = 1.0
    pole.flags.writeable = False
    block = ZonalBlock(k=p, d=0, pole=pole, coeff=1.0 + 0.0j)
    return PolyharmonicPolynomial(blocks=(block,), n=n, p=p + 1)


class TestGenerator:
    def test_deterministic(self):
        cfg = KernelConfig(n=3, p=2)
        a = random_polyharmonic(cfg, 6, blocks=5, seed=99)
        b = random_polyharmonic(cfg, 6, blocks=5, seed=99)
        assert to_json(a) == to_json(b)

    def test_harmonic_order_has_no_radial_factors(self):
        cfg = KernelConfig(n=3, p=1)
        q = random_polyharmonic(cfg, 8, blocks=12, seed=1)
        assert all(b.k == 0 for b in q.blocks)

    def test_single_constant_block(self):
        cfg = KernelConfig(n=2, p=1)
        q = random_polyharmonic(cfg, 0, blocks=1, seed=5)
        assert q.degree == 0
        rng = np.random.default_rng(0)
        vals = [
            evaluate(q, make_rotated_point(rng.uniform(-3, 3), rng.uniform(-0.5, 0.5, 2)))
            for _ in range(5)
        ]
        assert max(abs(v - vals[0]) for v in vals) == 0.0

    def test_degree_bound_and_order_bound(self):
        for p in (1, 2, 3):
            cfg = KernelConfig(n=3, p=p)
            q = random_polyharmonic(cfg, 6, blocks=20, seed=p)
            assert q.degree <= 6
            assert all(b.k < p for b in q.blocks)

    def test_homogeneous_generator(self):
        cfg = KernelConfig(n=3, p=3)
        for m in range(0, 9):
            q = random_homogeneous(cfg, m, blocks=5, seed=m)
            assert all(b.degree == m for b in q.blocks)


class TestEvaluate:
    def test_constant_block(self):
        pole = unit([1.0, 1.0, 0.0])
        pole.flags.writeable = False
        q = PolyharmonicPolynomial(
            blocks=(ZonalBlock(k=0, d=0, pole=pole, coeff=2.5 - 1.0j),), n=3, p=1
        )
        x = make_rotated_point(1.1, (0.3, 0.2, 0.1))
        assert evaluate(q, x) == 2.5 - 1.0j

    def test_homogeneity_of_homogeneous_parts(self):
        cfg = KernelConfig(n=3, p=2)
        q = random_homogeneous(cfg, 5, blocks=4, seed=3)
        x = make_rotated_point(math.pi / 2, (0.5, 0.2, -0.3))
        base = evaluate(q, x)
        for t in (0.0, 0.25, 0.8, 1.0):
            assert abs(evaluate(q, scale(x, t)) - t**5 * base) <= 1e-12 * max(1.0, abs(base))

    def test_sector_phase_rule(self):
        for p in (1, 2, 3):
            cfg = KernelConfig(n=3, p=p)
            for m in (0, 1, 4, 7):
                q = random_homogeneous(cfg, m, blocks=4, seed=10 * p + m)
                a = np.array([0.4, -0.2, 0.1])
                v0 = evaluate(q, make_rotated_point(0.0, a))
                v1 = evaluate(q, make_rotated_point(math.pi / p, a))
                want = np.exp(1j * m * math.pi / p) * v0
                assert abs(v1 - want) <= 1e-13 * max(1.0, abs(v0))

    def test_complex_route_matches_phase_route(self):
        cfg = KernelConfig(n=4, p=3)
        q = random_polyharmonic(cfg, 7, blocks=8, seed=8)
        rng = np.random.default_rng(2)
        for _ in range(20):
            phase = rng.uniform(-math.pi, math.pi)
            a = rng.uniform(-0.6, 0.6, 4)
            via_phase = evaluate(q, make_rotated_point(phase, a))
            via_complex = eval_complex(q, (np.exp(1j * phase) * a)[None, :])[0]
            assert abs(via_phase - via_complex) <= 1e-12 * max(1.0, abs(via_phase))

    def test_dimension_mismatch(self):
        cfg = KernelConfig(n=3, p=1)
        q = random_polyharmonic(cfg, 2, blocks=2, seed=0)
        with pytest.raises(ValueError):
            evaluate(q, make_rotated_point(0.0, (0.1, 0.2)))


class TestHomogeneousPart:
    def test_partition_reassembles(self):
        cfg = KernelConfig(n=3, p=3)
        q = random_polyharmonic(cfg, 6, blocks=10, seed=17)
        rng = np.random.default_rng(1)
        for _ in range(10):
            x = make_rotated_point(rng.uniform(-3, 3), rng.uniform(-0.6, 0.6, 3))
            total = sum(
                evaluate(homogeneous_part(q, m), x) for m in range(q.degree + 1)
            )
            assert abs(total - evaluate(q, x)) <= 1e-14 * max(1.0, abs(evaluate(q, x)))

    def test_homogeneous_input_is_fixed_point(self):
        cfg = KernelConfig(n=2, p=2)
        q = random_homogeneous(cfg, 4, blocks=3, seed=4)
        assert homogeneous_part(q, 4).blocks == q.blocks
        assert homogeneous_part(q, 3).blocks == ()

    def test_beyond_degree_is_empty(self):
        cfg = KernelConfig(n=2, p=1)
        q = random_polyharmonic(cfg, 3, blocks=3, seed=2)
        part = homogeneous_part(q, 11)
        assert part.blocks == ()
        assert evaluate(part, make_rotated_point(0.0, (0.5, 0.1))) == 0.0


class TestLaplacianResidual:
    def test_constant_is_exact(self):
        cfg = KernelConfig(n=3, p=1)
        q = random_polyharmonic(cfg, 0, blocks=1, seed=0)
        x = make_rotated_point(0.0, (0.2, 0.1, 0.0))
        assert laplacian_power_residual(q, x, 5e-3) <= 1e-10

    def test_negative_control_radial_square(self):
        # Delta |x|^2 = 2n exactly; the 3-point-per-axis stencil is exact on quadratics
        control = monomial_ball_control(3, 1)
        x = make_rotated_point(0.0, (0.2, 0.1, -0.3))
        got = laplacian_power_residual(control, x, 5e-3, order=1)
        assert_allclose(got, 6.0, rtol=1e-9)

    @pytest.mark.parametrize("p,h", [(1, 5e-3), (2, 5e-3), (3, 1e-2)])
    def test_generated_polynomials_separate_from_control(self, p, h):
        # Construction soundness: generated residuals sit >= 1e3 below the
        # order-p negative control |x|^(2p) at the same step.
        cfg = KernelConfig(n=3, p=p)
        control = monomial_ball_control(3, p)
        rng = np.random.default_rng(100 + p)
        worst = 0.0
        control_worst = np.inf
        for i in range(20):
            q = random_polyharmonic(cfg, 6, blocks=8, seed=1000 * p + i)
            x = make_rotated_point(0.0, rng.uniform(0.05, 0.4) * unit(rng.normal(size=3)))
            worst = max(worst, laplacian_power_residual(q, x, h))
            control_worst = min(
                control_worst, laplacian_power_residual(control, x, h, order=p)
            )
        assert worst * 1e3 <= control_worst

    def test_preconditions(self):
        cfg = KernelConfig(n=3, p=2)
        q = random_polyharmonic(cfg, 4, blocks=3, seed=0)
        with pytest.raises(ValueError):
            laplacian_power_residual(q, make_rotated_point(0.0, (0.1, 0, 0)), 1e-4)
        with pytest.raises(ValueError):
            laplacian_power_residual(q, make_rotated_point(0.4, (0.1, 0, 0)), 5e-3)
        with pytest.raises(StencilOutOfDomain):
            laplacian_power_residual(q, make_rotated_point(0.0, (0.99, 0, 0)), 1e-2)
        cfg5 = KernelConfig(n=5, p=1)
        q5 = random_polyharmonic(cfg5, 2, blocks=2, seed=0)
        with pytest.raises(ValueError):
            laplacian_power_residual(q5, make_rotated_point(0.0, np.zeros(5)), 5e-3)


class TestSerialization:
    def test_roundtrip_preserves_values(self):
        cfg = KernelConfig(n=3, p=2)
        q = random_polyharmonic(cfg, 6, blocks=6, seed=123)
        q2 = from_json(to_json(q))
        rng = np.random.default_rng(0)
        for _ in range(10):
            x = make_rotated_point(rng.uniform(-3, 3), rng.uniform(-0.7, 0.7, 3))
            assert evaluate(q, x) == evaluate(q2, x)

    def test_schema_fields(self):
        import json

        cfg = KernelConfig(n=2, p=1)
        q = random_polyharmonic(cfg, 2, blocks=2, seed=1)
        data = json.loads(to_json(q))
        assert set(data) == {"n", "p", "blocks"}
        assert set(data["blocks"][0]) == {"k", "d", "pole", "coeff"}
        assert len(data["blocks"][0]["pole"]) == 2
        assert len(data["blocks"][0]["coeff"]) == 2


class TestMeanValue:
    def test_constant_function_at_center(self):
        # at x = a every node weight collapses to 1: exact up to roundoff
        rule = build_sphere_rule(3, 20)
        for p in (1, 2, 3):
            cfg = KernelConfig(n=3, p=p)
            x = make_rotated_point(0.0, (0.0, 0.0, 0.0))
            got = mean_value_eval(cfg, lambda z: np.ones(z.shape[0], dtype=complex),
                                  np.zeros(3), 0.6, x, rule)
            assert abs(got - 1.0) <= 1e-14

    def test_constant_function_off_center(self):
        rule = build_sphere_rule(3, 44)
        for p in (1, 2, 3):
            cfg = KernelConfig(n=3, p=p)
            x = make_rotated_point(0.0, (0.2, 0.0, 0.0))
            got = mean_value_eval(cfg, lambda z: np.ones(z.shape[0], dtype=complex),
                                  np.zeros(3), 0.6, x, rule)
            assert abs(got - 1.0) <= 1e-12

    def test_matches_direct_evaluation_centered(self):
        rule = build_sphere_rule(3, 44)
        x = make_rotated_point(0.0, (0.2, 0.0, 0.0))
        for p in (1, 2, 3):
            cfg = KernelConfig(n=3, p=p)
            for seed in range(5):
                u = random_polyharmonic(cfg, 6, blocks=6, seed=seed)
                got = mean_value_eval(cfg, u, np.zeros(3), 0.6, x, rule)
                want = evaluate(u, x)
                assert abs(got - want) <= 1e-8 * (1.0 + abs(want))

    def test_harmonic_case_is_classical_poisson_integral(self):
        # single sector: the weight reduces to the textbook Poisson kernel
        rule = build_sphere_rule(3, 30)
        cfg = KernelConfig(n=3, p=1)
        u = random_polyharmonic(cfg, 4, blocks=4, seed=7)
        a = np.zeros(3)
        r = 0.5
        x = make_rotated_point(0.0, (0.15, -0.1, 0.05))
        d = x.coords
        direct = 0.0 + 0.0j
        for zeta, w in zip(rule.nodes, rule.weights):
            dist2 = float((d - r * zeta) @ (d - r * zeta))
            weight = (r * r - float(d @ d)) / (r ** (2 - 3) * dist2**1.5)
            direct += w * weight * eval_complex(u, (r * zeta)[None, :])[0]
        got = mean_value_eval(cfg, u, a, r, x, rule)
        assert abs(got - direct) <= 1e-12 * max(1.0, abs(direct))

    def test_off_center_ball_with_rotations(self):
        rule = build_sphere_rule(3, 44)
        a = np.array([0.2, -0.1, 0.05])
        r = 0.5
        for p in (2, 3):
            cfg = KernelConfig(n=3, p=p)
            u = random_polyharmonic(cfg, 5, blocks=5, seed=31 + p)
            x = make_rotated_point(0.0, a + np.array([0.1, 0.04, -0.06]))
            got = mean_value_eval(cfg, u, a, r, x, rule)
            want = evaluate(u, x)
            assert abs(got - want) <= 1e-8 * (1.0 + abs(want))

    def test_geometry_violations(self):
        rule = build_sphere_rule(3, 10)
        cfg = KernelConfig(n=3, p=1)
        u = random_polyharmonic(cfg, 2, blocks=2, seed=0)
        with pytest.raises(ValueError):
            mean_value_eval(cfg, u, np.zeros(3), 1.1, make_rotated_point(0.0, (0.1, 0, 0)), rule)
        with pytest.raises(ValueError):
            mean_value_eval(cfg, u, np.zeros(3), 0.3, make_rotated_point(0.0, (0.5, 0, 0)), rule)
        with pytest.raises(ValueError):
            mean_value_eval(cfg, u, np.zeros(3), 0.3, make_rotated_point(0.4, (0.1, 0, 0)), rule)
