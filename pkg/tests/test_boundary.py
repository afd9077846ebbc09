import math

import numpy as np
import pytest

from bcp import (
    EvaluationError,
    GeneralBoundary,
    InvalidBoundariesError,
    Partition,
    PiecewiseLinearBand,
    PiecewiseLinearBoundary,
    band_values,
    chord_boundary,
    envelopes,
    uniform_partition,
)


def daniels(t):
    if t == 0.0:
        return 0.5
    return 0.5 - t * math.log(0.25 + 0.25 * math.sqrt(1.0 + 8.0 * math.exp(-1.0 / t)))


class TestPartition:
    def test_single_interval(self):
        p = uniform_partition(1.0, 1)
        assert np.array_equal(p.nodes, [0.0, 1.0])
        assert p.n == 1 and p.T == 1.0

    def test_quarters(self):
        p = uniform_partition(1.0, 4)
        assert np.allclose(p.nodes, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_128(self):
        p = uniform_partition(1.0, 128)
        assert p.nodes.size == 129
        assert np.allclose(p.dt, 1.0 / 128.0)

    @pytest.mark.parametrize("T,n", [(0.0, 4), (-1.0, 4), (1.0, 0), (1.0, -3)])
    def test_invalid_args(self, T, n):
        with pytest.raises(ValueError):
            uniform_partition(T, n)

    def test_nodes_must_increase(self):
        with pytest.raises(ValueError):
            Partition(np.array([0.0, 0.5, 0.5, 1.0]))
        with pytest.raises(ValueError):
            Partition(np.array([0.1, 0.5, 1.0]))


class TestPiecewiseLinearBoundary:
    def test_jump_direction_upper(self):
        p = uniform_partition(1.0, 2)
        # Upward jump at the interior node is fine...
        b = PiecewiseLinearBoundary(p, "upper", right=[1.0, 2.0, 2.0], left=[1.0, 1.0, 2.0])
        assert b.left[1] == 1.0 and b.right[1] == 2.0
        # ...a downward one is not.
        with pytest.raises(InvalidBoundariesError):
            PiecewiseLinearBoundary(p, "upper", right=[1.0, 1.0, 1.0], left=[1.0, 2.0, 1.0])

    def test_jump_direction_lower(self):
        p = uniform_partition(1.0, 2)
        PiecewiseLinearBoundary(p, "lower", right=[-1.0, -2.0, -2.0], left=[-1.0, -1.0, -2.0])
        with pytest.raises(InvalidBoundariesError):
            PiecewiseLinearBoundary(p, "lower", right=[-1.0, -1.0, -1.0], left=[-1.0, -2.0, -1.0])

    def test_no_mixing_finite_infinite(self):
        p = uniform_partition(1.0, 2)
        with pytest.raises(InvalidBoundariesError):
            PiecewiseLinearBoundary(
                p, "upper", right=[1.0, math.inf, 1.0], left=[1.0, 1.0, 1.0]
            )

    def test_revalidation(self):
        p = uniform_partition(1.0, 4)
        b = PiecewiseLinearBoundary.from_values(p, "upper", np.ones(5))
        b.validate()

    def test_evaluation(self):
        p = uniform_partition(1.0, 2)
        b = PiecewiseLinearBoundary.from_values(p, "upper", [0.0, 1.0, 0.5])
        assert np.allclose(b([0.0, 0.25, 0.5, 0.75, 1.0]), [0.0, 0.5, 1.0, 0.75, 0.5])


class TestBandValues:
    def test_constant_band(self):
        p = uniform_partition(1.0, 4)
        band = PiecewiseLinearBand(
            PiecewiseLinearBoundary.from_values(p, "lower", -np.ones(5)),
            PiecewiseLinearBoundary.from_values(p, "upper", np.ones(5)),
        )
        for i in range(5):
            assert band_values(band, i, "right" if i < 4 else "left") == (-1.0, 1.0, 2.0)

    def test_jump_sides(self):
        p = uniform_partition(1.0, 2)
        upper = PiecewiseLinearBoundary(
            p, "upper", right=[1.0, 2.0, 2.0], left=[1.0, 1.0, 2.0]
        )
        band = PiecewiseLinearBand(
            PiecewiseLinearBoundary.from_values(p, "lower", [-1.0, -1.0, -1.0]), upper
        )
        assert band_values(band, 1, "left")[1] == 1.0
        assert band_values(band, 1, "right")[1] == 2.0

    def test_one_sided(self):
        p = uniform_partition(1.0, 2)
        band = PiecewiseLinearBand(
            PiecewiseLinearBoundary.infinite(p, "lower"),
            PiecewiseLinearBoundary.from_values(p, "upper", np.ones(3)),
        )
        alpha, beta, delta = band_values(band, 1, "right")
        assert alpha == -math.inf and delta == math.inf

    def test_index_out_of_range(self):
        p = uniform_partition(1.0, 2)
        band = PiecewiseLinearBand(
            PiecewiseLinearBoundary.infinite(p, "lower"),
            PiecewiseLinearBoundary.from_values(p, "upper", np.ones(3)),
        )
        with pytest.raises(ValueError):
            band_values(band, 3, "left")


class TestChordBoundary:
    def test_constant(self):
        gb = GeneralBoundary.constant(1.0, "upper", 1.0)
        b = chord_boundary(gb, uniform_partition(1.0, 4))
        assert np.all(b.right == 1.0) and np.all(b.left == 1.0)

    def test_linear_is_own_chord(self):
        gb = GeneralBoundary(lambda t: t, "upper", 1.0)
        b = chord_boundary(gb, uniform_partition(1.0, 2))
        assert np.allclose(b.right, [0.0, 0.5, 1.0])

    def test_daniels_node_values(self):
        gb = GeneralBoundary(daniels, "upper", 1.0)
        p = uniform_partition(1.0, 128)
        b = chord_boundary(gb, p)
        assert b.right[0] == 0.5
        for i in (1, 17, 64, 128):
            assert b.right[i] == daniels(i / 128.0)

    def test_nan_reported_with_location(self):
        gb = GeneralBoundary(lambda t: math.nan if t > 0.4 else 1.0, "upper", 1.0)
        with pytest.raises(EvaluationError) as err:
            chord_boundary(gb, uniform_partition(1.0, 2))
        assert err.value.t == 0.5


class TestEnvelopes:
    def test_constant_boundary_exact(self):
        gb = GeneralBoundary.constant(1.0, "upper", 1.0)
        inner, outer = envelopes(gb, uniform_partition(1.0, 4), m=10)
        assert np.all(inner.right == 1.0) and np.all(outer.right == 1.0)

    def test_sqrt_gap_small(self):
        T = math.e - 1.0
        gb = GeneralBoundary(lambda t: math.sqrt(1.0 + t), "upper", T)
        p = uniform_partition(T, 128)
        inner, outer = envelopes(gb, p, m=50)
        ts = np.linspace(0.0, T, 2000)
        assert np.max(outer(ts) - inner(ts)) < 1e-4

    def test_parabola_single_interval_shift(self):
        # max of (t - t^2) on [0, 1] is 1/4, reached between samples.
        gb = GeneralBoundary(lambda t: t * t, "upper", 1.0)
        inner, outer = envelopes(gb, uniform_partition(1.0, 1), m=50)
        assert inner.right[0] == pytest.approx(-0.25, abs=5e-4)
        assert inner.right[1] == pytest.approx(0.75, abs=5e-4)
        assert outer.right[0] == pytest.approx(0.0, abs=5e-4)
        assert outer.right[1] == pytest.approx(1.0, abs=5e-4)

    @pytest.mark.parametrize(
        "fn,side",
        [
            (lambda t: 1.0 + 0.5 * math.sin(5.0 * t), "upper"),
            (lambda t: math.exp(t) - 0.5 * t * t, "upper"),
            (lambda t: -1.0 - 0.5 * math.cos(3.0 * t), "lower"),
        ],
    )
    def test_sandwich_property(self, fn, side):
        m = 20
        gb = GeneralBoundary(fn, side, 1.0)
        p = uniform_partition(1.0, 16)
        inner, outer = envelopes(gb, p, m=m)
        for i in range(p.n):
            ts = np.linspace(p.nodes[i], p.nodes[i + 1], 10 * m)
            gv = np.array([fn(t) for t in ts])
            if side == "upper":
                assert np.all(inner(ts) <= gv + 1e-9)
                assert np.all(outer(ts) >= gv - 1e-9)
            else:
                assert np.all(inner(ts) >= gv - 1e-9)
                assert np.all(outer(ts) <= gv + 1e-9)

    @pytest.mark.parametrize("fn", [lambda t: t * t, lambda t: math.sqrt(1.0 + t)])
    def test_refinement_never_widens_gap(self, fn):
        gb = GeneralBoundary(fn, "upper", 1.0)
        ts = np.linspace(0.0, 1.0, 4001)
        gaps = []
        for n in (2, 4, 8, 16, 32):
            inner, outer = envelopes(gb, uniform_partition(1.0, n), m=50)
            gaps.append(np.max(outer(ts) - inner(ts)))
        assert all(g2 <= g1 + 1e-12 for g1, g2 in zip(gaps, gaps[1:]))

    def test_m_too_small(self):
        gb = GeneralBoundary.constant(1.0, "upper", 1.0)
        with pytest.raises(ValueError):
            envelopes(gb, uniform_partition(1.0, 2), m=1)

    def test_affine_chord_exact_at_checkpoints(self):
        gb = GeneralBoundary(lambda t: 2.0 - 3.0 * t, "upper", 1.0)
        b = chord_boundary(gb, uniform_partition(1.0, 8))
        ts = np.linspace(0.0, 1.0, 257)
        assert np.allclose(b(ts), 2.0 - 3.0 * ts, atol=1e-14)


class TestBandConstruction:
    def test_ordering_enforced(self):
        p = uniform_partition(1.0, 2)
        with pytest.raises(InvalidBoundariesError):
            PiecewiseLinearBand(
                PiecewiseLinearBoundary.from_values(p, "lower", [0.0, 0.5, 2.0]),
                PiecewiseLinearBoundary.from_values(p, "upper", [1.0, 1.0, 1.0]),
            )

    def test_shared_partition_required(self):
        p1 = uniform_partition(1.0, 2)
        p2 = uniform_partition(1.0, 4)
        with pytest.raises(ValueError):
            PiecewiseLinearBand(
                PiecewiseLinearBoundary.infinite(p1, "lower"),
                PiecewiseLinearBoundary.from_values(p2, "upper", np.ones(5)),
            )
