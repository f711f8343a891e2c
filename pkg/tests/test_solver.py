import numpy as np
import pytest

from ftrpca import (
    ConfigInvalid,
    FilterVector,
    LengthMismatch,
    SolverConfig,
    Tensor3,
    background_filter,
    default_lambda,
    random_lowrank_sparse,
    rtpca,
    uniform_filter,
)


def solve(x, alpha, **kw):
    return rtpca(x, SolverConfig(alpha=alpha, **kw))


class TestDefaultLambda:
    def test_formula(self):
        assert default_lambda(50, 40, 10) == pytest.approx(1.0 / np.sqrt(500))
        assert default_lambda(40, 50, 10) == pytest.approx(1.0 / np.sqrt(500))

    def test_rejects_bad_dims(self):
        with pytest.raises(ConfigInvalid):
            default_lambda(0, 5, 5)


class TestSolverConfig:
    def test_rejects_bad_values(self):
        alpha = uniform_filter(3)
        for kw in (
            {"lam": 0.0},
            {"mu0": 0.0},
            {"rho": 0.99},
            {"mu_max": 1e-9},
            {"eps": 0.0},
            {"eps": 1.0},
            {"max_iter": 0},
        ):
            with pytest.raises(ConfigInvalid):
                SolverConfig(alpha=alpha, **kw)

    def test_defaults(self):
        c = SolverConfig(alpha=uniform_filter(3))
        assert (c.mu0, c.rho, c.mu_max, c.eps, c.max_iter) == (
            1e-3,
            1.1,
            1e10,
            1e-7,
            500,
        )


class TestRtpca:
    def test_filter_length_checked(self):
        x = Tensor3(np.zeros((4, 4, 5)))
        with pytest.raises(LengthMismatch):
            solve(x, uniform_filter(2))

    def test_zero_input_converges_immediately(self):
        x = Tensor3(np.zeros((4, 4, 5)))
        r = solve(x, uniform_filter(3))
        assert r.converged and r.iterations == 1
        assert np.all(r.low_rank.data == 0.0) and np.all(r.sparse.data == 0.0)

    def test_planted_low_rank_recovery(self):
        l0, e0, x = random_lowrank_sparse((30, 30, 6), 2, 0.05, 1.0, seed=42)
        r = solve(x, uniform_filter(4))
        assert r.converged
        rse = np.linalg.norm(r.low_rank.data - l0.data) / np.linalg.norm(l0.data)
        assert rse < 1e-5
        np.testing.assert_allclose(
            r.low_rank.data + r.sparse.data, x.data, atol=1e-5
        )

    def test_sparse_part_recovered_too(self):
        l0, e0, x = random_lowrank_sparse((50, 50, 10), 3, 0.05, 1.0, seed=11)
        r = solve(x, uniform_filter(6))
        assert np.linalg.norm(r.low_rank.data - l0.data) < 1e-3 * np.linalg.norm(l0.data)
        assert np.linalg.norm(r.sparse.data - e0.data) < 1e-2 * np.linalg.norm(e0.data)

    def test_feasibility_tail_nonincreasing_at_convergence(self):
        _, _, x = random_lowrank_sparse((30, 30, 6), 2, 0.05, 1.0, seed=42)
        r = solve(x, uniform_filter(4))
        assert r.converged
        tail = r.feasibility_history[-10:]
        assert all(b <= a + 1e-12 for a, b in zip(tail, tail[1:]))

    def test_uniform_weights_match_slicewise_svt_reference(self):
        # all-ones weights reduce the solver to plain per-slice singular
        # value thresholding of the Fourier slices
        _, _, x = random_lowrank_sparse((14, 12, 4), 2, 0.08, 1.0, seed=13)
        iters = 8
        r = solve(x, uniform_filter(3), max_iter=iters, eps=1e-15)

        data = x.data
        lam = default_lambda(14, 12, 4)
        low = np.zeros_like(data)
        sparse = np.zeros_like(data)
        dual = np.zeros_like(data)
        mu = 1e-3
        for _ in range(iters):
            tbar = np.fft.fft(data - sparse + dual / mu, axis=2)
            out = np.empty_like(tbar)
            for i in range(4):
                u, s, vh = np.linalg.svd(tbar[:, :, i], full_matrices=False)
                out[:, :, i] = (u * np.maximum(s - 1.0 / mu, 0.0)) @ vh
            low = np.fft.ifft(out, axis=2).real
            d = data - low + dual / mu
            sparse = np.sign(d) * np.maximum(np.abs(d) - lam / mu, 0.0)
            dual = dual + mu * (data - low - sparse)
            mu = min(1.1 * mu, 1e10)
        assert r.iterations == iters
        np.testing.assert_allclose(r.low_rank.data, low, atol=1e-8)
        np.testing.assert_allclose(r.sparse.data, sparse, atol=1e-8)

    def test_no_spurious_convergence_while_low_rank_empty(self):
        # early thresholds exceed the whole spectrum, so L stays zero and
        # the change test must not fire on 0 -> 0
        l0, e0, x = random_lowrank_sparse((20, 20, 4), 2, 0.05, 1.0, seed=7)
        r = solve(x, uniform_filter(3), mu0=1e-6, max_iter=3)
        assert not r.converged
        assert r.iterations == 3

    def test_histories_align_with_iterations(self):
        _, _, x = random_lowrank_sparse((15, 15, 4), 2, 0.05, 1.0, seed=9)
        r = solve(x, uniform_filter(3), max_iter=20)
        assert len(r.residual_history) == r.iterations
        assert len(r.feasibility_history) == r.iterations

    def test_progress_callback_sees_every_iteration(self):
        _, _, x = random_lowrank_sparse((15, 15, 4), 2, 0.05, 1.0, seed=10)
        seen = []
        rtpca(
            x,
            SolverConfig(alpha=uniform_filter(3), max_iter=12),
            progress=lambda k, res, mu: seen.append((k, res, mu)),
        )
        assert [k for k, _, _ in seen] == list(range(1, len(seen) + 1))
        mus = [m for _, _, m in seen]
        assert all(b >= a for a, b in zip(mus, mus[1:]))

    def test_mu_capped(self):
        _, _, x = random_lowrank_sparse((10, 10, 3), 1, 0.05, 1.0, seed=11)
        seen = []
        rtpca(
            x,
            SolverConfig(alpha=uniform_filter(2), mu0=1.0, rho=10.0, mu_max=50.0, max_iter=6),
            progress=lambda k, res, mu: seen.append(mu),
        )
        assert max(seen) <= 50.0

    def test_svd_budget_per_iteration(self):
        _, _, x = random_lowrank_sparse((12, 12, 6), 2, 0.05, 1.0, seed=12)
        for alpha, per_iter in (
            (FilterVector([1.0, 1.0, 1.0, 1.0]), 4),
            (FilterVector([0.0, 1.0, np.inf, 1.0]), 2),
            (background_filter(4), 0),
        ):
            r = solve(x, alpha, max_iter=15)
            assert r.svd_calls == per_iter * r.iterations

    def test_background_filter_yields_tube_means(self):
        rng = np.random.default_rng(13)
        base = rng.uniform(0, 255, (8, 8, 1))
        x = Tensor3(np.repeat(base, 6, axis=2))
        r = solve(x, background_filter(4))
        mean = np.broadcast_to(x.data.mean(axis=2, keepdims=True), x.dims)
        np.testing.assert_allclose(r.low_rank.data, mean, atol=1e-6)
        assert r.svd_calls == 0

    def test_explicit_lambda_respected(self):
        _, _, x = random_lowrank_sparse((12, 12, 4), 2, 0.05, 1.0, seed=14)
        # huge lam forbids the sparse term entirely
        r = solve(x, uniform_filter(3), lam=1e6, max_iter=30)
        assert np.all(r.sparse.data == 0.0)
