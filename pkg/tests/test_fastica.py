import numpy as np
import pytest

from mark_ica import datasets, fastica, metrics
from mark_ica.contrast import ContrastFunction

# (W W.T)^(-1/2) W for W = [[1,1],[0,1]], from an arbitrary-precision
# eigendecomposition: [[2,1],[1,1]]^{-1/2} [[1,1],[0,1]]
DECORRELATED_SHEAR = np.array(
    [[0.89442719099991588, 0.44721359549995794],
     [-0.44721359549995794, 0.89442719099991588]]
)


def mixed_sources(kinds, n_samples, seed):
    """Standardized sources, a well-conditioned mixing matrix, and X = S A.T."""
    S = datasets.synth_sources(kinds, n_samples, seed)
    k = S.shape[1]
    rng = np.random.default_rng(seed + 1000)
    U, _ = np.linalg.qr(rng.standard_normal((k, k)))
    V, _ = np.linalg.qr(rng.standard_normal((k, k)))
    A = U @ np.diag(np.linspace(1.0, 3.0, k)) @ V.T
    return S, A, S @ A.T


class TestWhiten:
    def test_unit_covariance_on_gaussian_data(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((10000, 2)) * [3.0, 0.5] + [1.0, -2.0]
        Z, K, mean = fastica.whiten(X, 2)
        assert Z.shape == (10000, 2)
        assert np.max(np.abs(Z.T @ Z / len(Z) - np.eye(2))) < 1e-8
        assert np.allclose(mean, [1.0, -2.0], atol=0.1)

    def test_already_white_data_gives_near_rotation(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((20000, 3))
        _, K, _ = fastica.whiten(X, 3)
        s = np.linalg.svd(K, compute_uv=False)
        assert np.all(np.abs(s - 1.0) < 0.1)

    def test_rank_deficient_raises(self):
        base = np.random.default_rng(2).standard_normal((30, 1))
        X = np.hstack([base, 2 * base])  # rank 1
        with pytest.raises(ValueError, match="rank deficient"):
            fastica.whiten(X, 2)

    def test_n_components_bounds(self):
        X = np.random.default_rng(3).standard_normal((10, 4))
        with pytest.raises(ValueError, match="n_components"):
            fastica.whiten(X, 5)
        with pytest.raises(ValueError, match="n_components"):
            fastica.whiten(X, 0)

    def test_reduction_keeps_top_variance_directions(self):
        rng = np.random.default_rng(4)
        X = rng.standard_normal((5000, 3)) * [10.0, 1.0, 0.01]
        Z, K, _ = fastica.whiten(X, 2)
        assert Z.shape == (5000, 2)
        assert np.max(np.abs(Z.T @ Z / len(Z) - np.eye(2))) < 1e-8
        # the discarded direction is the tiny-variance one
        spans = np.abs(K) @ np.ones(3)
        assert np.all(np.abs(K[:, 2]) < 1e-1 * spans)


class TestSymDecorrelate:
    def test_orthonormal_fixed_point(self):
        rng = np.random.default_rng(5)
        Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        assert np.allclose(fastica.sym_decorrelate(Q), Q, atol=1e-12)

    def test_diagonal_scaling_removed(self):
        assert np.allclose(fastica.sym_decorrelate(np.diag([2.0, 3.0])), np.eye(2), atol=1e-12)

    def test_shear_oracle(self):
        W = fastica.sym_decorrelate([[1.0, 1.0], [0.0, 1.0]])
        assert np.allclose(W, DECORRELATED_SHEAR, atol=1e-12)

    def test_output_orthonormal(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            W = fastica.sym_decorrelate(rng.standard_normal((5, 5)))
            assert np.max(np.abs(W @ W.T - np.eye(5))) < 1e-8

    def test_rank_deficient_raises(self):
        with pytest.raises(ValueError, match="rank deficient"):
            fastica.sym_decorrelate([[1.0, 0.0], [1.0, 0.0]])


class TestIcaParallel:
    @pytest.mark.parametrize("fun", ["m_arcsinh", "logcosh", "exp", "cube"])
    def test_every_contrast_separates_three_sources(self, fun):
        S, A, X = mixed_sources(("sine", "square", "sawtooth"), 10000, 4)
        Z, K, _ = fastica.whiten(X, 3)
        W, _, converged = fastica.ica_parallel(Z, ContrastFunction(fun), seed=4)
        assert converged
        assert metrics.amari_index(W @ K @ A) < 0.05

    @pytest.mark.parametrize("fun", ["m_arcsinh", "logcosh"])
    def test_separates_two_sources(self, fun):
        S, A, X = mixed_sources(("sine", "square"), 10000, 0)
        Z, K, _ = fastica.whiten(X, 2)
        W, n_iter, converged = fastica.ica_parallel(Z, ContrastFunction(fun), seed=0)
        assert converged
        assert metrics.amari_index(W @ K @ A) < 0.05

    def test_orthonormal_even_without_structure(self):
        rng = np.random.default_rng(7)
        Z, _, _ = fastica.whiten(rng.standard_normal((2000, 4)), 4)
        W, _, converged = fastica.ica_parallel(
            Z, ContrastFunction("logcosh"), max_iter=5, seed=1
        )
        assert np.max(np.abs(W @ W.T - np.eye(4))) < 1e-8

    def test_nonconvergence_reported_not_fatal(self):
        rng = np.random.default_rng(8)
        Z, _, _ = fastica.whiten(rng.standard_normal((500, 3)), 3)
        W, n_iter, converged = fastica.ica_parallel(
            Z, ContrastFunction("cube"), tol=1e-300, max_iter=3, seed=0
        )
        assert not converged
        assert n_iter == 3
        assert W.shape == (3, 3)


class TestFitTransform:
    def test_breast_cancer_shape_contract(self):
        (X, _), _ = datasets.load_dataset("breast_cancer")
        assert X.shape == (569, 30)
        model = fastica.fit(X, fastica.FastICAConfig(n_components=16, seed=42))
        assert model.W.shape == (16, 16)
        assert model.K.shape == (16, 30)
        assert np.max(np.abs(model.W @ model.W.T - np.eye(16))) < 1e-6

    def test_full_component_case(self):
        X = np.random.default_rng(9).standard_normal((100, 5))
        model = fastica.fit(X, fastica.FastICAConfig(n_components=5, seed=42))
        assert model.K.shape == (5, 5)

    def test_seed_determinism_bit_exact(self):
        X = np.random.default_rng(10).standard_normal((200, 6))
        cfg = fastica.FastICAConfig(n_components=4, fun=ContrastFunction("m_arcsinh"), seed=42)
        m1 = fastica.fit(X, cfg)
        m2 = fastica.fit(X, cfg)
        assert np.array_equal(m1.W, m2.W)
        assert np.array_equal(m1.K, m2.K)
        assert np.array_equal(m1.mean, m2.mean)
        assert m1.n_iter == m2.n_iter

    def test_transform_shapes_and_errors(self):
        rng = np.random.default_rng(11)
        X = rng.standard_normal((120, 5))
        model = fastica.fit(X, fastica.FastICAConfig(n_components=3, seed=0))
        S = fastica.transform(model, X)
        assert S.shape == (120, 3)
        S2 = model.transform(rng.standard_normal((7, 5)))
        assert S2.shape == (7, 3)
        with pytest.raises(ValueError, match="columns"):
            fastica.transform(model, rng.standard_normal((4, 6)))

    def test_recovered_sources_correlate_with_truth(self):
        S, A, X = mixed_sources(("sine", "square", "sawtooth"), 10000, 2)
        model = fastica.fit(X, fastica.FastICAConfig(n_components=3, seed=2))
        est = fastica.transform(model, X)
        # align by maximal absolute correlation, then demand |rho| > 0.95
        corr = np.corrcoef(est.T, S.T)[:3, 3:]
        best = np.max(np.abs(corr), axis=1)
        assert np.all(best > 0.95)

    def test_scale_equivariance_of_directions(self):
        rng = np.random.default_rng(12)
        X = rng.laplace(size=(3000, 4))
        cfg = fastica.FastICAConfig(n_components=4, seed=3)
        m1 = fastica.fit(X, cfg)
        m2 = fastica.fit(2.5 * X, cfg)
        D1 = m1.W @ m1.K
        D2 = m2.W @ m2.K
        D1 /= np.linalg.norm(D1, axis=1, keepdims=True)
        D2 /= np.linalg.norm(D2, axis=1, keepdims=True)
        # same directions up to sign
        assert np.allclose(np.abs(D1), np.abs(D2), atol=1e-6)

    def test_whiten_flag_off(self):
        rng = np.random.default_rng(13)
        Z, _, _ = fastica.whiten(rng.laplace(size=(2000, 3)), 3)
        cfg = fastica.FastICAConfig(n_components=3, whiten=False, seed=1)
        model = fastica.fit(Z, cfg)
        assert np.array_equal(model.K, np.eye(3))
        assert np.array_equal(model.mean, np.zeros(3))
        with pytest.raises(ValueError, match="n_components"):
            fastica.fit(Z, fastica.FastICAConfig(n_components=2, whiten=False, seed=1))


class TestSerialization:
    def make_model(self, seed=42):
        X = np.random.default_rng(20).laplace(size=(300, 7)) * [1e-8, 1, 10, 1e4, 3, 2, 5]
        cfg = fastica.FastICAConfig(
            n_components=4, fun=ContrastFunction("m_arcsinh"), seed=seed
        )
        return fastica.fit(X, cfg)

    def test_round_trip_bit_exact(self, tmp_path):
        model = self.make_model()
        path = tmp_path / "model.txt"
        fastica.save_model(model, path)
        loaded = fastica.load_model(path)
        assert np.array_equal(loaded.mean, model.mean)
        assert np.array_equal(loaded.K, model.K)
        assert np.array_equal(loaded.W, model.W)
        assert loaded.n_iter == model.n_iter
        assert loaded.converged == model.converged
        assert loaded.config.fun.name == "m_arcsinh"
        assert loaded.config.seed == 42

    def test_dumps_loads_round_trip(self):
        model = self.make_model(seed=7)
        text = fastica.dumps_model(model)
        loaded = fastica.loads_model(text)
        assert fastica.dumps_model(loaded) == text

    def test_header_contents(self):
        text = fastica.dumps_model(self.make_model())
        lines = text.splitlines()
        assert lines[0] == "mark-ica-model 1"
        assert "n_components 4" in lines
        assert "fun m_arcsinh" in lines
        assert "seed 42" in lines

    def test_rejects_garbage(self):
        with pytest.raises(ValueError, match="not a recognized"):
            fastica.loads_model("hello world\n")
        with pytest.raises(ValueError, match="missing"):
            fastica.loads_model("mark-ica-model 1\nn_components 2\nn_features 3\n")

    def test_transforms_identically_after_round_trip(self):
        model = self.make_model()
        loaded = fastica.loads_model(fastica.dumps_model(model))
        X = np.random.default_rng(21).standard_normal((10, 7))
        assert np.array_equal(fastica.transform(model, X), fastica.transform(loaded, X))
