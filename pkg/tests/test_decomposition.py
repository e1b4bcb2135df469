import numpy as np
import pytest

import nmfinit.decomposition as decomposition
from nmfinit.dense import DenseMatrix
from nmfinit.decomposition import svd, truncate
from nmfinit.errors import ShapeError, SvdConvergenceError


def svd_of(arr):
    return svd(DenseMatrix(arr))


def reconstruct(f, shape):
    s = np.zeros(shape)
    np.fill_diagonal(s, f.sigma)
    return f.u.array @ s @ f.v.array.T


def singular_values_by_eigh(arr):
    """Independent oracle: eigenvalues of the Gram matrix."""
    m, n = arr.shape
    gram = arr.T @ arr if m >= n else arr @ arr.T
    ev = np.linalg.eigvalsh(gram)
    return np.sqrt(np.maximum(ev, 0.0))[::-1]


class TestSvd:
    def test_diagonal_input(self):
        f = svd_of(np.diag([4.0, 3.0]))
        assert np.allclose(f.sigma, [4.0, 3.0])
        # identity up to column signs
        assert np.allclose(np.abs(f.u.array), np.eye(2))
        assert np.allclose(np.abs(f.v.array), np.eye(2))

    def test_permutation_has_unit_singular_values(self):
        f = svd_of(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(f.sigma, [1.0, 1.0])

    def test_random_reconstruction_and_oracle(self):
        rng = np.random.default_rng(42)
        a = rng.random((8, 5))
        f = svd_of(a)
        rel = np.linalg.norm(a - reconstruct(f, a.shape)) / np.linalg.norm(a)
        assert rel <= 1e-10
        oracle = singular_values_by_eigh(a)
        assert np.abs(f.sigma - oracle).max() <= 1e-8

    @pytest.mark.parametrize("shape", [(1, 1), (1, 6), (6, 1), (7, 7), (9, 4), (4, 9)])
    def test_shapes_orthogonality_and_order(self, shape):
        rng = np.random.default_rng(sum(shape))
        a = rng.random(shape)
        f = svd_of(a)
        m, n = shape
        assert f.u.shape == (m, m)
        assert f.v.shape == (n, n)
        assert len(f.sigma) == min(m, n)
        assert (np.diff(f.sigma) <= 0.0).all()
        assert (f.sigma >= 0.0).all()
        assert np.abs(f.u.array.T @ f.u.array - np.eye(m)).max() <= 1e-10
        assert np.abs(f.v.array.T @ f.v.array - np.eye(n)).max() <= 1e-10
        rel = np.linalg.norm(a - reconstruct(f, shape)) / np.linalg.norm(a)
        assert rel <= 1e-10

    def test_transpose_has_same_singular_values(self):
        rng = np.random.default_rng(9)
        a = rng.random((7, 4))
        sa = svd_of(a).sigma
        st = svd_of(a.T).sigma
        assert np.abs(sa - st).max() <= 1e-10

    def test_sign_flip_closure(self):
        # flipping u_j together with v_j must not change the product
        rng = np.random.default_rng(13)
        a = rng.random((5, 5))
        f = svd_of(a)
        u = f.u.array.copy()
        v = f.v.array.copy()
        u[:, 2] *= -1.0
        v[:, 2] *= -1.0
        s = np.diag(f.sigma)
        assert np.allclose(u @ s @ v.T, reconstruct(f, a.shape), atol=1e-12)

    def test_deterministic(self):
        rng = np.random.default_rng(21)
        a = rng.random((12, 9))
        f1 = svd_of(a)
        f2 = svd_of(a)
        assert f1.u == f2.u
        assert f1.v == f2.v
        assert np.array_equal(f1.sigma, f2.sigma)

    def test_rank_deficient_input(self):
        rng = np.random.default_rng(33)
        a = np.outer(rng.random(10), rng.random(6))
        f = svd_of(a)
        assert f.sigma[1:].max() <= 1e-12 * f.sigma[0]
        assert np.abs(f.u.array.T @ f.u.array - np.eye(10)).max() <= 1e-10
        rel = np.linalg.norm(a - reconstruct(f, a.shape)) / np.linalg.norm(a)
        assert rel <= 1e-10

    def test_exactly_zero_column(self):
        rng = np.random.default_rng(8)
        a = rng.random((6, 4))
        a[:, 2] = 0.0
        f = svd_of(a)
        assert f.sigma[-1] == 0.0
        assert np.abs(f.u.array.T @ f.u.array - np.eye(6)).max() <= 1e-10
        rel = np.linalg.norm(a - reconstruct(f, a.shape)) / np.linalg.norm(a)
        assert rel <= 1e-10

    def test_convergence_error_carries_residual(self, monkeypatch):
        monkeypatch.setattr(decomposition, "_MAX_SWEEPS", 0)
        rng = np.random.default_rng(2)
        with pytest.raises(SvdConvergenceError) as excinfo:
            svd_of(rng.random((4, 4)))
        assert excinfo.value.residual > 0.0
        assert excinfo.value.sweeps == 0

    def test_two_by_two_closed_form(self):
        # hand formula: with e=(a+d)/2, f=(a-d)/2, g=(b+c)/2, h=(b-c)/2 the
        # singular values are q+r and |q-r| for q=hypot(e,h), r=hypot(f,g)
        rng = np.random.default_rng(37)
        for _ in range(25):
            a, b, c, d = rng.standard_normal(4)
            q = np.hypot((a + d) / 2.0, (b - c) / 2.0)
            r = np.hypot((a - d) / 2.0, (b + c) / 2.0)
            expected = np.array([q + r, abs(q - r)])
            got = svd_of(np.array([[a, b], [c, d]])).sigma
            assert np.abs(got - expected).max() <= 1e-12 * max(expected[0], 1.0)

    def test_single_row_closed_form(self):
        rng = np.random.default_rng(38)
        row = rng.standard_normal((1, 9))
        f = svd_of(row)
        assert f.sigma[0] == pytest.approx(np.linalg.norm(row), abs=1e-13)

    @pytest.mark.parametrize(
        "name,builder",
        [
            ("near_rank_one", lambda rng: np.outer(rng.random(12), rng.random(9))
             + 1e-12 * rng.random((12, 9))),
            ("duplicated_columns", lambda rng: np.hstack([rng.random((10, 4))] * 2)),
            ("graded_scales", lambda rng: np.diag(10.0 ** -np.arange(8.0))
             @ rng.standard_normal((8, 8))),
            ("constant", lambda rng: np.full((9, 6), 7.0)),
            ("all_zero", lambda rng: np.zeros((6, 4))),
            ("huge_and_tiny", lambda rng: np.diag([1e150, 1e-150])),
            ("tied_spectrum", lambda rng: 3.7 * np.linalg.qr(rng.standard_normal((8, 8)))[0]),
        ],
    )
    def test_difficult_inputs(self, name, builder):
        rng = np.random.default_rng(len(name))
        a = builder(rng)
        f = svd_of(a)
        m, n = a.shape
        s = np.zeros((m, n))
        np.fill_diagonal(s, f.sigma)
        scale = np.linalg.norm(a)
        residual = np.linalg.norm(a - f.u.array @ s @ f.v.array.T)
        assert residual <= 1e-10 * max(scale, 1e-300)
        assert np.abs(f.u.array.T @ f.u.array - np.eye(m)).max() <= 1e-10
        assert np.abs(f.v.array.T @ f.v.array - np.eye(n)).max() <= 1e-10
        assert (np.diff(f.sigma) <= 0.0).all()


class TestTruncate:
    def test_diagonal_rank_one(self):
        f = svd_of(np.diag([4.0, 3.0]))
        t = truncate(f, 1)
        assert np.allclose(np.abs(t.u_prime.array), [[1.0], [0.0]])
        assert np.allclose(np.abs(t.sigma_prime_vt.array), [[4.0, 0.0]])

    def test_full_rank_truncation_reconstructs(self):
        rng = np.random.default_rng(17)
        a = rng.random((6, 4))
        f = svd_of(a)
        t = truncate(f, 4)
        rel = np.linalg.norm(a - t.u_prime.array @ t.sigma_prime_vt.array)
        assert rel <= 1e-10 * np.linalg.norm(a)

    def test_out_of_range(self):
        f = svd_of(np.diag([4.0, 3.0]))
        with pytest.raises(ShapeError):
            truncate(f, 0)
        with pytest.raises(ShapeError):
            truncate(f, 3)

    def test_matches_direct_product(self):
        rng = np.random.default_rng(19)
        a = rng.random((7, 5))
        f = svd_of(a)
        for p in range(1, 6):
            t = truncate(f, p)
            direct = f.u.array[:, :p] @ np.diag(f.sigma[:p]) @ f.v.array[:, :p].T
            got = t.u_prime.array @ t.sigma_prime_vt.array
            assert np.abs(got - direct).max() <= 1e-10 * max(f.sigma[0], 1.0)

    def test_eckart_young_tail_identity(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            a = rng.random((6, 6))
            f = svd_of(a)
            for p in range(1, 7):
                t = truncate(f, p)
                res2 = np.linalg.norm(a - t.u_prime.array @ t.sigma_prime_vt.array) ** 2
                tail = float((f.sigma[p:] ** 2).sum())
                assert abs(res2 - tail) <= 1e-9 * tail + (1e-12 * f.sigma[0]) ** 2

    def test_descending_prefix_beats_every_subset(self):
        # brute force over all singular-triplet subsets of each size
        from itertools import combinations

        rng = np.random.default_rng(29)
        a = rng.random((6, 6))
        f = svd_of(a)
        u, sig, v = f.u.array, f.sigma, f.v.array
        for p in range(1, 6):
            errors = {}
            for subset in combinations(range(6), p):
                idx = list(subset)
                approx = (u[:, idx] * sig[idx]) @ v[:, idx].T
                errors[subset] = np.linalg.norm(a - approx) ** 2
            best = min(errors.values())
            prefix = errors[tuple(range(p))]
            assert prefix <= best + 1e-12 * f.sigma[0] ** 2

    def test_truncated_factor_shapes(self):
        rng = np.random.default_rng(31)
        a = rng.random((8, 5))
        t = truncate(svd_of(a), 3)
        assert t.u_prime.shape == (8, 3)
        assert t.sigma_prime_vt.shape == (3, 5)
