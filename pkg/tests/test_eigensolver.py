import numpy as np
import pytest
from helpers import principal_angles, random_symmetric

from parspec.constants import ZERO_EIGENVALUE_TOL
from parspec.eigensolver import (
    NormalizedLaplacian,
    TridiagonalMatrix,
    cut_and_volume,
    degree_vector,
    indicator_vector,
    jacobi_eigen_oracle,
    lanczos,
    laplacian_apply,
    normalized_laplacian_dense,
    random_walk_laplacian_dense,
    row_normalize,
    smallest_k_eigenvectors,
    tridiagonal_eigen,
    unnormalized_laplacian_dense,
    write_eigenvalues_csv,
)
from parspec.errors import DomainError, SingularityError
from parspec.kvstore import RowStore
from parspec.mapreduce import MapReduceEngine
from parspec.similarity import SparseSymmetricMatrix, graph_similarity


def matrix_from_dense(dense, store=None):
    store = store if store is not None else RowStore()
    store.put_dense_rows("S", dense)
    return SparseSymmetricMatrix(dense.shape[0], store, "S")


PATH3 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


class TestLaplacian:
    def test_degrees_of_path(self):
        np.testing.assert_array_equal(degree_vector(matrix_from_dense(PATH3)).d, [1.0, 2.0, 1.0])

    def test_two_vertex_null_vector(self):
        laplacian = NormalizedLaplacian(matrix_from_dense(np.array([[0.0, 1.0], [1.0, 0.0]])))
        np.testing.assert_array_equal(laplacian.apply(np.array([1.0, 1.0])), [0.0, 0.0])
        np.testing.assert_array_equal(laplacian.apply(np.array([1.0, -1.0])), [2.0, -2.0])

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_dense_operator(self, seed):
        similarity = matrix_from_dense(random_symmetric(8, seed))
        dense = normalized_laplacian_dense(similarity)
        laplacian = NormalizedLaplacian(similarity)
        np.testing.assert_allclose(laplacian.to_dense(), dense, atol=1e-14)
        vector = np.random.default_rng(seed).standard_normal(8)
        assert np.max(np.abs(laplacian.apply(vector) - dense @ vector)) < 1e-12

    def test_isolated_vertex(self):
        dense = np.zeros((4, 4))
        dense[0, 1] = dense[1, 0] = 1.0
        dense[1, 3] = dense[3, 1] = 2.0
        with pytest.raises(SingularityError) as excinfo:
            NormalizedLaplacian(matrix_from_dense(dense))
        assert excinfo.value.vertex == 2

    def test_dimension_mismatch(self):
        laplacian = NormalizedLaplacian(matrix_from_dense(PATH3))
        with pytest.raises(DomainError):
            laplacian.apply(np.ones(4))

    def test_worker_invariant_and_counted(self):
        similarity = matrix_from_dense(random_symmetric(40, 3))
        vector = np.random.default_rng(0).standard_normal(40)
        baseline = NormalizedLaplacian(similarity, m=1)
        expected = baseline.apply(vector)
        for m in (2, 4, 8):
            with MapReduceEngine(m) as engine:
                laplacian = NormalizedLaplacian(similarity, engine=engine)
                np.testing.assert_array_equal(laplacian.apply(vector), expected)
                laplacian.apply(vector)
                assert laplacian.counters["matvec_row_products"] == 80
                assert laplacian.counters["operator_applications"] == 2

    def test_laplacian_apply_with_worker_override(self):
        similarity = matrix_from_dense(random_symmetric(12, 5))
        laplacian = NormalizedLaplacian(similarity)
        vector = np.arange(12, dtype=np.float64)
        np.testing.assert_array_equal(laplacian_apply(laplacian, vector, m=3), laplacian.apply(vector))


class TestLanczos:
    def test_identity_breaks_down_after_one_step(self):
        tridiagonal, basis = lanczos(np.eye(3), 3, 3, seed=1)
        assert tridiagonal.size == 1
        assert tridiagonal.alphas[0] == pytest.approx(1.0, abs=1e-14)
        assert basis.final_beta < 1e-12

    def test_invariant_start_vector(self):
        tridiagonal, basis = lanczos(np.diag([1.0, 2.0]), 2, 2, start=np.array([1.0, 0.0]))
        assert tridiagonal.size == 1
        assert tridiagonal.alphas[0] == 1.0
        assert basis.final_beta == 0.0
        np.testing.assert_array_equal(basis.vectors[:, 0], [1.0, 0.0])

    def test_start_vector_is_normalised(self):
        _, basis = lanczos(np.diag([1.0, 2.0, 3.0]), 3, 2, start=np.array([3.0, 0.0, 4.0]))
        np.testing.assert_allclose(basis.vectors[:, 0], [0.6, 0.0, 0.8], atol=1e-15)
        with pytest.raises(DomainError):
            lanczos(np.eye(3), 3, 2, start=np.ones(4))

    def test_diagonal_spectrum(self):
        operator = np.diag(np.arange(1.0, 7.0))
        tridiagonal, basis = lanczos(operator, 6, 6, seed=2)
        values, _ = tridiagonal_eigen(tridiagonal)
        np.testing.assert_allclose(values, np.arange(1.0, 7.0), atol=1e-10)
        assert basis.orthogonality_error() < 1e-10

    def test_full_run_matches_oracle(self):
        dense = normalized_laplacian_dense(matrix_from_dense(random_symmetric(16, 11)))
        tridiagonal, basis = lanczos(dense, 16, 16, seed=0)
        values, coordinates = tridiagonal_eigen(tridiagonal)
        expected, _ = jacobi_eigen_oracle(dense)
        np.testing.assert_allclose(values, expected, atol=1e-9)
        ritz = basis.vectors @ coordinates
        np.testing.assert_allclose(dense @ ritz, ritz * values, atol=1e-8)

    def test_locked_vectors_are_excluded(self):
        operator = np.diag(np.arange(1.0, 6.0))
        locked = np.eye(5)[:, :1]
        _, basis = lanczos(operator, 5, 4, seed=3, locked=locked)
        assert np.max(np.abs(basis.vectors[0])) < 1e-12

    def test_step_bounds(self):
        with pytest.raises(DomainError):
            lanczos(np.eye(3), 3, 4)
        with pytest.raises(DomainError):
            lanczos(np.eye(3), 3, 0)


class TestTridiagonal:
    def test_two_by_two(self):
        values, vectors = tridiagonal_eigen(TridiagonalMatrix(np.array([2.0, 2.0]), np.array([1.0])))
        np.testing.assert_allclose(values, [1.0, 3.0], atol=1e-14)
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(2), atol=1e-14)

    def test_already_diagonal(self):
        values, vectors = tridiagonal_eigen(TridiagonalMatrix(np.array([3.0, -1.0, 2.0]), np.zeros(2)))
        np.testing.assert_array_equal(values, [-1.0, 2.0, 3.0])
        assert sorted(np.argmax(np.abs(vectors), axis=0).tolist()) == [0, 1, 2]

    @pytest.mark.parametrize("seed", range(4))
    def test_random_twelve(self, seed):
        rng = np.random.default_rng(seed)
        tridiagonal = TridiagonalMatrix(rng.normal(size=12), rng.normal(size=11))
        values, vectors = tridiagonal_eigen(tridiagonal)
        dense = tridiagonal.to_dense()
        np.testing.assert_allclose(values, np.linalg.eigvalsh(dense), atol=1e-10)
        np.testing.assert_allclose(vectors @ np.diag(values) @ vectors.T, dense, atol=1e-10)

    def test_single_entry(self):
        values, vectors = tridiagonal_eigen(TridiagonalMatrix(np.array([4.5]), np.array([])))
        assert values.tolist() == [4.5]
        assert vectors.tolist() == [[1.0]]


class TestJacobi:
    def test_two_by_two(self):
        values, vectors = jacobi_eigen_oracle(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(values, [1.0, 3.0], atol=1e-14)
        np.testing.assert_allclose(np.abs(vectors), np.full((2, 2), 1.0 / np.sqrt(2.0)), atol=1e-14)

    def test_diagonal(self):
        values, _ = jacobi_eigen_oracle(np.diag([5.0, 1.0, 3.0]))
        assert values.tolist() == [1.0, 3.0, 5.0]

    def test_asymmetric(self):
        with pytest.raises(DomainError):
            jacobi_eigen_oracle(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_not_square(self):
        with pytest.raises(DomainError):
            jacobi_eigen_oracle(np.ones((2, 3)))

    @pytest.mark.parametrize("seed", range(3))
    def test_random(self, seed):
        rng = np.random.default_rng(seed)
        base = rng.normal(size=(10, 10))
        dense = base + base.T
        values, vectors = jacobi_eigen_oracle(dense)
        np.testing.assert_allclose(values, np.linalg.eigvalsh(dense), atol=1e-10)
        np.testing.assert_allclose(vectors @ np.diag(values) @ vectors.T, dense, atol=1e-10)

    @pytest.mark.parametrize("seed", range(50))
    def test_converges_on_laplacians(self, seed):
        n = 8 + seed % 57
        dense = normalized_laplacian_dense(matrix_from_dense(random_symmetric(n, seed)))
        values, vectors = jacobi_eigen_oracle(dense)
        np.testing.assert_allclose(values, np.linalg.eigvalsh(dense), atol=1e-10)
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(n), atol=1e-10)


def block_indicators(labels, degrees):
    blocks = sorted(set(labels))
    basis = np.zeros((len(labels), len(blocks)))
    for i, label in enumerate(labels):
        basis[i, blocks.index(label)] = np.sqrt(degrees[i])
    return basis


class TestSmallestEigenvectors:
    @pytest.mark.parametrize("seed", range(20))
    def test_null_space_of_disjoint_blocks(self, block_graph, seed):
        blocks = 1 + seed % 4
        graph, labels = block_graph(blocks, seed)
        with MapReduceEngine(2) as engine:
            similarity = graph_similarity(graph, 2, store=RowStore(), engine=engine)
            laplacian = NormalizedLaplacian(similarity, engine=engine)
            embedding = smallest_k_eigenvectors(laplacian, blocks, seed=seed)
        assert np.all(np.abs(embedding.eigenvalues) < ZERO_EIGENVALUE_TOL)
        expected = block_indicators(labels, laplacian.degrees.d)
        assert np.max(principal_angles(embedding.Z, expected)) < 1e-4
        same_block = np.equal.outer(np.array(labels), np.array(labels)).astype(float)
        np.testing.assert_allclose(embedding.Y @ embedding.Y.T, same_block, atol=1e-4)

    @pytest.mark.parametrize("seed", range(20))
    def test_zero_eigenvalue_count_equals_block_count(self, block_graph, seed):
        blocks = 1 + seed % 4
        graph, labels = block_graph(blocks, seed)
        similarity = graph_similarity(graph, 1, store=RowStore())
        laplacian = NormalizedLaplacian(similarity)
        embedding = smallest_k_eigenvectors(laplacian, blocks + 1, seed=seed)
        assert int(np.sum(embedding.eigenvalues < ZERO_EIGENVALUE_TOL)) == blocks
        dense = normalized_laplacian_dense(similarity)
        sqrt_degrees = np.sqrt(laplacian.degrees.d)
        for block in set(labels):
            null_vector = sqrt_degrees * (np.array(labels) == block)
            assert np.linalg.norm(dense @ null_vector) < 1e-8
            assert np.linalg.norm(laplacian.apply(null_vector)) < 1e-8

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_oracle(self, seed):
        n = 8 + (7 * seed) % 57
        similarity = matrix_from_dense(random_symmetric(n, seed))
        laplacian = NormalizedLaplacian(similarity)
        embedding = smallest_k_eigenvectors(laplacian, 3, seed=seed)
        values, vectors = jacobi_eigen_oracle(normalized_laplacian_dense(similarity))
        np.testing.assert_allclose(embedding.eigenvalues, values[:3], atol=1e-7)
        assert np.max(principal_angles(embedding.Z, vectors[:, :3])) < 1e-4
        report = embedding.report
        assert report.counter("lanczos_rounds") >= 1
        assert report.counter("matvec_row_products") == n * report.counter("lanczos_steps")

    @pytest.mark.parametrize("seed", range(5))
    def test_without_reorthogonalization(self, seed):
        similarity = matrix_from_dense(random_symmetric(60, seed))
        laplacian = NormalizedLaplacian(similarity)
        embedding = smallest_k_eigenvectors(laplacian, 3, seed=seed, reorthogonalize=False)
        values, vectors = jacobi_eigen_oracle(normalized_laplacian_dense(similarity))
        np.testing.assert_allclose(embedding.eigenvalues, values[:3], atol=1e-6)
        np.testing.assert_allclose(embedding.Z.T @ embedding.Z, np.eye(3), atol=1e-10)
        assert np.max(principal_angles(embedding.Z, vectors[:, :3])) < 1e-3
        assert embedding.report.metadata["reorthogonalize"] == "false"

    def test_worker_invariant(self):
        similarity = matrix_from_dense(random_symmetric(25, 8))
        results = []
        for m in (1, 2, 4, 8):
            with MapReduceEngine(m) as engine:
                laplacian = NormalizedLaplacian(similarity, engine=engine)
                results.append(smallest_k_eigenvectors(laplacian, 2, seed=4))
        for result in results[1:]:
            np.testing.assert_array_equal(result.Z, results[0].Z)
            np.testing.assert_array_equal(result.eigenvalues, results[0].eigenvalues)
            assert result.report.op_counters == results[0].report.op_counters

    def test_k_out_of_range(self):
        laplacian = NormalizedLaplacian(matrix_from_dense(PATH3))
        with pytest.raises(DomainError):
            smallest_k_eigenvectors(laplacian, 4)
        with pytest.raises(DomainError):
            smallest_k_eigenvectors(laplacian, 0)

    def test_k_equals_n(self):
        similarity = matrix_from_dense(PATH3)
        embedding = smallest_k_eigenvectors(NormalizedLaplacian(similarity), 3)
        np.testing.assert_allclose(embedding.eigenvalues, [0.0, 1.0, 2.0], atol=1e-10)

    def test_persisted_to_store(self, store):
        similarity = matrix_from_dense(random_symmetric(10, 2))
        embedding = smallest_k_eigenvectors(NormalizedLaplacian(similarity), 2, store=store)
        np.testing.assert_array_equal(store.read_dense("Z", 10, 2), embedding.Z)
        assert store.get_meta("Z", "eigenvalues") == embedding.eigenvalues.tolist()


class TestRowNormalize:
    def test_unit_rows(self):
        y, zeros = row_normalize(np.array([[3.0, 4.0], [0.0, 2.0]]))
        np.testing.assert_allclose(y, [[0.6, 0.8], [0.0, 1.0]])
        assert zeros == 0

    def test_zero_row_becomes_first_axis(self):
        y, zeros = row_normalize(np.array([[0.0, 0.0], [1.0, 1.0]]))
        assert y[0].tolist() == [1.0, 0.0]
        assert zeros == 1


class TestMetrics:
    def test_cut_and_volume(self):
        similarity = matrix_from_dense(PATH3)
        assert cut_and_volume(similarity, [0], [1, 2]) == (1.0, 1.0)
        assert cut_and_volume(similarity, [1], [0, 2]) == (2.0, 2.0)

    def test_indicator(self):
        assert indicator_vector([0, 2], 4).tolist() == [1.0, 0.0, 1.0, 0.0]
        with pytest.raises(DomainError):
            indicator_vector([4], 4)

    def test_quadratic_form(self):
        dense = random_symmetric(9, 6)
        similarity = matrix_from_dense(dense)
        laplacian = unnormalized_laplacian_dense(similarity)
        f = np.random.default_rng(1).standard_normal(9)
        expected = 0.5 * np.sum(dense * (f[:, None] - f[None, :]) ** 2)
        assert f @ laplacian @ f == pytest.approx(expected, rel=1e-12)
        np.testing.assert_allclose(laplacian @ np.ones(9), np.zeros(9), atol=1e-12)

    @pytest.mark.parametrize("seed", range(3))
    def test_spectrum_range(self, seed):
        similarity = matrix_from_dense(random_symmetric(12, seed))
        values, _ = jacobi_eigen_oracle(normalized_laplacian_dense(similarity))
        assert values[0] > -1e-10
        assert values[-1] < 2.0 + 1e-10
        walk = np.sort(np.linalg.eigvals(random_walk_laplacian_dense(similarity)).real)
        np.testing.assert_allclose(walk, values, atol=1e-9)

    def test_eigenvalues_csv(self, tmp_path):
        path = tmp_path / "lambda.csv"
        write_eigenvalues_csv([0.5, 0.0], path)
        assert path.read_text() == "index,eigenvalue\n0,0.0\n1,0.5\n"
