#include <doctest.h>

#include "magneto/magnetic.hpp"
#include "magneto/spectrum.hpp"
#include "oracles.hpp"

using namespace magneto;

namespace {

const std::vector<Charge> kCharges = {Charge{}, Charge(1, 5), Charge(1, 4), Charge(1, 3), Charge(1, 2)};

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("transporter examples") {
  DirectedGraph one(2, {{0, 1}});
  const auto t = transporter(one, Charge(1, 4));
  CHECK(t.coeff(0, 1) == Complex(0.0, 1.0));
  CHECK(t.coeff(1, 0) == Complex(0.0, -1.0));

  DirectedGraph pair(2, {{0, 1}, {1, 0}});
  for (const auto& q : kCharges) CHECK(transporter(pair, q).coeff(0, 1) == Complex(1.0, 0.0));
  CHECK_THROWS(Charge(3, 4));
}

TEST_CASE("laplacian examples") {
  DirectedGraph pair(2, {{0, 1}, {1, 0}});
  for (const auto& q : kCharges) {
    Eigen::MatrixXcd expected(2, 2);
    expected << 1.0, -1.0, -1.0, 1.0;
    CHECK(max_diff(magnetic_laplacian(pair, q, Normalization::None).to_dense(), expected) == 0.0);
  }

  DirectedGraph one(2, {{0, 1}});
  const auto l = magnetic_laplacian(one, Charge(1, 2), Normalization::None).to_dense();
  Eigen::MatrixXcd half(2, 2);
  half << 0.5, 0.5, 0.5, 0.5;
  CHECK(max_diff(l, half) < 1e-15);
  const auto ev = hermitian_eigen(l).eigenvalues;
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(1.0));

  // Directed 3-cycle at q = 1/3 against an independent dense solver.
  DirectedGraph tri(3, {{0, 1}, {1, 2}, {2, 0}});
  const auto lt = magnetic_laplacian(tri, Charge(1, 3), Normalization::Symmetric).to_dense();
  const auto ours = hermitian_eigen(lt).eigenvalues;
  const auto ref = oracle::eigenvalues(oracle::dense_laplacian(tri, 1.0 / 3.0, true));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(ours[i] - ref[i]) < 1e-12);

  DirectedGraph gap(3, {{0, 1}});
  CHECK_THROWS(magnetic_laplacian(gap, Charge{}, Normalization::Symmetric));
  CHECK_NOTHROW(magnetic_laplacian(gap, Charge{}, Normalization::None));
}

TEST_CASE("matrices match the dense definitions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + trial % 25;
    const auto g = oracle::random_connected_ish(rng, n, 0.15);
    for (auto conv : {Symmetrization::HalfSum, Symmetrization::Max}) {
      for (const auto& q : kCharges) {
        const double qv = q.value();
        CHECK(max_diff(magnetic_laplacian(g, q, Normalization::None, conv).to_dense(),
                       oracle::dense_laplacian(g, qv, false, conv)) < 1e-12);
        CHECK(max_diff(magnetic_laplacian(g, q, Normalization::Symmetric, conv).to_dense(),
                       oracle::dense_laplacian(g, qv, true, conv)) < 1e-12);
        CHECK(max_diff(renormalized_magnetic_adjacency(g, q, conv).to_dense(),
                       oracle::dense_renormalized(g, qv, conv)) < 1e-12);
        CHECK(max_diff(normalized_magnetic_adjacency(g, q, conv).to_dense(),
                       oracle::dense_normalized_adjacency(g, qv, conv)) < 1e-12);
      }
    }
  }
}

TEST_CASE("renormalized adjacency properties") {
  DirectedGraph lone(3, {{0, 1}});
  const auto a = renormalized_magnetic_adjacency(lone, Charge(1, 4));
  CHECK(a.coeff(2, 2) == Complex(1.0, 0.0));

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_digraph(rng, 8, 0.25);
    const auto m = renormalized_magnetic_adjacency(g, Charge(1, 5));
    CHECK(m.check_hermitian(1e-12));
    for (Index u = 0; u < 8; ++u) {
      CHECK(m.coeff(u, u).real() > 0.0);
      CHECK(m.coeff(u, u).imag() == 0.0);
    }
    for (double l : oracle::eigenvalues(m.to_dense())) {
      CHECK(l >= -1.0 - 1e-9);
      CHECK(l <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("hermitian eigen examples and residuals") {
  const auto id = hermitian_eigen(Eigen::MatrixXcd::Identity(5, 5));
  for (double l : id.eigenvalues) CHECK(l == doctest::Approx(1.0));
  CHECK(id.eigenvectors->cols() == 5);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + trial % 20;
    const auto r = oracle::random_complex(rng, n, n);
    const Eigen::MatrixXcd m = r + r.adjoint();
    const auto s = hermitian_eigen(m);
    const auto ref = oracle::eigenvalues(m);
    REQUIRE(s.eigenvalues.size() == ref.size());
    const double scale = m.norm();
    for (Index i = 0; i < n; ++i) {
      CHECK(std::abs(s.eigenvalues[i] - ref[i]) < 1e-10 * std::max(1.0, scale));
      if (i > 0) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
      const Eigen::VectorXcd v = s.eigenvectors->col(i);
      CHECK((m * v - s.eigenvalues[i] * v).norm() <= 1e-8 * scale);
    }
    const Eigen::MatrixXcd gram = s.eigenvectors->adjoint() * *s.eigenvectors;
    CHECK((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
  }

  // Repeated eigenvalues keep an orthonormal basis.
  Eigen::MatrixXcd deg = Eigen::MatrixXcd::Identity(4, 4);
  deg(3, 3) = 2.0;
  const auto sd = hermitian_eigen(deg);
  CHECK((sd.eigenvectors->adjoint() * *sd.eigenvectors - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-10);

  EigenOptions two;
  two.k = 2;
  CHECK(hermitian_eigen(deg, two).eigenvalues.size() == 2);

  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
  CHECK_THROWS(hermitian_eigen(bad));
  EigenOptions tiny;
  tiny.dense_limit = 3;
  CHECK_THROWS(hermitian_eigen(Eigen::MatrixXcd::Identity(5, 5), tiny));
}

TEST_CASE("spectral properties on random digraphs") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + trial % 30;
    const auto g = oracle::random_connected_ish(rng, n, 0.1);
    const auto l0 = hermitian_eigen(magnetic_laplacian(g, Charge{}, Normalization::Symmetric).to_dense()).eigenvalues;
    CHECK(std::abs(l0.front()) < 1e-9);
    for (const auto& q : kCharges) {
      const auto lq = hermitian_eigen(magnetic_laplacian(g, q, Normalization::Symmetric).to_dense()).eigenvalues;
      CHECK(lq.front() >= -1e-9);
      CHECK(lq.back() <= 2.0 + 1e-8);
      CHECK(lq.front() >= l0.front() - 1e-9);
    }
  }
}

TEST_CASE("frequency response") {
  // Directed ring: every node has symmetrized degree 1.
  std::vector<DirectedGraph::Edge> ring;
  for (Index u = 0; u < 7; ++u) ring.emplace_back(u, (u + 1) % 7);
  DirectedGraph g(7, ring);
  for (const auto& q : kCharges) {
    for (auto op : {ShiftOperator::RenormalizedAdjacency, ShiftOperator::NegativeRenormalized,
                    ShiftOperator::NormalizedAdjacency}) {
      const auto exact = frequency_response(g, q, op, ResponseMode::Exact);
      const auto approx = frequency_response(g, q, op, ResponseMode::Approx);
      for (std::size_t i = 0; i < exact.size(); ++i) CHECK(std::abs(exact[i] - approx[i]) < 1e-8);
    }
  }

  std::mt19937_64 rng(3);
  const auto irregular = oracle::random_connected_ish(rng, 12, 0.2);
  const auto pos = frequency_response(irregular, Charge(1, 3), ShiftOperator::RenormalizedAdjacency, ResponseMode::Exact);
  const auto neg = frequency_response(irregular, Charge(1, 3), ShiftOperator::NegativeRenormalized, ResponseMode::Exact);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    CHECK(std::abs(pos[i] + neg[pos.size() - 1 - i]) < 1e-12);
    CHECK(std::isfinite(pos[i]));
  }

  // q = 0 normalized adjacency: 1 - lambda of the normalized Laplacian.
  const auto na = frequency_response(irregular, Charge{}, ShiftOperator::NormalizedAdjacency, ResponseMode::Exact);
  auto lam = oracle::eigenvalues(oracle::dense_laplacian(irregular, 0.0, true));
  std::vector<double> expected;
  for (double l : lam) expected.push_back(1.0 - l);
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < na.size(); ++i) CHECK(std::abs(na[i] - expected[i]) < 1e-10);
}

TEST_CASE("eigenmaps") {
  DirectedGraph pathish(4, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {0, 2}, {2, 0}});
  const auto m = eigenmaps(pathish, Charge{}, 2);
  const auto sg = symmetrize(pathish);
  Eigen::VectorXcd expected(4);
  for (Index u = 0; u < 4; ++u) expected(u) = std::sqrt(sg.degrees[u]);
  expected.normalize();
  CHECK((m.vectors.col(0) - expected).norm() < 1e-10);

  std::mt19937_64 rng(13);
  const auto g = oracle::random_connected_ish(rng, 15, 0.15);
  const auto e = eigenmaps(g, Charge(1, 3), 4);
  CHECK(e.vectors.rows() == 15);
  CHECK((e.vectors.adjoint() * e.vectors - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
  const auto csv = eigenmaps_csv(e);
  CHECK(csv.rfind("node,re_0,im_0,re_1,im_1,re_2,im_2,re_3,im_3\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);
  CHECK_THROWS(eigenmaps(g, Charge(1, 3), 16));
}
