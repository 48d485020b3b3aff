#include "oracle.hpp"

#include "simspar/solver.hpp"

#include <doctest.h>

using namespace simspar;

namespace {

Vector random_mean_zero(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vector b(static_cast<Eigen::Index>(n));
  for (auto& v : b) v = nd(rng);
  remove_mean(b);
  return b;
}

}  // namespace

TEST_SUITE("linalg_solvers") {
  TEST_CASE("tree solve examples") {
    Graph path = oracle::path_graph({1.0, 1.0});
    SpanningTree t = extract_spanning_tree(path);
    Vector x = tree_solve(t, Vector{{1.0, 0.0, -1.0}});
    Vector ref = oracle::pseudoinverse(oracle::dense_laplacian(path)) * Vector{{1.0, 0.0, -1.0}};
    CHECK((x - Vector{{1.0, 0.0, -1.0}}).norm() < 1e-14);
    CHECK((x - ref).norm() < 1e-12);

    CHECK(tree_solve(t, Vector::Zero(3)).norm() == 0.0);

    Graph one = Graph::from_edges(2, std::vector<Edge>{{0, 1, 2.0}});
    Vector y = tree_solve(extract_spanning_tree(one), Vector{{1.0, -1.0}});
    CHECK(y[0] == doctest::Approx(0.25));
    CHECK(y[1] == doctest::Approx(-0.25));
  }

  TEST_CASE("tree solve projects a non-mean-zero rhs") {
    Graph path = oracle::path_graph({1.0, 3.0, 0.5});
    SpanningTree t = extract_spanning_tree(path);
    Vector b{{1.0, 2.0, 0.0, 1.0}};
    Vector centred = b.array() - b.mean();
    Vector x = tree_solve(t, b);
    CHECK(std::abs(x.sum()) < 1e-13);
    CHECK((LaplacianOperator(path).apply(x) - centred).norm() < 1e-12);
  }

  TEST_CASE("factorize: triangle against the dense pseudoinverse") {
    Graph tri = oracle::triangle();
    auto s = factorize(tri, 0);
    Vector x = s->solve(Vector{{1.0, 0.0, -1.0}});
    CHECK(x[0] == doctest::Approx(1.0 / 3));
    CHECK(std::abs(x[1]) < 1e-15);
    CHECK(x[2] == doctest::Approx(-1.0 / 3));
  }

  TEST_CASE("factorize agrees with tree solve and the dense oracle") {
    std::mt19937_64 rng(21);
    for (std::size_t n : {5, 50, 1000, 10000}) {
      Graph tree = oracle::random_connected_graph(n, 0, rng);
      SpanningTree t = extract_spanning_tree(tree);
      CholeskySolver chol(tree, t.root());
      Vector b = random_mean_zero(n, rng);
      Vector xt = tree_solve(t, b), xc = chol.solve(b);
      CHECK((xt - xc).norm() <= 1e-10 * xt.norm());
      CHECK(std::abs(xc.sum()) <= 1e-10 * xc.lpNorm<1>());
    }
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 2 + rng() % 120;
      Graph g = oracle::random_connected_graph(n, rng() % (3 * n), rng);
      auto s = factorize(g, static_cast<VertexId>(rng() % n));
      Vector b = random_mean_zero(n, rng);
      Vector ref = oracle::pseudoinverse(oracle::dense_laplacian(g)) * b;
      CHECK((s->solve(b) - ref).norm() <= 1e-9 * ref.norm());
    }
  }

  TEST_CASE("factorize rejects disconnected graphs") {
    Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1, 1}, {2, 3, 1}});
    CHECK_THROWS_AS(factorize(g, 0), DisconnectedGraphError);
  }

  TEST_CASE("factorize reports a numerically singular pivot") {
    // The 1e-20 edge is connected in exact arithmetic but its pivot falls
    // below 1e-14 times the largest weighted degree.
    Graph g = Graph::from_edges(3, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1e-20}});
    try {
      factorize(g, 0);
      FAIL("expected a pivot error");
    } catch (const SolverError& e) {
      CHECK(std::string(e.what()).find("vertex 2") != std::string::npos);
    }
  }

  TEST_CASE("solvers are safe to call concurrently") {
    std::mt19937_64 rng(22);
    Graph g = oracle::random_connected_graph(3000, 6000, rng);
    auto s = factorize(g, 0);
    std::vector<Vector> rhs;
    for (int k = 0; k < 8; ++k) rhs.push_back(random_mean_zero(3000, rng));
    std::vector<Vector> serial, parallel(8);
    for (const Vector& b : rhs) serial.push_back(s->solve(b));
#pragma omp parallel for
    for (int k = 0; k < 8; ++k) parallel[static_cast<std::size_t>(k)] = s->solve(rhs[static_cast<std::size_t>(k)]);
    for (int k = 0; k < 8; ++k) CHECK(serial[static_cast<std::size_t>(k)] == parallel[static_cast<std::size_t>(k)]);
  }

  TEST_CASE("pcg with an exact preconditioner converges immediately") {
    std::mt19937_64 rng(23);
    Graph g = oracle::random_connected_graph(300, 900, rng);
    auto s = factorize(g, 5);
    Vector b = random_mean_zero(300, rng);
    PcgResult r = pcg_solve(LaplacianOperator(g), *s, b);
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
    CHECK(r.relative_residual < 1e-3);
  }

  TEST_CASE("pcg on the triangle with the path-tree preconditioner") {
    Graph tri = oracle::triangle();
    TreeSolver pre(extract_spanning_tree(tri));
    std::mt19937_64 rng(24);
    for (int k = 0; k < 50; ++k) {
      Vector b = random_mean_zero(3, rng);
      PcgResult r = pcg_solve(LaplacianOperator(tri), pre, b, 1e-10);
      CHECK(r.converged);
      CHECK(r.iterations <= 3);
      Vector ref = oracle::pseudoinverse(oracle::dense_laplacian(tri)) * b;
      CHECK((r.x - ref).norm() <= 1e-9 * ref.norm());
    }
  }

  TEST_CASE("pcg residual contract") {
    std::mt19937_64 rng(25);
    Graph g = oracle::grid_graph(30, 30, rng, 0.1, 10.0);
    TreeSolver pre(extract_spanning_tree(g));
    Vector b = random_mean_zero(900, rng);
    LaplacianOperator L(g);
    PcgResult ok = pcg_solve(L, pre, b, 1e-6, 2000);
    REQUIRE(ok.converged);
    CHECK((L.apply(ok.x) - b).norm() < 1e-6 * b.norm());
    CHECK(ok.relative_residual == doctest::Approx((L.apply(ok.x) - b).norm() / b.norm()));

    PcgResult capped = pcg_solve(L, pre, b, 1e-12, 3);
    CHECK_FALSE(capped.converged);
    CHECK(capped.iterations == 3);
    CHECK(capped.relative_residual == doctest::Approx((L.apply(capped.x) - b).norm() / b.norm()));

    PcgResult zero = pcg_solve(L, pre, Vector::Zero(900));
    CHECK(zero.converged);
    CHECK(zero.x.norm() == 0.0);
  }

  TEST_CASE("nested preconditioners do not increase pcg iterations") {
    std::mt19937_64 rng(26);
    for (std::size_t side : {20, 32, 44}) {
      Graph g = oracle::grid_graph(side, side, rng, 0.1, 10.0);
      SpanningTree t = extract_spanning_tree(g);
      std::vector<EdgeId> ids = t.edge_ids();
      Graph p1 = g.subgraph(std::span<const EdgeId>(ids));
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        if (!t.contains(e) && rng() % 4 == 0) ids.push_back(e);
      }
      Graph p2 = g.subgraph(std::span<const EdgeId>(ids));
      auto s1 = factorize(p1, t.root());
      auto s2 = factorize(p2, t.root());
      Vector b = random_mean_zero(g.num_vertices(), rng);
      LaplacianOperator L(g);
      PcgResult r1 = pcg_solve(L, *s1, b), r2 = pcg_solve(L, *s2, b);
      CHECK(r1.converged);
      CHECK(r2.converged);
      CHECK(r2.iterations <= r1.iterations + 2);
    }
  }
}
