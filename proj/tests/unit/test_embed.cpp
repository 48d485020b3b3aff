#include "oracle.hpp"

#include "simspar/embed.hpp"

#include <doctest.h>

using namespace simspar;

namespace {

struct TreeCase {
  Graph g;
  SpanningTree tree;
  std::vector<char> mask;
  Graph p;
};

TreeCase tree_case(Graph g, TreeStrategy s = TreeStrategy::max_weight) {
  TreeCase c{std::move(g), {}, {}, {}};
  c.tree = extract_spanning_tree(c.g, s);
  c.mask.assign(c.g.num_edges(), 0);
  for (EdgeId e : c.tree.edge_ids()) c.mask[e] = 1;
  c.p = c.g.subgraph(std::span<const char>(c.mask));
  return c;
}

}  // namespace

TEST_SUITE("spectral_embed") {
  TEST_CASE("probes are deterministic, mean-zero and default to ceil(log2 n)") {
    auto a = make_probes(4, 2, 7), b = make_probes(4, 2, 7);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(a[i].values() == b[i].values());
    CHECK(make_probes(4, 2, 8)[0].values() != a[0].values());

    auto many = make_probes(1000, 20, 3);
    for (const ProbeVector& v : many) {
      CHECK(std::abs(v.values().sum()) <= 1e-12 * 1000);
      CHECK(v.values().norm() > 0.0);
      CHECK(v.seed() == 3);
    }
    // entries are +-1 shifted by a common mean
    const Vector& v = many[0].values();
    const double lo = v.minCoeff(), hi = v.maxCoeff();
    CHECK(hi - lo == doctest::Approx(2.0));

    CHECK(default_probe_count(100) == 7);
    CHECK(default_probe_count(2) == 4);
    CHECK(default_probe_count(1u << 20) == 20);
    CHECK(default_probe_count(std::size_t{1} << 40) == 32);
    CHECK_THROWS_AS(make_probes(1, 1, 0), ValidationError);
    CHECK_THROWS_AS(make_probes(5, 0, 0), ValidationError);
  }

  TEST_CASE("constant vectors are not valid probes") {
    CHECK_THROWS_AS(ProbeVector::from_values(Vector::Ones(5)), DegenerateProbeError);
    ProbeVector p = ProbeVector::from_values(Vector{{2.0, 0.0, 1.0}});
    CHECK(p.values() == Vector{{1.0, -1.0, 0.0}});
  }

  TEST_CASE("power iteration on the triangle eigenvector") {
    TreeCase c = tree_case(oracle::triangle());
    TreeSolver P(c.tree);
    LaplacianOperator LG(c.g);
    Vector h = generalized_power_iterate(LG, P, ProbeVector::from_values(Vector{{1.0, 0.0, -1.0}}), 1);
    CHECK((h - Vector{{3.0, 0.0, -3.0}}).norm() < 1e-13);

    // the dense operator L_P^+ L_G confirms the eigenpair
    Eigen::MatrixXd M = oracle::pseudoinverse(oracle::dense_laplacian(c.p)) * oracle::dense_laplacian(c.g);
    CHECK((M * Vector{{1.0, 0.0, -1.0}} - Vector{{3.0, 0.0, -3.0}}).norm() < 1e-12);
  }

  TEST_CASE("power iteration with P = G is the identity on mean-zero vectors") {
    std::mt19937_64 rng(31);
    Graph g = oracle::random_connected_graph(60, 100, rng);
    auto full = factorize(g, 0);
    LaplacianOperator LG(g);
    for (const ProbeVector& h0 : make_probes(60, 4, 1)) {
      Vector h = generalized_power_iterate(LG, *full, h0, 1);
      CHECK((h - h0.values()).norm() <= 1e-10 * h0.values().norm());
    }
  }

  TEST_CASE("power iteration matches the dense operator for several t") {
    std::mt19937_64 rng(32);
    TreeCase c = tree_case(oracle::random_connected_graph(40, 60, rng));
    TreeSolver P(c.tree);
    LaplacianOperator LG(c.g);
    Eigen::MatrixXd M = oracle::pseudoinverse(oracle::dense_laplacian(c.p)) * oracle::dense_laplacian(c.g);
    ProbeVector h0 = make_probes(40, 1, 9).front();
    Vector ref = h0.values();
    for (int t = 1; t <= 3; ++t) {
      ref = M * ref;
      Vector h = generalized_power_iterate(LG, P, h0, t);
      CHECK((h - ref).norm() <= 1e-9 * ref.norm());
    }
  }

  TEST_CASE("triangle heat examples") {
    TreeCase c = tree_case(oracle::triangle());
    std::vector<Vector> probes{Vector{{1.0, 0.0, -1.0}}};
    auto heats = edge_joule_heat(c.g, c.mask, probes);
    REQUIRE(heats.size() == 1);
    CHECK(heats[0].edge == 2);
    CHECK(heats[0].heat == 4.0);
    CHECK(heats[0].normalized == 1.0);
    CHECK(heats[0].rank == 0);
    // h^T (L_G - L_P) h
    Eigen::MatrixXd D = oracle::dense_laplacian(c.g) - oracle::dense_laplacian(c.p);
    CHECK(probes[0].dot(D * probes[0]) == doctest::Approx(4.0));

    std::vector<Vector> flat{Vector::Constant(3, 1.0)};
    auto zero = edge_joule_heat(c.g, c.mask, flat);
    CHECK(zero[0].heat == 0.0);
    CHECK(zero[0].normalized == 0.0);

    std::vector<char> all(3, 1);
    CHECK(edge_joule_heat(c.g, all, probes).empty());
  }

  TEST_CASE("triangle: the single off-tree edge takes all the heat") {
    TreeCase c = tree_case(oracle::triangle());
    TreeSolver P(c.tree);
    auto probes = make_probes(3, 8, 5);
    auto heats = edge_joule_heat(c.g, c.mask, iterate_probes(LaplacianOperator(c.g), P, probes, 2));
    REQUIRE(heats.size() == 1);
    CHECK(heats[0].heat > 0.0);
    CHECK(heats[0].normalized == 1.0);
  }

  TEST_CASE("heat-sum identity, sort order and normalization") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 3 + rng() % 198;
      TreeCase c = tree_case(oracle::random_connected_graph(n, 1 + rng() % (4 * n), rng));
      TreeSolver P(c.tree);
      LaplacianOperator LG(c.g), LP(c.p);
      auto probes = make_probes(n, default_probe_count(n), rng());
      auto iterated = iterate_probes(LG, P, probes, 2);
      auto heats = edge_joule_heat(c.g, c.mask, iterated);
      CHECK(heats.size() == c.g.num_edges() - (n - 1));
      double sum = 0.0, ref = 0.0;
      for (const EdgeHeat& h : heats) {
        CHECK(h.heat >= 0.0);
        CHECK(h.normalized >= 0.0);
        CHECK(h.normalized <= 1.0);
        CHECK_FALSE(c.mask[h.edge]);
        sum += h.heat;
      }
      for (const Vector& h : iterated) ref += quadratic_form(LG, h) - quadratic_form(LP, h);
      CHECK(std::abs(sum - ref) <= 1e-10 * ref);
      if (heats.empty()) continue;
      CHECK(heats[0].normalized == 1.0);
      for (std::size_t i = 0; i < heats.size(); ++i) {
        CHECK(heats[i].rank == i);
        if (i == 0) continue;
        const bool ordered = heats[i - 1].heat > heats[i].heat ||
                             (heats[i - 1].heat == heats[i].heat && heats[i - 1].edge < heats[i].edge);
        CHECK(ordered);
      }
    }
  }

  TEST_CASE("ties are broken by edge id") {
    // 4-cycle 0-1-2-3 with chords symmetric about the tree
    Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {0, 2, 1}});
    TreeCase c = tree_case(g);
    std::vector<Vector> probes{Vector::Zero(4)};
    auto heats = edge_joule_heat(c.g, c.mask, probes);
    REQUIRE(heats.size() == 2);
    CHECK(heats[0].edge < heats[1].edge);
  }

  TEST_CASE("parallel probe iteration matches the serial route") {
    std::mt19937_64 rng(34);
    TreeCase c = tree_case(oracle::random_connected_graph(500, 1500, rng));
    TreeSolver P(c.tree);
    LaplacianOperator LG(c.g);
    auto probes = make_probes(500, 12, 4);
    auto all = iterate_probes(LG, P, probes, 2);
    for (std::size_t j = 0; j < probes.size(); ++j) CHECK(all[j] == generalized_power_iterate(LG, P, probes[j], 2));
  }

  TEST_CASE("heat ranking follows the dominant generalized eigencomponents") {
    std::mt19937_64 rng(35);
    double worst = 1.0, total = 0.0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
      const std::size_t n = 20 + rng() % 81;
      TreeCase c = tree_case(oracle::random_connected_graph(n, n + rng() % (2 * n), rng));
      const int t = 2;
      TreeSolver P(c.tree);
      auto probes = make_probes(n, 16, rng());
      auto heats = edge_joule_heat(c.g, c.mask, iterate_probes(LaplacianOperator(c.g), P, probes, t));

      auto eig = oracle::generalized_eigen(oracle::dense_laplacian(c.g), oracle::dense_laplacian(c.p));
      std::vector<double> measured, exact;
      for (const EdgeHeat& h : heats) {
        const Edge& e = c.g.edge(h.edge);
        double s = 0.0;
        for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
          const double ue = eig.vectors(e.p, i) - eig.vectors(e.q, i);
          s += std::pow(eig.values[i], 2 * t) * ue * ue;
        }
        measured.push_back(h.heat);
        exact.push_back(e.w * s);
      }
      const double rho = oracle::spearman(measured, exact);
      worst = std::min(worst, rho);
      total += rho;
    }
    MESSAGE("spearman: mean " << total / trials << ", worst " << worst);
    CHECK(total / trials >= 0.9);
  }
}
