#include <cmath>

#include "doctest.h"
#include "loopsoup/graph.hpp"
#include "loopsoup/rng.hpp"

using namespace loopsoup;

namespace {

std::vector<int> all_vertices(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

GraphSpec random_graph(int n, rng::Engine& e) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double w = rng::unit(e) < 0.3 ? 0.0 : 0.2 + 2.0 * rng::unit(e);
      c(i, j) = c(j, i) = w;
    }
  Eigen::VectorXd kappa(n);
  for (int i = 0; i < n; ++i) kappa(i) = 0.1 + rng::unit(e);
  return GraphSpec(std::move(c), std::move(kappa));
}

}  // namespace

TEST_CASE("GraphSpec validation") {
  SUBCASE("kappa = 0 everywhere is rejected: the Green matrix would not exist") {
    Eigen::MatrixXd c(2, 2);
    c << 0, 1, 1, 0;
    CHECK_THROWS_AS(GraphSpec(c, Eigen::VectorXd::Zero(2)), std::invalid_argument);
  }
  SUBCASE("asymmetric conductances rejected") {
    Eigen::MatrixXd c(2, 2);
    c << 0, 1, 2, 0;
    CHECK_THROWS_AS(GraphSpec(c, Eigen::VectorXd::Ones(2)), std::invalid_argument);
  }
  SUBCASE("nonzero diagonal rejected") {
    Eigen::MatrixXd c(2, 2);
    c << 1, 1, 1, 0;
    CHECK_THROWS_AS(GraphSpec(c, Eigen::VectorXd::Ones(2)), std::invalid_argument);
  }
  SUBCASE("lambda must be positive everywhere") {
    // vertex 1 has no conductance and no killing
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
    c(0, 2) = c(2, 0) = 1.0;
    Eigen::VectorXd kappa(3);
    kappa << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(GraphSpec(c, kappa), std::invalid_argument);
  }
  SUBCASE("complete-graph detection") {
    CHECK(GraphSpec::complete({5, 0.5}).is_complete());
    CHECK(GraphSpec::complete({5, 0.5}).complete_kappa() == 0.5);
    rng::Engine e = rng::make_stream(7);
    CHECK_FALSE(random_graph(5, e).is_complete());
  }
}

TEST_CASE("build_transition") {
  SUBCASE("K_2, kappa=1: off-diagonal 1/2") {
    const auto t = build_transition(GraphSpec::complete({2, 1.0}));
    CHECK(t.p(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.p(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.p(0, 0) == 0.0);
    CHECK(t.spectral_bound == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("K_3, kappa=1: all off-diagonal entries 1/(n+kappa-1) = 1/3") {
    const auto t = build_transition(GraphSpec::complete({3, 1.0}));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(t.p(i, j) == doctest::Approx(i == j ? 0.0 : 1.0 / 3).epsilon(1e-15));
  }
  SUBCASE("row sums are (lambda-kappa)/lambda < 1") {
    rng::Engine e = rng::make_stream(11);
    const auto g = random_graph(6, e);
    const auto t = build_transition(g);
    for (int i = 0; i < 6; ++i) {
      const double expected = (g.lambda()(i) - g.killing()(i)) / g.lambda()(i);
      CHECK(t.p.row(i).sum() == doctest::Approx(expected).epsilon(1e-12));
      CHECK(t.p.row(i).sum() < 1.0);
    }
    CHECK(t.spectral_bound < 1.0);
  }
}

TEST_CASE("green_det closed forms (Lemma 2.1)") {
  SUBCASE("K_3, kappa=1, D = all: 1/(kappa (n+kappa)^{n-1}) = 1/16") {
    const auto g = GraphSpec::complete({3, 1.0});
    CHECK(green_det(g, all_vertices(3)) == doctest::Approx(1.0 / 16).epsilon(1e-13));
  }
  SUBCASE("single vertex: 1/(n-1+kappa)") {
    for (int n : {2, 5, 9}) {
      const auto g = GraphSpec::complete({n, 2.0});
      const std::vector<int> d{0};
      CHECK(green_det(g, d) == doctest::Approx(1.0 / (n - 1 + 2.0)).epsilon(1e-13));
    }
  }
  SUBCASE("K_4, kappa=2, |D|=2: closed form vs dense LU to 1e-12 relative") {
    const auto g = GraphSpec::complete({4, 2.0});
    const std::vector<int> d{1, 3};
    const double fast = green_logdet(g, d);
    const double dense = green_logdet_dense(g, d);
    CHECK(std::exp(fast) == doctest::Approx(std::exp(dense)).epsilon(1e-12));
    CHECK(std::exp(fast) == doctest::Approx(1.0 / ((4 - 2 + 2.0) * (4 + 2.0))).epsilon(1e-12));
  }
}

TEST_CASE("fast path agrees with dense factorization on every subset (n <= 7)") {
  for (const double kappa : {0.5, 1.0, 2.0}) {
    for (const int n : {3, 5, 7}) {
      const auto g = GraphSpec::complete({n, kappa});
      for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> subset;
        for (int v = 0; v < n; ++v)
          if (mask >> v & 1) subset.push_back(v);
        const double fast = green_logdet(g, subset);
        const double dense = green_logdet_dense(g, subset);
        CHECK(std::abs(fast - dense) < 1e-10 * std::abs(dense) + 1e-12);
      }
    }
  }
}

TEST_CASE("green_det reports singular restrictions") {
  // Two components; killing only on the first. The restriction to the second
  // component is a graph Laplacian with no killing: singular.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  c(0, 1) = c(1, 0) = 1.0;
  c(2, 3) = c(3, 2) = 1.0;
  Eigen::VectorXd kappa(4);
  kappa << 1.0, 1.0, 0.0, 0.0;
  const GraphSpec g(c, kappa);
  const std::vector<int> bad{2, 3};
  CHECK_THROWS_AS(green_logdet(g, bad), std::runtime_error);
  const std::vector<int> good{0, 1};
  CHECK(green_logdet(g, good) == green_logdet(g, good));  // finite
}

TEST_CASE("det_ratio") {
  SUBCASE("K_3, kappa=1, pi={{a},{b,c}}: (1/4)(4/3)(2) = 2/3") {
    const auto g = GraphSpec::complete({3, 1.0});
    const auto pi = Partition::from_blocks(3, {{0}, {1, 2}});
    CHECK(det_ratio(g, pi) == doctest::Approx(2.0 / 3).epsilon(1e-13));
  }
  SUBCASE("single block gives exactly 1") {
    const auto g = GraphSpec::complete({6, 0.7});
    CHECK(det_ratio(g, Partition::single_block(6)) == doctest::Approx(1.0).epsilon(1e-14));
    rng::Engine e = rng::make_stream(3);
    const auto h = random_graph(5, e);
    CHECK(det_ratio(h, Partition::single_block(5)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("K_4, kappa=1, four singletons: fast path equals dense to 1e-12") {
    const auto g = GraphSpec::complete({4, 1.0});
    const auto pi = Partition::singletons(4);
    const auto fast = det_ratio(g, pi);
    double dense_log = -green_logdet_dense(g, all_vertices(4));
    for (const auto& b : pi.blocks()) dense_log += green_logdet_dense(g, b);
    CHECK(fast == doctest::Approx(std::exp(dense_log)).epsilon(1e-12));
    CHECK(fast == doctest::Approx((1.0 / 5) * std::pow(1.0 - 1.0 / 5, -4)).epsilon(1e-13));
  }
  SUBCASE("partition must cover the vertex set") {
    const auto g = GraphSpec::complete({4, 1.0});
    CHECK_THROWS_AS(det_ratio(g, Partition::singletons(3)), std::invalid_argument);
  }
}

TEST_CASE("det_ratio lies in (0,1] and is 1 only on the single block (n <= 6)") {
  rng::Engine e = rng::make_stream(19);
  const auto g = GraphSpec::complete({6, 1.3});
  const auto h = random_graph(6, e);
  for (const auto& pi : all_partitions(6)) {
    for (const GraphSpec* gr : {&g, &h}) {
      const double r = det_ratio(*gr, pi);
      CHECK(r > 0.0);
      CHECK(r <= 1.0 + 1e-12);
      if (pi.block_count() > 1) CHECK(r < 1.0);
    }
  }
}

TEST_CASE("det_ratio strictly increases when two blocks merge (n <= 6)") {
  // Strict increase needs at least one positive conductance between the two
  // merged blocks (Fischer's inequality is an equality on disconnected
  // blocks); on a complete graph that always holds.
  rng::Engine e = rng::make_stream(23);
  const auto g = GraphSpec::complete({5, 0.8});
  const auto h = random_graph(5, e);
  for (const auto& pi : all_partitions(5)) {
    if (pi.block_count() < 2) continue;
    for (int a = 0; a < pi.block_count(); ++a) {
      for (int b = a + 1; b < pi.block_count(); ++b) {
        std::vector<std::vector<int>> blocks = pi.blocks();
        blocks[static_cast<std::size_t>(a)].insert(blocks[static_cast<std::size_t>(a)].end(),
                                                   blocks[static_cast<std::size_t>(b)].begin(),
                                                   blocks[static_cast<std::size_t>(b)].end());
        blocks.erase(blocks.begin() + b);
        const auto merged = Partition::from_blocks(5, blocks);
        CHECK(det_ratio(g, merged) > det_ratio(g, pi));
        bool connected = false;
        for (int u : pi.block(a))
          for (int v : pi.block(b)) connected |= h.conductances()(u, v) > 0.0;
        if (connected) {
          CHECK(det_ratio(h, merged) > det_ratio(h, pi));
        } else {
          CHECK(det_ratio(h, merged) == doctest::Approx(det_ratio(h, pi)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("constant-diagonal matrix identity det = a^{m-1}(a+mb)") {
  rng::Engine e = rng::make_stream(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + rng::below(e, 8);
    const double a = 0.2 + 3.0 * rng::unit(e);
    const double b = -1.0 + 2.0 * rng::unit(e);
    Eigen::MatrixXd mat = Eigen::MatrixXd::Constant(m, m, b);
    mat.diagonal().array() += a;
    const double expected = std::pow(a, m - 1) * (a + m * b);
    CHECK(mat.determinant() == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("GraphSpec json round trip") {
  const auto complete = GraphSpec::complete({4, 1.5});
  const auto j = complete.to_json();
  CHECK(j["n"] == 4);
  CHECK(j["kappa"] == 1.5);
  CHECK(GraphSpec::from_json(j).is_complete());

  rng::Engine e = rng::make_stream(5);
  const auto g = random_graph(4, e);
  const auto back = GraphSpec::from_json(g.to_json());
  CHECK(back.conductances() == g.conductances());
  CHECK(back.killing() == g.killing());
}
