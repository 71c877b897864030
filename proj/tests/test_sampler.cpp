#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "loopsoup/cluster.hpp"
#include "loopsoup/exact.hpp"
#include "loopsoup/sampler.hpp"
#include "loopsoup/stats.hpp"

using namespace loopsoup;

namespace {

double binom_se(double p, double samples) { return std::sqrt(p * (1.0 - p) / samples); }

}  // namespace

TEST_CASE("Loop canonical form and validation") {
  CHECK(Loop::from_walk({2, 0, 1}).vertices == std::vector<int>{0, 1, 2});
  CHECK(Loop::from_walk({1, 0, 1, 0}).vertices == std::vector<int>{0, 1, 0, 1});
  CHECK(Loop::from_walk({3, 1, 2, 1}).vertices == std::vector<int>{1, 2, 1, 3});
  CHECK_THROWS_AS(Loop::from_walk({0}), std::invalid_argument);
  CHECK_THROWS_AS(Loop::from_walk({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Loop::from_walk({0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Loop::from_walk({1, 2, 1, 2, 1}), std::invalid_argument);  // wrap repeat
  CHECK(Loop::from_walk({2, 0, 1}) == Loop::from_walk({0, 1, 2}));
}

TEST_CASE("primitive_root") {
  CHECK(primitive_root(Loop::from_walk({0, 1, 0, 1})) == Loop::from_walk({0, 1}));
  CHECK(primitive_root(Loop::from_walk({0, 1, 2})) == Loop::from_walk({0, 1, 2}));
  CHECK(primitive_root(Loop::from_walk({0, 1, 2, 0, 1, 2, 0, 1, 2})) ==
        Loop::from_walk({0, 1, 2}));
  CHECK(primitive_root(Loop::from_walk({0, 1, 0, 2})) == Loop::from_walk({0, 1, 0, 2}));
}

TEST_CASE("closed_walk_count") {
  CHECK(CompleteSoupSampler::closed_walk_count(3, 2, true) == doctest::Approx(2.0));   // x->y->x
  CHECK(CompleteSoupSampler::closed_walk_count(3, 2, false) == doctest::Approx(1.0));  // x->z->y
  CHECK(CompleteSoupSampler::closed_walk_count(4, 1, true) == doctest::Approx(0.0));
  CHECK(CompleteSoupSampler::closed_walk_count(4, 1, false) == doctest::Approx(1.0));
  SUBCASE("matches adjacency-matrix powers on K_5") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(5, 5);
    a.diagonal().setZero();
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(5, 5);
    for (int r = 0; r <= 6; ++r) {
      CHECK(CompleteSoupSampler::closed_walk_count(5, r, true) ==
            doctest::Approx(p(0, 0)).epsilon(1e-12));
      CHECK(CompleteSoupSampler::closed_walk_count(5, r, false) ==
            doctest::Approx(p(0, 1)).epsilon(1e-12));
      p = p * a;
    }
  }
}

TEST_CASE("length weights on K_2 and K_3") {
  SUBCASE("K_2, kappa=1: only even lengths; w_2 = 1/4, w_4 = 1/32") {
    const auto t = LengthTable::complete(2, 1.0, 0x1.0p-40);
    CHECK(t.weight(2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(t.weight(3) == 0.0);
    CHECK(t.weight(4) == doctest::Approx(0.03125).epsilon(1e-14));
    CHECK(t.weight(5) == 0.0);
  }
  SUBCASE("K_3, kappa=1: w_k = tr(P^k)/k against dense matrix powers") {
    // P has off-diagonal entries 1/(n+kappa-1) = 1/3; tr(P^2) = 6/9, w_2 = 1/3.
    const auto t = LengthTable::complete(3, 1.0, 0x1.0p-40);
    CHECK(t.weight(2) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    const auto trans = build_transition(GraphSpec::complete({3, 1.0}));
    Eigen::MatrixXd pk = trans.p * trans.p;
    for (int k = 2; k <= 8; ++k) {
      CHECK(t.weight(k) == doctest::Approx(pk.trace() / k).epsilon(1e-12));
      pk = pk * trans.p;
    }
  }
  SUBCASE("total weight converges to the exact mass as the cutoff shrinks") {
    for (const auto& [n, kappa] : {std::pair{2, 1.0}, {5, 0.5}, {50, 2.0}}) {
      const double exact = loop_mass(n, kappa).exact;
      const auto t = LengthTable::complete(n, kappa, 0x1.0p-40);
      CHECK(t.exact_mass() == doctest::Approx(exact).epsilon(1e-12));
      CHECK(std::abs(t.total_weight() - exact) < 0x1.0p-38 * exact);
      const auto tighter = LengthTable::complete(n, kappa, 0x1.0p-55);
      CHECK(std::abs(tighter.total_weight() - exact) < std::abs(t.total_weight() - exact) + 1e-18);
    }
  }
}

TEST_CASE("sampled walks satisfy the loop invariants") {
  CompleteSoupSampler sampler(6, 0.8, 1.0);
  rng::Engine e = rng::make_stream(42);
  std::vector<int> walk;
  for (int i = 0; i < 5000; ++i) {
    sampler.sample_walk(e, walk);
    REQUIRE(walk.size() >= 2);
    for (std::size_t j = 0; j < walk.size(); ++j) {
      CHECK(walk[j] >= 0);
      CHECK(walk[j] < 6);
      CHECK(walk[j] != walk[(j + 1) % walk.size()]);
    }
  }
}

TEST_CASE("K_2 loops alternate the two vertices") {
  CompleteSoupSampler sampler(2, 1.0, 1.0);
  rng::Engine e = rng::make_stream(1);
  std::vector<int> walk;
  for (int i = 0; i < 2000; ++i) {
    sampler.sample_walk(e, walk);
    CHECK(walk.size() % 2 == 0);
    for (std::size_t j = 0; j < walk.size(); ++j)
      CHECK(walk[j] == (walk[0] + static_cast<int>(j)) % 2);
  }
}

TEST_CASE("bridge conditioning: closed walks of fixed length are uniform on K_4") {
  // Brute-force oracle: every pointed closed walk of length k on K_n has the
  // same weight, so the empirical distribution must be uniform over all
  // tr(A^k) of them.
  CompleteSoupSampler sampler(4, 1.0, 1.0);
  rng::Engine e = rng::make_stream(777);
  std::vector<int> walk;
  for (const int k : {3, 4, 5}) {
    const long long cells = std::llround(std::pow(3.0, k) + 3.0 * ((k % 2 == 0) ? 1.0 : -1.0));
    std::map<std::vector<int>, long long> counts;
    const long long draws = 60000;
    for (long long i = 0; i < draws; ++i) {
      sampler.sample_walk_of_length(e, k, walk);
      ++counts[walk];
    }
    CHECK(static_cast<long long>(counts.size()) == cells);
    std::vector<double> observed;
    std::vector<double> expected;
    for (const auto& [w, c] : counts) {
      observed.push_back(static_cast<double>(c));
      expected.push_back(static_cast<double>(draws) / static_cast<double>(cells));
    }
    const auto chi = stats::chi_square(observed, expected);
    CHECK(chi.p_value > 0.001);
  }
}

TEST_CASE("length histogram matches w_k (chi-square)") {
  CompleteSoupSampler sampler(4, 1.0, 1.0);
  rng::Engine e = rng::make_stream(2024);
  const long long draws = 100000;
  std::map<int, long long> hist;
  std::vector<int> walk;
  for (long long i = 0; i < draws; ++i) {
    sampler.sample_walk(e, walk);
    ++hist[static_cast<int>(walk.size())];
  }
  const auto& table = sampler.lengths();
  std::vector<double> observed;
  std::vector<double> expected;
  for (int k = 2; k <= table.max_length(); ++k) {
    const auto it = hist.find(k);
    observed.push_back(it == hist.end() ? 0.0 : static_cast<double>(it->second));
    expected.push_back(table.weight(k) / table.total_weight() * static_cast<double>(draws));
  }
  const auto chi = stats::chi_square(observed, expected);
  CHECK(chi.p_value > 0.001);
}

TEST_CASE("fixed 2-gon frequency under the normalized loop measure") {
  // nu(2-gon)/|nu| on K_3, kappa=1: (1/9) / mass.
  CompleteSoupSampler sampler(3, 1.0, 1.0);
  rng::Engine e = rng::make_stream(99);
  const Loop target = Loop::from_walk({0, 1});
  const double p = dgon_measure(2, 3, 1.0) / sampler.lengths().exact_mass();
  const long long draws = 200000;
  long long hits = 0;
  for (long long i = 0; i < draws; ++i) {
    if (sampler.sample_loop(e) == target) ++hits;
  }
  const double freq = static_cast<double>(hits) / draws;
  CHECK(std::abs(freq - p) < 4.0 * binom_se(p, draws));
}

TEST_CASE("mean loop support tracks n(1-(1-1/n)^x)") {
  // The identity is only approximate at finite length (the support of a
  // length-2 loop is exactly 2, the formula gives 2 - 1/n); a 5% band holds
  // comfortably at n=50, x=20.
  CompleteSoupSampler sampler(50, 1.0, 1.0);
  rng::Engine e = rng::make_stream(64);
  stats::Accumulator acc;
  std::vector<int> walk;
  for (int i = 0; i < 20000; ++i) {
    sampler.sample_walk_of_length(e, 20, walk);
    acc.add(static_cast<double>(support(Loop::from_walk(walk)).size()));
  }
  const double predicted = expected_support(50, 20.0);
  CHECK(std::abs(acc.mean() / predicted - 1.0) < 0.05);
}

TEST_CASE("soup statistics") {
  CompleteSoupSampler sampler(2, 1.0, 1.0);
  rng::Engine e = rng::make_stream(31337);
  const double rate = sampler.soup_rate();
  CHECK(rate == doctest::Approx(std::log(4.0 / 3)).epsilon(1e-12));
  const long long soups = 100000;
  stats::Accumulator count_acc;
  stats::Accumulator pair_acc;  // N(N-1), Poisson second factorial moment
  long long empties = 0;
  for (long long i = 0; i < soups; ++i) {
    const LoopConfig config = sampler.sample_soup(e);
    const auto count = static_cast<double>(config.loops.size());
    count_acc.add(count);
    pair_acc.add(count * (count - 1.0));
    if (config.loops.empty()) ++empties;
    long long total = 0;
    for (const auto& l : config.loops) total += l.length();
    CHECK(total == config.total_size);
  }
  SUBCASE("mean loop count = alpha |nu|") {
    CHECK(std::abs(count_acc.mean() - rate) < 4.0 * count_acc.stderr_of_mean());
  }
  SUBCASE("Poisson: E[N(N-1)] = rate^2") {
    CHECK(std::abs(pair_acc.mean() - rate * rate) < 4.0 * pair_acc.stderr_of_mean());
  }
  SUBCASE("P(empty soup) = size_gf(0)") {
    const double p0 = size_gf(0.0, {2, 1.0, 1.0});
    CHECK(std::abs(static_cast<double>(empties) / soups - p0) < 4.0 * binom_se(p0, soups));
  }
}

TEST_CASE("determinism: identical seed and settings give identical streams") {
  const SamplerSettings settings{.seed = 5, .tail_cutoff_epsilon = 0x1.0p-60};
  CompleteSoupSampler a(7, 0.9, 1.3, settings);
  CompleteSoupSampler b(7, 0.9, 1.3, settings);
  rng::Engine ea = rng::make_stream(987654321, 3);
  rng::Engine eb = rng::make_stream(987654321, 3);
  for (int i = 0; i < 200; ++i) {
    const LoopConfig ca = a.sample_soup(ea);
    const LoopConfig cb = b.sample_soup(eb);
    REQUIRE(ca.loops.size() == cb.loops.size());
    CHECK(ca.loops == cb.loops);
    CHECK(ca.total_size == cb.total_size);
  }
}

TEST_CASE("primitive projection: inclusion probability of a fixed 2-gon") {
  // P(eta in PL_alpha) = 1 - (1 - nu(eta))^alpha with nu(eta) = 1/9 on K_3.
  for (const double alpha : {1.0, 2.0}) {
    CompleteSoupSampler sampler(3, 1.0, alpha);
    rng::Engine e = rng::make_stream(4242 + static_cast<std::uint64_t>(alpha));
    const Loop target = Loop::from_walk({0, 1});
    const double p = 1.0 - std::pow(1.0 - 1.0 / 9, alpha);
    const long long soups = 200000;
    long long hits = 0;
    for (long long i = 0; i < soups; ++i) {
      const auto prims = project_primitive(sampler.sample_soup(e));
      if (std::binary_search(prims.begin(), prims.end(), target)) ++hits;
    }
    CHECK(std::abs(static_cast<double>(hits) / soups - p) < 4.0 * binom_se(p, soups));
  }
}

TEST_CASE("loop config json") {
  LoopConfig c;
  c.loops.push_back(Loop::from_walk({0, 1, 2}));
  c.loops.push_back(Loop::from_walk({0, 1}));
  c.total_size = 5;
  const auto j = c.to_json();
  CHECK(j["total_size"] == 5);
  CHECK(j["loops"].size() == 2);
  const auto back = LoopConfig::from_json(j);
  CHECK(back.loops == c.loops);
  CHECK_THROWS_AS(LoopConfig::from_json(nlohmann::json{{"loops", {{0, 1}}}, {"total_size", 3}}),
                  std::invalid_argument);
}

TEST_CASE("general sampler agrees with the fast path on K_5") {
  const auto g = GraphSpec::complete({5, 1.0});
  GeneralSoupSampler general(g, 1.0);
  CompleteSoupSampler fast(5, 1.0, 1.0);
  CHECK(general.soup_rate() == doctest::Approx(fast.soup_rate()).epsilon(1e-10));
  rng::Engine e1 = rng::make_stream(11, 0);
  rng::Engine e2 = rng::make_stream(11, 1);
  const long long draws = 100000;
  const int bins = 24;
  std::vector<double> ha(bins, 0.0);
  std::vector<double> hb(bins, 0.0);
  std::vector<int> walk;
  for (long long i = 0; i < draws; ++i) {
    general.sample_walk(e1, walk);
    ++ha[static_cast<std::size_t>(std::min<int>(static_cast<int>(walk.size()) - 2, bins - 1))];
    fast.sample_walk(e2, walk);
    ++hb[static_cast<std::size_t>(std::min<int>(static_cast<int>(walk.size()) - 2, bins - 1))];
  }
  const auto chi = stats::chi_square_two_sample(ha, hb);
  CHECK(chi.p_value > 0.001);
}

TEST_CASE("general sampler on the star K_{1,3}") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  for (int leaf = 1; leaf < 4; ++leaf) c(0, leaf) = c(leaf, 0) = 1.0;
  const GraphSpec star(c, Eigen::VectorXd::Ones(4));
  GeneralSoupSampler sampler(star, 1.0);
  rng::Engine e = rng::make_stream(321);
  std::vector<int> walk;
  for (int i = 0; i < 5000; ++i) {
    sampler.sample_walk(e, walk);
    CHECK(walk.size() % 2 == 0);  // bipartite: even lengths only
    const std::size_t hub_parity = walk[0] == 0 ? 0 : 1;
    for (std::size_t j = 0; j < walk.size(); ++j) {
      // hub/leaf alternation
      CHECK((walk[j] == 0) == (j % 2 == hub_parity));
    }
  }
}

TEST_CASE("general sampler matches green-determinant cluster law on the star") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  for (int leaf = 1; leaf < 4; ++leaf) c(0, leaf) = c(leaf, 0) = 1.0;
  const GraphSpec star(c, Eigen::VectorXd::Ones(4));
  const auto pi = Partition::from_blocks(4, {{0, 1}, {2, 3}});
  const double p_exact = det_ratio(star, pi);  // alpha = 1
  GeneralSoupSampler sampler(star, 1.0);
  rng::Engine e = rng::make_stream(5150);
  const long long soups = 40000;
  long long hits = 0;
  std::vector<int> buf;
  for (long long i = 0; i < soups; ++i) {
    bool finer = true;
    sampler.sample_soup_walks(e, buf, [&](const std::vector<int>& walk) {
      if (!finer) return;
      for (std::size_t j = 0; j < walk.size(); ++j) {
        if (pi.block_of(walk[j]) != pi.block_of(walk[(j + 1) % walk.size()])) {
          finer = false;
          return;
        }
      }
    });
    if (finer) ++hits;
  }
  CHECK(std::abs(static_cast<double>(hits) / soups - p_exact) <
        4.0 * binom_se(p_exact, soups));
}

TEST_CASE("vertex isolated by zero conductance appears in no loop") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  c(0, 1) = c(1, 0) = 1.0;
  c(1, 2) = c(2, 1) = 1.0;
  c(0, 2) = c(2, 0) = 1.0;  // vertex 3 disconnected
  const GraphSpec g(c, Eigen::VectorXd::Ones(4));
  GeneralSoupSampler sampler(g, 2.0);
  rng::Engine e = rng::make_stream(8);
  std::vector<int> buf;
  for (int i = 0; i < 3000; ++i) {
    sampler.sample_soup_walks(e, buf, [&](const std::vector<int>& walk) {
      for (int v : walk) CHECK(v != 3);
    });
  }
}

TEST_CASE("general sampler enforces the vertex cap") {
  const auto g = GraphSpec::complete({10, 1.0});
  SamplerSettings settings;
  settings.general_cap = 8;
  CHECK_THROWS_AS(GeneralSoupSampler(g, 1.0, settings), std::length_error);
}

TEST_CASE("sampler settings validation") {
  SamplerSettings bad;
  bad.tail_cutoff_epsilon = 0.5;  // above 2^-20
  CHECK_THROWS_AS(CompleteSoupSampler(4, 1.0, 1.0, bad), std::invalid_argument);
}
