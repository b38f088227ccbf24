#include <doctest.h>

#include <random>
#include <sstream>

#include "mlergm/io.hpp"
#include "mlergm/senate.hpp"

using namespace mlergm;

namespace {

Eigen::MatrixXd random_similarity(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.4);
  Eigen::MatrixXd b(n, 30);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 30; ++j) b(i, j) = coin(rng);
  return cosine(center_rows(b)).values;
}

}  // namespace

TEST_SUITE("senate") {
  TEST_CASE("row centring") {
    Eigen::MatrixXd m(2, 3);
    m << 1, 0, 0, 1, 1, 1;
    const Eigen::MatrixXd c = center_rows(m);
    CHECK(c(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(c(0, 1) == doctest::Approx(-1.0 / 3.0));
    CHECK(c.row(1).isZero());
    CHECK_THROWS_AS(center_rows(Eigen::MatrixXd(0, 3)), std::invalid_argument);
    Eigen::RowVector4d r(1, 0, 1, 0);
    CHECK(center_rows(r).isApprox(Eigen::RowVector4d(0.5, -0.5, 0.5, -0.5)));
    const Eigen::MatrixXd rnd = center_rows(Eigen::MatrixXd::Random(5, 7));
    CHECK(rnd.rowwise().mean().cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("orthogonal rows have zero similarity") {
    Eigen::MatrixXd r(2, 4);
    r << 1, -1, 0, 0, 0, 0, 1, -1;
    CHECK(std::abs(cosine(r).values(0, 1)) < 1e-15);
  }

  TEST_CASE("cosine of identical, opposite and zero rows") {
    Eigen::MatrixXd r(4, 3);
    r << 1, 2, -3, 1, 2, -3, -1, -2, 3, 0, 0, 0;
    const auto s = cosine(r);
    CHECK(s.values(0, 1) == doctest::Approx(1.0));
    CHECK(s.values(0, 2) == doctest::Approx(-1.0));
    CHECK(s.values(0, 3) == 0.0);
    CHECK(s.values(3, 3) == 1.0);
    CHECK(s.zero_rows == std::vector<int>{3});
    CHECK(s.values.isApprox(s.values.transpose()));
  }

  TEST_CASE("target density 1 gives a complete first layer") {
    std::mt19937_64 rng(91);
    SimilarityMatrix s{random_similarity(12, rng), {}};
    const auto r = density_thresholds(s, {1.0, 0.3});
    CHECK(r.achieved_density[0] == 1.0);
    CHECK(r.stack.layer(1).cast<int>().sum() == 12 * 11);
  }

  TEST_CASE("threshold invariants on random similarities") {
    std::mt19937_64 rng(92);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 6 + static_cast<int>(rng() % 20);
      SimilarityMatrix s{random_similarity(n, rng), {}};
      const std::vector<double> targets{0.25, 0.15, 0.10, 0.05};
      const auto r = density_thresholds(s, targets);
      CHECK(validate(r.stack).empty());
      CHECK(r.stack.n_layers() == 4);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        CHECK(r.achieved_density[k] <= targets[k] + 1e-12);
        if (k > 0) CHECK(r.thresholds[k] >= r.thresholds[k - 1]);
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const int depth = std::abs(r.weights(i, j));
          for (int k = 1; k <= 4; ++k)
            CHECK((depth >= k) == (std::abs(s.values(i, j)) >= r.thresholds[static_cast<std::size_t>(k - 1)]));
          if (depth > 0) CHECK((r.weights(i, j) > 0) == (s.values(i, j) >= 0.0));
        }
    }
  }

  TEST_CASE("ties are kept together") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(4, 4, 0.5);
    v.diagonal().setOnes();
    const auto r = density_thresholds({v, {}}, {0.5, 0.2});
    CHECK(r.achieved_density[0] == 0.0);
    CHECK_FALSE(r.exact[0]);
  }

  TEST_CASE("deterministic") {
    std::mt19937_64 rng(93);
    SimilarityMatrix s{random_similarity(15, rng), {}};
    const auto a = density_thresholds(s, {0.3, 0.1});
    const auto b = density_thresholds(s, {0.3, 0.1});
    CHECK(a.weights == b.weights);
    CHECK(a.thresholds == b.thresholds);
  }

  TEST_CASE("target validation") {
    SimilarityMatrix s{Eigen::MatrixXd::Identity(3, 3), {}};
    CHECK_THROWS_AS(density_thresholds(s, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(density_thresholds(s, {0.2, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(density_thresholds(s, {1.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(density_thresholds(s, {0.5, 0.0}), std::invalid_argument);
  }

  TEST_CASE("incidence reading") {
    std::istringstream actors("label,party,state\nA,R,TX\nB,D,CA\nC,R,UT\n");
    std::istringstream spons("senator_id,bill_id\nA,b1\nB,b1\nA,b2\nA,b2\nC,b3\n");
    const auto inc = read_incidence(spons, actors);
    CHECK(inc.n_actors() == 3);
    CHECK(inc.n_items() == 3);
    CHECK(inc.items == std::vector<std::string>{"b1", "b2", "b3"});
    CHECK(inc.entries(0, 1) == 1);
    CHECK(inc.entries.cast<int>().sum() == 4);
    CHECK(inc.attributes.at("party") == std::vector<std::string>{"R", "D", "R"});
  }

  TEST_CASE("incidence errors") {
    {
      std::istringstream actors("label,party\nA,R\nB,D\n");
      std::istringstream spons("senator_id,bill_id\nA,b1\nZ,b1\n");
      try {
        read_incidence(spons, actors);
        FAIL("expected ParseError");
      } catch (const ParseError& e) {
        CHECK(e.line() == 3);
      }
    }
    {
      std::istringstream actors("label,party\nA,R\n");
      std::istringstream spons("senator_id,bill_id\nA,b1\n");
      CHECK_THROWS_WITH(read_incidence(spons, actors), doctest::Contains("need >= 2 actors"));
    }
    {
      std::istringstream actors("label,state\nA,TX\nB,CA\n");
      std::istringstream spons("senator_id,bill_id\nA,b1\n");
      CHECK_THROWS_WITH(read_incidence(spons, actors), doctest::Contains("'party'"));
    }
  }
}
