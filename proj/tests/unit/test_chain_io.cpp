#include <doctest.h>

#include <random>
#include <sstream>

#include "mlergm/chain_io.hpp"
#include "reference.hpp"

using namespace mlergm;

namespace {

Chain tiny_chain() {
  std::mt19937_64 rng(61);
  const auto stack = decompose(WeightedSignedNetwork(ref::random_weights(9, 3, 0.6, rng)), {2.0, 3.0});
  const auto attrs = ref::random_party(9, rng);
  McmcConfig c;
  c.iterations = 40;
  c.t_start = 10;
  c.adapt_every = 5;
  c.aux_iters = 100;
  c.seed = 8;
  return fit(stack, attrs, {ref::senate_model(0.5), ref::senate_model(0.3)}, HyperPriors::isotropic(5, 4.0, 12.0, 1.0),
             c);
}

}  // namespace

TEST_SUITE("chain_io") {
  TEST_CASE("csv round trip preserves every stored draw") {
    const Chain chain = tiny_chain();
    std::stringstream buf;
    write_chain_csv(buf, chain);
    const Chain back = read_chain_csv(buf);
    REQUIRE(back.size() == chain.size());
    CHECK(back.stat_labels == chain.stat_labels);
    CHECK(back.layer_ids == chain.layer_ids);
    for (std::size_t t = 0; t < chain.size(); ++t) {
      CHECK(back.iterations[t] == chain.iterations[t]);
      CHECK(back.phi[t] == chain.phi[t]);
      CHECK(back.mu[t] == chain.mu[t]);
      CHECK(back.Sigma[t] == chain.Sigma[t]);
      CHECK(back.gamma[t] == chain.gamma[t]);
      CHECK(back.accepted[t] == chain.accepted[t]);
    }
  }

  TEST_CASE("writing twice is byte-identical") {
    const Chain chain = tiny_chain();
    std::ostringstream a, b;
    write_chain_csv(a, chain);
    write_chain_csv(b, tiny_chain());
    CHECK(a.str() == b.str());
  }

  TEST_CASE("table columns follow the documented layout") {
    const ChainTable t = chain_table(tiny_chain());
    CHECK(t.columns.front() == "iter");
    CHECK(t.column("phi[2].edges_pos") > 0);
    CHECK(t.column("mu.edges_pos") > 0);
    CHECK(t.column("Sigma[1,1]") > 0);
    CHECK(t.column("Sigma[1,5]") > 0);
    CHECK(t.column("Sigma[5,1]") == -1);
    CHECK(t.column("accept[3]") > 0);
    CHECK(t.column("gamma[2]") > 0);
    CHECK(t.column("nope") == -1);
    // 1 + 2*5 phi + 5 mu + 15 Sigma + 2 accept + 2 gamma
    CHECK(t.columns.size() == 35);
  }

  TEST_CASE("malformed input is rejected") {
    std::istringstream empty("");
    CHECK_THROWS(read_chain_table(empty));
    std::istringstream ragged("iter,mu.a\n0,1\n1\n");
    CHECK_THROWS(read_chain_table(ragged));
    std::istringstream junk("iter,mu.a\n0,abc\n");
    CHECK_THROWS(read_chain_table(junk));
  }
}
