#include <doctest.h>

#include <random>

#include "mlergm/layer_state.hpp"
#include "reference.hpp"

using namespace mlergm;

TEST_SUITE("layer_state") {
  TEST_CASE("incremental statistics track full evaluation through random toggles") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 4 + static_cast<int>(rng() % 10);
      const auto attrs = ref::random_party(n, rng);
      const auto layer = ref::random_layer(n, 0.8, 0.5, rng);
      const auto dyads = dyads_of(layer.support);
      if (dyads.empty()) continue;
      const LayerModel m(ref::all_kinds(), attrs, n);
      LayerState state(m, layer.y);
      CHECK((state.stats() - ref::statistics(m.specs(), layer.y, layer.support, attrs)).cwiseAbs().maxCoeff() < 1e-9);
      for (int step = 0; step < 200; ++step) {
        const Dyad d = dyads[rng() % dyads.size()];
        const int to = static_cast<int>(rng() % 3) - 1;
        const StatVector predicted = state.delta(d.i, d.j, to);
        const StatVector before = state.stats();
        const StatVector direct = change_stat(m, d, state.state(d.i, d.j), to, state.y(), layer.support);
        CHECK((predicted - direct).cwiseAbs().maxCoeff() < 1e-10);
        state.set(d.i, d.j, to);
        CHECK((state.stats() - before - predicted).cwiseAbs().maxCoeff() < 1e-9);
      }
      CHECK((state.stats() - ref::statistics(m.specs(), state.y(), layer.support, attrs)).cwiseAbs().maxCoeff() < 1e-8);
      for (int u = 0; u < n; ++u) {
        int deg = 0;
        for (int v = 0; v < n; ++v) deg += state.y()(u, v) != 0;
        CHECK(state.degree(u) == deg);
        for (int v = 0; v < n; ++v) {
          if (v == u) continue;
          for (int sigma : {-1, 1}) {
            int shared = 0;
            for (int w = 0; w < n; ++w)
              shared += w != u && w != v && state.y()(u, w) == sigma && state.y()(v, w) == sigma;
            CHECK(state.partners(u, v, sigma) == shared);
          }
        }
      }
    }
  }
}
