#include "mlergm/senate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "mlergm/io.hpp"

namespace mlergm {

BipartiteIncidence read_incidence(std::istream& sponsorships, std::istream& actors) {
  const NodeTable table = read_node_table(actors, {"party"});
  if (table.labels.size() < 2) throw ParseError("need >= 2 actors", 0);
  std::map<std::string, int> actor_index;
  for (std::size_t r = 0; r < table.labels.size(); ++r)
    if (!actor_index.emplace(table.labels[r], static_cast<int>(r)).second)
      throw ParseError("duplicate actor label '" + table.labels[r] + "'", r + 2);

  std::vector<std::pair<int, int>> pairs;
  std::map<std::string, int> item_index;
  BipartiteIncidence out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(sponsorships, line)) {
    ++line_no;
    auto cells = split_csv_line(line);
    if (cells.empty() || (cells.size() == 1 && cells[0].empty()) || cells[0].rfind('#', 0) == 0) continue;
    if (!header) {
      if (cells.size() != 2 || cells[0] != "senator_id" || cells[1] != "bill_id")
        throw ParseError("expected header 'senator_id,bill_id'", line_no);
      header = true;
      continue;
    }
    if (cells.size() != 2) throw ParseError("expected 2 fields, got " + std::to_string(cells.size()), line_no);
    const auto actor = actor_index.find(cells[0]);
    if (actor == actor_index.end()) throw ParseError("unknown actor '" + cells[0] + "'", line_no);
    if (cells[1].empty()) throw ParseError("empty item identifier", line_no);
    const auto [item, inserted] = item_index.emplace(cells[1], static_cast<int>(out.items.size()));
    if (inserted) out.items.push_back(cells[1]);
    pairs.emplace_back(actor->second, item->second);
  }
  if (!header) throw ParseError("missing header", line_no);
  if (out.items.empty()) throw ParseError("no sponsorship rows", line_no);

  out.entries.setZero(static_cast<Eigen::Index>(table.labels.size()), static_cast<Eigen::Index>(out.items.size()));
  for (const auto& [a, b] : pairs) out.entries(a, b) = 1;
  out.actor_labels = table.labels;
  out.attributes = table.attributes;
  return out;
}

SimilarityMatrix cosine(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  SimilarityMatrix out;
  const Eigen::VectorXd norms = rows.rowwise().norm();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (norms(i) > 0.0)
      inv(i) = 1.0 / norms(i);
    else
      out.zero_rows.push_back(static_cast<int>(i));
  }
  const Eigen::MatrixXd unit = inv.asDiagonal() * rows;
  out.values = (unit * unit.transpose()).cwiseMax(-1.0).cwiseMin(1.0);
  out.values = 0.5 * (out.values + out.values.transpose());
  out.values.diagonal().setOnes();
  return out;
}

ThresholdResult density_thresholds(const SimilarityMatrix& s, const std::vector<double>& targets) {
  const Eigen::MatrixXd& S = s.values;
  const auto n = static_cast<int>(S.rows());
  if (n < 2 || S.cols() != n) throw std::invalid_argument("density_thresholds: need a square matrix with >= 2 rows");
  if (targets.size() < 2) throw std::invalid_argument("density_thresholds: need >= 2 target densities");
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (!(targets[k] > 0.0 && targets[k] <= 1.0))
      throw std::invalid_argument("density_thresholds: targets must lie in (0, 1]");
    if (k > 0 && !(targets[k] < targets[k - 1]))
      throw std::invalid_argument("density_thresholds: targets must be strictly decreasing");
  }

  std::vector<double> mags;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) mags.push_back(std::abs(S(i, j)));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  const auto n_dyads = mags.size();

  ThresholdResult out;
  out.targets = targets;
  for (double d : targets) {
    const auto budget = static_cast<std::size_t>(std::floor(d * static_cast<double>(n_dyads) + 1e-9));
    double tau;
    if (budget >= n_dyads) {
      tau = mags.back();
    } else if (budget == 0) {
      tau = std::nextafter(mags.front(), std::numeric_limits<double>::infinity());
    } else {
      // mags[budget] is the first magnitude that must stay out; every value
      // tied with it goes with it.
      std::size_t last = budget;
      while (last > 0 && mags[last - 1] == mags[budget]) --last;
      tau = last == 0 ? std::nextafter(mags.front(), std::numeric_limits<double>::infinity()) : mags[last - 1];
    }
    const auto count = static_cast<std::size_t>(
        std::count_if(mags.begin(), mags.end(), [tau](double v) { return v >= tau; }));
    out.thresholds.push_back(tau);
    out.exact.push_back(count == std::min(budget, n_dyads));
  }

  const int K = static_cast<int>(targets.size());
  out.weights = WeightMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double m = std::abs(S(i, j));
      int depth = 0;
      while (depth < K && m >= out.thresholds[static_cast<std::size_t>(depth)]) ++depth;
      const int w = S(i, j) < 0.0 ? -depth : depth;
      out.weights(i, j) = out.weights(j, i) = w;
    }
  }
  std::vector<double> layer_thresholds;
  for (int k = 2; k <= K; ++k) layer_thresholds.push_back(k);
  out.stack = decompose(WeightedSignedNetwork(out.weights), layer_thresholds);
  for (const auto& summary : layer_summary(out.stack)) {
    out.achieved_density.push_back(summary.density);
    out.positive_fraction.push_back(summary.positive_fraction.value_or(0.0));
  }
  return out;
}

std::string provenance_json(const ThresholdResult& result, const BipartiteIncidence& data,
                            const std::vector<std::string>& input_hashes) {
  nlohmann::ordered_json j;
  j["n_actors"] = data.n_actors();
  j["n_items"] = data.n_items();
  j["n_layers"] = result.targets.size();
  j["target_density"] = result.targets;
  j["thresholds"] = result.thresholds;
  j["achieved_density"] = result.achieved_density;
  j["positive_fraction"] = result.positive_fraction;
  j["target_reached_exactly"] = result.exact;
  j["input_hashes"] = input_hashes;
  return j.dump(2);
}

}  // namespace mlergm
