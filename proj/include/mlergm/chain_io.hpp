#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mlergm/exchange.hpp"

namespace mlergm {

/// Generic numeric table: one column per parameter, one row per stored draw.
struct ChainTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // rows = draws

  Eigen::Index column(const std::string& name) const;  // -1 if absent
};

/// Long-format chain CSV. Columns: iter, phi[k].<stat>, mu.<stat>,
/// Sigma[i,j] (upper triangle, 1-based), accept[k], gamma[k].
void write_chain_csv(std::ostream& out, const Chain& chain);
ChainTable chain_table(const Chain& chain);

ChainTable read_chain_table(std::istream& in);
/// Rebuilds the draws of a chain written by write_chain_csv. Run totals are
/// recovered from the stored acceptance flags.
Chain read_chain_csv(std::istream& in);

}  // namespace mlergm
