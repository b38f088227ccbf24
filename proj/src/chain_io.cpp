#include "mlergm/chain_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace mlergm {

Eigen::Index ChainTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return static_cast<Eigen::Index>(c);
  return -1;
}

ChainTable chain_table(const Chain& chain) {
  ChainTable table;
  const auto M = chain.n_blocks();
  const auto p = chain.dim();
  table.columns.push_back("iter");
  for (Eigen::Index j = 0; j < M; ++j)
    for (const auto& label : chain.stat_labels)
      table.columns.push_back("phi[" + std::to_string(chain.layer_ids[static_cast<std::size_t>(j)]) + "]." + label);
  for (const auto& label : chain.stat_labels) table.columns.push_back("mu." + label);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = a; b < p; ++b)
      table.columns.push_back("Sigma[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "]");
  for (Eigen::Index j = 0; j < M; ++j)
    table.columns.push_back("accept[" + std::to_string(chain.layer_ids[static_cast<std::size_t>(j)]) + "]");
  for (Eigen::Index j = 0; j < M; ++j)
    table.columns.push_back("gamma[" + std::to_string(chain.layer_ids[static_cast<std::size_t>(j)]) + "]");

  table.values.resize(static_cast<Eigen::Index>(chain.size()), static_cast<Eigen::Index>(table.columns.size()));
  for (std::size_t r = 0; r < chain.size(); ++r) {
    Eigen::Index c = 0;
    auto row = table.values.row(static_cast<Eigen::Index>(r));
    row(c++) = static_cast<double>(chain.iterations[r]);
    for (Eigen::Index j = 0; j < M; ++j)
      for (Eigen::Index s = 0; s < p; ++s) row(c++) = chain.phi[r](j, s);
    for (Eigen::Index s = 0; s < p; ++s) row(c++) = chain.mu[r](s);
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index b = a; b < p; ++b) row(c++) = chain.Sigma[r](a, b);
    for (Eigen::Index j = 0; j < M; ++j) row(c++) = chain.accepted[r][static_cast<std::size_t>(j)];
    for (Eigen::Index j = 0; j < M; ++j) row(c++) = chain.gamma[r](j);
  }
  return table;
}

void write_chain_csv(std::ostream& out, const Chain& chain) {
  const auto table = chain_table(chain);
  // Sigma[i,j] names contain a comma, so those header cells are quoted.
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& name = table.columns[c];
    out << (c ? "," : "");
    if (name.find(',') != std::string::npos)
      out << '"' << name << '"';
    else
      out << name;
  }
  out << '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
      auto res = std::to_chars(buf, buf + sizeof buf, table.values(r, c));
      if (c) out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

ChainTable read_chain_table(std::istream& in) {
  ChainTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("chain CSV is empty");
  {
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') {
        quoted = !quoted;
      } else if (ch == ',' && !quoted) {
        table.columns.push_back(std::move(cell));
        cell.clear();
      } else if (ch != '\r') {
        cell += ch;
      }
    }
    if (quoted) throw std::runtime_error("chain CSV header has an unterminated quote");
    table.columns.push_back(std::move(cell));
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw std::runtime_error("chain CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != table.columns.size())
      throw std::runtime_error("chain CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.columns.size()) + " fields, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(table.columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return table;
}

Chain read_chain_csv(std::istream& in) {
  const ChainTable table = read_chain_table(in);
  Chain chain;
  const std::regex phi_re(R"(phi\[(\d+)\]\.(.+))");
  std::vector<std::pair<int, std::string>> phi_cols;
  for (const auto& name : table.columns) {
    std::smatch m;
    if (std::regex_match(name, m, phi_re)) phi_cols.emplace_back(std::stoi(m[1]), m[2]);
  }
  if (phi_cols.empty()) throw std::runtime_error("chain CSV has no phi[k].<stat> columns");
  for (const auto& [k, label] : phi_cols) {
    if (chain.layer_ids.empty() || chain.layer_ids.back() != k) chain.layer_ids.push_back(k);
    if (chain.layer_ids.size() == 1) chain.stat_labels.push_back(label);
  }
  const auto M = chain.n_blocks();
  const auto p = chain.dim();
  if (static_cast<Eigen::Index>(phi_cols.size()) != M * p) throw std::runtime_error("chain CSV: ragged phi columns");

  auto col = [&](const std::string& name) {
    const auto c = table.column(name);
    if (c < 0) throw std::runtime_error("chain CSV is missing column " + name);
    return c;
  };
  const auto iter_c = col("iter");
  chain.total_proposals.assign(static_cast<std::size_t>(M), 0);
  chain.total_accepts.assign(static_cast<std::size_t>(M), 0);
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    const auto row = table.values.row(r);
    chain.iterations.push_back(static_cast<std::size_t>(row(iter_c)));
    Eigen::MatrixXd phi(M, p);
    Eigen::VectorXd mu(p);
    Eigen::MatrixXd sigma(p, p);
    std::vector<std::uint8_t> acc(static_cast<std::size_t>(M));
    Eigen::VectorXd gamma(M);
    for (Eigen::Index j = 0; j < M; ++j) {
      const std::string k = std::to_string(chain.layer_ids[static_cast<std::size_t>(j)]);
      for (Eigen::Index s = 0; s < p; ++s) phi(j, s) = row(col("phi[" + k + "]." + chain.stat_labels[static_cast<std::size_t>(s)]));
      acc[static_cast<std::size_t>(j)] = row(col("accept[" + k + "]")) != 0.0;
      gamma(j) = row(col("gamma[" + k + "]"));
    }
    for (Eigen::Index s = 0; s < p; ++s) mu(s) = row(col("mu." + chain.stat_labels[static_cast<std::size_t>(s)]));
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index b = a; b < p; ++b)
        sigma(a, b) = sigma(b, a) = row(col("Sigma[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "]"));
    if (chain.iterations.back() > 0)
      for (Eigen::Index j = 0; j < M; ++j) {
        chain.total_proposals[static_cast<std::size_t>(j)] += 1;
        chain.total_accepts[static_cast<std::size_t>(j)] += acc[static_cast<std::size_t>(j)];
      }
    chain.phi.push_back(std::move(phi));
    chain.mu.push_back(std::move(mu));
    chain.Sigma.push_back(std::move(sigma));
    chain.accepted.push_back(std::move(acc));
    chain.gamma.push_back(std::move(gamma));
  }
  return chain;
}

}  // namespace mlergm
