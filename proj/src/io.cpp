#include "mlergm/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mlergm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool blank_or_comment(const std::string& line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream cells(line);
  std::string cell;
  while (std::getline(cells, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

EdgeList read_edge_list(std::istream& in) {
  EdgeList out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    std::istringstream row(line);
    if (!header) {
      if (!(row >> out.n_nodes >> out.n_layers)) throw ParseError("expected header 'n_nodes K'", line_no);
      if (out.n_nodes < 0) throw ParseError("negative node count", line_no);
      if (out.n_layers < 2) throw ParseError("need K >= 2 layers", line_no);
      out.weights = WeightMatrix::Zero(out.n_nodes, out.n_nodes);
      header = true;
      continue;
    }
    int i = 0, j = 0, w = 0;
    if (!(row >> i >> j >> w)) throw ParseError("expected 'i j weight'", line_no);
    std::string extra;
    if (row >> extra) throw ParseError("trailing field '" + extra + "'", line_no);
    if (i < 0 || j < 0 || i >= out.n_nodes || j >= out.n_nodes) throw ParseError("node index out of range", line_no);
    if (i == j) throw ParseError("self-loop", line_no);
    if (std::abs(w) > out.n_layers) throw ParseError("weight exceeds the layer count", line_no);
    if (out.weights(i, j) != 0 && out.weights(i, j) != w) throw ParseError("conflicting duplicate dyad", line_no);
    out.weights(i, j) = out.weights(j, i) = w;
  }
  if (!header) throw ParseError("missing header", line_no);
  return out;
}

void write_edge_list(std::ostream& out, const WeightMatrix& weights, int n_layers) {
  const int n = static_cast<int>(weights.rows());
  out << n << ' ' << n_layers << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (weights(i, j) != 0) out << i << ' ' << j << ' ' << weights(i, j) << '\n';
}

LayerStack stack_from_edge_list(const EdgeList& edges) {
  std::vector<double> thresholds;
  for (int k = 2; k <= edges.n_layers; ++k) thresholds.push_back(k);
  return decompose(WeightedSignedNetwork(edges.weights), thresholds);
}

void write_stack(std::ostream& out, const LayerStack& stack) {
  write_edge_list(out, recompose(stack).weights(), stack.n_layers());
}

NodeTable read_node_table(std::istream& in, const std::vector<std::string>& required) {
  NodeTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    auto cells = split_csv_line(line);
    if (header.empty()) {
      header = std::move(cells);
      if (header.empty() || header.front() != "label") throw ParseError("first column must be 'label'", line_no);
      for (const auto& name : required)
        if (std::find(header.begin(), header.end(), name) == header.end())
          throw ParseError("missing attribute column '" + name + "'", line_no);
      for (std::size_t c = 1; c < header.size(); ++c) {
        table.attribute_order.push_back(header[c]);
        table.attributes[header[c]];
      }
      continue;
    }
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()),
                       line_no);
    table.labels.push_back(cells[0]);
    for (std::size_t c = 1; c < header.size(); ++c) table.attributes[header[c]].push_back(cells[c]);
  }
  if (header.empty()) throw ParseError("missing header", line_no);
  return table;
}

void write_node_table(std::ostream& out, const NodeTable& table) {
  out << "label";
  for (const auto& name : table.attribute_order) out << ',' << name;
  out << '\n';
  for (std::size_t r = 0; r < table.labels.size(); ++r) {
    out << table.labels[r];
    for (const auto& name : table.attribute_order) out << ',' << table.attributes.at(name)[r];
    out << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace mlergm
