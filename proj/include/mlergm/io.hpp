#pragma once

// Text formats: the layer edge list (header "n_nodes K", then "i j weight"
// rows with 0-based indices and signed depth weights) and node attribute CSV
// (header "label,attr1,...").

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlergm/network.hpp"

namespace mlergm {

/// Parse error carrying the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Splits one CSV record on commas and trims surrounding whitespace.
std::vector<std::string> split_csv_line(const std::string& line);

struct EdgeList {
  int n_nodes = 0;
  int n_layers = 0;
  WeightMatrix weights;
};

EdgeList read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightMatrix& weights, int n_layers);

/// Stack with integer thresholds tau_k = k.
LayerStack stack_from_edge_list(const EdgeList& edges);
void write_stack(std::ostream& out, const LayerStack& stack);

struct NodeTable {
  std::vector<std::string> labels;
  NodeAttributes attributes;
  std::vector<std::string> attribute_order;
};

/// `required` lists attribute columns that must be present.
NodeTable read_node_table(std::istream& in, const std::vector<std::string>& required = {});
void write_node_table(std::ostream& out, const NodeTable& table);

std::string read_file(const std::string& path);

}  // namespace mlergm
