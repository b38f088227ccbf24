#include <doctest.h>

#include <sstream>

#include "mlergm/io.hpp"

using namespace mlergm;

TEST_SUITE("io") {
  TEST_CASE("edge list round trip") {
    std::istringstream in("# comment\n4 3\n0 1 -2\n1 2 3\n\n2 3 1\n");
    const EdgeList e = read_edge_list(in);
    CHECK(e.n_nodes == 4);
    CHECK(e.n_layers == 3);
    CHECK(e.weights(1, 0) == -2);
    const auto stack = stack_from_edge_list(e);
    CHECK(stack.n_layers() == 3);
    CHECK(stack.layer(3)(1, 2) == 1);
    std::ostringstream out;
    write_stack(out, stack);
    CHECK(out.str() == "4 3\n0 1 -2\n1 2 3\n2 3 1\n");
  }

  TEST_CASE("edge list errors carry line numbers") {
    auto fails_at = [](const std::string& text, std::size_t line) {
      std::istringstream in(text);
      try {
        read_edge_list(in);
      } catch (const ParseError& e) {
        return e.line() == line;
      }
      return false;
    };
    CHECK(fails_at("3 2\n0 3 1\n", 2));
    CHECK(fails_at("3 2\n0 0 1\n", 2));
    CHECK(fails_at("3 2\n0 1 1\n0 1 2\n", 3));
    CHECK(fails_at("3 2\n0 1 5\n", 2));
    CHECK(fails_at("3 2\n0 1\n", 2));
    CHECK(fails_at("3 2\n0 1 1 7\n", 2));
    CHECK(fails_at("3 1\n", 1));
    CHECK(fails_at("", 0));
  }

  TEST_CASE("node table with required columns") {
    std::istringstream in("label,party,state\nA, R ,TX\nB,D,CA\n");
    const NodeTable t = read_node_table(in, {"party"});
    CHECK(t.labels == std::vector<std::string>{"A", "B"});
    CHECK(t.attributes.at("party")[0] == "R");
    CHECK(t.attribute_order == std::vector<std::string>{"party", "state"});
    std::ostringstream out;
    write_node_table(out, t);
    CHECK(out.str() == "label,party,state\nA,R,TX\nB,D,CA\n");
  }

  TEST_CASE("missing attribute column is named") {
    std::istringstream in("label,state\nA,TX\n");
    try {
      read_node_table(in, {"party"});
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("party") != std::string::npos);
    }
  }

  TEST_CASE("ragged node rows are rejected") {
    std::istringstream in("label,party\nA,R,extra\n");
    CHECK_THROWS_AS(read_node_table(in), ParseError);
    std::istringstream bad_header("name,party\n");
    CHECK_THROWS_AS(read_node_table(bad_header), ParseError);
  }

  TEST_CASE("split_csv_line keeps empty trailing fields") {
    CHECK(split_csv_line("a, b ,") == std::vector<std::string>{"a", "b", ""});
  }
}
