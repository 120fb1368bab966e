#pragma once

#include "rholap/rational.hpp"

#include <cstddef>
#include <vector>

namespace rholap {

/// Dinic max-flow over exact rationals.
class RationalMaxFlow {
 public:
  explicit RationalMaxFlow(std::size_t nodes = 0);

  std::size_t add_node();
  std::size_t node_count() const { return adj_.size(); }
  /// Returns an edge handle usable with flow().
  std::size_t add_edge(std::size_t from, std::size_t to, const Rational& capacity);

  Rational max_flow(std::size_t source, std::size_t sink);
  const Rational& flow(std::size_t edge) const { return edges_[2 * edge].flow; }
  const Rational& capacity(std::size_t edge) const { return edges_[2 * edge].cap; }

  /// Nodes reachable from `source` in the residual graph of the current flow.
  std::vector<bool> residual_reachable(std::size_t source) const;

 private:
  struct Arc {
    std::size_t to;
    Rational cap;
    Rational flow;
  };

  bool build_levels(std::size_t s, std::size_t t);
  Rational push(std::size_t v, std::size_t t, const Rational& limit);

  std::vector<Arc> edges_;  // arc 2k is edge k, arc 2k+1 its reverse
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace rholap
