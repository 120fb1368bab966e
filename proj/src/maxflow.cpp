#include "rholap/maxflow.hpp"

#include "rholap/errors.hpp"

#include <queue>

namespace rholap {

RationalMaxFlow::RationalMaxFlow(std::size_t nodes) : adj_(nodes) {}

std::size_t RationalMaxFlow::add_node() {
  adj_.emplace_back();
  return adj_.size() - 1;
}

std::size_t RationalMaxFlow::add_edge(std::size_t from, std::size_t to, const Rational& capacity) {
  if (from >= adj_.size() || to >= adj_.size()) throw InputError("flow edge endpoint out of range");
  if (capacity < 0) throw InputError("flow capacity must be nonnegative");
  const std::size_t id = edges_.size() / 2;
  adj_[from].push_back(edges_.size());
  edges_.push_back({to, capacity, Rational(0)});
  adj_[to].push_back(edges_.size());
  edges_.push_back({from, Rational(0), Rational(0)});
  return id;
}

bool RationalMaxFlow::build_levels(std::size_t s, std::size_t t) {
  level_.assign(adj_.size(), -1);
  level_[s] = 0;
  std::queue<std::size_t> q;
  q.push(s);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t a : adj_[v]) {
      const Arc& arc = edges_[a];
      if (level_[arc.to] < 0 && arc.cap > arc.flow) {
        level_[arc.to] = level_[v] + 1;
        q.push(arc.to);
      }
    }
  }
  return level_[t] >= 0;
}

Rational RationalMaxFlow::push(std::size_t v, std::size_t t, const Rational& limit) {
  if (v == t) return limit;
  for (std::size_t& i = next_[v]; i < adj_[v].size(); ++i) {
    const std::size_t a = adj_[v][i];
    Arc& arc = edges_[a];
    if (level_[arc.to] != level_[v] + 1 || arc.cap <= arc.flow) continue;
    Rational room = arc.cap - arc.flow;
    const Rational got = push(arc.to, t, room < limit ? room : limit);
    if (got > 0) {
      arc.flow += got;
      edges_[a ^ 1].flow -= got;
      return got;
    }
  }
  return Rational(0);
}

Rational RationalMaxFlow::max_flow(std::size_t source, std::size_t sink) {
  if (source >= adj_.size() || sink >= adj_.size() || source == sink)
    throw InputError("invalid source or sink");
  // Upper bound on any augmenting amount: the total capacity out of the source.
  Rational bound(0);
  for (std::size_t a : adj_[source]) bound += edges_[a].cap;
  Rational total(0);
  while (build_levels(source, sink)) {
    next_.assign(adj_.size(), 0);
    while (true) {
      const Rational got = push(source, sink, bound + 1);
      if (got == 0) break;
      total += got;
    }
  }
  return total;
}

std::vector<bool> RationalMaxFlow::residual_reachable(std::size_t source) const {
  std::vector<bool> seen(adj_.size(), false);
  std::vector<std::size_t> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t a : adj_[v]) {
      const Arc& arc = edges_[a];
      if (!seen[arc.to] && arc.cap > arc.flow) {
        seen[arc.to] = true;
        stack.push_back(arc.to);
      }
    }
  }
  return seen;
}

}  // namespace rholap
