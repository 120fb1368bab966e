#include "rholap/mmspace.hpp"

#include "rholap/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>

namespace rholap {

namespace {

// Maximum clique in the "far apart" graph (d >= r) with greedy colouring
// bounds. A clique there is exactly an r-separated set.
class SeparatedSetSearch {
 public:
  SeparatedSetSearch(const MMSpace& space, double r, std::size_t budget)
      : n_(space.size()), words_((n_ + 63) / 64), budget_(budget) {
    std::vector<std::vector<char>> far(n_, std::vector<char>(n_, 0));
    for (Index i = 0; i < n_; ++i)
      for (Index j = 0; j < i; ++j) far[i][j] = far[j][i] = space.dist(i, j) >= r;
    label_ = smallest_last_order(far);
    far_.assign(n_ * words_, 0);
    for (Index a = 0; a < n_; ++a)
      for (Index b = 0; b < a; ++b)
        if (far[label_[a]][label_[b]]) {
          set_bit(row(a), b);
          set_bit(row(b), a);
        }
  }

  PackingResult run(const std::vector<Index>& initial) {
    std::vector<Index> internal(n_);
    for (Index a = 0; a < n_; ++a) internal[label_[a]] = a;
    best_.clear();
    for (Index v : initial) best_.push_back(internal[v]);
    std::vector<std::uint64_t> candidates(words_, 0);
    for (Index i = 0; i < n_; ++i) set_bit(candidates.data(), i);
    std::vector<Index> current;
    expand(current, candidates);
    PackingResult res;
    res.count = best_.size();
    res.exact = !aborted_;
    for (Index v : best_) res.witness.push_back(label_[v]);
    std::sort(res.witness.begin(), res.witness.end());
    res.nodes = nodes_;
    return res;
  }

 private:
  // Degeneracy order in the far graph, last removed first, so the colouring
  // meets dense parts early.
  static std::vector<Index> smallest_last_order(const std::vector<std::vector<char>>& far) {
    const Index n = far.size();
    std::vector<std::size_t> degree(n, 0);
    for (Index i = 0; i < n; ++i) degree[i] = std::count(far[i].begin(), far[i].end(), 1);
    std::vector<char> removed(n, 0);
    std::vector<Index> order(n);
    for (Index pos = n; pos-- > 0;) {
      Index v = n;
      for (Index i = 0; i < n; ++i)
        if (!removed[i] && (v == n || degree[i] < degree[v])) v = i;
      removed[v] = 1;
      order[pos] = v;
      for (Index i = 0; i < n; ++i)
        if (!removed[i] && far[v][i]) --degree[i];
    }
    return order;
  }

  std::uint64_t* row(Index i) { return far_.data() + i * words_; }
  static void set_bit(std::uint64_t* w, Index i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
  static void clear_bit(std::uint64_t* w, Index i) { w[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  bool empty(const std::vector<std::uint64_t>& s) const {
    for (auto w : s)
      if (w) return false;
    return true;
  }

  void expand(std::vector<Index>& current, std::vector<std::uint64_t> candidates) {
    if (aborted_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    // Greedy colouring: each colour class is pairwise "close", so a
    // separated set takes at most one vertex per class.
    std::vector<Index> order;
    std::vector<std::size_t> colour;
    std::vector<std::uint64_t> uncoloured = candidates;
    std::size_t k = 0;
    while (!empty(uncoloured)) {
      ++k;
      std::vector<std::uint64_t> q = uncoloured;
      for (std::size_t w = 0; w < words_; ++w) {
        while (q[w]) {
          Index v = w * 64 + static_cast<Index>(std::countr_zero(q[w]));
          clear_bit(q.data(), v);
          clear_bit(uncoloured.data(), v);
          const std::uint64_t* nv = row(v);
          for (std::size_t t = w; t < words_; ++t) q[t] &= ~nv[t];
          order.push_back(v);
          colour.push_back(k);
        }
      }
    }

    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (current.size() + colour[idx] <= best_.size()) return;
      Index v = order[idx];
      current.push_back(v);
      std::vector<std::uint64_t> next(words_);
      const std::uint64_t* nv = row(v);
      for (std::size_t t = 0; t < words_; ++t) next[t] = candidates[t] & nv[t];
      if (empty(next)) {
        if (current.size() > best_.size()) best_ = current;
      } else {
        expand(current, std::move(next));
      }
      current.pop_back();
      if (aborted_) return;
      clear_bit(candidates.data(), v);
    }
  }

  Index n_;
  std::size_t words_;
  std::size_t budget_;
  std::vector<std::uint64_t> far_;
  std::vector<Index> label_;
  std::vector<Index> best_;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

PackingResult packing_number_exact(const MMSpace& space, double r, std::size_t node_budget) {
  if (!(r > 0)) throw InputError("packing radius must be positive");
  SeparatedSet greedy = greedy_separated_net(space, r);
  SeparatedSetSearch search(space, r, node_budget);
  return search.run(greedy.indices);
}

}  // namespace rholap
