#include "statictracker/assignment.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <numeric>

namespace statictracker {
namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// One connected component, padded to a square of side n. Rows and columns
// beyond the real ones are dummies.
class ComponentSolver {
 public:
  ComponentSolver(const CandidateMatrix& m, std::vector<std::size_t> rows,
                  std::vector<std::size_t> cols)
      : m_(m), rows_(std::move(rows)), cols_(std::move(cols)),
        n_(std::max(rows_.size(), cols_.size())) {
    std::int64_t max_dist = 0;
    for (auto r : rows_) {
      for (auto c : cols_) {
        if (m_.at(r, c) > 0) max_dist = std::max(max_dist, distance(r, c));
      }
    }
    const std::int64_t scale =
        static_cast<std::int64_t>(std::min(rows_.size(), cols_.size())) * max_dist + 1;
    cost_.assign(n_ * n_, 0);
    for (std::size_t a = 0; a < rows_.size(); ++a) {
      for (std::size_t b = 0; b < cols_.size(); ++b) {
        const int w = m_.at(rows_[a], cols_[b]);
        if (w > 0) cost_[a * n_ + b] = -(w * scale - distance(rows_[a], cols_[b]));
      }
    }
  }

  void solve(Assignment& out) {
    hungarian();
    refine_lexicographically();
    for (std::size_t a = 0; a < rows_.size(); ++a) {
      const auto b = match_row_[a];
      if (is_edge(a, b)) out.emplace_back(rows_[a], cols_[b]);
    }
  }

 private:
  std::int64_t distance(std::size_t r, std::size_t c) const {
    return std::llabs(static_cast<std::int64_t>(m_.pre_lines[r]) - m_.post_lines[c]);
  }
  std::int64_t cost(std::size_t a, std::size_t b) const { return cost_[a * n_ + b]; }
  bool is_edge(std::size_t a, std::size_t b) const {
    return a < rows_.size() && b < cols_.size() && m_.at(rows_[a], cols_[b]) > 0;
  }
  bool tight(std::size_t a, std::size_t b) const { return cost(a, b) - u_[a] - v_[b] == 0; }

  // Kuhn-Munkres with potentials (O(n^3)), minimising cost.
  void hungarian() {
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    const std::size_t n = n_;
    std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
      p[0] = i;
      std::size_t j0 = 0;
      std::vector<std::int64_t> minv(n + 1, inf);
      std::vector<char> used(n + 1, 0);
      do {
        used[j0] = 1;
        const std::size_t i0 = p[j0];
        std::int64_t delta = inf;
        std::size_t j1 = 0;
        for (std::size_t j = 1; j <= n; ++j) {
          if (used[j]) continue;
          const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (std::size_t j = 0; j <= n; ++j) {
          if (used[j]) {
            u[p[j]] += delta;
            v[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (p[j0] != 0);
      do {
        const std::size_t j1 = way[j0];
        p[j0] = p[j1];
        j0 = j1;
      } while (j0 != 0);
    }
    u_.assign(u.begin() + 1, u.end());
    v_.assign(v.begin() + 1, v.end());
    match_row_.assign(n, 0);
    match_col_.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
      match_col_[j - 1] = p[j] - 1;
      match_row_[p[j] - 1] = j - 1;
    }
  }

  enum class RowState { free, fixed_edge, fixed_unmatched };

  bool allowed(std::size_t a, std::size_t b) const {
    if (col_frozen_[b] || !tight(a, b)) return false;
    switch (row_state_[a]) {
      case RowState::free: return true;
      case RowState::fixed_unmatched: return !is_edge(a, b);
      case RowState::fixed_edge: return false;
    }
    return false;
  }

  void refine_lexicographically() {
    row_state_.assign(n_, RowState::free);
    col_frozen_.assign(n_, 0);
    for (std::size_t a = 0; a < rows_.size(); ++a) {
      bool fixed = false;
      for (std::size_t b = 0; b < cols_.size() && !fixed; ++b) {
        if (col_frozen_[b] || !is_edge(a, b) || !tight(a, b)) continue;
        if (match_row_[a] == b || move_row(a, b)) {
          row_state_[a] = RowState::fixed_edge;
          col_frozen_[b] = 1;
          fixed = true;
        }
      }
      if (!fixed) row_state_[a] = RowState::fixed_unmatched;
    }
  }

  // Every optimal matching is a perfect matching of the tight subgraph and
  // vice versa, so row a can move to column b exactly when an alternating
  // tight path leads from b's owner back to a's current column.
  bool move_row(std::size_t a, std::size_t b) {
    const std::size_t start = match_col_[b];
    const std::size_t target = match_row_[a];
    std::vector<std::size_t> parent_row(n_, n_);  // row that discovered column c
    std::vector<char> seen_col(n_, 0), seen_row(n_, 0);
    std::deque<std::size_t> queue{start};
    seen_row[start] = 1;
    seen_row[a] = 1;
    seen_col[b] = 1;
    bool found = false;
    while (!queue.empty() && !found) {
      const std::size_t r = queue.front();
      queue.pop_front();
      for (std::size_t c = 0; c < n_; ++c) {
        if (seen_col[c] || !allowed(r, c)) continue;
        seen_col[c] = 1;
        parent_row[c] = r;
        if (c == target) {
          found = true;
          break;
        }
        const std::size_t owner = match_col_[c];
        if (seen_row[owner]) continue;
        seen_row[owner] = 1;
        queue.push_back(owner);
      }
    }
    if (!found) return false;
    // Shift along the path: the row that discovered c takes c.
    std::size_t c = target;
    while (true) {
      const std::size_t r = parent_row[c];
      const std::size_t old = match_row_[r];
      match_row_[r] = c;
      match_col_[c] = r;
      if (r == start) break;
      c = old;
    }
    match_row_[a] = b;
    match_col_[b] = a;
    return true;
  }

  const CandidateMatrix& m_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
  std::size_t n_;
  std::vector<std::int64_t> cost_;
  std::vector<std::int64_t> u_, v_;
  std::vector<std::size_t> match_row_, match_col_;
  std::vector<RowState> row_state_;
  std::vector<char> col_frozen_;
};

}  // namespace

Assignment solve_assignment(const CandidateMatrix& m) {
  const std::size_t r = m.rows();
  const std::size_t c = m.cols();
  DisjointSets sets(r + c);
  std::vector<char> has_edge(r + c, 0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      if (m.at(i, j) > 0) {
        sets.unite(i, r + j);
        has_edge[i] = has_edge[r + j] = 1;
      }
    }
  }
  std::vector<std::size_t> row_order(r), col_order(c);
  std::iota(row_order.begin(), row_order.end(), 0);
  std::iota(col_order.begin(), col_order.end(), 0);
  std::stable_sort(row_order.begin(), row_order.end(),
                   [&](auto a, auto b) { return m.pre_ids[a] < m.pre_ids[b]; });
  std::stable_sort(col_order.begin(), col_order.end(),
                   [&](auto a, auto b) { return m.post_ids[a] < m.post_ids[b]; });

  std::vector<std::vector<std::size_t>> comp_rows(r + c), comp_cols(r + c);
  for (auto i : row_order) {
    if (has_edge[i]) comp_rows[sets.find(i)].push_back(i);
  }
  for (auto j : col_order) {
    if (has_edge[r + j]) comp_cols[sets.find(r + j)].push_back(j);
  }

  Assignment out;
  for (std::size_t k = 0; k < r + c; ++k) {
    if (comp_rows[k].empty()) continue;
    ComponentSolver(m, std::move(comp_rows[k]), std::move(comp_cols[k])).solve(out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t assignment_weight(const CandidateMatrix& m, const Assignment& a) {
  std::int64_t total = 0;
  for (const auto& [i, j] : a) total += m.at(i, j);
  return total;
}

}  // namespace statictracker
