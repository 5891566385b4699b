#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "statictracker/warning.hpp"

namespace statictracker {

// Pre-by-post candidate weights. weights[i][j] counts the strategies that
// accepted (pre i, post j); zero means no edge. Lines feed the distance
// tie-break, ids the final lexicographic one.
struct CandidateMatrix {
  std::vector<StableId> pre_ids;
  std::vector<StableId> post_ids;
  std::vector<int> pre_lines;
  std::vector<int> post_lines;
  std::vector<std::vector<int>> weights;

  std::size_t rows() const noexcept { return pre_ids.size(); }
  std::size_t cols() const noexcept { return post_ids.size(); }
  int at(std::size_t i, std::size_t j) const { return weights[i][j]; }
};

using Assignment = std::vector<std::pair<std::size_t, std::size_t>>;

// Maximum-weight matching over positive cells. Among maximum-weight
// matchings the one with least total |pre line - post line| wins; remaining
// ties go to the matching that, taking pre ids in order, gives each the
// smallest available post id (being unmatched ranks after every post id).
// Solved per connected component. Pairs are returned sorted by row.
Assignment solve_assignment(const CandidateMatrix& m);

std::int64_t assignment_weight(const CandidateMatrix& m, const Assignment& a);

}  // namespace statictracker
