#pragma once

#include <stdexcept>
#include <string>

namespace treecut {

enum class errc {
  // partition validation
  empty_block,
  coverage_gap,
  block_overlap,
  unknown_label,
  // hierarchy validation
  empty_cluster,
  missing_ground_set,
  missing_singleton,
  overlapping_clusters,
  ground_set_too_small,
  // argument errors shared across modules
  empty_argument,
  ground_set_mismatch,
  leaf_set_mismatch,
  // trees
  not_inner_vertex,
  too_few_leaves,
  unary_inner_vertex,
  invalid_tree,
  // parsing
  syntax_error,
  duplicate_leaf,
  empty_tree,
  unknown_vertex,
  unknown_color,
  // compatibility and refinement
  foreign_edge,
  not_compatible,
  not_r_compatible,
  overlap_violation,
  // split systems
  not_tree_like,
  missing_singleton_splits,
  empty_subset,
  // partition systems and Fitch maps
  empty_system,
  budget_exceeded,
  not_monochromatic_fitch,
  too_many_colors,
  // oracle guards
  too_large,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message);
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Refusal of an enumeration whose candidate count exceeds the budget.
// Carries the exact count as a decimal string (it may exceed 64 bits).
class BudgetError : public Error {
 public:
  BudgetError(std::string candidate_count, unsigned long long budget);
  const std::string& candidate_count() const noexcept { return count_; }

 private:
  std::string count_;
};

// A monochromatic map that is not a symmetrized Fitch map; carries the color.
class FitchColorError : public Error {
 public:
  explicit FitchColorError(unsigned color);
  unsigned color() const noexcept { return color_; }

 private:
  unsigned color_;
};

}  // namespace treecut
