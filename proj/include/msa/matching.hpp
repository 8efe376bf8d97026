#pragma once

#include "msa/laplacian.hpp"

namespace msa {

struct Correspondence {
  int source = -1;
  int target = -1;
  double distance = 0.0;
};

struct MatchResult {
  std::vector<Correspondence> correspondences;  // pairs first, then unpaired ascending
  std::vector<int> unmapped_source;
  std::vector<int> unmapped_target;
  int n_paired = 0;  // leading correspondences that are merged pairs
};

// Nearest-target matching in embedding space. Paired rows are self-matched at
// distance 0. Exact distance ties go to the lower target index. A row whose
// nearest cross-set distance exceeds unmapped_factor times the median nearest
// cross-set distance of its side is unmapped; medians below 1e-8 * max|E|
// disable the rule (all distances are numerically zero there, and ratios of
// rounding noise would unmap correct matches). compatible, when given, is an
// ns x nt mask restricting candidate targets per source; a row with no
// candidates is unmapped outright.
MatchResult match_correspondences(const Eigen::MatrixXd& E, const JointLaplacian& jl,
                                  double unmapped_factor,
                                  const std::vector<std::vector<char>>* compatible = nullptr);

// Fraction of source objects whose assignment disagrees with ground truth.
// truth[i] is source i's target partner, or absent when i has none; paired
// sources always count correct; an unmapped source is correct only when
// partnerless. Denominator is the full source count.
double mapping_error(const MatchResult& match, int n_source,
                     const std::vector<std::optional<int>>& truth);

}  // namespace msa
