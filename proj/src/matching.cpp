#include "msa/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace msa {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MatchResult match_correspondences(const Eigen::MatrixXd& E, const JointLaplacian& jl,
                                  double unmapped_factor,
                                  const std::vector<std::vector<char>>* compatible) {
  if (!E.allFinite()) throw MsaError("match_correspondences", "embedding has non-finite entries");
  const int ns = jl.p + jl.qx;
  const int nt = jl.p + jl.qy;
  std::set<int> paired_src, paired_tgt;
  for (int r = 0; r < jl.p; ++r) {
    paired_src.insert(jl.origin[static_cast<size_t>(r)].source);
    paired_tgt.insert(jl.origin[static_cast<size_t>(r)].target);
  }
  const double floor = E.size() > 0 ? 1e-8 * E.cwiseAbs().maxCoeff() : 0.0;

  struct Nearest {
    int index = -1;  // -1: no candidate
    double dist = std::numeric_limits<double>::infinity();
  };
  auto nearest_target = [&](int i) {
    Nearest best;
    const auto row = E.row(jl.row_of_source[static_cast<size_t>(i)]);
    for (int j = 0; j < nt; ++j) {
      if (compatible && !(*compatible)[static_cast<size_t>(i)][static_cast<size_t>(j)]) continue;
      const double d = (row - E.row(jl.row_of_target[static_cast<size_t>(j)])).norm();
      if (d < best.dist) best = {j, d};
    }
    return best;
  };
  auto nearest_source = [&](int j) {
    Nearest best;
    const auto row = E.row(jl.row_of_target[static_cast<size_t>(j)]);
    for (int i = 0; i < ns; ++i) {
      if (compatible && !(*compatible)[static_cast<size_t>(i)][static_cast<size_t>(j)]) continue;
      const double d = (row - E.row(jl.row_of_source[static_cast<size_t>(i)])).norm();
      if (d < best.dist) best = {i, d};
    }
    return best;
  };

  MatchResult out;
  out.n_paired = jl.p;
  for (int r = 0; r < jl.p; ++r)
    out.correspondences.push_back({jl.origin[static_cast<size_t>(r)].source,
                                   jl.origin[static_cast<size_t>(r)].target, 0.0});

  std::vector<std::pair<int, Nearest>> src_near, tgt_near;
  std::vector<double> src_dists, tgt_dists;
  for (int i = 0; i < ns; ++i) {
    if (paired_src.count(i)) continue;
    const Nearest nb = nearest_target(i);
    src_near.emplace_back(i, nb);
    if (nb.index >= 0) src_dists.push_back(nb.dist);
  }
  for (int j = 0; j < nt; ++j) {
    if (paired_tgt.count(j)) continue;
    const Nearest nb = nearest_source(j);
    tgt_near.emplace_back(j, nb);
    if (nb.index >= 0) tgt_dists.push_back(nb.dist);
  }
  const double src_med = median(src_dists);
  const double tgt_med = median(tgt_dists);

  for (const auto& [i, nb] : src_near) {
    const bool unmapped =
        nb.index < 0 || (src_med > floor && nb.dist > unmapped_factor * src_med);
    if (unmapped)
      out.unmapped_source.push_back(i);
    else
      out.correspondences.push_back({i, nb.index, nb.dist});
  }
  for (const auto& [j, nb] : tgt_near) {
    const bool unmapped =
        nb.index < 0 || (tgt_med > floor && nb.dist > unmapped_factor * tgt_med);
    if (unmapped) out.unmapped_target.push_back(j);
  }
  return out;
}

double mapping_error(const MatchResult& match, int n_source,
                     const std::vector<std::optional<int>>& truth) {
  if (static_cast<int>(truth.size()) != n_source)
    throw MsaError("mapping_error", "ground truth does not cover the source view");
  if (n_source == 0) return 0.0;
  std::vector<char> assigned(static_cast<size_t>(n_source), 0);
  int wrong = 0;
  for (size_t idx = 0; idx < match.correspondences.size(); ++idx) {
    const Correspondence& c = match.correspondences[idx];
    assigned[static_cast<size_t>(c.source)] = 1;
    if (static_cast<int>(idx) < match.n_paired) continue;  // merged rows are correct by construction
    const auto& t = truth[static_cast<size_t>(c.source)];
    if (!(t && *t == c.target)) ++wrong;
  }
  for (int i : match.unmapped_source) {
    assigned[static_cast<size_t>(i)] = 1;
    if (truth[static_cast<size_t>(i)]) ++wrong;
  }
  for (char a : assigned)
    if (!a) ++wrong;  // unassigned sources cannot be correct
  return static_cast<double>(wrong) / static_cast<double>(n_source);
}

}  // namespace msa
