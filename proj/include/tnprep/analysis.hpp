#pragma once

// Post-processing: Wootters-distance overlap lower bound, two-stage overlap
// extrapolation in bond dimension, Pareto-front extraction and report CSVs.

#include <string>
#include <vector>

#include "tnprep/common.hpp"

namespace tnprep {

// Lower bound on |<a|c>| given |<a|b>| = ab and |<b|c>| = bc, from the
// triangle inequality on the Wootters distance arccos|<.|.>|:
//   max(0, ab*bc - sqrt(1-ab^2)*sqrt(1-bc^2)).
// Errors if an input is outside [0, 1].
double wootters_bound(double ab, double bc);

struct OverlapRecord {
  int chi_small = 0;      // chi'
  int chi_large = 0;      // chi''  (> chi_small)
  double overlap_sq = 0;  // |<Phi(chi')|Phi(chi'')>|^2
};

struct OverlapDataset {
  std::vector<OverlapRecord> records;
};

struct StageOneFit {
  int chi_small = 0;
  double c = 0.0;  // fitted asymptote |<Phi(chi')|Phi(inf)>|^2
  double slope = 0.0, intercept = 0.0;  // log(F - c) vs (log chi'')^2
  double sse = 0.0;
  int n = 0;
};

struct FitDiagnostics {
  std::vector<StageOneFit> stage1;
  double stage2_slope = 0.0, stage2_intercept = 0.0;  // log(1-c) vs (log chi')^2
  double stage2_sse = 0.0;
};

// Two-stage extrapolation of |<Phi(chi_query)|Phi(inf)>|^2.
// Stage 1: per chi' in chi_small_set, fit log(F - c) linear in (log chi'')^2
// over the chi'' in chi_large_set, with the asymptote c found by golden-
// section search minimizing the least-squares residual (flat series within
// 1e-13 short-circuit to c = mean). Stage 2: fit log(1 - c) linear in
// (log chi')^2 and evaluate at chi_query. Requires >= 3 points per fit;
// throws FitError on non-positive or non-monotone fit arguments rather than
// clamping.
double extrapolate_overlap(const OverlapDataset& data,
                           const std::vector<int>& chi_small_set,
                           const std::vector<int>& chi_large_set,
                           int chi_query, FitDiagnostics* diag = nullptr);

// Overlap dataset CSV ("chi_small,chi_large,overlap_sq" with header).
std::string serialize_overlap_csv(const OverlapDataset& d);
OverlapDataset parse_overlap_csv(const std::string& text);

struct ParetoPoint {
  int t_count = 0;
  double infidelity = 0.0;
  std::string circuit_id;
  double eps = 0.0;
  int layers = 0;
};

// Non-dominated points (another point with <= t_count and < infidelity, or
// < t_count and <= infidelity, dominates), sorted by t_count ascending with
// (infidelity, circuit_id) tie-breaking. Idempotent.
std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points);

struct ReportRow {
  std::string circuit_id;
  int layers = 0;
  double eps = 0.0;
  std::string strategy;  // "RZ_ONLY" | "HYBRID"
  int rz_total = 0;
  int t_count = 0;
  double overlap_to_target = 0.0;
  double bound_to_exact = 0.0;
};

// "circuit_id,layers,eps,strategy,rz_total,t_count,overlap_to_target,
//  bound_to_exact" CSV, %.17g reals, deterministic row order as given.
std::string report_csv(const std::vector<ReportRow>& rows);
std::string pareto_csv(const std::vector<ParetoPoint>& points);

}  // namespace tnprep
