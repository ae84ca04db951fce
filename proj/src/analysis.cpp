#include "tnprep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace tnprep {

namespace {

struct LinFit {
  double slope = 0.0, intercept = 0.0, sse = 0.0;
};

LinFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (sxx <= 0.0) throw FitError("degenerate regressor in least squares");
  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (f.intercept + f.slope * xs[k]);
    f.sse += r * r;
  }
  return f;
}

double fit_sse(const std::vector<double>& xs, const std::vector<double>& fs,
               double c) {
  std::vector<double> zs(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) zs[k] = std::log(fs[k] - c);
  return ols(xs, zs).sse;
}

// Minimum of the stage-1 fit residual over c in [0, fmin). The residual is
// not unimodal in c (a nearly-constant log series near c = 0 also fits a
// line), so a coarse scan brackets the global minimum first, parametrized by
// the gap g = fmin - c on a log grid to resolve asymptotes arbitrarily close
// to the smallest overlap; golden-section then refines inside the bracket.
double solve_asymptote(const std::vector<double>& xs,
                       const std::vector<double>& fs, double fmin) {
  const int kGrid = 1600;
  const double kDecades = 16.0;
  const auto c_of = [&](int k) {
    const double g = fmin * std::pow(10.0, -kDecades * k / kGrid);
    return std::max(0.0, fmin - g);
  };
  int best_k = 0;
  double best = fit_sse(xs, fs, c_of(0));
  for (int k = 1; k <= kGrid; ++k) {
    const double s = fit_sse(xs, fs, c_of(k));
    if (s < best) {
      best = s;
      best_k = k;
    }
  }
  double a = c_of(std::max(0, best_k - 2));
  double b = c_of(std::min(kGrid, best_k + 2));
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = fit_sse(xs, fs, x1), f2 = fit_sse(xs, fs, x2);
  for (int it = 0; it < 300 && b - a > 1e-16; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = fit_sse(xs, fs, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = fit_sse(xs, fs, x2);
    }
  }
  return 0.5 * (a + b);
}

void check_distinct(const std::vector<int>& chis, const char* what) {
  std::set<int> seen;
  for (const int chi : chis) {
    if (chi < 1) throw ValidationError(std::string(what) + ": chi must be >= 1");
    if (!seen.insert(chi).second)
      throw ValidationError(std::string(what) + ": entries must be distinct");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

double wootters_bound(double ab, double bc) {
  if (!(ab >= 0.0 && ab <= 1.0 && bc >= 0.0 && bc <= 1.0))
    throw ValidationError("wootters_bound: overlaps must lie in [0, 1]");
  const double v =
      ab * bc - std::sqrt(1.0 - ab * ab) * std::sqrt(1.0 - bc * bc);
  return std::max(0.0, v);
}

double extrapolate_overlap(const OverlapDataset& data,
                           const std::vector<int>& chi_small_set,
                           const std::vector<int>& chi_large_set,
                           int chi_query, FitDiagnostics* diag) {
  if (chi_query < 1)
    throw ValidationError("extrapolate_overlap: chi_query must be >= 1");
  check_distinct(chi_small_set, "chi_small_set");
  check_distinct(chi_large_set, "chi_large_set");
  if (chi_small_set.size() < 3)
    throw FitError("extrapolate_overlap: need >= 3 chi_small values");
  if (chi_large_set.size() < 3)
    throw FitError("extrapolate_overlap: need >= 3 chi_large values");
  for (const auto& rec : data.records) {
    if (rec.chi_small < 1 || rec.chi_large <= rec.chi_small)
      throw ValidationError("extrapolate_overlap: need chi_small < chi_large");
    if (!(rec.overlap_sq >= 0.0 && rec.overlap_sq <= 1.0))
      throw ValidationError("extrapolate_overlap: overlap_sq outside [0, 1]");
  }

  std::vector<int> small_sorted = chi_small_set;
  std::sort(small_sorted.begin(), small_sorted.end());

  std::vector<StageOneFit> fits;
  for (const int chi : small_sorted) {
    std::vector<std::pair<int, double>> series;
    for (const auto& rec : data.records)
      if (rec.chi_small == chi &&
          std::find(chi_large_set.begin(), chi_large_set.end(),
                    rec.chi_large) != chi_large_set.end())
        series.emplace_back(rec.chi_large, rec.overlap_sq);
    std::sort(series.begin(), series.end());
    std::set<int> distinct;
    for (const auto& [cl, f] : series) distinct.insert(cl);
    if (distinct.size() < 3)
      throw FitError("extrapolate_overlap: chi_small " + std::to_string(chi) +
                     " has fewer than 3 chi_large points");

    StageOneFit fit;
    fit.chi_small = chi;
    fit.n = static_cast<int>(series.size());
    double fmin = 2.0, fmax = -1.0;
    for (const auto& [cl, f] : series) {
      fmin = std::min(fmin, f);
      fmax = std::max(fmax, f);
    }
    if (fmax - fmin < 1e-13) {
      // converged series: the asymptote is the constant itself
      double sum = 0.0;
      for (const auto& [cl, f] : series) sum += f;
      fit.c = sum / static_cast<double>(series.size());
      fits.push_back(fit);
      continue;
    }
    for (std::size_t k = 1; k < series.size(); ++k)
      if (series[k].second > series[k - 1].second + 1e-13)
        throw FitError("extrapolate_overlap: overlaps not non-increasing in "
                       "chi_large at chi_small " +
                       std::to_string(chi));
    if (fmin <= 1e-10)
      throw FitError("extrapolate_overlap: non-positive overlaps at "
                     "chi_small " +
                     std::to_string(chi));

    std::vector<double> xs, fs;
    for (const auto& [cl, f] : series) {
      const double lx = std::log(static_cast<double>(cl));
      xs.push_back(lx * lx);
      fs.push_back(f);
    }
    fit.c = solve_asymptote(xs, fs, fmin);
    std::vector<double> zs(fs.size());
    for (std::size_t k = 0; k < fs.size(); ++k)
      zs[k] = std::log(fs[k] - fit.c);
    const LinFit lin = ols(xs, zs);
    fit.slope = lin.slope;
    fit.intercept = lin.intercept;
    fit.sse = lin.sse;
    fits.push_back(fit);
  }

  if (diag) {
    diag->stage1 = fits;
    diag->stage2_slope = 0.0;
    diag->stage2_intercept = 0.0;
    diag->stage2_sse = 0.0;
  }

  double cmin = 2.0, cmax = -1.0;
  for (const auto& f : fits) {
    cmin = std::min(cmin, f.c);
    cmax = std::max(cmax, f.c);
  }
  if (cmax - cmin < 1e-13) {
    double sum = 0.0;
    for (const auto& f : fits) sum += f.c;
    return sum / static_cast<double>(fits.size());
  }

  for (std::size_t k = 0; k < fits.size(); ++k) {
    if (fits[k].c >= 1.0)
      throw FitError("extrapolate_overlap: asymptote at 1 in a non-flat "
                     "series");
    if (k > 0 && fits[k].c < fits[k - 1].c - 1e-13)
      throw FitError(
          "extrapolate_overlap: asymptotes not non-decreasing in chi_small");
  }

  std::vector<double> xs, ys;
  for (const auto& f : fits) {
    const double lx = std::log(static_cast<double>(f.chi_small));
    xs.push_back(lx * lx);
    ys.push_back(std::log(1.0 - f.c));
  }
  const LinFit lin = ols(xs, ys);
  if (diag) {
    diag->stage2_slope = lin.slope;
    diag->stage2_intercept = lin.intercept;
    diag->stage2_sse = lin.sse;
  }
  const double lq = std::log(static_cast<double>(chi_query));
  return 1.0 - std::exp(lin.intercept + lin.slope * lq * lq);
}

std::string serialize_overlap_csv(const OverlapDataset& d) {
  std::string s = "chi_small,chi_large,overlap_sq\n";
  for (const auto& rec : d.records)
    s += std::to_string(rec.chi_small) + "," + std::to_string(rec.chi_large) +
         "," + fmt_g17(rec.overlap_sq) + "\n";
  return s;
}

OverlapDataset parse_overlap_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"chi_small", "chi_large", "overlap_sq"})
    throw ParseError("overlap csv: bad header");
  OverlapDataset d;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) throw ParseError("overlap csv: need 3 fields");
    OverlapRecord rec;
    try {
      std::size_t p0 = 0, p1 = 0, p2 = 0;
      rec.chi_small = std::stoi(fields[0], &p0);
      rec.chi_large = std::stoi(fields[1], &p1);
      rec.overlap_sq = std::stod(fields[2], &p2);
      if (p0 != fields[0].size() || p1 != fields[1].size() ||
          p2 != fields[2].size())
        throw ParseError("overlap csv: trailing junk in field");
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("overlap csv: malformed row '" + line + "'");
    }
    if (rec.chi_small < 1 || rec.chi_large <= rec.chi_small)
      throw ParseError("overlap csv: need 1 <= chi_small < chi_large");
    if (!(rec.overlap_sq >= 0.0 && rec.overlap_sq <= 1.0))
      throw ParseError("overlap csv: overlap_sq outside [0, 1]");
    d.records.push_back(rec);
  }
  return d;
}

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points) {
  std::vector<ParetoPoint> out;
  for (const auto& p : points) {
    bool dominated = false;
    for (const auto& q : points) {
      if ((q.t_count <= p.t_count && q.infidelity < p.infidelity) ||
          (q.t_count < p.t_count && q.infidelity <= p.infidelity)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const ParetoPoint& a,
                                       const ParetoPoint& b) {
    if (a.t_count != b.t_count) return a.t_count < b.t_count;
    if (a.infidelity != b.infidelity) return a.infidelity < b.infidelity;
    return a.circuit_id < b.circuit_id;
  });
  return out;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string s =
      "circuit_id,layers,eps,strategy,rz_total,t_count,overlap_to_target,"
      "bound_to_exact\n";
  for (const auto& r : rows)
    s += r.circuit_id + "," + std::to_string(r.layers) + "," + fmt_g17(r.eps) +
         "," + r.strategy + "," + std::to_string(r.rz_total) + "," +
         std::to_string(r.t_count) + "," + fmt_g17(r.overlap_to_target) + "," +
         fmt_g17(r.bound_to_exact) + "\n";
  return s;
}

std::string pareto_csv(const std::vector<ParetoPoint>& points) {
  std::string s = "t_count,infidelity,circuit_id,eps,layers\n";
  for (const auto& p : points)
    s += std::to_string(p.t_count) + "," + fmt_g17(p.infidelity) + "," +
         p.circuit_id + "," + fmt_g17(p.eps) + "," + std::to_string(p.layers) +
         "\n";
  return s;
}

}  // namespace tnprep
