#include <algorithm>
#include <cmath>
#include <map>

#include "acquire/experiments.hpp"

namespace acquire {

namespace {

struct Line {
  double slope;
  double intercept;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace

FitResult fit_scaling(const std::vector<TrialRecord>& records, Regime regime,
                      std::optional<double> n) {
  std::vector<const TrialRecord*> used;
  for (const auto& t : records) {
    if (t.regime != regime || !t.error.empty() || !t.best_upper() || *t.best_upper() == 0) continue;
    if (t.r <= 1.0) continue;  // log(r lg r) needs r lg r > 0
    if (n && t.n != *n) continue;
    used.push_back(&t);
  }
  if (used.empty()) throw InsufficientData("no usable records in the requested regime");
  const double fixed_n = used.front()->n;
  for (const auto* t : used) {
    if (t->n != fixed_n) {
      throw InsufficientData("records mix several n values; pass the n to fit");
    }
  }
  std::map<double, std::size_t> per_r;
  for (const auto* t : used) ++per_r[t->r];
  if (per_r.size() < kMinDistinctR) {
    throw InsufficientData("need at least " + std::to_string(kMinDistinctR) +
                           " distinct r values, found " + std::to_string(per_r.size()));
  }
  for (const auto& [r, count] : per_r) {
    if (count < kMinSeedsPerR) {
      throw InsufficientData("r = " + std::to_string(r) + " has " + std::to_string(count) +
                             " trials; need " + std::to_string(kMinSeedsPerR));
    }
  }

  std::vector<double> x, y, normalized;
  FitResult out;
  out.n = fixed_n;
  out.band_low = INFINITY;
  out.band_high = -INFINITY;
  for (const auto* t : used) {
    const double rlgr = t->r * std::log2(t->r);
    const double residual = static_cast<double>(*t->best_upper());
    const double band = residual * rlgr * rlgr / fixed_n;
    x.push_back(std::log(rlgr));
    y.push_back(std::log(residual));
    normalized.push_back(std::log(band));
    out.band_low = std::min(out.band_low, band);
    out.band_high = std::max(out.band_high, band);
  }
  const Line fit = least_squares(x, y);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.drift = least_squares(x, normalized).slope;
  out.non_constant =
      std::abs(out.drift) > kMaxDrift || out.band_high / out.band_low > kMaxBandRatio;
  out.points = used.size();
  out.distinct_r = per_r.size();
  return out;
}

}  // namespace acquire
