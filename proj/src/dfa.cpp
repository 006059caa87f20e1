#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "groove/dfa.h"
#include "groove/error.h"

namespace groove {
namespace {

// Orthonormal polynomial basis (degree 0..order) sampled on 0..s-1.
std::vector<std::vector<double>> polynomial_basis(int s, int order) {
  std::vector<std::vector<double>> basis;
  const double centre = 0.5 * (s - 1);
  const double half = 0.5 * s;
  for (int p = 0; p <= order; ++p) {
    std::vector<double> v(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) v[j] = std::pow((j - centre) / half, p);
    // Two rounds of modified Gram-Schmidt.
    for (int round = 0; round < 2; ++round) {
      for (const auto& q : basis) {
        double dot = std::inner_product(v.begin(), v.end(), q.begin(), 0.0);
        for (int j = 0; j < s; ++j) v[j] -= dot * q[j];
      }
    }
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

double window_variance(const double* y, int s, const std::vector<std::vector<double>>& basis,
                       std::vector<double>& residual) {
  residual.assign(y, y + s);
  for (const auto& q : basis) {
    double c = 0.0;
    for (int j = 0; j < s; ++j) c += q[j] * y[j];
    for (int j = 0; j < s; ++j) residual[j] -= c * q[j];
  }
  double ss = 0.0;
  for (int j = 0; j < s; ++j) ss += residual[j] * residual[j];
  return ss / s;
}

AlphaFit least_squares(const std::vector<double>& lx, const std::vector<double>& ly) {
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  AlphaFit fit;
  fit.alpha = sxy / sxx;
  fit.intercept = my - fit.alpha * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points = lx.size();
  return fit;
}

}  // namespace

std::vector<int> dfa_scales(std::size_t n, int s_min, int s_max, double per_decade) {
  if (s_max <= 0) s_max = static_cast<int>(n / 4);
  if (s_min < 1 || !(per_decade > 0)) throw ParameterError("invalid DFA scale grid");
  std::vector<int> scales;
  for (int k = 0;; ++k) {
    double s = s_min * std::pow(10.0, k / per_decade);
    if (s > s_max + 0.5) break;
    int si = static_cast<int>(std::lround(s));
    if (si > s_max) break;
    if (scales.empty() || si != scales.back()) scales.push_back(si);
  }
  return scales;
}

FluctuationResult dfa_fluctuation(std::span<const double> series, std::span<const int> scales,
                                  const DfaOptions& options) {
  if (options.detrend_order < 0) throw ParameterError("detrend order must be non-negative");
  if (scales.empty()) throw ParameterError("no DFA scales given");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < options.detrend_order + 2) {
      throw ParameterError("scale " + std::to_string(scales[i]) + " is too small for detrend order " +
                           std::to_string(options.detrend_order));
    }
    if (i > 0 && scales[i] <= scales[i - 1]) throw ParameterError("DFA scales must be strictly increasing");
  }
  const std::size_t n = series.size();
  const int s_top = scales.back();
  if (n < 4 * static_cast<std::size_t>(s_top)) {
    throw LengthError("DFA needs at least " + std::to_string(4 * s_top) + " samples for scale " +
                      std::to_string(s_top) + ", got " + std::to_string(n));
  }

  FluctuationResult result;
  result.scales.assign(scales.begin(), scales.end());
  result.detrend_order = options.detrend_order;
  result.series_length = n;

  if (std::all_of(series.begin(), series.end(), [&](double v) { return v == series.front(); })) {
    result.degenerate = true;
    result.F.assign(scales.size(), 0.0);
    return result;
  }

  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> profile(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) profile[i + 1] = profile[i] + (series[i] - mean);
  const std::size_t length = profile.size();

  std::vector<double> residual;
  result.F.reserve(scales.size());
  for (int s : scales) {
    const auto basis = polynomial_basis(s, options.detrend_order);
    const std::size_t windows = length / static_cast<std::size_t>(s);
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t w = 0; w < windows; ++w) {
      total += window_variance(profile.data() + w * s, s, basis, residual);
      ++count;
    }
    if (options.tiling == WindowTiling::kBothEnds) {
      for (std::size_t w = 0; w < windows; ++w) {
        total += window_variance(profile.data() + length - (w + 1) * s, s, basis, residual);
        ++count;
      }
    }
    result.F.push_back(std::sqrt(total / static_cast<double>(count)));
  }
  return result;
}

AlphaFit fit_alpha(const FluctuationResult& result, int s_min, int s_max) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < result.scales.size(); ++i) {
    int s = result.scales[i];
    if (s < s_min || s > s_max) continue;
    if (!(result.F[i] > 0)) {
      throw FitError("non-positive fluctuation at scale " + std::to_string(s));
    }
    lx.push_back(std::log(static_cast<double>(s)));
    ly.push_back(std::log(result.F[i]));
  }
  if (lx.size() < 3) {
    throw FitError("need at least 3 scales in [" + std::to_string(s_min) + ", " + std::to_string(s_max) +
                   "], have " + std::to_string(lx.size()));
  }
  AlphaFit fit = least_squares(lx, ly);
  fit.s_min = s_min;
  fit.s_max = s_max;
  return fit;
}

std::vector<LocalAlpha> local_alpha(const FluctuationResult& result, int half_window) {
  if (half_window < 1) throw ParameterError("half_window must be at least 1");
  const std::size_t width = 2 * static_cast<std::size_t>(half_window) + 1;
  if (result.scales.size() < width) {
    throw LengthError("local exponent needs at least " + std::to_string(width) + " scales");
  }
  std::vector<LocalAlpha> out;
  for (std::size_t c = half_window; c + half_window < result.scales.size(); ++c) {
    std::vector<double> lx, ly;
    for (std::size_t i = c - half_window; i <= c + half_window; ++i) {
      if (!(result.F[i] > 0)) throw FitError("non-positive fluctuation at scale " + std::to_string(result.scales[i]));
      lx.push_back(std::log(static_cast<double>(result.scales[i])));
      ly.push_back(std::log(result.F[i]));
    }
    out.push_back({result.scales[c], least_squares(lx, ly).alpha});
  }
  return out;
}

std::optional<int> crossover_scale(std::span<const LocalAlpha> local, double level) {
  for (const auto& la : local) {
    if (la.alpha > level) return la.s;
  }
  return std::nullopt;
}

DfaSummary analyze_dfa(std::span<const double> series, const DfaRanges& ranges, const DfaOptions& options) {
  DfaSummary summary;
  const auto scales = dfa_scales(series.size(), std::max(4, options.detrend_order + 2));
  if (scales.empty()) throw LengthError("series too short for DFA");
  summary.result = dfa_fluctuation(series, scales, options);
  if (summary.result.degenerate) return summary;

  auto try_fit = [&](int lo, int hi) -> std::optional<AlphaFit> {
    try {
      return fit_alpha(summary.result, lo, hi);
    } catch (const FitError&) {
      return std::nullopt;
    }
  };
  summary.alpha1 = try_fit(ranges.short_min, ranges.short_max);
  summary.alpha2 = try_fit(ranges.long_min, ranges.long_max);
  summary.global = try_fit(scales.front(), scales.back());
  if (summary.result.scales.size() >= 5) summary.alpha_local = local_alpha(summary.result, 2);
  return summary;
}

}  // namespace groove
