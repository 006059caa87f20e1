#pragma once

#include <optional>
#include <span>
#include <vector>

namespace groove {

enum class WindowTiling {
  /// Non-overlapping windows laid from the start and again from the end;
  /// window variances of both passes are averaged, so no sample is dropped.
  kBothEnds,
  /// Windows from the start only; the tail remainder is ignored.
  kForward,
};

struct DfaOptions {
  int detrend_order = 1;
  WindowTiling tiling = WindowTiling::kBothEnds;
};

struct LocalAlpha {
  int s = 0;
  double alpha = 0.0;
};

struct FluctuationResult {
  std::vector<int> scales;
  std::vector<double> F;
  int detrend_order = 1;
  std::size_t series_length = 0;
  bool degenerate = false;  // constant input; F is identically zero
};

struct AlphaFit {
  double alpha = 0.0;
  double intercept = 0.0;  // of log F vs log s
  double r_squared = 0.0;
  int s_min = 0;
  int s_max = 0;
  std::size_t points = 0;
};

/// Integer scales spaced geometrically (`per_decade` per decade) in
/// [s_min, s_max], duplicates removed. s_max <= 0 means n / 4.
std::vector<int> dfa_scales(std::size_t n, int s_min = 4, int s_max = 0, double per_decade = 16.0);

/// Fluctuation function F(s). The series is mean-centered and integrated into
/// the profile Y(0) = 0, Y(k) = sum_{j<=k}(x_j - mean), k = 1..N; each window of
/// the profile is detrended by a least-squares polynomial of `detrend_order`
/// and F(s) is the root of the mean residual variance over windows.
/// Throws LengthError when N < 4 * max(scales) and ParameterError for scales
/// below detrend_order + 2.
FluctuationResult dfa_fluctuation(std::span<const double> series, std::span<const int> scales,
                                  const DfaOptions& options = {});

/// Unweighted least-squares slope of log F against log s over [s_min, s_max].
/// Throws FitError with fewer than 3 scales in range or non-positive F there.
AlphaFit fit_alpha(const FluctuationResult& result, int s_min, int s_max);

/// Sliding log-log slope over 2 * half_window + 1 neighbouring scales,
/// reported at each interior scale. Throws LengthError for too few scales.
std::vector<LocalAlpha> local_alpha(const FluctuationResult& result, int half_window = 2);

/// First scale whose local exponent exceeds `level`.
std::optional<int> crossover_scale(std::span<const LocalAlpha> local, double level);

inline constexpr int kShortScaleMin = 4;
inline constexpr int kShortScaleMax = 16;
inline constexpr int kLongScaleMin = 16;
inline constexpr int kLongScaleMax = 100;

struct DfaSummary {
  FluctuationResult result;
  std::optional<AlphaFit> alpha1;  // short scales
  std::optional<AlphaFit> alpha2;  // long scales
  std::optional<AlphaFit> global;  // all scales
  std::vector<LocalAlpha> alpha_local;
};

struct DfaRanges {
  int short_min = kShortScaleMin, short_max = kShortScaleMax;
  int long_min = kLongScaleMin, long_max = kLongScaleMax;
};

/// Default scale grid, both fits and local exponents. Fits that lack enough
/// scales are left empty rather than thrown.
DfaSummary analyze_dfa(std::span<const double> series, const DfaRanges& ranges = {},
                       const DfaOptions& options = {});

}  // namespace groove
