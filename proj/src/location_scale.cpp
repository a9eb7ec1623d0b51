#include "rpca/location_scale.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rpca {

namespace {

double median_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  auto mid_it = v.begin() + static_cast<std::ptrdiff_t>(mid);
  std::nth_element(v.begin(), mid_it, v.end());
  const double upper = *mid_it;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid_it);
  return 0.5 * (lower + upper);
}

// Number of pairs i < j of the sorted sample with s[j] - s[i] <= t.
std::uint64_t count_pairs_within(std::span<const double> s, double t) {
  std::uint64_t count = 0;
  std::size_t lo = 0;
  for (std::size_t j = 1; j < s.size(); ++j) {
    while (s[j] - s[lo] > t) ++lo;
    count += j - lo;
  }
  return count;
}

}  // namespace

double median(std::span<const double> z) {
  require(!z.empty(), ErrorCode::EmptyInput, "median of empty sample");
  std::vector<double> v(z.begin(), z.end());
  return median_inplace(v);
}

double mad(std::span<const double> z, double constant) {
  require(z.size() >= 2, ErrorCode::InsufficientData, "mad needs at least two values");
  std::vector<double> v(z.begin(), z.end());
  const double m = median_inplace(v);
  for (std::size_t i = 0; i < z.size(); ++i) v[i] = std::abs(z[i] - m);
  return constant * median_inplace(v);
}

std::size_t qn_order_index(std::size_t n, QnRank rank) {
  const std::size_t pairs = n * (n - 1) / 2;
  switch (rank) {
    case QnRank::FloorQuarter: return std::max<std::size_t>(1, pairs / 4);
    case QnRank::CeilQuarter: return std::max<std::size_t>(1, (pairs + 3) / 4);
    case QnRank::HalfSample: {
      const std::size_t h = n / 2 + 1;
      return std::clamp<std::size_t>(h * (h - 1) / 2, 1, pairs);
    }
  }
  return 1;
}

double kth_pairwise_distance(std::span<const double> z, std::size_t k) {
  const std::size_t n = z.size();
  require(n >= 2, ErrorCode::InsufficientData, "pairwise distances need at least two values");
  require(k >= 1 && k <= n * (n - 1) / 2, ErrorCode::InvalidInput, "pairwise rank out of range");
  std::vector<double> s(z.begin(), z.end());
  std::sort(s.begin(), s.end());

  // Non-negative doubles order like their bit patterns, so bisect on the bits for the
  // smallest t whose pair count reaches k. That t is always an attained distance.
  std::uint64_t lo = 0;
  std::uint64_t hi = std::bit_cast<std::uint64_t>(s.back() - s.front());
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (count_pairs_within(s, std::bit_cast<double>(mid)) >= k)
      hi = mid;
    else
      lo = mid + 1;
  }
  return std::bit_cast<double>(lo);
}

double qn(std::span<const double> z, const ScaleOptions& opts) {
  require(z.size() >= 2, ErrorCode::InsufficientData, "qn needs at least two values");
  return opts.qn_constant * kth_pairwise_distance(z, qn_order_index(z.size(), opts.qn_rank));
}

double variance_sq(std::span<const double> z) {
  require(z.size() >= 2, ErrorCode::InsufficientData, "variance needs at least two values");
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(z.size());
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(z.size() - 1);
}

double scale_sq(ScaleKind kind, std::span<const double> z, const ScaleOptions& opts) {
  switch (kind) {
    case ScaleKind::Variance: return variance_sq(z);
    case ScaleKind::Mad: {
      const double s = mad(z, opts.mad_constant);
      return s * s;
    }
    case ScaleKind::Qn: {
      const double s = qn(z, opts);
      return s * s;
    }
  }
  return 0.0;
}

L1MedianResult l1_median_iterate(const DataMatrix& x, int max_iter) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  L1MedianResult out;
  out.center.resize(p);
  for (std::size_t j = 0; j < p; ++j) out.center[j] = median(x.col(j));

  Vector& mu = out.center;
  Vector next(p);
  Vector diff(p);
  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    double weight_sum = 0.0;
    std::fill(next.begin(), next.end(), 0.0);
    bool on_anchor = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i);
      for (std::size_t j = 0; j < p; ++j) diff[j] = xi[j] - mu[j];
      const double d = norm2(diff);
      if (d == 0.0) {
        on_anchor = true;
        break;
      }
      const double w = 1.0 / d;
      weight_sum += w;
      for (std::size_t j = 0; j < p; ++j) next[j] += w * xi[j];
    }
    if (on_anchor) {
      // The objective is not differentiable at a sample point; nudge off it.
      mu[0] += 1e-9;
      continue;
    }
    for (std::size_t j = 0; j < p; ++j) {
      next[j] /= weight_sum;
      diff[j] = next[j] - mu[j];
    }
    const double step = norm2(diff);
    mu = next;
    if (step <= 1e-8 * (1.0 + norm2(mu))) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

Vector l1_median(const DataMatrix& x) {
  auto result = l1_median_iterate(x);
  if (!result.converged) throw L1MedianNoConvergence(std::move(result.center));
  return std::move(result.center);
}

}  // namespace rpca
