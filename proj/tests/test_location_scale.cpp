#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rpca/error.hpp"
#include "rpca/location_scale.hpp"
#include "support.hpp"

using namespace rpca;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an rpca::Error");
  return ErrorCode::InvalidInput;
}

// Every pairwise distance, sorted, then the k-th (one-based).
double brute_force_kth(const Vector& z, std::size_t k) {
  Vector d;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) d.push_back(std::abs(z[i] - z[j]));
  std::sort(d.begin(), d.end());
  return d[k - 1];
}

double l1_objective(const DataMatrix& x, double a, double b) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += std::hypot(x(i, 0) - a, x(i, 1) - b);
  return s;
}

}  // namespace

TEST_CASE("median examples") {
  CHECK(median(Vector{3}) == 3.0);
  CHECK(median(Vector{1, 2, 3, 4}) == 2.5);
  CHECK(median(Vector{5, 1, 3}) == 3.0);
  CHECK(code_of([] { median(Vector{}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("mad examples") {
  CHECK(mad(Vector{4, 4, 4}) == 0.0);
  CHECK(mad(Vector{1, 2, 3, 4, 5}) == 1.48);
  CHECK(code_of([] { mad(Vector{1}); }) == ErrorCode::InsufficientData);
  CHECK(code_of([] { mad(Vector{}); }) == ErrorCode::InsufficientData);
}

TEST_CASE("mad is close to 1 on a large standard normal sample") {
  NormalStream rng(1);
  Vector z(10000);
  for (double& v : z) v = rng.next();
  CHECK(std::abs(mad(z) - 1.0) < 0.05);
}

TEST_CASE("qn examples") {
  CHECK(qn(Vector{2, 2, 2, 2}) == 0.0);
  CHECK(qn(Vector{0, 1}) == 2.22);
  CHECK(qn(Vector{1, 2, 4, 8}) == 2.22 * brute_force_kth({1, 2, 4, 8}, 1));
  CHECK(qn(Vector{1, 2, 4, 8}) == 2.22);
  CHECK(code_of([] { qn(Vector{1}); }) == ErrorCode::InsufficientData);
}

TEST_CASE("qn order index follows each convention") {
  CHECK(qn_order_index(2) == 1);
  CHECK(qn_order_index(4) == 1);   // C(4,2)=6, floor(6/4)=1
  CHECK(qn_order_index(5) == 2);   // floor(10/4)
  CHECK(qn_order_index(10) == 11); // floor(45/4)
  CHECK(qn_order_index(5, QnRank::CeilQuarter) == 3);
  CHECK(qn_order_index(10, QnRank::HalfSample) == 15);  // h = 6, C(6,2)
}

TEST_CASE("kth_pairwise_distance equals full enumeration") {
  NormalStream rng(77);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_uniform() * 29);
    Vector z(n);
    // Every third sample is coarsely rounded so ties and zero distances occur.
    for (double& v : z) v = (t % 3 == 0) ? std::round(rng.next() * 2.0) : rng.next() * 10.0;
    const std::size_t pairs = n * (n - 1) / 2;
    const std::size_t k = qn_order_index(n);
    REQUIRE(kth_pairwise_distance(z, k) == brute_force_kth(z, k));
    const std::size_t other = 1 + static_cast<std::size_t>(rng.next_uniform() * pairs);
    REQUIRE(kth_pairwise_distance(z, other) == brute_force_kth(z, other));
  }
}

TEST_CASE("variance examples") {
  CHECK(variance_sq(Vector{7, 7, 7}) == 0.0);
  CHECK(variance_sq(Vector{0, 2}) == 2.0);
  CHECK(variance_sq(Vector{1, 2, 3, 4, 5}) == 2.5);
  CHECK(code_of([] { variance_sq(Vector{1}); }) == ErrorCode::InsufficientData);
  CHECK(scale_sq(ScaleKind::Mad, Vector{1, 2, 3, 4, 5}) == doctest::Approx(1.48 * 1.48));
}

TEST_CASE("mad and qn are location invariant and scale equivariant") {
  NormalStream rng(4);
  for (int t = 0; t < 50; ++t) {
    Vector z(25);
    for (double& v : z) v = rng.next();
    const double c = 3.0 * rng.next();
    Vector shifted = z, scaled = z;
    for (double& v : shifted) v += c;
    for (double& v : scaled) v *= c;
    CHECK(mad(shifted) == doctest::Approx(mad(z)).epsilon(1e-12));
    CHECK(qn(shifted) == doctest::Approx(qn(z)).epsilon(1e-12));
    CHECK(mad(scaled) == doctest::Approx(std::abs(c) * mad(z)).epsilon(1e-12));
    CHECK(qn(scaled) == doctest::Approx(std::abs(c) * qn(z)).epsilon(1e-12));
  }
}

TEST_CASE("mad resists 20% gross outliers where the variance does not") {
  NormalStream rng(6);
  Vector z(100);
  for (double& v : z) v = rng.next();
  const double clean_mad = mad(z), clean_var = variance_sq(z);
  for (std::size_t i = 0; i < 20; ++i) z[i] = 1e6;
  CHECK(mad(z) < 2.0 * clean_mad);
  CHECK(variance_sq(z) > 100.0 * clean_var);
}

TEST_CASE("l1_median of a single point is that point") {
  const DataMatrix x{{1.5, -2.0, 3.0}};
  const Vector m = l1_median(x);
  CHECK(m == Vector{1.5, -2.0, 3.0});
}

TEST_CASE("l1_median of a regular polygon is its center") {
  const double cx = 3.0, cy = -1.0;
  std::vector<double> values;
  for (int k = 0; k < 7; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 7.0 + 0.3;
    values.push_back(cx + 2.0 * std::cos(a));
    values.push_back(cy + 2.0 * std::sin(a));
  }
  const Vector m = l1_median(DataMatrix(7, 2, values));
  CHECK(std::abs(m[0] - cx) < 1e-6);
  CHECK(std::abs(m[1] - cy) < 1e-6);
}

TEST_CASE("l1_median of four planar points matches a grid search") {
  const DataMatrix x{{0, 0}, {1, 0}, {0, 1}, {10, 10}};
  // Successively refined grids, starting with [−1, 11]² at spacing 0.01.
  double lo_a = -1, hi_a = 11, lo_b = -1, hi_b = 11;
  double best_a = 0, best_b = 0;
  int steps = 1200;
  for (int level = 0; level < 6; ++level) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; j <= steps; ++j) {
        const double a = lo_a + (hi_a - lo_a) * i / steps;
        const double b = lo_b + (hi_b - lo_b) * j / steps;
        const double f = l1_objective(x, a, b);
        if (f < best) best = f, best_a = a, best_b = b;
      }
    const double w = 4.0 * (hi_a - lo_a) / steps;
    lo_a = best_a - w, hi_a = best_a + w, lo_b = best_b - w, hi_b = best_b + w;
    steps = 200;
  }
  const Vector m = l1_median(x);
  CHECK(std::abs(m[0] - best_a) < 1e-4);
  CHECK(std::abs(m[1] - best_b) < 1e-4);
}

TEST_CASE("l1_median is translation equivariant") {
  NormalStream rng(12);
  const Matrix base = rpca::test::gaussian_matrix(40, 3, rng);
  const Vector t{5.0, -3.0, 0.25};
  Matrix moved = base;
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 3; ++j) moved(i, j) += t[j];
  const Vector m0 = l1_median(DataMatrix(base));
  const Vector m1 = l1_median(DataMatrix(moved));
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(m1[j] - (m0[j] + t[j])) < 1e-6);
}

TEST_CASE("l1_median_iterate reports a capped run as unconverged") {
  NormalStream rng(13);
  const DataMatrix x(rpca::test::gaussian_matrix(30, 2, rng));
  const auto r = l1_median_iterate(x, 1);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.center.size() == 2);
}
