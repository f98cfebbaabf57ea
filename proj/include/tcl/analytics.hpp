#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tcl/cuts.hpp"
#include "tcl/graph.hpp"
#include "tcl/median.hpp"
#include "tcl/profile.hpp"
#include "tcl/rng.hpp"

namespace tcl {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct UrnTransition {
  double up, down, stay;
};

/// Transition law of the projected token walk:
/// up 3x^2(n-x)/n^3, down 3x(n-x)^2/n^3, stay with the rest.
inline UrnTransition urn_transition(long long n, long long x) {
  if (n < 1 || x < 0 || x > n) throw OutOfRange("urn state out of range");
  const double nn = static_cast<double>(n), xd = static_cast<double>(x);
  const double n3 = nn * nn * nn;
  const double up = 3.0 * xd * xd * (nn - xd) / n3;
  const double down = 3.0 * xd * (nn - xd) * (nn - xd) / n3;
  return {up, down, 1.0 - up - down};
}

namespace detail {

// Thomas elimination on the first-step equations, over any field. Rows are
// rescaled by n^3 / (3 x (n-x)) so entries stay small:
//   n f(x) - x f(x+1) - (n-x) f(x-1) = rhs(x), f(0) = f0, f(n) = fn.
template <class F, class RhsFn>
std::vector<F> solve_first_step(long long n, F f0, F fn, RhsFn rhs) {
  std::vector<F> cprime(n), rprime(n), f(n + 1);
  f[0] = f0;
  f[n] = fn;
  if (n >= 2) {
    for (long long x = 1; x <= n - 1; ++x) {
      const F lower = F(-(n - x));
      const F diag = F(n);
      const F upper = F(-x);
      F r = rhs(x);
      if (x == 1) r -= lower * f0;
      if (x == n - 1) r -= upper * fn;
      if (x == 1) {
        cprime[x] = upper / diag;
        rprime[x] = r / diag;
      } else {
        const F m = diag - lower * cprime[x - 1];
        cprime[x] = (x == n - 1) ? F(0) : upper / m;
        rprime[x] = (r - lower * rprime[x - 1]) / m;
      }
    }
    f[n - 1] = rprime[n - 1];
    for (long long x = n - 2; x >= 1; --x) f[x] = rprime[x] - cprime[x] * f[x + 1];
  }
  return f;
}

}  // namespace detail

/// Exact absorption probabilities (hit state n) per start state.
inline std::vector<BigRational> urn_hit_probabilities_exact(long long n) {
  if (n < 1) throw OutOfRange("urn size must be positive");
  return detail::solve_first_step<BigRational>(n, BigRational(0), BigRational(1),
                                               [](long long) { return BigRational(0); });
}

/// Exact expected absorption times per start state.
inline std::vector<BigRational> urn_expected_times_exact(long long n) {
  if (n < 1) throw OutOfRange("urn size must be positive");
  const BigInt n3 = BigInt(n) * n * n;
  return detail::solve_first_step<BigRational>(n, BigRational(0), BigRational(0),
                                               [&](long long x) {
                                                 return BigRational(n3, BigInt(3) * x * (n - x));
                                               });
}

struct AbsorptionResult {
  std::vector<double> hit_top;        // index = start state
  std::vector<double> expected_time;  // index = start state
};

/// Solves the tridiagonal first-step equations of the urn walk. Exact
/// rational elimination up to n = 200, stable floating elimination beyond.
inline AbsorptionResult absorption_solver(long long n) {
  if (n < 1) throw OutOfRange("urn size must be positive");
  AbsorptionResult out;
  if (n <= 200) {
    for (const auto& r : urn_hit_probabilities_exact(n))
      out.hit_top.push_back(r.convert_to<double>());
    for (const auto& r : urn_expected_times_exact(n))
      out.expected_time.push_back(r.convert_to<double>());
    return out;
  }
  const double nd = static_cast<double>(n);
  out.hit_top = detail::solve_first_step<double>(n, 0.0, 1.0, [](long long) { return 0.0; });
  out.expected_time = detail::solve_first_step<double>(
      n, 0.0, 0.0, [&](long long x) {
        return nd * nd * nd / (3.0 * static_cast<double>(x) * static_cast<double>(n - x));
      });
  return out;
}

/// Exact closed-form absorption probability: (1/2)^(n-1) * sum of the first
/// x0 binomials of row n-1.
inline BigRational urn_closed_form_exact(long long n, long long x0) {
  if (n < 1 || x0 < 0 || x0 > n) throw OutOfRange("urn state out of range");
  BigInt sum = 0, binom = 1;  // binom = C(n-1, j-1) starting at j = 1
  for (long long j = 1; j <= x0; ++j) {
    sum += binom;
    binom = binom * (n - j) / j;
  }
  return BigRational(sum, BigInt(1) << static_cast<unsigned>(n - 1));
}

inline double urn_closed_form(long long n, long long x0) {
  if (n < 1 || x0 < 0 || x0 > n) throw OutOfRange("urn state out of range");
  if (n <= 1024) return urn_closed_form_exact(n, x0).convert_to<double>();
  // log-space for large n
  double acc = 0.0;
  for (long long j = 1; j <= x0; ++j) {
    const double lg = std::lgamma(static_cast<double>(n)) -
                      std::lgamma(static_cast<double>(j)) -
                      std::lgamma(static_cast<double>(n - j + 1)) -
                      static_cast<double>(n - 1) * std::log(2.0);
    acc += std::exp(lg);
  }
  return std::min(acc, 1.0);
}

/// One sampled walk; true if absorbed at n. Steps (if requested) counts
/// every round including holds.
inline bool urn_simulate(long long n, long long x0, Rng& rng, long long* steps = nullptr) {
  if (n < 1 || x0 < 0 || x0 > n) throw OutOfRange("urn state out of range");
  long long x = x0, t = 0;
  while (x != 0 && x != n) {
    const auto tr = urn_transition(n, x);
    const double r = rng.uniform01();
    if (r < tr.up)
      ++x;
    else if (r < tr.up + tr.down)
      --x;
    ++t;
  }
  if (steps) *steps = t;
  return x == n;
}

// ---------------------------------------------------------------------------

/// D(x_hat) / D(x*). A profile concentrated on one node has D(x*) = 0;
/// then the ratio is 1 at the optimum and infinite elsewhere.
inline double approx_ratio(const Graph& g, const Profile& p, int x_hat) {
  g.require_node(x_hat);
  const auto [minimizers, best] = generalized_median(g, p);
  if (best == 0)
    return minimizers.contains(x_hat) ? 1.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(total_distance(g, p, x_hat)) / static_cast<double>(best);
}

/// Participant mass on the two sides of a cut, larger side first.
inline std::pair<long long, long long> edge_cut_counts(const Graph& g, const Profile& p,
                                                       const EdgeCut& cut) {
  if (cut.side_u.count() + cut.side_v.count() != g.node_count())
    throw NotMedianGraph("cut does not partition the nodes");
  long long nu = 0;
  cut.side_u.for_each([&](int v) { nu += p.count_at(v); });
  const long long nv = p.total() - nu;
  return {std::max(nu, nv), std::min(nu, nv)};
}

// ---------------------------------------------------------------------------
// small statistics helpers

/// Inverse standard normal CDF (Acklam's rational approximation with one
/// Halley refinement; good to ~1e-13).
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("quantile needs p in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= phigh) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

inline std::pair<double, double> wilson_interval(long long successes, long long trials,
                                                 double confidence) {
  if (trials < 1 || successes < 0 || successes > trials)
    throw OutOfRange("wilson_interval needs 0 <= successes <= trials, trials >= 1");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw OutOfRange("confidence must be in (0,1)");
  const double z = inverse_normal_cdf(0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double rad =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - rad), std::min(1.0, center + rad)};
}

inline double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

/// Nearest-rank percentile of an unsorted sample, q in [0,1].
inline double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) throw EmptySet("percentile of empty sample");
  std::sort(xs.begin(), xs.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(xs.size())));
  return xs[rank == 0 ? 0 : rank - 1];
}

}  // namespace tcl
