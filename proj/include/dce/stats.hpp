#pragma once

// Statistical tests used by the emission analysis and the property suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace dce::stats {

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample KS test against a continuous CDF, with the Stephens
/// small-sample correction to the effective sqrt(n).
inline KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double en = std::sqrt(n);
  return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

inline KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_test_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

inline double chi_squared_survival(double statistic, double dof) {
  if (dof <= 0) throw std::invalid_argument("chi_squared_survival: dof must be > 0");
  if (statistic <= 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

struct ChiSquaredResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Pearson homogeneity test of success proportions across groups
/// (a k x 2 contingency table). Groups with zero trials are ignored.
inline ChiSquaredResult proportion_homogeneity(const std::vector<std::size_t>& successes,
                                               const std::vector<std::size_t>& trials) {
  if (successes.size() != trials.size()) throw std::invalid_argument("proportion_homogeneity: size mismatch");
  double s_total = 0.0;
  double n_total = 0.0;
  std::size_t groups = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (successes[i] > trials[i]) throw std::invalid_argument("proportion_homogeneity: successes > trials");
    if (trials[i] == 0) continue;
    s_total += static_cast<double>(successes[i]);
    n_total += static_cast<double>(trials[i]);
    ++groups;
  }
  if (groups < 2) throw std::invalid_argument("proportion_homogeneity: need >= 2 non-empty groups");
  const double p = s_total / n_total;
  if (p == 0.0 || p == 1.0) return {0.0, static_cast<double>(groups - 1), 1.0};
  double chi2 = 0.0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i] == 0) continue;
    const double n = static_cast<double>(trials[i]);
    const double s = static_cast<double>(successes[i]);
    const double es = n * p;
    const double ef = n * (1.0 - p);
    chi2 += (s - es) * (s - es) / es + ((n - s) - ef) * ((n - s) - ef) / ef;
  }
  const double dof = static_cast<double>(groups - 1);
  return {chi2, dof, chi_squared_survival(chi2, dof)};
}

/// Pearson goodness of fit of observed counts to expected counts.
inline ChiSquaredResult goodness_of_fit(const std::vector<double>& observed, const std::vector<double>& expected,
                                        int fitted_parameters = 0) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw std::invalid_argument("goodness_of_fit: need matching vectors of >= 2 cells");
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0)) throw std::invalid_argument("goodness_of_fit: expected counts must be > 0");
    chi2 += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  }
  const double dof = static_cast<double>(observed.size()) - 1.0 - fitted_parameters;
  return {chi2, dof, chi_squared_survival(chi2, dof)};
}

/// Standard error of a binomial proportion p estimated from n trials.
inline double binomial_sigma(double p, std::size_t n) {
  if (n == 0) throw std::invalid_argument("binomial_sigma: n must be > 0");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

inline Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace dce::stats
