#include "relsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relsim {

double record_size(const BlackoutRecord& record, SizeMetric metric) {
  return metric == SizeMetric::Energy ? record.total_energy_mwh() : record.max_unserved_mw;
}

void StatsAccumulator::add_year(const std::vector<BlackoutRecord>& year_records) {
  ++years;
  for (const auto& r : year_records) {
    records.push_back(r);
    for (int c = 0; c < kNumCauses; ++c) eens_sum_mwh[c] += r.energy_mwh[c];
  }
}

StatsAccumulator StatsAccumulator::merge(const StatsAccumulator& a, const StatsAccumulator& b) {
  StatsAccumulator out = a;
  out.years += b.years;
  out.aborted_years += b.aborted_years;
  out.records.insert(out.records.end(), b.records.begin(), b.records.end());
  for (int c = 0; c < kNumCauses; ++c) out.eens_sum_mwh[c] += b.eens_sum_mwh[c];
  return out;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0) || x < 0) throw std::invalid_argument("regularized_gamma_p domain");
  if (x == 0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // Series: P(a,x) = x^a e^-x / Gamma(a) * sum x^n / (a (a+1) ... (a+n))
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 1000; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Continued fraction for Q(a,x) by modified Lentz.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

double chi_square_quantile(double dof, double p) {
  if (!(dof > 0)) throw std::invalid_argument("chi-square dof must be > 0");
  if (!(p > 0 && p < 1)) throw std::invalid_argument("chi-square p must be in (0, 1)");
  const double a = dof / 2.0;
  auto cdf = [a](double x) { return regularized_gamma_p(a, x / 2.0); };

  double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 10.0;
  while (cdf(hi) < p) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> poisson_confidence_interval(long total_count, long n_years,
                                                      double confidence) {
  if (n_years < 1) throw std::invalid_argument("n_years must be >= 1");
  if (total_count < 0) throw std::invalid_argument("count must be >= 0");
  const double alpha = 1.0 - confidence;
  const double denom = 2.0 * static_cast<double>(n_years);
  const double lower =
      total_count == 0 ? 0.0 : chi_square_quantile(2.0 * total_count, alpha / 2.0) / denom;
  const double upper = chi_square_quantile(2.0 * (total_count + 1), 1.0 - alpha / 2.0) / denom;
  return {lower, upper};
}

FrequencyCurve frequency_curve(const std::vector<BlackoutRecord>& records, long n_years,
                               const std::vector<double>& thresholds, SizeMetric metric,
                               double confidence) {
  if (n_years < 1) throw std::invalid_argument("n_years must be >= 1");
  FrequencyCurve curve;
  curve.thresholds = thresholds;
  curve.metric = metric;
  curve.confidence = confidence;
  for (double c : thresholds) {
    long count = 0;
    for (const auto& r : records)
      if (record_size(r, metric) > c) ++count;
    curve.frequency.push_back(static_cast<double>(count) / n_years);
    auto [lo, hi] = poisson_confidence_interval(count, n_years, confidence);
    curve.lower.push_back(lo);
    curve.upper.push_back(hi);
  }
  return curve;
}

std::vector<double> default_thresholds(const std::vector<BlackoutRecord>& records,
                                       SizeMetric metric) {
  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& r : records) {
    const double s = record_size(r, metric);
    if (s <= 0) continue;
    if (!any || s < lo) lo = s;
    if (!any || s > hi) hi = s;
    any = true;
  }
  if (!any) return {1.0};
  const double e0 = std::floor(std::log10(lo));
  const double e1 = std::ceil(std::log10(hi));
  std::vector<double> thresholds;
  for (double e = e0; e <= e1 + 1e-9; e += 0.05)  // 20 points per decade
    thresholds.push_back(std::pow(10.0, e));
  return thresholds;
}

std::array<double, kNumCauses> eens_by_cause(const std::vector<BlackoutRecord>& records,
                                             long n_years) {
  if (n_years < 1) throw std::invalid_argument("n_years must be >= 1");
  std::array<double, kNumCauses> out{};
  for (const auto& r : records)
    for (int c = 0; c < kNumCauses; ++c) out[c] += r.energy_mwh[c];
  for (auto& v : out) v /= static_cast<double>(n_years);
  return out;
}

CauseHistogram cause_histogram(const std::vector<BlackoutRecord>& records,
                               const std::vector<double>& bin_edges) {
  if (bin_edges.size() < 2) throw std::invalid_argument("need at least two bin edges");
  CauseHistogram hist;
  hist.bin_edges = bin_edges;
  const int n_bins = static_cast<int>(bin_edges.size()) - 1;
  for (auto& row : hist.counts) row.assign(n_bins, 0);
  for (const auto& r : records) {
    const double size = r.total_energy_mwh();
    const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), size);
    const int bin = static_cast<int>(it - bin_edges.begin()) - 1;
    if (bin < 0 || bin >= n_bins) continue;
    for (int c = 0; c < kNumCauses; ++c)
      if (r.energy_mwh[c] > 0) ++hist.counts[c][bin];
  }
  return hist;
}

}  // namespace relsim
