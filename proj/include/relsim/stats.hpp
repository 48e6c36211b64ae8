#pragma once

#include <array>
#include <vector>

#include "relsim/components.hpp"

namespace relsim {

/// One blackout event: opens when the total unserved demand rises from
/// zero, closes when it returns to zero. Energy is attributed per cause at
/// disconnection time and kept through restoration.
struct BlackoutRecord {
  double start_h = 0.0;
  double end_h = 0.0;
  std::array<double, kNumCauses> energy_mwh{};
  double max_unserved_mw = 0.0;
  bool truncated = false;  // still open at the year boundary

  double total_energy_mwh() const {
    return energy_mwh[0] + energy_mwh[1] + energy_mwh[2];
  }
};

enum class SizeMetric { Energy, MaxDemand };

double record_size(const BlackoutRecord& record, SizeMetric metric);

/// Complementary cumulative frequency of blackouts per year, with
/// chi-square confidence bounds.
struct FrequencyCurve {
  std::vector<double> thresholds;
  std::vector<double> frequency;  // events per year with size > threshold
  std::vector<double> lower;
  std::vector<double> upper;
  double confidence = 0.90;
  SizeMetric metric = SizeMetric::Energy;
};

/// Mergeable aggregate over replications.
struct StatsAccumulator {
  long years = 0;
  long aborted_years = 0;
  std::vector<BlackoutRecord> records;
  std::array<double, kNumCauses> eens_sum_mwh{};

  void add_year(const std::vector<BlackoutRecord>& year_records);
  static StatsAccumulator merge(const StatsAccumulator& a, const StatsAccumulator& b);
};

/// Regularized lower incomplete gamma P(a, x); series expansion for
/// x < a + 1, continued fraction otherwise.
double regularized_gamma_p(double a, double x);

/// Quantile of the central chi-square distribution with f degrees of
/// freedom (f > 0, 0 < p < 1), computed by inverting the regularized
/// incomplete gamma with bracketed bisection.
double chi_square_quantile(double dof, double p);

/// Two-sided Poisson-rate confidence interval for an observed total event
/// count over n_years: lower = chi2(2k, a/2) / 2N, upper = chi2(2k+2, 1-a/2) / 2N
/// with a = 1 - confidence; the lower bound is 0 when the count is 0.
std::pair<double, double> poisson_confidence_interval(long total_count, long n_years,
                                                      double confidence = 0.90);

FrequencyCurve frequency_curve(const std::vector<BlackoutRecord>& records, long n_years,
                               const std::vector<double>& thresholds, SizeMetric metric,
                               double confidence = 0.90);

/// 20 log-spaced points per decade spanning the observed size range.
std::vector<double> default_thresholds(const std::vector<BlackoutRecord>& records,
                                       SizeMetric metric);

std::array<double, kNumCauses> eens_by_cause(const std::vector<BlackoutRecord>& records,
                                             long n_years);

struct CauseHistogram {
  std::vector<double> bin_edges;  // ascending; bin b = [edges[b], edges[b+1])
  std::array<std::vector<long>, kNumCauses> counts;
};

/// Bins each record by its total size; every cause that contributed energy
/// to the record increments its own row.
CauseHistogram cause_histogram(const std::vector<BlackoutRecord>& records,
                               const std::vector<double>& bin_edges);

}  // namespace relsim
