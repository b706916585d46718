#ifndef IFA_STATS_HPP
#define IFA_STATS_HPP

#include <array>
#include <string>
#include <vector>

#include "ifa/metrics.hpp"
#include "ifa/subjective.hpp"

namespace ifa {

/// The five parameters of the monotone logistic+linear mapping
/// Q(x) = b1*(1/2 - 1/(1+exp(b2*(x-b3)))) + b4*x + b5.
struct LogisticParams {
  std::array<double, 5> beta{};

  double operator()(double x) const;
};

struct FitDiagnostics {
  int iterations = 0;
  double residual_rmse = 0.0;
  bool converged = false;
  bool damping_used = false;
};

/// Gauss-Newton fit of the 5-parameter logistic, damped when a plain step
/// increases the residual (step halving, then a Levenberg-style diagonal
/// term). Deterministic: fixed initialization, no randomness.
/// Requires >= 6 samples and non-constant x.
std::pair<LogisticParams, FitDiagnostics> fit_logistic5(
    const std::vector<double>& x, const std::vector<double>& y);

/// Pearson linear correlation. Requires >= 3 samples, both non-constant.
double plcc(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank-order correlation; ties receive mean ranks.
double srocc(const std::vector<double>& x, const std::vector<double>& y);

double rmse(const std::vector<double>& pred, const std::vector<double>& y);

/// Fraction of stimuli whose prediction falls outside the stimulus's
/// t-based 95% confidence interval.
double outlier_ratio(const std::vector<double>& pred,
                     const std::vector<MosRecord>& records);

/// Fallback form for datasets without raw scores: fixed absolute threshold.
double outlier_ratio_fixed(const std::vector<double>& pred,
                           const std::vector<double>& mos_values,
                           double threshold);

/// Average ranks (1-based) with mean ranks on ties.
std::vector<double> average_ranks(const std::vector<double>& v);

struct PerformanceRow {
  std::string metric;
  bool higher_better = true;
  double plcc = 0.0;
  double srocc = 0.0;
  double rmse = 0.0;
  double outlier_ratio = 0.0;
  LogisticParams params;
  FitDiagnostics fit;
  int n = 0;
  bool fit_ok = false;
  std::string error;
  // diagnostics for the alternate (unmapped) reading
  double plcc_raw = 0.0;
  bool or_used_fallback = false;
};

/// Joins scores with MOS records on stimulus_id (full overlap required),
/// clamps unbounded-perfect markers to (max finite score + 1), fits the
/// logistic mapping and computes PLCC/RMSE/OR on mapped scores and SROCC on
/// raw scores. `fallback_or_threshold` < 0 means CI-based OR (the default).
PerformanceRow evaluate_metric(const std::vector<MetricScore>& scores,
                               const std::vector<MosRecord>& records,
                               double fallback_or_threshold = -1.0);

}  // namespace ifa

#endif
