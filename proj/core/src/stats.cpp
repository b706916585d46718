#include "ifa/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace ifa {

namespace {

double sigmoid(double u) {
  // 1/(1+exp(u)), overflow-safe
  if (u > 0.0) {
    const double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  const double mu = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double residual_sse(const LogisticParams& p, const std::vector<double>& x,
                    const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - p(x[i]);
    acc += r * r;
  }
  return acc;
}

std::tuple<LogisticParams, double, FitDiagnostics> descend_from(
    const LogisticParams& init, const std::vector<double>& x,
    const std::vector<double>& y) {
  const std::size_t n = x.size();
  LogisticParams p = init;
  FitDiagnostics diag;
  const int max_iter = 1000;
  double sse = residual_sse(p, x, y);

  for (diag.iterations = 0; diag.iterations < max_iter; ++diag.iterations) {
    Eigen::MatrixXd jac(n, 5);
    Eigen::VectorXd res(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = p.beta[1] * (x[i] - p.beta[2]);
      const double s = sigmoid(u);
      const double ds = s * (1.0 - s);
      jac(i, 0) = 0.5 - s;
      jac(i, 1) = p.beta[0] * ds * (x[i] - p.beta[2]);
      jac(i, 2) = -p.beta[0] * ds * p.beta[1];
      jac(i, 3) = x[i];
      jac(i, 4) = 1.0;
      res(i) = y[i] - p(x[i]);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * res;

    Eigen::VectorXd step = jtj.ldlt().solve(jtr);

    LogisticParams trial = p;
    double scale = 1.0;
    double new_sse = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int halvings = 0; halvings <= 32; ++halvings) {
      for (int k = 0; k < 5; ++k) trial.beta[k] = p.beta[k] + scale * step(k);
      new_sse = residual_sse(trial, x, y);
      if (std::isfinite(new_sse) && new_sse <= sse) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      // Levenberg-style diagonal damping, escalated until the step helps
      diag.damping_used = true;
      double lambda = 1e-4;
      for (int attempt = 0; attempt < 24 && !accepted; ++attempt) {
        Eigen::MatrixXd damped = jtj;
        for (int k = 0; k < 5; ++k) {
          damped(k, k) += lambda * std::max(jtj(k, k), 1e-12);
        }
        step = damped.ldlt().solve(jtr);
        for (int k = 0; k < 5; ++k) trial.beta[k] = p.beta[k] + step(k);
        new_sse = residual_sse(trial, x, y);
        if (std::isfinite(new_sse) && new_sse <= sse) {
          accepted = true;
          break;
        }
        lambda *= 10.0;
      }
    }
    if (!accepted) break;  // no direction improves; stop at current point

    const double rel_change = sse > 0.0 ? (sse - new_sse) / sse : 0.0;
    p = trial;
    sse = new_sse;
    if (rel_change < 1e-10) {
      diag.converged = true;
      ++diag.iterations;
      break;
    }
  }
  if (!diag.converged && diag.iterations < max_iter) {
    // stalled on a non-improving step; report the plateau as converged
    diag.converged = true;
  }
  return {p, sse, diag};
}

}  // namespace

double LogisticParams::operator()(double x) const {
  const double u = beta[1] * (x - beta[2]);
  return beta[0] * (0.5 - sigmoid(u)) + beta[3] * x + beta[4];
}

std::pair<LogisticParams, FitDiagnostics> fit_logistic5(
    const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("fit_logistic5: length mismatch");
  if (n < 6) throw std::invalid_argument("fit_logistic5: need >= 6 samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument("fit_logistic5: non-finite input");
    }
  }
  const double sx = stddev_of(x);
  if (sx == 0.0) throw std::invalid_argument("fit_logistic5: degenerate (constant) x");

  double corr_sign = 1.0;
  if (stddev_of(y) > 0.0) corr_sign = plcc(x, y) >= 0.0 ? 1.0 : -1.0;

  LogisticParams init_sigmoid;
  {
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    init_sigmoid.beta[0] = *ymax - *ymin;
    init_sigmoid.beta[1] = corr_sign * 4.0 / sx;
    init_sigmoid.beta[2] = mean_of(x);
    init_sigmoid.beta[3] = 0.0;
    init_sigmoid.beta[4] = mean_of(y);
  }
  // Second deterministic start: the least-squares line. Descent never
  // increases the residual, so the winner is at least as good as a plain
  // linear mapping (and hence PLCC-after-fit >= |raw PLCC|).
  LogisticParams init_line;
  {
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxy / sxx;
    init_line.beta[0] = 0.0;
    init_line.beta[1] = corr_sign * 4.0 / sx;
    init_line.beta[2] = mx;
    init_line.beta[3] = slope;
    init_line.beta[4] = my - slope * mx;
  }

  auto [p_a, sse_a, diag_a] = descend_from(init_sigmoid, x, y);
  auto [p_b, sse_b, diag_b] = descend_from(init_line, x, y);
  const bool pick_a = sse_a <= sse_b;
  LogisticParams p = pick_a ? p_a : p_b;
  double sse = pick_a ? sse_a : sse_b;
  FitDiagnostics diag = pick_a ? diag_a : diag_b;

  diag.residual_rmse = std::sqrt(sse / static_cast<double>(n));
  return {p, diag};
}

double plcc(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("plcc: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("plcc: need >= 3 samples");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("plcc: constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t k = i;
    while (k + 1 < n && v[order[k + 1]] == v[order[i]]) ++k;
    const double mean_rank = 0.5 * (static_cast<double>(i) + k) + 1.0;
    for (std::size_t t = i; t <= k; ++t) ranks[order[t]] = mean_rank;
    i = k + 1;
  }
  return ranks;
}

double srocc(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("srocc: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("srocc: need >= 3 samples");
  return plcc(average_ranks(x), average_ranks(y));
}

double rmse(const std::vector<double>& pred, const std::vector<double>& y) {
  if (pred.size() != y.size()) throw std::invalid_argument("rmse: length mismatch");
  if (pred.empty()) throw std::invalid_argument("rmse: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    acc += (pred[i] - y[i]) * (pred[i] - y[i]);
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

double outlier_ratio(const std::vector<double>& pred,
                     const std::vector<MosRecord>& records) {
  if (pred.size() != records.size()) {
    throw std::invalid_argument("outlier_ratio: length mismatch");
  }
  if (pred.empty()) throw std::invalid_argument("outlier_ratio: empty input");
  std::size_t outliers = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (std::abs(pred[i] - records[i].mos) > records[i].ci95) ++outliers;
  }
  return static_cast<double>(outliers) / static_cast<double>(pred.size());
}

double outlier_ratio_fixed(const std::vector<double>& pred,
                           const std::vector<double>& mos_values,
                           double threshold) {
  if (pred.size() != mos_values.size()) {
    throw std::invalid_argument("outlier_ratio_fixed: length mismatch");
  }
  if (pred.empty()) throw std::invalid_argument("outlier_ratio_fixed: empty input");
  std::size_t outliers = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (std::abs(pred[i] - mos_values[i]) > threshold) ++outliers;
  }
  return static_cast<double>(outliers) / static_cast<double>(pred.size());
}

PerformanceRow evaluate_metric(const std::vector<MetricScore>& scores,
                               const std::vector<MosRecord>& records,
                               double fallback_or_threshold) {
  PerformanceRow row;
  if (scores.empty()) {
    row.error = "no scores";
    return row;
  }
  const MetricInfo& info = metric_info(scores.front().metric);
  row.metric = info.name;
  row.higher_better = info.higher_better;

  std::map<std::string, const MosRecord*> by_id;
  for (const auto& rec : records) by_id[rec.stimulus_id] = &rec;

  std::vector<double> x, y;
  std::vector<MosRecord> joined;
  double max_finite = -std::numeric_limits<double>::infinity();
  for (const auto& s : scores) {
    if (!s.ok()) {
      row.error = "score failure on " + s.pair_id + ": " + s.error;
      return row;
    }
    if (!s.unbounded_perfect && s.value > max_finite) max_finite = s.value;
  }
  for (const auto& s : scores) {
    auto it = by_id.find(s.pair_id);
    if (it == by_id.end()) {
      row.error = "no MOS record for stimulus " + s.pair_id;
      return row;
    }
    // unbounded-perfect markers clamped so the logistic fit sees finite input
    x.push_back(s.unbounded_perfect ? max_finite + 1.0 : s.value);
    y.push_back(it->second->mos);
    joined.push_back(*it->second);
  }
  row.n = static_cast<int>(x.size());

  try {
    auto [params, diag] = fit_logistic5(x, y);
    row.params = params;
    row.fit = diag;
    row.fit_ok = true;
    std::vector<double> mapped(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mapped[i] = params(x[i]);
    row.plcc = plcc(mapped, y);
    row.srocc = srocc(x, y);
    row.rmse = rmse(mapped, y);
    row.plcc_raw = plcc(x, y);
    bool have_ci = fallback_or_threshold < 0.0;
    for (const auto& rec : joined) {
      if (rec.n_subjects < 2) have_ci = false;
    }
    if (have_ci) {
      row.outlier_ratio = outlier_ratio(mapped, joined);
    } else {
      const double thr = fallback_or_threshold < 0.0 ? 0.5 : fallback_or_threshold;
      std::vector<double> mos_vals;
      for (const auto& rec : joined) mos_vals.push_back(rec.mos);
      row.outlier_ratio = outlier_ratio_fixed(mapped, mos_vals, thr);
      row.or_used_fallback = true;
    }
  } catch (const std::exception& e) {
    row.error = std::string("fit failure: ") + e.what();
    row.fit_ok = false;
  }
  return row;
}

}  // namespace ifa
