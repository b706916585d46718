#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ifa/stats.hpp"
#include "support.hpp"

using namespace ifa;

namespace {

double logistic5(const std::array<double, 5>& b, double x) {
  return b[0] * (0.5 - 1.0 / (1.0 + std::exp(b[1] * (x - b[2])))) + b[3] * x + b[4];
}

std::vector<MetricScore> as_scores(const std::vector<double>& values,
                                   Metric metric = Metric::kPsnr) {
  std::vector<MetricScore> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    MetricScore s;
    s.metric = metric;
    s.value = values[i];
    s.pair_id = "p" + std::to_string(i);
    out.push_back(s);
  }
  return out;
}

std::vector<MosRecord> as_records(const std::vector<double>& mos_values,
                                  double ci = 0.25) {
  std::vector<MosRecord> out;
  for (std::size_t i = 0; i < mos_values.size(); ++i) {
    MosRecord r;
    r.stimulus_id = "p" + std::to_string(i);
    r.mos = mos_values[i];
    r.ci95 = ci;
    r.n_subjects = 18;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("logistic fit") {
  SUBCASE("noiseless forward data is recovered functionally") {
    const std::array<double, 5> beta = {2.0, 1.0, 0.0, 0.5, 3.0};
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
      const double xi = -5.0 + 10.0 * i / 49.0;
      x.push_back(xi);
      y.push_back(logistic5(beta, xi));
    }
    const auto [params, diag] = fit_logistic5(x, y);
    CHECK(diag.residual_rmse < 1e-6);
    CHECK(diag.converged);
    // the curve, not the parameter vector, is the contract
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(params(x[i]) == doctest::Approx(y[i]).epsilon(1e-5));
    }
  }
  SUBCASE("linear data collapses to the affine branch") {
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
      x.push_back(0.3 * i);
      y.push_back(2.0 * x.back() + 1.0);
    }
    const auto [params, diag] = fit_logistic5(x, y);
    CHECK(diag.residual_rmse < 1e-8);
  }
  SUBCASE("underdetermined input rejected") {
    CHECK_THROWS(fit_logistic5({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}));
  }
  SUBCASE("degenerate x rejected") {
    CHECK_THROWS(fit_logistic5({2, 2, 2, 2, 2, 2}, {1, 2, 3, 4, 5, 6}));
  }
  SUBCASE("non-finite input rejected") {
    CHECK_THROWS(fit_logistic5({1, 2, 3, 4, 5, NAN}, {1, 2, 3, 4, 5, 6}));
  }
  SUBCASE("deterministic") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ux(0, 10), uy(1, 5);
    std::vector<double> x, y;
    for (int i = 0; i < 40; ++i) {
      x.push_back(ux(gen));
      y.push_back(uy(gen));
    }
    const auto a = fit_logistic5(x, y);
    const auto b = fit_logistic5(x, y);
    for (int k = 0; k < 5; ++k) {
      CHECK(a.first.beta[k] == (b.first.beta[k]));
    }
  }
}

TEST_CASE("plcc") {
  std::vector<double> x{1, 2, 3, 4, 5, 6};
  std::vector<double> lin, neg;
  for (double v : x) {
    lin.push_back(3.0 * v - 7.0);
    neg.push_back(-v);
  }
  CHECK(plcc(x, lin) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(plcc(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS(plcc({1, 1, 1}, {1, 2, 3}));
  CHECK_THROWS(plcc({1, 2}, {1, 2}));
}

TEST_CASE("srocc") {
  std::vector<double> x{0.5, 1.7, -2.0, 3.1, 0.9, 2.2};
  std::vector<double> ex, rev;
  for (double v : x) ex.push_back(std::exp(v));
  rev = x;
  std::reverse(rev.begin(), rev.end());

  CHECK(srocc(x, ex) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> reversed_rank{6, 5, 4, 3, 2, 1};
  std::vector<double> rank{1, 2, 3, 4, 5, 6};
  CHECK(srocc(rank, reversed_rank) == doctest::Approx(-1.0).epsilon(1e-15));

  SUBCASE("exactly invariant under strictly increasing transforms, with ties") {
    std::mt19937_64 gen(9);
    std::uniform_int_distribution<int> vals(0, 6);  // forces ties
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a, b;
      for (int i = 0; i < 25; ++i) {
        a.push_back(vals(gen));
        b.push_back(vals(gen));
      }
      if (a == std::vector<double>(a.size(), a[0])) continue;
      if (b == std::vector<double>(b.size(), b[0])) continue;
      std::vector<double> a_exp, a_cube, a_aff;
      for (double v : a) {
        a_exp.push_back(std::exp(v));
        a_cube.push_back(v * v * v);
        a_aff.push_back(2.5 * v + 11.0);
      }
      const double base = srocc(a, b);
      REQUIRE(srocc(a_exp, b) == base);
      REQUIRE(srocc(a_cube, b) == base);
      REQUIRE(srocc(a_aff, b) == base);
    }
  }
}

TEST_CASE("rmse") {
  CHECK(rmse({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0.0));
  CHECK(rmse({1.5, 2.5, 2.5, 3.5}, {1, 2, 3, 3}) == doctest::Approx(0.5));
  CHECK_THROWS(rmse({1, 2}, {1}));
}

TEST_CASE("outlier ratio") {
  SUBCASE("perfect predictions") {
    const auto recs = as_records({1, 2, 3, 4});
    CHECK(outlier_ratio({1, 2, 3, 4}, recs) == doctest::Approx(0.0));
  }
  SUBCASE("exactly half outside") {
    auto recs = as_records({2, 2, 2, 2}, 0.5);
    CHECK(outlier_ratio({2.1, 2.2, 3.0, 4.0}, recs) == doctest::Approx(0.5));
  }
  SUBCASE("fixed-threshold fallback") {
    CHECK(outlier_ratio_fixed({1, 2, 3, 4}, {1, 2, 4, 6}, 0.75) ==
          doctest::Approx(0.5));
  }
}

TEST_CASE("evaluate_metric") {
  SUBCASE("scores equal to mos") {
    std::vector<double> mos_vals;
    for (int i = 0; i < 20; ++i) mos_vals.push_back(1.0 + 4.0 * i / 19.0);
    const auto row = evaluate_metric(as_scores(mos_vals), as_records(mos_vals));
    REQUIRE(row.fit_ok);
    CHECK(row.plcc == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(row.rmse == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(row.outlier_ratio == doctest::Approx(0.0));
    CHECK(row.srocc == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("negated scores: fit absorbs the sign") {
    std::vector<double> mos_vals, negated;
    for (int i = 0; i < 20; ++i) {
      mos_vals.push_back(1.0 + 4.0 * i / 19.0);
      negated.push_back(-mos_vals.back());
    }
    const auto row = evaluate_metric(as_scores(negated), as_records(mos_vals));
    REQUIRE(row.fit_ok);
    CHECK(row.srocc == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(row.plcc == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("unbounded-perfect scores are clamped to max finite + 1") {
    std::vector<double> mos_vals{5.0, 4.5, 4.0, 3.0, 2.0, 1.5, 1.2, 4.8};
    auto scores = as_scores({60, 40, 35, 30, 25, 22, 20, 50}, Metric::kPsnr);
    scores[0].unbounded_perfect = true;
    scores[0].value = std::numeric_limits<double>::infinity();
    const auto row = evaluate_metric(scores, as_records(mos_vals));
    REQUIRE(row.fit_ok);
    CHECK(row.srocc > 0.9);  // clamp keeps the identical pair ranked first
  }
  SUBCASE("join mismatch reported") {
    auto scores = as_scores({1, 2, 3, 4, 5, 6});
    scores[2].pair_id = "unknown";
    const auto row = evaluate_metric(scores, as_records({1, 2, 3, 4, 5, 6}));
    CHECK(!row.fit_ok);
    CHECK(row.error.find("unknown") != std::string::npos);
  }
  SUBCASE("plcc after fit is at least |raw plcc| on monotone data") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> x, y;
      double acc = 0.0;
      for (int i = 0; i < 15; ++i) {
        acc += u(gen) + 0.05;
        x.push_back(acc);
        y.push_back(1.0 + 4.0 * (1.0 - std::exp(-0.3 * acc)) + 0.3 * (u(gen) - 0.5));
      }
      const auto [params, diag] = fit_logistic5(x, y);
      std::vector<double> mapped;
      for (double xi : x) mapped.push_back(params(xi));
      double fitted, raw;
      try {
        fitted = plcc(mapped, y);
        raw = plcc(x, y);
      } catch (const std::exception&) {
        continue;  // constant mapped output on a degenerate draw
      }
      REQUIRE(fitted >= std::abs(raw) - 1e-9);
    }
  }
  SUBCASE("invariant under positive affine rescaling of scores") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> x, mos_vals;
    for (int i = 0; i < 30; ++i) {
      x.push_back(10.0 + 30.0 * u(gen));
      mos_vals.push_back(1.0 + 4.0 * u(gen));
    }
    std::vector<double> rescaled;
    for (double v : x) rescaled.push_back(7.0 * v + 100.0);
    const auto a = evaluate_metric(as_scores(x), as_records(mos_vals));
    const auto b = evaluate_metric(as_scores(rescaled), as_records(mos_vals));
    REQUIRE(a.fit_ok);
    REQUIRE(b.fit_ok);
    CHECK(a.plcc == doctest::Approx(b.plcc).epsilon(1e-6));
    CHECK(a.srocc == (b.srocc));
    CHECK(a.rmse == doctest::Approx(b.rmse).epsilon(1e-6));
    CHECK(a.outlier_ratio == doctest::Approx(b.outlier_ratio).epsilon(1e-12));
  }
}
