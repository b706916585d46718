#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "ifa/subjective.hpp"
#include "support.hpp"

using namespace ifa;

namespace {

SubjectScoreMatrix make_matrix(std::size_t stimuli, std::size_t subjects,
                               int fill) {
  SubjectScoreMatrix m;
  for (std::size_t j = 0; j < stimuli; ++j) {
    m.stimulus_ids.push_back("s" + std::to_string(j));
    m.scores.emplace_back(subjects, fill);
  }
  for (std::size_t i = 0; i < subjects; ++i) {
    m.subject_ids.push_back("subject_" + std::to_string(i + 1));
  }
  return m;
}

}  // namespace

TEST_CASE("raw score csv parsing") {
  SUBCASE("well-formed") {
    const auto m = parse_raw_scores(
        "stimulus_id,subject_1,subject_2,subject_3\n"
        "a,5,5,4\n"
        "b,1,2,3\n");
    CHECK(m.stimulus_count() == 2);
    CHECK(m.subject_count() == 3);
    CHECK(m.scores[0] == std::vector<int>{5, 5, 4});
  }
  SUBCASE("rating out of range names row and column") {
    try {
      parse_raw_scores("stimulus_id,subject_1,subject_2\na,5,6\n");
      FAIL("expected parse error");
    } catch (const std::exception& e) {
      const std::string msg = e.what();
      CHECK(msg.find("row 2") != std::string::npos);
      CHECK(msg.find("subject_2") != std::string::npos);
    }
  }
  SUBCASE("missing cell rejected") {
    CHECK_THROWS(parse_raw_scores("stimulus_id,subject_1,subject_2\na,5\n"));
    CHECK_THROWS(parse_raw_scores("stimulus_id,subject_1,subject_2\na,5,\n"));
  }
  SUBCASE("non-integer rejected") {
    CHECK_THROWS(parse_raw_scores("stimulus_id,subject_1\na,3.5\n"));
  }
}

TEST_CASE("screening") {
  SUBCASE("all subjects identical: nobody rejected") {
    const auto res = screen_outliers(make_matrix(20, 6, 3));
    CHECK(res.rejected_subjects.empty());
    CHECK(res.retained.subject_count() == 6);
  }
  SUBCASE("fewer than 3 subjects rejected") {
    CHECK_THROWS(screen_outliers(make_matrix(10, 2, 3)));
  }
  SUBCASE("two-condition rule rejects a balanced outlier") {
    // 6 subjects, 40 stimuli. Subject 6 deviates upward on 3 stimuli and
    // downward on 3 (balanced, ratio 0 < 0.3; fraction 6/40 > 5%).
    auto m = make_matrix(40, 6, 3);
    for (int j = 0; j < 3; ++j) {  // others low, outlier high
      m.scores[j] = {1, 2, 1, 2, 1, 5};
    }
    for (int j = 3; j < 6; ++j) {  // others high, outlier low
      m.scores[j] = {5, 4, 5, 4, 5, 1};
    }
    const auto res = screen_outliers(m);
    REQUIRE(res.rejected_subjects.size() == 1);
    CHECK(res.rejected_subjects[0] == "subject_6");
    CHECK(res.retained.subject_count() == 5);
    CHECK(res.retained.scores[0] == std::vector<int>{1, 2, 1, 2, 1});

    SUBCASE("screening is idempotent on the retained matrix") {
      const auto again = screen_outliers(res.retained);
      CHECK(again.rejected_subjects.empty());
    }
  }
  SUBCASE("one-sided deviations are kept (ratio condition)") {
    // same deviation count but all in one direction: ratio 1.0 >= 0.3
    auto m = make_matrix(40, 6, 3);
    for (int j = 0; j < 6; ++j) {
      m.scores[j] = {1, 2, 1, 2, 1, 5};
    }
    const auto res = screen_outliers(m);
    CHECK(res.rejected_subjects.empty());
  }
}

TEST_CASE("mos and confidence intervals") {
  SUBCASE("5,5,4 fixture") {
    SubjectScoreMatrix m = make_matrix(1, 3, 0);
    m.scores[0] = {5, 5, 4};
    const auto recs = mos(m);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].mos == doctest::Approx(4.6667).epsilon(1e-4));
    CHECK(recs[0].n_subjects == 3);
  }
  SUBCASE("identical ratings have zero ci") {
    SubjectScoreMatrix m = make_matrix(1, 7, 4);
    const auto recs = mos(m);
    CHECK(recs[0].ci95 == doctest::Approx(0.0));
  }
  SUBCASE("1..5 fixture: t-based ci") {
    SubjectScoreMatrix m = make_matrix(1, 5, 0);
    m.scores[0] = {1, 2, 3, 4, 5};
    const auto recs = mos(m);
    CHECK(recs[0].mos == doctest::Approx(3.0));
    CHECK(recs[0].ci95 == doctest::Approx(1.963).epsilon(1e-3));
  }
  SUBCASE("permutation invariance in subjects") {
    SubjectScoreMatrix m = make_matrix(2, 4, 0);
    m.scores[0] = {1, 5, 2, 4};
    m.scores[1] = {3, 3, 5, 1};
    auto p = m;
    for (auto& row : p.scores) std::reverse(row.begin(), row.end());
    std::reverse(p.subject_ids.begin(), p.subject_ids.end());
    const auto a = mos(m), b = mos(p);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].mos == (b[i].mos));
      CHECK(a[i].ci95 == (b[i].ci95));
    }
  }
  SUBCASE("adding a mean-valued subject keeps mos, never widens ci") {
    SubjectScoreMatrix m = make_matrix(2, 2, 0);
    m.scores[0] = {2, 4};  // mean 3
    m.scores[1] = {3, 5};  // mean 4
    const auto before = mos(m);
    m.subject_ids.push_back("subject_3");
    m.scores[0].push_back(3);
    m.scores[1].push_back(4);
    const auto after = mos(m);
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(after[i].mos == (before[i].mos));
      CHECK(after[i].ci95 <= before[i].ci95 + 1e-12);
    }
  }
}

TEST_CASE("t quantile") {
  CHECK(t_quantile_975(4) == doctest::Approx(2.7764451).epsilon(1e-6));
  CHECK(t_quantile_975(17) == doctest::Approx(2.1098156).epsilon(1e-6));
  // the approximation beyond the table stays close to the table edge
  CHECK(t_quantile_975(51) == doctest::Approx(2.0076).epsilon(1e-3));
  CHECK(t_quantile_975(1000) == doctest::Approx(1.9623).epsilon(1e-3));
  CHECK_THROWS(t_quantile_975(0));
}

TEST_CASE("mos histogram") {
  std::vector<MosRecord> recs;
  for (int i = 0; i < 360; ++i) {
    MosRecord r;
    r.stimulus_id = std::to_string(i);
    r.mos = 1.0 + 4.0 * (i / 359.0);
    recs.push_back(r);
  }
  SUBCASE("counts conserve total") {
    const auto h = mos_histogram(recs, 8);
    int total = 0;
    for (int c : h) total += c;
    CHECK(total == 360);
  }
  SUBCASE("all at 5.0 lands in the last bin (right-closed)") {
    std::vector<MosRecord> fives(12);
    for (auto& r : fives) r.mos = 5.0;
    const auto h = mos_histogram(fives, 8);
    CHECK(h.back() == 12);
    for (std::size_t i = 0; i + 1 < h.size(); ++i) CHECK(h[i] == 0);
  }
  SUBCASE("invariant to record order") {
    auto shuffled = recs;
    std::mt19937_64 gen(1);
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    CHECK(mos_histogram(recs, 8) == mos_histogram(shuffled, 8));
  }
  SUBCASE("bins must be at least 2") {
    CHECK_THROWS(mos_histogram(recs, 1));
  }
}
