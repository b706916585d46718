#ifndef IFA_SUBJECTIVE_HPP
#define IFA_SUBJECTIVE_HPP

#include <string>
#include <vector>

namespace ifa {

/// Raw 5-grade ratings, complete matrix: scores[j][i] is the rating subject i
/// gave stimulus j. Every cell is in {1..5}; incomplete data is rejected at
/// ingestion.
struct SubjectScoreMatrix {
  std::vector<std::string> stimulus_ids;  // J entries
  std::vector<std::string> subject_ids;   // N entries
  std::vector<std::vector<int>> scores;   // J rows of N ratings

  std::size_t stimulus_count() const { return stimulus_ids.size(); }
  std::size_t subject_count() const { return subject_ids.size(); }
};

struct MosRecord {
  std::string stimulus_id;
  double mos = 0.0;
  double ci95 = 0.0;     // half-width, t-based
  double stddev = 0.0;   // sample (n-1) standard deviation
  int n_subjects = 0;
};

struct ScreeningResult {
  SubjectScoreMatrix retained;
  std::vector<std::string> rejected_subjects;
};

/// Parses the raw-score CSV (`stimulus_id,subject_1,...,subject_N`).
/// Malformed or out-of-range cells are reported with row/column position.
SubjectScoreMatrix parse_raw_scores(const std::string& csv_text);
SubjectScoreMatrix load_raw_scores(const std::string& path);

/// BT.500 Annex-2 subject screening. Per stimulus the rating kurtosis
/// beta2 = m4/m2^2 picks the deviation threshold (2*sigma if 2<=beta2<=4,
/// else sqrt(20)*sigma); a subject is rejected iff more than 5% of their
/// ratings fall outside the band and the deviations are not one-sided
/// (|P-Q|/(P+Q) < 0.3). Requires at least 3 subjects.
ScreeningResult screen_outliers(const SubjectScoreMatrix& m);

/// Per-stimulus mean opinion score with t-distribution 95% CI half-width.
std::vector<MosRecord> mos(const SubjectScoreMatrix& m);

/// Equal-width histogram over [1,5]; last bin right-closed. bins >= 2.
std::vector<int> mos_histogram(const std::vector<MosRecord>& records, int bins);

/// Two-sided 95% Student-t quantile (t such that P(T <= t) = 0.975) for the
/// given degrees of freedom. Table-backed for df <= 50, Cornish-Fisher
/// expansion beyond.
double t_quantile_975(int df);

}  // namespace ifa

#endif
