#include "ifa/subjective.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ifa/csv.hpp"

namespace ifa {

namespace {

// t(0.975, df) for df = 1..50
const double kT975[50] = {
    12.7062047, 4.3026527, 3.1824463, 2.7764451, 2.5705818, 2.4469119,
    2.3646243,  2.3060041, 2.2621572, 2.2281389, 2.2009852, 2.1788128,
    2.1603687,  2.1447867, 2.1314495, 2.1199053, 2.1098156, 2.1009220,
    2.0930241,  2.0859634, 2.0796138, 2.0738731, 2.0686576, 2.0638986,
    2.0595386,  2.0555294, 2.0518305, 2.0484071, 2.0452296, 2.0422725,
    2.0395134,  2.0369333, 2.0345153, 2.0322445, 2.0301079, 2.0280940,
    2.0261925,  2.0243942, 2.0226909, 2.0210754, 2.0195410, 2.0180817,
    2.0166922,  2.0153675, 2.0141034, 2.0128956, 2.0117405, 2.0106348,
    2.0095752,  2.0085591};

}  // namespace

double t_quantile_975(int df) {
  if (df < 1) throw std::invalid_argument("t_quantile_975: df must be >= 1");
  if (df <= 50) return kT975[df - 1];
  const double z = 1.9599639845400545;
  const double z3 = z * z * z;
  const double z5 = z3 * z * z;
  const double d = static_cast<double>(df);
  return z + (z3 + z) / (4.0 * d) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * d * d);
}

SubjectScoreMatrix parse_raw_scores(const std::string& csv_text) {
  const CsvTable t = parse_csv(csv_text);
  if (t.header.size() < 2 || t.header[0] != "stimulus_id") {
    throw std::runtime_error(
        "raw scores: expected header 'stimulus_id,subject_1,...'");
  }
  SubjectScoreMatrix m;
  m.subject_ids.assign(t.header.begin() + 1, t.header.end());
  const std::size_t n = m.subject_ids.size();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != n + 1) {
      throw std::runtime_error("raw scores: row " + std::to_string(r + 2) +
                               " has " + std::to_string(row.size() - 1) +
                               " ratings, expected " + std::to_string(n));
    }
    m.stimulus_ids.push_back(row[0]);
    std::vector<int> ratings(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& cell = row[i + 1];
      std::size_t pos = 0;
      int v = 0;
      bool ok = !cell.empty();
      if (ok) {
        try {
          v = std::stoi(cell, &pos);
        } catch (...) {
          ok = false;
        }
      }
      if (!ok || pos != cell.size() || v < 1 || v > 5) {
        throw std::runtime_error("raw scores: bad rating '" + cell +
                                 "' at row " + std::to_string(r + 2) +
                                 " column " + m.subject_ids[i] +
                                 " (expected integer 1-5)");
      }
      ratings[i] = v;
    }
    m.scores.push_back(std::move(ratings));
  }
  return m;
}

SubjectScoreMatrix load_raw_scores(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_raw_scores(buf.str());
}

ScreeningResult screen_outliers(const SubjectScoreMatrix& m) {
  const std::size_t n = m.subject_count();
  const std::size_t j = m.stimulus_count();
  if (n < 3) throw std::invalid_argument("screen_outliers: need >= 3 subjects");

  std::vector<double> mean(j), thr(j);
  for (std::size_t s = 0; s < j; ++s) {
    const auto& row = m.scores[s];
    double mu = 0.0;
    for (int v : row) mu += v;
    mu /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (int v : row) {
      const double d = v - mu;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    const double sigma = std::sqrt(m2);
    // population kurtosis; a constant row has beta2 undefined and sigma 0,
    // so the band is empty either way
    const double beta2 = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    const bool normalish = beta2 >= 2.0 && beta2 <= 4.0;
    mean[s] = mu;
    thr[s] = (normalish ? 2.0 : std::sqrt(20.0)) * sigma;
  }

  std::vector<bool> reject(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    int p = 0, q = 0;
    for (std::size_t s = 0; s < j; ++s) {
      const double v = m.scores[s][i];
      if (v > mean[s] + thr[s]) ++p;
      if (v < mean[s] - thr[s]) ++q;
    }
    if (p + q > 0) {
      const double frac = static_cast<double>(p + q) / static_cast<double>(j);
      const double ratio = std::abs(p - q) / static_cast<double>(p + q);
      reject[i] = frac > 0.05 && ratio < 0.3;
    }
  }

  ScreeningResult out;
  out.retained.stimulus_ids = m.stimulus_ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (reject[i]) {
      out.rejected_subjects.push_back(m.subject_ids[i]);
    } else {
      out.retained.subject_ids.push_back(m.subject_ids[i]);
    }
  }
  out.retained.scores.resize(j);
  for (std::size_t s = 0; s < j; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reject[i]) out.retained.scores[s].push_back(m.scores[s][i]);
    }
  }
  return out;
}

std::vector<MosRecord> mos(const SubjectScoreMatrix& m) {
  std::vector<MosRecord> out;
  out.reserve(m.stimulus_count());
  const std::size_t n = m.subject_count();
  if (n == 0) throw std::invalid_argument("mos: no subjects");
  for (std::size_t s = 0; s < m.stimulus_count(); ++s) {
    MosRecord rec;
    rec.stimulus_id = m.stimulus_ids[s];
    rec.n_subjects = static_cast<int>(n);
    double mu = 0.0;
    for (int v : m.scores[s]) mu += v;
    mu /= static_cast<double>(n);
    rec.mos = mu;
    if (n > 1) {
      double ss = 0.0;
      for (int v : m.scores[s]) ss += (v - mu) * (v - mu);
      rec.stddev = std::sqrt(ss / static_cast<double>(n - 1));
      rec.ci95 = t_quantile_975(static_cast<int>(n) - 1) * rec.stddev /
                 std::sqrt(static_cast<double>(n));
    }
    out.push_back(rec);
  }
  return out;
}

std::vector<int> mos_histogram(const std::vector<MosRecord>& records, int bins) {
  if (bins < 2) throw std::invalid_argument("mos_histogram: bins must be >= 2");
  std::vector<int> counts(bins, 0);
  const double width = 4.0 / bins;
  for (const auto& rec : records) {
    int b = static_cast<int>((rec.mos - 1.0) / width);
    b = std::clamp(b, 0, bins - 1);  // mos 5.0 lands in the last bin
    ++counts[b];
  }
  return counts;
}

}  // namespace ifa
