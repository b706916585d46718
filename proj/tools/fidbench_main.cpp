// fidbench: batch image-fidelity scoring and metric-vs-MOS benchmarking.
//
// Subcommands:
//   score        score every manifest pair with the enabled metrics
//   bench        full pipeline: screening -> MOS -> scoring -> report
//   mos          subject screening + per-stimulus MOS/CI from raw ratings
//   descriptors  SI/CF of each unique reference content
//   fit          standalone 5-parameter logistic fit of an x,y table

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ifa/config.hpp"
#include "ifa/csv.hpp"
#include "ifa/descriptors.hpp"
#include "ifa/manifest.hpp"
#include "ifa/runner.hpp"
#include "ifa/stats.hpp"
#include "ifa/subjective.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string manifest_path;
  std::string raw_scores_path;
  std::string config_path;
  std::string out_dir;
  std::string metrics_spec;
  int jobs = 0;  // 0 = keep config value
  bool no_cache = false;
};

ifa::RunConfig resolve_config(const CommonOpts& opts) {
  ifa::RunConfig cfg;
  if (!opts.config_path.empty()) cfg = ifa::load_config(opts.config_path);
  if (!opts.metrics_spec.empty()) cfg.metrics = ifa::parse_metric_set(opts.metrics_spec);
  if (opts.jobs > 0) cfg.jobs = opts.jobs;
  if (opts.no_cache) cfg.use_cache = false;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  cfg.validate();
  return cfg;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_snapshot(const ifa::RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  write_file((fs::path(cfg.out_dir) / "resolved_config.txt").string(),
             ifa::serialize_config(cfg));
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss.precision(10);
  ss << v;
  return ss.str();
}

std::string errors_csv(const std::vector<ifa::PairError>& errors) {
  std::string out = "stimulus_id,error\n";
  for (const auto& e : errors) {
    out += ifa::csv_escape(e.stimulus_id) + "," + ifa::csv_escape(e.message) + "\n";
  }
  return out;
}

int cmd_score(const CommonOpts& opts) {
  const auto cfg = resolve_config(opts);
  const auto manifest = ifa::load_manifest(opts.manifest_path);
  write_snapshot(cfg);
  const auto batch = ifa::score_manifest(manifest, cfg);
  write_file((fs::path(cfg.out_dir) / "scores.csv").string(),
             ifa::score_table_csv(batch));
  if (!batch.errors.empty()) {
    write_file((fs::path(cfg.out_dir) / "errors.csv").string(),
               errors_csv(batch.errors));
    for (const auto& e : batch.errors) {
      std::cerr << "error: " << e.stimulus_id << ": " << e.message << "\n";
    }
    return 1;
  }
  std::cout << "scored " << manifest.pairs.size() << " pairs, "
            << batch.scores.size() << " rows -> "
            << (fs::path(cfg.out_dir) / "scores.csv").string() << "\n";
  return 0;
}

std::string mos_csv(const std::vector<ifa::MosRecord>& records) {
  std::string out = "stimulus_id,mos,ci95,stddev,n_subjects\n";
  for (const auto& r : records) {
    out += ifa::csv_escape(r.stimulus_id) + "," + format_double(r.mos) + "," +
           format_double(r.ci95) + "," + format_double(r.stddev) + "," +
           std::to_string(r.n_subjects) + "\n";
  }
  return out;
}

std::string histogram_csv(const std::vector<int>& bins) {
  const double width = 4.0 / static_cast<double>(bins.size());
  std::string out = "bin_low,bin_high,count\n";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    out += format_double(1.0 + width * i) + "," +
           format_double(1.0 + width * (i + 1)) + "," +
           std::to_string(bins[i]) + "\n";
  }
  return out;
}

int cmd_mos(const CommonOpts& opts) {
  const auto cfg = resolve_config(opts);
  const auto raw = ifa::load_raw_scores(opts.raw_scores_path);
  const auto screening = ifa::screen_outliers(raw);
  const auto records = ifa::mos(screening.retained);
  fs::create_directories(cfg.out_dir);

  std::string summary = "subjects: " + std::to_string(raw.subject_count()) +
                        "\nrejected: " + std::to_string(screening.rejected_subjects.size()) + "\n";
  for (const auto& s : screening.rejected_subjects) summary += "  " + s + "\n";
  write_file((fs::path(cfg.out_dir) / "screening.txt").string(), summary);
  write_file((fs::path(cfg.out_dir) / "mos.csv").string(), mos_csv(records));
  write_file((fs::path(cfg.out_dir) / "mos_histogram.csv").string(),
             histogram_csv(ifa::mos_histogram(records, cfg.histogram_bins)));
  std::cout << records.size() << " stimuli, "
            << screening.rejected_subjects.size() << " subjects rejected\n";
  return 0;
}

int cmd_descriptors(const CommonOpts& opts) {
  const auto cfg = resolve_config(opts);
  const auto manifest = ifa::load_manifest(opts.manifest_path);
  fs::create_directories(cfg.out_dir);

  // one row per unique reference content, first-seen order
  std::vector<std::string> order;
  std::map<std::string, bool> seen;
  for (const auto& p : manifest.pairs) {
    if (!seen.count(p.ref_path)) {
      seen[p.ref_path] = true;
      order.push_back(p.ref_path);
    }
  }
  std::string out = "content,si,cf,cf_applicable\n";
  std::vector<std::string> failures;
  for (const auto& ref : order) {
    try {
      const ifa::Image img = ifa::load_image(ifa::resolve_path(manifest, ref));
      const double si = ifa::spatial_information(img);
      double cf = 0.0;
      bool cf_ok = img.channels == 3;
      if (cf_ok) cf = ifa::colorfulness(img);
      out += ifa::csv_escape(ref) + "," + format_double(si) + "," +
             (cf_ok ? format_double(cf) : std::string("")) + "," +
             (cf_ok ? "1" : "0") + "\n";
    } catch (const std::exception& e) {
      failures.push_back(ref + ": " + e.what());
    }
  }
  write_file((fs::path(cfg.out_dir) / "descriptors.csv").string(), out);
  if (!failures.empty()) {
    for (const auto& f : failures) std::cerr << "error: " << f << "\n";
    return 1;
  }
  std::cout << order.size() << " contents -> "
            << (fs::path(cfg.out_dir) / "descriptors.csv").string() << "\n";
  return 0;
}

std::string report_csv(const std::vector<ifa::PerformanceRow>& rows) {
  std::string out =
      "metric,plcc,srocc,rmse,or,beta1,beta2,beta3,beta4,beta5,n\n";
  for (const auto& r : rows) {
    out += r.metric + ",";
    if (!r.fit_ok) {
      out += ",,,,,,,,," + std::to_string(r.n) + "\n";
      continue;
    }
    out += format_double(r.plcc) + "," + format_double(r.srocc) + "," +
           format_double(r.rmse) + "," + format_double(r.outlier_ratio);
    for (double b : r.params.beta) out += "," + format_double(b);
    out += "," + std::to_string(r.n) + "\n";
  }
  return out;
}

json report_json(const std::vector<ifa::PerformanceRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j{{"metric", r.metric},
           {"higher_better", r.higher_better},
           {"n", r.n},
           {"fit_ok", r.fit_ok}};
    if (r.fit_ok) {
      j["plcc"] = r.plcc;
      j["srocc"] = r.srocc;
      j["rmse"] = r.rmse;
      j["or"] = r.outlier_ratio;
      j["beta"] = r.params.beta;
      j["plcc_raw"] = r.plcc_raw;
      j["or_used_fallback"] = r.or_used_fallback;
      j["fit_iterations"] = r.fit.iterations;
    } else {
      j["error"] = r.error;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

int cmd_bench(const CommonOpts& opts) {
  const auto cfg = resolve_config(opts);
  const auto manifest = ifa::load_manifest(opts.manifest_path);
  write_snapshot(cfg);

  // ground truth: raw subjective scores if given, else the manifest MOS column
  std::vector<ifa::MosRecord> records;
  if (!opts.raw_scores_path.empty()) {
    const auto raw = ifa::load_raw_scores(opts.raw_scores_path);
    const auto screening = ifa::screen_outliers(raw);
    records = ifa::mos(screening.retained);
    std::string summary =
        "rejected: " + std::to_string(screening.rejected_subjects.size()) + "\n";
    for (const auto& s : screening.rejected_subjects) summary += "  " + s + "\n";
    write_file((fs::path(cfg.out_dir) / "screening.txt").string(), summary);
  } else {
    for (const auto& p : manifest.pairs) {
      if (!p.mos) {
        throw std::runtime_error(
            "no ground truth: pass --raw-scores or provide a mos column in "
            "the manifest (pair '" + p.stimulus_id + "' has none)");
      }
      ifa::MosRecord r;
      r.stimulus_id = p.stimulus_id;
      r.mos = *p.mos;
      r.ci95 = p.ci95.value_or(0.0);
      r.n_subjects = 1;  // CI-based OR not available; fallback applies
      records.push_back(std::move(r));
    }
  }
  write_file((fs::path(cfg.out_dir) / "mos.csv").string(), mos_csv(records));
  write_file((fs::path(cfg.out_dir) / "mos_histogram.csv").string(),
             histogram_csv(ifa::mos_histogram(records, cfg.histogram_bins)));

  const auto batch = ifa::score_manifest(manifest, cfg);
  write_file((fs::path(cfg.out_dir) / "scores.csv").string(),
             ifa::score_table_csv(batch));
  if (!batch.errors.empty()) {
    write_file((fs::path(cfg.out_dir) / "errors.csv").string(),
               errors_csv(batch.errors));
  }

  std::map<std::string, double> mos_by_id, ci_by_id;
  for (const auto& r : records) {
    mos_by_id[r.stimulus_id] = r.mos;
    ci_by_id[r.stimulus_id] = r.ci95;
  }

  std::vector<ifa::PerformanceRow> rows;
  bool any_metric_error = false;
  for (const auto& info : ifa::all_metrics()) {
    if (!cfg.metrics.count(info.id)) continue;
    std::vector<ifa::MetricScore> metric_scores;
    for (const auto& s : batch.scores) {
      if (s.metric == info.id && s.ok()) metric_scores.push_back(s);
    }
    auto row = ifa::evaluate_metric(metric_scores, records, cfg.or_threshold);
    if (!row.fit_ok) any_metric_error = true;

    if (row.fit_ok) {
      // per-metric scatter data for external plotting
      std::string scatter = "stimulus_id,raw,mapped,mos,ci95\n";
      for (const auto& s : metric_scores) {
        const double raw_v = s.unbounded_perfect
                                 ? std::numeric_limits<double>::infinity()
                                 : s.value;
        scatter += ifa::csv_escape(s.pair_id) + "," + format_double(raw_v) +
                   "," + format_double(row.params(s.value)) + "," +
                   format_double(mos_by_id[s.pair_id]) + "," +
                   format_double(ci_by_id[s.pair_id]) + "\n";
      }
      write_file((fs::path(cfg.out_dir) / ("scatter_" + row.metric + ".csv")).string(),
                 scatter);
    }
    rows.push_back(std::move(row));
  }

  write_file((fs::path(cfg.out_dir) / "report.csv").string(), report_csv(rows));
  write_file((fs::path(cfg.out_dir) / "report.json").string(),
             report_json(rows).dump(2) + "\n");

  for (const auto& r : rows) {
    std::cout << r.metric << ": ";
    if (r.fit_ok) {
      std::cout << "plcc=" << r.plcc << " srocc=" << r.srocc
                << " rmse=" << r.rmse << " or=" << r.outlier_ratio << "\n";
    } else {
      std::cout << "error: " << r.error << "\n";
    }
  }
  return (batch.errors.empty() && !any_metric_error) ? 0 : 1;
}

int cmd_fit(const std::string& data_path, const std::string& out_dir) {
  const auto table = ifa::read_csv(data_path);
  const int xi = table.column("x"), yi = table.column("y");
  if (xi < 0 || yi < 0) {
    throw std::runtime_error("fit input needs 'x' and 'y' columns");
  }
  std::vector<double> x, y;
  for (const auto& row : table.rows) {
    x.push_back(std::stod(row[xi]));
    y.push_back(std::stod(row[yi]));
  }
  const auto [params, diag] = ifa::fit_logistic5(x, y);
  json j{{"beta", params.beta},
         {"iterations", diag.iterations},
         {"residual_rmse", diag.residual_rmse},
         {"converged", diag.converged}};
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "fit.json").string(), text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"full-reference image fidelity scoring and MOS benchmarking"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string fit_data;

  auto add_common = [&](CLI::App* cmd, bool needs_manifest, bool needs_scores) {
    auto* m = cmd->add_option("--manifest", opts.manifest_path, "pair manifest (csv/json)");
    if (needs_manifest) m->required();
    auto* r = cmd->add_option("--raw-scores", opts.raw_scores_path, "raw subjective ratings csv");
    if (needs_scores) r->required();
    cmd->add_option("--config", opts.config_path, "key=value config file");
    cmd->add_option("--out-dir", opts.out_dir, "output directory");
    cmd->add_option("--metrics", opts.metrics_spec, "tier1 | tier2 | all | name,name,...");
    cmd->add_option("--jobs", opts.jobs, "worker threads");
    cmd->add_flag("--no-cache", opts.no_cache, "disable the score cache");
  };

  auto* score = app.add_subcommand("score", "score all manifest pairs");
  add_common(score, true, false);
  auto* bench = app.add_subcommand("bench", "metric-vs-MOS benchmark report");
  add_common(bench, true, false);
  auto* mos_cmd = app.add_subcommand("mos", "screening + MOS from raw ratings");
  add_common(mos_cmd, false, true);
  auto* desc = app.add_subcommand("descriptors", "SI/CF per reference content");
  add_common(desc, true, false);
  auto* fit = app.add_subcommand("fit", "logistic fit of an x,y csv");
  fit->add_option("--data", fit_data, "csv with x,y columns")->required();
  fit->add_option("--out-dir", opts.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) return cmd_score(opts);
    if (bench->parsed()) return cmd_bench(opts);
    if (mos_cmd->parsed()) return cmd_mos(opts);
    if (desc->parsed()) return cmd_descriptors(opts);
    if (fit->parsed()) return cmd_fit(fit_data, opts.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
