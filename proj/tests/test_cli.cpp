#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifa/csv.hpp"
#include "ifa/image.hpp"
#include "support.hpp"

namespace ts = test_support;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

RunResult run_cli(const std::string& args, const ts::TempDir& dir) {
  const std::string out_file = dir.path("cli_stdout.txt");
  const std::string err_file = dir.path("cli_stderr.txt");
  const std::string cmd = std::string(FIDBENCH_CLI_PATH) + " " + args + " > " +
                          out_file + " 2> " + err_file;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// 2 contents x 4 noise levels, MOS decreasing with noise.
std::string make_fixture(const ts::TempDir& dir) {
  auto gen = ts::rng(401);
  std::string manifest =
      "stimulus_id,ref_path,test_path,attack,param_name,param_value,mos,ci95\n";
  const double sigmas[4] = {2.0, 6.0, 15.0, 35.0};
  const double moses[4] = {4.6, 3.9, 2.8, 1.5};
  for (int c = 0; c < 2; ++c) {
    const ifa::Image ref = ts::synthetic_content(64, 64, c);
    const std::string ref_name = "ref" + std::to_string(c) + ".png";
    ifa::save_png(ref, dir.path(ref_name));
    for (int k = 0; k < 4; ++k) {
      const std::string test_name =
          "test" + std::to_string(c) + "_" + std::to_string(k) + ".png";
      ifa::save_png(ts::noisy_image(ref, sigmas[k], gen), dir.path(test_name));
      manifest += "c" + std::to_string(c) + "n" + std::to_string(k) + "," +
                  ref_name + "," + test_name + ",FGSM,epsilon," +
                  std::to_string(0.001 * sigmas[k]) + "," +
                  std::to_string(moses[k] + 0.05 * c) + ",0.3\n";
    }
  }
  const std::string path = dir.path("manifest.csv");
  write_text(path, manifest);
  return path;
}

}  // namespace

TEST_CASE("score subcommand") {
  ts::TempDir dir("cli_score");
  const std::string manifest = make_fixture(dir);
  const std::string out1 = dir.path("out1");
  const auto r = run_cli("score --manifest " + manifest + " --out-dir " + out1 +
                             " --metrics psnr,ssim,l2 --jobs 2",
                         dir);
  CHECK(r.exit_code == 0);
  const auto table = ifa::parse_csv(slurp(out1 + "/scores.csv"));
  CHECK(table.rows.size() == 8 * 3);
  CHECK(fs::exists(out1 + "/resolved_config.txt"));

  SUBCASE("rerun is byte-identical") {
    const std::string out2 = dir.path("out2");
    const auto r2 = run_cli("score --manifest " + manifest + " --out-dir " +
                                out2 + " --metrics psnr,ssim,l2 --jobs 4",
                            dir);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(out1 + "/scores.csv") == slurp(out2 + "/scores.csv"));
  }
  SUBCASE("bad metric name fails fast") {
    const auto bad = run_cli("score --manifest " + manifest +
                                 " --out-dir " + dir.path("out3") +
                                 " --metrics psnr,nosuch",
                             dir);
    CHECK(bad.exit_code != 0);
    CHECK(bad.err.find("nosuch") != std::string::npos);
  }
}

TEST_CASE("bench subcommand") {
  ts::TempDir dir("cli_bench");
  const std::string manifest = make_fixture(dir);
  const std::string out = dir.path("bench_out");
  const auto r = run_cli("bench --manifest " + manifest + " --out-dir " + out +
                             " --metrics psnr,ssim,l2 --no-cache",
                         dir);
  CHECK(r.exit_code == 0);
  const auto report = ifa::parse_csv(slurp(out + "/report.csv"));
  REQUIRE(report.rows.size() == 3);
  REQUIRE(report.header[1] == "plcc");
  // noise level drives both MOS and metrics, so correlations are strong
  for (const auto& row : report.rows) {
    const double p = std::stod(row[1]);
    CHECK(p > 0.8);
    CHECK(p <= 1.0);
  }
  CHECK(fs::exists(out + "/report.json"));
  CHECK(fs::exists(out + "/scatter_PSNR.csv"));
  CHECK(fs::exists(out + "/mos_histogram.csv"));

  SUBCASE("missing ground truth is an actionable error") {
    std::string stripped =
        "stimulus_id,ref_path,test_path,attack,param_name,param_value,mos,ci95\n";
    const auto src = ifa::parse_csv(slurp(manifest));
    for (const auto& row : src.rows) {
      stripped += row[0] + "," + row[1] + "," + row[2] + "," + row[3] + "," +
                  row[4] + "," + row[5] + ",,\n";
    }
    const std::string nomos = dir.path("nomos.csv");
    write_text(nomos, stripped);
    const auto bad = run_cli("bench --manifest " + nomos + " --out-dir " +
                                 dir.path("bench_bad") + " --metrics psnr",
                             dir);
    CHECK(bad.exit_code != 0);
    CHECK(bad.err.find("--raw-scores") != std::string::npos);
  }
}

TEST_CASE("mos subcommand") {
  ts::TempDir dir("cli_mos");
  const std::string raw = dir.path("raw.csv");
  write_text(raw,
             "stimulus_id,subject_1,subject_2,subject_3\n"
             "a,5,5,4\n"
             "b,1,2,3\n");
  const std::string out = dir.path("mos_out");
  const auto r = run_cli("mos --raw-scores " + raw + " --out-dir " + out, dir);
  CHECK(r.exit_code == 0);
  const auto table = ifa::parse_csv(slurp(out + "/mos.csv"));
  REQUIRE(table.rows.size() == 2);
  CHECK(std::stod(table.rows[0][1]) == doctest::Approx(4.6667).epsilon(1e-4));
  CHECK(slurp(out + "/screening.txt").find("rejected: 0") != std::string::npos);
  CHECK(fs::exists(out + "/mos_histogram.csv"));
}

TEST_CASE("descriptors subcommand") {
  ts::TempDir dir("cli_desc");
  const std::string manifest = make_fixture(dir);
  const std::string out = dir.path("desc_out");
  const auto r = run_cli("descriptors --manifest " + manifest + " --out-dir " + out, dir);
  CHECK(r.exit_code == 0);
  const auto table = ifa::parse_csv(slurp(out + "/descriptors.csv"));
  CHECK(table.rows.size() == 2);  // unique reference contents, not pairs
  for (const auto& row : table.rows) {
    CHECK(std::stod(row[1]) > 0.0);  // structured content has texture
    CHECK(row[3] == "1");
  }
}

TEST_CASE("fit subcommand") {
  ts::TempDir dir("cli_fit");
  std::string data = "x,y\n";
  for (int i = 0; i < 20; ++i) {
    const double x = 0.5 * i;
    data += std::to_string(x) + "," + std::to_string(2.0 * x + 1.0) + "\n";
  }
  const std::string path = dir.path("data.csv");
  write_text(path, data);
  const auto r = run_cli("fit --data " + path, dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("residual_rmse") != std::string::npos);
  CHECK(r.out.find("beta") != std::string::npos);
}

TEST_CASE("invalid invocations") {
  ts::TempDir dir("cli_bad");
  CHECK(run_cli("", dir).exit_code != 0);            // subcommand required
  CHECK(run_cli("score", dir).exit_code != 0);       // manifest required
  CHECK(run_cli("mos", dir).exit_code != 0);         // raw scores required
  const auto r = run_cli("score --manifest " + dir.path("none.csv") +
                             " --out-dir " + dir.path("o"),
                         dir);
  CHECK(r.exit_code != 0);
}
