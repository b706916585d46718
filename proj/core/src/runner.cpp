#include "ifa/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <limits>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "ifa/norms.hpp"

namespace fs = std::filesystem;

namespace ifa {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  std::uint64_t h = seed;
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::string format_value(const MetricScore& s) {
  if (s.unbounded_perfect) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", s.value);
  return buf;
}

struct CacheEntry {
  double value = 0.0;
  bool unbounded = false;
  std::string note;
};

std::string cache_key(std::uint64_t pair_hash, const std::string& metric_name,
                      std::uint64_t const_hash) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%016llx-%s-%016llx",
                static_cast<unsigned long long>(pair_hash), metric_name.c_str(),
                static_cast<unsigned long long>(const_hash));
  return buf;
}

bool cache_read(const std::string& dir, const std::string& key, CacheEntry* out) {
  std::ifstream in(dir + "/" + key);
  if (!in) return false;
  std::string value_str;
  int unbounded = 0;
  if (!(in >> value_str >> unbounded)) return false;
  std::getline(in, out->note);
  std::getline(in, out->note);
  out->unbounded = unbounded != 0;
  out->value = value_str == "inf" ? std::numeric_limits<double>::infinity()
                                  : std::strtod(value_str.c_str(), nullptr);
  return true;
}

void cache_write(const std::string& dir, const std::string& key,
                 const CacheEntry& e) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string tmp = dir + "/" + key + ".tmp." +
                          std::to_string(static_cast<unsigned long>(::getpid())) +
                          "." + std::to_string(std::hash<std::thread::id>{}(
                                    std::this_thread::get_id()));
  {
    std::ofstream out(tmp);
    if (!out) return;  // cache is best-effort
    char buf[64];
    if (e.unbounded) {
      out << "inf";
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", e.value);
      out << buf;
    }
    out << " " << (e.unbounded ? 1 : 0) << "\n" << e.note << "\n";
  }
  fs::rename(tmp, dir + "/" + key, ec);  // atomic publish
  if (ec) fs::remove(tmp, ec);
}

}  // namespace

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
    if (!in) break;
  }
  return h;
}

BatchResult score_manifest(const Manifest& manifest, const RunConfig& cfg) {
  cfg.validate();
  const std::string cache_dir = effective_cache_dir(cfg);
  const std::uint64_t const_hash = cfg.constants.hash();

  struct Slot {
    std::vector<MetricScore> scores;
    std::string error;
  };
  std::vector<Slot> slots(manifest.pairs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= manifest.pairs.size()) return;
      const StimulusPair& pair = manifest.pairs[i];
      Slot& slot = slots[i];
      try {
        const std::string ref_path = resolve_path(manifest, pair.ref_path);
        const std::string test_path = resolve_path(manifest, pair.test_path);
        std::uint64_t pair_hash = 0;
        if (cfg.use_cache) {
          pair_hash = hash_file(ref_path) * 31 + hash_file(test_path);
          if (cfg.l0_count_samples) pair_hash = fnv1a("l0s", 3, pair_hash);
        }

        std::set<Metric> missing;
        if (cfg.use_cache) {
          for (Metric m : cfg.metrics) {
            CacheEntry e;
            if (cache_read(cache_dir, cache_key(pair_hash, metric_info(m).name, const_hash), &e)) {
              MetricScore s;
              s.metric = m;
              s.value = e.value;
              s.unbounded_perfect = e.unbounded;
              s.note = e.note;
              s.pair_id = pair.stimulus_id;
              slot.scores.push_back(std::move(s));
            } else {
              missing.insert(m);
            }
          }
        } else {
          missing = cfg.metrics;
        }

        if (!missing.empty()) {
          const Image ref = load_image(ref_path);
          const Image test = load_image(test_path);
          auto fresh = score_all(ref, test, missing, cfg.constants, pair.stimulus_id);
          for (auto& s : fresh) {
            if (s.ok() && s.metric == Metric::kL0 && cfg.l0_count_samples) {
              s.value = static_cast<double>(l0_norm(ref, test, true));
            }
            if (cfg.use_cache && s.ok()) {
              CacheEntry e;
              e.value = s.value;
              e.unbounded = s.unbounded_perfect;
              e.note = s.note;
              cache_write(cache_dir, cache_key(pair_hash, metric_info(s.metric).name, const_hash), e);
            }
            slot.scores.push_back(std::move(s));
          }
        }
      } catch (const std::exception& e) {
        slot.scores.clear();
        slot.error = e.what();
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(manifest.pairs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // deterministic aggregation: stimulus_id order, then metric table order
  std::vector<std::size_t> order(manifest.pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return manifest.pairs[a].stimulus_id < manifest.pairs[b].stimulus_id;
  });

  std::map<Metric, int> metric_rank;
  {
    int r = 0;
    for (const auto& info : all_metrics()) metric_rank[info.id] = r++;
  }

  BatchResult out;
  for (std::size_t i : order) {
    Slot& slot = slots[i];
    if (!slot.error.empty()) {
      out.errors.push_back({manifest.pairs[i].stimulus_id, slot.error});
      continue;
    }
    std::sort(slot.scores.begin(), slot.scores.end(),
              [&](const MetricScore& a, const MetricScore& b) {
                return metric_rank[a.metric] < metric_rank[b.metric];
              });
    for (auto& s : slot.scores) {
      if (!s.ok()) {
        out.errors.push_back({s.pair_id, metric_info(s.metric).name +
                                             std::string(": ") + s.error});
      }
      out.scores.push_back(std::move(s));
    }
  }
  return out;
}

std::string score_table_csv(const BatchResult& batch) {
  std::ostringstream out;
  out << "stimulus_id,metric,value\n";
  for (const auto& s : batch.scores) {
    if (!s.ok()) continue;
    out << s.pair_id << "," << metric_info(s.metric).name << ","
        << format_value(s) << "\n";
  }
  return out.str();
}

}  // namespace ifa
