#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "taser/event_log.hpp"
#include "taser/types.hpp"

namespace taser {

enum class GroundTruth : std::uint8_t { Honest = 0, Sybil = 1 };

struct ConfusionCounts {
  std::int64_t tp = 0;  // Malicious verdict on a Sybil identity
  std::int64_t fp = 0;  // Malicious verdict on an honest identity
  std::int64_t tn = 0;
  std::int64_t fn = 0;
  std::int64_t total() const { return tp + fp + tn + fn; }
};

struct DerivedScores {
  std::optional<double> accuracy;
  std::optional<double> f1;
  std::optional<double> specificity;
};

// Positive class = Sybil; a prediction counts as positive only on a final
// Malicious verdict. Suspect/Unknown/Honest all count as negative.
inline ConfusionCounts confusion(const std::map<Pseudonym, GroundTruth>& ground_truth,
                                 const std::map<Pseudonym, Category>& verdicts) {
  ConfusionCounts c;
  for (const auto& [id, verdict] : verdicts) {
    auto it = ground_truth.find(id);
    if (it == ground_truth.end())
      throw std::invalid_argument("confusion: identity without ground-truth label: " +
                                  std::to_string(id));
    const bool predicted_sybil = verdict == Category::Malicious;
    const bool is_sybil = it->second == GroundTruth::Sybil;
    if (predicted_sybil && is_sybil) ++c.tp;
    else if (predicted_sybil && !is_sybil) ++c.fp;
    else if (!predicted_sybil && !is_sybil) ++c.tn;
    else ++c.fn;
  }
  return c;
}

// Scores with zero denominators are absent, never reported as 0.
inline DerivedScores derive_scores(const ConfusionCounts& c) {
  DerivedScores s;
  if (c.total() > 0)
    s.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (2 * c.tp + c.fp + c.fn > 0)
    s.f1 = static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
  if (c.tn + c.fp > 0) s.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return s;
}

struct DetectionTimeStats {
  std::vector<double> malicious_epochs;  // final_classified_at - first_seen per pair
  std::vector<double> honest_resolution_epochs;
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> max;

  void finalize() {
    if (malicious_epochs.empty()) return;
    std::sort(malicious_epochs.begin(), malicious_epochs.end());
    double sum = 0.0;
    for (double v : malicious_epochs) sum += v;
    mean = sum / static_cast<double>(malicious_epochs.size());
    const std::size_t n = malicious_epochs.size();
    median = n % 2 == 1 ? malicious_epochs[n / 2]
                        : 0.5 * (malicious_epochs[n / 2 - 1] + malicious_epochs[n / 2]);
    max = malicious_epochs.back();
  }
};

// Everything a single run reports.
struct RunMetrics {
  std::uint64_t seed = 0;
  double sybil_fraction = 0.0;
  double lambda = 0.0;
  ConfusionCounts counts;
  DerivedScores scores;
  DetectionTimeStats detection;
  std::optional<double> fp_rate;  // fp / (fp + tn)

  // Ground truth and verdicts, kept for audits and tests.
  std::map<Pseudonym, GroundTruth> ground_truth;
  std::map<Pseudonym, Category> verdicts;
  // Epochs during which each ghost identity was heard by at least one observer.
  std::map<Pseudonym, Epoch> ghost_exposure_epochs;
};

// Scans a full event log (with bsm rows) and recomputes per-pair detection
// times: first bsm delivery vs the classification row. Used to cross-check
// the engine-side bookkeeping.
inline DetectionTimeStats detection_time_stats(const EventLog& log) {
  std::map<std::pair<std::int64_t, std::int64_t>, Epoch> first_seen;
  DetectionTimeStats stats;
  for (const EventRecord& r : log.records()) {
    const auto key = std::make_pair(r.observer, r.subject);
    if (r.kind == EventKind::Bsm) {
      first_seen.emplace(key, r.epoch);  // keeps the earliest delivery
    } else if (r.kind == EventKind::ConfirmedMalicious) {
      auto it = first_seen.find(key);
      if (it != first_seen.end())
        stats.malicious_epochs.push_back(static_cast<double>(r.epoch - it->second));
    } else if (r.kind == EventKind::VerifiedHonest) {
      auto it = first_seen.find(key);
      if (it != first_seen.end())
        stats.honest_resolution_epochs.push_back(static_cast<double>(r.epoch - it->second));
    }
  }
  stats.finalize();
  return stats;
}

namespace detail {

inline void append_opt(std::string& out, const std::optional<double>& v) {
  if (v) append_double(out, *v);
}

}  // namespace detail

inline std::string metrics_csv_header() {
  return "seed,sybil_fraction,lambda,accuracy,f1,specificity,mean_detection_epochs,fp_rate\n";
}

inline std::string metrics_csv_row(const RunMetrics& m) {
  std::string out;
  detail::append_u64(out, m.seed);
  out += ',';
  detail::append_double(out, m.sybil_fraction);
  out += ',';
  detail::append_double(out, m.lambda);
  out += ',';
  detail::append_opt(out, m.scores.accuracy);
  out += ',';
  detail::append_opt(out, m.scores.f1);
  out += ',';
  detail::append_opt(out, m.scores.specificity);
  out += ',';
  detail::append_opt(out, m.detection.mean);
  out += ',';
  detail::append_opt(out, m.fp_rate);
  out += '\n';
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

// Writes metrics.csv (one data row) and events.csv under out_dir.
inline void emit_csv(const RunMetrics& metrics, const EventLog& log, const std::string& out_dir) {
  write_file(out_dir + "/metrics.csv", metrics_csv_header() + metrics_csv_row(metrics));
  write_file(out_dir + "/events.csv", log.to_csv());
}

}  // namespace taser
