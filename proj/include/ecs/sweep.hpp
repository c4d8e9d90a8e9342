#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecs/inequalities.hpp"

namespace ecs {

inline constexpr const char* kToolVersion = "1.0.0";

struct Range {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  static Range single(double v) { return {v, v, 1.0}; }
  std::vector<double> values() const;
};

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& s);

struct SweepSpec {
  InequalityKind kind = InequalityKind::L;
  Range alpha_range = Range::single(60.0);
  Range phi_range = Range::single(0.25);
  std::vector<double> eta_list{1.0};
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 20240601;
  int restarts = 12;

  void validate() const;
};

struct SweepRow {
  InequalityKind kind;
  double alpha, phi, eta;
  double value, bound, violation;
  std::string settings_digest;
};

// One row per (alpha, phi, eta), alpha outermost. BELL rows ignore the phi
// range: one row per (alpha, eta) with phi reported as 0 and settings
// optimised from the sweep seed.
std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                ExecutionPolicy policy = ExecutionPolicy::Parallel);

// Shortest text that reads back to the same double.
std::string format_number(double v);

std::string settings_digest(const std::vector<SettingPair>& settings);

struct RunMetadata {
  std::string command;
  InequalityKind kind = InequalityKind::L;
  std::uint64_t seed = 0;
  nlohmann::ordered_json extra;  // merged into the metadata object when set
};

nlohmann::ordered_json metadata_json(const RunMetadata& meta);
nlohmann::ordered_json rows_json(const std::vector<SweepRow>& rows);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows, const RunMetadata& meta);
void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, OutputFormat fmt,
                const RunMetadata& meta);

struct ThresholdResult {
  double eta = 1.0;
  double alpha_star = 0.0;  // smallest alpha with positive violation
  double bracket_width = 0.0;
  bool crossed = false;
  bool monotone = true;  // violation changed sign exactly once on the pre-grid
};

struct ThresholdOptions {
  double alpha_min = 0.5;
  double alpha_max = 500.0;
  int pregrid = 48;
  PipelineOptions pipeline{};
};

ThresholdResult find_threshold(InequalityKind kind, double phi, double eta, double resolution,
                               const ThresholdOptions& opt = {});

}  // namespace ecs
