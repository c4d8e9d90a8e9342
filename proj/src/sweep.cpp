#include "ecs/sweep.hpp"

#include <boost/math/tools/roots.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace ecs {

std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max) || !std::isfinite(r.step)) {
    throw ValidationError(std::string(name) + " range must be finite");
  }
  if (!(r.step > 0.0)) throw ValidationError(std::string(name) + " step must be positive");
  if (r.max < r.min) throw ValidationError(std::string(name) + " range is empty");
}

}  // namespace

std::vector<double> Range::values() const {
  const auto n = static_cast<long>(std::floor((max - min) / step + 1e-9));
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) v.push_back(min + static_cast<double>(i) * step);
  return v;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ValidationError("unknown format '" + s + "' (expected csv or json)");
}

void SweepSpec::validate() const {
  check_range(alpha_range, "alpha");
  check_range(phi_range, "phi");
  if (!(alpha_range.min > 0.0)) throw ValidationError("alpha values must be positive");
  if (eta_list.empty()) throw ValidationError("eta list is empty");
  for (double e : eta_list) Efficiency{e};
  if (restarts < 1) throw ValidationError("restarts must be at least 1");
  const std::size_t rows = alpha_range.values().size() * phi_range.values().size() *
                           eta_list.size();
  if (rows > 1'000'000) throw ValidationError("sweep exceeds 1e6 rows");
}

std::string settings_digest(const std::vector<SettingPair>& settings) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& p : settings) {
    for (const auto& m : {p.a, p.b}) {
      mix(format_number(m.theta));
      mix(",");
      mix(format_number(m.phi));
      mix(";");
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, ExecutionPolicy policy) {
  spec.validate();
  const auto alphas = spec.alpha_range.values();
  const auto phis = spec.kind == InequalityKind::BELL ? std::vector<double>{0.0}
                                                      : spec.phi_range.values();
  struct Job {
    double alpha, phi, eta;
  };
  std::vector<Job> jobs;
  for (double a : alphas)
    for (double p : phis)
      for (double e : spec.eta_list) jobs.push_back({a, p, e});

  PipelineOptions popt;
  popt.policy = ExecutionPolicy::Serial;
  std::vector<SweepRow> rows(jobs.size());
  auto run = [&](std::size_t i) {
    const Job& j = jobs[i];
    ViolationReport r;
    if (spec.kind == InequalityKind::BELL) {
      OptimizeOptions o;
      o.seed = spec.seed;
      o.restarts = spec.restarts;
      o.pipeline = popt;
      r = optimize_settings(InequalityKind::BELL, j.alpha, j.eta, o).report;
    } else {
      r = evaluate(spec.kind, j.alpha, j.phi, j.eta, popt);
    }
    rows[i] = {spec.kind, j.alpha, j.phi, j.eta, r.value, r.bound, r.violation,
               settings_digest(r.settings)};
  };

  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
  if (policy == ExecutionPolicy::Parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        run(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "kind,alpha,phi,eta,value,bound,violation,settings_digest\n";
  for (const auto& r : rows) {
    os << to_string(r.kind) << ',' << format_number(r.alpha) << ',' << format_number(r.phi) << ',' << format_number(r.eta)
       << ',' << format_number(r.value) << ',' << format_number(r.bound) << ',' << format_number(r.violation) << ','
       << r.settings_digest << '\n';
  }
}

nlohmann::ordered_json metadata_json(const RunMetadata& meta) {
  nlohmann::ordered_json m = {
      {"tool", "ecs"},
      {"tool_version", kToolVersion},
      {"command", meta.command},
      {"kind", to_string(meta.kind)},
      {"seed", meta.seed},
      {"tolerances",
       {{"prune", kDefaultPruneTol},
        {"label_merge", kLabelMergeTol},
        {"trace", kTraceTolerance}}},
  };
  if (meta.extra.is_object()) {
    for (const auto& [k, v] : meta.extra.items()) m[k] = v;
  }
  return m;
}

nlohmann::ordered_json rows_json(const std::vector<SweepRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"kind", to_string(r.kind)},
                   {"alpha", r.alpha},
                   {"phi", r.phi},
                   {"eta", r.eta},
                   {"value", r.value},
                   {"bound", r.bound},
                   {"violation", r.violation},
                   {"settings_digest", r.settings_digest}});
  }
  return arr;
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows, const RunMetadata& meta) {
  nlohmann::ordered_json doc;
  doc["metadata"] = metadata_json(meta);
  doc["rows"] = rows_json(rows);
  os << doc.dump(2) << '\n';
}

void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, OutputFormat f,
                const RunMetadata& meta) {
  if (f == OutputFormat::Json) {
    write_json(os, rows, meta);
  } else {
    write_csv(os, rows);
  }
}

ThresholdResult find_threshold(InequalityKind kind, double phi, double eta, double resolution,
                               const ThresholdOptions& opt) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw ValidationError("resolution must be positive");
  }
  if (kind == InequalityKind::BELL) {
    throw ValidationError("threshold search supports L and LS only");
  }
  if (!(opt.alpha_min > 0.0) || !(opt.alpha_max > opt.alpha_min) || opt.pregrid < 2) {
    throw ValidationError("invalid threshold search interval");
  }
  Efficiency{eta};
  auto violation = [&](double a) { return evaluate(kind, a, phi, eta, opt.pipeline).violation; };

  const double lr = std::log(opt.alpha_max / opt.alpha_min);
  std::vector<double> grid(static_cast<std::size_t>(opt.pregrid));
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = opt.alpha_min * std::exp(lr * double(i) / double(grid.size() - 1));
  }
  grid.back() = opt.alpha_max;
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = violation(grid[i]);

  ThresholdResult out;
  out.eta = eta;
  int changes = 0;
  for (std::size_t i = 1; i < vals.size(); ++i) changes += (vals[i] > 0.0) != (vals[i - 1] > 0.0);
  out.monotone = changes <= 1;

  std::size_t first = vals.size();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] > 0.0) {
      first = i;
      break;
    }
  }
  if (first == vals.size()) {
    out.crossed = false;
    out.alpha_star = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.crossed = true;
  if (first == 0) {
    out.alpha_star = grid[0];
    return out;
  }
  auto width_ok = [&](double lo, double hi) { return hi - lo <= resolution; };
  auto [lo, hi] = boost::math::tools::bisect(violation, grid[first - 1], grid[first], width_ok);
  out.alpha_star = hi;
  out.bracket_width = hi - lo;
  return out;
}

}  // namespace ecs
