#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ecs/oracle/regression.hpp"
#include "ecs/sweep.hpp"
#include "json_config.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

using ecs::ValidationError;

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ':') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

double number(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) {
    throw ValidationError("cannot parse " + what + " value '" + s + "'");
  }
  return v;
}

std::vector<double> number_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split(s)) out.push_back(number(part, what));
  return out;
}

ecs::Range parse_range(const std::string& s, const std::string& what) {
  const auto v = number_list(s, what);
  if (v.size() == 1) return ecs::Range::single(v[0]);
  if (v.size() != 3) throw ValidationError(what + " range needs min:max:step");
  return {v[0], v[1], v[2]};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file '" + path + "'");
  f << text;
}

void report_error(const char* type, const std::string& message) {
  nlohmann::ordered_json e = {{"error", {{"type", type}, {"message", message}}}};
  std::cerr << e.dump() << '\n';
}

struct Common {
  std::string kind = "L";
  std::string alpha;
  std::string alpha_range;
  std::string phi;
  std::string phi_range;
  std::string eta = "1";
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 20240601;
  int restarts = 12;
  double resolution = 0.05;
  bool serial = false;
};

ecs::Range alpha_of(const Common& c, double fallback) {
  if (!c.alpha_range.empty()) return parse_range(c.alpha_range, "alpha");
  if (!c.alpha.empty()) return ecs::Range::single(number(c.alpha, "alpha"));
  return ecs::Range::single(fallback);
}

ecs::Range phi_of(const Common& c, double fallback) {
  if (!c.phi_range.empty()) return parse_range(c.phi_range, "phi");
  if (!c.phi.empty()) return ecs::Range::single(number(c.phi, "phi"));
  return ecs::Range::single(fallback);
}

std::vector<double> eta_of(const Common& c) {
  const auto v = number_list(c.eta, "eta");
  if (v.empty()) throw ValidationError("eta list is empty");
  for (double e : v) ecs::Efficiency{e};
  return v;
}

int run_sweep_cmd(const Common& c) {
  ecs::SweepSpec spec;
  spec.kind = ecs::parse_kind(c.kind);
  spec.alpha_range = alpha_of(c, 60.0);
  spec.phi_range = phi_of(c, 0.25);
  spec.eta_list = eta_of(c);
  spec.format = ecs::parse_format(c.format);
  spec.output_path = c.out;
  spec.seed = c.seed;
  spec.restarts = c.restarts;
  spec.validate();
  const auto rows = ecs::run_sweep(
      spec, c.serial ? ecs::ExecutionPolicy::Serial : ecs::ExecutionPolicy::Parallel);
  std::ostringstream os;
  ecs::write_rows(os, rows, spec.format, {"sweep", spec.kind, spec.seed, {}});
  emit(spec.output_path, os.str());
  return 0;
}

int run_threshold_cmd(const Common& c) {
  const auto kind = ecs::parse_kind(c.kind);
  const double phi = c.phi.empty() ? 0.25 : number(c.phi, "phi");
  const auto etas = eta_of(c);
  const auto format = ecs::parse_format(c.format);
  ecs::ThresholdOptions opt;
  if (!c.alpha_range.empty()) {
    const auto v = number_list(c.alpha_range, "alpha");
    if (v.size() < 2) throw ValidationError("threshold alpha range needs min:max");
    opt.alpha_min = v[0];
    opt.alpha_max = v[1];
  }
  std::vector<ecs::ThresholdResult> res;
  for (double e : etas) res.push_back(ecs::find_threshold(kind, phi, e, c.resolution, opt));

  std::ostringstream os;
  if (format == ecs::OutputFormat::Csv) {
    os << "kind,phi,eta,alpha_star,bracket_width,crossed,monotone\n";
    for (const auto& r : res) {
      os << c.kind << ',' << ecs::format_number(phi) << ',' << ecs::format_number(r.eta) << ','
         << (r.crossed ? ecs::format_number(r.alpha_star) : std::string("nan")) << ','
         << ecs::format_number(r.bracket_width) << ',' << (r.crossed ? "true" : "false") << ','
         << (r.monotone ? "true" : "false") << '\n';
    }
  } else {
    ecs::RunMetadata meta{"threshold", kind, c.seed, {}};
    meta.extra = {{"resolution", c.resolution},
                  {"alpha_interval", {opt.alpha_min, opt.alpha_max}}};
    nlohmann::ordered_json doc;
    doc["metadata"] = ecs::metadata_json(meta);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : res) {
      arr.push_back({{"kind", c.kind},
                     {"phi", phi},
                     {"eta", r.eta},
                     {"alpha_star", r.crossed ? nlohmann::ordered_json(r.alpha_star)
                                              : nlohmann::ordered_json(nullptr)},
                     {"bracket_width", r.bracket_width},
                     {"crossed", r.crossed},
                     {"monotone", r.monotone}});
    }
    doc["rows"] = std::move(arr);
    os << doc.dump(2) << '\n';
  }
  emit(c.out, os.str());
  return 0;
}

int run_optimize_cmd(const Common& c) {
  const auto kind = ecs::parse_kind(c.kind);
  const double alpha = c.alpha.empty() ? 60.0 : number(c.alpha, "alpha");
  const auto etas = eta_of(c);
  const auto format = ecs::parse_format(c.format);
  ecs::OptimizeOptions opt;
  opt.seed = c.seed;
  opt.restarts = c.restarts;
  std::vector<ecs::SweepRow> rows;
  auto details = nlohmann::ordered_json::array();
  for (double eta : etas) {
    const auto r = ecs::optimize_settings(kind, alpha, eta, opt);
    const auto& rep = r.report;
    rows.push_back({kind, alpha, kind == ecs::InequalityKind::BELL ? 0.0 : r.best_phi, eta,
                    rep.value, rep.bound, rep.violation, ecs::settings_digest(rep.settings)});
    nlohmann::ordered_json d = {{"eta", eta},
                                {"evaluations", r.evaluations},
                                {"boundary_maximum", r.boundary_maximum}};
    if (kind == ecs::InequalityKind::BELL) {
      auto s = nlohmann::ordered_json::array();
      for (const auto& m : r.best_bell) s.push_back({m.theta, m.phi});
      d["settings_a1_a2_b1_b2"] = s;
    } else {
      d["best_phi"] = r.best_phi;
    }
    details.push_back(d);
  }
  std::ostringstream os;
  ecs::RunMetadata meta{"optimize", kind, c.seed, {}};
  meta.extra = {{"restarts", c.restarts}, {"optima", details}};
  ecs::write_rows(os, rows, format, meta);
  emit(c.out, os.str());
  return 0;
}

int run_verify_cmd(const Common& c, int pairs, bool wigner) {
  namespace o = ecs::oracle;
  const auto format = ecs::parse_format(c.format);
  o::RegressionOptions opt;
  opt.seed = c.seed;
  opt.pairs = pairs;
  opt.wigner = wigner;
  const auto rep = o::run_regression(opt);
  std::ostringstream os;
  if (format == ecs::OutputFormat::Csv) {
    os << "alpha,eta,theta_a,phi_a,theta_b,phi_b,fock_diff,wigner_diff\n";
    for (const auto& r : rep.cases) {
      const auto& s = r.input.settings;
      os << ecs::format_number(r.input.alpha) << ',' << ecs::format_number(r.input.eta) << ',' << ecs::format_number(s.a.theta) << ','
         << ecs::format_number(s.a.phi) << ',' << ecs::format_number(s.b.theta) << ',' << ecs::format_number(s.b.phi) << ','
         << ecs::format_number(r.fock_diff) << ',' << ecs::format_number(r.wigner_diff) << '\n';
    }
  } else {
    ecs::RunMetadata meta{"verify", ecs::InequalityKind::L, c.seed, {}};
    meta.extra = {{"agreement",
                   {{"fock", o::kFockAgreement},
                    {"wigner", o::kWignerAgreement},
                    {"closed_form", o::kClosedFormAgreement}}}};
    nlohmann::ordered_json doc;
    doc["metadata"] = ecs::metadata_json(meta);
    doc["summary"] = {{"cases", rep.cases.size()},
                      {"closed_form_cases", rep.closed_form.size()},
                      {"max_fock_diff", rep.max_fock_diff},
                      {"max_wigner_diff", wigner ? nlohmann::ordered_json(rep.max_wigner_diff)
                                                 : nlohmann::ordered_json(nullptr)},
                      {"max_closed_form_diff", rep.max_closed_form_diff},
                      {"passed", rep.passed()}};
    os << doc.dump(2) << '\n';
  }
  emit(c.out, os.str());
  if (!rep.passed()) {
    report_error("numerical", "oracle regression disagreement beyond tolerance");
    return kExitNumerical;
  }
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool ranges) {
  sub->add_option("--kind", c.kind, "Inequality: L, LS or BELL")
      ->check(CLI::IsMember({"L", "LS", "BELL"}));
  sub->add_option("--alpha", c.alpha, "Coherent amplitude");
  sub->add_option("--phi", c.phi, "Catalog angle (radians)");
  if (ranges) {
    sub->add_option("--alpha-range", c.alpha_range, "min:max:step");
    sub->add_option("--phi-range", c.phi_range, "min:max:step");
  }
  sub->add_option("--eta", c.eta, "Detector efficiencies, comma separated");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "Output file (default stdout)");
  sub->add_option("--seed", c.seed, "Optimizer seed");
}

std::string active_subcommand(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "sweep" || a == "threshold" || a == "optimize" || a == "verify") return a;
  }
  return {};
}

// Moves --config to the front so it may follow the subcommand.
std::vector<std::string> hoist_config(int argc, char** argv) {
  std::vector<std::string> front{argv[0]}, rest;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      front.push_back(a);
      front.push_back(argv[++i]);
    } else if (a.rfind("--config=", 0) == 0) {
      front.push_back(a);
    } else {
      rest.push_back(a);
    }
  }
  front.insert(front.end(), rest.begin(), rest.end());
  return front;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leggett and Bell-CHSH violation by entangled coherent states"};
  app.set_version_flag("--version", std::string(ecs::kToolVersion));
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>(active_subcommand(argc, argv)));
  app.set_config("--config", "", "JSON file supplying any flag; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common c;
  int pairs = 20;
  bool no_wigner = false;

  auto* sweep = app.add_subcommand("sweep", "Tabulate value, bound and violation");
  add_common(sweep, c, true);
  sweep->add_option("--restarts", c.restarts, "BELL optimizer restarts per row");
  sweep->add_flag("--serial", c.serial, "Evaluate rows on one thread");

  auto* threshold = app.add_subcommand("threshold", "Smallest alpha with a violation");
  add_common(threshold, c, true);
  threshold->add_option("--resolution", c.resolution, "Bracket width on alpha");

  auto* optimize = app.add_subcommand("optimize", "Maximise the violation over settings");
  add_common(optimize, c, false);
  optimize->add_option("--restarts", c.restarts, "BELL optimizer restarts");

  auto* verify = app.add_subcommand("verify", "Run the oracle regression set");
  verify->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  verify->add_option("--out", c.out, "Output file (default stdout)");
  verify->add_option("--seed", c.seed, "Seed for the random setting pairs");
  verify->add_option("--pairs", pairs, "Random setting pairs per amplitude");
  verify->add_flag("--no-wigner", no_wigner, "Skip the Wigner-marginal oracle");

  std::vector<std::string> args = hoist_config(argc, argv);
  std::reverse(args.begin() + 1, args.end());
  args.erase(args.begin());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("validation", e.what());
    return kExitValidation;
  }

  try {
    if (sweep->parsed()) return run_sweep_cmd(c);
    if (threshold->parsed()) return run_threshold_cmd(c);
    if (optimize->parsed()) return run_optimize_cmd(c);
    if (verify->parsed()) return run_verify_cmd(c, pairs, !no_wigner);
  } catch (const ecs::ValidationError& e) {
    report_error("validation", e.what());
    return kExitValidation;
  } catch (const ecs::NumericalError& e) {
    report_error("numerical", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    report_error("numerical", e.what());
    return kExitNumerical;
  }
  return kExitValidation;
}
