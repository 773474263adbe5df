// eigcouple: detect, classify and expand double eigenvalues of matrix families.
//
//   eigcouple classify --family crystal-example-1 --at 0,0
//   eigcouple surface  --family crystal-example-1 --at 0,0 --window -0.1,0.1,-0.1,0.1 --res 41 --out s.csv
//   eigcouple loop     --family crystal-example-1 --at 0,0 --loop 0,0,0.01 --out loop.csv
//   eigcouple find-ep  --family crystal-example-1 --guess 0.05,-0.03
//   eigcouple scenario --family crystal-example-1 --at 0,0 --section 0.01
//
// Exit codes: 0 ok, 1 usage/parse, 2 no degeneracy, 3 domain, 4 non-convergence.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eigcouple/crystal_optics.hpp"
#include "eigcouple/reports.hpp"
#include "json.hpp"

namespace ec = eigcouple;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNoDegeneracy = 2, kDomain = 3, kNonConvergence = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string family;
  std::vector<double> at, guess, window, loop, section, target;
  std::size_t res = 41;
  std::size_t samples = 720;
  double tol_cluster = ec::kDefaultClusterTol;
  double tol_rank = ec::kDefaultRankTol;
  std::string out;
  std::string format = "csv";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Values from the config file fill every option the command line left unset.
void merge_config(RunConfig& cfg, const std::string& path, const CLI::App& app) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ec::ParseError("$", e.what());
  }
  if (!doc.is_object()) throw ec::ParseError("$", "config must be an object");
  auto given = [&](const std::string& flag) {
    const auto* opt = app.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& k = it.key();
      const auto& v = it.value();
      const std::string flag = "--" + [&] {
        std::string s = k;
        for (auto& c : s)
          if (c == '_') c = '-';
        return s;
      }();
      if (given(flag)) continue;
      if (k == "family") cfg.family = v.get<std::string>();
      else if (k == "at") cfg.at = v.get<std::vector<double>>();
      else if (k == "guess") cfg.guess = v.get<std::vector<double>>();
      else if (k == "window") cfg.window = v.get<std::vector<double>>();
      else if (k == "loop") cfg.loop = v.get<std::vector<double>>();
      else if (k == "section") cfg.section = v.get<std::vector<double>>();
      else if (k == "target") cfg.target = v.get<std::vector<double>>();
      else if (k == "res") cfg.res = v.get<std::size_t>();
      else if (k == "samples") cfg.samples = v.get<std::size_t>();
      else if (k == "tol_cluster") cfg.tol_cluster = v.get<double>();
      else if (k == "tol_rank") cfg.tol_rank = v.get<double>();
      else if (k == "out") cfg.out = v.get<std::string>();
      else if (k == "format") cfg.format = v.get<std::string>();
      else throw ec::ParseError("$." + k, "unknown config key");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ec::ParseError("$", e.what());
  }
}

ec::MatrixFamily load_family(const std::string& src) {
  if (auto f = ec::builtin_family(src)) return *f;
  const std::string text = read_file(src);
  nlohmann::json probe;
  try {
    probe = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ec::ParseError("$", e.what());
  }
  if (probe.is_object() && probe.contains("U_re")) return ec::family_adapter(ec::parse_dielectric_spec(text));
  return ec::parse_family(text);
}

void validate(const RunConfig& cfg) {
  if (cfg.family.empty()) throw UsageError("--family is required");
  if (cfg.res < 2) throw UsageError("--res must be at least 2");
  if (!(cfg.tol_cluster > 0) || !(cfg.tol_rank > 0)) throw UsageError("tolerances must be positive");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
  if (!cfg.target.empty() && cfg.target.size() != 2) throw UsageError("--target takes re,im");
}

ec::ParameterPoint require_point(const std::vector<double>& p, const ec::MatrixFamily& fam, const char* flag) {
  if (p.empty()) throw UsageError(std::string(flag) + " is required");
  if (p.size() != fam.n_params())
    throw UsageError(std::string(flag) + " needs " + std::to_string(fam.n_params()) + " coordinates");
  if (!fam.in_domain(p)) throw ec::DomainError(std::string(flag) + " lies outside the family domain");
  return p;
}

ec::AnalysisOptions options(const RunConfig& cfg) {
  ec::AnalysisOptions o;
  o.tol_cluster = cfg.tol_cluster;
  o.tol_rank = cfg.tol_rank;
  if (cfg.target.size() == 2) o.target = ec::Complex(cfg.target[0], cfg.target[1]);
  return o;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw UsageError("cannot write " + cfg.out);
  out << text;
}

std::vector<double> section_offsets(const RunConfig& cfg, const ec::MatrixFamily& fam) {
  const std::size_t need = fam.n_params() - 1;
  if (cfg.section.empty()) return std::vector<double>(need, 0.0);
  if (cfg.section.size() != need)
    throw UsageError("--section needs " + std::to_string(need) + " offsets (parameters 2..n)");
  return cfg.section;
}

int run(const RunConfig& cfg) {
  const auto fam = load_family(cfg.family);

  if (cfg.command == "find-ep") {
    const auto& g = cfg.guess.empty() ? cfg.at : cfg.guess;
    const auto p = require_point(g, fam, "--guess");
    ec::PairSelector sel;
    if (cfg.target.size() == 2) sel.target = ec::Complex(cfg.target[0], cfg.target[1]);
    try {
      emit(cfg, ec::find_ep_report(ec::find_ep(fam, p, sel), cfg.family));
    } catch (const ec::NonConvergenceError& e) {
      std::cout << ec::find_ep_failure_report(e, cfg.family);
      std::cerr << "error: " << e.what() << '\n';
      return kNonConvergence;
    }
    return kOk;
  }

  const auto p0 = require_point(cfg.at, fam, "--at");
  const auto an = ec::analyze_anchor(fam, p0, options(cfg));

  if (cfg.command == "classify") {
    emit(cfg, ec::classify_report(an, cfg.family));
  } else if (cfg.command == "surface") {
    if (fam.n_params() != 2) throw UsageError("surface needs a two-parameter family");
    ec::Window w{p0[0] - 0.1, p0[0] + 0.1, p0[1] - 0.1, p0[1] + 0.1};
    if (cfg.window.size() == 2) w = {cfg.window[0], cfg.window[1], cfg.window[0], cfg.window[1]};
    else if (cfg.window.size() == 4) w = {cfg.window[0], cfg.window[1], cfg.window[2], cfg.window[3]};
    else if (!cfg.window.empty()) throw UsageError("--window takes min,max or p1min,p1max,p2min,p2max");
    const auto rows = ec::sample_surface(fam, an, w, cfg.res);
    if (cfg.format == "json") {
      emit(cfg, ec::surface_report(an, cfg.family, w, cfg.res, rows));
    } else {
      std::ostringstream os;
      ec::write_surface_csv(os, rows);
      emit(cfg, os.str());
    }
  } else if (cfg.command == "loop") {
    if (!an.ep) throw ec::DegeneracyError("loop requires an exceptional point at the anchor");
    if (cfg.loop.size() != 3) throw UsageError("--loop takes a,b,r");
    const ec::LoopSpec spec{cfg.loop[0], cfg.loop[1], cfg.loop[2], cfg.samples};
    const auto rep = ec::loop_trajectory(*an.ep, spec);
    std::cout << ec::loop_report(an, spec, rep);
    if (!cfg.out.empty()) {
      std::ostringstream os;
      ec::write_loop_csv(os, rep);
      emit(cfg, os.str());
    }
  } else if (cfg.command == "scenario") {
    const auto dp_fixed = section_offsets(cfg, fam);
    const std::string report = ec::scenario_report(an, cfg.family, dp_fixed);
    if (cfg.out.empty() || cfg.format == "json") {
      emit(cfg, report);
    } else {
      std::cout << report;
      double lo = p0[0] - 0.1, hi = p0[0] + 0.1;
      if (cfg.window.size() >= 2) lo = cfg.window[0], hi = cfg.window[1];
      std::ostringstream os;
      ec::write_section_csv(os, an, dp_fixed, lo, hi, cfg.res);
      emit(cfg, os.str());
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-eigenvalue analysis of parameter-dependent matrix families"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string config_path;
  app.add_option("--family", cfg.family, "builtin name (crystal-example-1|2) or JSON file");
  app.add_option("--at", cfg.at, "anchor point p1,p2,...")->delimiter(',');
  app.add_option("--guess", cfg.guess, "starting point for find-ep")->delimiter(',');
  app.add_option("--window", cfg.window, "min,max or p1min,p1max,p2min,p2max")->delimiter(',');
  app.add_option("--res", cfg.res, "grid resolution per axis (>= 2)");
  app.add_option("--samples", cfg.samples, "loop samples");
  app.add_option("--tol-cluster", cfg.tol_cluster, "relative cluster tolerance");
  app.add_option("--tol-rank", cfg.tol_rank, "relative rank tolerance");
  app.add_option("--loop", cfg.loop, "loop centre and radius a,b,r")->delimiter(',');
  app.add_option("--section", cfg.section, "fixed offsets of parameters 2..n")->delimiter(',');
  app.add_option("--target", cfg.target, "pick the cluster nearest re,im")->delimiter(',');
  app.add_option("--out", cfg.out, "output file");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--config", config_path, "JSON config; flags override it");

  for (const char* name : {"classify", "surface", "loop", "find-ep", "scenario"})
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (!config_path.empty()) merge_config(cfg, config_path, app);
    validate(cfg);
    return run(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ec::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const ec::DegeneracyError& e) {
    std::cerr << "no degeneracy: " << e.what() << '\n';
    return kNoDegeneracy;
  } catch (const ec::MultiplicityError& e) {
    std::cerr << "no double eigenvalue: " << e.what() << '\n';
    return kNoDegeneracy;
  } catch (const ec::IndeterminateError& e) {
    std::cerr << "indeterminate degeneracy: " << e.what() << '\n';
    return kNoDegeneracy;
  } catch (const ec::ClassificationError& e) {
    std::cerr << "unclassifiable degeneracy: " << e.what() << '\n';
    return kNoDegeneracy;
  } catch (const ec::FrameError& e) {
    std::cerr << "no usable frame: " << e.what() << '\n';
    return kNoDegeneracy;
  } catch (const ec::ModelError& e) {
    std::cerr << "no usable local model: " << e.what() << '\n';
    return kNoDegeneracy;
  } catch (const ec::ChartError& e) {
    std::cerr << "chart error: " << e.what() << " (reorder the parameters so that component 1 is active)\n";
    return kDomain;
  } catch (const ec::TrackingError& e) {
    std::cerr << "tracking error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const ec::DimensionError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ec::NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const ec::Error& e) {
    // DomainError, ResolutionError, BranchError, ConsistencyError
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomain;
  }
}
