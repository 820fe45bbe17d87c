// Command-line front end: builds a type system for a surface-group family,
// runs the spectral-radius estimator, and optionally cross-checks the result
// against the geometric walk and the generating-function baseline.

#include <CLI11.hpp>

#include <conewalk/conewalk.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace conewalk;

// distinct exit codes per error class
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitValidation = 5;
constexpr int kExitOther = 1;

struct RunConfig {
  std::int64_t genus = 2;
  std::string family = "cannon"; // cannon | modified | suffix | essential
  std::vector<double> weights;
  double threshold = 0.0;
  std::int64_t max_length = 0;
  double tolerance = 1e-14;
  std::int64_t memory_budget = std::int64_t{12} * 1024 * 1024 * 1024;
  std::int64_t max_words = std::int64_t{1} << 31;
  std::string output = "text"; // text | json | csv
  bool verify_geometric_flag = false;
  bool baseline = false;
  std::string dump_matrix_path;
  std::string dump_words_path;
  std::string trace_path;
};

Json config_json(const RunConfig& c) {
  Json j;
  j["family"] = c.family;
  j["genus"] = c.genus;
  j["weights"] = c.weights;
  j["threshold"] = c.threshold;
  j["max_length"] = c.max_length;
  j["tolerance"] = c.tolerance;
  j["memory_budget"] = c.memory_budget;
  j["max_words"] = c.max_words;
  j["verify_geometric"] = c.verify_geometric_flag;
  j["baseline"] = c.baseline;
  return j;
}

struct BuiltFamily {
  TypeSystem system;
  GrowthData growth;
  WordList words;
  bool has_words = false;
  std::vector<std::string> letter_labels; // for word dumps
};

TruncationRule suffix_rule(const RunConfig& c) {
  TruncationRule rule;
  if (!c.weights.empty()) {
    if (static_cast<std::int64_t>(c.weights.size()) != 2 * c.genus)
      throw ConfigError("suffix weights must have 2g entries");
    if (c.threshold <= 0) throw ConfigError("threshold must be positive");
    rule.weights = c.weights;
    rule.threshold = c.threshold;
    rule.max_length = c.max_length > 0 ? c.max_length : 10000;
  } else {
    if (c.max_length < 1) throw ConfigError("pure length truncation needs --max-length >= 1");
    rule.threshold = 1.0; // unreachable with zero weights
    rule.max_length = c.max_length;
  }
  return rule;
}

EssentialRule essential_rule(const RunConfig& c) {
  EssentialRule rule;
  if (!c.weights.empty()) {
    if (static_cast<std::int64_t>(c.weights.size()) != 2 * c.genus + 3)
      throw ConfigError("essential weights must have 2g+3 entries");
    if (c.threshold <= 0) throw ConfigError("threshold must be positive");
    rule.weights = c.weights;
    rule.threshold = c.threshold;
    rule.max_length = c.max_length > 0 ? c.max_length : 10000;
  } else {
    if (c.max_length < 1) throw ConfigError("pure length truncation needs --max-length >= 1");
    rule.threshold = 1.0;
    rule.max_length = c.max_length;
  }
  return rule;
}

BuiltFamily build_family(const RunConfig& c) {
  EnumerationLimits limits;
  limits.max_words = c.max_words;
  limits.memory_budget_bytes = c.memory_budget;
  const double growth_tol = std::max(c.tolerance, kGrowthTolDefault);

  BuiltFamily out;
  if (c.family == "cannon" || c.family == "modified") {
    out.system = c.family == "cannon" ? cannon_matrix(c.genus) : modified_cannon_matrix(c.genus);
    validate(out.system);
    out.growth = growth_and_eigenvector(out.system, growth_tol);
    out.letter_labels = out.system.labels;
  } else if (c.family == "suffix") {
    const TypeSystem base = cannon_matrix(c.genus);
    const TruncationRule rule = suffix_rule(c);
    out.words = enumerate_types(base, rule, limits);
    out.system = transition_matrix(out.words, base, rule, limits);
    validate(out.system);
    const GrowthData base_gd = growth_and_eigenvector(base, growth_tol);
    out.growth = closed_form_A(out.words, base, base_gd, out.system);
    out.has_words = true;
    out.letter_labels = base.labels;
  } else if (c.family == "essential") {
    const EssentialRule rule = essential_rule(c);
    out.words = enumerate_essential(c.genus, rule, limits);
    out.system = essential_transition_matrix(out.words, c.genus, rule, limits);
    validate(out.system);
    const TypeSystem modified = modified_cannon_matrix(c.genus);
    const GrowthData mod_gd = growth_and_eigenvector(modified, growth_tol);
    out.growth = essential_A(out.words, c.genus, mod_gd, out.system);
    out.has_words = true;
    out.letter_labels = SurfaceAlphabet{c.genus, SurfaceKind::modified}.labels();
    out.letter_labels.push_back("*");
  } else {
    throw ConfigError("unknown family '" + c.family + "'");
  }
  return out;
}

void write_text_or_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
}

void dump_words(const BuiltFamily& fam, const std::string& path) {
  std::ostringstream os;
  for (std::int64_t i = 0; i < fam.words.count(); ++i) {
    const auto w = fam.words.word(i);
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) os << ',';
      os << fam.letter_labels[w[k]];
    }
    os << '\n';
  }
  write_text_or_file(path, os.str());
}

std::string format_report_text(const RunConfig& c, const EstimateReport& r) {
  char buf[512];
  std::ostringstream os;
  os << "family            " << c.family << "\n";
  os << "genus             " << c.genus << "\n";
  os << "matrix size       " << r.matrix_size << "\n";
  std::snprintf(buf, sizeof buf, "growth            %.15g\n", r.growth);
  os << buf;
  std::snprintf(buf, sizeof buf, "lambda            %.15g\n", r.lambda);
  os << buf;
  std::snprintf(buf, sizeof buf, "bound             %.12f\n", r.bound);
  os << buf;
  os << "iterations        " << r.power_iterations << "\n";
  std::snprintf(buf, sizeof buf, "tolerance         %.3g\n", r.tolerance_used);
  os << buf;
  std::snprintf(buf, sizeof buf, "elapsed           %.3f s\n", r.elapsed_seconds);
  os << buf;
  os << "converged         " << (r.lambda_converged ? "yes" : "no") << "\n";
  return os.str();
}

int run_estimate(const RunConfig& c, bool verify_mode) {
  BuiltFamily fam = build_family(c);

  TraceSink trace;
  std::ofstream trace_file;
  if (!c.trace_path.empty()) {
    trace_file.open(c.trace_path);
    if (!trace_file) throw Error("cannot open " + c.trace_path + " for writing");
    trace_file << "iteration,norm\n";
    trace = [&trace_file](std::int64_t it, double norm) {
      trace_file << it << ',';
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", norm);
      trace_file << buf << '\n';
    };
  }

  const EstimateReport report = estimate(fam.system, &fam.growth, c.tolerance, trace);

  std::optional<GeometricVerification> verification;
  if (c.verify_geometric_flag || verify_mode)
    verification = verify_geometric(fam.system, fam.growth, report);

  std::optional<BartholdiResult> base_bound;
  if (c.baseline) base_bound = bartholdi_lower(c.genus);

  if (!c.dump_matrix_path.empty())
    write_text_or_file(c.dump_matrix_path, to_json(fam.system).dump(2) + "\n");
  if (!c.dump_words_path.empty()) {
    if (!fam.has_words) throw ConfigError("--dump-words requires the suffix or essential family");
    dump_words(fam, c.dump_words_path);
  }

  if (c.output == "json") {
    Json j;
    j["version"] = CONEWALK_VERSION;
    j["config"] = config_json(c);
    j["report"] = to_json(report);
    if (verification) j["verification"] = to_json(*verification);
    if (base_bound) {
      Json b;
      b["zeta"] = base_bound->zeta.str(20);
      b["bound"] = base_bound->bound.str(20);
      b["precision_bits"] = base_bound->precision_bits;
      j["baseline"] = std::move(b);
    }
    std::cout << j.dump(2) << "\n";
  } else if (c.output == "csv") {
    std::cout << "family,genus,matrix_size,growth,lambda,bound,iterations,tolerance,converged\n";
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%.17g,%.17g,%.17g,%lld,%.3g,%d\n",
                  c.family.c_str(), static_cast<long long>(c.genus),
                  static_cast<long long>(report.matrix_size), report.growth, report.lambda,
                  report.bound, static_cast<long long>(report.power_iterations),
                  report.tolerance_used, report.lambda_converged ? 1 : 0);
    std::cout << buf;
  } else {
    std::cout << format_report_text(c, report);
    if (verification) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "phi(-v/2)         %.12f\n", verification->phi_min);
      std::cout << buf;
      std::snprintf(buf, sizeof buf,
                    "geometric check   bound %s  symmetry %s  convexity %s\n",
                    verification->bound_ok ? "ok" : "FAIL",
                    verification->symmetry_ok ? "ok" : "FAIL",
                    verification->convexity_ok ? "ok" : "FAIL");
      std::cout << buf;
    }
    if (base_bound) {
      std::cout << "baseline bound    " << base_bound->bound.str(16) << "\n";
      std::cout << "baseline zeta     " << base_bound->zeta.str(16) << "\n";
    }
  }

  if (verify_mode && verification && !verification->passed()) return kExitOther;
  return 0;
}

int run_bartholdi(std::int64_t genus, unsigned bits, const std::string& output) {
  const BartholdiResult r = bartholdi_lower(genus, bits);
  if (output == "json") {
    Json j;
    j["version"] = CONEWALK_VERSION;
    j["genus"] = genus;
    j["precision_bits"] = r.precision_bits;
    j["zeta"] = r.zeta.str(20);
    j["bound"] = r.bound.str(20);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "genus   " << genus << "\n";
    std::cout << "zeta    " << r.zeta.str(20) << "\n";
    std::cout << "bound   " << r.bound.str(20) << "\n";
  }
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"certified lower bounds for the spectral radius of surface-group random walks"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string weights_arg;

  const auto add_family_options = [&](CLI::App* sub) {
    sub->add_option("--genus", cfg.genus, "surface genus (>= 2)");
    sub->add_option("--family", cfg.family, "cannon | modified | suffix | essential");
    sub->add_option("--weights", weights_arg, "comma-separated letter weights");
    sub->add_option("--threshold", cfg.threshold, "weight threshold");
    sub->add_option("--max-length", cfg.max_length, "maximum word length");
    sub->add_option("--tolerance", cfg.tolerance, "power-iteration tolerance");
    sub->add_option("--memory-budget", cfg.memory_budget, "memory budget in bytes");
    sub->add_option("--max-words", cfg.max_words, "word-count limit");
  };

  CLI::App* est = app.add_subcommand("estimate", "compute the certified lower bound");
  add_family_options(est);
  est->add_option("--output", cfg.output, "text | json | csv");
  est->add_flag("--verify-geometric", cfg.verify_geometric_flag, "run the geometric cross-check");
  est->add_flag("--baseline", cfg.baseline, "also compute the generating-function baseline");
  est->add_option("--dump-matrix", cfg.dump_matrix_path, "write the system as JSON ('-' = stdout)");
  est->add_option("--dump-words", cfg.dump_words_path, "write the word list ('-' = stdout)");
  est->add_option("--trace", cfg.trace_path, "stream (iteration, norm) CSV to this file");

  CLI::App* ver = app.add_subcommand("verify", "estimate plus geometric verification");
  add_family_options(ver);
  ver->add_option("--output", cfg.output, "text | json | csv");

  std::int64_t bart_genus = 2;
  unsigned bart_bits = 256;
  std::string bart_output = "text";
  CLI::App* bart = app.add_subcommand("bartholdi", "generating-function baseline bound");
  bart->add_option("--genus", bart_genus, "surface genus (>= 2)");
  bart->add_option("--precision-bits", bart_bits, "working precision (>= 128)");
  bart->add_option("--output", bart_output, "text | json");

  std::string out_path;
  CLI::App* dmat = app.add_subcommand("dump-matrix", "write the successor matrix as JSON");
  add_family_options(dmat);
  dmat->add_option("--out", out_path, "output file ('-' = stdout)");

  CLI::App* dwords = app.add_subcommand("dump-words", "write the enumerated word list");
  add_family_options(dwords);
  dwords->add_option("--out", out_path, "output file ('-' = stdout)");

  CLI11_PARSE(app, argc, argv);

  if (!weights_arg.empty()) {
    std::stringstream ss(weights_arg);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.weights.push_back(std::stod(item));
  }

  if (est->parsed()) return run_estimate(cfg, false);
  if (ver->parsed()) return run_estimate(cfg, true);
  if (bart->parsed()) return run_bartholdi(bart_genus, bart_bits, bart_output);
  if (dmat->parsed()) {
    const BuiltFamily fam = build_family(cfg);
    write_text_or_file(out_path, to_json(fam.system).dump(2) + "\n");
    return 0;
  }
  if (dwords->parsed()) {
    if (cfg.family != "suffix" && cfg.family != "essential")
      throw ConfigError("dump-words requires the suffix or essential family");
    const BuiltFamily fam = build_family(cfg);
    dump_words(fam, out_path);
    return 0;
  }
  return kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PoolOverflow& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const MemoryBudgetExceeded& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const NoConvergence& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const NonPositivePredecessor& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NotIrreducible& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NotAperiodic& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
