#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "gerbelab/audits.hpp"
#include "gerbelab/errors.hpp"

using namespace gerbelab;

namespace {

struct Flags {
  std::string params = "0,0,0";
  std::string family = "R";
  int grid = 0;
  double tol = 0.0;
  int trials = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string calibration;
  std::string check;
  std::string form = "poincare";
  std::string sphere = "equator";
  int grid_refine = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--params", f.params, "cocycle parameters a,b,c");
  sub->add_option("--family", f.family, "R, Z or generic");
  sub->add_option("--grid", f.grid, "samples per loop (power of two >= 64)");
  sub->add_option("--tol", f.tol, "tolerance override");
  sub->add_option("--trials", f.trials, "number of random probes");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "write the report here instead of stdout");
  sub->add_option("--calibration", f.calibration, "calibration cache file");
}

CocycleParams parse_params(const std::string& text, const std::string& family) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("--params: '" + item + "' is not a number");
    }
  }
  if (v.size() != 3) throw InvalidArgument("--params expects three comma-separated numbers");
  return CocycleParams::make(v[0], v[1], v[2], parse_family(family));
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical audits for loop group extensions and transgression"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::string> names = {"check-cocycle", "classify",    "poincare",    "mickelsson",
                                          "wz",            "transgress", "reciprocity", "calibrate"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, f);
    if (name == "mickelsson" || name == "transgress") sub->add_option("--check", f.check, "which property to audit");
    if (name == "transgress") sub->add_option("--form", f.form, "poincare or su2rho");
    if (name == "wz") {
      sub->add_option("--sphere", f.sphere, "equator, rank-one, random or a JSON sphere file");
      sub->add_option("--grid-refine", f.grid_refine, "values > 1 also compare against the half-resolution grid")
          ->check(CLI::NonNegativeNumber);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg;
    cfg.params = parse_params(f.params, f.family);
    if (cmd == "calibrate") {
      cfg.grid = f.grid > 0 ? f.grid : 48;
      if (cfg.grid < 8) throw InvalidArgument("--grid must be at least 8 for calibrate");
    } else {
      cfg.grid = f.grid > 0 ? f.grid : 256;
      if (!power_of_two(cfg.grid) || cfg.grid < 64) throw InvalidArgument("--grid must be a power of two >= 64");
    }
    if (f.tol < 0.0) throw InvalidArgument("--tol must be non-negative");
    if (f.trials < 0) throw InvalidArgument("--trials must be non-negative");
    cfg.tol = f.tol;
    cfg.trials = f.trials;
    cfg.seed = f.seed;
    cfg.check = f.check;
    cfg.form = f.form;
    cfg.sphere = f.sphere;
    cfg.grid_refine = f.grid_refine > 1;
    cfg.calibration_path = f.calibration;
    if (const char* env = std::getenv("GERBELAB_CALIBRATION"); env && *env) cfg.calibration_path = env;

    AuditReport report;
    if (cmd == "check-cocycle") {
      report = audit_check_cocycle(cfg);
    } else if (cmd == "classify") {
      report = audit_classify(cfg);
    } else if (cmd == "poincare") {
      report = audit_poincare(cfg);
    } else if (cmd == "reciprocity") {
      report = audit_reciprocity(cfg);
    } else if (cmd == "calibrate") {
      report = audit_calibrate(cfg);
    } else {
      const Calibration cal = load_calibration(cfg.calibration_path);
      if (cmd == "mickelsson") report = audit_mickelsson(cfg, cal);
      if (cmd == "wz") report = audit_wz(cfg, cal);
      if (cmd == "transgress") report = audit_transgress(cfg, cal);
    }

    if (f.out.empty())
      std::cout << report.dump();
    else
      write_text_file(f.out, report.dump());
    return report.all_pass() ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "gerbelab " << cmd << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "gerbelab " << cmd << ": " << e.what() << "\n";
    return 1;
  }
}
