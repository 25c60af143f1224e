// krein: batch command-line front end.
//
//   krein <command> [--key value ...] [--config file] [--out dir] [--format json|csv|both]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 usage or I/O error.

#include "krein/acceptance.hpp"
#include "krein/config.hpp"
#include "krein/report.hpp"
#include "krein/suite.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>

namespace {

using krein::Report;
using krein::config::ParamSpec;
using krein::config::Settings;
using krein::config::UsageError;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Command {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  std::function<Report(const Settings&)> run;
};

Report verify_all(const Settings& s, bool verbose) {
  const std::string which = s.text("criteria");
  std::vector<int> ids;
  if (which == "all") {
    for (const auto& c : krein::acceptance::criteria()) ids.push_back(c.id);
  } else {
    std::stringstream ss(which);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const long long id = krein::config::parse_integer("criteria", item);
      if (id < 1 || id > static_cast<long long>(krein::acceptance::criteria().size()))
        throw UsageError("criteria", "no criterion " + item);
      ids.push_back(static_cast<int>(id));
    }
  }
  std::vector<krein::acceptance::Outcome> outcomes;
  for (int id : ids) {
    const auto& c = krein::acceptance::criteria()[static_cast<std::size_t>(id - 1)];
    outcomes.push_back(krein::acceptance::run(c));
    const auto& o = outcomes.back();
    if (verbose)
      std::cerr << "criterion " << o.id << ": " << (o.pass() ? "PASS" : "FAIL") << "  " << o.title
                << (o.error.empty() ? "" : "  (error: " + o.error + ")") << "\n";
  }
  return krein::acceptance::combine(outcomes);
}

std::vector<Command> commands(const bool& verbose) {
  using namespace krein::suite;
  return {
      {"gauge-scalar", "abelian gauge factorization, polar identities and pseudo-Hermiticity", gauge_scalar_params(),
       gauge_scalar},
      {"cartan", "Cartan split, closed-form exponentials, parity relations, group polar factors", cartan_params(),
       cartan_analysis},
      {"lts-check", "Lie triple system closure of g_Theta and binary-bracket escape", lts_params(), lts_analysis},
      {"spectrum-matrix", "matrix Hamiltonian with constant gauge: audits, re-gauging, spectra",
       spectrum_matrix_params(), spectrum_matrix},
      {"jc", "PT-symmetric Jaynes-Cummings build and grid cross-check", jc_params(), jc_analysis},
      {"point-angle", "Clifford angle of a coupling matrix and boundary identities", point_angle_params(), point_angle},
      {"point-spectrum", "bound states of a point interaction", point_spectrum_params(), point_spectrum},
      {"phase-diagram", "PT phase sweep over coupling matrices", phase_diagram_params(), phase_diagram},
      {"verify-all", "run every acceptance criterion at default parameters",
       {{"criteria", "all", "comma-separated criterion ids or 'all'"}},
       [&verbose](const Settings& s) { return verify_all(s, verbose); }},
  };
}

void print_summary(const Report& r, std::ostream& os) {
  std::size_t failed = 0;
  for (const auto& c : r.checks)
    if (!c.pass) ++failed;
  os << r.command << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.checks.size() << " checks, " << failed
     << " failed)\n";
  for (const auto& c : r.checks)
    if (!c.pass)
      os << "  failed " << c.name << ": " << krein::format_double(c.residual) << " " << krein::to_string(c.relation)
         << " " << krein::format_double(c.tolerance) << "\n";
  for (const auto& n : r.notes) os << "  note: " << n << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krein-space and PT-symmetry numerical checks"};
  app.require_subcommand(1);
  // Some parameters are single letters (--h is the grid spacing), so help is long-form only.
  app.set_help_flag("--help", "print this help message and exit");
  app.set_version_flag("--version", "krein 1.0.0");

  bool verbose = false;
  const auto cmds = commands(verbose);
  struct Bound {
    CLI::App* sub = nullptr;
    std::map<std::string, std::string> flags;
    std::string config_file;
    std::string out_dir;
    std::string format = "both";
    std::string stem;
    bool timing = false;
    bool no_write = false;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& c : cmds) {
    auto b = std::make_unique<Bound>();
    b->sub = app.add_subcommand(c.name, c.description);
    for (const auto& p : c.params) {
      auto* opt = b->sub->add_option_function<std::string>(
          "--" + p.key, [raw = b.get(), key = p.key](const std::string& v) { raw->flags[key] = v; },
          p.help + " (default " + p.default_value + ")");
      opt->type_name("VALUE");
    }
    b->sub->add_option("--config", b->config_file, "flat key=value parameter file (flags win)");
    b->sub->add_option("--out", b->out_dir, "output directory (default $KREIN_OUT_DIR or .)");
    b->sub->add_option("--format", b->format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
    b->sub->add_option("--stem", b->stem, "output file stem (default: command name)");
    b->sub->add_flag("--timing", b->timing, "record wall time in the JSON report (breaks byte-reproducibility)");
    b->sub->add_flag("--no-write", b->no_write, "print the summary only");
    b->sub->add_flag("-v,--verbose", verbose, "progress on stderr");
    bound.push_back(std::move(b));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  for (std::size_t k = 0; k < cmds.size(); ++k) {
    const Bound& b = *bound[k];
    if (!b.sub->parsed()) continue;
    const Command& cmd = cmds[k];
    try {
      const auto file_values =
          b.config_file.empty() ? std::vector<std::pair<std::string, std::string>>{}
                                : krein::config::read_key_value_file(b.config_file);
      const Settings settings = krein::config::resolve(cmd.params, file_values, b.flags);

      const auto start = std::chrono::steady_clock::now();
      Report report = cmd.run(settings);
      report.command = cmd.name;
      report.config = settings.values();
      if (b.timing)
        report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      if (!b.no_write) {
        std::string dir = b.out_dir;
        if (dir.empty()) {
          const char* env = std::getenv("KREIN_OUT_DIR");
          dir = env && *env ? env : ".";
        }
        const auto fmt = b.format == "json" ? krein::Format::json
                         : b.format == "csv" ? krein::Format::csv
                                             : krein::Format::both;
        for (const auto& path : krein::emit(report, dir, b.stem.empty() ? cmd.name : b.stem, fmt))
          std::cerr << "wrote " << path.string() << "\n";
      }
      print_summary(report, std::cout);
      return report.pass() ? kExitPass : kExitFail;
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const krein::NumericalError& e) {
      std::cerr << "numerical failure: " << e.what() << "\n";
      return kExitFail;
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid input: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return kExitUsage;
}
