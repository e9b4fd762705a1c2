#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "nrgit/errors.hpp"
#include "nrgit/report.hpp"

using namespace nrgit;

namespace {

enum Exit { kOk = 0, kRefused = 1, kInputError = 2, kBoundExhausted = 3, kInternal = 4 };

struct Flags {
  std::string scenario;
  std::string json;
  std::optional<int> degree_bound, pbw_bound;
  std::optional<uint64_t> seed;
  size_t letters = 2;
  bool no_chain = false;
};

void write_json(const Flags& f, const Report& r) {
  if (f.json.empty()) return;
  if (f.json == "-") {
    std::cout << r.dump(2) << "\n";
    return;
  }
  std::ofstream out(f.json);
  if (!out) throw std::invalid_argument("cannot write " + f.json);
  out << r.dump(2) << "\n";
}

Scenario load(const Flags& f) {
  if (f.scenario.empty()) throw std::invalid_argument("--scenario is required");
  Scenario s = load_scenario(f.scenario);
  if (f.degree_bound) s.options.degree_bound = *f.degree_bound;
  if (f.pbw_bound) s.options.pbw_bound = *f.pbw_bound;
  if (f.seed) s.options.seed = *f.seed;
  return s;
}

int run(const std::string& cmd, const Flags& f) {
  Report r;
  if (cmd == "analyze") {
    r = cmd_analyze(load(f));
  } else if (cmd == "quotient") {
    r = cmd_quotient(load(f));
  } else if (cmd == "blowup") {
    r = cmd_blowup(load(f), !f.no_chain);
  } else {
    IdentityOptions opt;
    opt.letters = f.letters;
    if (f.pbw_bound) opt.pbw_bound = *f.pbw_bound;
    if (f.seed) opt.seed = *f.seed;
    if (!f.scenario.empty()) {
      Scenario s = load(f);
      opt.pbw_bound = s.options.pbw_bound;
      opt.seed = s.options.seed;
    }
    r = cmd_verify_identities(opt);
  }
  if (f.json != "-") std::cout << render_text(r);
  write_json(f, r);
  if (r.contains("ok") && !r["ok"].get<bool>()) return kInternal;
  return kOk;
}

void write_failure(const Flags& f, const std::string& cmd, const std::string& status, const std::string& msg) {
  try {
    write_json(f, Report{{"command", cmd}, {"status", status}, {"message", msg}});
  } catch (const std::exception&) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unipotent quotients and blow-ups of graded affine charts"};
  app.require_subcommand(1);
  Flags f;
  std::string cmd;
  auto add = [&](const std::string& name, const std::string& desc) {
    auto* sc = app.add_subcommand(name, desc);
    sc->add_option("--scenario", f.scenario, "scenario file")->check(CLI::ExistingFile);
    sc->add_option("--degree-bound", f.degree_bound, "degree bound for slice and centre searches")
        ->check(CLI::NonNegativeNumber);
    sc->add_option("--pbw-bound", f.pbw_bound, "PBW degree bound for identity checks")->check(CLI::NonNegativeNumber);
    sc->add_option("--seed", f.seed, "random seed");
    sc->add_option("--json", f.json, "write the JSON report to this path ('-' for stdout)");
    sc->callback([&cmd, name] { cmd = name; });
    return sc;
  };
  add("analyze", "validate and check ss=s, CDRS and WUU");
  add("quotient", "staged quotient of a CDRS scenario");
  add("blowup", "centre, b elements and blown-up chart")
      ->add_flag("--no-chart-quotient", f.no_chain, "skip the quotient of the chart");
  add("identities", "free-algebra and comultiplication identities")
      ->add_option("--letters", f.letters, "number of letters for the weighted bracket identity")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    return run(cmd, f);
  } catch (const ParseError& e) {
    std::cerr << f.scenario << ":" << e.where() << ": error: " << e.what() << "\n";
    write_failure(f, cmd, "input error", e.where() + ": " + e.what());
    return kInputError;
  } catch (const Refusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    write_failure(f, cmd, "refused", e.what());
    return kRefused;
  } catch (const BoundExhausted& e) {
    std::cerr << "bound exhausted (bound " << e.bound << "): " << e.what() << "\n";
    write_failure(f, cmd, "bound exhausted", e.what());
    return kBoundExhausted;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_failure(f, cmd, "input error", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    write_failure(f, cmd, "internal error", e.what());
    return kInternal;
  }
}
