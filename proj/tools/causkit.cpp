#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "causkit/axioms.hpp"
#include "causkit/backend.hpp"
#include "causkit/checks.hpp"
#include "causkit/error.hpp"
#include "causkit/gallery.hpp"
#include "causkit/json_io.hpp"
#include "causkit/mll.hpp"
#include "causkit/types.hpp"

using namespace causkit;
using nlohmann::json;

namespace {

constexpr int kMatch = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

json report_json(const CheckReport& r) {
  return {{"verdict", r.verdict ? "pass" : "fail"},
          {"residual", r.residual},
          {"witness", r.witness},
          {"tolerance", r.tolerance}};
}

std::string examples_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CAUSKIT_EXAMPLES_DIR")) return env;
  return CAUSKIT_DEFAULT_EXAMPLES_DIR;
}

bool same_process(const Process& a, const Process& b) {
  return a.backend() == b.backend() && a.outs() == b.outs() && a.ins() == b.ins() && a.data() == b.data();
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CausError(ErrorKind::InvalidData, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CausError(ErrorKind::InvalidData, path + ": " + e.what());
  }
}

int cmd_check(const std::string& file, const std::string& type_text, const std::string& poset_file, double tol,
              const std::string& expect) {
  Process p = load_process_file(file);
  CheckReport rep;
  json out;
  if (!type_text.empty()) {
    CausalType t = parse_type(type_text);
    rep = check_membership(p, t, Tolerance{tol});
    out["type"] = print_type(t);
  } else {
    EventPoset poset = poset_from_json(load_json_file(poset_file));
    rep = check_order_consistency(p, poset, Tolerance{tol});
    out["poset"] = poset_file;
  }
  out["report"] = report_json(rep);
  bool want = expect != "fail";
  out["expect"] = want ? "pass" : "fail";
  out["matches"] = rep.verdict == want;
  std::cout << out.dump(2) << "\n";
  std::cerr << (rep.verdict ? "PASS" : "FAIL") << "  residual " << rep.residual << "  tolerance " << rep.tolerance
            << (rep.witness.empty() ? "" : "  (" + rep.witness + ")") << "\n";
  return rep.verdict == want ? kMatch : kMismatch;
}

int cmd_prove(const std::string& text, std::size_t budget, const std::string& expect) {
  Sequent s = parse_sequent(text);
  json out;
  out["sequent"] = print_sequent(s);
  bool proved = false;
  try {
    ProveResult r = prove(s, budget);
    out["explored"] = r.explored;
    proved = r.proof.has_value();
    if (proved) {
      out["status"] = "Proved";
      out["verified"] = verify_proof(*r.proof);
      out["nodes"] = proof_size(*r.proof);
      out["proof"] = render_proof(*r.proof);
      std::cerr << render_proof(*r.proof);
    } else {
      out["status"] = "NotProvable";
      std::cerr << "NotProvable\n";
    }
  } catch (const CausError& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    out["status"] = "BudgetExceeded";
    out["message"] = e.what();
    std::cout << out.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return kMismatch;
  }
  std::cout << out.dump(2) << "\n";
  bool want = expect != "fail";
  return proved == want ? kMatch : kMismatch;
}

int cmd_axioms(const std::string& backend, const std::string& config_path, std::int64_t seed) {
  AxiomConfig cfg = config_path.empty() ? AxiomConfig{} : load_axiom_config(config_path);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  std::vector<Backend> backends;
  if (backend == "all") backends = {Backend::MatR, Backend::Cpm, Backend::Rel};
  else backends = {backend_from_string(backend)};
  json rows = json::array();
  bool all_expected = true;
  for (Backend b : backends) {
    for (const auto& r : run_all(b, cfg)) {
      bool ok = r.verdict == expected_verdict(r.axiom, b);
      all_expected = all_expected && ok;
      rows.push_back({{"axiom", to_string(r.axiom)},
                      {"backend", to_string(b)},
                      {"verdict", to_string(r.verdict)},
                      {"expected", to_string(expected_verdict(r.axiom, b))},
                      {"residual", r.residual},
                      {"witness", r.witness}});
      std::cerr << std::left << std::setw(6) << to_string(b) << std::setw(4) << to_string(r.axiom) << " "
                << std::setw(8) << to_string(r.verdict) << (ok ? "    " : " !! ") << r.witness << "\n";
    }
  }
  std::cout << rows.dump(2) << "\n";
  return all_expected ? kMatch : kMismatch;
}

int cmd_examples(const std::string& name, bool verify, bool write, const std::string& dir_flag, double tol) {
  std::vector<std::string> names = name == "all" ? gallery_names() : std::vector<std::string>{name};
  const std::string dir = examples_dir(dir_flag);
  json out = json::array();
  bool ok = true;
  for (const auto& n : names) {
    NamedExample ex = gallery_get(n);
    json item{{"name", ex.name}, {"citation", ex.citation}};
    const std::string path = (std::filesystem::path(dir) / (ex.name + ".json")).string();
    if (write) {
      std::filesystem::create_directories(dir);
      save_process_file(ex.process, path);
      item["golden"] = "written";
    } else if (std::filesystem::exists(path)) {
      bool same = same_process(load_process_file(path), ex.process);
      item["golden"] = same ? "match" : "drift";
      ok = ok && same;
    } else {
      item["golden"] = "missing";
      ok = false;
    }
    if (verify) {
      json table = json::array();
      for (const auto& row : verify_example(ex, Tolerance{tol})) {
        table.push_back({{"type", row.type_text},
                         {"expected", row.expected ? "pass" : "fail"},
                         {"report", report_json(row.report)},
                         {"matches", row.matches()}});
        std::cerr << (row.matches() ? "ok    " : "DRIFT ") << std::left << std::setw(18) << ex.name << " "
                  << (row.report.verdict ? "pass " : "fail ") << row.type_text << "  residual " << row.report.residual
                  << "\n";
        ok = ok && row.matches();
      }
      item["verdicts"] = table;
    }
    std::cerr << std::left << std::setw(18) << ex.name << " golden " << item["golden"].get<std::string>() << "\n";
    out.push_back(item);
  }
  std::cout << out.dump(2) << "\n";
  return ok ? kMatch : kMismatch;
}

int cmd_convert(const std::string& in, const std::string& out_path, bool state) {
  Process p = load_process_file(in);
  if (state) {
    std::vector<std::string> labels;
    for (const auto& s : p.ins()) labels.push_back(s.label);
    for (const auto& l : labels) p = bend(p, l, BendDir::InToOut);
  }
  if (out_path.empty()) std::cout << dump_process(p) << "\n";
  else save_process_file(p, out_path);
  return kMatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causkit: causal types over matr+, cpm and rel"};
  app.require_subcommand(1);
  double tol = 1e-9;
  std::string expect = "pass";
  app.add_option("--tol", tol, "numeric tolerance")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "check a process against a type or a causal order");
  std::string file, type_text, poset_file;
  check->add_option("process", file, "process JSON file")->required();
  auto* type_opt = check->add_option("--type", type_text, "causal type");
  auto* poset_opt = check->add_option("--poset", poset_file, "event poset JSON file");
  type_opt->excludes(poset_opt);
  check->add_option("--expect", expect, "expected verdict")->check(CLI::IsMember({"pass", "fail"}));
  check->add_option("--tol", tol, "numeric tolerance")->check(CLI::PositiveNumber);

  auto* provec = app.add_subcommand("prove", "search an MLL+Mix proof of a sequent");
  std::string sequent;
  std::size_t budget = kDefaultProofBudget;
  provec->add_option("sequent", sequent, "sequent, e.g. \"A -o B |- A -o B\"")->required();
  provec->add_option("--budget", budget, "node budget");
  provec->add_option("--expect", expect, "expected outcome")->check(CLI::IsMember({"pass", "fail"}));

  auto* axioms = app.add_subcommand("axioms", "run the precausal axiom suites");
  std::string backend = "all", config_path;
  std::int64_t seed = -1;
  axioms->add_option("--backend", backend, "matr+, cpm, rel or all")
      ->check(CLI::IsMember({"matr+", "cpm", "rel", "all"}));
  axioms->add_option("--config", config_path, "key=value config file");
  axioms->add_option("--seed", seed, "override the config seed");

  auto* examples = app.add_subcommand("examples", "rebuild gallery processes and compare golden files");
  std::string name = "all", dir;
  bool verify = false, write = false;
  examples->add_option("name", name, "example name or all");
  examples->add_flag("--verify", verify, "recheck every home-type verdict");
  examples->add_flag("--write", write, "overwrite the golden files");
  examples->add_option("--dir", dir, "golden directory (default: CAUSKIT_EXAMPLES_DIR)");
  examples->add_option("--tol", tol, "numeric tolerance")->check(CLI::PositiveNumber);

  auto* convert = app.add_subcommand("convert", "rewrite a process file in canonical form");
  std::string in_file, out_file;
  bool state = false;
  convert->add_option("input", in_file, "process JSON file")->required();
  convert->add_option("-o,--out", out_file, "output file (default stdout)");
  convert->add_flag("--state", state, "bend every input into an output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*check) {
      if (type_text.empty() == poset_file.empty()) {
        std::cerr << "check: give exactly one of --type or --poset\n";
        return kUsage;
      }
      return cmd_check(file, type_text, poset_file, tol, expect);
    }
    if (*provec) return cmd_prove(sequent, budget, expect);
    if (*axioms) return cmd_axioms(backend, config_path, seed);
    if (*examples) {
      if (name != "all") {
        auto names = gallery_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) {
          std::cerr << "examples: unknown example '" << name << "'\n";
          return kUsage;
        }
      }
      return cmd_examples(name, verify, write, dir, tol);
    }
    if (*convert) return cmd_convert(in_file, out_file, state);
  } catch (const CausError& e) {
    std::cout << json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
