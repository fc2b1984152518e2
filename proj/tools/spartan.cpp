// Command-line front end: parse, check, run, dot, laws, contexts.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "spartan/equiv.hpp"
#include "spartan/machine.hpp"
#include "spartan/translate.hpp"

using namespace spartan;

namespace {

constexpr int kExitStuck = 2;
constexpr int kExitFuel = 3;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

TermPtr load_program(const std::string& path) {
  TermPtr t = parse(read_source(path));
  if (!is_program(*t)) {
    auto fv = free_vars(*t);
    throw TypeError(fv.empty() ? "program is not closed" : "unbound variable " + *fv.begin());
  }
  return t;
}

int exit_code(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Final: return 0;
    case Outcome::Kind::Stuck: return kExitStuck;
    case Outcome::Kind::Fuel: return kExitFuel;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spartan terms on a token-guided hypernet rewriting machine"};
  app.require_subcommand(1);

  std::string file;
  std::uint64_t fuel = 100000;
  bool want_trace = false;
  std::optional<std::uint64_t> at_step;
  std::size_t size = 3;
  std::size_t jobs = 1;
  std::string config_path, class_name, json_path;
  std::vector<std::string> only;

  auto* cmd_parse = app.add_subcommand("parse", "Parse a program and print it back");
  cmd_parse->add_option("file", file, "Source file, or - for stdin")->required();

  auto* cmd_check = app.add_subcommand("check", "Typecheck a closed program");
  cmd_check->add_option("file", file, "Source file, or - for stdin")->required();

  auto* cmd_run = app.add_subcommand("run", "Translate and execute a program");
  cmd_run->add_option("file", file, "Source file, or - for stdin")->required();
  cmd_run->add_option("--fuel", fuel, "Maximum number of transitions")->capture_default_str();
  cmd_run->add_flag("--trace", want_trace, "Print one JSON record per transition");

  auto* cmd_dot = app.add_subcommand("dot", "Print the translated net, or a state, as Graphviz DOT");
  cmd_dot->add_option("file", file, "Source file, or - for stdin")->required();
  cmd_dot->add_option("--at-step", at_step, "Show the focussed state after this many transitions");
  cmd_dot->add_option("--fuel", fuel, "Transition limit when --at-step is given")->capture_default_str();

  auto* cmd_laws = app.add_subcommand("laws", "Run the bounded law suite");
  cmd_laws->add_option("--config", config_path, "key=value configuration file");
  auto* size_opt = cmd_laws->add_option("--size", size, "Context size bound")->check(CLI::PositiveNumber);
  auto* fuel_opt = cmd_laws->add_option("--fuel", fuel, "Fuel per run");
  auto* jobs_opt = cmd_laws->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd_laws->add_option("--class", class_name, "Override the context class")->check(CLI::IsMember({"all", "bf"}));
  cmd_laws->add_option("--only", only, "Restrict to these laws")->delimiter(',');
  cmd_laws->add_option("--json", json_path, "Also write the report as JSON to this path");

  auto* cmd_contexts = app.add_subcommand("contexts", "List enumerated term-contexts");
  cmd_contexts->add_option("--class", class_name, "all or bf")->check(CLI::IsMember({"all", "bf"}))->required();
  cmd_contexts->add_option("--size", size, "Context size bound")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*cmd_parse) {
      std::cout << print(*parse(read_source(file))) << "\n";
      return 0;
    }
    if (*cmd_check) {
      TermPtr t = load_program(file);
      std::cout << "ok: " << to_string(typecheck({}, *t)) << "\n";
      return 0;
    }
    if (*cmd_run) {
      State s = init(translate_program(*load_program(file)));
      StepObserver obs;
      if (want_trace)
        obs = [](std::uint64_t i, const Transition& t, const State&) { std::cout << trace_record_json(i, t) << "\n"; };
      Outcome o = run(s, fuel, obs);
      std::cout << to_string(o) << "\n";
      if (o.kind == Outcome::Kind::Final) std::cout << "value " << result_text(s) << "\n";
      return exit_code(o);
    }
    if (*cmd_dot) {
      Hypernet net = translate_program(*load_program(file));
      if (!at_step) {
        std::cout << to_dot(net, "program");
        return 0;
      }
      State s = init(net);
      Outcome o = run(s, std::min(*at_step, fuel));
      if (o.steps < *at_step) std::cerr << "stopped early: " << to_string(o) << "\n";
      std::cout << to_dot(focussed(s), "state");
      return 0;
    }
    if (*cmd_laws) {
      SuiteConfig cfg;
      if (!config_path.empty()) cfg = parse_config(read_source(config_path));
      if (size_opt->count()) cfg.check.size_bound = size;
      if (fuel_opt->count()) cfg.check.fuel = fuel;
      if (jobs_opt->count()) cfg.jobs = jobs;
      if (!class_name.empty()) cfg.class_override = parse_context_class(class_name);
      if (!only.empty()) cfg.only = only;
      SuiteReport r = cfg.jobs > 1 ? run_suite(law_suite(), cfg) : run_suite_serial(law_suite(), cfg);
      std::cout << report_text(r);
      if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw InputError("cannot write " + json_path);
        out << report_json(r);
      }
      return r.all_supported() ? 0 : 1;
    }
    if (*cmd_contexts) {
      auto cls = *parse_context_class(class_name);
      for (const auto& c : enumerate_contexts(cls, default_pool(), size))
        std::cout << c.size << "\t" << print(*c.term) << "\t" << to_string(c.hole_env) << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << file << ": parse error at " << e.what() << "\n";
    return kExitData;
  } catch (const TypeError& e) {
    std::cerr << file << ": type error: " << e.what() << "\n";
    return kExitData;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kExitNoInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
