#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spartan/hypernet.hpp"
#include "spartan/lang.hpp"
#include "spartan/machine.hpp"

namespace spartan {

// Relations on step counts.
enum class Preorder : std::uint8_t { Universal, GreaterEq, LessEq, Equal };

bool holds(Preorder q, std::uint64_t k1, std::uint64_t k2);
Preorder converse(Preorder q);
std::string_view to_string(Preorder q);
std::optional<Preorder> parse_preorder(std::string_view s);

enum class RefineResult : std::uint8_t { Holds, Fails, Inconclusive };
std::string_view to_string(RefineResult r);

// Refinement of already-computed outcomes: if the first finishes in k1 steps
// the second must finish in k2 with k1 Q k2. A stuck first run holds
// vacuously; a run out of fuel leaves the answer open.
RefineResult refines(const Outcome& o1, const Outcome& o2, Preorder q);
RefineResult refines(const State& s1, const State& s2, Preorder q, std::uint64_t fuel);

enum class ContextClass : std::uint8_t { All, BindingFree };
std::string_view to_string(ContextClass c);
std::optional<ContextClass> parse_context_class(std::string_view s);

// A closed term-context with a single hole named "h".
struct Context {
  TermPtr term;
  Environment hole_env;
  std::size_t size = 0;  // of the enumerated spine; closing binders excluded
};

inline constexpr const char* kHoleName = "h";

std::vector<TermPtr> default_pool();

// Contexts of spine size <= size_bound, smallest first. The spine sits under
// closing binders that give every name of `law_env` a value from the pool,
// one context per choice of values. Spine binders use fresh names c<N>
// (variables) and n<N> (atoms), so the hole environment extends `law_env`.
std::vector<Context> enumerate_contexts(ContextClass cls, const std::vector<TermPtr>& pool,
                                        std::size_t size_bound, const Environment& law_env = {});

// Graph-side predicate: at every depth, no path of positive length leads
// from a source of a contraction, atom, box or hole edge to a hole source.
bool is_binding_free(const Hypernet& net);

// Translation of context[side] by plugging the translated side into the
// translated context. `side_env` is the environment the side is translated
// in; it must be a permutation of the context's hole environment.
Hypernet plug_translated(const Context& ctx, const Term& side, const Environment& side_env);

struct Relation {
  enum class Kind : std::uint8_t { Refines, Equivalent } kind = Kind::Equivalent;
  Preorder q = Preorder::Universal;
  std::string text() const;  // "equivalent(universal)"
};

struct LawInstance {
  std::string lhs;
  std::string rhs;
};

struct LawDef {
  std::string name;
  Environment env;                 // free names of the sides, closed by the context
  std::vector<LawInstance> instances;
  ContextClass cls = ContextClass::All;
  std::vector<Relation> relations;  // all must hold
  // Translate the right-hand side with these two variables exchanged in its
  // environment and wire it back through an interface permutation.
  std::optional<std::pair<std::string, std::string>> rhs_exchange;
};

std::vector<LawDef> law_suite();

enum class VerdictStatus : std::uint8_t { Supported, Refuted, Inconclusive };
std::string_view to_string(VerdictStatus s);

struct Counterexample {
  std::size_t instance = 0;
  std::string context;
  std::string relation;
  Outcome lhs;
  Outcome rhs;
  std::string dot;  // plugged left-hand side
};

struct StepRange {
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  std::size_t finals = 0;
  void add(const Outcome& o);
};

struct Verdict {
  std::string law;
  ContextClass cls = ContextClass::All;
  std::vector<Relation> relations;
  std::size_t instances = 0;
  std::size_t contexts = 0;  // checks performed over all instances
  std::size_t inconclusive = 0;
  StepRange lhs_steps;
  StepRange rhs_steps;
  std::vector<Counterexample> counterexamples;
  VerdictStatus status = VerdictStatus::Supported;
};

struct CheckOptions {
  std::size_t size_bound = 3;
  std::uint64_t fuel = 100000;
  std::vector<TermPtr> pool = default_pool();
  std::size_t max_dot_dumps = 1;  // per law
};

// One check of a law instance in one context.
struct CheckResult {
  Outcome lhs;
  Outcome rhs;
  std::vector<RefineResult> per_relation;
};

CheckResult check_in_context(const LawDef& law, std::size_t instance, const Context& ctx, std::uint64_t fuel);

// Every instance of the law under every enumerated context.
Verdict check_contextual(const LawDef& law, const CheckOptions& opts);

// Convenience for a single pair of closed-or-open terms.
Verdict check_contextual(const std::string& lhs, const std::string& rhs, ContextClass cls, Relation rel,
                         const CheckOptions& opts, const Environment& env = {});

struct SuiteConfig {
  CheckOptions check;
  std::size_t jobs = 1;
  std::optional<ContextClass> class_override;
  std::vector<std::string> only;  // law names; empty = all
};

// key=value lines; '#' starts a comment. Keys: size, fuel, jobs, class,
// laws (comma separated), pool (terms separated by ';'). Throws
// std::invalid_argument on unknown keys or bad values.
SuiteConfig parse_config(std::string_view text);

struct SuiteReport {
  std::size_t size_bound = 0;
  std::uint64_t fuel = 0;
  std::vector<Verdict> verdicts;
  bool all_supported() const;
};

// Reference implementation: one check after another.
SuiteReport run_suite_serial(const std::vector<LawDef>& laws, const SuiteConfig& cfg);
// Same checks spread over `cfg.jobs` OpenMP threads; identical report.
SuiteReport run_suite(const std::vector<LawDef>& laws, const SuiteConfig& cfg);

std::string report_text(const SuiteReport& r);
std::string report_json(const SuiteReport& r);

}  // namespace spartan
