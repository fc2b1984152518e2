#include <algorithm>
#include <map>

#include "spartan/equiv.hpp"
#include "spartan/translate.hpp"
#include "internal.hpp"

namespace spartan {

std::string Relation::text() const {
  return std::string(kind == Kind::Refines ? "refines" : "equivalent") + "(" + std::string(to_string(q)) + ")";
}

namespace {

Relation equivalent(Preorder q = Preorder::Universal) { return {Relation::Kind::Equivalent, q}; }
Relation refines_rel(Preorder q = Preorder::Universal) { return {Relation::Kind::Refines, q}; }

Environment vars(std::vector<std::string> v) { return Environment{std::move(v), {}}; }

}  // namespace

std::vector<LawDef> law_suite() {
  const auto all = ContextClass::All;
  const auto bf = ContextClass::BindingFree;
  std::vector<LawDef> laws;

  laws.push_back({"BindComm",
                  {},
                  {{"bind x = 0 in bind y = 1 in x + y", "bind y = 1 in bind x = 0 in x + y"},
                   {"bind x = ref 0 in bind y = tt in x := y", "bind y = tt in bind x = ref 0 in x := y"},
                   {"bind x = lambda q. q in bind y = 2 in x y", "bind y = 2 in bind x = lambda q. q in x y"}},
                  all,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"NewComm",
                  {},
                  {{"new a <= 0 in new b <= 1 in !a + !b", "new b <= 1 in new a <= 0 in !a + !b"},
                   {"new a <= tt in new b <= tt in a = b", "new b <= tt in new a <= tt in a = b"},
                   {"new a <= 1 in new b <= 2 in (a := !b); !a", "new b <= 2 in new a <= 1 in (a := !b); !a"}},
                  all,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"BindNest",
                  {},
                  {{"bind x = (bind y = 1 in y + 1) in x + x", "bind y = 1 in bind x = y + 1 in x + x"},
                   {"bind x = (bind y = ref 0 in y) in x = x", "bind y = ref 0 in bind x = y in x = x"},
                   {"bind x = (bind y = tt in lambda q. y) in x 0", "bind y = tt in bind x = lambda q. y in x 0"}},
                  all,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"NewNest",
                  {},
                  {{"new a <= (new b <= 1 in !b) in !a", "new b <= 1 in new a <= !b in !a"},
                   {"new a <= (new b <= 0 in b) in !a = !a", "new b <= 0 in new a <= b in !a = !a"},
                   {"new a <= (new b <= 2 in !b + 1) in (a := 5); !a",
                    "new b <= 2 in new a <= !b + 1 in (a := 5); !a"}},
                  all,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"Copy",
                  {},
                  {{"bind x = 1 + 2 in bind y = x in bind z = x in y + z", "bind y = 1 + 2 in bind z = 1 + 2 in y + z"},
                   {"bind x = lambda q. q in bind y = x in bind z = x in y z",
                    "bind y = lambda q. q in bind z = lambda q. q in y z"},
                   {"bind x = ref 0 in bind y = x in bind z = x in y = z", "bind y = ref 0 in bind z = ref 0 in y = z"}},
                  all,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"Subst",
                  {},
                  {{"bind x = 1 + 1 in x + x", "(1 + 1) + (1 + 1)"},
                   {"bind x = lambda q. q in x 3", "(lambda q. q) 3"},
                   {"bind x = ref 0 in x = x", "ref 0 = ref 0"},
                   {"bind x = lambda q. q + 1 in lambda r. x r", "lambda r. (lambda q. q + 1) r"}},
                  all,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"Weakening",
                  {},
                  {{"bind z = 1 + 2 in 4", "4"},
                   {"bind z = ref 0 in tt", "tt"},
                   {"new b <= 0 in 1", "1"},
                   {"new b <= tt + 1 in lambda q. q", "lambda q. q"}},
                  all,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"Exchange",
                  vars({"x", "y"}),
                  {{"x + y", "x + y"}, {"x y", "x y"}, {"x = y", "x = y"}},
                  all,
                  {equivalent()},
                  std::make_pair(std::string("x"), std::string("y"))});

  laws.push_back({"MicroBeta",
                  Environment{{}, {"a"}},
                  {{"(lambda x. x) tt", "bind x = tt in x"},
                   {"(lambda x. x + 1) 0", "bind x = 0 in x + 1"},
                   {"(lambda x. x 0) (lambda q. q)", "bind x = lambda q. q in x 0"},
                   {"(lambda x. x = x) a", "bind x = a in x = x"},
                   {"(lambda x. x := 1) a", "bind x = a in x := 1"}},
                  bf,
                  {equivalent(), refines_rel(Preorder::GreaterEq)},
                  std::nullopt});
  laws.push_back({"Beta",
                  {},
                  {{"(lambda x. x + x) 2", "2 + 2"},
                   {"(lambda x. x tt) (lambda q. q)", "(lambda q. q) tt"},
                   {"(lambda x. lambda r. x) 0", "lambda r. 0"}},
                  bf,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"Freshness",
                  {},
                  {{"nu z. lambda x. x = z", "lambda x. ff"}},
                  bf,
                  {refines_rel()},
                  std::nullopt});
  laws.push_back({"Locality", vars({"f"}), {{"nu x. f", "f"}}, bf, {equivalent()}, std::nullopt});
  laws.push_back({"Parametricity1",
                  vars({"f"}),
                  {{"let x = ref 0 in (f (lambda _. x := !x + 1)) (lambda _. !x)",
                    "let x = ref 0 in (f (lambda _. x := !x - 1)) (lambda _. neg !x)"}},
                  bf,
                  {equivalent()},
                  std::nullopt});
  laws.push_back({"Parametricity2",
                  {},
                  {{"let x = ref 1 in lambda f. ((f ()); !x)", "lambda f. ((f ()); 1)"}},
                  bf,
                  {equivalent()},
                  std::nullopt});
  return laws;
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Supported: return "supported";
    case VerdictStatus::Refuted: return "refuted";
    case VerdictStatus::Inconclusive: return "inconclusive";
  }
  return "";
}

void StepRange::add(const Outcome& o) {
  if (o.kind != Outcome::Kind::Final) return;
  if (finals == 0 || o.steps < min) min = o.steps;
  if (finals == 0 || o.steps > max) max = o.steps;
  ++finals;
}

namespace {

ParseOptions parse_options(const Environment& env) {
  ParseOptions p;
  p.free_atoms.insert(env.atoms.begin(), env.atoms.end());
  return p;
}

Environment exchanged(Environment env, const std::pair<std::string, std::string>& xy) {
  auto a = std::find(env.vars.begin(), env.vars.end(), xy.first);
  auto b = std::find(env.vars.begin(), env.vars.end(), xy.second);
  if (a == env.vars.end() || b == env.vars.end()) throw std::invalid_argument("exchange: names not in environment");
  std::iter_swap(a, b);
  return env;
}

Outcome run_plugged(const Hypernet& net, std::uint64_t fuel) {
  State s = init(net);
  return run(s, fuel);
}

}  // namespace

CheckResult check_in_context(const LawDef& law, std::size_t instance, const Context& ctx, std::uint64_t fuel) {
  const auto& inst = law.instances.at(instance);
  auto opts = parse_options(law.env);
  TermPtr lhs = parse(inst.lhs, opts);
  TermPtr rhs = parse(inst.rhs, opts);
  Environment rhs_env = law.rhs_exchange ? exchanged(ctx.hole_env, *law.rhs_exchange) : ctx.hole_env;
  CheckResult r;
  r.lhs = run_plugged(plug_translated(ctx, *lhs, ctx.hole_env), fuel);
  r.rhs = run_plugged(plug_translated(ctx, *rhs, rhs_env), fuel);
  for (const auto& rel : law.relations) {
    RefineResult fwd = refines(r.lhs, r.rhs, rel.q);
    if (rel.kind == Relation::Kind::Equivalent) {
      RefineResult back = refines(r.rhs, r.lhs, rel.q);
      if (fwd == RefineResult::Fails || back == RefineResult::Fails)
        fwd = RefineResult::Fails;
      else if (back == RefineResult::Inconclusive)
        fwd = RefineResult::Inconclusive;
    }
    r.per_relation.push_back(fwd);
  }
  return r;
}

namespace detail {

// Folds one check into a verdict; shared by the serial and parallel runners.
void accumulate(Verdict& v, const LawDef& law, std::size_t instance, const Context& ctx, const CheckResult& r,
                std::size_t max_dot) {
  ++v.contexts;
  v.lhs_steps.add(r.lhs);
  v.rhs_steps.add(r.rhs);
  bool open = false;
  for (std::size_t i = 0; i < r.per_relation.size(); ++i) {
    if (r.per_relation[i] == RefineResult::Inconclusive) open = true;
    if (r.per_relation[i] != RefineResult::Fails) continue;
    Counterexample ce{instance, print(*ctx.term), law.relations[i].text(), r.lhs, r.rhs, ""};
    if (v.counterexamples.size() < max_dot) {
      TermPtr lhs = parse(law.instances[instance].lhs, parse_options(law.env));
      ce.dot = to_dot(plug_translated(ctx, *lhs, ctx.hole_env), "counterexample");
    }
    v.counterexamples.push_back(std::move(ce));
  }
  if (open) ++v.inconclusive;
  if (!v.counterexamples.empty())
    v.status = VerdictStatus::Refuted;
  else if (v.inconclusive > 0)
    v.status = VerdictStatus::Inconclusive;
}

Verdict empty_verdict(const LawDef& law) {
  Verdict v;
  v.law = law.name;
  v.cls = law.cls;
  v.relations = law.relations;
  v.instances = law.instances.size();
  return v;
}

}  // namespace detail

Verdict check_contextual(const LawDef& law, const CheckOptions& opts) {
  Verdict v = detail::empty_verdict(law);
  auto contexts = enumerate_contexts(law.cls, opts.pool, opts.size_bound, law.env);
  for (std::size_t i = 0; i < law.instances.size(); ++i)
    for (const auto& ctx : contexts)
      detail::accumulate(v, law, i, ctx, check_in_context(law, i, ctx, opts.fuel), opts.max_dot_dumps);
  return v;
}

Verdict check_contextual(const std::string& lhs, const std::string& rhs, ContextClass cls, Relation rel,
                         const CheckOptions& opts, const Environment& env) {
  LawDef law{"adhoc", env, {{lhs, rhs}}, cls, {rel}, std::nullopt};
  return check_contextual(law, opts);
}

}  // namespace spartan
