#include <algorithm>
#include <functional>

#include "spartan/equiv.hpp"
#include "spartan/translate.hpp"

namespace spartan {

bool holds(Preorder q, std::uint64_t k1, std::uint64_t k2) {
  switch (q) {
    case Preorder::Universal: return true;
    case Preorder::GreaterEq: return k1 >= k2;
    case Preorder::LessEq: return k1 <= k2;
    case Preorder::Equal: return k1 == k2;
  }
  return false;
}

Preorder converse(Preorder q) {
  if (q == Preorder::GreaterEq) return Preorder::LessEq;
  if (q == Preorder::LessEq) return Preorder::GreaterEq;
  return q;
}

std::string_view to_string(Preorder q) {
  switch (q) {
    case Preorder::Universal: return "universal";
    case Preorder::GreaterEq: return "geq";
    case Preorder::LessEq: return "leq";
    case Preorder::Equal: return "eq";
  }
  return "";
}

std::optional<Preorder> parse_preorder(std::string_view s) {
  for (auto q : {Preorder::Universal, Preorder::GreaterEq, Preorder::LessEq, Preorder::Equal})
    if (to_string(q) == s) return q;
  return std::nullopt;
}

std::string_view to_string(RefineResult r) {
  switch (r) {
    case RefineResult::Holds: return "holds";
    case RefineResult::Fails: return "fails";
    case RefineResult::Inconclusive: return "inconclusive";
  }
  return "";
}

RefineResult refines(const Outcome& o1, const Outcome& o2, Preorder q) {
  using K = Outcome::Kind;
  if (o1.kind == K::Stuck) return RefineResult::Holds;
  if (o1.kind == K::Fuel) return RefineResult::Inconclusive;
  if (o2.kind == K::Fuel) return RefineResult::Inconclusive;
  if (o2.kind == K::Stuck) return RefineResult::Fails;
  return holds(q, o1.steps, o2.steps) ? RefineResult::Holds : RefineResult::Fails;
}

RefineResult refines(const State& s1, const State& s2, Preorder q, std::uint64_t fuel) {
  State a = s1, b = s2;
  Outcome o1 = run(a, fuel);
  Outcome o2 = run(b, fuel);
  return refines(o1, o2, q);
}

std::string_view to_string(ContextClass c) { return c == ContextClass::All ? "all" : "bf"; }

std::optional<ContextClass> parse_context_class(std::string_view s) {
  if (s == "all") return ContextClass::All;
  if (s == "bf" || s == "binding-free") return ContextClass::BindingFree;
  return std::nullopt;
}

std::vector<TermPtr> default_pool() {
  std::vector<TermPtr> out;
  for (const char* s : {"0", "tt", "lambda q. q", "ref 0"}) out.push_back(parse(s));
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

using Sized = std::vector<std::pair<TermPtr, Environment>>;

struct Enumerator {
  ContextClass cls;
  const std::vector<TermPtr>& pool;
  std::vector<std::size_t> pool_sizes;
  std::vector<OpSignature> ops;

  Enumerator(ContextClass c, const std::vector<TermPtr>& p) : cls(c), pool(p) {
    for (const auto& t : pool) pool_sizes.push_back(term_size(*t));
    for (auto name : {opname::kApp, opname::kRef, opname::kEq, opname::kAssign, opname::kDeref, opname::kAdd,
                      opname::kSub, opname::kNeg, opname::kLambda})
      ops.push_back(builtin_sig(name));
  }

  // All ways to fill `slots` closed positions with pool terms of total size `budget`.
  void fillers(std::size_t slots, std::size_t budget, std::vector<TermPtr>& acc,
               const std::function<void(const std::vector<TermPtr>&)>& emit) const {
    if (slots == 0) {
      if (budget == 0) emit(acc);
      return;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool_sizes[i] > budget) continue;
      acc.push_back(pool[i]);
      fillers(slots - 1, budget - pool_sizes[i], acc, emit);
      acc.pop_back();
    }
  }

  static std::string fresh_var(const Environment& env) { return "c" + std::to_string(env.vars.size()); }
  static std::string fresh_atom(const Environment& env) { return "n" + std::to_string(env.atoms.size()); }

  // Contexts of exactly `size` in outer environment `env`.
  Sized exact(const Environment& env, std::size_t size) const {
    Sized out;
    if (size == 0) return out;
    if (size == 1) {
      out.emplace_back(mk::hole(kHoleName, env), env);
      return out;
    }
    const std::size_t inner_budget = size - 1;

    // bind x = t in C  and  new a <= t in C
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool_sizes[i] >= inner_budget) continue;
      Environment e = env;
      std::string x = fresh_var(env);
      e.vars.push_back(x);
      for (auto& [c, he] : exact(e, inner_budget - pool_sizes[i])) out.emplace_back(mk::bind(x, pool[i], c), he);
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool_sizes[i] >= inner_budget) continue;
      Environment e = env;
      std::string a = fresh_atom(env);
      e.atoms.insert(e.atoms.begin(), a);
      for (auto& [c, he] : exact(e, inner_budget - pool_sizes[i])) out.emplace_back(mk::new_(a, pool[i], c), he);
    }

    // Hole inside an operation, in an eager or a deferred position.
    for (const auto& sig : ops) {
      const std::size_t arity = sig.eager + sig.deferred.size();
      for (std::size_t pos = 0; pos < arity; ++pos) {
        Environment e = env;
        std::vector<std::string> params;
        if (pos >= sig.eager) {
          for (std::uint32_t k = 0; k < sig.deferred[pos - sig.eager]; ++k) {
            std::string y = "c" + std::to_string(e.vars.size());
            params.push_back(y);
          }
          e.vars.insert(e.vars.begin(), params.begin(), params.end());
        }
        for (std::size_t cs = 1; cs <= inner_budget; ++cs) {
          Sized inner = exact(e, cs);
          if (inner.empty()) continue;
          std::vector<TermPtr> acc;
          fillers(arity - 1, inner_budget - cs, acc, [&](const std::vector<TermPtr>& fill) {
            for (const auto& [c, he] : inner) {
              std::vector<TermPtr> eager, deferred;
              std::size_t f = 0;
              for (std::size_t k = 0; k < arity; ++k) {
                TermPtr arg = k == pos ? c : fill[f++];
                if (k < sig.eager) {
                  eager.push_back(arg);
                } else {
                  std::vector<std::string> ps = k == pos ? params : std::vector<std::string>{};
                  if (k != pos)
                    for (std::uint32_t j = 0; j < sig.deferred[k - sig.eager]; ++j) ps.push_back("d" + std::to_string(j));
                  deferred.push_back(mk::thunk(ps, arg));
                }
              }
              out.emplace_back(mk::op(sig, eager, deferred), he);
            }
          });
        }
      }
    }

    // Hole in a bound position.
    if (cls == ContextClass::All) {
      std::string x = fresh_var(env);
      std::string a = fresh_atom(env);
      for (std::size_t cs = 1; cs < inner_budget; ++cs) {
        std::size_t rest = inner_budget - cs;
        std::vector<TermPtr> bodies;
        for (std::size_t i = 0; i < pool.size(); ++i)
          if (pool_sizes[i] == rest) bodies.push_back(pool[i]);
        std::vector<TermPtr> var_bodies = bodies, atom_bodies = bodies;
        if (rest == 1) {
          var_bodies.push_back(mk::var(x));
          atom_bodies.push_back(mk::atom(a));
        }
        for (const auto& [c, he] : exact(env, cs)) {
          for (const auto& b : var_bodies) out.emplace_back(mk::bind(x, c, b), he);
          for (const auto& b : atom_bodies) out.emplace_back(mk::new_(a, c, b), he);
        }
      }
    }
    return out;
  }
};

}  // namespace

std::vector<Context> enumerate_contexts(ContextClass cls, const std::vector<TermPtr>& pool, std::size_t size_bound,
                                        const Environment& law_env) {
  Enumerator en(cls, pool);
  std::vector<Context> spines;
  for (std::size_t s = 1; s <= size_bound; ++s)
    for (auto& [t, he] : en.exact(law_env, s)) spines.push_back(Context{t, he, s});

  // Closing binders: variables outermost first (each appends), atoms
  // innermost first (each prepends), so the law environment keeps its order.
  const std::size_t names = law_env.vars.size() + law_env.atoms.size();
  std::vector<std::size_t> choice(names, 0);
  std::vector<Context> out;
  if (pool.empty() && names > 0) return out;
  for (;;) {
    for (const auto& sp : spines) {
      TermPtr t = sp.term;
      for (std::size_t j = 0; j < law_env.atoms.size(); ++j)
        t = mk::new_(law_env.atoms[j], pool[choice[law_env.vars.size() + j]], t);
      for (std::size_t i = law_env.vars.size(); i-- > 0;) t = mk::bind(law_env.vars[i], pool[choice[i]], t);
      out.push_back(Context{t, sp.hole_env, sp.size});
    }
    std::size_t k = 0;
    while (k < names && ++choice[k] == pool.size()) choice[k++] = 0;
    if (k == names) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool binding_free_at(const Hypernet& net, int depth) {
  if (depth > 64) throw HypernetError("is_binding_free: nesting too deep");
  std::vector<char> seen(net.vertex_slots(), 0);
  std::vector<VertexId> stack;
  for (auto e : net.edge_ids()) {
    const auto& ed = net.edge(e);
    if (auto* box = std::get_if<BoxLabel>(&ed.label); box && box->content && !binding_free_at(*box->content, depth + 1))
      return false;
    bool start = holds<ContractionLabel>(ed.label) || holds<AtomLabel>(ed.label) || holds<BoxLabel>(ed.label) ||
                 holds<HoleLabel>(ed.label);
    if (!start || ed.sources.empty()) continue;
    for (auto t : ed.targets)
      if (!seen[t.value]) {
        seen[t.value] = 1;
        stack.push_back(t);
      }
  }
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    auto e = net.outgoing(v);
    if (!e) continue;
    const auto& ed = net.edge(*e);
    if (holds<HoleLabel>(ed.label)) return false;
    for (auto t : ed.targets)
      if (!seen[t.value]) {
        seen[t.value] = 1;
        stack.push_back(t);
      }
  }
  return true;
}

}  // namespace

bool is_binding_free(const Hypernet& net) { return binding_free_at(net, 0); }

Hypernet plug_translated(const Context& ctx, const Term& side, const Environment& side_env) {
  Hypernet context = translate(Environment{}, *ctx.term).net;
  Hypernet filler = translate(side_env, side).net;
  if (!(side_env == ctx.hole_env)) {
    auto index_of = [](const std::vector<std::string>& v, const std::string& x) {
      auto it = std::find(v.begin(), v.end(), x);
      if (it == v.end()) throw std::invalid_argument("plug_translated: environments differ in names");
      return static_cast<std::size_t>(it - v.begin());
    };
    if (side_env.vars.size() != ctx.hole_env.vars.size() || side_env.atoms.size() != ctx.hole_env.atoms.size())
      throw std::invalid_argument("plug_translated: environments differ in size");
    std::vector<std::size_t> perm;
    for (const auto& x : ctx.hole_env.vars) perm.push_back(index_of(side_env.vars, x));
    for (const auto& a : ctx.hole_env.atoms) perm.push_back(side_env.vars.size() + index_of(side_env.atoms, a));
    std::vector<std::size_t> in_perm{0};
    filler = permute_interface(filler, in_perm, perm);
  }
  return plug(context, kHoleName, filler);
}

}  // namespace spartan
