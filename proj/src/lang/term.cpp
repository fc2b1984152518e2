#include <algorithm>

#include "spartan/lang.hpp"

namespace spartan {

std::string to_string(const Environment& env) {
  auto join = [](const std::vector<std::string>& xs) {
    if (xs.empty()) return std::string("-");
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i];
    return s;
  };
  return join(env.vars) + " | " + join(env.atoms);
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.name != b.name || a.params != b.params || a.children.size() != b.children.size())
    return false;
  if (a.kind == TermKind::Op && a.sig != b.sig) return false;
  if (a.kind == TermKind::Hole && a.hole_env != b.hole_env) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!(*a.children[i] == *b.children[i])) return false;
  return true;
}

namespace mk {

TermPtr var(std::string x) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->name = std::move(x);
  return t;
}

TermPtr atom(std::string a) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Atom;
  t->name = std::move(a);
  return t;
}

TermPtr new_(std::string a, TermPtr bound, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::New;
  t->name = std::move(a);
  t->children = {std::move(bound), std::move(body)};
  return t;
}

TermPtr bind(std::string x, TermPtr bound, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Bind;
  t->name = std::move(x);
  t->children = {std::move(bound), std::move(body)};
  return t;
}

TermPtr thunk(std::vector<std::string> params, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Thunk;
  t->params = std::move(params);
  t->children = {std::move(body)};
  return t;
}

TermPtr op(OpSignature sig, std::vector<TermPtr> eager, std::vector<TermPtr> deferred) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Op;
  t->name = sig.name;
  t->sig = std::move(sig);
  t->children = std::move(eager);
  for (auto& d : deferred) t->children.push_back(std::move(d));
  return t;
}

TermPtr hole(std::string name, Environment env) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Hole;
  t->name = std::move(name);
  t->hole_env = std::move(env);
  return t;
}

TermPtr num(std::int64_t n) { return op(numeral_sig(n), {}, {}); }
TermPtr constant(std::string_view name) { return op(builtin_sig(name), {}, {}); }
TermPtr lambda(std::string x, TermPtr body) {
  return op(builtin_sig(opname::kLambda), {}, {thunk({std::move(x)}, std::move(body))});
}
TermPtr app(TermPtr f, TermPtr a) { return op(builtin_sig(opname::kApp), {std::move(f), std::move(a)}, {}); }
TermPtr unary(std::string_view name, TermPtr a) { return op(builtin_sig(name), {std::move(a)}, {}); }
TermPtr binary(std::string_view name, TermPtr a, TermPtr b) {
  return op(builtin_sig(name), {std::move(a), std::move(b)}, {});
}

}  // namespace mk

// ---------------------------------------------------------------------------

void OpRegistry::add(OpSignature sig, std::vector<std::string> aliases) {
  for (auto& a : aliases) alias_[a] = sig.name;
  by_name_[sig.name] = std::move(sig);
}

std::optional<OpSignature> OpRegistry::lookup(std::string_view name) const {
  if (auto n = numeral_value(name)) return numeral_sig(*n);
  if (auto it = alias_.find(name); it != alias_.end()) name = it->second;
  if (auto it = by_name_.find(name); it != by_name_.end()) return it->second;
  return std::nullopt;
}

std::vector<OpSignature> OpRegistry::all() const {
  std::vector<OpSignature> out;
  for (const auto& [_, sig] : by_name_) out.push_back(sig);
  return out;
}

OpSignature numeral_sig(std::int64_t n) { return OpSignature{std::to_string(n), 0, {}, Polarity::Passive}; }

const OpRegistry& builtin_ops() {
  static const OpRegistry reg = [] {
    OpRegistry r;
    auto passive = Polarity::Passive;
    auto active = Polarity::Active;
    r.add({std::string(opname::kLambda), 0, {1}, passive}, {"λ"});
    r.add({std::string(opname::kTrue), 0, {}, passive}, {"true"});
    r.add({std::string(opname::kFalse), 0, {}, passive}, {"false"});
    r.add({std::string(opname::kUnit), 0, {}, passive}, {"⟨⟩", "()"});
    r.add({std::string(opname::kApp), 2, {}, active}, {"@→", "@"});
    r.add({std::string(opname::kRef), 1, {}, active}, {});
    r.add({std::string(opname::kEq), 2, {}, active}, {"="});
    r.add({std::string(opname::kAssign), 2, {}, active}, {":="});
    r.add({std::string(opname::kDeref), 1, {}, active}, {"!"});
    r.add({std::string(opname::kAdd), 2, {}, active}, {"+"});
    r.add({std::string(opname::kSub), 2, {}, active}, {"-", "−"});
    r.add({std::string(opname::kNeg), 1, {}, active}, {"−₁"});
    return r;
  }();
  return reg;
}

OpSignature builtin_sig(std::string_view name) {
  auto sig = builtin_ops().lookup(name);
  if (!sig) throw std::invalid_argument("unknown operation: " + std::string(name));
  return *sig;
}

// ---------------------------------------------------------------------------

namespace {

bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

}  // namespace

VertexLabel typecheck(const Environment& env, const Term& t) {
  switch (t.kind) {
    case TermKind::Var:
      if (!contains(env.vars, t.name)) throw TypeError("unbound variable " + t.name);
      return VertexLabel::star();
    case TermKind::Atom:
      if (!contains(env.atoms, t.name)) throw TypeError("unbound atom " + t.name);
      return VertexLabel::star();
    case TermKind::Bind: {
      if (contains(env.vars, t.name)) throw TypeError("bind shadows variable " + t.name);
      if (typecheck(env, t.bound()) != VertexLabel::star()) throw TypeError("bound term of bind is a thunk");
      Environment inner = env;
      inner.vars.push_back(t.name);
      if (typecheck(inner, t.body()) != VertexLabel::star()) throw TypeError("body of bind is a thunk");
      return VertexLabel::star();
    }
    case TermKind::New: {
      if (contains(env.atoms, t.name)) throw TypeError("new shadows atom " + t.name);
      if (typecheck(env, t.bound()) != VertexLabel::star()) throw TypeError("bound term of new is a thunk");
      Environment inner = env;
      inner.atoms.insert(inner.atoms.begin(), t.name);
      if (typecheck(inner, t.body()) != VertexLabel::star()) throw TypeError("body of new is a thunk");
      return VertexLabel::star();
    }
    case TermKind::Thunk: {
      for (std::size_t i = 0; i < t.params.size(); ++i) {
        if (contains(env.vars, t.params[i])) throw TypeError("thunk binder clashes with variable " + t.params[i]);
        for (std::size_t j = 0; j < i; ++j)
          if (t.params[j] == t.params[i]) throw TypeError("thunk binds " + t.params[i] + " twice");
      }
      Environment inner;
      inner.vars = t.params;
      inner.vars.insert(inner.vars.end(), env.vars.begin(), env.vars.end());
      inner.atoms = env.atoms;
      if (typecheck(inner, t.body()) != VertexLabel::star()) throw TypeError("thunk body is a thunk");
      return VertexLabel::thunk(static_cast<std::uint32_t>(t.params.size()));
    }
    case TermKind::Op: {
      const auto& sig = t.sig;
      if (t.children.size() != sig.eager + sig.deferred.size())
        throw TypeError("operation " + sig.name + " applied to the wrong number of arguments");
      for (std::size_t i = 0; i < sig.eager; ++i)
        if (typecheck(env, *t.children[i]) != VertexLabel::star())
          throw TypeError("eager argument of " + sig.name + " is a thunk");
      for (std::size_t j = 0; j < sig.deferred.size(); ++j)
        if (typecheck(env, *t.children[sig.eager + j]) != VertexLabel::thunk(sig.deferred[j]))
          throw TypeError("deferred argument of " + sig.name + " has the wrong thunk arity");
      return VertexLabel::star();
    }
    case TermKind::Hole:
      if (t.hole_env != env)
        throw TypeError("hole annotated with (" + to_string(t.hole_env) + ") used in (" + to_string(env) + ")");
      return VertexLabel::star();
  }
  throw TypeError("unknown term");
}

bool is_program(const Term& t) {
  try {
    return typecheck(Environment{}, t) == VertexLabel::star();
  } catch (const TypeError&) {
    return false;
  }
}

namespace {

void collect_free(const Term& t, std::set<std::string>& bound_v, std::set<std::string>& bound_a,
                  std::set<std::string>* vars, std::set<std::string>* atoms) {
  switch (t.kind) {
    case TermKind::Var:
      if (vars && !bound_v.count(t.name)) vars->insert(t.name);
      return;
    case TermKind::Atom:
      if (atoms && !bound_a.count(t.name)) atoms->insert(t.name);
      return;
    case TermKind::Bind: {
      collect_free(t.bound(), bound_v, bound_a, vars, atoms);
      bool fresh = bound_v.insert(t.name).second;
      collect_free(t.body(), bound_v, bound_a, vars, atoms);
      if (fresh) bound_v.erase(t.name);
      return;
    }
    case TermKind::New: {
      collect_free(t.bound(), bound_v, bound_a, vars, atoms);
      bool fresh = bound_a.insert(t.name).second;
      collect_free(t.body(), bound_v, bound_a, vars, atoms);
      if (fresh) bound_a.erase(t.name);
      return;
    }
    case TermKind::Thunk: {
      std::vector<std::string> added;
      for (auto& p : t.params)
        if (bound_v.insert(p).second) added.push_back(p);
      collect_free(t.body(), bound_v, bound_a, vars, atoms);
      for (auto& p : added) bound_v.erase(p);
      return;
    }
    case TermKind::Op:
      for (auto& c : t.children) collect_free(*c, bound_v, bound_a, vars, atoms);
      return;
    case TermKind::Hole:
      for (auto& x : t.hole_env.vars)
        if (vars && !bound_v.count(x)) vars->insert(x);
      for (auto& a : t.hole_env.atoms)
        if (atoms && !bound_a.count(a)) atoms->insert(a);
      return;
  }
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (!t.name.empty() && t.kind != TermKind::Op) out.insert(t.name);
  for (auto& p : t.params) out.insert(p);
  for (auto& x : t.hole_env.vars) out.insert(x);
  for (auto& a : t.hole_env.atoms) out.insert(a);
  for (auto& c : t.children) collect_names(*c, out);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bv, ba, out;
  collect_free(t, bv, ba, &out, nullptr);
  return out;
}

std::set<std::string> free_atoms(const Term& t) {
  std::set<std::string> bv, ba, out;
  collect_free(t, bv, ba, nullptr, &out);
  return out;
}

std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

bool is_non_generative(const Term& t) {
  switch (t.kind) {
    case TermKind::New: return false;
    case TermKind::Thunk: return true;
    default:
      for (auto& c : t.children)
        if (!is_non_generative(*c)) return false;
      return true;
  }
}

bool is_value(const Term& t) {
  if (t.kind == TermKind::Atom) return true;
  if (t.kind != TermKind::Op || t.sig.is_active()) return false;
  for (std::size_t i = 0; i < t.sig.eager; ++i)
    if (!is_value(*t.children[i])) return false;
  return true;
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int i = 0;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

TermPtr rename_var(const TermPtr& t, const std::string& from, const std::string& to) {
  return substitute(t, from, mk::var(to));
}

// Renames free occurrences of atom `from`; `to` is assumed fresh.
TermPtr rename_atom(const TermPtr& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
    case TermKind::Atom: return t->name == from ? mk::atom(to) : t;
    case TermKind::New:
      if (t->name == from) return mk::new_(t->name, rename_atom(t->children[0], from, to), t->children[1]);
      break;
    case TermKind::Hole:
    case TermKind::Var: return t;
    default: break;
  }
  auto copy = std::make_shared<Term>(*t);
  for (auto& c : copy->children) c = rename_atom(c, from, to);
  return copy;
}

}  // namespace

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& u) {
  switch (t->kind) {
    case TermKind::Var: return t->name == x ? u : t;
    case TermKind::Atom: return t;
    case TermKind::Hole: return t;
    case TermKind::Bind: {
      auto bound = substitute(t->children[0], x, u);
      if (t->name == x) return mk::bind(t->name, bound, t->children[1]);
      auto fv_u = free_vars(*u);
      if (fv_u.count(t->name)) {
        auto avoid = all_names(*t->children[1]);
        avoid.insert(fv_u.begin(), fv_u.end());
        avoid.insert(x);
        auto nn = fresh_name(t->name, avoid);
        return mk::bind(nn, bound, substitute(rename_var(t->children[1], t->name, nn), x, u));
      }
      return mk::bind(t->name, bound, substitute(t->children[1], x, u));
    }
    case TermKind::New: {
      auto bound = substitute(t->children[0], x, u);
      auto fa_u = free_atoms(*u);
      if (fa_u.count(t->name)) {
        auto avoid = all_names(*t->children[1]);
        avoid.insert(fa_u.begin(), fa_u.end());
        auto nn = fresh_name(t->name, avoid);
        return mk::new_(nn, bound, substitute(rename_atom(t->children[1], t->name, nn), x, u));
      }
      return mk::new_(t->name, bound, substitute(t->children[1], x, u));
    }
    case TermKind::Thunk: {
      if (std::find(t->params.begin(), t->params.end(), x) != t->params.end()) return t;
      auto fv_u = free_vars(*u);
      auto params = t->params;
      auto body = t->children[0];
      for (auto& p : params) {
        if (!fv_u.count(p)) continue;
        auto avoid = all_names(*body);
        avoid.insert(fv_u.begin(), fv_u.end());
        avoid.insert(x);
        for (auto& q : params) avoid.insert(q);
        auto nn = fresh_name(p, avoid);
        body = rename_var(body, p, nn);
        p = nn;
      }
      return mk::thunk(params, substitute(body, x, u));
    }
    case TermKind::Op: {
      auto copy = std::make_shared<Term>(*t);
      for (auto& c : copy->children) c = substitute(c, x, u);
      return copy;
    }
  }
  return t;
}

TermPtr plug_term(const TermPtr& context, const std::string& hole, const TermPtr& filler) {
  if (context->kind == TermKind::Hole) return context->name == hole ? filler : context;
  if (context->children.empty()) return context;
  auto copy = std::make_shared<Term>(*context);
  for (auto& c : copy->children) c = plug_term(c, hole, filler);
  return copy;
}

std::size_t term_size(const Term& t) {
  std::size_t n = t.kind == TermKind::Thunk ? 0 : 1;
  for (auto& c : t.children) n += term_size(*c);
  return n;
}

}  // namespace spartan
