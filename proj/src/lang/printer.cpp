#include "spartan/lang.hpp"

namespace spartan {

namespace {

// Binding strength, loosest first.
enum Level : int { kBinder = 0, kAssign = 1, kEq = 2, kAdd = 3, kApp = 4, kPrefix = 5, kAtom = 6 };

bool is_builtin(const Term& t, std::string_view name) {
  if (t.kind != TermKind::Op || t.sig.name != name) return false;
  auto sig = builtin_ops().lookup(name);
  return sig && *sig == t.sig;
}

std::string print_at(const Term& t, int need);

std::string wrap(std::string s, int own, int need) { return own < need ? "(" + s + ")" : s; }

std::string print_generic(const Term& t) {
  std::string s = t.sig.name + "(";
  for (std::size_t i = 0; i < t.sig.eager; ++i) s += (i ? ", " : "") + print_at(*t.children[i], kAssign);
  s += ";";
  for (std::size_t j = 0; j < t.sig.deferred.size(); ++j) {
    const Term& th = *t.children[t.sig.eager + j];
    s += j ? ", [" : " [";
    for (std::size_t k = 0; k < th.params.size(); ++k) s += (k ? " " : "") + th.params[k];
    s += "] " + print_at(th.body(), kAssign);
  }
  return s + ")";
}

std::string print_at(const Term& t, int need) {
  switch (t.kind) {
    case TermKind::Var:
    case TermKind::Atom: return t.name;
    case TermKind::Hole: return "[ ]";
    case TermKind::Bind:
      return wrap("bind " + t.name + " = " + print_at(t.bound(), kBinder) + " in " + print_at(t.body(), kBinder),
                  kBinder, need);
    case TermKind::New:
      return wrap("new " + t.name + " <= " + print_at(t.bound(), kBinder) + " in " + print_at(t.body(), kBinder),
                  kBinder, need);
    case TermKind::Thunk: {
      std::string s = "[";
      for (std::size_t k = 0; k < t.params.size(); ++k) s += (k ? " " : "") + t.params[k];
      return s + "] " + print_at(t.body(), kAssign);
    }
    case TermKind::Op: break;
  }
  if (auto n = numeral_value(t.sig.name); n && t.children.empty() && t.sig == numeral_sig(*n))
    return *n < 0 ? wrap(t.sig.name, kPrefix, need) : t.sig.name;
  if (is_builtin(t, opname::kTrue)) return "tt";
  if (is_builtin(t, opname::kFalse)) return "ff";
  if (is_builtin(t, opname::kUnit)) return "()";
  if (is_builtin(t, opname::kLambda) && t.children[0]->params.size() == 1)
    return wrap("lambda " + t.children[0]->params[0] + ". " + print_at(t.children[0]->body(), kBinder), kBinder, need);
  if (is_builtin(t, opname::kApp))
    return wrap(print_at(*t.children[0], kApp) + " " + print_at(*t.children[1], kAtom), kApp, need);
  if (is_builtin(t, opname::kAssign))
    return wrap(print_at(*t.children[0], kEq) + " := " + print_at(*t.children[1], kAssign), kAssign, need);
  if (is_builtin(t, opname::kEq))
    return wrap(print_at(*t.children[0], kEq) + " = " + print_at(*t.children[1], kAdd), kEq, need);
  if (is_builtin(t, opname::kAdd) || is_builtin(t, opname::kSub)) {
    std::string sym = t.sig.name == opname::kAdd ? " + " : " - ";
    return wrap(print_at(*t.children[0], kAdd) + sym + print_at(*t.children[1], kApp), kAdd, need);
  }
  if (is_builtin(t, opname::kDeref)) return wrap("!" + print_at(*t.children[0], kPrefix), kPrefix, need);
  if (is_builtin(t, opname::kNeg)) return wrap("neg " + print_at(*t.children[0], kPrefix), kPrefix, need);
  if (is_builtin(t, opname::kRef)) return wrap("ref " + print_at(*t.children[0], kPrefix), kPrefix, need);
  return print_generic(t);
}

}  // namespace

std::string print(const Term& t) { return print_at(t, kBinder); }

}  // namespace spartan
