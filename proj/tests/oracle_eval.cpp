#include "oracle_eval.hpp"

#include <stdexcept>

namespace oracle {

using namespace spartan;

namespace {

TermPtr rename_free_atom(const TermPtr& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
    case TermKind::Atom: return t->name == from ? mk::atom(to) : t;
    case TermKind::Var:
    case TermKind::Hole: return t;
    case TermKind::New:
      if (t->name == from) return mk::new_(t->name, rename_free_atom(t->children[0], from, to), t->children[1]);
      return mk::new_(t->name, rename_free_atom(t->children[0], from, to), rename_free_atom(t->children[1], from, to));
    case TermKind::Bind:
      return mk::bind(t->name, rename_free_atom(t->children[0], from, to), rename_free_atom(t->children[1], from, to));
    case TermKind::Thunk: return mk::thunk(t->params, rename_free_atom(t->children[0], from, to));
    case TermKind::Op: {
      std::vector<TermPtr> eager, deferred;
      for (std::size_t i = 0; i < t->children.size(); ++i)
        (i < t->sig.eager ? eager : deferred).push_back(rename_free_atom(t->children[i], from, to));
      return mk::op(t->sig, eager, deferred);
    }
  }
  return t;
}

bool is_op(const Term& t, std::string_view name) { return t.kind == TermKind::Op && t.sig.name == name; }

std::optional<std::int64_t> number(const Term& t) {
  if (t.kind != TermKind::Op || !t.children.empty()) return std::nullopt;
  return numeral_value(t.sig.name);
}

}  // namespace

void Evaluator::tick() {
  if (--fuel_ < 0) throw std::runtime_error("oracle: out of fuel");
}

TermPtr Evaluator::fresh_name() { return mk::atom("#" + std::to_string(counter_++)); }

TermPtr Evaluator::eval(const TermPtr& t) {
  tick();
  switch (t->kind) {
    case TermKind::Atom: return t;
    case TermKind::Var:
    case TermKind::Hole:
    case TermKind::Thunk: throw Stuck{};
    case TermKind::Bind: return eval(substitute(t->children[1], t->name, t->children[0]));
    case TermKind::New: {
      TermPtr a = fresh_name();
      store_[a->name] = t->children[0];
      return eval(rename_free_atom(t->children[1], t->name, a->name));
    }
    case TermKind::Op: break;
  }
  const Term& op = *t;
  if (!op.sig.is_active()) {
    // Passive: evaluate eager arguments, keep thunks.
    std::vector<TermPtr> eager, deferred;
    for (std::size_t i = 0; i < op.children.size(); ++i) {
      if (i < op.sig.eager)
        eager.push_back(eval(op.children[i]));
      else
        deferred.push_back(op.children[i]);
    }
    return mk::op(op.sig, eager, deferred);
  }
  std::vector<TermPtr> args;
  for (std::size_t i = 0; i < op.sig.eager; ++i) args.push_back(eval(op.children[i]));
  const std::string& n = op.sig.name;
  if (n == opname::kApp) {
    if (!is_op(*args[0], opname::kLambda)) throw Stuck{};
    const Term& th = *args[0]->children[0];
    return eval(substitute(th.children[0], th.params[0], args[1]));
  }
  if (n == opname::kRef) {
    TermPtr a = fresh_name();
    store_[a->name] = args[0];
    return a;
  }
  if (n == opname::kEq) {
    if (args[0]->kind != TermKind::Atom || args[1]->kind != TermKind::Atom) throw Stuck{};
    return mk::constant(args[0]->name == args[1]->name ? opname::kTrue : opname::kFalse);
  }
  if (n == opname::kAssign) {
    if (args[0]->kind != TermKind::Atom) throw Stuck{};
    store_[args[0]->name] = args[1];
    return args[0];
  }
  if (n == opname::kDeref) {
    if (args[0]->kind != TermKind::Atom) throw Stuck{};
    const TermPtr& v = store_.at(args[0]->name);
    if (!is_value(*v)) throw Stuck{};
    return v;
  }
  if (n == opname::kAdd || n == opname::kSub) {
    auto a = number(*args[0]), b = number(*args[1]);
    if (!a || !b) throw Stuck{};
    return mk::num(n == opname::kAdd ? *a + *b : *a - *b);
  }
  if (n == opname::kNeg) {
    auto a = number(*args[0]);
    if (!a) throw Stuck{};
    return mk::num(-*a);
  }
  throw Stuck{};
}

Result Evaluator::run(const TermPtr& t, int fuel) {
  fuel_ = fuel;
  try {
    TermPtr v = eval(t);
    if (v->kind == TermKind::Atom) return {false, "name"};
    if (is_op(*v, opname::kUnit)) return {false, "()"};
    return {false, v->sig.name};
  } catch (const Stuck&) {
    return {true, ""};
  }
}

}  // namespace oracle
