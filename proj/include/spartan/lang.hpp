#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spartan/hypernet.hpp"
#include "spartan/ops.hpp"

namespace spartan {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind : std::uint8_t { Var, Atom, New, Bind, Thunk, Op, Hole };

// Ordered, duplicate-free variable and atom lists (x | a).
struct Environment {
  std::vector<std::string> vars;
  std::vector<std::string> atoms;
  bool operator==(const Environment&) const = default;
};

std::string to_string(const Environment& env);

// Spartan abstract syntax. Field use by kind:
//   Var/Atom: name
//   New/Bind: name = binder, children = {bound, body}
//   Thunk:    params = bound variables, children = {body}
//   Op:       sig, children = eager args followed by deferred thunks
//   Hole:     name, hole_env
struct Term {
  TermKind kind = TermKind::Var;
  std::string name;
  std::vector<std::string> params;
  OpSignature sig;
  std::vector<TermPtr> children;
  Environment hole_env;

  const Term& bound() const { return *children.at(0); }
  const Term& body() const { return kind == TermKind::Thunk ? *children.at(0) : *children.at(1); }
  std::size_t eager_count() const { return sig.eager; }
};

bool operator==(const Term& a, const Term& b);

namespace mk {
TermPtr var(std::string x);
TermPtr atom(std::string a);
TermPtr new_(std::string a, TermPtr bound, TermPtr body);
TermPtr bind(std::string x, TermPtr bound, TermPtr body);
TermPtr thunk(std::vector<std::string> params, TermPtr body);
TermPtr op(OpSignature sig, std::vector<TermPtr> eager, std::vector<TermPtr> deferred);
TermPtr hole(std::string name, Environment env);
}  // namespace mk

// ---------------------------------------------------------------------------
// Operation registry

class OpRegistry {
 public:
  void add(OpSignature sig, std::vector<std::string> aliases = {});
  // Accepts canonical names, aliases, and integer numerals.
  std::optional<OpSignature> lookup(std::string_view name) const;
  std::vector<OpSignature> all() const;

 private:
  std::map<std::string, OpSignature, std::less<>> by_name_;
  std::map<std::string, std::string, std::less<>> alias_;
};

// Numerals, lambda, tt, ff, unit (passive); app, ref, eq, assign, deref,
// add, sub, neg (active).
const OpRegistry& builtin_ops();

OpSignature numeral_sig(std::int64_t n);
OpSignature builtin_sig(std::string_view name);

// Convenience constructors over the built-in registry.
namespace mk {
TermPtr num(std::int64_t n);
TermPtr constant(std::string_view name);  // tt, ff, unit
TermPtr lambda(std::string x, TermPtr body);
TermPtr app(TermPtr f, TermPtr a);
TermPtr unary(std::string_view name, TermPtr a);
TermPtr binary(std::string_view name, TermPtr a, TermPtr b);
}  // namespace mk

// ---------------------------------------------------------------------------
// Parsing and printing

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line, int column);
};

struct ParseOptions {
  const OpRegistry* registry = nullptr;  // defaults to builtin_ops()
  std::set<std::string> free_atoms;      // unbound identifiers read as atoms
  Environment hole_env;                  // annotation for a `[ ]` in the text
};

TermPtr parse(std::string_view text, const ParseOptions& opts = {});

// Prints with infix, prefix, application and lambda notation; other sugar
// (let, sequencing, nu) is shown in its expanded form.
std::string print(const Term& t);

// ---------------------------------------------------------------------------
// Typing and syntactic utilities

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Star or Thunk(n); throws TypeError.
VertexLabel typecheck(const Environment& env, const Term& t);
bool is_program(const Term& t);

std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_atoms(const Term& t);
std::set<std::string> all_names(const Term& t);

// All name binders appear inside thunks.
bool is_non_generative(const Term& t);

// Atoms and passive operations whose eager arguments are values.
bool is_value(const Term& t);

// Capture-avoiding t[u/x].
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& u);

// Replaces the hole named `hole` by `filler` (no capture avoidance: the
// hole's environment is exactly what the filler may use).
TermPtr plug_term(const TermPtr& context, const std::string& hole, const TermPtr& filler);

// AST node count; thunk wrappers inside operations are not counted.
std::size_t term_size(const Term& t);

}  // namespace spartan
