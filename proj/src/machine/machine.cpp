#include "spartan/machine.hpp"
#include "spartan/lang.hpp"

#include <algorithm>
#include "json.hpp"

namespace spartan {

namespace {

VertexId input_of(const Hypernet& net) { return net.inputs().at(0); }

std::size_t index_in(const std::vector<VertexId>& vs, VertexId v) {
  return static_cast<std::size_t>(std::find(vs.begin(), vs.end(), v) - vs.begin());
}

bool is_star_contraction(const EdgeLabel& l) {
  auto* c = std::get_if<ContractionLabel>(&l);
  return c && c->sort == Sort::Star;
}

bool is_diamond_contraction(const EdgeLabel& l) {
  auto* c = std::get_if<ContractionLabel>(&l);
  return c && c->sort == Sort::Diamond;
}

TokenKind polarity_token(const OpSignature& sig) { return sig.is_active() ? TokenKind::Rewrite : TokenKind::Value; }

std::optional<std::int64_t> numeral_of(const EdgeLabel& l) {
  auto* sig = op_signature(l);
  if (!sig || !sig->deferred.empty() || sig->eager != 0 || sig->is_active()) return std::nullopt;
  return numeral_value(sig->name);
}

// Token patterns, each checked on its own so that overlaps would show up.
struct Pattern {
  const char* id;
  std::optional<TokenPlace> (*apply)(const Hypernet&, VertexId, TokenKind);
};

std::optional<TokenPlace> rule1(const Hypernet& n, VertexId pos, TokenKind k, std::size_t side, const char* id) {
  if (k != TokenKind::Search) return std::nullopt;
  auto e = n.outgoing(pos);
  if (!e || !is_star_contraction(n.edge(*e).label) || index_in(n.edge(*e).sources, pos) != side) return std::nullopt;
  return TokenPlace{id, pos, TokenKind::Rewrite};
}

std::optional<TokenPlace> rule1a(const Hypernet& n, VertexId p, TokenKind k) { return rule1(n, p, k, 0, "1a"); }
std::optional<TokenPlace> rule1b(const Hypernet& n, VertexId p, TokenKind k) { return rule1(n, p, k, 1, "1b"); }

std::optional<TokenPlace> rule2(const Hypernet& n, VertexId pos, TokenKind k) {
  if (k != TokenKind::Search) return std::nullopt;
  auto e = n.outgoing(pos);
  if (!e || !holds<InstanceLabel>(n.edge(*e).label)) return std::nullopt;
  return TokenPlace{"2", pos, TokenKind::Value};
}

std::optional<TokenPlace> rule3(const Hypernet& n, VertexId pos, TokenKind k) {
  if (k != TokenKind::Search) return std::nullopt;
  auto e = n.outgoing(pos);
  if (!e) return std::nullopt;
  auto* sig = op_signature(n.edge(*e).label);
  if (!sig || sig->eager == 0) return std::nullopt;
  return TokenPlace{"3", n.edge(*e).targets[0], TokenKind::Search};
}

// Eager-argument index of pos under its incoming operation edge.
std::optional<std::pair<EdgeId, std::size_t>> eager_slot(const Hypernet& n, VertexId pos) {
  auto e = n.incoming(pos);
  if (!e) return std::nullopt;
  auto* sig = op_signature(n.edge(*e).label);
  if (!sig) return std::nullopt;
  std::size_t i = index_in(n.edge(*e).targets, pos);
  if (i >= sig->eager) return std::nullopt;
  return std::make_pair(*e, i);
}

std::optional<TokenPlace> rule4(const Hypernet& n, VertexId pos, TokenKind k) {
  if (k != TokenKind::Value) return std::nullopt;
  auto slot = eager_slot(n, pos);
  if (!slot) return std::nullopt;
  const auto& ed = n.edge(slot->first);
  if (slot->second + 1 >= op_signature(ed.label)->eager) return std::nullopt;
  return TokenPlace{"4", ed.targets[slot->second + 1], TokenKind::Search};
}

std::optional<TokenPlace> rule5a(const Hypernet& n, VertexId pos, TokenKind k) {
  if (k != TokenKind::Value) return std::nullopt;
  auto slot = eager_slot(n, pos);
  if (!slot) return std::nullopt;
  const auto& ed = n.edge(slot->first);
  const auto* sig = op_signature(ed.label);
  if (slot->second + 1 != sig->eager) return std::nullopt;
  return TokenPlace{"5a", ed.sources[0], polarity_token(*sig)};
}

std::optional<TokenPlace> rule5b(const Hypernet& n, VertexId pos, TokenKind k) {
  if (k != TokenKind::Search) return std::nullopt;
  auto e = n.outgoing(pos);
  if (!e) return std::nullopt;
  auto* sig = op_signature(n.edge(*e).label);
  if (!sig || sig->eager != 0) return std::nullopt;
  return TokenPlace{"5b", pos, polarity_token(*sig)};
}

constexpr Pattern kSearchRules[] = {{"1a", rule1a}, {"1b", rule1b}, {"2", rule2},   {"3", rule3},
                                    {"4", rule4},   {"5a", rule5a}, {"5b", rule5b}};

// ---------------------------------------------------------------------------
// Rewrites

struct Stuck {
  std::string reason;
};

// Copies the sub-net (edges, reachable from old_root) so that the copy hangs
// from new_root; each output o and its copy o' are joined by a fresh
// contraction that takes over o's outgoing connection.
void duplicate_with_sharing(Hypernet& n, VertexId old_root, VertexId new_root, const std::vector<EdgeId>& edges,
                            const std::vector<VertexId>& outputs) {
  std::vector<std::optional<VertexId>> map(n.vertex_slots());
  map[old_root.value] = new_root;
  for (auto e : edges) {
    const auto ed = n.edge(e);  // copy: add_edge may reallocate
    std::vector<VertexId> s, t;
    for (auto v : ed.sources) {
      if (!map[v.value]) throw MachineError("duplicate: sub-net not in traversal order");
      s.push_back(*map[v.value]);
    }
    for (auto v : ed.targets) {
      if (!map[v.value]) map[v.value] = n.add_vertex(n.label(v));
      t.push_back(*map[v.value]);
    }
    n.add_edge(ed.label, std::move(s), std::move(t));
  }
  for (auto o : outputs) {
    VertexId copy = *map[o.value];
    auto consumer = n.outgoing(o);
    if (!consumer) throw MachineError("duplicate: shared output has no consumer");
    VertexId u = n.add_vertex(n.label(o));
    std::size_t idx = index_in(n.edge(*consumer).sources, o);
    n.replace_source(*consumer, idx, u);
    Sort sort = n.label(o) == VertexLabel::diamond() ? Sort::Diamond : Sort::Star;
    n.add_edge(ContractionLabel{sort}, {o, copy}, {u});
  }
}

std::optional<Stuck> copy_step(State& s) {
  Hypernet& n = s.net;
  EdgeId c0 = *n.outgoing(s.pos);
  std::size_t side = index_in(n.edge(c0).sources, s.pos);
  VertexId v = n.edge(c0).targets[0];
  std::size_t guard = 0;
  while (auto nxt = n.outgoing(v)) {
    if (!is_star_contraction(n.edge(*nxt).label)) break;
    if (++guard > n.edge_count()) return Stuck{"copy: cyclic contraction chain"};
    v = n.edge(*nxt).targets[0];
  }
  auto h = find_copyable_at(n, v);
  if (!h) return Stuck{"copy: contraction chain does not end at a copyable net"};
  std::vector<EdgeId> edges{h->head};
  std::vector<VertexId> outputs;
  const auto& head = n.edge(h->head);
  if (holds<InstanceLabel>(head.label)) {
    outputs = head.targets;
  } else {
    const auto* sig = op_signature(head.label);
    for (std::size_t i = 0; i < sig->eager; ++i) outputs.push_back(head.targets[i]);
    for (auto b : h->boxes) {
      edges.push_back(b);
      for (auto t : n.edge(b).targets) outputs.push_back(t);
    }
  }
  VertexId sibling = n.edge(c0).sources[1 - side];
  VertexId t0 = n.edge(c0).targets[0];
  n.remove_edge(c0);
  n.fuse(t0, sibling);
  duplicate_with_sharing(n, v, s.pos, edges, outputs);
  return std::nullopt;
}

std::optional<EdgeId> follow_name(const Hypernet& n, EdgeId instance) {
  VertexId w = n.edge(instance).targets[0];
  std::size_t guard = 0;
  for (;;) {
    auto e = n.outgoing(w);
    if (!e) return std::nullopt;
    const auto& l = n.edge(*e).label;
    if (holds<AtomLabel>(l)) return *e;
    if (!is_diamond_contraction(l) || ++guard > n.edge_count()) return std::nullopt;
    w = n.edge(*e).targets[0];
  }
}

std::optional<EdgeId> single_edge(const Hypernet& n, const std::optional<SubNet>& g,
                                  bool (*pred)(const EdgeLabel&)) {
  if (!g || g->edges.size() != 1 || !pred(n.edge(g->edges[0]).label)) return std::nullopt;
  return g->edges[0];
}

bool is_instance(const EdgeLabel& l) { return holds<InstanceLabel>(l); }
bool is_numeral(const EdgeLabel& l) { return numeral_of(l).has_value(); }
bool is_lambda(const EdgeLabel& l) {
  auto* sig = op_signature(l);
  return sig && sig->name == opname::kLambda && sig->eager == 0 && sig->deferred == std::vector<std::uint32_t>{1};
}

// Feeds a vacated name leaf so the diamond contraction tree keeps its arity.
void discard_instance(Hypernet& n, EdgeId instance) {
  VertexId w = n.edge(instance).targets[0];
  VertexId r = n.edge(instance).sources[0];
  n.remove_edge(instance);
  n.add_edge(WeakeningLabel{Sort::Diamond}, {}, {w});
  if (n.vertex(r).in_degree == 0 && n.vertex(r).out_degree == 0) n.remove_vertex(r);
}

void remove_if_isolated(Hypernet& n, VertexId v) {
  if (n.vertex_alive(v) && n.vertex(v).in_degree == 0 && n.vertex(v).out_degree == 0) n.remove_vertex(v);
}

std::optional<Stuck> compute_step(State& s) {
  Hypernet& n = s.net;
  VertexId pos = s.pos;
  EdgeId e = *n.outgoing(pos);
  const OpSignature sig = *op_signature(n.edge(e).label);
  const std::vector<VertexId> args(n.edge(e).targets.begin(), n.edge(e).targets.begin() + sig.eager);
  std::vector<std::optional<SubNet>> stable;
  for (auto r : args) {
    stable.push_back(max_stable_from(n, r));
    if (!stable.back()) return Stuck{op_symbol(sig.name) + ": eager argument is not a stable net"};
  }
  const std::string& name = sig.name;

  if (name == opname::kApp && sig.eager == 2) {
    auto lam = single_edge(n, stable[0], is_lambda);
    if (!lam) return Stuck{"@: function argument is not a lambda"};
    VertexId d = n.edge(*lam).targets[0];
    auto b = n.outgoing(d);
    if (!b || !holds<BoxLabel>(n.edge(*b).label)) return Stuck{"@: lambda body is not a box"};
    auto content = std::get<BoxLabel>(n.edge(*b).label).content;
    std::vector<VertexId> outs{args[1]};
    for (auto t : n.edge(*b).targets) outs.push_back(t);
    n.remove_edge(e);
    n.remove_edge(*lam);
    n.remove_edge(*b);
    embed(n, *content, std::vector<VertexId>{pos}, outs);
    remove_if_isolated(n, args[0]);
    remove_if_isolated(n, d);
    return std::nullopt;
  }
  if (name == opname::kRef && sig.eager == 1) {
    n.remove_edge(e);
    VertexId u = n.add_vertex(VertexLabel::diamond());
    n.add_edge(InstanceLabel{}, {pos}, {u});
    n.add_edge(AtomLabel{}, {u}, {args[0]});
    return std::nullopt;
  }
  if (name == opname::kEq && sig.eager == 2) {
    auto i1 = single_edge(n, stable[0], is_instance);
    auto i2 = single_edge(n, stable[1], is_instance);
    if (!i1 || !i2) return Stuck{"=: arguments are not names"};
    auto a1 = follow_name(n, *i1), a2 = follow_name(n, *i2);
    if (!a1 || !a2) return Stuck{"=: name does not lead to an atom"};
    bool same = *a1 == *a2;
    n.remove_edge(e);
    discard_instance(n, *i1);
    discard_instance(n, *i2);
    n.add_edge(OpLabel{builtin_sig(same ? opname::kTrue : opname::kFalse)}, {pos}, {});
    return std::nullopt;
  }
  if (name == opname::kAssign && sig.eager == 2) {
    auto i1 = single_edge(n, stable[0], is_instance);
    if (!i1) return Stuck{":=: first argument is not a name"};
    auto atom = follow_name(n, *i1);
    if (!atom) return Stuck{":=: name does not lead to an atom"};
    VertexId old_value = n.edge(*atom).targets[0];
    n.remove_edge(e);
    n.replace_target(*atom, 0, args[1]);
    n.add_edge(WeakeningLabel{Sort::Star}, {}, {old_value});
    n.fuse(pos, args[0]);
    return std::nullopt;
  }
  if (name == opname::kDeref && sig.eager == 1) {
    auto i1 = single_edge(n, stable[0], is_instance);
    if (!i1) return Stuck{"!: argument is not a name"};
    auto atom = follow_name(n, *i1);
    if (!atom) return Stuck{"!: name does not lead to an atom"};
    VertexId stored = n.edge(*atom).targets[0];
    auto value = max_stable_from(n, stored);
    if (!value) return Stuck{"!: stored value is not stable"};
    std::vector<EdgeId> edges = value->edges;
    std::vector<VertexId> outputs;
    for (auto o : value->outputs) {
      if (n.label(o).sort != Sort::Thunk) {
        outputs.push_back(o);
        continue;
      }
      auto b = n.outgoing(o);
      if (!b || !holds<BoxLabel>(n.edge(*b).label)) return Stuck{"!: stored thunk is not a box"};
      edges.push_back(*b);
      for (auto t : n.edge(*b).targets) outputs.push_back(t);
    }
    n.remove_edge(e);
    duplicate_with_sharing(n, stored, pos, edges, outputs);
    discard_instance(n, *i1);
    return std::nullopt;
  }
  if ((name == opname::kAdd || name == opname::kSub) && sig.eager == 2) {
    auto n1 = single_edge(n, stable[0], is_numeral);
    auto n2 = single_edge(n, stable[1], is_numeral);
    if (!n1 || !n2) return Stuck{op_symbol(name) + ": arguments are not numerals"};
    std::int64_t a = *numeral_of(n.edge(*n1).label), b = *numeral_of(n.edge(*n2).label), p = 0;
    bool overflow = name == opname::kAdd ? __builtin_add_overflow(a, b, &p) : __builtin_sub_overflow(a, b, &p);
    if (overflow) return Stuck{op_symbol(name) + ": integer overflow"};
    n.remove_edge(e);
    n.remove_edge(*n1);
    n.remove_edge(*n2);
    remove_if_isolated(n, args[0]);
    remove_if_isolated(n, args[1]);
    n.add_edge(OpLabel{numeral_sig(p)}, {pos}, {});
    return std::nullopt;
  }
  if (name == opname::kNeg && sig.eager == 1) {
    auto n1 = single_edge(n, stable[0], is_numeral);
    if (!n1) return Stuck{"neg: argument is not a numeral"};
    std::int64_t a = *numeral_of(n.edge(*n1).label), p = 0;
    if (__builtin_sub_overflow(std::int64_t{0}, a, &p)) return Stuck{"neg: integer overflow"};
    n.remove_edge(e);
    n.remove_edge(*n1);
    remove_if_isolated(n, args[0]);
    n.add_edge(OpLabel{numeral_sig(p)}, {pos}, {});
    return std::nullopt;
  }
  return Stuck{"no rewrite rule for operation " + op_symbol(name)};
}

void maybe_compact(State& s) {
  const auto& n = s.net;
  if (n.vertex_slots() < 256 || n.vertex_slots() < 2 * n.vertex_count()) return;
  auto map = s.net.compact();
  s.pos = *map[s.pos.value];
}

Transition make_transition(StepKind kind, std::string rule, const State& s) {
  return Transition{kind, std::move(rule), s.token, s.net.vertex_count() + 1, s.net.edge_count() + 1};
}

}  // namespace

// ---------------------------------------------------------------------------

State init(const Hypernet& net) {
  if (count_tokens(net) != 0) throw MachineError("init: net already contains a token");
  auto problems = validate(net, true);
  if (!problems.empty()) throw MachineError("init: invalid net: " + problems.front().where + " " + problems.front().message);
  if (net.inputs().size() != 1 || net.label(net.inputs()[0]) != VertexLabel::star() || !net.outputs().empty())
    throw MachineError("init: net must have type * => epsilon");
  return State{net, net.inputs()[0], TokenKind::Search};
}

bool is_initial(const State& s) { return s.token == TokenKind::Search && s.pos == input_of(s.net); }
bool is_final(const State& s) { return s.token == TokenKind::Value && s.pos == input_of(s.net); }

Hypernet focussed(const State& s) {
  Hypernet n = s.net;
  VertexId src = n.add_vertex(VertexLabel::star());
  if (s.pos == input_of(n)) {
    n.set_inputs({src});
  } else {
    auto in = n.incoming(s.pos);
    if (!in) throw MachineError("focussed: token position has no incoming edge");
    n.replace_target(*in, index_in(n.edge(*in).targets, s.pos), src);
  }
  n.add_edge(TokenLabel{s.token}, {src}, {s.pos});
  return n;
}

std::string Transition::kind_text() const {
  switch (kind) {
    case StepKind::Search: return "search:" + rule;
    case StepKind::Copy: return "copy";
    case StepKind::Compute: return "compute:" + rule;
  }
  return "";
}

std::optional<TokenPlace> search_move(const Hypernet& net, VertexId pos, TokenKind token) {
  if (token == TokenKind::Value && pos == input_of(net)) return std::nullopt;
  for (const auto& p : kSearchRules)
    if (auto r = p.apply(net, pos, token)) return r;
  return std::nullopt;
}

std::vector<std::string> matching_rules(const State& s) {
  std::vector<std::string> out;
  if (is_final(s)) return out;
  for (const auto& p : kSearchRules)
    if (p.apply(s.net, s.pos, s.token)) out.push_back(p.id);
  if (s.token == TokenKind::Rewrite) {
    if (auto e = s.net.outgoing(s.pos)) {
      const auto& l = s.net.edge(*e).label;
      if (is_star_contraction(l)) out.push_back("copy");
      if (is_active_op(l)) out.push_back("compute:" + op_symbol(op_signature(l)->name));
    }
  }
  return out;
}

std::optional<TokenPlace> inverse_search(const State& s) {
  const Hypernet& n = s.net;
  if (s.token == TokenKind::Search) {
    auto slot = eager_slot(n, s.pos);
    if (!slot) return std::nullopt;
    const auto& ed = n.edge(slot->first);
    if (slot->second == 0) return TokenPlace{"3", ed.sources[0], TokenKind::Search};
    return TokenPlace{"4", ed.targets[slot->second - 1], TokenKind::Value};
  }
  auto e = n.outgoing(s.pos);
  if (!e) return std::nullopt;
  const auto& ed = n.edge(*e);
  if (s.token == TokenKind::Rewrite && is_star_contraction(ed.label))
    return TokenPlace{index_in(ed.sources, s.pos) == 0 ? "1a" : "1b", s.pos, TokenKind::Search};
  if (s.token == TokenKind::Value && holds<InstanceLabel>(ed.label)) return TokenPlace{"2", s.pos, TokenKind::Search};
  auto* sig = op_signature(ed.label);
  if (!sig || polarity_token(*sig) != s.token) return std::nullopt;
  if (sig->eager == 0) return TokenPlace{"5b", s.pos, TokenKind::Search};
  return TokenPlace{"5a", ed.targets[sig->eager - 1], TokenKind::Value};
}

bool is_rooted(const State& s) {
  VertexId pos = input_of(s.net);
  TokenKind tok = TokenKind::Search;
  std::size_t bound = 4 * (s.net.edge_count() + 1) * 8;
  for (std::size_t i = 0; i <= bound; ++i) {
    if (pos == s.pos && tok == s.token) return true;
    auto mv = search_move(s.net, pos, tok);
    if (!mv) return false;
    pos = mv->pos;
    tok = mv->token;
  }
  return false;
}

StepResult step(State& s) {
  StepResult r;
  if (is_final(s)) {
    r.status = StepStatus::Final;
    return r;
  }
  if (s.token == TokenKind::Rewrite) {
    auto e = s.net.outgoing(s.pos);
    std::optional<Stuck> stuck;
    StepKind kind = StepKind::Compute;
    std::string rule;
    if (e && is_star_contraction(s.net.edge(*e).label)) {
      kind = StepKind::Copy;
      stuck = copy_step(s);
    } else if (e && is_active_op(s.net.edge(*e).label)) {
      kind = StepKind::Compute;
      rule = op_symbol(op_signature(s.net.edge(*e).label)->name);
      stuck = compute_step(s);
    } else {
      stuck = Stuck{"rewrite token is not above a contraction or an active operation"};
    }
    if (stuck) {
      r.status = StepStatus::Stuck;
      r.reason = stuck->reason;
      return r;
    }
    s.token = TokenKind::Search;
    maybe_compact(s);
    r.transition = make_transition(kind, rule, s);
    return r;
  }
  auto mv = search_move(s.net, s.pos, s.token);
  if (!mv) {
    r.status = StepStatus::Stuck;
    r.reason = s.token == TokenKind::Search ? "search token matches no interaction rule"
                                            : "value token is not at an eager argument";
    return r;
  }
  s.pos = mv->pos;
  s.token = mv->token;
  r.transition = make_transition(StepKind::Search, mv->rule, s);
  return r;
}

std::string result_text(const State& s) {
  auto e = s.net.outgoing(input_of(s.net));
  if (!e) return "";
  const auto& l = s.net.edge(*e).label;
  if (holds<InstanceLabel>(l)) return "name";
  if (auto* sig = op_signature(l)) return op_symbol(sig->name);
  return label_text(l);
}

std::string to_string(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Final: return "FINAL " + std::to_string(o.steps);
    case Outcome::Kind::Stuck: return "STUCK " + std::to_string(o.steps) + " " + o.reason;
    case Outcome::Kind::Fuel: return "FUEL " + std::to_string(o.steps);
  }
  return "";
}

Outcome run(State& s, std::uint64_t fuel, const StepObserver& observer) {
  std::uint64_t steps = 0;
  for (;;) {
    if (is_final(s)) return Outcome{Outcome::Kind::Final, steps, ""};
    if (steps >= fuel) return Outcome{Outcome::Kind::Fuel, steps, ""};
    StepResult r = step(s);
    if (r.status == StepStatus::Stuck) return Outcome{Outcome::Kind::Stuck, steps, r.reason};
    if (observer) observer(steps, r.transition, s);
    ++steps;
  }
}

TraceResult trace(State s, std::uint64_t fuel) {
  TraceResult t;
  t.outcome = run(s, fuel, [&](std::uint64_t, const Transition& tr, const State&) { t.transitions.push_back(tr); });
  return t;
}

std::string trace_record_json(std::uint64_t index, const Transition& t) {
  static const char* const names[] = {"q", "v", "rw"};
  nlohmann::ordered_json j;
  j["step"] = index;
  j["kind"] = t.kind_text();
  j["token"] = names[static_cast<int>(t.token_after)];
  j["vertices"] = t.vertices;
  j["edges"] = t.edges;
  return j.dump();
}

}  // namespace spartan
