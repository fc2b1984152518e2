#include <algorithm>
#include <charconv>
#include <limits>

#include "spartan/hypernet.hpp"

namespace spartan {

std::optional<std::int64_t> numeral_value(std::string_view name) {
  if (name.empty()) return std::nullopt;
  std::size_t digits_from = (name[0] == '-') ? 1 : 0;
  if (digits_from == name.size()) return std::nullopt;
  for (std::size_t i = digits_from; i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), value);
  if (ec != std::errc{} || ptr != name.data() + name.size()) return std::nullopt;
  return value;
}

std::string op_symbol(std::string_view name) {
  if (name == opname::kApp) return "@";
  if (name == opname::kEq) return "=";
  if (name == opname::kAssign) return ":=";
  if (name == opname::kDeref) return "!";
  if (name == opname::kAdd) return "+";
  if (name == opname::kSub) return "-";
  if (name == opname::kUnit) return "()";
  return std::string(name);
}

std::string to_string(VertexLabel label) {
  switch (label.sort) {
    case Sort::Star: return "*";
    case Sort::Diamond: return "<>";
    case Sort::Thunk: return "T" + std::to_string(label.thunk_arity);
  }
  return "?";
}

std::string_view token_glyph(TokenKind kind) {
  switch (kind) {
    case TokenKind::Search: return "?";
    case TokenKind::Value: return "v";
    case TokenKind::Rewrite: return "!";
  }
  return "?";
}

static VertexLabel sort_label(Sort s) { return s == Sort::Diamond ? VertexLabel::diamond() : VertexLabel::star(); }

static constexpr VertexLabel star = VertexLabel::star();
static constexpr VertexLabel dia = VertexLabel::diamond();

EdgeType edge_type(const EdgeLabel& label) {
  struct Visitor {
    EdgeType operator()(const OpLabel& op) const {
      EdgeType t{{star}, {}};
      t.targets.assign(op.sig.eager, star);
      for (auto n : op.sig.deferred) t.targets.push_back(VertexLabel::thunk(n));
      return t;
    }
    EdgeType operator()(const InstanceLabel&) const { return {{star}, {dia}}; }
    EdgeType operator()(const AtomLabel&) const { return {{dia}, {star}}; }
    EdgeType operator()(const ContractionLabel& c) const {
      auto l = sort_label(c.sort);
      return {{l, l}, {l}};
    }
    EdgeType operator()(const WeakeningLabel& w) const { return {{}, {sort_label(w.sort)}}; }
    EdgeType operator()(const TokenLabel&) const { return {{star}, {star}}; }
    EdgeType operator()(const BoxLabel& b) const {
      EdgeType t{{VertexLabel::thunk(b.bound)}, {}};
      if (!b.content) return t;
      const auto& outs = b.content->outputs();
      for (std::size_t i = b.bound; i < outs.size(); ++i) t.targets.push_back(b.content->label(outs[i]));
      return t;
    }
    EdgeType operator()(const HoleLabel& h) const { return {h.sources, h.targets}; }
  };
  return std::visit(Visitor{}, label);
}

std::string label_text(const EdgeLabel& label) {
  struct Visitor {
    std::string operator()(const OpLabel& op) const { return op_symbol(op.sig.name); }
    std::string operator()(const InstanceLabel&) const { return "I"; }
    std::string operator()(const AtomLabel&) const { return "o"; }
    std::string operator()(const ContractionLabel& c) const { return c.sort == Sort::Diamond ? "C<>" : "C*"; }
    std::string operator()(const WeakeningLabel& w) const { return w.sort == Sort::Diamond ? "W<>" : "W*"; }
    std::string operator()(const TokenLabel& t) const { return std::string(token_glyph(t.kind)); }
    std::string operator()(const BoxLabel& b) const { return "box/" + std::to_string(b.bound); }
    std::string operator()(const HoleLabel& h) const { return "hole:" + h.name; }
  };
  return std::visit(Visitor{}, label);
}

const OpSignature* op_signature(const EdgeLabel& label) {
  if (auto* op = std::get_if<OpLabel>(&label)) return &op->sig;
  return nullptr;
}

bool is_passive_op(const EdgeLabel& label) {
  auto* sig = op_signature(label);
  return sig && !sig->is_active();
}

bool is_active_op(const EdgeLabel& label) {
  auto* sig = op_signature(label);
  return sig && sig->is_active();
}

// ---------------------------------------------------------------------------

VertexId Hypernet::add_vertex(VertexLabel label) {
  if (vertices_.size() >= std::numeric_limits<std::uint32_t>::max())
    throw HypernetError("too many vertices");
  vertices_.push_back(Vertex{label, std::nullopt, std::nullopt, 0, 0, true});
  ++live_vertices_;
  return VertexId{static_cast<std::uint32_t>(vertices_.size() - 1)};
}

EdgeId Hypernet::add_edge(EdgeLabel label, std::vector<VertexId> sources, std::vector<VertexId> targets) {
  for (auto v : sources)
    if (!vertex_alive(v)) throw HypernetError("edge source is not a live vertex");
  for (auto v : targets)
    if (!vertex_alive(v)) throw HypernetError("edge target is not a live vertex");
  edges_.push_back(Edge{std::move(label), std::move(sources), std::move(targets), true});
  EdgeId e{static_cast<std::uint32_t>(edges_.size() - 1)};
  ++live_edges_;
  attach(e);
  return e;
}

void Hypernet::attach(EdgeId e) {
  const Edge& ed = edges_[e.value];
  for (auto v : ed.sources) {
    auto& vx = vertices_[v.value];
    ++vx.out_degree;
    vx.out = e;
  }
  for (auto v : ed.targets) {
    auto& vx = vertices_[v.value];
    ++vx.in_degree;
    vx.in = e;
  }
}

void Hypernet::detach(EdgeId e) {
  const Edge& ed = edges_[e.value];
  for (auto v : ed.sources) {
    auto& vx = vertices_[v.value];
    --vx.out_degree;
    if (vx.out_degree == 0) vx.out.reset();
    else if (vx.out == e) rescan_out(v);
  }
  for (auto v : ed.targets) {
    auto& vx = vertices_[v.value];
    --vx.in_degree;
    if (vx.in_degree == 0) vx.in.reset();
    else if (vx.in == e) rescan_in(v);
  }
}

void Hypernet::rescan_in(VertexId v) {
  auto& vx = vertices_[v.value];
  vx.in.reset();
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const Edge& ed = edges_[i];
    if (!ed.alive) continue;
    if (std::find(ed.targets.begin(), ed.targets.end(), v) != ed.targets.end()) vx.in = EdgeId{i};
  }
}

void Hypernet::rescan_out(VertexId v) {
  auto& vx = vertices_[v.value];
  vx.out.reset();
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const Edge& ed = edges_[i];
    if (!ed.alive) continue;
    if (std::find(ed.sources.begin(), ed.sources.end(), v) != ed.sources.end()) vx.out = EdgeId{i};
  }
}

void Hypernet::remove_edge(EdgeId e) {
  if (!edge_alive(e)) throw HypernetError("remove_edge: dead edge");
  edges_[e.value].alive = false;
  --live_edges_;
  // detach still reads the endpoint lists, which are left intact
  detach(e);
}

void Hypernet::remove_vertex(VertexId v) {
  if (!vertex_alive(v)) throw HypernetError("remove_vertex: dead vertex");
  auto& vx = vertices_[v.value];
  if (vx.in_degree != 0 || vx.out_degree != 0) throw HypernetError("remove_vertex: vertex still has incident edges");
  vx.alive = false;
  --live_vertices_;
  std::erase(inputs_, v);
  std::erase(outputs_, v);
}

void Hypernet::fuse(VertexId keep, VertexId drop) {
  if (keep == drop) return;
  if (!vertex_alive(keep) || !vertex_alive(drop)) throw HypernetError("fuse: dead vertex");
  auto& k = vertices_[keep.value];
  auto& d = vertices_[drop.value];
  if (d.in_degree + d.out_degree > 2 || d.in_degree > 1 || d.out_degree > 1) {
    for (auto& ed : edges_) {
      if (!ed.alive) continue;
      std::replace(ed.sources.begin(), ed.sources.end(), drop, keep);
      std::replace(ed.targets.begin(), ed.targets.end(), drop, keep);
    }
  } else {
    if (d.in) std::replace(edges_[d.in->value].targets.begin(), edges_[d.in->value].targets.end(), drop, keep);
    if (d.out) std::replace(edges_[d.out->value].sources.begin(), edges_[d.out->value].sources.end(), drop, keep);
  }
  k.in_degree += d.in_degree;
  k.out_degree += d.out_degree;
  if (d.in) k.in = d.in;
  if (d.out) k.out = d.out;
  d.in_degree = d.out_degree = 0;
  d.in.reset();
  d.out.reset();
  d.alive = false;
  --live_vertices_;
  std::replace(inputs_.begin(), inputs_.end(), drop, keep);
  std::replace(outputs_.begin(), outputs_.end(), drop, keep);
}

void Hypernet::replace_source(EdgeId e, std::size_t index, VertexId v) {
  if (!edge_alive(e) || !vertex_alive(v)) throw HypernetError("replace_source: dead element");
  detach(e);
  edges_[e.value].sources.at(index) = v;
  attach(e);
}

void Hypernet::replace_target(EdgeId e, std::size_t index, VertexId v) {
  if (!edge_alive(e) || !vertex_alive(v)) throw HypernetError("replace_target: dead element");
  detach(e);
  edges_[e.value].targets.at(index) = v;
  attach(e);
}

void Hypernet::relabel(EdgeId e, EdgeLabel label) {
  if (!edge_alive(e)) throw HypernetError("relabel: dead edge");
  edges_[e.value].label = std::move(label);
}

EdgeType Hypernet::type() const {
  EdgeType t;
  for (auto v : inputs_) t.sources.push_back(label(v));
  for (auto v : outputs_) t.targets.push_back(label(v));
  return t;
}

std::vector<VertexId> Hypernet::vertex_ids() const {
  std::vector<VertexId> out;
  out.reserve(live_vertices_);
  for (std::uint32_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].alive) out.push_back(VertexId{i});
  return out;
}

std::vector<EdgeId> Hypernet::edge_ids() const {
  std::vector<EdgeId> out;
  out.reserve(live_edges_);
  for (std::uint32_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].alive) out.push_back(EdgeId{i});
  return out;
}

std::vector<std::optional<VertexId>> Hypernet::compact() {
  std::vector<std::optional<VertexId>> vmap(vertices_.size());
  std::vector<Vertex> nv;
  nv.reserve(live_vertices_);
  for (std::uint32_t i = 0; i < vertices_.size(); ++i) {
    if (!vertices_[i].alive) continue;
    vmap[i] = VertexId{static_cast<std::uint32_t>(nv.size())};
    Vertex v = vertices_[i];
    v.in.reset();
    v.out.reset();
    v.in_degree = v.out_degree = 0;
    nv.push_back(v);
  }
  std::vector<Edge> ne;
  ne.reserve(live_edges_);
  for (auto& ed : edges_) {
    if (!ed.alive) continue;
    Edge copy = std::move(ed);
    for (auto& v : copy.sources) v = *vmap[v.value];
    for (auto& v : copy.targets) v = *vmap[v.value];
    ne.push_back(std::move(copy));
  }
  for (auto& v : inputs_) v = *vmap[v.value];
  for (auto& v : outputs_) v = *vmap[v.value];
  vertices_ = std::move(nv);
  edges_ = std::move(ne);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) attach(EdgeId{i});
  return vmap;
}

}  // namespace spartan
