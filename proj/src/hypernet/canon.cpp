#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "spartan/hypernet.hpp"

namespace spartan {

namespace {

constexpr int kMaxDepth = 256;

std::string canonical_rec(const Hypernet& net, int depth);

std::string edge_key(const EdgeLabel& label, int depth) {
  if (auto* b = std::get_if<BoxLabel>(&label)) {
    return "box/" + std::to_string(b->bound) + "{" + (b->content ? canonical_rec(*b->content, depth + 1) : "") + "}";
  }
  if (auto* h = std::get_if<HoleLabel>(&label)) {
    std::string s = "hole:" + h->name + "(";
    for (auto l : h->sources) s += to_string(l) + ",";
    s += ")->(";
    for (auto l : h->targets) s += to_string(l) + ",";
    return s + ")";
  }
  if (auto* op = std::get_if<OpLabel>(&label)) {
    std::string s = "op:" + op->sig.name + "/" + std::to_string(op->sig.eager) + ";";
    for (auto n : op->sig.deferred) s += std::to_string(n) + ",";
    return s + (op->sig.is_active() ? "a" : "p");
  }
  return label_text(label);
}

// Numbering produced by one deterministic traversal.
struct Traversal {
  std::vector<std::int64_t> vnum;  // by vertex slot, -1 = unnumbered
  std::vector<std::int64_t> enumr;  // by edge slot
  std::vector<VertexId> vorder;
  std::vector<EdgeId> eorder;
};

void number_vertex(const Hypernet&, Traversal& t, VertexId v, std::deque<VertexId>& queue) {
  if (t.vnum[v.value] >= 0) return;
  t.vnum[v.value] = static_cast<std::int64_t>(t.vorder.size());
  t.vorder.push_back(v);
  queue.push_back(v);
}

void number_edge(const Hypernet& net, Traversal& t, EdgeId e, std::deque<VertexId>& queue) {
  if (t.enumr[e.value] >= 0) return;
  t.enumr[e.value] = static_cast<std::int64_t>(t.eorder.size());
  t.eorder.push_back(e);
  for (auto v : net.edge(e).sources) number_vertex(net, t, v, queue);
  for (auto v : net.edge(e).targets) number_vertex(net, t, v, queue);
}

void flood(const Hypernet& net, Traversal& t, std::deque<VertexId>& queue) {
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (auto e = net.incoming(v)) number_edge(net, t, *e, queue);
    if (auto e = net.outgoing(v)) number_edge(net, t, *e, queue);
  }
}

std::string describe_edges(const Hypernet& net, const Traversal& t, std::size_t from, int depth) {
  std::string s;
  for (std::size_t i = from; i < t.eorder.size(); ++i) {
    const auto& ed = net.edge(t.eorder[i]);
    s += edge_key(ed.label, depth) + "(";
    for (auto v : ed.sources) s += std::to_string(t.vnum[v.value]) + ",";
    s += ")->(";
    for (auto v : ed.targets) s += std::to_string(t.vnum[v.value]) + ",";
    s += ");";
  }
  return s;
}

Traversal traverse(const Hypernet& net, int depth) {
  if (depth > kMaxDepth) throw HypernetError("nesting too deep");
  Traversal t;
  t.vnum.assign(net.vertex_slots(), -1);
  t.enumr.assign(net.edge_slots(), -1);
  std::deque<VertexId> queue;
  for (auto v : net.inputs()) number_vertex(net, t, v, queue);
  for (auto v : net.outputs()) number_vertex(net, t, v, queue);
  flood(net, t, queue);
  // Components detached from the interface: repeatedly take the start edge
  // whose component serialises smallest.
  for (;;) {
    std::vector<EdgeId> remaining;
    for (auto e : net.edge_ids())
      if (t.enumr[e.value] < 0) remaining.push_back(e);
    if (remaining.empty()) break;
    std::optional<Traversal> best;
    std::string best_key;
    for (auto e : remaining) {
      Traversal trial = t;
      std::size_t from = trial.eorder.size();
      std::size_t vfrom = trial.vorder.size();
      std::deque<VertexId> q;
      number_edge(net, trial, e, q);
      flood(net, trial, q);
      std::string key = describe_edges(net, trial, from, depth);
      for (std::size_t i = vfrom; i < trial.vorder.size(); ++i) key += to_string(net.label(trial.vorder[i])) + ",";
      if (!best || key < best_key) {
        best_key = std::move(key);
        best = std::move(trial);
      }
    }
    t = std::move(*best);
  }
  // isolated vertices that are not part of the interface
  std::vector<VertexId> isolated;
  for (auto v : net.vertex_ids())
    if (t.vnum[v.value] < 0) isolated.push_back(v);
  std::stable_sort(isolated.begin(), isolated.end(),
                   [&](VertexId a, VertexId b) { return net.label(a) < net.label(b); });
  for (auto v : isolated) {
    t.vnum[v.value] = static_cast<std::int64_t>(t.vorder.size());
    t.vorder.push_back(v);
  }
  return t;
}

std::string canonical_rec(const Hypernet& net, int depth) {
  Traversal t = traverse(net, depth);
  std::string s = "V[";
  for (auto v : t.vorder) s += to_string(net.label(v)) + ",";
  s += "]I[";
  for (auto v : net.inputs()) s += std::to_string(t.vnum[v.value]) + ",";
  s += "]O[";
  for (auto v : net.outputs()) s += std::to_string(t.vnum[v.value]) + ",";
  s += "]E[" + describe_edges(net, t, 0, depth) + "]";
  return s;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string dot_edge_text(const EdgeLabel& label) {
  if (auto* tok = std::get_if<TokenLabel>(&label)) {
    switch (tok->kind) {
      case TokenKind::Search: return "?";
      case TokenKind::Value: return "✓";
      case TokenKind::Rewrite: return "⚡";
    }
  }
  if (auto* c = std::get_if<ContractionLabel>(&label)) return c->sort == Sort::Diamond ? "⊗C◆" : "⊗C★";
  if (auto* w = std::get_if<WeakeningLabel>(&label)) return w->sort == Sort::Diamond ? "⊗W◆" : "⊗W★";
  if (holds<AtomLabel>(label)) return "∘";
  return label_text(label);
}

std::string dot_vertex_text(VertexLabel l) {
  switch (l.sort) {
    case Sort::Star: return "★";
    case Sort::Diamond: return "◆";
    case Sort::Thunk: return "T" + std::to_string(l.thunk_arity) + "(★)";
  }
  return "";
}

std::string type_text(const EdgeType& t) {
  auto side = [](const std::vector<VertexLabel>& ls) {
    if (ls.empty()) return std::string("ε");
    std::string s;
    for (std::size_t i = 0; i < ls.size(); ++i) s += (i ? "⊗" : "") + dot_vertex_text(ls[i]);
    return s;
  };
  return side(t.sources) + " ⇒ " + side(t.targets);
}

void dot_rec(const Hypernet& net, const std::string& prefix, const std::string& indent, std::ostringstream& os,
             int depth) {
  Traversal t = traverse(net, depth);
  for (std::size_t i = 0; i < t.vorder.size(); ++i) {
    VertexId v = t.vorder[i];
    std::string tag;
    if (std::find(net.inputs().begin(), net.inputs().end(), v) != net.inputs().end()) tag += " in";
    if (std::find(net.outputs().begin(), net.outputs().end(), v) != net.outputs().end()) tag += " out";
    os << indent << '"' << prefix << "v" << i << "\" [shape=point, xlabel=\"v" << i << ":"
       << dot_escape(dot_vertex_text(net.label(v))) << tag << "\"];\n";
  }
  for (std::size_t i = 0; i < t.eorder.size(); ++i) {
    EdgeId e = t.eorder[i];
    const auto& ed = net.edge(e);
    std::string node = prefix + "e" + std::to_string(i);
    if (auto* b = std::get_if<BoxLabel>(&ed.label)) {
      os << indent << "subgraph \"cluster_" << node << "\" {\n";
      os << indent << "  label=\"" << dot_escape(type_text(edge_type(ed.label))) << "\";\n";
      os << indent << "  style=dotted;\n";
      os << indent << "  \"" << node << "\" [shape=box, label=\"box/" << b->bound << "\"];\n";
      if (b->content) dot_rec(*b->content, node + "_", indent + "  ", os, depth + 1);
      os << indent << "}\n";
    } else {
      os << indent << '"' << node << "\" [shape=circle, label=\"" << dot_escape(dot_edge_text(ed.label)) << "\"];\n";
    }
    for (std::size_t k = 0; k < ed.sources.size(); ++k)
      os << indent << '"' << prefix << "v" << t.vnum[ed.sources[k].value] << "\" -> \"" << node << "\" [taillabel=\""
         << k << "\"];\n";
    for (std::size_t k = 0; k < ed.targets.size(); ++k)
      os << indent << '"' << node << "\" -> \"" << prefix << "v" << t.vnum[ed.targets[k].value] << "\" [headlabel=\""
         << k << "\"];\n";
  }
}

}  // namespace

std::string canonical_form(const Hypernet& net) { return canonical_rec(net, 0); }

bool iso_check(const Hypernet& a, const Hypernet& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  return canonical_form(a) == canonical_form(b);
}

std::vector<VertexId> canonical_vertex_order(const Hypernet& net) { return traverse(net, 0).vorder; }

std::string to_dot(const Hypernet& net, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(graph_name) << "\" {\n";
  os << "  rankdir=TB;\n";
  dot_rec(net, "", "  ", os, 0);
  os << "}\n";
  return os.str();
}

}  // namespace spartan
