#include <algorithm>
#include <map>
#include <set>

#include "spartan/hypernet.hpp"

namespace spartan {

namespace {

constexpr int kMaxDepth = 64;

std::string vname(VertexId v) { return "v" + std::to_string(v.value); }
std::string ename(EdgeId e) { return "e" + std::to_string(e.value); }

bool box_content_shape_ok(const BoxLabel& b, std::string& why) {
  const Hypernet& c = *b.content;
  if (c.inputs().size() != 1 || c.label(c.inputs()[0]) != VertexLabel::star()) {
    why = "box content must have a single star input";
    return false;
  }
  const auto& outs = c.outputs();
  if (outs.size() < b.bound) {
    why = "box content has fewer outputs than bound variables";
    return false;
  }
  bool seen_diamond = false;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    auto l = c.label(outs[i]);
    if (i < b.bound && l != VertexLabel::star()) {
      why = "bound output of box content is not star";
      return false;
    }
    if (l.sort == Sort::Thunk) {
      why = "box content output has thunk type";
      return false;
    }
    if (l.sort == Sort::Diamond) seen_diamond = true;
    else if (seen_diamond) {
      why = "box content outputs must list star before diamond";
      return false;
    }
  }
  return true;
}

void validate_rec(const Hypernet& net, bool sealed, const std::string& where, int depth,
                  std::vector<Violation>& out) {
  auto report = [&](std::string msg) { out.push_back(Violation{where, std::move(msg)}); };
  if (depth > kMaxDepth) {
    report("nesting too deep");
    return;
  }
  std::map<std::uint32_t, int> in_count, out_count;
  for (auto e : net.edge_ids()) {
    const auto& ed = net.edge(e);
    auto check_distinct = [&](const std::vector<VertexId>& vs, const char* which) {
      std::set<VertexId> s(vs.begin(), vs.end());
      if (s.size() != vs.size()) report(ename(e) + ": " + which + " list has repeated vertices");
    };
    check_distinct(ed.sources, "source");
    check_distinct(ed.targets, "target");
    for (auto v : ed.sources) {
      if (!net.vertex_alive(v)) report(ename(e) + ": dead source vertex");
      else ++out_count[v.value];
    }
    for (auto v : ed.targets) {
      if (!net.vertex_alive(v)) report(ename(e) + ": dead target vertex");
      else ++in_count[v.value];
    }
    if (auto* b = std::get_if<BoxLabel>(&ed.label)) {
      if (!b->content) {
        report(ename(e) + ": box without content");
        continue;
      }
      std::string why;
      if (!box_content_shape_ok(*b, why)) report(ename(e) + ": " + why);
      validate_rec(*b->content, sealed, where.empty() ? ename(e) : where + "/" + ename(e), depth + 1, out);
    }
    EdgeType want = edge_type(ed.label);
    bool ok = want.sources.size() == ed.sources.size() && want.targets.size() == ed.targets.size();
    for (std::size_t i = 0; ok && i < ed.sources.size(); ++i)
      ok = net.vertex_alive(ed.sources[i]) && net.label(ed.sources[i]) == want.sources[i];
    for (std::size_t i = 0; ok && i < ed.targets.size(); ++i)
      ok = net.vertex_alive(ed.targets[i]) && net.label(ed.targets[i]) == want.targets[i];
    if (!ok) report(ename(e) + " (" + label_text(ed.label) + "): endpoint labels do not match the edge type");
  }
  std::set<VertexId> ins(net.inputs().begin(), net.inputs().end());
  std::set<VertexId> outs(net.outputs().begin(), net.outputs().end());
  if (ins.size() != net.inputs().size()) report("input list has repeated vertices");
  if (outs.size() != net.outputs().size()) report("output list has repeated vertices");
  for (auto v : net.inputs())
    if (!net.vertex_alive(v)) report("input " + vname(v) + " is not a live vertex");
  for (auto v : net.outputs())
    if (!net.vertex_alive(v)) report("output " + vname(v) + " is not a live vertex");
  for (auto v : net.vertex_ids()) {
    int ic = in_count[v.value], oc = out_count[v.value];
    if (ic > 1) report(vname(v) + ": multiple incoming edges");
    if (oc > 1) report(vname(v) + ": multiple outgoing edges");
    bool is_in = ins.count(v) > 0, is_out = outs.count(v) > 0;
    if (is_in && ic > 0) report(vname(v) + ": input has an incoming edge");
    if (!is_in && ic == 0) report(vname(v) + ": vertex without incoming edge is not an input");
    if (is_out && oc > 0) report(vname(v) + ": output has an outgoing edge");
    if (!is_out && oc == 0) report(vname(v) + ": vertex without outgoing edge is not an output");
    if (sealed && is_in && is_out) report(vname(v) + ": vertex is both an input and an output");
  }
}

bool all_sources_star(const Hypernet& net, EdgeId e) {
  for (auto v : net.edge(e).sources)
    if (net.label(v) != VertexLabel::star()) return false;
  return true;
}

bool stable_label(const EdgeLabel& label) { return holds<InstanceLabel>(label) || is_passive_op(label); }

// Edges lying on accessible paths that continue after the targets of `e`.
void accessible_after(const Hypernet& net, EdgeId e, std::set<EdgeId>& seen, std::vector<EdgeId>& order) {
  std::vector<EdgeId> stack{e};
  while (!stack.empty()) {
    EdgeId cur = stack.back();
    stack.pop_back();
    for (auto t : net.edge(cur).targets) {
      auto nxt = net.outgoing(t);
      if (!nxt || !all_sources_star(net, *nxt) || seen.count(*nxt)) continue;
      seen.insert(*nxt);
      order.push_back(*nxt);
      stack.push_back(*nxt);
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Hypernet& net, bool sealed) {
  std::vector<Violation> out;
  validate_rec(net, sealed, "", 0, out);
  try {
    auto names = hole_names(net);
    std::set<std::string> uniq(names.begin(), names.end());
    if (uniq.size() != names.size()) out.push_back(Violation{"", "hole name occurs more than once"});
  } catch (const HypernetError& err) {
    out.push_back(Violation{"", err.what()});
  }
  return out;
}

Hypernet extract(const Hypernet& net, const SubNet& sub) {
  Hypernet out;
  std::map<std::uint32_t, VertexId> map;
  auto image = [&](VertexId v) {
    auto it = map.find(v.value);
    if (it != map.end()) return it->second;
    auto nv = out.add_vertex(net.label(v));
    map.emplace(v.value, nv);
    return nv;
  };
  VertexId in = image(sub.input);
  for (auto e : sub.edges) {
    const auto& ed = net.edge(e);
    std::vector<VertexId> s, t;
    for (auto v : ed.sources) s.push_back(image(v));
    for (auto v : ed.targets) t.push_back(image(v));
    out.add_edge(ed.label, std::move(s), std::move(t));
  }
  std::vector<VertexId> outs;
  for (auto v : sub.outputs) outs.push_back(image(v));
  out.set_inputs({in});
  out.set_outputs(std::move(outs));
  return out;
}

std::optional<CopyableMatch> find_copyable_at(const Hypernet& net, VertexId v) {
  if (!net.vertex_alive(v) || net.label(v) != VertexLabel::star()) return std::nullopt;
  auto e = net.outgoing(v);
  if (!e) return std::nullopt;
  const auto& ed = net.edge(*e);
  if (holds<InstanceLabel>(ed.label)) return CopyableMatch{*e, {}};
  auto* sig = op_signature(ed.label);
  if (!sig) return std::nullopt;
  CopyableMatch m{*e, {}};
  for (std::size_t i = sig->eager; i < ed.targets.size(); ++i) {
    auto b = net.outgoing(ed.targets[i]);
    if (!b || !holds<BoxLabel>(net.edge(*b).label) || net.edge(*b).sources.size() != 1) return std::nullopt;
    m.boxes.push_back(*b);
  }
  return m;
}

bool is_one_way(const Hypernet& net) {
  std::set<VertexId> star_outputs;
  for (auto v : net.outputs())
    if (net.label(v) == VertexLabel::star()) star_outputs.insert(v);
  if (star_outputs.empty()) return true;
  for (auto in : net.inputs()) {
    if (net.label(in) != VertexLabel::star()) continue;
    std::set<EdgeId> seen;
    std::vector<VertexId> stack{in};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      auto e = net.outgoing(v);
      if (!e || !op_signature(net.edge(*e).label) || seen.count(*e)) continue;
      seen.insert(*e);
      for (auto t : net.edge(*e).targets) {
        if (star_outputs.count(t)) return false;
        stack.push_back(t);
      }
    }
  }
  return true;
}

std::optional<SubNet> max_stable_from(const Hypernet& net, VertexId v) {
  if (!net.vertex_alive(v) || net.label(v) != VertexLabel::star()) return std::nullopt;
  auto first = net.outgoing(v);
  if (!first || !all_sources_star(net, *first)) return std::nullopt;
  std::set<EdgeId> seen{*first};
  std::vector<EdgeId> order{*first};
  accessible_after(net, *first, seen, order);
  for (auto e : order)
    if (!stable_label(net.edge(e).label)) return std::nullopt;
  SubNet sub{v, order, {}};
  std::set<VertexId> sources;
  for (auto e : order)
    for (auto s : net.edge(e).sources) sources.insert(s);
  for (auto e : order) {
    for (auto t : net.edge(e).targets) {
      if (sources.count(t)) continue;
      // a star leaf would make the sub-net's type ill-formed for a stable net
      if (net.label(t) == VertexLabel::star()) return std::nullopt;
      sub.outputs.push_back(t);
    }
  }
  return sub;
}

std::string_view to_string(PathClass c) {
  switch (c) {
    case PathClass::AllStable: return "all-stable";
    case PathClass::AllActive: return "all-active";
    case PathClass::Mixed: return "mixed";
    case PathClass::NoAccessiblePath: return "no-accessible-path";
  }
  return "?";
}

PathClass classify_paths(const Hypernet& net, VertexId v) {
  auto first = net.outgoing(v);
  if (!first || !all_sources_star(net, *first)) return PathClass::NoAccessiblePath;
  std::set<EdgeId> seen{*first};
  std::vector<EdgeId> rest;
  accessible_after(net, *first, seen, rest);
  bool rest_stable = std::all_of(rest.begin(), rest.end(),
                                 [&](EdgeId e) { return e != *first && stable_label(net.edge(e).label); });
  const auto& head = net.edge(*first).label;
  if (stable_label(head) && rest_stable) return PathClass::AllStable;
  if (is_active_op(head) && rest_stable) return PathClass::AllActive;
  return PathClass::Mixed;
}

}  // namespace spartan
