#include <algorithm>
#include <limits>
#include <set>

#include "spartan/hypernet.hpp"

namespace spartan {

namespace {

constexpr VertexId kNoVertex{std::numeric_limits<std::uint32_t>::max()};

void check_permutation(std::span<const std::size_t> perm, std::size_t n, const char* what) {
  if (perm.size() != n) throw HypernetError(std::string("permute_interface: ") + what + " permutation has wrong size");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw HypernetError(std::string("permute_interface: ") + what + " map is not a bijection");
    seen[p] = true;
  }
}

void collect_holes(const Hypernet& net, std::vector<std::string>& out, int depth) {
  if (depth > 256) throw HypernetError("nesting too deep");
  for (auto e : net.edge_ids()) {
    const auto& label = net.edge(e).label;
    if (auto* h = std::get_if<HoleLabel>(&label)) out.push_back(h->name);
    if (auto* b = std::get_if<BoxLabel>(&label); b && b->content) collect_holes(*b->content, out, depth + 1);
  }
}

std::size_t tokens_in(const Hypernet& net, int depth) {
  if (depth > 256) throw HypernetError("nesting too deep");
  std::size_t n = 0;
  for (auto e : net.edge_ids()) {
    const auto& label = net.edge(e).label;
    if (holds<TokenLabel>(label)) ++n;
    if (auto* b = std::get_if<BoxLabel>(&label); b && b->content) n += tokens_in(*b->content, depth + 1);
  }
  return n;
}

bool contains_hole(const Hypernet& net, const std::string& name) {
  std::vector<std::string> names;
  collect_holes(net, names, 0);
  return std::find(names.begin(), names.end(), name) != names.end();
}

Hypernet plug_rec(const Hypernet& context, const std::string& hole, const Hypernet& filler, int depth) {
  if (depth > 256) throw HypernetError("nesting too deep");
  Hypernet result = context;
  for (auto e : context.edge_ids()) {
    const auto& ed = context.edge(e);
    if (auto* h = std::get_if<HoleLabel>(&ed.label); h && h->name == hole) {
      EdgeType want{h->sources, h->targets};
      if (filler.type() != want) throw HypernetError("plug: filler type does not match hole " + hole);
      auto sources = ed.sources;
      auto targets = ed.targets;
      result.remove_edge(e);
      embed(result, filler, sources, targets);
      return result;
    }
  }
  for (auto e : context.edge_ids()) {
    const auto& ed = context.edge(e);
    auto* b = std::get_if<BoxLabel>(&ed.label);
    if (!b || !b->content || !contains_hole(*b->content, hole)) continue;
    auto inner = std::make_shared<const Hypernet>(plug_rec(*b->content, hole, filler, depth + 1));
    result.relabel(e, BoxLabel{std::move(inner), b->bound});
    return result;
  }
  throw HypernetError("plug: no hole named " + hole);
}

}  // namespace

std::vector<VertexId> embed(Hypernet& host, const Hypernet& piece, std::span<const VertexId> input_images,
                            std::span<const VertexId> output_images) {
  if (input_images.size() != piece.inputs().size() || output_images.size() != piece.outputs().size())
    throw HypernetError("embed: interface size mismatch");
  std::vector<VertexId> map(piece.vertex_slots(), kNoVertex);
  for (std::size_t i = 0; i < piece.inputs().size(); ++i) {
    auto pv = piece.inputs()[i];
    if (host.label(input_images[i]) != piece.label(pv)) throw HypernetError("embed: input label mismatch");
    map[pv.value] = input_images[i];
  }
  for (std::size_t j = 0; j < piece.outputs().size(); ++j) {
    auto pv = piece.outputs()[j];
    if (host.label(output_images[j]) != piece.label(pv)) throw HypernetError("embed: output label mismatch");
    if (map[pv.value] != kNoVertex && map[pv.value] != output_images[j])
      throw HypernetError("embed: piece has a vertex that is both an input and an output");
    map[pv.value] = output_images[j];
  }
  for (auto v : piece.vertex_ids())
    if (map[v.value] == kNoVertex) map[v.value] = host.add_vertex(piece.label(v));
  for (auto e : piece.edge_ids()) {
    const auto& ed = piece.edge(e);
    std::vector<VertexId> s, t;
    s.reserve(ed.sources.size());
    t.reserve(ed.targets.size());
    for (auto v : ed.sources) s.push_back(map[v.value]);
    for (auto v : ed.targets) t.push_back(map[v.value]);
    host.add_edge(ed.label, std::move(s), std::move(t));
  }
  return map;
}

Hypernet permute_interface(const Hypernet& net, std::span<const std::size_t> input_perm,
                           std::span<const std::size_t> output_perm) {
  check_permutation(input_perm, net.inputs().size(), "input");
  check_permutation(output_perm, net.outputs().size(), "output");
  Hypernet out = net;
  std::vector<VertexId> ins, outs;
  for (auto p : input_perm) ins.push_back(net.inputs()[p]);
  for (auto p : output_perm) outs.push_back(net.outputs()[p]);
  out.set_inputs(std::move(ins));
  out.set_outputs(std::move(outs));
  return out;
}

Hypernet tensor(std::span<const Hypernet> nets) {
  Hypernet out;
  std::vector<VertexId> ins, outs;
  for (const auto& n : nets) {
    std::vector<VertexId> pi, po;
    std::vector<std::optional<VertexId>> seen(n.vertex_slots());
    for (auto v : n.inputs()) {
      if (!seen[v.value]) seen[v.value] = out.add_vertex(n.label(v));
      pi.push_back(*seen[v.value]);
    }
    for (auto v : n.outputs()) {
      if (!seen[v.value]) seen[v.value] = out.add_vertex(n.label(v));
      po.push_back(*seen[v.value]);
    }
    // embed rejects input/output sharing, so map such vertices by hand
    bool shared = false;
    for (auto v : n.inputs())
      if (std::find(n.outputs().begin(), n.outputs().end(), v) != n.outputs().end()) shared = true;
    if (!shared) {
      embed(out, n, pi, po);
    } else {
      std::vector<VertexId> map(n.vertex_slots(), kNoVertex);
      for (auto v : n.vertex_ids()) map[v.value] = seen[v.value] ? *seen[v.value] : out.add_vertex(n.label(v));
      for (auto e : n.edge_ids()) {
        const auto& ed = n.edge(e);
        std::vector<VertexId> s, t;
        for (auto v : ed.sources) s.push_back(map[v.value]);
        for (auto v : ed.targets) t.push_back(map[v.value]);
        out.add_edge(ed.label, std::move(s), std::move(t));
      }
    }
    ins.insert(ins.end(), pi.begin(), pi.end());
    outs.insert(outs.end(), po.begin(), po.end());
  }
  out.set_inputs(std::move(ins));
  out.set_outputs(std::move(outs));
  return out;
}

Hypernet plug(const Hypernet& context, const std::string& hole, const Hypernet& filler) {
  std::vector<std::string> ctx_names, filler_names;
  collect_holes(context, ctx_names, 0);
  collect_holes(filler, filler_names, 0);
  if (std::count(ctx_names.begin(), ctx_names.end(), hole) != 1)
    throw HypernetError("plug: hole " + hole + " must occur exactly once");
  std::set<std::string> rest(ctx_names.begin(), ctx_names.end());
  rest.erase(hole);
  for (const auto& n : filler_names)
    if (rest.count(n) || n == hole) throw HypernetError("plug: duplicate hole name " + n);
  return plug_rec(context, hole, filler, 0);
}

namespace {

Hypernet distributor_one(Sort sort, std::size_t m) {
  VertexLabel l = sort == Sort::Diamond ? VertexLabel::diamond() : VertexLabel::star();
  Hypernet d;
  std::vector<VertexId> ins;
  for (std::size_t i = 0; i < m; ++i) ins.push_back(d.add_vertex(l));
  // innermost: weakening, then contractions folding inputs from the last one
  VertexId acc = d.add_vertex(l);
  d.add_edge(WeakeningLabel{sort}, {}, {acc});
  for (std::size_t i = m; i-- > 0;) {
    VertexId t = d.add_vertex(l);
    d.add_edge(ContractionLabel{sort}, {ins[i], acc}, {t});
    acc = t;
  }
  d.set_inputs(std::move(ins));
  d.set_outputs({acc});
  return d;
}

}  // namespace

Hypernet distributor(Sort sort, std::size_t k, std::size_t m) {
  if (sort == Sort::Thunk) throw HypernetError("distributor: thunk sort");
  if (k == 0) return Hypernet{};
  Hypernet acc = distributor_one(sort, m);
  for (std::size_t kk = 1; kk < k; ++kk) {
    // acc = D_{kk,m}; build D_{kk+1,m} = Pi_rho(D_{kk,m} (x) D_{1,m})
    Hypernet parts[2] = {std::move(acc), distributor_one(sort, m)};
    Hypernet t = tensor(parts);
    std::vector<std::size_t> rho((kk + 1) * m);
    for (std::size_t i = 1; i <= m; ++i) {
      for (std::size_t j = 1; j <= kk; ++j) rho[j + (kk + 1) * (i - 1) - 1] = j + kk * (i - 1) - 1;
      rho[(kk + 1) * i - 1] = kk * m + i - 1;
    }
    std::vector<std::size_t> id(kk + 1);
    for (std::size_t i = 0; i <= kk; ++i) id[i] = i;
    acc = permute_interface(t, rho, id);
  }
  return acc;
}

bool is_contraction_tree(const Hypernet& net) {
  if (net.outputs().size() != 1) return false;
  if (!validate(net, true).empty()) return false;
  std::optional<Sort> sort;
  for (auto e : net.edge_ids()) {
    const auto& label = net.edge(e).label;
    Sort s;
    if (auto* c = std::get_if<ContractionLabel>(&label)) s = c->sort;
    else if (auto* w = std::get_if<WeakeningLabel>(&label)) s = w->sort;
    else return false;
    if (sort && *sort != s) return false;
    sort = s;
  }
  VertexId root = net.outputs()[0];
  for (auto v : net.vertex_ids()) {
    if (sort && net.label(v) != (*sort == Sort::Diamond ? VertexLabel::diamond() : VertexLabel::star())) return false;
    VertexId cur = v;
    std::size_t guard = 0;
    while (cur != root) {
      auto out = net.outgoing(cur);
      if (!out || ++guard > net.edge_count()) return false;
      cur = net.edge(*out).targets.at(0);
    }
  }
  return true;
}

std::vector<std::string> hole_names(const Hypernet& net) {
  std::vector<std::string> out;
  collect_holes(net, out, 0);
  return out;
}

std::size_t count_tokens(const Hypernet& net) { return tokens_in(net, 0); }

}  // namespace spartan
