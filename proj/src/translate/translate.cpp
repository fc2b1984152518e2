#include "spartan/translate.hpp"

namespace spartan {

namespace {

struct Outputs {
  std::vector<VertexId> vars;
  std::vector<VertexId> atoms;
};

VertexLabel sort_vertex(Sort s) { return s == Sort::Diamond ? VertexLabel::diamond() : VertexLabel::star(); }

VertexId weaken(Hypernet& h, Sort s) {
  VertexId v = h.add_vertex(sort_vertex(s));
  h.add_edge(WeakeningLabel{s}, {}, {v});
  return v;
}

// Left-leaning contraction chain over all copies of one name.
VertexId merge(Hypernet& h, Sort s, const std::vector<VertexId>& copies) {
  if (copies.empty()) return weaken(h, s);
  VertexId acc = copies[0];
  for (std::size_t i = 1; i < copies.size(); ++i) {
    VertexId t = h.add_vertex(sort_vertex(s));
    h.add_edge(ContractionLabel{s}, {acc, copies[i]}, {t});
    acc = t;
  }
  return acc;
}

Outputs merge_all(Hypernet& h, const std::vector<Outputs>& parts, std::size_t k, std::size_t a) {
  Outputs out;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<VertexId> copies;
    for (auto& p : parts) copies.push_back(p.vars[i]);
    out.vars.push_back(merge(h, Sort::Star, copies));
  }
  for (std::size_t j = 0; j < a; ++j) {
    std::vector<VertexId> copies;
    for (auto& p : parts) copies.push_back(p.atoms[j]);
    out.atoms.push_back(merge(h, Sort::Diamond, copies));
  }
  return out;
}

std::size_t index_of(const std::vector<std::string>& xs, const std::string& x) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == x) return i;
  throw TypeError("unbound name " + x);
}

Hypernet translate_box_content(const Environment& env, const Term& thunk);

Outputs emit(Hypernet& h, const Environment& env, const Term& t, VertexId root) {
  const std::size_t k = env.vars.size(), a = env.atoms.size();
  switch (t.kind) {
    case TermKind::Var:
    case TermKind::Atom: {
      Outputs out;
      std::size_t hit = t.kind == TermKind::Var ? index_of(env.vars, t.name) : index_of(env.atoms, t.name);
      for (std::size_t i = 0; i < k; ++i) {
        if (t.kind == TermKind::Var && i == hit) {
          VertexId o = h.add_vertex(VertexLabel::star());
          h.add_edge(ContractionLabel{Sort::Star}, {root, weaken(h, Sort::Star)}, {o});
          out.vars.push_back(o);
        } else {
          out.vars.push_back(weaken(h, Sort::Star));
        }
      }
      for (std::size_t j = 0; j < a; ++j) {
        if (t.kind == TermKind::Atom && j == hit) {
          VertexId o = h.add_vertex(VertexLabel::diamond());
          h.add_edge(InstanceLabel{}, {root}, {o});
          out.atoms.push_back(o);
        } else {
          out.atoms.push_back(weaken(h, Sort::Diamond));
        }
      }
      return out;
    }
    case TermKind::Bind: {
      Environment inner = env;
      inner.vars.push_back(t.name);
      Outputs body = emit(h, inner, t.body(), root);
      VertexId x_out = body.vars.back();
      body.vars.pop_back();
      Outputs bound = emit(h, env, t.bound(), x_out);
      return merge_all(h, {body, bound}, k, a);
    }
    case TermKind::New: {
      Environment inner = env;
      inner.atoms.insert(inner.atoms.begin(), t.name);
      Outputs body = emit(h, inner, t.body(), root);
      VertexId a_out = body.atoms.front();
      body.atoms.erase(body.atoms.begin());
      VertexId bound_root = h.add_vertex(VertexLabel::star());
      h.add_edge(AtomLabel{}, {a_out}, {bound_root});
      Outputs bound = emit(h, env, t.bound(), bound_root);
      return merge_all(h, {body, bound}, k, a);
    }
    case TermKind::Thunk: {
      auto content = std::make_shared<const Hypernet>(translate_box_content(env, t));
      Outputs out;
      std::vector<VertexId> targets;
      for (std::size_t i = 0; i < k; ++i) targets.push_back(out.vars.emplace_back(h.add_vertex(VertexLabel::star())));
      for (std::size_t j = 0; j < a; ++j)
        targets.push_back(out.atoms.emplace_back(h.add_vertex(VertexLabel::diamond())));
      h.add_edge(BoxLabel{content, static_cast<std::uint32_t>(t.params.size())}, {root}, std::move(targets));
      return out;
    }
    case TermKind::Op: {
      const auto& sig = t.sig;
      std::vector<VertexId> targets;
      for (std::size_t i = 0; i < sig.eager; ++i) targets.push_back(h.add_vertex(VertexLabel::star()));
      for (auto n : sig.deferred) targets.push_back(h.add_vertex(VertexLabel::thunk(n)));
      h.add_edge(OpLabel{sig}, {root}, targets);
      std::vector<Outputs> parts;
      for (std::size_t i = 0; i < t.children.size(); ++i) parts.push_back(emit(h, env, *t.children[i], targets[i]));
      if (parts.size() == 1) return parts[0];
      return merge_all(h, parts, k, a);
    }
    case TermKind::Hole: {
      HoleLabel label{t.name, {VertexLabel::star()}, {}};
      Outputs out;
      std::vector<VertexId> targets;
      for (std::size_t i = 0; i < k; ++i) {
        targets.push_back(out.vars.emplace_back(h.add_vertex(VertexLabel::star())));
        label.targets.push_back(VertexLabel::star());
      }
      for (std::size_t j = 0; j < a; ++j) {
        targets.push_back(out.atoms.emplace_back(h.add_vertex(VertexLabel::diamond())));
        label.targets.push_back(VertexLabel::diamond());
      }
      h.add_edge(std::move(label), {root}, std::move(targets));
      return out;
    }
  }
  throw TypeError("unknown term");
}

Hypernet translate_box_content(const Environment& env, const Term& thunk) {
  Environment inner;
  inner.vars = thunk.params;
  inner.vars.insert(inner.vars.end(), env.vars.begin(), env.vars.end());
  inner.atoms = env.atoms;
  return translate(inner, thunk.body()).net;
}

}  // namespace

TranslationResult translate(const Environment& env, const Term& t) {
  if (typecheck(env, t) != VertexLabel::star()) throw TypeError("translation needs a term of type star");
  TranslationResult r;
  r.root = r.net.add_vertex(VertexLabel::star());
  Outputs out = emit(r.net, env, t, r.root);
  r.var_outputs = out.vars;
  r.atom_outputs = out.atoms;
  std::vector<VertexId> outs = out.vars;
  outs.insert(outs.end(), out.atoms.begin(), out.atoms.end());
  r.net.set_inputs({r.root});
  r.net.set_outputs(std::move(outs));
  return r;
}

Hypernet translate_program(const Term& t) {
  auto r = translate(Environment{}, t);
  auto problems = validate(r.net, true);
  if (!problems.empty()) throw HypernetError("translated program is not sealed: " + problems.front().message);
  return std::move(r.net);
}

}  // namespace spartan
