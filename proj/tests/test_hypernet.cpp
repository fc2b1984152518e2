#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "spartan/hypernet.hpp"
#include "spartan/lang.hpp"
#include "spartan/translate.hpp"

using namespace spartan;

namespace {

const auto kStar = VertexLabel::star();
const auto kDia = VertexLabel::diamond();

OpLabel num(std::int64_t n) { return OpLabel{numeral_sig(n)}; }
OpLabel op(std::string_view name) { return OpLabel{builtin_sig(name)}; }

// root --(+)--> a, b ; a --(1)-->, b --(2)-->
Hypernet sum_net() {
  Hypernet h;
  auto r = h.add_vertex(kStar), a = h.add_vertex(kStar), b = h.add_vertex(kStar);
  h.add_edge(op(opname::kAdd), {r}, {a, b});
  h.add_edge(num(1), {a}, {});
  h.add_edge(num(2), {b}, {});
  h.set_inputs({r});
  return h;
}

// Follows out-edges from v until a vertex without one.
VertexId sink_of(const Hypernet& h, VertexId v) {
  while (auto e = h.outgoing(v)) v = h.edge(*e).targets.at(0);
  return v;
}

Hypernet program(const std::string& src) { return translate_program(*parse(src)); }

}  // namespace

TEST_CASE("incidence bookkeeping") {
  Hypernet h = sum_net();
  CHECK(h.vertex_count() == 3);
  CHECK(h.edge_count() == 3);
  auto root = h.inputs()[0];
  REQUIRE(h.outgoing(root));
  CHECK(label_text(h.edge(*h.outgoing(root)).label) == "+");
  CHECK_FALSE(h.incoming(root));
  CHECK(h.type().sources == std::vector<VertexLabel>{kStar});
  CHECK(h.type().targets.empty());
  CHECK(validate(h, true).empty());
}

TEST_CASE("remove and fuse") {
  Hypernet h = sum_net();
  auto root = h.inputs()[0];
  auto plus = *h.outgoing(root);
  auto a = h.edge(plus).targets[0];
  auto one = *h.outgoing(a);
  h.remove_edge(one);
  CHECK(h.edge_count() == 2);
  CHECK_FALSE(h.outgoing(a));
  CHECK_THROWS_AS(h.remove_vertex(root), HypernetError);

  // Fuse a fresh vertex carrying 5 into a.
  auto v = h.add_vertex(kStar);
  h.add_edge(num(5), {v}, {});
  h.fuse(a, v);
  CHECK_FALSE(h.vertex_alive(v));
  REQUIRE(h.outgoing(a));
  CHECK(label_text(h.edge(*h.outgoing(a)).label) == "5");
  CHECK(validate(h, true).empty());
}

TEST_CASE("validate reports shape violations") {
  SUBCASE("label mismatch") {
    Hypernet h;
    auto r = h.add_vertex(kDia);
    h.add_edge(num(1), {r}, {});
    h.set_inputs({r});
    CHECK_FALSE(validate(h, true).empty());
  }
  SUBCASE("two incoming edges") {
    Hypernet h;
    auto v = h.add_vertex(kStar);
    h.add_edge(WeakeningLabel{Sort::Star}, {}, {v});
    h.add_edge(WeakeningLabel{Sort::Star}, {}, {v});
    h.set_outputs({});
    CHECK_FALSE(validate(h, false).empty());
  }
  SUBCASE("input with an incoming edge") {
    Hypernet h;
    auto v = h.add_vertex(kStar);
    h.add_edge(WeakeningLabel{Sort::Star}, {}, {v});
    h.set_inputs({v});
    CHECK_FALSE(validate(h, false).empty());
  }
  SUBCASE("sealed forbids input = output") {
    Hypernet h;
    auto v = h.add_vertex(kStar);
    h.set_inputs({v});
    h.set_outputs({v});
    CHECK(validate(h, false).empty());
    CHECK_FALSE(validate(h, true).empty());
  }
  SUBCASE("box content must have one star input") {
    auto content = std::make_shared<Hypernet>();
    auto in = content->add_vertex(kDia);
    content->add_edge(WeakeningLabel{Sort::Diamond}, {}, {in});
    Hypernet h;
    auto r = h.add_vertex(kStar), t = h.add_vertex(VertexLabel::thunk(0));
    h.add_edge(OpLabel{OpSignature{"wrap", 0, {0}, Polarity::Passive}}, {r}, {t});
    h.add_edge(BoxLabel{content, 0}, {t}, {});
    h.set_inputs({r});
    auto v = validate(h, true);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].where.empty());  // the shape error is reported at the box edge
    CHECK(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.where == "e1"; }));
  }
}

TEST_CASE("translated nets are valid and sealed") {
  for (const char* src : {"1", "1 + 2", "ref 1", "bind x = 1 in x + x", "lambda x. x", "new a <= 0 in a = a",
                          "let r = ref 0 in (r := 5); !r", "(lambda f. f (f 1)) (lambda y. y + y)"}) {
    CAPTURE(src);
    CHECK(validate(program(src), true).empty());
  }
}

TEST_CASE("distributor shape") {
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t m = 0; m <= 3; ++m) {
      CAPTURE(k);
      CAPTURE(m);
      Hypernet d = distributor(Sort::Star, k, m);
      CHECK(validate(d, false).empty());
      CHECK(d.inputs().size() == k * m);
      CHECK(d.outputs().size() == k);
      CHECK(d.edge_count() == k * (m + 1));  // m contractions and one weakening per wire
      // Copy-major grouping: input j lands on output j mod k.
      for (std::size_t j = 0; j < k * m; ++j) CHECK(sink_of(d, d.inputs()[j]) == d.outputs()[j % k]);
    }
  }
  Hypernet one = distributor(Sort::Diamond, 1, 3);
  CHECK(is_contraction_tree(one));
  CHECK(one.label(one.outputs()[0]) == kDia);
  CHECK_FALSE(is_contraction_tree(sum_net()));
}

TEST_CASE("permute_interface and tensor") {
  Hypernet d = distributor(Sort::Star, 2, 1);
  std::vector<std::size_t> in{1, 0}, out{1, 0};
  Hypernet p = permute_interface(d, in, out);
  CHECK(p.inputs()[0] == d.inputs()[1]);
  CHECK(p.outputs()[1] == d.outputs()[0]);
  std::vector<std::size_t> bad{0, 0};
  CHECK_THROWS(permute_interface(d, bad, out));

  std::vector<Hypernet> parts{sum_net(), sum_net()};
  Hypernet t = tensor(parts);
  CHECK(t.inputs().size() == 2);
  CHECK(t.vertex_count() == 6);
  CHECK(validate(t, true).empty());
}

TEST_CASE("embed identifies interfaces") {
  Hypernet host;
  auto r = host.add_vertex(kStar);
  host.set_inputs({r});
  Hypernet piece = sum_net();
  std::vector<VertexId> ins{r};
  auto map = embed(host, piece, ins, std::vector<VertexId>{});
  CHECK(map[piece.inputs()[0].value] == r);
  CHECK(iso_check(host, sum_net()));
}

TEST_CASE("graph plugging agrees with term plugging") {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"bind x = 1 in [ ]", "x + 1"},
      {"new a <= 0 in lambda y. [ ]", "!a + y"},
      {"[ ] + 2", "3"},
      {"bind x = [ ] in x", "ref 0"},
  };
  for (const auto& [ctx_src, fill_src] : cases) {
    CAPTURE(ctx_src);
    // Determine the hole environment by typing the context once.
    Environment env;
    if (ctx_src == "bind x = 1 in [ ]") env = {{"x"}, {}};
    if (ctx_src == "new a <= 0 in lambda y. [ ]") env = {{"y"}, {"a"}};
    ParseOptions po;
    po.hole_env = env;
    TermPtr ctx = parse(ctx_src, po);
    ParseOptions fo;
    fo.free_atoms.insert(env.atoms.begin(), env.atoms.end());
    TermPtr fill = parse(fill_src, fo);
    Hypernet graph = plug(translate({}, *ctx).net, "h", translate(env, *fill).net);
    Hypernet direct = translate_program(*plug_term(ctx, "h", fill));
    CHECK(validate(graph, true).empty());
    CHECK(iso_check(graph, direct));
  }
}

TEST_CASE("plug rejects a type mismatch") {
  ParseOptions po;
  po.hole_env = {{"x"}, {}};
  Hypernet ctx = translate({}, *parse("bind x = 1 in [ ]", po)).net;
  CHECK_THROWS(plug(ctx, "h", translate({}, *parse("1")).net));
  CHECK_THROWS(plug(ctx, "nope", translate({{"x"}, {}}, *parse("x")).net));
}

TEST_CASE("hole names and token counting") {
  ParseOptions po;
  po.hole_env = {{"y"}, {}};
  Hypernet ctx = translate({}, *parse("lambda y. [ ]", po)).net;
  CHECK(hole_names(ctx) == std::vector<std::string>{"h"});
  CHECK(count_tokens(ctx) == 0);
}

TEST_CASE("canonical form is invariant under vertex renumbering") {
  // Build the same net with two different insertion orders.
  Hypernet a = sum_net();
  Hypernet b;
  auto y = b.add_vertex(kStar), x = b.add_vertex(kStar), r = b.add_vertex(kStar);
  b.add_edge(num(2), {y}, {});
  b.add_edge(num(1), {x}, {});
  b.add_edge(op(opname::kAdd), {r}, {x, y});
  b.set_inputs({r});
  CHECK(canonical_form(a) == canonical_form(b));
  CHECK(iso_check(a, b));

  Hypernet c = sum_net();
  c.relabel(*c.outgoing(c.edge(*c.outgoing(c.inputs()[0])).targets[0]), num(7));
  CHECK_FALSE(iso_check(a, c));

  // Compaction after removals keeps the canonical form.
  Hypernet d = program("bind x = 1 in x + x");
  std::string before = canonical_form(d);
  auto v = d.add_vertex(kStar);
  d.remove_vertex(v);
  d.compact();
  CHECK(canonical_form(d) == before);
}

TEST_CASE("iso_check is an equivalence on generated nets") {
  const std::vector<std::string> srcs{"1 + 2", "2 + 1", "1 + 2", "bind x = 1 in x", "lambda x. x", "lambda y. y"};
  std::vector<Hypernet> nets;
  for (const auto& s : srcs) nets.push_back(program(s));
  for (std::size_t i = 0; i < nets.size(); ++i) {
    CHECK(iso_check(nets[i], nets[i]));
    for (std::size_t j = 0; j < nets.size(); ++j) {
      CHECK(iso_check(nets[i], nets[j]) == iso_check(nets[j], nets[i]));
      for (std::size_t k = 0; k < nets.size(); ++k)
        if (iso_check(nets[i], nets[j]) && iso_check(nets[j], nets[k])) CHECK(iso_check(nets[i], nets[k]));
    }
  }
  CHECK(iso_check(nets[0], nets[2]));
  CHECK_FALSE(iso_check(nets[0], nets[1]));
  CHECK(iso_check(nets[4], nets[5]));  // alpha-equivalent
}

TEST_CASE("copyable nets") {
  Hypernet lam = program("lambda x. x");
  auto m = find_copyable_at(lam, lam.inputs()[0]);
  REQUIRE(m);
  CHECK(m->boxes.size() == 1);

  Hypernet name = program("new a <= 0 in a");
  auto i = find_copyable_at(name, name.inputs()[0]);
  REQUIRE(i);
  CHECK(holds<InstanceLabel>(name.edge(i->head).label));
  CHECK(i->boxes.empty());
}

TEST_CASE("stable sub-nets") {
  for (const char* src : {"1", "tt", "lambda x. x + 1", "new a <= 0 in a"}) {
    CAPTURE(src);
    Hypernet h = program(src);
    auto s = max_stable_from(h, h.inputs()[0]);
    REQUIRE(s);
    Hypernet e = extract(h, *s);
    CHECK(validate(e, false).empty());
    // Shape: every vertex reachable from the input, inner vertices are stars.
    std::set<VertexId> reach{e.inputs()[0]};
    std::vector<VertexId> stack{e.inputs()[0]};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      if (auto out = e.outgoing(v))
        for (auto t : e.edge(*out).targets)
          if (reach.insert(t).second) stack.push_back(t);
    }
    CHECK(reach.size() == e.vertex_count());
    for (auto v : e.vertex_ids()) {
      bool is_out = std::find(e.outputs().begin(), e.outputs().end(), v) != e.outputs().end();
      if (!is_out) CHECK(e.label(v) == kStar);
    }
  }
  Hypernet sum = program("1 + 2");
  CHECK_FALSE(max_stable_from(sum, sum.inputs()[0]));
}

TEST_CASE("path classification") {
  auto cls = [](const std::string& src) {
    Hypernet h = program(src);
    return classify_paths(h, h.inputs()[0]);
  };
  CHECK(cls("1") == PathClass::AllStable);
  CHECK(cls("lambda x. x") == PathClass::AllStable);
  CHECK(cls("1 + 2") == PathClass::AllActive);
  CHECK(cls("(1 + 2) + 3") == PathClass::Mixed);
  CHECK(to_string(PathClass::Mixed) == "mixed");
}

TEST_CASE("one-way nets") {
  CHECK(is_one_way(sum_net()));
  auto tr = translate({{"x"}, {}}, *parse("x + 1"));
  // The op path from the root reaches the x output through a contraction,
  // not through operation edges alone.
  CHECK(is_one_way(tr.net));
  Hypernet h;
  auto r = h.add_vertex(kStar), o = h.add_vertex(kStar);
  h.add_edge(op(opname::kRef), {r}, {o});
  h.set_inputs({r});
  h.set_outputs({o});
  CHECK_FALSE(is_one_way(h));
}

TEST_CASE("DOT output") {
  std::string dot = to_dot(program("lambda x. x + 1"), "g");
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("cluster_") != std::string::npos);
  CHECK(dot.find("★") != std::string::npos);
  CHECK(dot == to_dot(program("lambda x. x + 1"), "g"));
}
