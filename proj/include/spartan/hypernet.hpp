#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "spartan/ops.hpp"

namespace spartan {

struct VertexId {
  std::uint32_t value = 0;
  friend auto operator<=>(VertexId, VertexId) = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  friend auto operator<=>(EdgeId, EdgeId) = default;
};

enum class Sort : std::uint8_t { Star, Diamond, Thunk };

// Vertex labels: the star type, the name type, and thunk types T^n(star).
struct VertexLabel {
  Sort sort = Sort::Star;
  std::uint32_t thunk_arity = 0;

  static constexpr VertexLabel star() { return {Sort::Star, 0}; }
  static constexpr VertexLabel diamond() { return {Sort::Diamond, 0}; }
  static constexpr VertexLabel thunk(std::uint32_t n) { return {Sort::Thunk, n}; }

  friend bool operator==(VertexLabel, VertexLabel) = default;
  friend auto operator<=>(VertexLabel, VertexLabel) = default;
};

std::string to_string(VertexLabel label);

enum class TokenKind : std::uint8_t { Search, Value, Rewrite };

std::string_view token_glyph(TokenKind kind);  // "?", "v", "!"

class Hypernet;

struct OpLabel {
  OpSignature sig;
};
struct InstanceLabel {};
struct AtomLabel {};
struct ContractionLabel {
  Sort sort = Sort::Star;  // Star or Diamond
};
struct WeakeningLabel {
  Sort sort = Sort::Star;
};
struct TokenLabel {
  TokenKind kind = TokenKind::Search;
};
// Box contents are immutable and shared; copying a box edge copies the value.
struct BoxLabel {
  std::shared_ptr<const Hypernet> content;
  std::uint32_t bound = 0;
};
struct HoleLabel {
  std::string name;
  std::vector<VertexLabel> sources;
  std::vector<VertexLabel> targets;
};

using EdgeLabel = std::variant<OpLabel, InstanceLabel, AtomLabel, ContractionLabel,
                               WeakeningLabel, TokenLabel, BoxLabel, HoleLabel>;

template <class T>
bool holds(const EdgeLabel& label) {
  return std::holds_alternative<T>(label);
}

struct EdgeType {
  std::vector<VertexLabel> sources;
  std::vector<VertexLabel> targets;
  bool operator==(const EdgeType&) const = default;
};

// The type every edge with this label must have.
EdgeType edge_type(const EdgeLabel& label);

// Short human-readable label ("+", "I", "C*", "box/1", ...).
std::string label_text(const EdgeLabel& label);

bool is_passive_op(const EdgeLabel& label);
bool is_active_op(const EdgeLabel& label);
const OpSignature* op_signature(const EdgeLabel& label);

class HypernetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Interfaced labelled monoidal hypergraph whose box edges nest further
// hypernets. Vertices and edges are addressed by index; removal leaves a
// tombstone until compact() is called.
class Hypernet {
 public:
  struct Vertex {
    VertexLabel label;
    std::optional<EdgeId> in;
    std::optional<EdgeId> out;
    std::uint32_t in_degree = 0;
    std::uint32_t out_degree = 0;
    bool alive = true;
  };

  struct Edge {
    EdgeLabel label;
    std::vector<VertexId> sources;
    std::vector<VertexId> targets;
    bool alive = true;
  };

  VertexId add_vertex(VertexLabel label);
  EdgeId add_edge(EdgeLabel label, std::vector<VertexId> sources, std::vector<VertexId> targets);

  void remove_edge(EdgeId e);
  // The vertex must have no incident edges.
  void remove_vertex(VertexId v);
  // Identifies `drop` with `keep`: every occurrence of `drop` becomes `keep`.
  void fuse(VertexId keep, VertexId drop);
  void replace_source(EdgeId e, std::size_t index, VertexId v);
  void replace_target(EdgeId e, std::size_t index, VertexId v);
  void relabel(EdgeId e, EdgeLabel label);

  const Vertex& vertex(VertexId v) const { return vertices_.at(v.value); }
  const Edge& edge(EdgeId e) const { return edges_.at(e.value); }
  VertexLabel label(VertexId v) const { return vertex(v).label; }

  // The edge `v` is a target of, or a source of, respectively.
  std::optional<EdgeId> incoming(VertexId v) const { return vertex(v).in; }
  std::optional<EdgeId> outgoing(VertexId v) const { return vertex(v).out; }

  const std::vector<VertexId>& inputs() const { return inputs_; }
  const std::vector<VertexId>& outputs() const { return outputs_; }
  void set_inputs(std::vector<VertexId> inputs) { inputs_ = std::move(inputs); }
  void set_outputs(std::vector<VertexId> outputs) { outputs_ = std::move(outputs); }

  EdgeType type() const;

  std::vector<VertexId> vertex_ids() const;
  std::vector<EdgeId> edge_ids() const;
  std::size_t vertex_count() const { return live_vertices_; }
  std::size_t edge_count() const { return live_edges_; }
  // Raw slot counts, including tombstones.
  std::size_t vertex_slots() const { return vertices_.size(); }
  std::size_t edge_slots() const { return edges_.size(); }
  bool vertex_alive(VertexId v) const { return v.value < vertices_.size() && vertices_[v.value].alive; }
  bool edge_alive(EdgeId e) const { return e.value < edges_.size() && edges_[e.value].alive; }

  // Drops tombstones; returns the old-to-new vertex index map (dead -> nullopt).
  std::vector<std::optional<VertexId>> compact();

 private:
  void attach(EdgeId e);
  void detach(EdgeId e);
  void rescan_in(VertexId v);
  void rescan_out(VertexId v);

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<VertexId> inputs_;
  std::vector<VertexId> outputs_;
  std::size_t live_vertices_ = 0;
  std::size_t live_edges_ = 0;
};

// ---------------------------------------------------------------------------
// Construction and algebra

// Copies `piece` into `host`, identifying the i-th input of `piece` with
// input_images[i] and the j-th output with output_images[j]. Returns the map
// from piece vertex index to host vertex.
std::vector<VertexId> embed(Hypernet& host, const Hypernet& piece,
                            std::span<const VertexId> input_images,
                            std::span<const VertexId> output_images);

// Interface permutation: new input i is old input input_perm[i] (0-based),
// likewise for outputs.
Hypernet permute_interface(const Hypernet& net, std::span<const std::size_t> input_perm,
                           std::span<const std::size_t> output_perm);

// Disjoint union with concatenated interfaces.
Hypernet tensor(std::span<const Hypernet> nets);

// Replaces the hole edge named `hole` (at any depth) by `filler`.
Hypernet plug(const Hypernet& context, const std::string& hole, const Hypernet& filler);

// D^l_{k,m} : l^{km} => l^{k}, inputs grouped copy-major.
Hypernet distributor(Sort sort, std::size_t k, std::size_t m);

bool is_contraction_tree(const Hypernet& net);

// Hole names at any depth, in traversal order (duplicates kept).
std::vector<std::string> hole_names(const Hypernet& net);

// Token edges at any depth.
std::size_t count_tokens(const Hypernet& net);

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string where;  // "" for the top level, "e3/e0" for nested boxes
  std::string message;
  bool operator==(const Violation&) const = default;
};

// Empty result means valid. `sealed` additionally forbids vertices that are
// both an input and an output.
std::vector<Violation> validate(const Hypernet& net, bool sealed);

// ---------------------------------------------------------------------------
// Sub-nets and path analysis

// A set of edges of a host net seen as a sub-net with one input.
struct SubNet {
  VertexId input;
  std::vector<EdgeId> edges;
  std::vector<VertexId> outputs;
};

// Materialises a sub-net as a standalone hypernet.
Hypernet extract(const Hypernet& net, const SubNet& sub);

// A single instance edge, or an operation edge plus the box edges fed by
// its deferred targets.
struct CopyableMatch {
  EdgeId head;
  std::vector<EdgeId> boxes;
};

std::optional<CopyableMatch> find_copyable_at(const Hypernet& net, VertexId v);

bool is_one_way(const Hypernet& net);

// Maximal stable sub-net rooted at v, or nullopt when some accessible path
// from v is not stable (or there is none).
std::optional<SubNet> max_stable_from(const Hypernet& net, VertexId v);

enum class PathClass : std::uint8_t { AllStable, AllActive, Mixed, NoAccessiblePath };

std::string_view to_string(PathClass c);

PathClass classify_paths(const Hypernet& net, VertexId v);

// ---------------------------------------------------------------------------
// Canonical form, isomorphism and DOT

// Deterministic serialisation; equal strings iff the nets are isomorphic
// (for nets whose vertices have at most one incoming and one outgoing edge).
std::string canonical_form(const Hypernet& net);

bool iso_check(const Hypernet& a, const Hypernet& b);

// Live vertices in canonical traversal order.
std::vector<VertexId> canonical_vertex_order(const Hypernet& net);

std::string to_dot(const Hypernet& net, const std::string& graph_name = "hypernet");

}  // namespace spartan
