#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spartan/hypernet.hpp"

namespace spartan {

// A focussed state kept as its underlying focus-free net plus the token's
// position: the token edge sits directly above `pos`, i.e. its target is
// `pos` and its source takes over whatever edge used to target `pos`.
struct State {
  Hypernet net;
  VertexId pos;
  TokenKind token = TokenKind::Search;
};

class MachineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ?;net. Rejects nets with tokens, invalid nets and nets not of type star => epsilon.
State init(const Hypernet& net);

bool is_initial(const State& s);
bool is_final(const State& s);

// The state with its token edge materialised.
Hypernet focussed(const State& s);

enum class StepKind : std::uint8_t { Search, Copy, Compute };

struct Transition {
  StepKind kind = StepKind::Search;
  std::string rule;  // "1a".."5b" for search, "" for copy, operation symbol for compute
  TokenKind token_after = TokenKind::Search;
  std::size_t vertices = 0;  // shallow counts of the focussed net after the step
  std::size_t edges = 0;

  std::string kind_text() const;  // "search:3", "copy", "compute:+"
};

enum class StepStatus : std::uint8_t { Moved, Final, Stuck };

struct StepResult {
  StepStatus status = StepStatus::Moved;
  Transition transition;
  std::string reason;  // for Stuck
};

// Applies exactly one transition in place.
StepResult step(State& s);

// Every rule whose left-hand pattern matches: search rule ids, "copy", or
// "compute:<op>". Used to check that rule patterns are disjoint.
std::vector<std::string> matching_rules(const State& s);

struct TokenPlace {
  std::string rule;
  VertexId pos;
  TokenKind token = TokenKind::Search;
};

// The interaction rule that would lead from (pos, token) and where it moves
// the token; the net is unchanged by search.
std::optional<TokenPlace> search_move(const Hypernet& net, VertexId pos, TokenKind token);

// Applies the inverse of the interaction rule that could have produced `s`.
std::optional<TokenPlace> inverse_search(const State& s);

bool is_rooted(const State& s);

// Readable summary of the value at the input of a final state, e.g. "3",
// "tt", "lambda", "name".
std::string result_text(const State& s);

struct Outcome {
  enum class Kind : std::uint8_t { Final, Stuck, Fuel } kind = Kind::Final;
  std::uint64_t steps = 0;
  std::string reason;
};

std::string to_string(const Outcome& o);  // "FINAL 7", "STUCK 5 <reason>", "FUEL 100"

using StepObserver = std::function<void(std::uint64_t index, const Transition&, const State&)>;

Outcome run(State& s, std::uint64_t fuel, const StepObserver& observer = {});

struct TraceResult {
  Outcome outcome;
  std::vector<Transition> transitions;
};

TraceResult trace(State s, std::uint64_t fuel);

// One JSON object per transition.
std::string trace_record_json(std::uint64_t index, const Transition& t);

}  // namespace spartan
