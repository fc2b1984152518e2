#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spartan {

enum class Polarity : std::uint8_t { Passive, Active };

// Arity (m_e; n_1..n_p) of an operation together with its polarity.
struct OpSignature {
  std::string name;
  std::uint32_t eager = 0;
  std::vector<std::uint32_t> deferred;
  Polarity polarity = Polarity::Passive;

  bool is_active() const { return polarity == Polarity::Active; }
  bool operator==(const OpSignature&) const = default;
};

// Canonical operation names of the built-in set.
namespace opname {
inline constexpr std::string_view kLambda = "lambda";
inline constexpr std::string_view kApp = "app";
inline constexpr std::string_view kTrue = "tt";
inline constexpr std::string_view kFalse = "ff";
inline constexpr std::string_view kUnit = "unit";
inline constexpr std::string_view kRef = "ref";
inline constexpr std::string_view kEq = "eq";
inline constexpr std::string_view kAssign = "assign";
inline constexpr std::string_view kDeref = "deref";
inline constexpr std::string_view kAdd = "add";
inline constexpr std::string_view kSub = "sub";
inline constexpr std::string_view kNeg = "neg";
}  // namespace opname

// Integer value of a numeral operation name ("42", "-3"), if it is one.
std::optional<std::int64_t> numeral_value(std::string_view name);

// Short ASCII rendering used in traces, DOT output and reports.
std::string op_symbol(std::string_view name);

}  // namespace spartan
