#pragma once

#include "spartan/equiv.hpp"

namespace spartan::detail {

void accumulate(Verdict& v, const LawDef& law, std::size_t instance, const Context& ctx, const CheckResult& r,
                std::size_t max_dot);
Verdict empty_verdict(const LawDef& law);

}  // namespace spartan::detail
