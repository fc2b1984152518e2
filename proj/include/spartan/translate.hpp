#pragma once

#include <vector>

#include "spartan/hypernet.hpp"
#include "spartan/lang.hpp"

namespace spartan {

struct TranslationResult {
  Hypernet net;  // inputs = {root}, outputs = var_outputs ++ atom_outputs
  VertexId root;
  std::vector<VertexId> var_outputs;
  std::vector<VertexId> atom_outputs;
};

// Net of type star => star^|vars| (x) diamond^|atoms| for env |- t : star.
// Throws TypeError when the term does not typecheck.
TranslationResult translate(const Environment& env, const Term& t);

// Closed program to a sealed net of type star => epsilon.
Hypernet translate_program(const Term& t);

}  // namespace spartan
