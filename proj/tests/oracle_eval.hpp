#pragma once

// Term-level big-step evaluator used as an independent oracle for final
// values. It never touches hypernets: intrinsic bind substitutes the bound
// term, new stores the bound term unevaluated, and dereferencing requires the
// stored term to be a value.

#include <map>
#include <optional>
#include <string>

#include "spartan/lang.hpp"

namespace oracle {

struct Result {
  bool stuck = false;
  std::string value;  // "3", "tt", "ff", "()", "lambda", "name"
};

class Evaluator {
 public:
  Result run(const spartan::TermPtr& t, int fuel = 100000);

 private:
  struct Stuck {};
  spartan::TermPtr eval(const spartan::TermPtr& t);
  spartan::TermPtr fresh_name();
  void tick();

  std::map<std::string, spartan::TermPtr> store_;
  int counter_ = 0;
  int fuel_ = 0;
};

inline Result evaluate(const spartan::TermPtr& t) { return Evaluator{}.run(t); }

}  // namespace oracle
