#include "diracbs/types.hpp"

namespace diracbs {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::schrodinger: return "schrodinger";
    case OperatorKind::klein_gordon: return "klein_gordon";
    case OperatorKind::dirac: return "dirac";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  if (name == "schrodinger") return OperatorKind::schrodinger;
  if (name == "klein_gordon" || name == "klein-gordon") return OperatorKind::klein_gordon;
  if (name == "dirac") return OperatorKind::dirac;
  throw ValidationError("unknown operator kind '" + name + "'");
}

} // namespace diracbs
