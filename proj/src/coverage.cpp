#include "coverage.hpp"

namespace istn {

std::string_view to_string(Method m) { return m == Method::Analytic ? "analytic" : "mc"; }

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::Sat:
      return "sat";
    case Tier::Ter:
      return "ter";
    default:
      return "istn";
  }
}

}  // namespace istn
