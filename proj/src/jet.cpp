#include "jet.hpp"

namespace istn {

std::vector<double> derivatives_at(const std::function<Jet(const Jet&)>& f, double s0, int order) {
  const Jet result = f(Jet::variable(s0, order));
  if (result.order() != order) throw NumericalError("jet function changed the expansion order");
  std::vector<double> out(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) out[k] = result.derivative(k);
  return out;
}

double alternating_taylor_sum(const Jet& f_at_s0, double s0, int n) {
  if (n > f_at_s0.order()) throw DomainError("series order exceeds the jet order");
  // c_k already carries the 1/k!.
  double sum = 0.0;
  double power = 1.0;
  for (int k = 0; k <= n; ++k) {
    sum += power * f_at_s0[k];
    power *= -s0;
  }
  return sum;
}

}  // namespace istn
