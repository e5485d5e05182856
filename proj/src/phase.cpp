#include <cmath>

#include "tmm/errors.hpp"
#include "tmm/phase.hpp"

namespace tmm {

std::string to_string(Phase p) {
  switch (p) {
    case Phase::I: return "I";
    case Phase::II: return "II";
    case Phase::III: return "III";
    case Phase::IV: return "IV";
    case Phase::BoundaryParabola: return "boundary-parabola";
    case Phase::BoundaryHyperbola: return "boundary-hyperbola";
    case Phase::Multicritical: return "multicritical";
  }
  return "?";
}

PhasePoint classify_phase(double alpha, double tau, double tol) {
  if (!(tau > 0.0)) throw ValidationError("classify_phase: tau must be positive");
  PhasePoint p{alpha, tau, Phase::I};
  const bool on_parabola = std::abs(tau * tau - (alpha + 2.0)) <= tol;
  const bool on_hyperbola = std::abs(alpha * tau * tau + 1.0) <= tol;
  if (on_parabola && on_hyperbola) p.phase = Phase::Multicritical;
  else if (on_parabola) p.phase = Phase::BoundaryParabola;
  else if (on_hyperbola) p.phase = Phase::BoundaryHyperbola;
  else if (alpha * tau * tau < -1.0) p.phase = Phase::III;
  else if (tau * tau < alpha + 2.0) p.phase = Phase::I;
  else p.phase = tau > 1.0 ? Phase::II : Phase::IV;
  return p;
}

Polynomial w_effective(const Polynomial& w, double tau) { return w - Polynomial::monomial(2, 0.5 * tau * tau); }

double tau_critical(const Polynomial& w_eff) {
  const double second = 2.0 * w_eff.coeff(2);
  if (second >= 0.0) throw NonNegativeSecondDerivative("W_eff''(0) must be negative for a critical coupling");
  return std::sqrt(-second / 2.0);
}

}  // namespace tmm
