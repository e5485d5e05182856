#pragma once

namespace tmm {

struct AiryValue {
  double ai;
  double aip;
};

// Ai and Ai' on [-20, 20]; DomainError outside.
AiryValue airy(double x);

namespace detail {
// Maclaurin series summed in long double. Accurate on roughly [-9, 7].
AiryValue airy_series(double x);
// Large-|x| expansions (exponential for x > 0, oscillatory for x < 0),
// truncated at the smallest term. Accurate for |x| >= 5 or so.
AiryValue airy_asymptotic(double x);
}  // namespace detail

}  // namespace tmm
