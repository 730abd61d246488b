#ifndef TALK_QUADRATURE_HPP
#define TALK_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace talk {

// Adaptive Simpson quadrature of a bounded, piecewise-smooth integrand.
// Interior breakpoints (kink locations) are used as mandatory subdivision
// points; values outside (lo, hi) are ignored. Throws ValidationError when
// lo > hi.
double integrate(const std::function<double(double)>& f, double lo, double hi, double tol,
                 const std::vector<double>& breakpoints = {});

}  // namespace talk

#endif  // TALK_QUADRATURE_HPP
