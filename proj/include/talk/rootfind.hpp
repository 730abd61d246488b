#ifndef TALK_ROOTFIND_HPP
#define TALK_ROOTFIND_HPP

#include <functional>

namespace talk {

// Bisection on [lo, hi]. Requires f(lo) * f(hi) <= 0 (throws BracketError
// otherwise). Stops when |f(mid)| <= tol or the bracket width is <= tol;
// the result always lies in the initial bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

// 1-D maximizer of a concave function on [lo, hi] by golden-section search.
double maximize_concave(const std::function<double(double)>& f, double lo, double hi,
                        double tol);

}  // namespace talk

#endif  // TALK_ROOTFIND_HPP
