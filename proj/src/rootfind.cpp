#include "talk/rootfind.hpp"

#include <cmath>
#include <sstream>

#include "talk/errors.hpp"

namespace talk {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw ValidationError("bisect: lo > hi");
  double flo = f(lo);
  double fhi = f(hi);
  if (std::fabs(flo) <= tol) return lo;
  if (std::fabs(fhi) <= tol) return hi;
  if (flo * fhi > 0.0) {
    std::ostringstream os;
    os << "bisect: no sign change on [" << lo << ", " << hi << "] (f(lo) = " << flo
       << ", f(hi) = " << fhi << ")";
    throw BracketError(os.str());
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::fabs(fm) <= tol) return mid;
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double maximize_concave(const std::function<double(double)>& f, double lo, double hi,
                        double tol) {
  if (!(lo <= hi)) throw ValidationError("maximize_concave: lo > hi");
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace talk
