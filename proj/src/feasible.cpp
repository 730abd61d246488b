#include "talk/feasible.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "talk/errors.hpp"

namespace talk {

namespace {

// Hull point together with the per-state action choices generating it, so
// frontier kernels can be reconstructed exactly.
struct GenPoint {
  double x = 0.0;
  double y = 0.0;
  std::vector<int> choice;
};

double cross(const GenPoint& o, const GenPoint& a, const GenPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain; counter-clockwise, collinear points dropped.
std::vector<GenPoint> convex_hull(std::vector<GenPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const GenPoint& a, const GenPoint& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const GenPoint& a, const GenPoint& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<GenPoint> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<GenPoint> minkowski_accumulate(const std::vector<double>& prior, const Matrix& uS,
                                           const Matrix& uR) {
  std::vector<GenPoint> acc{GenPoint{0.0, 0.0, {}}};
  for (std::size_t s = 0; s < prior.size(); ++s) {
    std::vector<GenPoint> state_pts;
    state_pts.reserve(uS[s].size());
    for (std::size_t a = 0; a < uS[s].size(); ++a) {
      state_pts.push_back(GenPoint{prior[s] * uS[s][a], prior[s] * uR[s][a],
                                   {static_cast<int>(a)}});
    }
    state_pts = convex_hull(std::move(state_pts));
    std::vector<GenPoint> sums;
    sums.reserve(acc.size() * state_pts.size());
    for (const GenPoint& p : acc) {
      for (const GenPoint& q : state_pts) {
        GenPoint g{p.x + q.x, p.y + q.y, p.choice};
        g.choice.push_back(q.choice[0]);
        sums.push_back(std::move(g));
      }
    }
    acc = convex_hull(std::move(sums));
  }
  return acc;
}

void canonicalize(std::vector<GenPoint>& hull) {
  if (hull.empty()) return;
  std::size_t lo = 0;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (hull[i].x < hull[lo].x || (hull[i].x == hull[lo].x && hull[i].y < hull[lo].y)) lo = i;
  }
  std::rotate(hull.begin(), hull.begin() + static_cast<std::ptrdiff_t>(lo), hull.end());
}

ReceiverStrategy kernel_from_choice(const std::vector<int>& choice, std::size_t n_actions) {
  Matrix k(choice.size(), std::vector<double>(n_actions, 0.0));
  for (std::size_t s = 0; s < choice.size(); ++s) k[s][static_cast<std::size_t>(choice[s])] = 1.0;
  return ReceiverStrategy{std::move(k)};
}

}  // namespace

std::vector<PayoffProfile> feasible_hull(const std::vector<double>& prior, const Matrix& uS,
                                         const Matrix& uR) {
  if (prior.size() != uS.size() || prior.size() != uR.size() || prior.empty()) {
    throw ValidationError("feasible_hull: payoff table dimensions do not match the prior");
  }
  auto hull = minkowski_accumulate(prior, uS, uR);
  canonicalize(hull);
  std::vector<PayoffProfile> out;
  out.reserve(hull.size());
  for (const GenPoint& g : hull) out.push_back(PayoffProfile{g.x, g.y});
  return out;
}

FeasibleSet feasible_set(const FiniteCheapTalkGame& game, std::size_t weightGridSize) {
  validate_game(game);
  if (weightGridSize == 0) throw ValidationError("feasible_set: grid size must be positive");
  auto hull = minkowski_accumulate(game.prior, game.uS, game.uR);
  canonicalize(hull);

  FeasibleSet out;
  out.hullVertices.reserve(hull.size());
  for (const GenPoint& g : hull) out.hullVertices.push_back(PayoffProfile{g.x, g.y});

  // Strict Pareto chain: counter-clockwise arc from the Sender-optimal vertex
  // (ties resolved toward the Receiver) to the Receiver-optimal vertex (ties
  // toward the Sender), then reversed so the Receiver payoff decreases.
  const std::size_t n = hull.size();
  std::size_t top = 0, right = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (hull[i].y > hull[top].y || (hull[i].y == hull[top].y && hull[i].x > hull[top].x)) top = i;
    if (hull[i].x > hull[right].x || (hull[i].x == hull[right].x && hull[i].y > hull[right].y))
      right = i;
  }
  std::vector<const GenPoint*> chain;
  for (std::size_t i = right;; i = (i + 1) % n) {
    chain.push_back(&hull[i]);
    if (i == top) break;
  }
  std::reverse(chain.begin(), chain.end());

  const double vr_hi = chain.front()->y;
  const double vr_lo = chain.back()->y;
  const std::size_t g = (vr_hi - vr_lo <= 1e-15) ? 1 : weightGridSize;

  auto edge_lambda = [](const GenPoint& a, const GenPoint& b) {
    const double ds = b.x - a.x;
    const double dr = b.y - a.y;
    return -dr / (ds - dr);
  };

  std::size_t seg = 0;
  for (std::size_t i = 0; i < g; ++i) {
    const double level =
        (g == 1) ? vr_hi : vr_hi + (vr_lo - vr_hi) * static_cast<double>(i) / (g - 1);
    while (seg + 2 < chain.size() && chain[seg + 1]->y > level) ++seg;
    const GenPoint& a = *chain[seg];
    FrontierPoint fp;
    if (chain.size() == 1) {
      fp.lambda = 0.0;
      fp.payoff = PayoffProfile{a.x, a.y};
      fp.receiver = kernel_from_choice(a.choice, game.n_actions());
    } else {
      const GenPoint& b = *chain[seg + 1];
      const double t = std::clamp((level - a.y) / (b.y - a.y), 0.0, 1.0);
      fp.lambda = edge_lambda(a, b);
      if (i == 0) fp.lambda = 0.0;
      if (i + 1 == g) fp.lambda = 1.0;
      fp.payoff = PayoffProfile{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      const auto ka = kernel_from_choice(a.choice, game.n_actions());
      const auto kb = kernel_from_choice(b.choice, game.n_actions());
      fp.receiver = ReceiverStrategy{mix_kernels(kb.kernel, ka.kernel, t)};
    }
    out.paretoFrontier.push_back(std::move(fp));
  }
  return out;
}

bool inside_hull(const std::vector<PayoffProfile>& hull, const PayoffProfile& p, double tol) {
  if (hull.empty()) return false;
  if (hull.size() == 1) {
    return std::fabs(p.vS - hull[0].vS) <= tol && std::fabs(p.vR - hull[0].vR) <= tol;
  }
  if (hull.size() == 2) {
    const double ex = hull[1].vS - hull[0].vS;
    const double ey = hull[1].vR - hull[0].vR;
    const double len2 = ex * ex + ey * ey;
    double t = len2 > 0.0 ? ((p.vS - hull[0].vS) * ex + (p.vR - hull[0].vR) * ey) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = p.vS - (hull[0].vS + t * ex);
    const double dy = p.vR - (hull[0].vR + t * ey);
    return std::sqrt(dx * dx + dy * dy) <= tol;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const PayoffProfile& a = hull[i];
    const PayoffProfile& b = hull[(i + 1) % hull.size()];
    const double ex = b.vS - a.vS;
    const double ey = b.vR - a.vR;
    const double len = std::sqrt(ex * ex + ey * ey);
    if (len < 1e-300) continue;
    const double c = ex * (p.vR - a.vR) - ey * (p.vS - a.vS);
    if (c / len < -tol) return false;
  }
  return true;
}

}  // namespace talk
