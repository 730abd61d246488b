#ifndef TALK_FEASIBLE_HPP
#define TALK_FEASIBLE_HPP

#include <cstddef>
#include <vector>

#include "talk/game.hpp"

namespace talk {

struct FrontierPoint {
  double lambda = 0.0;  // supporting Pareto weight on the Sender payoff
  PayoffProfile payoff;
  ReceiverStrategy receiver;  // achieves the payoff together with the truthful Sender
};

struct FeasibleSet {
  std::vector<PayoffProfile> hullVertices;  // counter-clockwise convex polygon
  std::vector<FrontierPoint> paretoFrontier;  // Receiver payoff weakly decreasing
};

// Exact feasible polygon: the Minkowski sum over states of the prior-scaled
// convex hulls of each state's action payoff pairs. Works for any number of
// states >= 1 (the game-level invariant of >= 2 states is enforced by the
// loader, not here).
std::vector<PayoffProfile> feasible_hull(const std::vector<double>& prior, const Matrix& uS,
                                         const Matrix& uR);

// Hull plus a Pareto frontier sampled at `weightGridSize` Receiver-payoff
// levels along the strict Pareto chain, each with a Receiver kernel achieving
// it against the truthful Sender and a supporting scalarization weight.
FeasibleSet feasible_set(const FiniteCheapTalkGame& game, std::size_t weightGridSize);

// Point-in-convex-polygon test with a slack band of `tol` around the border.
bool inside_hull(const std::vector<PayoffProfile>& hull, const PayoffProfile& p, double tol);

}  // namespace talk

#endif  // TALK_FEASIBLE_HPP
