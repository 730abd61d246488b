#ifndef TALK_BINARY_HPP
#define TALK_BINARY_HPP

#include <utility>

#include "talk/game.hpp"
#include "talk/wrp.hpp"

namespace talk {

// The two-state persuasion game: state 0 has prior mass alpha in (1/2, 1),
// the Sender's payoff is the action taken, the Receiver's payoff is 1 when
// the action matches the state.
FiniteCheapTalkGame make_binary(double alpha);

// Open interval of Receiver payoffs on the Pareto frontier that admit a
// certificate: (alpha, 1 - alpha(1-alpha)/(2-alpha)).
std::pair<double, double> wrp_interval(double alpha);

// Closed-form certificate for the frontier point with on-path believe-weight
// nu in ((2 alpha - 1)/alpha, 1/(2 - alpha)):
//   normal:             (truth, nu * believe + (1-nu) * always-1)
//   Sender punishment:  (truth, gamma * believe + (1-gamma) * always-0),
//                       gamma = (1 - 2 alpha + alpha nu)/(1 - alpha), which
//                       holds the Receiver at exactly the target
//   Receiver punishment: (p * truth + (1-p) * always-send-1, believe) with
//                       p = max(0, (2 alpha - 2 + vR)/alpha), which keeps the
//                       Receiver's best response pinned at the babbling value
//                       while minimizing the discount factor the induced
//                       one-period punishment automaton needs
// The result is verified strictly before being returned.
WRPCertificate construct_profile(double alpha, double nu);

}  // namespace talk

#endif  // TALK_BINARY_HPP
