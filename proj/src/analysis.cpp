#include "talk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "talk/errors.hpp"

namespace talk {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kHuge = 1e300;

std::size_t babbling_action(const FiniteCheapTalkGame& game) {
  std::size_t best = 0;
  double best_v = -kHuge;
  for (std::size_t a = 0; a < game.n_actions(); ++a) {
    double v = 0.0;
    for (std::size_t s = 0; s < game.n_states(); ++s) v += game.prior[s] * game.uR[s][a];
    if (v > best_v + kTieTol) {
      best_v = v;
      best = a;
    }
  }
  return best;
}

}  // namespace

PayoffProfile expected_payoffs(const FiniteCheapTalkGame& game, const SenderStrategy& sender,
                               const ReceiverStrategy& receiver) {
  validate_sender(game, sender);
  validate_receiver(game, receiver);
  PayoffProfile out;
  for (std::size_t s = 0; s < game.n_states(); ++s) {
    for (std::size_t m = 0; m < game.n_messages(); ++m) {
      const double w = game.prior[s] * sender.kernel[s][m];
      if (w == 0.0) continue;
      for (std::size_t a = 0; a < game.n_actions(); ++a) {
        const double p = w * receiver.kernel[m][a];
        out.vS += p * game.uS[s][a];
        out.vR += p * game.uR[s][a];
      }
    }
  }
  return out;
}

ReceiverBestResponse receiver_best_response(const FiniteCheapTalkGame& game,
                                            const SenderStrategy& sender) {
  validate_sender(game, sender);
  const std::size_t n = game.n_states();
  const std::size_t na = game.n_actions();
  const std::size_t fallback = babbling_action(game);
  Matrix kernel(game.n_messages(), std::vector<double>(na, 0.0));
  double value = 0.0;
  for (std::size_t m = 0; m < game.n_messages(); ++m) {
    double marginal = 0.0;
    for (std::size_t s = 0; s < n; ++s) marginal += game.prior[s] * sender.kernel[s][m];
    if (marginal <= 0.0) {
      kernel[m][fallback] = 1.0;
      continue;
    }
    std::size_t best = 0;
    double best_v = -kHuge;
    for (std::size_t a = 0; a < na; ++a) {
      double v = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        v += game.prior[s] * sender.kernel[s][m] * game.uR[s][a];
      }
      if (v > best_v + kTieTol) {
        best_v = v;
        best = a;
      }
    }
    kernel[m][best] = 1.0;
    value += best_v;
  }
  return ReceiverBestResponse{ReceiverStrategy{std::move(kernel)}, value};
}

SenderBestResponse sender_best_response(const FiniteCheapTalkGame& game,
                                        const ReceiverStrategy& receiver) {
  validate_receiver(game, receiver);
  const std::size_t n = game.n_states();
  Matrix kernel(n, std::vector<double>(game.n_messages(), 0.0));
  double value = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t best = 0;
    double best_v = -kHuge;
    for (std::size_t m = 0; m < game.n_messages(); ++m) {
      double v = 0.0;
      for (std::size_t a = 0; a < game.n_actions(); ++a) {
        v += receiver.kernel[m][a] * game.uS[s][a];
      }
      if (v > best_v + kTieTol) {
        best_v = v;
        best = m;
      }
    }
    kernel[s][best] = 1.0;
    value += game.prior[s] * best_v;
  }
  return SenderBestResponse{SenderStrategy{std::move(kernel)}, value};
}

MinmaxPayoffs minmax(const FiniteCheapTalkGame& game) {
  validate_game(game);
  MinmaxPayoffs out;
  double best_r = -kHuge;
  double worst_s = kHuge;
  std::size_t worst_action = 0;
  for (std::size_t a = 0; a < game.n_actions(); ++a) {
    double er = 0.0;
    double es = 0.0;
    for (std::size_t s = 0; s < game.n_states(); ++s) {
      er += game.prior[s] * game.uR[s][a];
      es += game.prior[s] * game.uS[s][a];
    }
    if (er > best_r + kTieTol) best_r = er;
    if (es < worst_s - kTieTol) {
      worst_s = es;
      worst_action = a;
    }
  }
  out.uBarR = best_r;
  out.uBarS = worst_s;
  out.senderWitness = constant_sender(game, 0);
  out.receiverWitness = constant_receiver(game, worst_action);
  return out;
}

ReceiverStrategy revelation_transform(const FiniteCheapTalkGame& game,
                                      const SenderStrategy& sender,
                                      const ReceiverStrategy& receiver) {
  validate_sender(game, sender);
  validate_receiver(game, receiver);
  Matrix kernel(game.n_states(), std::vector<double>(game.n_actions(), 0.0));
  for (std::size_t s = 0; s < game.n_states(); ++s) {
    for (std::size_t m = 0; m < game.n_messages(); ++m) {
      const double w = sender.kernel[s][m];
      if (w == 0.0) continue;
      for (std::size_t a = 0; a < game.n_actions(); ++a) {
        kernel[s][a] += w * receiver.kernel[m][a];
      }
    }
  }
  return ReceiverStrategy{std::move(kernel)};
}

AssumptionReport check_assumptions(const FiniteCheapTalkGame& game) {
  validate_game(game);
  AssumptionReport rep;
  const std::size_t n = game.n_states();
  rep.receiverOptimalAction.assign(n, 0);
  rep.tieAtState.assign(n, false);
  std::ostringstream detail;

  rep.a1Holds = true;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < game.n_actions(); ++a) {
      if (game.uR[s][a] > game.uR[s][best]) best = a;
    }
    rep.receiverOptimalAction[s] = best;
    for (std::size_t a = 0; a < game.n_actions(); ++a) {
      if (a != best && game.uR[s][a] >= game.uR[s][best] - kTieTol) {
        rep.tieAtState[s] = true;
        rep.a1Holds = false;
        detail << "state " << game.states[s] << ": Receiver indifferent between actions "
               << game.actions[best] << " and " << game.actions[a] << "; ";
      }
    }
  }
  // Injectivity of the optimal-action map.
  std::vector<bool> seen(game.n_actions(), false);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t a = rep.receiverOptimalAction[s];
    if (seen[a]) {
      rep.a1Holds = false;
      detail << "action " << game.actions[a] << " optimal in more than one state; ";
    }
    seen[a] = true;
  }
  for (std::size_t a = 0; a < game.n_actions(); ++a) {
    if (seen[a]) rep.aStar.push_back(a);
  }

  for (std::size_t s = 0; s < n; ++s) {
    double best_in_astar = -1e300;
    for (std::size_t a : rep.aStar) best_in_astar = std::max(best_in_astar, game.uS[s][a]);
    if (game.uS[s][rep.receiverOptimalAction[s]] < best_in_astar - kTieTol) {
      rep.conflictStates.push_back(s);
      rep.conflictMass += game.prior[s];
    }
  }
  rep.a2Holds = rep.conflictMass > 0.0;
  if (!rep.a2Holds) detail << "no state where the Sender prefers a different induced action; ";
  rep.detail = detail.str();
  return rep;
}

}  // namespace talk
