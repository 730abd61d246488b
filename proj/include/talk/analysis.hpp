#ifndef TALK_ANALYSIS_HPP
#define TALK_ANALYSIS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "talk/game.hpp"

namespace talk {

struct MinmaxPayoffs {
  double uBarS = 0.0;
  double uBarR = 0.0;
  SenderStrategy senderWitness;    // constant messaging function
  ReceiverStrategy receiverWitness;  // constant Sender-worst ex-ante action
};

struct ReceiverBestResponse {
  ReceiverStrategy strategy;
  double value = 0.0;
};

struct SenderBestResponse {
  SenderStrategy strategy;
  double value = 0.0;
};

// Ex-ante expected payoffs of a behavioral profile.
PayoffProfile expected_payoffs(const FiniteCheapTalkGame& game, const SenderStrategy& sender,
                               const ReceiverStrategy& receiver);

// Best reply to the Sender's kernel. Messages with positive marginal get a
// point mass on a posterior-optimal action; zero-probability messages get the
// ex-ante (babbling) optimal action. Ties break to the lowest action index.
ReceiverBestResponse receiver_best_response(const FiniteCheapTalkGame& game,
                                            const SenderStrategy& sender);

// Best reply to the Receiver's kernel: per-state point mass on the message
// whose action lottery is best for the Sender (lowest index on ties).
SenderBestResponse sender_best_response(const FiniteCheapTalkGame& game,
                                        const ReceiverStrategy& receiver);

// Closed-form minmax values with witness strategies.
MinmaxPayoffs minmax(const FiniteCheapTalkGame& game);

// Composition rho' = rho o sigma: the Receiver strategy that makes the
// truthful profile outcome-equivalent to (sigma, rho) in every state.
ReceiverStrategy revelation_transform(const FiniteCheapTalkGame& game,
                                      const SenderStrategy& sender,
                                      const ReceiverStrategy& receiver);

// Receiver-unique-best-response and minimal-conflict diagnostics.
struct AssumptionReport {
  bool a1Holds = false;
  bool a2Holds = false;
  // Per state: the lowest-index Receiver-optimal action and whether it ties.
  std::vector<std::size_t> receiverOptimalAction;
  std::vector<bool> tieAtState;
  std::vector<std::size_t> aStar;           // actions optimal in some state
  std::vector<std::size_t> conflictStates;  // Z
  double conflictMass = 0.0;                // prior mass of Z
  std::string detail;                       // human-readable failure notes
};

AssumptionReport check_assumptions(const FiniteCheapTalkGame& game);

}  // namespace talk

#endif  // TALK_ANALYSIS_HPP
