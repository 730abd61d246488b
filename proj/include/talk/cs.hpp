#ifndef TALK_CS_HPP
#define TALK_CS_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "talk/game.hpp"

namespace talk {

// Continuum Sender-Receiver game on the unit state interval: the Receiver's
// ex-post payoff is loss(a - theta), the Sender's is loss(a - theta - bias),
// actions live in [-bias, 1 + bias]. `loss` must be strictly concave with
// lossPrime(0) = 0. The default instance is the quadratic loss -x^2 with a
// uniform prior.
struct ContinuumGameSpec {
  double bias = 0.2;
  std::function<double(double)> loss;
  std::function<double(double)> lossPrime;
  std::function<double(double)> density;  // full-support prior density on [0,1]
  bool quadratic = true;

  double action_lo() const { return -bias; }
  double action_hi() const { return 1.0 + bias; }
};

ContinuumGameSpec make_quadratic_cs(double bias);
ContinuumGameSpec make_general_cs(double bias, std::function<double(double)> loss,
                                  std::function<double(double)> lossPrime,
                                  std::function<double(double)> density);

// Step-function Sender strategy: a partition of [0,1]; pooled cells speak
// through their conditional mean, revealed cells report the state.
struct CsCell {
  double lo = 0.0;
  double hi = 1.0;
  bool pooled = false;
};

struct CsSenderStrategy {
  std::vector<CsCell> cells;  // ordered, covering [0,1]
};

// Step-function Receiver strategy: piecewise action rule over messages
// (identity-plus-offset or constant pieces) with optional atom overrides for
// pooled-cell messages.
struct CsReceiverPiece {
  double lo = 0.0;
  double hi = 1.0;
  bool identity = false;
  double value = 0.0;  // offset when identity, the action itself otherwise
};

struct CsReceiverStrategy {
  std::vector<CsReceiverPiece> pieces;
  std::vector<std::pair<double, double>> atoms;  // (message, action)
};

double cs_action(const CsReceiverStrategy& receiver, double message);

PayoffProfile cs_expected_payoffs(const ContinuumGameSpec& spec, const CsSenderStrategy& sender,
                                  const CsReceiverStrategy& receiver);

// Value of the Receiver's best reply to a step Sender strategy (cell-wise 1-D
// concave maximization).
double cs_receiver_best_response_value(const ContinuumGameSpec& spec,
                                       const CsSenderStrategy& sender);

// Value of the Sender's best deviation against a step Receiver strategy (the
// Sender can induce any action in the closure of the strategy's range).
double cs_sender_best_response_value(const ContinuumGameSpec& spec,
                                     const CsReceiverStrategy& receiver);

struct CsMinmax {
  double uBarS = 0.0;
  double uBarR = 0.0;
  double receiverWitnessAction = 0.0;  // constant action holding the Sender down
  double senderWitnessMessage = 0.0;   // any constant message
};

// Closed forms for the quadratic loss: uBarR = -Var(theta) at the prior-mean
// action, uBarS = -Var(theta) - (E[theta] + bias)^2 at the constant action 0.
// The action interval reaches below 0, where a constant action would push the
// Sender lower still; the stated bound is the one the rest of the analytic
// layer is built on, so discretized games report a lower Sender minmax.
// Non-quadratic losses are refused.
CsMinmax cs_minmax(const ContinuumGameSpec& spec);

struct CsParetoPoint {
  double lambdaTilde = 0.0;  // compromise offset fraction: action = theta + lambdaTilde*bias
  PayoffProfile v;
};

// Pareto point for Sender weight lambda in [0,1]: solves
// lambda * loss'(-(1-t) b) + (1-lambda) * loss'(t b) = 0 for t by bisection;
// payoffs (loss(-(1-t) b), loss(t b)). Quadratic loss gives t = lambda.
CsParetoPoint pareto_point(const ContinuumGameSpec& spec, double lambda);

struct CsFrontierSample {
  double lambda = 0.0;
  double lambdaTilde = 0.0;
  PayoffProfile v;
};

std::vector<CsFrontierSample> frontier_curve(const ContinuumGameSpec& spec,
                                             std::size_t gridSize);

struct CsReceiverPunishment {
  double y = 0.0;  // pooling threshold: states in [0, y] pooled, rest revealed
  CsSenderStrategy sender;
  CsReceiverStrategy receiver;
  double value = 0.0;  // uS(sigma^{R,y}, rho^{R,y})
  double receiverBestResponseValue = 0.0;
};

// Chooses y so the Sender payoff of the pool-low profile equals targetValue
// (within 1e-10). Throws BracketError naming the attainable range when the
// target is outside it.
CsReceiverPunishment receiver_punishment_y(const ContinuumGameSpec& spec, double targetValue);

struct CsSenderPunishment {
  double x = 0.0;  // truncation point: believe below x, play x above
  CsReceiverStrategy receiver;
  double receiverValue = 0.0;       // uR(truth, rho^{S,x})
  double senderDeviationCap = 0.0;  // sup_{sigma'} uS(sigma', rho^{S,x})
};

// Chooses x so the Receiver value of the truncation profile equals
// targetReceiverValue (within 1e-10); also evaluates the Sender's best
// deviation, whose induced action is the report capped at x.
CsSenderPunishment sender_punishment_x(const ContinuumGameSpec& spec,
                                       double targetReceiverValue);

struct CsCertificate {
  double lambda = 0.0;
  double lambdaTilde = 0.0;
  PayoffProfile target;
  double w = 0.0;  // Sender payoff level of the Receiver punishment (midpoint rule)
  CsReceiverPunishment receiverPunishment;
  CsSenderPunishment senderPunishment;
};

struct CsCertifyResult {
  std::optional<CsCertificate> certificate;
  std::string failedInequality;  // set when absent
};

// Analytic certification of the Pareto point at Sender weight
// lambda in (0, 1/2): Receiver punishment at the midpoint level
// w = (vS + vR)/2, Sender punishment matched to vR, strict cap check.
// Weights outside (0, 1/2) are rejected.
CsCertifyResult certify_cs(const ContinuumGameSpec& spec, double lambda);

// Empirical smallest certifiable weight on a grid over (0, 1/2).
std::optional<double> cs_lambda_bar(const ContinuumGameSpec& spec, std::size_t gridSize);

// Both sides of the range-shift identity: shifting every Receiver action down
// by the bias turns the Sender's payoff into the Receiver's. Returns
// (uR(sender, shifted receiver), uS(sender, receiver)); requires the
// receiver's actions to lie in [0, 1 + bias].
std::pair<double, double> shift_check(const ContinuumGameSpec& spec,
                                      const CsSenderStrategy& sender,
                                      const CsReceiverStrategy& receiver);

// Finite bridge: states are the midpoints of a uniform partition of [0,1]
// with cell prior masses, actions a uniform grid on [-bias, 1+bias].
FiniteCheapTalkGame discretize(const ContinuumGameSpec& spec, std::size_t nStates,
                               std::size_t nActions);

}  // namespace talk

#endif  // TALK_CS_HPP
