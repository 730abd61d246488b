#ifndef TALK_GAME_HPP
#define TALK_GAME_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace talk {

using Matrix = std::vector<std::vector<double>>;

inline constexpr double kProbTol = 1e-12;  // simplex / algebraic identities
inline constexpr double kGeomTol = 1e-9;   // geometric predicates, LP residuals

struct PayoffProfile {
  double vS = 0.0;
  double vR = 0.0;
};

// Behavioral Sender strategy: row-stochastic kernel, rows = states,
// columns = messages.
struct SenderStrategy {
  Matrix kernel;
};

// Behavioral Receiver strategy: row-stochastic kernel, rows = messages,
// columns = actions.
struct ReceiverStrategy {
  Matrix kernel;
};

// Finite Sender-Receiver stage game. Messages are canonically identified with
// states: an input message list must equal the state list element-wise.
struct FiniteCheapTalkGame {
  std::vector<std::string> states;
  std::vector<double> prior;  // full support, sums to 1
  std::vector<std::string> actions;
  Matrix uS;  // [state][action]
  Matrix uR;  // [state][action]

  std::size_t n_states() const { return states.size(); }
  std::size_t n_messages() const { return states.size(); }
  std::size_t n_actions() const { return actions.size(); }
};

// Full invariant check; throws ValidationError naming the first violation and
// its coordinates. `messages`, when non-null, is matched against `states`.
void validate_game(const FiniteCheapTalkGame& game,
                   const std::vector<std::string>* messages = nullptr);

void validate_sender(const FiniteCheapTalkGame& game, const SenderStrategy& s);
void validate_receiver(const FiniteCheapTalkGame& game, const ReceiverStrategy& r);

// Truth-telling: identity kernel over states/messages.
SenderStrategy truthful_sender(const FiniteCheapTalkGame& game);

// Believing: each message gets the action that would be Receiver-optimal if
// the message were the true state (ties: lowest action index).
ReceiverStrategy believing_receiver(const FiniteCheapTalkGame& game);

// Constant kernels (every row is a point mass on the given column).
SenderStrategy constant_sender(const FiniteCheapTalkGame& game, std::size_t message);
ReceiverStrategy constant_receiver(const FiniteCheapTalkGame& game, std::size_t action);

// Row-wise convex combination w*a + (1-w)*b.
Matrix mix_kernels(const Matrix& a, const Matrix& b, double w);

bool kernels_equal(const Matrix& a, const Matrix& b, double tol);

}  // namespace talk

#endif  // TALK_GAME_HPP
