#include "talk/game.hpp"

#include <cmath>
#include <sstream>

#include "talk/errors.hpp"

namespace talk {

namespace {

void check_kernel(const Matrix& kernel, std::size_t rows, std::size_t cols,
                  const char* who) {
  if (kernel.size() != rows) {
    std::ostringstream os;
    os << who << " kernel has " << kernel.size() << " rows, expected " << rows;
    throw ValidationError(os.str());
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (kernel[i].size() != cols) {
      std::ostringstream os;
      os << who << " kernel row " << i << " has " << kernel[i].size()
         << " entries, expected " << cols;
      throw ValidationError(os.str());
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double p = kernel[i][j];
      if (!std::isfinite(p) || p < -kProbTol || p > 1.0 + kProbTol) {
        std::ostringstream os;
        os << who << " kernel entry [" << i << "][" << j << "] = " << p
           << " is not a probability";
        throw ValidationError(os.str());
      }
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      std::ostringstream os;
      os << who << " kernel row " << i << " sums to " << sum << ", expected 1";
      throw ValidationError(os.str());
    }
  }
}

}  // namespace

void validate_game(const FiniteCheapTalkGame& game,
                   const std::vector<std::string>* messages) {
  const std::size_t n = game.states.size();
  const std::size_t k = game.actions.size();
  if (n < 2) throw ValidationError("game needs at least 2 states, got " + std::to_string(n));
  if (k < 2) throw ValidationError("game needs at least 2 actions, got " + std::to_string(k));
  if (game.prior.size() != n) {
    throw ValidationError("prior has " + std::to_string(game.prior.size()) +
                          " entries for " + std::to_string(n) + " states");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(game.prior[i]) || game.prior[i] <= 0.0) {
      std::ostringstream os;
      os << "prior[" << i << "] = " << game.prior[i]
         << " violates full support (every entry must be > 0)";
      throw ValidationError(os.str());
    }
    sum += game.prior[i];
  }
  if (std::fabs(sum - 1.0) > kProbTol) {
    std::ostringstream os;
    os << "prior sums to " << sum << ", expected 1 within 1e-12";
    throw ValidationError(os.str());
  }
  if (messages != nullptr) {
    if (messages->size() != n) {
      throw ValidationError("message list has " + std::to_string(messages->size()) +
                            " entries; messages must equal states element-wise");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if ((*messages)[i] != game.states[i]) {
        std::ostringstream os;
        os << "messages[" << i << "] = \"" << (*messages)[i]
           << "\" differs from states[" << i << "] = \"" << game.states[i]
           << "\"; extra or reordered messages are rejected";
        throw ValidationError(os.str());
      }
    }
  }
  for (const auto& [name, table] : {std::pair<const char*, const Matrix*>{"uS", &game.uS},
                                    std::pair<const char*, const Matrix*>{"uR", &game.uR}}) {
    if (table->size() != n) {
      throw ValidationError(std::string(name) + " has " + std::to_string(table->size()) +
                            " rows for " + std::to_string(n) + " states");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if ((*table)[i].size() != k) {
        std::ostringstream os;
        os << name << " row " << i << " has " << (*table)[i].size()
           << " entries for " << k << " actions";
        throw ValidationError(os.str());
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (!std::isfinite((*table)[i][j])) {
          std::ostringstream os;
          os << name << "[" << i << "][" << j << "] is not finite";
          throw ValidationError(os.str());
        }
      }
    }
  }
}

void validate_sender(const FiniteCheapTalkGame& game, const SenderStrategy& s) {
  check_kernel(s.kernel, game.n_states(), game.n_messages(), "sender");
}

void validate_receiver(const FiniteCheapTalkGame& game, const ReceiverStrategy& r) {
  check_kernel(r.kernel, game.n_messages(), game.n_actions(), "receiver");
}

SenderStrategy truthful_sender(const FiniteCheapTalkGame& game) {
  const std::size_t n = game.n_states();
  Matrix k(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) k[i][i] = 1.0;
  return SenderStrategy{std::move(k)};
}

ReceiverStrategy believing_receiver(const FiniteCheapTalkGame& game) {
  const std::size_t n = game.n_states();
  const std::size_t a = game.n_actions();
  Matrix k(n, std::vector<double>(a, 0.0));
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < a; ++j) {
      if (game.uR[m][j] > game.uR[m][best]) best = j;
    }
    k[m][best] = 1.0;
  }
  return ReceiverStrategy{std::move(k)};
}

SenderStrategy constant_sender(const FiniteCheapTalkGame& game, std::size_t message) {
  Matrix k(game.n_states(), std::vector<double>(game.n_messages(), 0.0));
  for (auto& row : k) row.at(message) = 1.0;
  return SenderStrategy{std::move(k)};
}

ReceiverStrategy constant_receiver(const FiniteCheapTalkGame& game, std::size_t action) {
  Matrix k(game.n_messages(), std::vector<double>(game.n_actions(), 0.0));
  for (auto& row : k) row.at(action) = 1.0;
  return ReceiverStrategy{std::move(k)};
}

Matrix mix_kernels(const Matrix& a, const Matrix& b, double w) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < out[i].size(); ++j) {
      out[i][j] = w * a[i][j] + (1.0 - w) * b[i][j];
    }
  }
  return out;
}

bool kernels_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (std::fabs(a[i][j] - b[i][j]) > tol) return false;
    }
  }
  return true;
}

}  // namespace talk
