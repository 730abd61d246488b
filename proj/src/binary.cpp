#include "talk/binary.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "talk/analysis.hpp"
#include "talk/errors.hpp"

namespace talk {

FiniteCheapTalkGame make_binary(double alpha) {
  if (!(alpha > 0.5) || !(alpha < 1.0)) {
    std::ostringstream os;
    os << "binary game needs alpha strictly inside (1/2, 1), got " << alpha;
    throw ValidationError(os.str());
  }
  FiniteCheapTalkGame g;
  g.states = {"0", "1"};
  g.prior = {alpha, 1.0 - alpha};
  g.actions = {"0", "1"};
  g.uS = {{0.0, 1.0}, {0.0, 1.0}};          // the Sender wants the high action
  g.uR = {{1.0, 0.0}, {0.0, 1.0}};          // the Receiver wants to match the state
  return g;
}

std::pair<double, double> wrp_interval(double alpha) {
  if (!(alpha > 0.5) || !(alpha < 1.0)) {
    throw ValidationError("wrp_interval: alpha must lie strictly inside (1/2, 1)");
  }
  return {alpha, 1.0 - alpha * (1.0 - alpha) / (2.0 - alpha)};
}

WRPCertificate construct_profile(double alpha, double nu) {
  const FiniteCheapTalkGame game = make_binary(alpha);
  const double nu_lo = (2.0 * alpha - 1.0) / alpha;
  const double nu_hi = 1.0 / (2.0 - alpha);
  // Open interval; a 1e-12 band absorbs representation error at the endpoints.
  if (nu <= nu_lo + 1e-12) {
    std::ostringstream os;
    os << "nu = " << nu << " violates nu > (2 alpha - 1)/alpha = " << nu_lo
       << " (the target would not be strictly individually rational)";
    throw ValidationError(os.str());
  }
  if (nu >= nu_hi - 1e-12) {
    std::ostringstream os;
    os << "nu = " << nu << " violates nu < 1/(2 - alpha) = " << nu_hi
       << " (no Sender punishment can stay below the target)";
    throw ValidationError(os.str());
  }

  const SenderStrategy truth = truthful_sender(game);
  const ReceiverStrategy believe = believing_receiver(game);
  const ReceiverStrategy always1 = constant_receiver(game, 1);
  const ReceiverStrategy always0 = constant_receiver(game, 0);
  const SenderStrategy send1 = constant_sender(game, 1);

  const double gamma = (1.0 - 2.0 * alpha + alpha * nu) / (1.0 - alpha);
  const double vR = nu + (1.0 - nu) * (1.0 - alpha);
  // Truth weight of the Receiver punishment. This value equalizes the
  // Receiver's two repeated-game constraints (deterrence on path, conformity
  // while punished) and so minimizes the discount factor the one-period
  // automaton needs; any weight below (2 alpha - 1)/alpha satisfies the
  // stage inequalities.
  const double truth_weight = std::max(0.0, (2.0 * alpha - 2.0 + vR) / alpha);

  WRPCertificate cert;
  cert.normalSender = truth;
  cert.normalReceiver = ReceiverStrategy{mix_kernels(believe.kernel, always1.kernel, nu)};
  cert.target = expected_payoffs(game, cert.normalSender, cert.normalReceiver);
  cert.senderPunishmentSender = truth;
  cert.senderPunishmentReceiver =
      ReceiverStrategy{mix_kernels(believe.kernel, always0.kernel, gamma)};
  cert.receiverPunishmentSender =
      SenderStrategy{mix_kernels(truth.kernel, send1.kernel, truth_weight)};
  cert.receiverPunishmentReceiver = believe;

  const CertificateCheck check = verify_certificate(game, cert, CertMode::Strict);
  cert.margins = check.margins;
  if (!check.valid) {
    throw std::logic_error("binary certificate failed strict verification: " + check.detail);
  }
  return cert;
}

}  // namespace talk
