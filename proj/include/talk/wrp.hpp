#ifndef TALK_WRP_HPP
#define TALK_WRP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "talk/analysis.hpp"
#include "talk/feasible.hpp"
#include "talk/game.hpp"

namespace talk {

struct CertificateMargins {
  double mIRS = 0.0;  // vS - uBarS
  double mIRR = 0.0;  // vR - uBarR
  double mS = 0.0;    // vS - sup_{sigma'} uS(sigma', rhoS)
  double mR = 0.0;    // vR - sup_{rho'} uR(sigmaR, rho')
  double punisherSlackS = 0.0;  // uR(sigmaS, rhoS) - vR
  double punisherSlackR = 0.0;  // uS(sigmaR, rhoR) - vS
};

// A payoff target plus the three stage profiles whose inequality system
// supports it: the normal profile achieving the target, a profile that caps
// the Sender's deviation payoff below the target while keeping the Receiver
// whole, and the mirror-image profile punishing the Receiver.
struct WRPCertificate {
  PayoffProfile target;
  SenderStrategy normalSender;
  ReceiverStrategy normalReceiver;
  SenderStrategy senderPunishmentSender;      // sigma^S
  ReceiverStrategy senderPunishmentReceiver;  // rho^S
  SenderStrategy receiverPunishmentSender;    // sigma^R
  ReceiverStrategy receiverPunishmentReceiver;  // rho^R
  CertificateMargins margins;
  // Set when the certificate is the trivial repetition of a stage Nash
  // profile; such certificates verify in weak mode only (zero margins).
  bool stageNash = false;
};

enum class CertMode { Strict, Weak };

struct CertificateCheck {
  bool feasible = false;  // target inside the hull and achieved by the normal profile
  bool irOk = false;
  bool senderSideOk = false;
  bool receiverSideOk = false;
  bool slacksOk = false;
  bool valid = false;
  CertificateMargins margins;  // recomputed from scratch
  std::string detail;
};

// Recomputes every inequality of the certificate via the core operations.
// Strict mode demands positive deviation margins (sufficiency); weak mode
// tolerates zero margins (necessity). An infeasible target is reported as a
// failed check, not an exception.
CertificateCheck verify_certificate(const FiniteCheapTalkGame& game,
                                    const WRPCertificate& cert, CertMode mode);

struct SenderPunishment {
  ReceiverStrategy receiver;  // rho^S; sigma^S is fixed to the truthful kernel
  double cap = 0.0;           // exact min attainable sup_{sigma'} uS(sigma', rho^S)
};

// Exact LP: choose rho^S holding the Receiver at >= vR (against truth) while
// minimizing the Sender's best deviation payoff. Fixing sigma^S to the
// truthful kernel loses nothing (composition only shrinks the deviation
// menu). Throws NoPunishmentError when vR exceeds the Receiver optimum.
SenderPunishment find_sender_punishment(const FiniteCheapTalkGame& game,
                                        const PayoffProfile& v);

struct ReceiverPunishment {
  SenderStrategy sender;      // sigma^R: one message per pooling cell
  ReceiverStrategy receiver;  // rho^R: cell-posterior Sender-optimal actions
};

struct CertifyOptions {
  std::size_t partitionLimit = 8;  // exhaustive set-partition enumeration cap
};

// Heuristic search over pooling partitions: low-state prefix pools first,
// then (within the limit) every set partition. Returns the first partition
// with uS(sigma^R, rho^R) >= vS and a strictly punished Receiver best
// response. Absence is not a proof of non-existence. Throws CapabilityError
// when only exhaustive enumeration is left and the state count exceeds the
// limit.
std::optional<ReceiverPunishment> find_receiver_punishment(const FiniteCheapTalkGame& game,
                                                           const PayoffProfile& v,
                                                           const CertifyOptions& opts = {});

// Full pipeline: strict individual rationality, a normal profile from an LP
// over per-state action weights, both punishments, strict verification.
// Stage-Nash targets fall back to the trivial equal-profiles certificate.
std::optional<WRPCertificate> certify_point(const FiniteCheapTalkGame& game,
                                            const PayoffProfile& v,
                                            const CertifyOptions& opts = {});

struct ScanRow {
  double lambda = 0.0;
  PayoffProfile payoff;
  bool wrp = false;
  double capS = 0.0;           // exact sender-deviation cap at this Receiver payoff
  double maxFrontierVS = 0.0;  // max feasible Sender payoff at this Receiver payoff
  double margin = 0.0;         // payoff.vS - capS
};

std::vector<ScanRow> scan_frontier(const FiniteCheapTalkGame& game, std::size_t gridSize,
                                   const CertifyOptions& opts = {});

struct GapPoint {
  double vR = 0.0;
  double minCap = 0.0;
  double maxFrontierVS = 0.0;
  bool wrpPossible = false;
};

struct GapReport {
  double receiverOptimum = 0.0;           // uR(truth, believe)
  double senderAtOptimum = 0.0;           // uS(truth, believe)
  double senderDeviationAtOptimum = 0.0;  // sup_{sigma'} uS(sigma', believe)
  std::vector<GapPoint> gridPoints;       // vR descending from the optimum
  double etaEstimate = 0.0;
  bool assumptionsViolated = false;
};

// Quantifies how far below the Receiver optimum supportable targets start:
// at each grid level the exact deviation cap is compared against the best
// feasible Sender payoff.
GapReport receiver_gap(const FiniteCheapTalkGame& game, std::size_t gridSize);

// Max feasible vS at a fixed Receiver payoff (LP over per-state action
// weights with the Sender truthful).
double max_feasible_vs(const FiniteCheapTalkGame& game, double vR);

// LP feasibility probe: a Receiver kernel achieving v against the truthful
// Sender, if v is feasible.
std::optional<ReceiverStrategy> normal_profile_for(const FiniteCheapTalkGame& game,
                                                   const PayoffProfile& v);

}  // namespace talk

#endif  // TALK_WRP_HPP
