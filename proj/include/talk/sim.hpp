#ifndef TALK_SIM_HPP
#define TALK_SIM_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "talk/game.hpp"
#include "talk/wrp.hpp"

namespace talk {

enum class Phase { Normal = 0, PunishSender = 1, PunishReceiver = 2 };

// OnePeriodRetrigger: a deviation by player i sends play to Punish-i for one
// conforming period, after which play returns to Normal; any deviation
// re-triggers. Absorbing: punishment phases never release (grim reversion);
// deviations still re-target the punished player.
enum class TransitionRule { OnePeriodRetrigger, Absorbing };

enum class Deviation { None, BySender, ByReceiver };

const char* phase_name(Phase p);
const char* rule_name(TransitionRule r);
std::optional<TransitionRule> rule_from_name(const std::string& name);

Phase next_phase(TransitionRule rule, Phase current, Deviation observed);

struct PhaseProfile {
  SenderStrategy sender;
  ReceiverStrategy receiver;
};

struct ThreePhaseAutomaton {
  FiniteCheapTalkGame game;
  PhaseProfile normal;
  PhaseProfile punishSender;
  PhaseProfile punishReceiver;
  TransitionRule rule = TransitionRule::OnePeriodRetrigger;

  const PhaseProfile& profile(Phase p) const;
};

ThreePhaseAutomaton automaton_from_certificate(
    const FiniteCheapTalkGame& game, const WRPCertificate& cert,
    TransitionRule rule = TransitionRule::OnePeriodRetrigger);

struct PhaseValues {
  std::array<PayoffProfile, 3> v;  // indexed by Phase
  const PayoffProfile& at(Phase p) const { return v[static_cast<std::size_t>(p)]; }
  PayoffProfile& at(Phase p) { return v[static_cast<std::size_t>(p)]; }
};

// Normalized continuation values under conforming play: the unique solution
// of V(p) = (1-delta) u(profile(p)) + delta V(next(p, none)).
PhaseValues continuation_values(const ThreePhaseAutomaton& autom, double delta);

struct SpeMargin {
  Phase phase = Phase::Normal;
  bool sender = false;
  double margin = 0.0;  // conforming value minus best one-shot deviation value
};

struct SpeReport {
  std::array<SpeMargin, 6> margins;
  double minMargin = 0.0;
  bool isSpe = false;
  PhaseValues values;
};

// One-shot-deviation check in every phase for both players.
SpeReport check_spe(const ThreePhaseAutomaton& autom, double delta, double tol = 1e-9);

struct WrpPhaseReport {
  PhaseValues values;
  // (dominated, dominating) pairs where the second phase value is strictly
  // higher for both players.
  std::vector<std::pair<Phase, Phase>> violations;
  bool wrpCompatible = false;
};

WrpPhaseReport check_wrp_phases(const ThreePhaseAutomaton& autom, double delta);

// Smallest discount factor on the grid at which check_spe passes, refined by
// bisection to 1e-6. Empty when even delta = 1 - 1e-6 fails (the automaton is
// unsupportable).
std::optional<double> min_delta(const ThreePhaseAutomaton& autom, std::size_t gridSize,
                                double tol = 1e-9);

struct ScriptedDeviation {
  std::size_t t = 0;
  bool bySender = true;
  Matrix kernel;  // replaces the player's phase kernel for period t
};

struct TraceRecord {
  std::size_t t = 0;
  Phase phase = Phase::Normal;
  std::size_t state = 0;
  std::size_t message = 0;
  std::size_t action = 0;
  double uS = 0.0;
  double uR = 0.0;
};

struct SimTrace {
  std::vector<TraceRecord> records;
  PayoffProfile discounted;         // (1-delta)-normalized realized value
  PayoffProfile undiscountedMean;
  std::array<std::size_t, 3> phaseCounts{0, 0, 0};
  std::vector<std::pair<std::size_t, bool>> deviationLog;  // (t, bySender)
};

// Seeded sample path: each period draws state, then message, then action.
// Scripted deviations replace one player's kernel for one period and are
// detected exactly when the kernel differs from the phase kernel (entry-wise,
// 1e-9); simultaneous deviations resolve to the Sender's punishment.
SimTrace run_path(const ThreePhaseAutomaton& autom, double delta, std::size_t periods,
                  std::uint64_t seed, const std::vector<ScriptedDeviation>& deviations = {});

}  // namespace talk

#endif  // TALK_SIM_HPP
