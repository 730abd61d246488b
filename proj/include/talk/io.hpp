#ifndef TALK_IO_HPP
#define TALK_IO_HPP

#include <string>
#include <vector>

#include "talk/cs.hpp"
#include "talk/game.hpp"
#include "talk/sim.hpp"
#include "talk/wrp.hpp"

namespace talk {

// All emitted files carry numbers at 12 significant digits so identical
// invocations produce byte-identical output.
std::string fmt12(double v);

FiniteCheapTalkGame load_game(const std::string& path);
void save_game(const FiniteCheapTalkGame& game, const std::string& path);

Matrix load_kernel(const std::string& path);  // {"kernel": [[...], ...]}
void save_kernel(const Matrix& kernel, const std::string& path);

WRPCertificate load_certificate(const std::string& path);
void save_certificate(const WRPCertificate& cert, const std::string& path);

ThreePhaseAutomaton load_automaton(const std::string& path);
void save_automaton(const ThreePhaseAutomaton& autom, const std::string& path);

std::vector<ScriptedDeviation> load_deviations(const std::string& path);

void save_gap_report(const GapReport& report, const std::string& path);

// CSV: lambda,vS,vR,wrp,capS,frontier_vS_max,margin
void save_scan_csv(const std::vector<ScanRow>& rows, const std::string& path);

// CSV: t,phase,state,message,action,uS,uR (labels, not indices)
void save_trace_csv(const FiniteCheapTalkGame& game, const SimTrace& trace,
                    const std::string& path);

// CSV: lambda,lambdaTilde,vS,vR
void save_frontier_csv(const std::vector<CsFrontierSample>& samples, const std::string& path);

}  // namespace talk

#endif  // TALK_IO_HPP
