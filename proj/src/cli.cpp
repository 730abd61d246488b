#include "talk/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "talk/analysis.hpp"
#include "talk/binary.hpp"
#include "talk/cs.hpp"
#include "talk/errors.hpp"
#include "talk/io.hpp"
#include "talk/sim.hpp"
#include "talk/wrp.hpp"

namespace talk {

namespace {

void emit_figure1(double alpha, const std::string& path, std::ostream& out) {
  const FiniteCheapTalkGame game = make_binary(alpha);
  const auto hull = feasible_hull(game.prior, game.uS, game.uR);
  const MinmaxPayoffs mm = minmax(game);
  const auto [lo, hi] = wrp_interval(alpha);
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << "# binary-game payoff set (alpha = " << fmt12(alpha) << ")\n"
    << "# kind=hull: feasible-hull vertex; kind=minmax: minmax point;\n"
    << "# kind=wrp_lo / wrp_hi: certified frontier segment endpoints\n"
    << "kind,x,y\n";
  for (const auto& v : hull) f << "hull," << fmt12(v.vS) << ',' << fmt12(v.vR) << '\n';
  f << "minmax," << fmt12(mm.uBarS) << ',' << fmt12(mm.uBarR) << '\n';
  const double intercept = 2.0 - alpha;  // frontier line: vS + vR = 2 - alpha
  f << "wrp_lo," << fmt12(intercept - lo) << ',' << fmt12(lo) << '\n';
  f << "wrp_hi," << fmt12(intercept - hi) << ',' << fmt12(hi) << '\n';
  out << "wrote " << path << '\n';
}

void emit_figure2(double bias, std::size_t grid, const std::string& path, std::ostream& out) {
  const ContinuumGameSpec spec = make_quadratic_cs(bias);
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << "# continuum-game Pareto frontier (bias = " << fmt12(bias) << ")\n"
    << "# certified = 1 when the analytic construction supports the point\n"
    << "lambda,lambdaTilde,vS,vR,certified\n";
  for (std::size_t i = 0; i < grid; ++i) {
    const double lambda = static_cast<double>(i) / (grid - 1);
    const CsParetoPoint p = pareto_point(spec, lambda);
    bool certified = false;
    if (lambda > 0.0 && lambda < 0.5) {
      certified = certify_cs(spec, lambda).certificate.has_value();
    }
    f << fmt12(lambda) << ',' << fmt12(p.lambdaTilde) << ',' << fmt12(p.v.vS) << ','
      << fmt12(p.v.vR) << ',' << (certified ? 1 : 0) << '\n';
  }
  out << "wrote " << path << '\n';
}

void print_spe_report(const SpeReport& rep, std::ostream& out) {
  for (const auto& m : rep.margins) {
    out << "  " << phase_name(m.phase) << ' ' << (m.sender ? "sender" : "receiver")
        << " margin=" << fmt12(m.margin) << '\n';
  }
  out << "spe=" << (rep.isSpe ? "yes" : "no") << " minMargin=" << fmt12(rep.minMargin) << '\n';
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"solver, certifier and simulator for repeated cheap-talk games"};
  app.require_subcommand(1);

  // ---- game ----------------------------------------------------------
  auto* game_cmd = app.add_subcommand("game", "stage-game analyses");
  game_cmd->require_subcommand(1);
  std::string game_path, sender_path, receiver_path, out_path, hull_path;
  std::size_t grid = 200;

  auto* g_validate = game_cmd->add_subcommand("validate", "check a game file");
  g_validate->add_option("game", game_path, "game JSON file")->required();

  auto* g_payoffs = game_cmd->add_subcommand("payoffs", "expected payoffs of a profile");
  g_payoffs->add_option("game", game_path)->required();
  g_payoffs->add_option("--sender", sender_path, "sender kernel JSON")->required();
  g_payoffs->add_option("--receiver", receiver_path, "receiver kernel JSON")->required();

  auto* g_minmax = game_cmd->add_subcommand("minmax", "minmax payoffs");
  g_minmax->add_option("game", game_path)->required();

  auto* g_frontier = game_cmd->add_subcommand("frontier", "feasible hull and Pareto frontier");
  g_frontier->add_option("game", game_path)->required();
  g_frontier->add_option("--grid", grid, "frontier sample count");
  g_frontier->add_option("--out", out_path, "frontier CSV path")->required();
  g_frontier->add_option("--hull", hull_path, "optional hull CSV path");

  // ---- wrp -----------------------------------------------------------
  auto* wrp_cmd = app.add_subcommand("wrp", "renegotiation-proofness machinery");
  wrp_cmd->require_subcommand(1);
  double vs = 0.0, vr = 0.0;
  std::string verify_path, mode = "strict";
  std::size_t partition_limit = 8;

  auto* w_certify = wrp_cmd->add_subcommand("certify", "construct or verify a certificate");
  w_certify->add_option("game", game_path)->required();
  auto* vs_opt = w_certify->add_option("--vs", vs, "target Sender payoff");
  auto* vr_opt = w_certify->add_option("--vr", vr, "target Receiver payoff");
  w_certify->add_option("--out", out_path, "certificate JSON output");
  w_certify->add_option("--verify", verify_path, "verify an existing certificate");
  w_certify->add_option("--mode", mode, "strict|weak")->check(CLI::IsMember({"strict", "weak"}));
  w_certify->add_option("--partition-limit", partition_limit);

  auto* w_scan = wrp_cmd->add_subcommand("scan", "certify the whole Pareto frontier");
  w_scan->add_option("game", game_path)->required();
  w_scan->add_option("--grid", grid);
  w_scan->add_option("--out", out_path)->required();
  w_scan->add_option("--partition-limit", partition_limit);

  auto* w_gap = wrp_cmd->add_subcommand("gap", "gap below the Receiver optimum");
  w_gap->add_option("game", game_path)->required();
  w_gap->add_option("--grid", grid);
  w_gap->add_option("--out", out_path)->required();

  // ---- binary --------------------------------------------------------
  auto* binary_cmd = app.add_subcommand("binary", "two-state persuasion game");
  double alpha = 2.0 / 3.0, nu = 0.6;
  bool want_interval = false, want_construct = false, want_fig1 = false;
  binary_cmd->add_option("--alpha", alpha, "prior mass of state 0")->required();
  binary_cmd->add_flag("--interval", want_interval, "print the certified payoff interval");
  binary_cmd->add_flag("--construct", want_construct, "build the closed-form certificate");
  binary_cmd->add_option("--nu", nu, "on-path believe weight");
  binary_cmd->add_flag("--figure1", want_fig1, "emit payoff-set figure data");
  binary_cmd->add_option("--out", out_path);

  // ---- cs ------------------------------------------------------------
  auto* cs_cmd = app.add_subcommand("cs", "continuum game");
  double bias = 0.2, lambda = 0.45;
  bool want_certify = false, want_frontier = false, want_fig2 = false, want_lambda_bar = false;
  std::size_t n_states = 41, n_actions = 41;
  auto* bias_opt = cs_cmd->add_option("--bias", bias, "Sender bias");
  auto* lambda_opt = cs_cmd->add_option("--lambda", lambda, "Pareto weight on the Sender");
  cs_cmd->add_flag("--certify", want_certify, "certify the Pareto point at --lambda");
  cs_cmd->add_flag("--frontier", want_frontier, "emit the frontier CSV");
  cs_cmd->add_flag("--figure2", want_fig2, "emit frontier + certified-region CSV");
  cs_cmd->add_flag("--lambda-bar", want_lambda_bar, "empirical smallest certifiable weight");
  cs_cmd->add_option("--grid", grid);
  cs_cmd->add_option("--out", out_path);

  auto* cs_disc = cs_cmd->add_subcommand("discretize", "finite bridge game");
  cs_disc->add_option("--bias", bias, "Sender bias")->required();
  cs_disc->add_option("--n-states", n_states)->required();
  cs_disc->add_option("--n-actions", n_actions)->required();
  cs_disc->add_option("--out", out_path)->required();

  // ---- sim -----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("sim", "three-phase repeated-game automata");
  sim_cmd->require_subcommand(1);
  std::string automaton_path, cert_path, deviations_path;
  double delta = 0.95, tol = 1e-9;
  std::size_t periods = 1000;
  std::uint64_t seed = 1;

  std::size_t min_delta_grid = 1000;
  auto* s_check = sim_cmd->add_subcommand("check", "SPE and phase-dominance checks");
  auto* auto_opt = s_check->add_option("automaton", automaton_path, "automaton JSON");
  s_check->add_option("--game", game_path, "game JSON (with --cert)");
  s_check->add_option("--cert", cert_path, "build the automaton from a certificate");
  s_check->add_option("--delta", delta);
  s_check->add_option("--tol", tol);
  s_check->add_option("--grid", min_delta_grid, "min-delta scan grid");
  s_check->add_option("--emit-automaton", out_path, "write the assembled automaton");

  auto* s_run = sim_cmd->add_subcommand("run", "simulate a seeded sample path");
  s_run->add_option("automaton", automaton_path)->required();
  s_run->add_option("--delta", delta);
  s_run->add_option("--periods", periods);
  s_run->add_option("--seed", seed);
  s_run->add_option("--deviations", deviations_path, "scripted deviations JSON");
  s_run->add_option("--out", out_path, "trace CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? 0 : 2;  // unknown flags and bad values reject with 2
  }

  // ---- execution -----------------------------------------------------
  if (g_validate->parsed()) {
    load_game(game_path);
    out << "ok\n";
    return 0;
  }
  if (g_payoffs->parsed()) {
    const auto game = load_game(game_path);
    const SenderStrategy s{load_kernel(sender_path)};
    const ReceiverStrategy r{load_kernel(receiver_path)};
    const PayoffProfile v = expected_payoffs(game, s, r);
    out << "vS=" << fmt12(v.vS) << " vR=" << fmt12(v.vR) << '\n';
    return 0;
  }
  if (g_minmax->parsed()) {
    const auto game = load_game(game_path);
    const MinmaxPayoffs mm = minmax(game);
    out << "uBarS=" << fmt12(mm.uBarS) << " uBarR=" << fmt12(mm.uBarR) << '\n';
    return 0;
  }
  if (g_frontier->parsed()) {
    const auto game = load_game(game_path);
    const FeasibleSet fs = feasible_set(game, grid);
    std::ofstream f(out_path);
    if (!f) throw ValidationError("cannot write " + out_path);
    f << "lambda,vS,vR\n";
    for (const auto& fp : fs.paretoFrontier) {
      f << fmt12(fp.lambda) << ',' << fmt12(fp.payoff.vS) << ',' << fmt12(fp.payoff.vR) << '\n';
    }
    if (!hull_path.empty()) {
      std::ofstream h(hull_path);
      if (!h) throw ValidationError("cannot write " + hull_path);
      h << "vS,vR\n";
      for (const auto& v : fs.hullVertices) h << fmt12(v.vS) << ',' << fmt12(v.vR) << '\n';
    }
    out << "wrote " << out_path << '\n';
    return 0;
  }

  if (w_certify->parsed()) {
    const auto game = load_game(game_path);
    if (!verify_path.empty()) {
      const WRPCertificate cert = load_certificate(verify_path);
      const CertMode m = (mode == "weak") ? CertMode::Weak : CertMode::Strict;
      const CertificateCheck check = verify_certificate(game, cert, m);
      out << "valid=" << (check.valid ? "yes" : "no") << " mS=" << fmt12(check.margins.mS)
          << " mR=" << fmt12(check.margins.mR) << " mIRS=" << fmt12(check.margins.mIRS)
          << " mIRR=" << fmt12(check.margins.mIRR)
          << " slackS=" << fmt12(check.margins.punisherSlackS)
          << " slackR=" << fmt12(check.margins.punisherSlackR) << '\n';
      if (!check.valid) out << "detail: " << check.detail << '\n';
      return check.valid ? 0 : 2;
    }
    if (!(*vs_opt) || !(*vr_opt)) {
      throw ValidationError("wrp certify needs either --verify or both --vs and --vr");
    }
    CertifyOptions opts;
    opts.partitionLimit = partition_limit;
    const auto cert = certify_point(game, PayoffProfile{vs, vr}, opts);
    if (!cert) {
      out << "absent\n";
      return 0;
    }
    out << "certified vS=" << fmt12(cert->target.vS) << " vR=" << fmt12(cert->target.vR)
        << " mS=" << fmt12(cert->margins.mS) << " mR=" << fmt12(cert->margins.mR) << '\n';
    if (!out_path.empty()) save_certificate(*cert, out_path);
    return 0;
  }
  if (w_scan->parsed()) {
    const auto game = load_game(game_path);
    CertifyOptions opts;
    opts.partitionLimit = partition_limit;
    save_scan_csv(scan_frontier(game, grid, opts), out_path);
    out << "wrote " << out_path << '\n';
    return 0;
  }
  if (w_gap->parsed()) {
    const auto game = load_game(game_path);
    const GapReport rep = receiver_gap(game, grid);
    save_gap_report(rep, out_path);
    out << "etaEstimate=" << fmt12(rep.etaEstimate)
        << (rep.assumptionsViolated ? " (assumptions violated)" : "") << '\n';
    return 0;
  }

  if (binary_cmd->parsed()) {
    if (want_interval) {
      const auto [lo, hi] = wrp_interval(alpha);
      char buf[80];
      std::snprintf(buf, sizeof buf, "lo=%.6f hi=%.6f\n", lo, hi);
      out << buf;
    }
    if (want_construct) {
      const WRPCertificate cert = construct_profile(alpha, nu);
      out << "constructed vS=" << fmt12(cert.target.vS) << " vR=" << fmt12(cert.target.vR)
          << " mS=" << fmt12(cert.margins.mS) << " mR=" << fmt12(cert.margins.mR) << '\n';
      if (!out_path.empty()) save_certificate(cert, out_path);
    }
    if (want_fig1) {
      if (out_path.empty()) throw ValidationError("binary --figure1 needs --out");
      emit_figure1(alpha, out_path, out);
    }
    if (!want_interval && !want_construct && !want_fig1) {
      throw ValidationError("binary: choose --interval, --construct or --figure1");
    }
    return 0;
  }

  if (cs_disc->parsed()) {
    const ContinuumGameSpec spec = make_quadratic_cs(bias);
    save_game(discretize(spec, n_states, n_actions), out_path);
    out << "wrote " << out_path << '\n';
    return 0;
  }
  if (cs_cmd->parsed()) {
    if (!(*bias_opt)) throw ValidationError("cs analyses need --bias");
    const ContinuumGameSpec spec = make_quadratic_cs(bias);
    if (want_certify) {
      if (!(*lambda_opt)) throw ValidationError("cs --certify needs --lambda");
      const CsCertifyResult res = certify_cs(spec, lambda);
      if (res.certificate) {
        const CsCertificate& c = *res.certificate;
        out << "certified lambda=" << fmt12(c.lambda) << " vS=" << fmt12(c.target.vS)
            << " vR=" << fmt12(c.target.vR) << " y=" << fmt12(c.receiverPunishment.y)
            << " x=" << fmt12(c.senderPunishment.x)
            << " cap=" << fmt12(c.senderPunishment.senderDeviationCap) << '\n';
      } else {
        out << "absent: " << res.failedInequality << '\n';
      }
    }
    if (want_frontier) {
      if (out_path.empty()) throw ValidationError("cs --frontier needs --out");
      save_frontier_csv(frontier_curve(spec, grid), out_path);
      out << "wrote " << out_path << '\n';
    }
    if (want_fig2) {
      if (out_path.empty()) throw ValidationError("cs --figure2 needs --out");
      emit_figure2(bias, grid, out_path, out);
    }
    if (want_lambda_bar) {
      const auto lb = cs_lambda_bar(spec, grid);
      if (lb) {
        out << "lambdaBar=" << fmt12(*lb) << '\n';
      } else {
        out << "lambdaBar=none\n";
      }
    }
    if (!want_certify && !want_frontier && !want_fig2 && !want_lambda_bar) {
      throw ValidationError("cs: choose --certify, --frontier, --figure2 or --lambda-bar");
    }
    return 0;
  }

  if (s_check->parsed()) {
    ThreePhaseAutomaton autom;
    if (*auto_opt) {
      autom = load_automaton(automaton_path);
    } else if (!game_path.empty() && !cert_path.empty()) {
      autom = automaton_from_certificate(load_game(game_path), load_certificate(cert_path));
    } else {
      throw ValidationError("sim check needs an automaton file or --game with --cert");
    }
    if (!out_path.empty()) save_automaton(autom, out_path);
    const SpeReport spe = check_spe(autom, delta, tol);
    print_spe_report(spe, out);
    const WrpPhaseReport wrp = check_wrp_phases(autom, delta);
    out << "wrpCompatible=" << (wrp.wrpCompatible ? "yes" : "no") << '\n';
    for (const auto& [dominated, dominating] : wrp.violations) {
      out << "  " << phase_name(dominating) << " strictly dominates " << phase_name(dominated)
          << '\n';
    }
    const auto md = min_delta(autom, min_delta_grid, tol);
    if (md) {
      out << "minDelta=" << fmt12(*md) << '\n';
    } else {
      out << "minDelta=unsupportable\n";
    }
    return 0;
  }
  if (s_run->parsed()) {
    const ThreePhaseAutomaton autom = load_automaton(automaton_path);
    std::vector<ScriptedDeviation> devs;
    if (!deviations_path.empty()) devs = load_deviations(deviations_path);
    const SimTrace trace = run_path(autom, delta, periods, seed, devs);
    save_trace_csv(autom.game, trace, out_path);
    out << "meanUS=" << fmt12(trace.undiscountedMean.vS)
        << " meanUR=" << fmt12(trace.undiscountedMean.vR)
        << " discUS=" << fmt12(trace.discounted.vS) << " discUR=" << fmt12(trace.discounted.vR)
        << " phases=" << trace.phaseCounts[0] << '/' << trace.phaseCounts[1] << '/'
        << trace.phaseCounts[2] << '\n';
    return 0;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const CapabilityError& e) {
    err << "capability error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NoPunishmentError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace talk
