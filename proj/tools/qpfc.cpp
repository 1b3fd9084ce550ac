#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpfc/compiler.hpp"
#include "qpfc/dimer.hpp"
#include "qpfc/pattern.hpp"

using namespace qpfc;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_manifest(const std::string& output, const std::string& command,
                    const std::vector<std::string>& argv_copy,
                    std::uint64_t seed, const std::string& input) {
  std::ofstream os(output + ".manifest");
  os << "COMMAND=" << command << "\n";
  os << "ARGS=";
  for (size_t i = 0; i < argv_copy.size(); ++i)
    os << (i ? " " : "") << argv_copy[i];
  os << "\n";
  os << "SEED=" << seed << "\n";
  os << "VERSION=" << kVersion << "\n";
  os << "INPUT=" << (input.empty() ? "-" : input) << "\n";
  os << "OUTPUT=" << output << "\n";
}

struct CompileArgs {
  std::string subtarget;
  std::string output = "schedule.qps";
  int n = 8;
  int rows = 3, cols = 3;
  int site = 1, bond = 1;
  int row = 1, col = 1;
  int levels = 1, anchor = 1;
  double angle = 0.5;
  double an_tol = 1e-4;
  std::int64_t an_bound = 10000;
  std::string method = "naive8";
  std::string ca_type = "s-even";
  std::string axis = "x";
};

Axis axis_of(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw CLI::ValidationError("axis must be x, y, or z");
}

int run_compile(const CompileArgs& a, const std::vector<std::string>& argv_copy) {
  Schedule sched;
  int steps = 0, depth = 0;
  std::string target_desc;

  if (a.subtarget == "single-x" || a.subtarget == "single-z") {
    const Axis ax = a.subtarget == "single-x" ? Axis::X : Axis::Z;
    CompileResult r = compile_single(Geometry::chain(a.n), a.site, ax, a.angle);
    sched = r.schedule;
    steps = r.step_count;
    depth = r.depth;
    target_desc = "single:" + std::string(ax == Axis::X ? "x" : "z") + ":" +
                  std::to_string(a.site) + ":" + fmt(a.angle);
  } else if (a.subtarget == "bond-zz-naive") {
    CompileResult r = compile_bond_naive(Geometry::chain(a.n), a.bond, a.angle);
    sched = r.schedule;
    steps = r.step_count;
    depth = r.depth;
    target_desc = "bond:" + std::to_string(a.bond) + ":" + fmt(a.angle);
  } else if (a.subtarget == "bond-zz-comb") {
    const Geometry g = Geometry::chain(a.n);
    const int nf = focus_depth_pow3(a.n, a.bond);
    std::vector<AnSolution> sols;
    for (int lvl = 2; lvl <= nf; ++lvl) {
      AnSolution s = solve_an(lvl, a.an_tol, a.an_bound);
      if (!s.found) {
        std::cout << "SOLVER-NOT-FOUND level=" << lvl
                  << " best_residual=" << fmt(s.best_max_residual) << "\n";
        return 3;
      }
      sols.push_back(s);
    }
    CompileResult r = compile_bond_comb(g, a.bond, a.angle, sols);
    sched = r.schedule;
    steps = r.step_count;
    depth = r.depth;
    target_desc = "bond:" + std::to_string(a.bond) + ":" + fmt(a.angle);
  } else if (a.subtarget == "grid-single") {
    CompileResult r = compile_grid_single(Geometry::grid(a.rows, a.cols),
                                          a.row, a.col, axis_of(a.axis),
                                          a.angle);
    sched = r.schedule;
    steps = r.step_count;
    depth = r.depth;
    target_desc = "grid-single:" + a.axis + ":" + std::to_string(a.row) + ":" +
                  std::to_string(a.col) + ":" + fmt(a.angle);
  } else if (a.subtarget == "grid-bond") {
    GridBondMethod m = GridBondMethod::Naive8;
    if (a.method == "twoop") m = GridBondMethod::TwoOp;
    else if (a.method == "twoop-literal-z") m = GridBondMethod::TwoOpLiteralZ;
    else if (a.method != "naive8")
      throw CLI::ValidationError("method must be naive8|twoop|twoop-literal-z");
    CompileResult r = compile_grid_bond(Geometry::grid(a.rows, a.cols), a.row,
                                        a.col, a.angle, m);
    sched = r.schedule;
    steps = r.step_count;
    depth = r.depth;
    target_desc = "grid-bond:" + std::to_string(a.row) + ":" +
                  std::to_string(a.col) + ":" + fmt(a.angle);
  } else if (a.subtarget == "readout") {
    CompileResult r = compile_readout(a.levels, a.n, a.anchor);
    sched = r.schedule;
    steps = r.step_count;
    depth = r.depth;
    target_desc = "readout:" + std::to_string(a.levels) + ":" +
                  std::to_string(a.anchor);
  } else if (a.subtarget == "interval") {
    const Geometry g = Geometry::chain(a.n);
    AnglePattern pat{4, {0.0, 0.0, kPi / 2.0, kPi / 2.0}, Axis::X};
    SynthesisResult syn = synthesize(pat, 2);
    if (!syn.feasible) throw std::logic_error("interval mask infeasible");
    sched = masked_ising(syn.pulses, BondSet::all_chain(), a.angle, g);
    steps = sched.step_count();
    depth = 1;
    target_desc = "interval:" + fmt(a.angle);
  } else if (a.subtarget == "ca-pattern") {
    const Geometry g = Geometry::chain(a.n);
    if (a.ca_type == "s-even" || a.ca_type == "s-odd") {
      const bool even = a.ca_type == "s-even";
      AnglePattern pat{2,
                       even ? std::vector<double>{a.angle, 0.0}
                            : std::vector<double>{0.0, a.angle},
                       axis_of(a.axis)};
      SynthesisResult syn = synthesize(pat, 2);
      if (!syn.feasible) throw std::logic_error("site pattern infeasible");
      sched.geometry = g;
      sched.local_dim = 2;
      sched.pulses = syn.pulses;
      target_desc = "site-comb:" + a.axis + ":" + (even ? "2" : "1") + ":2:" +
                    fmt(a.angle);
    } else if (a.ca_type == "int-right" || a.ca_type == "int-left") {
      const bool right = a.ca_type == "int-right";
      AnglePattern pat{4,
                       right
                           ? std::vector<double>{0.0, 0.0, kPi / 2, kPi / 2}
                           : std::vector<double>{kPi / 2, 0.0, 0.0, kPi / 2},
                       Axis::X};
      SynthesisResult syn = synthesize(pat, 2);
      if (!syn.feasible) throw std::logic_error("bond pattern infeasible");
      sched = masked_ising(syn.pulses, BondSet::all_chain(), a.angle, g);
      target_desc =
          "comb:" + std::string(right ? "2" : "1") + ":2:" + fmt(a.angle);
    } else {
      throw CLI::ValidationError(
          "ca-type must be s-even|s-odd|int-right|int-left");
    }
    steps = sched.step_count();
    depth = 1;
  } else {
    throw CLI::ValidationError("unknown compile subtarget: " + a.subtarget);
  }

  {
    std::ofstream os(a.output);
    if (!os) throw std::runtime_error("cannot write " + a.output);
    write_schedule(os, sched);
  }
  {
    std::ofstream os(a.output + ".result");
    os << "STEPS=" << steps << " DEPTH=" << depth << " TARGET=" << target_desc
       << "\n";
  }
  write_manifest(a.output, "compile", argv_copy, 0, "");
  std::cout << "STEPS=" << steps << " DEPTH=" << depth << "\n";
  return 0;
}

Schedule load_schedule(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return parse_schedule(is);
}

int run_verify(const std::string& sched_path, const std::string& target_spec,
               std::uint64_t seed, double threshold, const std::string& output,
               const std::vector<std::string>& argv_copy) {
  const Schedule sched = load_schedule(sched_path);
  TargetOp target;
  try {
    target = parse_target(target_spec, sched.geometry, sched.local_dim);
  } catch (const std::out_of_range&) {
    std::cerr << "geometry mismatch: target site outside the schedule's "
                 "lattice\n";
    return 4;
  }
  if (!(target.generator.geometry == sched.geometry) ||
      target.generator.local_dim != sched.local_dim) {
    std::cerr << "geometry mismatch between schedule and target\n";
    return 4;
  }

  FidelityReport rep;
  if (hilbert_dim(sched.geometry, sched.local_dim) <= matrix_cap())
    rep = compare_fidelity(sched, target.op());
  else
    rep = compare_by_sampling(sched, target.applier(), seed);

  std::ostringstream line;
  line << "F=" << fmt(rep.f) << " MODE="
       << (rep.mode == FidelityReport::Mode::FullUnitary ? "fullUnitary"
                                                         : "sampling")
       << " SEED=" << seed << "\n";
  std::cout << line.str();
  if (!output.empty()) {
    std::ofstream os(output);
    os << line.str();
    write_manifest(output, "verify", argv_copy, seed, sched_path);
  }
  return rep.f >= threshold ? 0 : 1;
}

int run_solve_an(int level, double tol, std::int64_t bound,
                 const std::string& output,
                 const std::vector<std::string>& argv_copy) {
  const AnSolution s = solve_an(level, tol, bound);
  std::ostringstream line;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "a_n=%.15g p=%lld l=%lld mEq4=%lld r2=%.15g r3=%.15g\n", s.an,
                static_cast<long long>(s.p), static_cast<long long>(s.l),
                static_cast<long long>(s.m_eq4), s.r2, s.r3);
  line << buf;
  if (!s.found)
    line << "NOT-FOUND best_residual=" << fmt(s.best_max_residual) << "\n";
  std::cout << line.str();
  if (!output.empty()) {
    std::ofstream os(output);
    os << line.str();
    write_manifest(output, "solve-an", argv_copy, 0, "");
  }
  return s.found ? 0 : 3;
}

int run_trotter(int rows, int cols, double lambda, double j, double t,
                const std::string& k_csv, const std::string& order_name,
                const std::string& output,
                const std::vector<std::string>& argv_copy) {
  DimerSystem sys;
  sys.grid = Geometry::grid(rows, cols);
  sys.lambda = lambda;
  sys.j = j;
  sys.t = t;
  std::vector<int> ks;
  std::stringstream ss(k_csv);
  std::string item;
  while (std::getline(ss, item, ',')) ks.push_back(std::stoi(item));
  if (ks.empty()) throw CLI::ValidationError("empty K list");
  const TrotterOrder order = order_name == "symmetric" ? TrotterOrder::Symmetric
                                                       : TrotterOrder::First;
  const ErrorScan scan = trotter_error_scan(sys, ks, order);
  std::ostringstream table;
  for (const ErrorScanRow& r : scan.rows)
    table << r.k << "\t" << fmt(r.error) << "\n";
  table << "SLOPE=" << fmt(scan.slope) << "\n";
  std::cout << table.str();
  if (!output.empty()) {
    std::ofstream os(output);
    os << table.str();
    write_manifest(output, "trotter-report", argv_copy, 0, "");
  }
  return 0;
}

int run_simulate(const std::string& sched_path, const std::string& init,
                 const std::string& output,
                 const std::vector<std::string>& argv_copy) {
  const Schedule sched = load_schedule(sched_path);
  StateVector psi;
  if (init == "all-zero") {
    psi = StateVector::all_zero(sched.geometry, sched.local_dim);
  } else if (init == "all-one") {
    psi = StateVector::all_one(sched.geometry, sched.local_dim);
  } else {
    std::ifstream is(init);
    if (!is) throw std::runtime_error("cannot read initial state " + init);
    psi = parse_state_dump(is, sched.geometry, sched.local_dim);
  }
  apply_schedule(psi, sched);
  std::ofstream os(output);
  if (!os) throw std::runtime_error("cannot write " + output);
  write_state_dump(os, psi);
  write_manifest(output, "simulate", argv_copy, 0, sched_path);
  std::cout << "WROTE=" << output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> argv_copy(argv, argv + argc);
  CLI::App app{"Global-pulse schedule compiler and simulator"};
  app.require_subcommand(1);

  CompileArgs ca;
  CLI::App* compile = app.add_subcommand("compile", "emit a pulse schedule");
  compile->add_option("subtarget", ca.subtarget,
                      "single-x|single-z|bond-zz-naive|bond-zz-comb|"
                      "grid-single|grid-bond|readout|interval|ca-pattern")
      ->required();
  compile->add_option("--n", ca.n, "chain length");
  compile->add_option("--rows", ca.rows);
  compile->add_option("--cols", ca.cols);
  compile->add_option("--site", ca.site);
  compile->add_option("--bond", ca.bond);
  compile->add_option("--row", ca.row);
  compile->add_option("--col", ca.col);
  compile->add_option("--levels", ca.levels);
  compile->add_option("--anchor", ca.anchor);
  compile->add_option("--angle", ca.angle);
  compile->add_option("--an-tol", ca.an_tol);
  compile->add_option("--an-bound", ca.an_bound);
  compile->add_option("--method", ca.method);
  compile->add_option("--ca-type", ca.ca_type);
  compile->add_option("--axis", ca.axis);
  compile->add_option("-o,--output", ca.output);

  std::string v_sched, v_target, v_output;
  std::uint64_t v_seed = 12345;
  double v_threshold = 1.0 - 1e-8;
  CLI::App* verify = app.add_subcommand("verify", "compare schedule vs target");
  verify->add_option("schedule", v_sched)->required();
  verify->add_option("--target", v_target)->required();
  verify->add_option("--seed", v_seed);
  verify->add_option("--threshold", v_threshold);
  verify->add_option("-o,--output", v_output);

  int s_level = 2;
  double s_tol = 1e-4;
  std::int64_t s_bound = 10000;
  std::string s_output;
  CLI::App* solve = app.add_subcommand("solve-an", "solve a comb amplitude");
  solve->add_option("--level", s_level);
  solve->add_option("--tol", s_tol);
  solve->add_option("--bound", s_bound);
  solve->add_option("-o,--output", s_output);

  int t_rows = 2, t_cols = 2;
  double t_lambda = 0.5, t_j = 1.0, t_t = 1.0;
  std::string t_k = "4,8,16,32", t_order = "first", t_output;
  CLI::App* trotter = app.add_subcommand("trotter-report",
                                         "Trotter error scan");
  trotter->add_option("--rows", t_rows);
  trotter->add_option("--cols", t_cols);
  trotter->add_option("--lambda", t_lambda);
  trotter->add_option("--j", t_j);
  trotter->add_option("--t", t_t);
  trotter->add_option("--K", t_k);
  trotter->add_option("--order", t_order);
  trotter->add_option("-o,--output", t_output);

  std::string sim_sched, sim_init = "all-zero", sim_output = "dump.txt";
  CLI::App* simulate = app.add_subcommand("simulate", "apply a schedule");
  simulate->add_option("schedule", sim_sched)->required();
  simulate->add_option("--init", sim_init, "all-zero|all-one|<dump file>");
  simulate->add_option("-o,--output", sim_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (compile->parsed()) return run_compile(ca, argv_copy);
    if (verify->parsed())
      return run_verify(v_sched, v_target, v_seed, v_threshold, v_output,
                        argv_copy);
    if (solve->parsed())
      return run_solve_an(s_level, s_tol, s_bound, s_output, argv_copy);
    if (trotter->parsed())
      return run_trotter(t_rows, t_cols, t_lambda, t_j, t_t, t_k, t_order,
                         t_output, argv_copy);
    if (simulate->parsed())
      return run_simulate(sim_sched, sim_init, sim_output, argv_copy);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
