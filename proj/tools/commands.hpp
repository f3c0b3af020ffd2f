#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "table.hpp"

namespace qwell::cli {

struct SuddenParams {
  std::string n = "1";  // comma list
  double alpha = 0.5;
  double shift = 0.0;
  double width = 1.0;
  int kmax = 64;
  bool summary = false;
};

struct BesselParams {
  int nmax = 10;
};

struct EvolveParams {
  int n = 1;
  std::string law = "linear";
  double alpha_final = 0.5;
  double T = 1.0;  // units of hbar / E1
  std::string table;  // "t:alpha,..." for law=table, t in hbar / E1
  std::string frames = "mapped";
  int grid = 2048;
  int lab_grid = 4096;
  double V = 1e5;
  double dt = 0.0;
  long steps = 0;
  int kmax = 8;
  double width = 1.0;
  std::string initial = "sine";
  int series_points = 200;
  std::string series_output;
  bool summary = false;
};

struct RegularizedParams {
  int n = 1;
  double alpha = 0.5;
  std::string V = "1e6";  // comma list
  double width = 1.0;
  bool levels = false;
};

struct PerturbParams {
  int n = 1;
  int m = 2;
  double alpha_final = 1.1;
  std::string T = "10";  // comma list, units of hbar / E1
  int grid = 2048;
  long steps = 0;
  int kmax = 8;
  double width = 1.0;
};

struct SweepParams {
  std::string command = "sudden";
  std::string alpha = "0.5";
  std::string T = "1";
  std::string V = "1e5";
  int random = 0;
  unsigned long seed = 1;
  int n = 1;
  int kmax = 0;  // 0: the base command's default
  int grid = 2048;
  std::string frames = "mapped";
  double width = 1.0;
  double shift = 0.0;
};

struct UnitParams {
  double hbar = 1.0;
  double mass = 1.0;
};

// Each command validates its parameters, then computes its table.
Table cmd_sudden(const SuddenParams& p, const UnitParams& u);
Table cmd_bessel(const BesselParams& p, bool& all_bounds_hold);
Table cmd_evolve(const EvolveParams& p, const UnitParams& u, Table* series);
Table cmd_regularized(const RegularizedParams& p, const UnitParams& u);
Table cmd_perturb(const PerturbParams& p, const UnitParams& u);
Table cmd_sweep(const SweepParams& p, const UnitParams& u);

/// Full command-line entry point. Returns the process exit status:
/// 0 success, 1 a tolerance or self-test failed, 2 bad configuration,
/// 3 domain error, 4 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwell::cli
