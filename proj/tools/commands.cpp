#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "acceptance.hpp"
#include "qwell/bessel.hpp"
#include "qwell/errors.hpp"
#include "qwell/mapped_frame.hpp"
#include "qwell/regularized.hpp"
#include "qwell/sudden.hpp"
#include "qwell/tdse.hpp"
#include "run_config.hpp"

namespace qwell::cli {
namespace {

Units make_units(const UnitParams& u) {
  Units units{u.hbar, u.mass};
  units.validate();
  return units;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) items.push_back(item.substr(a, b - a + 1));
  }
  if (items.empty()) throw ConfigError(fmt::format("empty list '{}'", text));
  return items;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw ConfigError(fmt::format("'{}' is not a number", s));
  return v;
}

std::vector<double> double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(item));
  return out;
}

std::vector<int> int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) {
    const double v = parse_double(item);
    if (v != std::floor(v)) throw ConfigError(fmt::format("'{}' is not an integer", item));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

// Unit of time for the T options.
double level_one_time(double width, const Units& units) {
  return units.hbar / eigen_energy(1, WellGeometry(0.0, width), units);
}

MotionLaw make_law(const EvolveParams& p, double time_unit) {
  if (p.law == "linear") return MotionLaw::linear(p.alpha_final, p.T * time_unit);
  require(p.law == "table", fmt::format("unknown law '{}' (linear | table)", p.law));
  std::vector<MotionLaw::Sample> samples;
  for (const auto& item : split_list(p.table)) {
    const auto colon = item.find(':');
    require(colon != std::string::npos, fmt::format("table entry '{}' is not t:alpha", item));
    samples.push_back({parse_double(item.substr(0, colon)) * time_unit,
                       parse_double(item.substr(colon + 1))});
  }
  if (samples.front().t > 0.0) samples.insert(samples.begin(), {0.0, 1.0});
  return MotionLaw::table(std::move(samples));
}

// ---------------------------------------------------------------------------
// Rows shared between single commands in summary mode and sweep.

const std::vector<std::string> kSuddenSummaryColumns = {
    "n", "alpha", "shift", "kmax", "row_total", "closed_form", "deficit"};

std::vector<Cell> sudden_summary_row(int n, double alpha, double shift, double width, int kmax) {
  const WellGeometry initial(0.0, width);
  const WellGeometry final = WellGeometry::scaled(alpha, shift, width);
  const TransitionSummary s = summarize_transitions(n, initial, final, kmax);
  return {long{n}, alpha, shift, long{kmax}, s.partial_sum, s.total_probability, s.deficit};
}

const std::vector<std::string> kEvolveSummaryColumns = {
    "n",         "alpha_final", "T",         "frame", "W_nn",
    "W_sudden",  "norm_drift",  "remainder", "steps"};

struct EvolveRun {
  std::string frame;
  EvolutionReport report;
};

std::vector<EvolveRun> run_evolve(const EvolveParams& p, const Units& units) {
  require(p.frames == "mapped" || p.frames == "lab" || p.frames == "both",
          fmt::format("unknown frames '{}' (mapped | lab | both)", p.frames));
  require(p.initial == "sine" || p.initial == "bessel",
          fmt::format("unknown initial basis '{}' (sine | bessel)", p.initial));
  require(p.n >= 1, "--n must be >= 1");
  require(p.kmax >= p.n, "--kmax must be >= n");
  require(p.grid >= kMinGridIntervals && p.lab_grid >= kMinGridIntervals,
          fmt::format("grids need >= {} intervals", kMinGridIntervals));
  const double unit = level_one_time(p.width, units);
  const MotionLaw law = make_law(p, unit);

  std::vector<EvolveRun> runs;
  if (p.frames != "lab") {
    MappedOptions o;
    o.grid_intervals = p.grid;
    o.d_tau = p.dt;
    o.steps = p.steps;
    o.k_max = p.kmax;
    o.width = p.width;
    o.initial = p.initial == "sine" ? InitialBasis::Sine : InitialBasis::Bessel;
    o.series_points = p.series_points;
    o.units = units;
    runs.push_back({"mapped", evolve_mapped(p.n, law, o)});
  }
  if (p.frames != "mapped") {
    LabOptions o;
    o.height = p.V;
    o.grid_intervals = p.lab_grid;
    o.dt = p.dt;
    o.steps = p.steps;
    o.k_max = p.kmax;
    o.width = p.width;
    o.series_points = p.series_points;
    o.units = units;
    runs.push_back({"lab", evolve_lab(p.n, law, o)});
  }
  return runs;
}

double sudden_reference(int n, int k, double alpha, double width) {
  return transition_probability(n, k, WellGeometry(0.0, width), WellGeometry(0.0, alpha * width));
}

double at_or_nan(const std::vector<double>& v, int k) {
  return k >= 1 && k <= static_cast<int>(v.size()) ? v[k - 1] : std::nan("");
}

std::vector<std::vector<Cell>> evolve_summary_rows(const EvolveParams& p, const Units& units) {
  std::vector<std::vector<Cell>> rows;
  for (const auto& run : run_evolve(p, units)) {
    const auto& r = run.report;
    rows.push_back({long{p.n}, r.alpha_final, p.T, run.frame, at_or_nan(r.w_table, p.n),
                    sudden_reference(p.n, p.n, r.alpha_final, p.width), r.norm_drift, r.remainder,
                    r.step_count});
  }
  return rows;
}

const std::vector<std::string> kRegularizedColumns = {
    "n",           "alpha",     "V",       "depth_ratio",   "levels_initial", "levels_final",
    "xi_n",        "bound_sum", "leakage", "leakage_limit", "deviation"};

std::vector<Cell> regularized_row(int n, double alpha, double v, double width, const Units& units) {
  require(alpha > 0.0, "--alpha must be positive");
  const RegularizedWell initial(v, width);
  const RegularizedWell final(v, alpha * width);
  const auto levels_i = bound_levels(initial, units);
  const auto levels_f = bound_levels(final, units);
  require(n >= 1 && n <= static_cast<int>(levels_i.size()),
          fmt::format("level {} is not bound at V = {}", n, v));
  const double sum = bound_overlap_sum(n, initial, final, units);
  const double limit = alpha < 1.0 ? 1.0 - total_probability_closed_form(n, alpha) : 0.0;
  const double leak = 1.0 - sum;
  return {long{n},
          alpha,
          v,
          final.depth_ratio(units),
          static_cast<long>(levels_i.size()),
          static_cast<long>(levels_f.size()),
          levels_i[n - 1].xi,
          sum,
          leak,
          limit,
          std::abs(leak - limit)};
}

}  // namespace

// ---------------------------------------------------------------------------

Table cmd_sudden(const SuddenParams& p, const UnitParams& u) {
  make_units(u);
  const std::vector<int> levels = int_list(p.n);
  require(p.kmax >= 1, "--kmax must be >= 1");
  require(p.alpha > 0.0, "--alpha must be positive");
  for (int n : levels) require(n >= 1, "--n entries must be >= 1");
  const WellGeometry initial(0.0, p.width);
  const WellGeometry final = WellGeometry::scaled(p.alpha, p.shift, p.width);

  Table t;
  if (p.summary) {
    t.columns = kSuddenSummaryColumns;
    for (int n : levels) t.add(sudden_summary_row(n, p.alpha, p.shift, p.width, p.kmax));
    return t;
  }
  t.columns = {"n", "k", "M", "W", "row_total", "closed_form", "deficit"};
  const int n_max = *std::max_element(levels.begin(), levels.end());
  const OverlapMatrix matrix(n_max, p.kmax, initial, final);
  for (int n : levels) {
    const TransitionSummary s = summarize_transitions(n, initial, final, p.kmax);
    for (int k = 1; k <= p.kmax; ++k) {
      t.add({long{n}, long{k}, matrix.amplitude(n, k), matrix.probability(n, k), s.partial_sum,
             s.total_probability, s.deficit});
    }
  }
  return t;
}

Table cmd_bessel(const BesselParams& p, bool& all_bounds_hold) {
  require(p.nmax >= 1, "--nmax must be >= 1");
  Table t;
  t.columns = {"n", "z", "u", "u_minus_1", "u_minus_1_2dp", "bound", "within_bound"};
  all_bounds_hold = true;
  for (int n = 1; n <= p.nmax; ++n) {
    const BesselZero z = bessel_j1_zero(n);
    const double excess = z.u - 1.0;
    const double bound = 1.0 / (4.0 * n);
    const bool ok = excess < bound;
    all_bounds_hold = all_bounds_hold && ok;
    t.add({long{n}, z.z, z.u, excess, std::round(excess * 100.0) / 100.0, bound, long{ok ? 1 : 0}});
  }
  return t;
}

Table cmd_evolve(const EvolveParams& p, const UnitParams& u, Table* series) {
  const Units units = make_units(u);
  Table t;
  if (p.summary) {
    t.columns = kEvolveSummaryColumns;
    for (auto& row : evolve_summary_rows(p, units)) t.add(std::move(row));
    return t;
  }
  const auto runs = run_evolve(p, units);
  t.columns = {"frame", "k", "W", "W_sudden", "cross_rel_diff", "norm_drift", "remainder", "steps"};
  for (const auto& run : runs) {
    const auto& r = run.report;
    for (int k = 1; k <= p.kmax; ++k) {
      const double w = at_or_nan(r.w_table, k);
      Cell cross;
      if (runs.size() == 2) {
        const double a = at_or_nan(runs[0].report.w_table, k);
        const double b = at_or_nan(runs[1].report.w_table, k);
        cross = std::abs(b / a - 1.0);
      }
      t.add({run.frame, long{k}, w, sudden_reference(p.n, k, r.alpha_final, p.width), cross,
             r.norm_drift, r.remainder, r.step_count});
    }
  }
  if (series) {
    series->columns = {"frame", "t", "alpha", "tau", "W_nn"};
    for (const auto& run : runs) {
      for (const auto& s : run.report.series) series->add({run.frame, s.t, s.alpha, s.tau, s.w_nn});
    }
  }
  return t;
}

Table cmd_regularized(const RegularizedParams& p, const UnitParams& u) {
  const Units units = make_units(u);
  const std::vector<double> heights = double_list(p.V);
  Table t;
  if (p.levels) {
    t.columns = {"V", "n", "energy", "xi", "parity", "wavenumber", "decay"};
    for (double v : heights) {
      for (const auto& l : bound_levels(RegularizedWell(v, p.width), units)) {
        t.add({v, long{l.n}, l.energy, l.xi, std::string(l.parity == Parity::Even ? "even" : "odd"),
               l.wavenumber, l.decay});
      }
    }
    return t;
  }
  t.columns = kRegularizedColumns;
  for (double v : heights) t.add(regularized_row(p.n, p.alpha, v, p.width, units));
  return t;
}

Table cmd_perturb(const PerturbParams& p, const UnitParams& u) {
  const Units units = make_units(u);
  require(p.n >= 1 && p.m >= 1 && p.n != p.m, "--n and --m must be distinct levels >= 1");
  require(p.alpha_final > 0.0 && p.alpha_final != 1.0, "--alpha-final must be positive and != 1");
  const std::vector<double> durations = double_list(p.T);
  const double unit = level_one_time(p.width, units);
  Table t;
  t.columns = {"T", "alpha_prime", "delta", "P_first_order", "P_exact", "rel_error"};
  for (double T : durations) {
    const MotionLaw law = MotionLaw::linear(p.alpha_final, T * unit);
    const double delta = expansion_parameter(p.n, p.m, 1.0, law.slope(), p.width, units);
    const double first = std::norm(first_order_amplitude(p.n, p.m, law, units, p.width));
    MappedOptions o;
    o.grid_intervals = p.grid;
    o.steps = p.steps;
    o.k_max = std::max({p.kmax, p.n, p.m});
    o.width = p.width;
    o.initial = InitialBasis::Bessel;
    o.series_points = 1;
    o.units = units;
    const double exact = bessel_projection(evolve_mapped(p.n, law, o), p.m, p.width);
    t.add({T, law.slope(), delta, first, exact, std::abs(first - exact) / exact});
  }
  return t;
}

Table cmd_sweep(const SweepParams& p, const UnitParams& u) {
  const Units units = make_units(u);
  require(p.command == "sudden" || p.command == "evolve" || p.command == "regularized",
          fmt::format("sweep --base must be sudden | evolve | regularized, got '{}'",
                      p.command));
  std::vector<double> alphas = double_list(p.alpha);
  std::vector<double> times = double_list(p.T);
  std::vector<double> heights = double_list(p.V);

  struct Point {
    double alpha, T, V;
  };
  std::vector<Point> points;
  if (p.random > 0) {
    require(alphas.size() == 2 && times.size() == 2 && heights.size() == 2,
            "--random needs two-value ranges lo,hi for --alpha, --T and --V");
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto log_pick = [&](double lo, double hi, double r) {
      return std::exp(std::log(lo) + r * (std::log(hi) - std::log(lo)));
    };
    for (int i = 0; i < p.random; ++i) {
      const double ra = unit(rng);
      const double rt = unit(rng);
      const double rv = unit(rng);
      points.push_back({alphas[0] + ra * (alphas[1] - alphas[0]), log_pick(times[0], times[1], rt),
                        log_pick(heights[0], heights[1], rv)});
    }
  } else {
    // Only the axes the base command uses are expanded.
    if (p.command != "evolve") times = {times.front()};
    if (p.command != "regularized") heights = {heights.front()};
    for (double a : alphas) {
      for (double T : times) {
        for (double v : heights) points.push_back({a, T, v});
      }
    }
  }

  Table t;
  using Rows = std::vector<std::vector<Cell>>;
  std::vector<std::function<Rows()>> jobs;
  if (p.command == "sudden") {
    t.columns = kSuddenSummaryColumns;
    const int kmax = p.kmax > 0 ? p.kmax : SuddenParams{}.kmax;
    for (const Point& pt : points) {
      require(pt.alpha > 0.0, "--alpha values must be positive");
      jobs.push_back([=] { return Rows{sudden_summary_row(p.n, pt.alpha, p.shift, p.width, kmax)}; });
    }
  } else if (p.command == "evolve") {
    t.columns = kEvolveSummaryColumns;
    for (const Point& pt : points) {
      EvolveParams e;
      e.n = p.n;
      e.alpha_final = pt.alpha;
      e.T = pt.T;
      e.V = pt.V;
      e.grid = p.grid;
      e.frames = p.frames;
      e.width = p.width;
      if (p.kmax > 0) e.kmax = p.kmax;
      e.series_points = 1;
      (void)MotionLaw::linear(e.alpha_final, e.T);  // validates before any run starts
      jobs.push_back([e, units] { return evolve_summary_rows(e, units); });
    }
  } else {
    t.columns = kRegularizedColumns;
    for (const Point& pt : points) {
      (void)RegularizedWell(pt.V, p.width);
      jobs.push_back([=] { return Rows{regularized_row(p.n, pt.alpha, pt.V, p.width, units)}; });
    }
  }
  // Batches of at most one run per hardware thread; rows stay in index order.
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t first = 0; first < jobs.size(); first += width) {
    std::vector<std::future<Rows>> running;
    for (std::size_t i = first; i < std::min(first + width, jobs.size()); ++i) {
      running.push_back(std::async(std::launch::async, jobs[i]));
    }
    for (auto& job : running) {
      for (auto& row : job.get()) t.add(std::move(row));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

// Registers an option and remembers how to print its resolved value.
class Fields {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& ref, const std::string& help) {
    fields_.emplace_back(name, [&ref] { return text(ref); });
    return app->add_option("--" + name, ref, help);
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& ref, const std::string& help) {
    fields_.emplace_back(name, [&ref] { return std::string(ref ? "true" : "false"); });
    return app->add_flag("--" + name, ref, help);
  }

  Metadata resolve(const std::string& command) const {
    Metadata meta;
    meta.emplace_back("", "qwell: natural units, hbar and mass 1 unless set; durations T in units of hbar/E1");
    meta.emplace_back("command", command);
    for (const auto& [name, get] : fields_) meta.emplace_back(name, get());
    return meta;
  }

 private:
  static std::string text(double v) { return format_number(v); }
  static std::string text(int v) { return std::to_string(v); }
  static std::string text(long v) { return std::to_string(v); }
  static std::string text(unsigned long v) { return std::to_string(v); }
  static std::string text(const std::string& v) { return v; }

  std::vector<std::pair<std::string, std::function<std::string()>>> fields_;
};

struct Common {
  std::string format = "csv";
  std::string output = "-";
  UnitParams units;
};

void add_common(CLI::App* app, Fields& f, Common& c) {
  f.add(app, "format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  f.add(app, "output", c.output, "output path, - for stdout");
  f.add(app, "hbar", c.units.hbar, "Planck constant (natural units: 1)");
  f.add(app, "mass", c.units.mass, "particle mass (natural units: 1)");
}

void emit(const Common& c, const Metadata& meta, const Table& table, std::ostream& out) {
  const Format format = c.format == "json" ? Format::Json : Format::Csv;
  if (c.output == "-") {
    write_table(out, format, meta, table);
    return;
  }
  std::ofstream file(c.output);
  if (!file) throw ConfigError(fmt::format("cannot write '{}'", c.output));
  write_table(file, format, meta, table);
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = splice_config(raw_args);
  } catch (const std::exception& e) {
    err << "error: config: " << one_line(e.what()) << '\n';
    return 2;
  }

  CLI::App app{"Particle in a box with moving walls: transition probabilities and dynamics",
               "qwell"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags override it");

  Fields f_sudden, f_bessel, f_evolve, f_reg, f_perturb, f_sweep;
  Common c_sudden, c_bessel, c_evolve, c_reg, c_perturb, c_sweep;

  SuddenParams sudden;
  auto* s = app.add_subcommand("sudden", "sudden change [0,b] -> [a, a+b*alpha]: M, W, sums");
  f_sudden.add(s, "n", sudden.n, "initial level(s), comma list");
  f_sudden.add(s, "alpha", sudden.alpha, "width ratio of the final well");
  f_sudden.add(s, "shift", sudden.shift, "left edge a of the final well");
  f_sudden.add(s, "width", sudden.width, "initial width b");
  f_sudden.add(s, "kmax", sudden.kmax, "number of final levels");
  f_sudden.flag(s, "summary", sudden.summary, "one row per n (sweep format)");
  add_common(s, f_sudden, c_sudden);

  BesselParams bessel;
  auto* b = app.add_subcommand("bessel", "zeros of J1 and u_n - 1 against 1/(4n)");
  f_bessel.add(b, "nmax", bessel.nmax, "largest n");
  add_common(b, f_bessel, c_bessel);

  EvolveParams evolve;
  auto* e = app.add_subcommand("evolve", "finite-time wall motion, mapped and/or lab frame");
  f_evolve.add(e, "n", evolve.n, "initial level");
  f_evolve.add(e, "law", evolve.law, "linear | table")->check(CLI::IsMember({"linear", "table"}));
  f_evolve.add(e, "alpha-final", evolve.alpha_final, "final width ratio (linear law)");
  f_evolve.add(e, "T", evolve.T, "duration in units of hbar/E1");
  f_evolve.add(e, "table", evolve.table, "t:alpha,... for --law table (t in hbar/E1)");
  f_evolve.add(e, "frames", evolve.frames, "mapped | lab | both");
  f_evolve.add(e, "grid", evolve.grid, "mapped-frame grid intervals");
  f_evolve.add(e, "lab-grid", evolve.lab_grid, "lab-frame grid intervals");
  f_evolve.add(e, "V", evolve.V, "wall height of the lab-frame well");
  f_evolve.add(e, "dt", evolve.dt, "time step (0: automatic)");
  f_evolve.add(e, "steps", evolve.steps, "number of steps (overrides dt)");
  f_evolve.add(e, "kmax", evolve.kmax, "levels in the table; sets the resolved energy");
  f_evolve.add(e, "width", evolve.width, "initial width b");
  f_evolve.add(e, "initial", evolve.initial, "sine | bessel");
  f_evolve.add(e, "series-points", evolve.series_points, "samples in the time series");
  f_evolve.add(e, "series-output", evolve.series_output, "file for the (t, alpha, tau, W_nn) series");
  f_evolve.flag(e, "summary", evolve.summary, "one row per frame (sweep format)");
  add_common(e, f_evolve, c_evolve);

  RegularizedParams reg;
  auto* r = app.add_subcommand("regularized", "finite walls of height V: bound levels and leakage");
  f_reg.add(r, "n", reg.n, "initial level");
  f_reg.add(r, "alpha", reg.alpha, "width ratio of the final well");
  f_reg.add(r, "V", reg.V, "wall height(s), comma list");
  f_reg.add(r, "width", reg.width, "initial width b");
  f_reg.flag(r, "levels", reg.levels, "list the bound levels of the initial well instead");
  add_common(r, f_reg, c_reg);

  PerturbParams pert;
  auto* pc = app.add_subcommand("perturb", "first-order mapped-frame amplitude vs exact evolution");
  f_perturb.add(pc, "n", pert.n, "initial level");
  f_perturb.add(pc, "m", pert.m, "final level");
  f_perturb.add(pc, "alpha-final", pert.alpha_final, "final width ratio");
  f_perturb.add(pc, "T", pert.T, "duration(s) in units of hbar/E1, comma list");
  f_perturb.add(pc, "grid", pert.grid, "grid intervals of the exact run");
  f_perturb.add(pc, "steps", pert.steps, "steps of the exact run (0: automatic)");
  f_perturb.add(pc, "kmax", pert.kmax, "sets the resolved energy of the exact run");
  f_perturb.add(pc, "width", pert.width, "initial width b");
  add_common(pc, f_perturb, c_perturb);

  SweepParams sweep;
  auto* w = app.add_subcommand("sweep", "cartesian or random sweep over alpha, T, V");
  f_sweep.add(w, "base", sweep.command, "sudden | evolve | regularized");
  f_sweep.add(w, "alpha", sweep.alpha, "alpha values (lo,hi with --random)");
  f_sweep.add(w, "T", sweep.T, "durations in hbar/E1 (lo,hi with --random)");
  f_sweep.add(w, "V", sweep.V, "wall heights (lo,hi with --random)");
  f_sweep.add(w, "random", sweep.random, "draw this many points instead of the product");
  f_sweep.add(w, "seed", sweep.seed, "random seed");
  f_sweep.add(w, "n", sweep.n, "initial level");
  f_sweep.add(w, "kmax", sweep.kmax, "0: the base command's default");
  f_sweep.add(w, "grid", sweep.grid, "grid intervals (evolve)");
  f_sweep.add(w, "frames", sweep.frames, "mapped | lab | both (evolve)");
  f_sweep.add(w, "width", sweep.width, "initial width b");
  f_sweep.add(w, "shift", sweep.shift, "final left edge (sudden)");
  add_common(w, f_sweep, c_sweep);

  std::string only;
  auto* st = app.add_subcommand("selftest", "run the acceptance criteria");
  st->add_option("--only", only, "comma list of criterion numbers");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) return app.exit(ex, out, err);
    err << "error: usage: " << one_line(ex.what()) << '\n';
    return 2;
  }

  try {
    if (*s) {
      emit(c_sudden, f_sudden.resolve("sudden"), cmd_sudden(sudden, c_sudden.units), out);
    } else if (*b) {
      bool ok = true;
      const Table t = cmd_bessel(bessel, ok);
      emit(c_bessel, f_bessel.resolve("bessel"), t, out);
      if (!ok) {
        err << "error: tolerance: u_n - 1 < 1/(4n) violated\n";
        return 1;
      }
    } else if (*e) {
      Table series;
      const Table t = cmd_evolve(evolve, c_evolve.units, &series);
      const Metadata meta = f_evolve.resolve("evolve");
      emit(c_evolve, meta, t, out);
      if (!evolve.series_output.empty() && !evolve.summary) {
        Common c = c_evolve;
        c.output = evolve.series_output;
        emit(c, meta, series, out);
      }
    } else if (*r) {
      emit(c_reg, f_reg.resolve("regularized"), cmd_regularized(reg, c_reg.units), out);
    } else if (*pc) {
      emit(c_perturb, f_perturb.resolve("perturb"), cmd_perturb(pert, c_perturb.units), out);
    } else if (*w) {
      emit(c_sweep, f_sweep.resolve("sweep"), cmd_sweep(sweep, c_sweep.units), out);
    } else if (*st) {
      std::vector<int> ids = acceptance::criterion_ids();
      if (!only.empty()) ids = int_list(only);
      int failed = 0;
      for (int id : ids) {
        const auto result = acceptance::run(id);
        out << acceptance::format(result) << '\n' << std::flush;
        if (!result.pass) ++failed;
      }
      out << (ids.size() - failed) << " of " << ids.size() << " criteria passed\n";
      return failed == 0 ? 0 : 1;
    }
  } catch (const ConfigError& ex) {
    err << "error: config: " << one_line(ex.what()) << '\n';
    return 2;
  } catch (const DomainError& ex) {
    err << "error: domain: " << one_line(ex.what()) << '\n';
    return 3;
  } catch (const NumericError& ex) {
    err << "error: numeric: " << one_line(ex.what()) << '\n';
    return 4;
  } catch (const std::exception& ex) {
    err << "error: internal: " << one_line(ex.what()) << '\n';
    return 4;
  }
  return 0;
}

}  // namespace qwell::cli
