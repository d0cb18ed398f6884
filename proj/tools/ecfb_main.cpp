// Command-line harness: single-point EC evaluation, figure-style parameter
// sweeps, optimal-error-probability runs, and bound queries. Emits
// plot-ready CSV (default) or JSON-lines records. All dB <-> linear
// conversion happens here; the library is purely linear-scale.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecfb/effective_capacity.hpp"
#include "ecfb/errors.hpp"
#include "ecfb/power.hpp"
#include "ecfb/rate_kernel.hpp"

namespace {

using ecfb::EcMethod;
using ecfb::SystemParams;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;     // some sweep cells infeasible
constexpr int kExitUsage = 2;       // usage or domain error
constexpr int kExitNumerical = 3;   // numerical failure

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

// One output cell: number, string, or absent (infeasible cells carry no
// numeric outputs).
struct Cell : std::variant<std::monostate, double, std::string> {
  using std::variant<std::monostate, double, std::string>::variant;
};

using Row = std::vector<Cell>;

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<Row>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (std::holds_alternative<double>(row[i])) {
        out += format_double(std::get<double>(row[i]));
      } else if (std::holds_alternative<std::string>(row[i])) {
        out += std::get<std::string>(row[i]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_jsonl(const std::vector<std::string>& header,
                     const std::vector<Row>& rows) {
  std::string out;
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    for (size_t i = 0; i < row.size(); ++i) {
      if (std::holds_alternative<double>(row[i])) {
        obj[header[i]] = std::get<double>(row[i]);
      } else if (std::holds_alternative<std::string>(row[i])) {
        obj[header[i]] = std::get<std::string>(row[i]);
      } else {
        obj[header[i]] = nullptr;
      }
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

// Write-to-temp-then-rename so a failed run never leaves a truncated file.
void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  namespace fs = std::filesystem;
  fs::path target(out_path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << content;
  }
  fs::rename(tmp, target);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> v;
  v.reserve(count);
  for (int i = 0; i < count; ++i) {
    v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  }
  return v;
}

enum class SweepVariable { RhoDb, Theta, Eps, Mu, Ce };
enum class Spacing { Linear, Log };

// One sweep axis: the swept variable, its grid, and the fixed operating
// point for everything else.
struct SweepSpec {
  SweepVariable variable = SweepVariable::RhoDb;
  double start = 0.0;
  double stop = 1.0;
  double step = 1.0;  // linear spacing
  int count = 2;      // log spacing
  Spacing spacing = Spacing::Linear;
  SystemParams fixed;

  std::vector<double> grid() const {
    if (!(start < stop)) throw ecfb::DomainError("sweep: start must be < stop");
    if (spacing == Spacing::Linear) {
      if (!(step > 0.0)) throw ecfb::DomainError("sweep: step must be > 0");
      std::vector<double> v;
      for (double x = start; x <= stop + 1e-12; x += step) v.push_back(x);
      return v;
    }
    if (count < 2) throw ecfb::DomainError("sweep: count must be >= 2");
    return log_spaced(start, stop, count);
  }
};

struct CommonOpts {
  int n = 500;
  double eps = 1e-4;
  bool allow_small_n = false;
  std::string format = "csv";
  std::string out;
};

void emit_rows(const CommonOpts& c, const std::vector<std::string>& header,
               const std::vector<Row>& rows) {
  emit(c.format == "json" ? to_jsonl(header, rows) : to_csv(header, rows),
       c.out);
}

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--n", c.n, "blocklength in channel uses");
  cmd->add_option("--eps", c.eps, "error probability");
  cmd->add_flag("--allow-small-n", c.allow_small_n,
                "accept blocklengths below 100");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out, "output path (atomic write)");
}

int run_eval(const CommonOpts& c, double theta, double snr_db,
             const std::string& method, bool check) {
  SystemParams p{c.n, c.eps, theta, db_to_linear(snr_db)};
  p.allow_small_n = c.allow_small_n;
  ecfb::validate(p);

  const bool want_closed = method != "oracle" || check;
  const bool want_oracle = method != "closed" || check;
  std::optional<double> ec_c, ec_o, rel;
  if (want_closed) ec_c = ecfb::effective_capacity(p, EcMethod::ClosedForm).ec;
  if (want_oracle) {
    ec_o = ecfb::effective_capacity(p, EcMethod::QuadratureOracle).ec;
  }
  if (ec_c && ec_o) rel = std::fabs(*ec_c - *ec_o) / std::fabs(*ec_o);

  const std::vector<std::string> header{
      "n",         "eps",           "theta",   "snr_db",
      "rho",       "ec_closed_bpcu", "ec_oracle_bpcu", "rel_err",
      "ec_bound_bpcu", "status",    "message"};
  Row row{static_cast<double>(c.n), c.eps, theta, snr_db, p.rho,
          ec_c ? Cell{*ec_c} : Cell{},
          ec_o ? Cell{*ec_o} : Cell{},
          rel ? Cell{*rel} : Cell{},
          ecfb::ec_upper_bound(c.n, theta, c.eps, c.allow_small_n),
          std::string("ok"), std::string()};
  emit_rows(c, header, {row});
  return kExitOk;
}

int run_fig2(const CommonOpts& c, const std::vector<double>& thetas,
             const SweepSpec& sweep) {
  const std::vector<std::string> header{
      "snr_db",  "theta",      "ec_closed", "ec_oracle",
      "ec_bound", "ec_shannon_infinite", "rel_err"};
  std::vector<Row> rows;
  const auto dbs = sweep.grid();
  for (double theta : thetas) {
    const double bound = ecfb::ec_upper_bound(c.n, theta, c.eps,
                                              c.allow_small_n);
    for (double db : dbs) {
      SystemParams p = sweep.fixed;
      p.theta = theta;
      p.rho = db_to_linear(db);
      const double ec_c = ecfb::effective_capacity(p, EcMethod::ClosedForm).ec;
      const double ec_o =
          ecfb::effective_capacity(p, EcMethod::QuadratureOracle).ec;
      const double shannon =
          ecfb::ec_shannon_infinite(c.n, theta, p.rho, c.allow_small_n);
      rows.push_back(Row{db, theta, ec_c, ec_o, bound, shannon,
                         std::fabs(ec_c - ec_o) / std::fabs(ec_o)});
    }
  }
  emit_rows(c, header, rows);
  return kExitOk;
}

int run_fig3(const CommonOpts& c, const std::vector<double>& ces,
             const SweepSpec& sweep) {
  const std::vector<std::string> header{"theta", "ce", "snr_db_required",
                                        "theta_bound", "status"};
  std::vector<Row> rows;
  bool any_infeasible = false;
  const auto thetas = sweep.grid();
  for (double ce : ces) {
    const double theta_b = ecfb::theta_upper_bound(c.n, ce, c.eps);
    for (double theta : thetas) {
      Row row{theta, ce, Cell{}, theta_b, std::string("ok")};
      try {
        row[2] = linear_to_db(ecfb::required_snr(ce, c.n, theta, c.eps));
      } catch (const ecfb::InfeasibleEc&) {
        row[4] = std::string("infeasible");
        any_infeasible = true;
      } catch (const ecfb::InfeasibleConstraint&) {
        row[4] = std::string("infeasible");
        any_infeasible = true;
      }
      rows.push_back(std::move(row));
    }
  }
  emit_rows(c, header, rows);
  return any_infeasible ? kExitPartial : kExitOk;
}

int run_fig4(const CommonOpts& c, const std::vector<double>& mus,
             const std::vector<double>& rho_max_dbs, const SweepSpec& sweep) {
  const std::vector<std::string> header{
      "theta",      "mu",        "rho_max_db", "rho_star_db", "eta_db",
      "ec_at_star", "ec_at_max", "ec_loss_rel", "binding",    "status"};
  std::vector<Row> rows;
  bool any_infeasible = false;
  const auto thetas = sweep.grid();
  for (double rho_max_db : rho_max_dbs) {
    for (double mu : mus) {
      for (double theta : thetas) {
        Row row{theta, mu, rho_max_db, Cell{}, Cell{},
                Cell{}, Cell{},       Cell{},  Cell{}, std::string("ok")};
        try {
          auto r = ecfb::optimal_power(c.n, theta, c.eps, mu,
                                       db_to_linear(rho_max_db));
          row[3] = linear_to_db(r.rho_star);
          row[4] = r.eta_db;
          row[5] = r.ec_at_star;
          row[6] = r.ec_at_max;
          row[7] = (r.ec_at_max - r.ec_at_star) / r.ec_at_max;
          row[8] = std::string(r.binding == ecfb::Binding::PowerCap
                                   ? "power_cap"
                                   : "derivative");
          if (r.high_snr_warning) row[9] = std::string("warning");
        } catch (const ecfb::InfeasibleConstraint&) {
          row[9] = std::string("infeasible");
          any_infeasible = true;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  emit_rows(c, header, rows);
  return any_infeasible ? kExitPartial : kExitOk;
}

int run_opt_eps(const CommonOpts& c, double theta, double snr_db,
                const std::string& method, bool grid) {
  const EcMethod backend =
      method == "oracle" ? EcMethod::QuadratureOracle : EcMethod::ClosedForm;
  const double rho = db_to_linear(snr_db);
  auto r = ecfb::optimal_epsilon(c.n, theta, rho, backend);

  std::optional<double> grid_eps, grid_ec, rel;
  if (grid) {
    // 10^4-point log-spaced exhaustive search over the same domain
    const auto eps_grid = log_spaced(1e-12, 0.5, 10000);
    double best_psi = 0.0;
    for (double e : eps_grid) {
      SystemParams p{c.n, e, theta, rho};
      p.allow_small_n = c.allow_small_n;
      const double psi = backend == EcMethod::ClosedForm
                             ? ecfb::psi_closed_form(p)
                             : ecfb::psi_oracle(p);
      if (!grid_eps || psi < best_psi) {
        best_psi = psi;
        grid_eps = e;
      }
    }
    grid_ec = -std::log(best_psi) / (c.n * theta);
    rel = std::fabs(r.eps_star - *grid_eps) / *grid_eps;
  }

  const std::vector<std::string> header{
      "n",          "theta",      "snr_db",       "eps_star",
      "ec_bpcu",    "iterations", "bracket_lo",   "bracket_hi",
      "eps_star_grid", "ec_grid_bpcu", "eps_rel_diff", "status"};
  Row row{static_cast<double>(c.n), theta, snr_db, r.eps_star,
          r.ec_max, static_cast<double>(r.iterations), r.bracket_lo,
          r.bracket_hi,
          grid_eps ? Cell{*grid_eps} : Cell{},
          grid_ec ? Cell{*grid_ec} : Cell{},
          rel ? Cell{*rel} : Cell{},
          std::string("ok")};
  emit_rows(c, header, {row});
  return kExitOk;
}

int run_bounds(const CommonOpts& c, std::optional<double> theta,
               std::optional<double> ce) {
  if (!theta && !ce) {
    throw ecfb::DomainError("bounds: provide --theta and/or --ce");
  }
  const std::vector<std::string> header{"n",  "eps",          "theta",
                                        "ce", "ec_bound_bpcu", "theta_bound",
                                        "status"};
  Row row{static_cast<double>(c.n), c.eps,
          theta ? Cell{*theta} : Cell{},
          ce ? Cell{*ce} : Cell{},
          theta ? Cell{ecfb::ec_upper_bound(c.n, *theta, c.eps,
                                            c.allow_small_n)}
                : Cell{},
          ce ? Cell{ecfb::theta_upper_bound(c.n, *ce, c.eps)} : Cell{},
          std::string("ok")};
  emit_rows(c, header, {row});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-blocklength effective capacity toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file mirroring the CLI flags");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate EC at one operating point");
  CommonOpts eval_c;
  double eval_theta = 0.01, eval_snr = 25.0;
  std::string eval_method = "both";
  bool eval_check = false;
  add_common(eval, eval_c);
  eval->add_option("--theta", eval_theta, "delay exponent per channel use");
  eval->add_option("--snr-db", eval_snr, "transmit SNR in dB");
  eval->add_option("--method", eval_method, "psi backend")
      ->check(CLI::IsMember({"closed", "oracle", "both"}));
  eval->add_flag("--check", eval_check, "run both backends and emit rel_err");

  // fig2
  auto* fig2 = app.add_subcommand(
      "fig2", "EC vs SNR sweep (closed form, oracle, bounds, Shannon)");
  CommonOpts fig2_c;
  std::vector<double> fig2_thetas{0.001, 0.01, 0.1};
  double fig2_db_min = 0.0, fig2_db_max = 40.0, fig2_db_step = 1.0;
  add_common(fig2, fig2_c);
  fig2->add_option("--theta", fig2_thetas, "delay exponents (repeatable)");
  fig2->add_option("--snr-db-min", fig2_db_min, "sweep start, dB");
  fig2->add_option("--snr-db-max", fig2_db_max, "sweep end, dB");
  fig2->add_option("--snr-db-step", fig2_db_step, "sweep step, dB");

  // fig3
  auto* fig3 = app.add_subcommand(
      "fig3", "power-delay profile: required SNR vs theta at fixed EC");
  CommonOpts fig3_c;
  std::vector<double> fig3_ces{0.5, 1.0, 1.5};
  double fig3_tmin = 0.002, fig3_tmax = 0.05;
  int fig3_tcount = 40;
  add_common(fig3, fig3_c);
  fig3->add_option("--ce", fig3_ces, "target EC values, bpcu (repeatable)");
  fig3->add_option("--theta-min", fig3_tmin, "theta sweep start");
  fig3->add_option("--theta-max", fig3_tmax, "theta sweep end");
  fig3->add_option("--theta-count", fig3_tcount, "log-spaced point count");

  // fig4 (carries the fig5 EC-loss columns as well)
  auto* fig4 = app.add_subcommand(
      "fig4", "power saving and EC loss vs theta under the slope constraint");
  CommonOpts fig4_c;
  std::vector<double> fig4_mus{0.0, 1e-3, 1e-2};
  std::vector<double> fig4_rho_max_dbs{20.0, 30.0};
  double fig4_tmin = 0.002, fig4_tmax = 0.1;
  int fig4_tcount = 30;
  add_common(fig4, fig4_c);
  fig4->add_option("--mu", fig4_mus, "power saving factors (repeatable)");
  fig4->add_option("--rho-max-db", fig4_rho_max_dbs,
                   "power caps in dB (repeatable)");
  fig4->add_option("--theta-min", fig4_tmin, "theta sweep start");
  fig4->add_option("--theta-max", fig4_tmax, "theta sweep end");
  fig4->add_option("--theta-count", fig4_tcount, "log-spaced point count");

  // opt-eps
  auto* opte = app.add_subcommand(
      "opt-eps", "error probability maximizing EC at fixed (n, theta, snr)");
  CommonOpts opte_c;
  double opte_theta = 0.01, opte_snr = 20.0;
  std::string opte_method = "closed";
  bool opte_grid = false;
  add_common(opte, opte_c);
  opte->add_option("--theta", opte_theta, "delay exponent per channel use");
  opte->add_option("--snr-db", opte_snr, "transmit SNR in dB");
  opte->add_option("--method", opte_method, "psi backend")
      ->check(CLI::IsMember({"closed", "oracle"}));
  opte->add_flag("--grid", opte_grid,
                 "also run the dense-grid search and report the discrepancy");

  // bounds
  auto* bounds = app.add_subcommand(
      "bounds", "finite-blocklength EC and delay-exponent bounds");
  CommonOpts bounds_c;
  double bounds_theta = 0.0, bounds_ce = 0.0;
  add_common(bounds, bounds_c);
  auto* bt = bounds->add_option("--theta", bounds_theta, "delay exponent");
  auto* bc = bounds->add_option("--ce", bounds_ce, "target EC, bpcu");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed()) {
      return run_eval(eval_c, eval_theta, eval_snr, eval_method, eval_check);
    }
    if (fig2->parsed()) {
      SweepSpec sweep;
      sweep.variable = SweepVariable::RhoDb;
      sweep.start = fig2_db_min;
      sweep.stop = fig2_db_max;
      sweep.step = fig2_db_step;
      sweep.spacing = Spacing::Linear;
      sweep.fixed = SystemParams{fig2_c.n, fig2_c.eps, 0.0, 1.0,
                                 fig2_c.allow_small_n};
      return run_fig2(fig2_c, fig2_thetas, sweep);
    }
    if (fig3->parsed()) {
      SweepSpec sweep;
      sweep.variable = SweepVariable::Theta;
      sweep.start = fig3_tmin;
      sweep.stop = fig3_tmax;
      sweep.count = fig3_tcount;
      sweep.spacing = Spacing::Log;
      sweep.fixed = SystemParams{fig3_c.n, fig3_c.eps, 0.0, 1.0,
                                 fig3_c.allow_small_n};
      return run_fig3(fig3_c, fig3_ces, sweep);
    }
    if (fig4->parsed()) {
      SweepSpec sweep;
      sweep.variable = SweepVariable::Theta;
      sweep.start = fig4_tmin;
      sweep.stop = fig4_tmax;
      sweep.count = fig4_tcount;
      sweep.spacing = Spacing::Log;
      sweep.fixed = SystemParams{fig4_c.n, fig4_c.eps, 0.0, 1.0,
                                 fig4_c.allow_small_n};
      return run_fig4(fig4_c, fig4_mus, fig4_rho_max_dbs, sweep);
    }
    if (opte->parsed()) {
      return run_opt_eps(opte_c, opte_theta, opte_snr, opte_method,
                         opte_grid);
    }
    if (bounds->parsed()) {
      return run_bounds(bounds_c,
                        bt->count() ? std::optional<double>(bounds_theta)
                                    : std::nullopt,
                        bc->count() ? std::optional<double>(bounds_ce)
                                    : std::nullopt);
    }
  } catch (const ecfb::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
