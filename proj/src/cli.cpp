#include "blowuplab/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "blowuplab/classify.hpp"
#include "blowuplab/diagnostics.hpp"
#include "blowuplab/elliptic.hpp"
#include "blowuplab/errors.hpp"
#include "blowuplab/integrate.hpp"

namespace blowuplab::cli {

using nlohmann::json;

namespace {

// Raised for inconsistent flag combinations that CLI11 cannot express.
struct UsageError : Error {
  using Error::Error;
};

double parse_number(std::string_view text, const std::string& what) {
  double x = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) {
    throw DomainError(what + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return x;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
json optional_json(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

// Problem selection shared by every integrating subcommand.
struct ParamFlags {
  double m = 0.0;
  double A = 0.0;
  double B = 0.0;
  CLI::Option* m_opt = nullptr;
  CLI::Option* A_opt = nullptr;
  CLI::Option* B_opt = nullptr;

  void attach(CLI::App* app) {
    m_opt = app->add_option("--m", m, "Dimension m > 2");
    A_opt = app->add_option("--A", A, "Coefficient A (with --B)");
    B_opt = app->add_option("--B", B, "Coefficient B (with --A)");
  }

  OdeParams resolve() const {
    const bool has_m = m_opt->count() > 0;
    const bool has_a = A_opt->count() > 0;
    const bool has_b = B_opt->count() > 0;
    if (has_m && !has_a && !has_b) return params_from_dimension(m);
    if (!has_m && has_a && has_b) return params_from_coeffs(A, B);
    throw UsageError("give exactly one of --m or (--A and --B)");
  }
};

struct SolverFlags {
  std::string integrator = "auto";
  IntegrateOptions opts;
  bool fixed = false;

  void attach(CLI::App* app, int record_every) {
    opts.record_every = record_every;
    app->add_option("--integrator", integrator, "rk4, gauss6 or auto")->capture_default_str();
    app->add_option("--h0", opts.h0, "Initial (or fixed) step")->capture_default_str();
    app->add_option("--local-tol", opts.local_tol, "Step-doubling tolerance")
        ->capture_default_str();
    app->add_option("--threshold", opts.blowup_threshold, "Blow-up threshold on |u|")
        ->capture_default_str();
    app->add_option("--h-min", opts.h_min, "Smallest step")->capture_default_str();
    app->add_option("--h-max", opts.h_max, "Largest step");
    app->add_option("--max-steps", opts.max_steps, "Step budget")->capture_default_str();
    app->add_option("--record-every", opts.record_every, "Keep every n-th state")
        ->capture_default_str();
    app->add_flag("--fixed-step", fixed, "Fixed steps of size h0");
  }

  IntegratorKind kind(const OdeParams& p) const {
    if (integrator == "auto") return p.disc < 0.0 ? IntegratorKind::Gauss6 : IntegratorKind::RK4;
    return parse_integrator(integrator);
  }

  IntegrateOptions options(double t_end) const {
    IntegrateOptions o = opts;
    o.t_end = t_end;
    o.adaptive = !fixed;
    o.validate();
    return o;
  }
};

bool inconclusive(const Trajectory& t) {
  return std::holds_alternative<StepUnderflow>(t.termination) ||
         std::holds_alternative<MaxSteps>(t.termination);
}

json params_json(const OdeParams& p) {
  return json{{"A", p.A},
              {"B", p.B},
              {"m", optional_json(p.m)},
              {"disc", p.disc},
              {"k_minus", optional_json(p.k_minus)},
              {"k_plus", optional_json(p.k_plus)}};
}

json verdict_json(const Verdict& v) {
  const VerdictDetail& d = v.detail;
  json detail = json::object();
  if (d.tanh_b) detail["tanh_b"] = *d.tanh_b;
  if (d.tanh_c) detail["tanh_c"] = *d.tanh_c;
  if (d.blowup_bound) {
    detail["blowup_bound"] = *d.blowup_bound;
    detail["bound_is_exact"] = d.bound_is_exact;
  }
  if (d.e0) detail["e0"] = *d.e0;
  if (!d.branch.empty()) detail["branch"] = d.branch;
  if (d.decays) detail["decays"] = true;
  json out{{"kind", to_string(v.kind)}, {"basis", v.basis}, {"detail", detail}};
  if (v.kind == VerdictKind::GlobalBounded) out["scope"] = to_string(v.scope);
  return out;
}

json termination_json(const Termination& term) {
  json out{{"kind", termination_name(term)}};
  if (const auto* b = std::get_if<BlowUp>(&term)) {
    out["t_estimate"] = number_or_null(b->t_estimate);
    out["direction"] = b->direction;
    out["sign"] = b->sign;
  } else if (const auto* s = std::get_if<StepUnderflow>(&term)) {
    out["t_last"] = s->t_last;
  }
  return out;
}

json options_json(const IntegrateOptions& o, IntegratorKind kind) {
  return json{{"integrator", to_string(kind)},
              {"h0", o.h0},
              {"t_end", o.t_end},
              {"blowup_threshold", o.blowup_threshold},
              {"local_tol", o.local_tol},
              {"h_min", o.h_min},
              {"h_max", number_or_null(o.h_max)},
              {"max_steps", o.max_steps},
              {"record_every", o.record_every},
              {"adaptive", o.adaptive}};
}

// "-" selects stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw DomainError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open output file '" + path + "'");
  out << doc.dump(2) << '\n';
}

std::string sidecar_path(const std::string& explicit_path, const std::string& out,
                         const char* suffix) {
  if (!explicit_path.empty()) return explicit_path;
  return out == "-" ? std::string() : out + suffix;
}

// Runs fn(i) for i in [0, n) on up to thread_count() workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Grid {
  std::vector<double> u;
  std::vector<double> v;
  std::size_t size() const { return u.size() * v.size(); }
  // Row-major with u outer, v inner.
  double u_at(std::size_t i) const { return u[i / v.size()]; }
  double v_at(std::size_t i) const { return v[i % v.size()]; }
};

Grid resolve_grid(const std::vector<std::string>& specs) {
  if (specs.size() != 2) throw UsageError("--grid takes two specs: u-range and v-range");
  return Grid{parse_grid(specs[0]), parse_grid(specs[1])};
}

// ---------------------------------------------------------------- integrate

struct IntegrateCmd {
  ParamFlags params;
  SolverFlags solver;
  double u0 = 0.0;
  double v0 = 0.0;
  double t0 = 0.0;
  double t_end = 1.0;
  std::string out = "-";
  std::string meta;

  void attach(CLI::App* app) {
    params.attach(app);
    solver.attach(app, 1);
    app->add_option("--u0", u0, "u at t0")->required();
    app->add_option("--v0", v0, "u' at t0")->required();
    app->add_option("--t0", t0, "Initial time")->capture_default_str();
    app->add_option("--t-end", t_end, "Final time (may precede t0)")->required();
    app->add_option("--out", out, "Trajectory CSV, '-' for stdout")->capture_default_str();
    app->add_option("--meta", meta, "JSON sidecar (default: <out>.json)");
  }

  int execute() const {
    const OdeParams p = params.resolve();
    const IntegratorKind kind = solver.kind(p);
    const IntegrateOptions opts = solver.options(t_end);
    const State s0{t0, u0, v0};
    if (!is_finite(s0)) throw DomainError("initial state must be finite");

    const Trajectory traj = integrate(p, s0, kind, opts);

    Output csv(out);
    std::ostream& os = csv.stream();
    os << "t,u,du,e,g_kminus,g_kplus\n";
    for (const State& s : traj.states) {
      os << format_double(s.t) << ',' << format_double(s.u) << ',' << format_double(s.v) << ','
         << format_double(diagnostics::energy(p, s)) << ',';
      if (p.has_real_roots()) {
        os << format_double(diagnostics::g_k(s, *p.k_minus)) << ','
           << format_double(diagnostics::g_k(s, *p.k_plus));
      } else {
        os << ',';
      }
      os << '\n';
    }
    os.flush();

    std::optional<double> estimate;
    if (traj.blew_up()) {
      try {
        estimate = estimate_blowup_time(traj);
      } catch (const FitFailure&) {
        estimate = std::get<BlowUp>(traj.termination).t_estimate;
      }
    }
    const std::string meta_path = sidecar_path(meta, out, ".json");
    if (!meta_path.empty()) {
      const State& last = traj.states.back();
      write_json(meta_path,
                 json{{"params", params_json(p)},
                      {"initial", {{"t", t0}, {"u", u0}, {"du", v0}}},
                      {"options", options_json(opts, kind)},
                      {"verdict", verdict_json(classify(p, u0, v0))},
                      {"termination", termination_json(traj.termination)},
                      {"blowup_estimate", optional_json(estimate)},
                      {"samples", traj.states.size()},
                      {"final", {{"t", last.t}, {"u", last.u}, {"du", last.v}}}});
    }
    return inconclusive(traj) ? kFailure : kOk;
  }
};

// ---------------------------------------------------------------- portrait

struct PortraitCmd {
  ParamFlags params;
  SolverFlags solver;
  std::vector<std::string> grid;
  double horizon = 20.0;
  int separatrix_points = 101;
  std::string out = "-";
  std::string manifest;

  void attach(CLI::App* app) {
    params.attach(app);
    solver.attach(app, 10);
    app->add_option("--grid", grid, "u-range and v-range, each lo:hi:n")
        ->expected(2)
        ->required();
    app->add_option("--horizon", horizon, "Integrate to +-horizon")->capture_default_str();
    app->add_option("--separatrix-points", separatrix_points, "Samples per separatrix")
        ->capture_default_str();
    app->add_option("--out", out, "Portrait CSV, '-' for stdout")->capture_default_str();
    app->add_option("--manifest", manifest, "JSON manifest (default: <out>.json)");
  }

  int execute() const {
    const OdeParams p = params.resolve();
    if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
    if (separatrix_points < 2) throw DomainError("separatrix-points must be >= 2");
    const Grid g = resolve_grid(grid);
    const IntegratorKind kind = solver.kind(p);
    const IntegrateOptions fwd_opts = solver.options(horizon);
    const IntegrateOptions bwd_opts = solver.options(-horizon);

    struct Item {
      std::string rows;
      json entry;
      bool inconclusive = false;
    };
    std::vector<Item> items(g.size());
    parallel_for(g.size(), [&](std::size_t i) {
      const double u0 = g.u_at(i);
      const double v0 = g.v_at(i);
      const Verdict verdict = classify(p, u0, v0);
      const bool stationary =
          verdict.kind == VerdictKind::Stationary || verdict.kind == VerdictKind::Trivial;
      const Trajectory bwd = integrate(p, State{0.0, u0, v0}, kind, bwd_opts);
      const Trajectory fwd = integrate(p, State{0.0, u0, v0}, kind, fwd_opts);
      std::string rows;
      for (const auto& [name, traj] : {std::pair{"bwd", &bwd}, std::pair{"fwd", &fwd}}) {
        const std::string term = stationary ? "Stationary" : termination_name(traj->termination);
        for (const State& s : traj->states) {
          rows += fmt::format("{},{},{},{},{},{}\n", i, name, format_double(s.t),
                              format_double(s.u), format_double(s.v), term);
        }
      }
      items[i].rows = std::move(rows);
      items[i].inconclusive = inconclusive(fwd) || inconclusive(bwd);
      items[i].entry = json{{"traj_id", i},
                            {"u0", u0},
                            {"du0", v0},
                            {"stationary", stationary},
                            {"verdict", to_string(verdict.kind)},
                            {"fwd", termination_json(fwd.termination)},
                            {"bwd", termination_json(bwd.termination)}};
    });

    Output csv(out);
    std::ostream& os = csv.stream();
    os << "traj_id,branch,t,u,du,terminated\n";
    json entries = json::array();
    bool any_inconclusive = false;
    for (auto& item : items) {
      os << item.rows;
      entries.push_back(std::move(item.entry));
      any_inconclusive = any_inconclusive || item.inconclusive;
    }
    os.flush();

    const std::string manifest_path = sidecar_path(manifest, out, ".json");
    if (!manifest_path.empty()) {
      json separatrices = json::array();
      if (p.has_real_roots() && p.B > 0.0) {
        const double lo = g.u.front();
        const double hi = g.u.back();
        for (const auto& [label, k] : {std::pair{"k_minus", *p.k_minus}, std::pair{"k_plus", *p.k_plus}}) {
          json pts = json::array();
          for (int j = 0; j < separatrix_points; ++j) {
            const double u = lo + (hi - lo) * j / (separatrix_points - 1);
            pts.push_back({u, -k * u * u});
          }
          separatrices.push_back({{"label", label}, {"k", k}, {"curve", "du = -k u^2"}, {"points", pts}});
        }
      }
      write_json(manifest_path,
                 json{{"params", params_json(p)},
                      {"options", options_json(fwd_opts, kind)},
                      {"horizon", horizon},
                      {"grid", {{"u", grid[0]}, {"du", grid[1]}}},
                      {"trajectories", entries},
                      {"separatrices", separatrices}});
    }
    return any_inconclusive ? kFailure : kOk;
  }
};

// ---------------------------------------------------------------- classify

struct ClassifyCmd {
  ParamFlags params;
  std::vector<std::string> grid;
  bool verify = false;
  std::string out = "-";

  void attach(CLI::App* app) {
    params.attach(app);
    app->add_option("--grid", grid, "u-range and v-range, each lo:hi:n")
        ->expected(2)
        ->required();
    app->add_flag("--verify", verify, "Confirm each verdict numerically");
    app->add_option("--out", out, "CSV, '-' for stdout")->capture_default_str();
  }

  int execute() const {
    const OdeParams p = params.resolve();
    const Grid g = resolve_grid(grid);
    std::vector<std::string> rows(g.size());
    std::vector<char> failed(g.size(), 0);
    parallel_for(g.size(), [&](std::size_t i) {
      const double u0 = g.u_at(i);
      const double v0 = g.v_at(i);
      const Verdict verdict = classify(p, u0, v0);
      std::string verified;
      if (verify) {
        const VerifyReport r = verify_verdict(p, u0, v0, verdict, default_horizon(verdict));
        verified = to_string(r.status);
        failed[i] = r.status == VerifyStatus::Fail || r.status == VerifyStatus::Inconclusive;
      }
      rows[i] = fmt::format("{},{},{},{},{}\n", format_double(u0), format_double(v0),
                            to_string(verdict.kind), verdict.basis, verified);
    });
    Output csv(out);
    std::ostream& os = csv.stream();
    os << "u0,v0,verdict,basis,verified\n";
    for (const auto& r : rows) os << r;
    os.flush();
    return std::any_of(failed.begin(), failed.end(), [](char f) { return f != 0; }) ? kFailure
                                                                                    : kOk;
  }
};

// ---------------------------------------------------------------- elliptic

struct EllipticCmd {
  bool quarter = false;
  bool sl = false;
  std::vector<double> t;
  std::vector<double> moduli;
  int table = 0;
  std::string out = "-";

  void attach(CLI::App* app) {
    app->add_flag("--quarter-period", quarter, "Print the quarter period of sl");
    app->add_flag("--sl", sl, "Print sl(t),sl'(t) for each --t");
    app->add_option("--t", t, "Arguments for --sl");
    app->add_option("--K", moduli, "Print K(k) for each modulus");
    app->add_option("--table", table, "Write sl on one period with n intervals");
    app->add_option("--out", out, "Destination of --table, '-' for stdout")
        ->capture_default_str();
  }

  int execute() const {
    if (!quarter && !sl && moduli.empty() && table == 0) {
      throw UsageError("nothing to do: give --quarter-period, --sl, --K or --table");
    }
    if (sl && t.empty()) throw UsageError("--sl needs at least one --t");
    if (!sl && !t.empty()) throw UsageError("--t requires --sl");
    if (table < 0) throw DomainError("table must be >= 1");
    if (quarter) std::cout << format_double(elliptic::lemniscate_quarter_period()) << '\n';
    for (double x : t) {
      const elliptic::SlValue s = elliptic::sl(x);
      std::cout << format_double(s.value) << ',' << format_double(s.derivative) << '\n';
    }
    for (double k : moduli) std::cout << format_double(elliptic::K_agm(k)) << '\n';
    if (table > 0) {
      const double period = 4.0 * elliptic::lemniscate_quarter_period();
      Output csv(out);
      std::ostream& os = csv.stream();
      os << "t,sl,dsl\n";
      for (int i = 0; i <= table; ++i) {
        const double x = period * i / table;
        const elliptic::SlValue s = elliptic::sl(x);
        os << format_double(x) << ',' << format_double(s.value) << ','
           << format_double(s.derivative) << '\n';
      }
    }
    std::cout.flush();
    return kOk;
  }
};

// Splices "--config path" (key=value lines, '#' comments) into the argument
// list right after the subcommand, ahead of the explicit flags.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> in(argv + 1, argv + argc);
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == "--config") {
      if (i + 1 >= in.size()) throw UsageError("--config needs a path");
      path = in[++i];
    } else if (in[i].rfind("--config=", 0) == 0) {
      path = in[i].substr(9);
    } else {
      rest.push_back(in[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(file, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw UsageError(fmt::format("{}:{}: expected key=value", path, lineno));
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw UsageError(fmt::format("{}:{}: empty key", path, lineno));
    if (value == "true" || value == "false") {
      extra.push_back("--" + key + "=" + value);
      continue;
    }
    extra.push_back("--" + key);
    std::istringstream tokens(value);
    for (std::string tok; tokens >> tok;) extra.push_back(tok);
  }
  if (rest.empty() || rest.front().rfind('-', 0) == 0) {
    throw UsageError("--config must follow a subcommand");
  }
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string::npos ? first : spec.find(':', first + 1);
  if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos) {
    throw DomainError("grid '" + spec + "' must look like lo:hi:n");
  }
  const std::string_view view(spec);
  const double lo = parse_number(view.substr(0, first), "grid lo");
  const double hi = parse_number(view.substr(first + 1, second - first - 1), "grid hi");
  const double n_real = parse_number(view.substr(second + 1), "grid n");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw DomainError("grid '" + spec + "' needs finite lo <= hi");
  }
  if (!(n_real >= 1.0) || n_real != std::floor(n_real) || n_real > 1e6) {
    throw DomainError("grid '" + spec + "' needs an integer point count n >= 1");
  }
  const auto n = static_cast<std::size_t>(n_real);
  if (n == 1) {
    if (lo != hi) throw DomainError("grid '" + spec + "' with one point needs lo = hi");
    return {lo};
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::vector<State> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InsufficientData("trajectory CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DomainError("trajectory CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ct = column("t");
  const std::size_t cu = column("u");
  const std::size_t cv = column("du");
  std::vector<State> states;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    cells.clear();
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() < header.size()) throw DomainError("short row in trajectory CSV");
    states.push_back(State{parse_number(cells[ct], "t"), parse_number(cells[cu], "u"),
                           parse_number(cells[cv], "du")});
  }
  return states;
}

unsigned thread_count() {
  if (const char* env = std::getenv("BLOWUPLAB_THREADS")) {
    unsigned n = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && ptr == s.data() + s.size() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Numerical laboratory for u'' = A u u' + B u^3", "blowuplab"};
  app.require_subcommand(1);
  // Later occurrences win, so config values can be overridden on the command line.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  IntegrateCmd integrate_cmd;
  PortraitCmd portrait_cmd;
  ClassifyCmd classify_cmd;
  EllipticCmd elliptic_cmd;

  auto* integrate_app = app.add_subcommand("integrate", "Integrate one initial condition");
  auto* portrait_app = app.add_subcommand("portrait", "Phase portrait over a grid");
  auto* classify_app = app.add_subcommand("classify", "Classify a grid of initial conditions");
  auto* elliptic_app = app.add_subcommand("elliptic", "Lemniscatic constants and tables");
  integrate_cmd.attach(integrate_app);
  portrait_cmd.attach(portrait_app);
  classify_cmd.attach(classify_app);
  elliptic_cmd.attach(elliptic_app);
  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    // CLI11 wants the program name first and the rest reversed.
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (integrate_app->parsed()) return integrate_cmd.execute();
    if (portrait_app->parsed()) return portrait_cmd.execute();
    if (classify_app->parsed()) return classify_cmd.execute();
    return elliptic_cmd.execute();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace blowuplab::cli
