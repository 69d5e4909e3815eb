#pragma once

// Subcommands of the pstrack tool. run_cli is the whole program minus the
// process boundary, so tests can drive it in-process.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pstrack/pstrack.hpp"
#include "run_record.hpp"

namespace pstrack::cli {

enum exit_status : int {
  exit_success = 0,
  exit_internal = 1,
  exit_usage = 2,
  exit_step_failure = 3,
  exit_corrector_failure = 4,
  exit_singular_jacobian = 5,
};

/// Bad flags, missing files and other mistakes of the caller.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct global_options {
  std::string precision = "dd";
  std::optional<std::size_t> degree;
  std::vector<std::size_t> threads{1};
  std::string beta = "0.5";
  std::string min_step;  ///< empty: the precision's default
  std::string pade;      ///< "K,L"; empty: floor(d/2) each
  std::string target = "1";
  std::uint64_t seed = 1;
  std::string out;
  bool oversubscribe = false;
  std::size_t hardware_threads = 0;  ///< zero: ask the platform
};

struct generate_options {
  std::string kind;
  std::size_t n = 0;
  std::size_t terms = 64;
  std::uint32_t max_exponent = 8;
  std::string input;
  std::string point_out;
};

struct path_options {
  std::string system;
  std::string start;
};

struct bench_options {
  std::string stage;
  std::size_t n = 64;
  std::size_t cyclic = 0;
  std::size_t terms = 64;
  std::uint32_t max_exponent = 8;
  std::size_t repeat = 1;
};

inline const std::vector<std::string> bench_stages{"evaldiff", "hessians", "blocksolve", "newton",
                                                   "pade",     "shift",    "C",          "R"};

inline std::string read_file(const std::string& path, const char* role) {
  if (path.empty()) throw usage_error(std::string("missing ") + role + " file");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error(std::string("cannot read ") + role + " file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

/// Writes to the named file, or to out when the name is empty.
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw usage_error("cannot write '" + path + "'");
  file << text;
}

inline pade_degrees parse_pade(const std::string& text, std::size_t degree) {
  if (text.empty()) return default_pade_degrees(degree);
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw usage_error("--pade expects K,L");
  try {
    std::size_t used_k = 0;
    std::size_t used_l = 0;
    const auto k = std::stoul(text.substr(0, comma), &used_k);
    const auto l = std::stoul(text.substr(comma + 1), &used_l);
    if (used_k != comma || used_l != text.size() - comma - 1) throw usage_error("--pade expects K,L");
    return {k, l};
  } catch (const std::logic_error&) {
    throw usage_error("--pade expects K,L");
  }
}

template <xprec::working_real R>
R parse_flag(const std::string& text, const char* flag) {
  try {
    return xprec::parse_real<R>(text);
  } catch (const domain_error&) {
    throw usage_error(std::string(flag) + " expects a decimal number, got '" + text + "'");
  }
}

/// Thread counts above the hardware parallelism are lowered to it, with a
/// warning, unless oversubscription was asked for.
inline std::vector<std::size_t> capped_threads(const global_options& g, std::ostream& err) {
  std::size_t hw = g.hardware_threads ? g.hardware_threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::vector<std::size_t> out;
  for (auto p : g.threads) {
    if (p == 0) throw usage_error("--threads values must be positive");
    if (p > hw && !g.oversubscribe) {
      err << "warning: " << p << " threads requested, capped at the " << hw << " available\n";
      p = hw;
    }
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

template <xprec::working_real R>
decimal_complex to_decimal(const xprec::xcomplex<R>& z) {
  return {xprec::to_string(z.re), xprec::to_string(z.im)};
}

template <xprec::working_real R>
std::string short_real(const R& x) {
  return xprec::format_real(x, 6);
}

template <xprec::working_real R>
R max_modulus(std::span<const xprec::xcomplex<R>> v) {
  R m(0.0);
  for (const auto& z : v) m = std::max(m, abs(z));
  return m;
}

template <xprec::working_real R>
run_config echo_config(const std::string& command, const global_options& g, const path_options& paths,
                       std::size_t degree, std::size_t threads, pade_degrees pd, const step_policy<R>& policy) {
  run_config c;
  c.command = command;
  c.precision = g.precision;
  c.degree = degree;
  c.threads = threads;
  c.beta = xprec::to_string(policy.beta);
  c.min_step = xprec::to_string(policy.min_step);
  c.pade_numerator = pd.numerator;
  c.pade_denominator = pd.denominator;
  c.target = g.target;
  c.seed = g.seed;
  c.system_file = paths.system;
  c.start_file = paths.start;
  return c;
}

template <xprec::working_real R>
step_entry to_entry(const step_record<R>& s) {
  step_entry e;
  e.index = s.index;
  e.t_start = xprec::to_string(s.t_start);
  e.delta_t = xprec::to_string(s.delta_t);
  e.proposed = xprec::to_string(s.decision.delta_t);
  e.curvature = xprec::to_string(s.decision.curvature);
  e.radius = xprec::to_string(s.decision.radius);
  e.binding = std::string(to_string(s.decision.binding));
  e.retries = s.retries;
  e.newton_iterations = s.newton_iterations;
  if (s.newton_condition) e.condition = xprec::to_string(*s.newton_condition);
  e.corrector_iterations = s.corrector_iterations;
  e.corrector_residual = xprec::to_string(s.corrector_residual);
  e.pade_reductions = s.pade_reductions;
  return e;
}

inline int exit_code_of(tracking_failure kind) {
  switch (kind) {
    case tracking_failure::step_failure:
      return exit_step_failure;
    case tracking_failure::corrector_failure:
      return exit_corrector_failure;
    case tracking_failure::singular_jacobian:
      return exit_singular_jacobian;
  }
  return exit_internal;
}

inline void write_record(const global_options& g, const run_record& rec) {
  if (!g.out.empty()) emit(g.out, to_json(rec).dump(2) + "\n", std::cout);
}

template <xprec::working_real R>
struct loaded_problem {
  sparse_system<R> system;
  cvector<R> start;
};

template <xprec::working_real R>
loaded_problem<R> load_problem(const path_options& paths) {
  const std::string system_text = read_file(paths.system, "system");
  const std::string start_text = read_file(paths.start, "start point");
  try {
    auto sys = parse_system<R>(system_text);
    auto x0 = parse_point<R>(start_text);
    if (x0.size() != sys.variables())
      throw usage_error("start point has " + std::to_string(x0.size()) + " coordinates, the system has " +
                        std::to_string(sys.variables()) + " variables");
    return {std::move(sys), std::move(x0)};
  } catch (const parse_error& e) {
    throw usage_error(e.what());
  } catch (const dimension_error& e) {
    throw usage_error(e.what());
  }
}

template <xprec::working_real R>
int cmd_track(const global_options& g, const path_options& paths, std::ostream& out, std::ostream& err) {
  const auto problem = load_problem<R>(paths);
  if (g.threads.size() != 1) throw usage_error("track takes a single --threads value");
  const auto threads = capped_threads(g, err);

  tracker_config<R> cfg;
  cfg.degree = g.degree.value_or(8);
  cfg.pade = parse_pade(g.pade, cfg.degree);
  cfg.policy.beta = parse_flag<R>(g.beta, "--beta");
  if (!g.min_step.empty()) cfg.policy.min_step = parse_flag<R>(g.min_step, "--minstep");
  cfg.t_target = parse_flag<R>(g.target, "--target");
  cfg.threads = threads.front();
  try {
    cfg.validate();
  } catch (const domain_error& e) {
    throw usage_error(e.what());
  }
  if (!problem.system.is_square()) throw usage_error("track needs as many polynomials as variables");

  run_record rec;
  rec.config = echo_config("track", g, paths, cfg.degree, cfg.threads, *cfg.pade, cfg.policy);
  tracker_state<R> st{problem.system, R(0.0), problem.start, {}, {}, {}};
  const auto started = std::chrono::steady_clock::now();
  try {
    st = track_path(problem.system, problem.start, cfg);
    rec.exit_code = exit_success;
    rec.status = "success";
  } catch (const tracking_error<R>& e) {
    st = e.state();
    rec.exit_code = exit_code_of(e.kind());
    rec.status = to_string(e.kind());
    rec.message = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  rec.seconds = {{"newton", st.times.newton}, {"curvature", st.times.curvature}, {"radius", st.times.radius},
                 {"pade", st.times.pade},     {"shift", st.times.shift},         {"corrector", st.times.corrector},
                 {"total", wall}};
  for (const auto& s : st.log) rec.steps.push_back(to_entry(s));
  rec.t_final = xprec::to_string(st.t_global);
  for (const auto& z : st.x_point) rec.point.push_back(to_decimal(z));
  const auto values = evaluate_at(st.hom, std::span<const xprec::xcomplex<R>>(st.x_point));
  const R residual = max_modulus<R>(values);
  rec.residual = xprec::to_string(residual);

  out << "step            t           dt            C            R  binding    retries  corr  residual\n";
  for (const auto& s : st.log) {
    out << std::setw(4) << s.index << "  " << std::setw(12) << short_real(s.t_start) << " " << std::setw(12)
        << short_real(s.delta_t) << " " << std::setw(12) << short_real(s.decision.curvature) << " "
        << std::setw(12) << short_real(s.decision.radius) << "  " << std::left << std::setw(10)
        << to_string(s.decision.binding) << std::right << std::setw(7) << s.retries << std::setw(6)
        << s.corrector_iterations << "  " << short_real(s.corrector_residual) << "\n";
  }
  out << "t = " << xprec::format_real(st.t_global, 20) << "\n";
  for (std::size_t i = 0; i < st.x_point.size(); ++i)
    out << "x" << i << " = (" << xprec::to_string(st.x_point[i].re) << ", " << xprec::to_string(st.x_point[i].im)
        << ")\n";
  out << "residual " << short_real(residual) << ", " << st.log.size() << " steps, " << std::fixed
      << std::setprecision(3) << wall << " s\n"
      << std::defaultfloat;
  if (rec.exit_code != exit_success) err << "error: " << rec.message << "\n";
  out << "status " << rec.status << "\n";
  write_record(g, rec);
  return rec.exit_code;
}

template <xprec::working_real R>
int cmd_newton(const global_options& g, const path_options& paths, std::ostream& out, std::ostream& err) {
  const auto problem = load_problem<R>(paths);
  if (g.threads.size() != 1) throw usage_error("newton takes a single --threads value");
  const auto threads = capped_threads(g, err);
  newton_config<R> ncfg;
  ncfg.degree = g.degree.value_or(8);
  if (!problem.system.is_square()) throw usage_error("newton needs as many polynomials as variables");

  run_record rec;
  step_policy<R> policy;
  rec.config = echo_config("newton", g, paths, ncfg.degree, threads.front(), parse_pade(g.pade, ncfg.degree), policy);
  work_crew crew(threads.front());
  const auto started = std::chrono::steady_clock::now();
  std::optional<newton_result<R>> result;
  try {
    result = newton_series(problem.system, problem.start, ncfg, crew);
    rec.status = "success";
  } catch (const newton_divergence<R>& e) {
    result = e.best();
    rec.exit_code = exit_step_failure;
    rec.status = "diverged";
    rec.message = e.what();
  } catch (const singular_matrix& e) {
    rec.exit_code = exit_singular_jacobian;
    rec.status = to_string(tracking_failure::singular_jacobian);
    rec.message = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  rec.seconds = {{"newton", wall}, {"total", wall}};
  rec.t_final = "0";
  if (result) {
    for (const auto& s : result->x) {
      rec.point.push_back(to_decimal(s[0]));
      auto& coeffs = rec.series.emplace_back();
      for (std::size_t k = 0; k <= s.degree(); ++k) coeffs.push_back(to_decimal(s[k]));
    }
    const auto& rep = result->report;
    if (rep.residual) rec.residual = xprec::to_string(*rep.residual);
    for (std::size_t i = 0; i < result->x.size(); ++i) {
      out << "x" << i << "(t):\n";
      for (std::size_t k = 0; k <= result->x[i].degree(); ++k)
        out << "  t^" << k << "  (" << xprec::format_real(result->x[i][k].re, 20) << ", "
            << xprec::format_real(result->x[i][k].im, 20) << ")\n";
    }
    out << rep.iterations << " iterations";
    if (rep.residual) out << ", residual " << short_real(*rep.residual);
    if (rep.condition) out << ", condition " << short_real(*rep.condition);
    out << "\n";
  }
  if (rec.exit_code != exit_success) err << "error: " << rec.message << "\n";
  out << "status " << rec.status << "\n";
  write_record(g, rec);
  return rec.exit_code;
}

template <xprec::working_real R>
int cmd_generate(const global_options& g, const generate_options& o, std::ostream& out) {
  const std::size_t degree = g.degree.value_or(0);
  auto write_point = [&](const cvector<R>& x) {
    if (!o.point_out.empty()) emit(o.point_out, format_point<R>(x), out);
  };
  try {
    if (o.kind == "cyclic") {
      if (o.n < 2) throw usage_error("generate cyclic needs --n >= 2");
      emit(g.out, format_system(generate_cyclic<R>(o.n, degree)), out);
      write_point(cyclic_root_of_unity_point<R>(o.n));
    } else if (o.kind == "random") {
      if (o.n == 0 || o.terms == 0 || o.max_exponent == 0)
        throw usage_error("generate random needs positive --n, --terms and --maxexp");
      auto sys = generate_random<R>(o.n, o.terms, o.max_exponent, g.seed, degree);
      if (!o.point_out.empty()) {
        const auto x0 = random_point<R>(o.n, g.seed + 1);
        sys = recenter_at(sys, std::span<const xprec::xcomplex<R>>(x0));
        write_point(x0);
      }
      emit(g.out, format_system(sys), out);
    } else {
      const auto text = read_file(o.input, "input system");
      sparse_system<R> sys = [&] {
        try {
          return parse_system<R>(text);
        } catch (const parse_error& e) {
          throw usage_error(e.what());
        }
      }();
      if (sys.is_homotopy()) throw usage_error("the input already depends on t");
      if (degree > 0) sys = with_degree(sys, degree);
      emit(g.out, format_system(make_newton_homotopy(sys)), out);
    }
  } catch (const domain_error& e) {
    throw usage_error(e.what());
  }
  return exit_success;
}

/// FNV-1a over the bit patterns of every limb, so equal digests mean
/// bitwise equal results.
class result_digest {
 public:
  template <xprec::working_real R>
  void add(const R& x) {
    for (int i = 0; i < xprec::real_traits<R>::limbs; ++i) mix(std::bit_cast<std::uint64_t>(xprec::limb(x, i)));
  }
  template <xprec::working_real R>
  void add(const xprec::xcomplex<R>& z) {
    add(z.re);
    add(z.im);
  }
  template <xprec::working_real R>
  void add(const truncated_series<R>& s) {
    for (std::size_t k = 0; k <= s.degree(); ++k) add(s[k]);
  }
  template <xprec::working_real R>
  void add(const matrix<R>& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) add(a(i, j));
  }
  template <class T>
  void add_all(const std::vector<T>& v) {
    for (const auto& x : v) add(x);
  }

  std::uint64_t value() const noexcept { return h_; }
  friend bool operator==(const result_digest&, const result_digest&) = default;

 private:
  void mix(std::uint64_t bits) {
    for (int b = 0; b < 8; ++b) {
      h_ ^= (bits >> (8 * b)) & 0xff;
      h_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct bench_row {
  std::size_t threads = 1;
  double seconds = 0;
  std::uint64_t digest = 0;
};

struct bench_table {
  std::string stage;
  std::size_t n = 0;
  std::size_t degree = 0;
  std::vector<bench_row> rows;
};

/// Random or cyclic system recentered at a random point of the unit torus
/// and turned into a Newton homotopy of degree d, plus the inputs every
/// stage consumes. Built once, outside the timed region.
template <xprec::working_real R>
struct bench_problem {
  sparse_system<R> hom;
  cvector<R> x0;

  static bench_problem make(const bench_options& o, std::size_t degree, std::uint64_t seed) {
    const std::size_t n = o.cyclic ? o.cyclic : o.n;
    const auto base = o.cyclic ? generate_cyclic<R>(o.cyclic) : generate_random<R>(n, o.terms, o.max_exponent, seed);
    auto x0 = random_point<R>(n, seed + 1);
    auto hom = with_degree(make_newton_homotopy(recenter_at(base, std::span<const xprec::xcomplex<R>>(x0))), degree);
    return {std::move(hom), std::move(x0)};
  }

  /// x0 plus random higher coefficients decaying like 2^-k.
  std::vector<truncated_series<R>> random_series(std::uint64_t seed) const {
    random_source rng(seed + 2);
    std::vector<truncated_series<R>> x;
    for (const auto& z : x0) {
      truncated_series<R> s(hom.degree());
      s[0] = z;
      R scale(1.0);
      for (std::size_t k = 1; k <= hom.degree(); ++k) {
        scale = scale * R(0.5);
        s[k] = rng.unit_circle<R>() * scale;
      }
      x.push_back(std::move(s));
    }
    return x;
  }
};

template <xprec::working_real R>
std::function<void(work_crew&, result_digest&)> bench_kernel(const std::string& stage, const bench_problem<R>& pb,
                                                              pade_degrees pd, std::uint64_t seed) {
  const std::size_t n = pb.hom.variables();
  const std::size_t d = pb.hom.degree();
  newton_config<R> ncfg;
  ncfg.degree = d;
  ncfg.estimate_condition = false;
  ncfg.compute_residual = false;

  if (stage == "evaldiff") {
    return [&pb, x = pb.random_series(seed)](work_crew& crew, result_digest& h) {
      const auto ev = eval_diff_system(pb.hom, x, crew);
      h.add_all(ev.values);
      h.add_all(ev.jacobian);
    };
  }
  if (stage == "hessians") {
    return [&pb](work_crew& crew, result_digest& h) {
      for (const auto& r : hessian_point(pb.hom, pb.x0, crew)) {
        h.add(r.value);
        h.add_all(r.gradient);
        h.add(r.hessian);
      }
    };
  }
  if (stage == "blocksolve") {
    random_source rng(seed + 3);
    block_toeplitz_system<R> sys;
    for (std::size_t k = 0; k <= d; ++k) {
      sys.blocks.push_back(random_matrix<R>(n, n, rng));
      cvector<R> b(n);
      for (auto& z : b) z = rng.in_square<R>();
      sys.rhs.push_back(std::move(b));
    }
    return [sys = std::move(sys)](work_crew& crew, result_digest& h) {
      for (const auto& x : solve_pipelined(sys, crew)) h.add_all(x);
    };
  }
  if (stage == "newton") {
    return [&pb, ncfg](work_crew& crew, result_digest& h) {
      h.add_all(newton_series(pb.hom, pb.x0, ncfg, crew).x);
    };
  }
  if (stage == "pade") {
    return [x = pb.random_series(seed), pd](work_crew& crew, result_digest& h) {
      for (const auto& a : pade_vector(x, pd, crew).approximants) {
        h.add_all(a.p);
        h.add_all(a.q);
      }
    };
  }
  if (stage == "shift") {
    return [&pb](work_crew& crew, result_digest& h) {
      const auto shifted = shift_homotopy(pb.hom, xprec::xcomplex<R>(R(0.125)), crew);
      for (const auto& p : shifted.polynomials())
        for (const auto& m : p) h.add(m.coefficient);
    };
  }
  if (stage == "C") {
    return [&pb](work_crew& crew, result_digest& h) { h.add(detail::curvature_at(pb.hom, pb.x0, crew)); };
  }
  return [&pb, ncfg](work_crew& crew, result_digest& h) {
    const auto x = newton_series(pb.hom, pb.x0, ncfg, crew).x;
    const auto r = vector_fabry(x);
    h.add(r.radius);
    h.add(r.z);
  };
}

template <xprec::working_real R>
bench_table run_bench(const global_options& g, const bench_options& o, std::ostream& err) {
  if (std::find(bench_stages.begin(), bench_stages.end(), o.stage) == bench_stages.end())
    throw usage_error("unknown bench stage '" + o.stage + "'");
  if (o.repeat == 0) throw usage_error("--repeat must be positive");
  if (!o.cyclic && (o.n == 0 || o.terms == 0 || o.max_exponent == 0))
    throw usage_error("bench needs positive --n, --terms and --maxexp");
  if (o.cyclic == 1) throw usage_error("--cyclic needs n >= 2");
  auto threads = capped_threads(g, err);
  if (std::find(threads.begin(), threads.end(), std::size_t{1}) == threads.end()) threads.insert(threads.begin(), 1);
  const std::size_t degree = g.degree.value_or(8);
  if (degree == 0) throw usage_error("--degree must be positive");
  const auto pd = parse_pade(g.pade, degree);
  if (pd.numerator + pd.denominator > degree) throw usage_error("K + L must not exceed the degree");

  const auto pb = bench_problem<R>::make(o, degree, g.seed);
  const auto kernel = bench_kernel<R>(o.stage, pb, pd, g.seed);
  bench_table table{o.stage, pb.hom.variables(), degree, {}};
  for (const auto p : threads) {
    work_crew crew(p);
    bench_row row{p, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t r = 0; r < o.repeat; ++r) {
      result_digest h;
      const auto start = std::chrono::steady_clock::now();
      kernel(crew, h);
      row.seconds = std::min(row.seconds, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      row.digest = h.value();
    }
    table.rows.push_back(row);
  }
  return table;
}

inline std::string bench_csv(const bench_table& t) {
  std::ostringstream csv;
  csv << "stage,n,d,p,seconds\n" << std::setprecision(9);
  for (const auto& r : t.rows) csv << t.stage << "," << t.n << "," << t.degree << "," << r.threads << "," << r.seconds << "\n";
  return csv.str();
}

inline void print_bench(const bench_table& t, const global_options& g, std::ostream& out, std::ostream& err) {
  out << "bench " << t.stage << ": n = " << t.n << ", d = " << t.degree << ", precision " << g.precision << "\n";
  // The radius table is laid out per degree as well.
  const bool per_degree = t.stage == "R";
  out << (per_degree ? "   d" : "") << "   p        time    S(p)     E(p)\n";
  const double serial = t.rows.front().seconds;
  for (const auto& r : t.rows) {
    const double s = r.threads == 1 ? 1.0 : serial / r.seconds;
    if (per_degree) out << std::setw(4) << t.degree;
    out << std::setw(4) << r.threads << std::fixed << std::setprecision(6) << std::setw(12) << r.seconds
        << std::setprecision(2) << std::setw(8) << s << std::setprecision(1) << std::setw(8)
        << 100.0 * s / static_cast<double>(r.threads) << "%\n"
        << std::defaultfloat;
  }
  out << "digest " << std::hex << std::setw(16) << std::setfill('0') << t.rows.front().digest << std::dec
      << std::setfill(' ') << "\n";
  for (const auto& r : t.rows)
    if (r.digest != t.rows.front().digest) err << "warning: results at p = " << r.threads << " differ from p = 1\n";
}

template <xprec::working_real R>
int cmd_bench(const global_options& g, const bench_options& o, std::ostream& out, std::ostream& err) {
  const auto table = run_bench<R>(g, o, err);
  print_bench(table, g, out, err);
  if (!g.out.empty()) emit(g.out, bench_csv(table), out);
  return exit_success;
}

template <class Body>
int with_precision(const std::string& precision, Body&& body) {
  if (precision == "d") return body.template operator()<double>();
  if (precision == "dd") return body.template operator()<xprec::dd_real>();
  if (precision == "qd") return body.template operator()<xprec::qd_real>();
  throw usage_error("unknown precision '" + precision + "'");
}

/// Parses args (without the program name) and runs the chosen subcommand.
/// Returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Power-series path tracker for polynomial homotopies", "pstrack");
  app.require_subcommand(1);
  global_options g;
  app.add_option("--precision", g.precision, "Working precision")
      ->check(CLI::IsMember({"d", "dd", "qd"}))
      ->capture_default_str();
  app.add_option("--degree", g.degree, "Truncation degree of the series (default 8; 0 for generate)");
  app.add_option("--threads", g.threads, "Worker count, or a list like 1,2,4 for bench")->delimiter(',');
  app.add_option("--beta", g.beta, "Step size factor")->capture_default_str();
  app.add_option("--minstep", g.min_step, "Smallest step before giving up");
  app.add_option("--pade", g.pade, "Pade degrees K,L");
  app.add_option("--target", g.target, "Final value of t")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for random constructions")->capture_default_str();
  app.add_option("--out", g.out, "Output file: system, run record (JSON) or bench CSV");
  app.add_flag("--oversubscribe", g.oversubscribe, "Do not cap --threads at the hardware parallelism");

  generate_options gen;
  auto* generate = app.add_subcommand("generate", "Write a system file")->require_subcommand(1)->fallthrough();
  auto* gen_cyclic = generate->add_subcommand("cyclic", "Cyclic n-roots system")->fallthrough();
  gen_cyclic->add_option("--n", gen.n, "Number of variables")->required();
  gen_cyclic->add_option("--point-out", gen.point_out, "Also write a root of the system");
  auto* gen_random = generate->add_subcommand("random", "Random sparse system")->fallthrough();
  gen_random->add_option("--n", gen.n, "Number of variables")->required();
  gen_random->add_option("--terms", gen.terms, "Monomials per polynomial")->capture_default_str();
  gen_random->add_option("--maxexp", gen.max_exponent, "Largest exponent")->capture_default_str();
  gen_random->add_option("--point-out", gen.point_out,
                         "Write a random point and shift the constants so that it is a root");
  auto* gen_newton = generate->add_subcommand("newton-homotopy", "Add t to every polynomial")->fallthrough();
  gen_newton->add_option("--in", gen.input, "Input system file")->required();

  path_options paths;
  auto* track = app.add_subcommand("track", "Track a path from t = 0 to the target")->fallthrough();
  track->add_option("--system", paths.system, "Homotopy file")->required();
  track->add_option("--start", paths.start, "Start point file")->required();
  auto* newton = app.add_subcommand("newton", "Power series of the path at t = 0")->fallthrough();
  newton->add_option("--system", paths.system, "Homotopy file")->required();
  newton->add_option("--start", paths.start, "Start point file")->required();

  bench_options bo;
  auto* bench = app.add_subcommand("bench", "Time one stage for a list of thread counts")->fallthrough();
  bench->add_option("stage", bo.stage, "Stage to time")->required()->check(CLI::IsMember(bench_stages));
  bench->add_option("--n", bo.n, "Dimension of the random system")->capture_default_str();
  bench->add_option("--cyclic", bo.cyclic, "Use the cyclic n-roots system of this size");
  bench->add_option("--terms", bo.terms, "Monomials per polynomial")->capture_default_str();
  bench->add_option("--maxexp", bo.max_exponent, "Largest exponent")->capture_default_str();
  bench->add_option("--repeat", bo.repeat, "Runs per thread count; the fastest is reported")->capture_default_str();

  std::vector<std::string> argv_store{"pstrack"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_success : exit_usage;
  }

  try {
    if (generate->parsed()) {
      gen.kind = gen_cyclic->parsed() ? "cyclic" : gen_random->parsed() ? "random" : "newton-homotopy";
      return with_precision(g.precision, [&]<class R>() { return cmd_generate<R>(g, gen, out); });
    }
    if (track->parsed()) return with_precision(g.precision, [&]<class R>() { return cmd_track<R>(g, paths, out, err); });
    if (newton->parsed())
      return with_precision(g.precision, [&]<class R>() { return cmd_newton<R>(g, paths, out, err); });
    return with_precision(g.precision, [&]<class R>() { return cmd_bench<R>(g, bo, out, err); });
  } catch (const usage_error& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_internal;
  }
}

}  // namespace pstrack::cli
