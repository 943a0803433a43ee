// Batch front end: runs certification and experiment tasks from a JSON plan
// or from direct subcommand flags, writing one CSV table per task plus a
// JSON summary. Exit codes: 0 all assertion-bearing tasks pass, 1 some task
// failed, 2 usage or parse error.

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dbrk/dbrk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dbrk;

namespace {

// ---------------------------------------------------------------------------
// formatting and file plumbing
// ---------------------------------------------------------------------------

std::string fmt(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string fmt_bool(bool v) { return v ? "1" : "0"; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
    return os.str();
  }
};

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::parse, "cannot write output file " + path.string());
    out << content;
  }
  fs::rename(tmp, path);
}

struct TaskResult {
  TaskResult() = default;
  explicit TaskResult(std::string t) : task(std::move(t)) {}

  std::string task;
  bool pass = true;
  bool asserting = true;  // report-only tasks never fail the run
  double max_residual = 0.0;
  long runtime_ms = 0;
  std::string out_path;
  std::string message;
};

json summary_json(const TaskResult& r) {
  json j;
  j["task"] = r.task;
  j["pass"] = r.pass;
  j["max_residual"] = r.max_residual;
  j["runtime_ms"] = r.runtime_ms;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

void emit(const TaskResult& r, const Table& table) {
  if (!r.out_path.empty()) {
    write_atomic(r.out_path, table.render());
    fs::path s(r.out_path);
    s.replace_extension(".summary.json");
    write_atomic(s, summary_json(r).dump(2) + "\n");
  }
}

UnitBallFunction load_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse, "cannot read function description " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_function_string(ss.str());
}

std::vector<Rational> dyadic_schedule(int kmax) {
  std::vector<Rational> out;
  for (int k = 1; k <= kmax; ++k) out.emplace_back(Rational(1, BigInt(1) << k));
  return out;
}

GaussianRational parse_complex_pair(const std::string& re, const std::string& im) {
  return {parse_rational(re), parse_rational(im)};
}

// "re,im" with rational or decimal components
GaussianRational parse_complex_arg(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    fail(errc::parse, "complex points are written re,im (got '" + s + "')");
  return parse_complex_pair(s.substr(0, comma), s.substr(comma + 1));
}

// ---------------------------------------------------------------------------
// task implementations
// ---------------------------------------------------------------------------

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 start)
        .count();
  }
};

TaskResult run_anr(unsigned n_max, const std::string& out) {
  Timer timer;
  TaskResult res("anr");
  res.out_path = out;
  Table t;
  t.header = {"kind", "n", "r", "s", "value", "reference", "pass"};
  bool all = true;
  for (unsigned n = 0; n <= n_max; ++n) {
    for (unsigned r = 0; r <= 2 * n + 1; ++r) {
      BigInt v = anr(n, r);
      BigInt closed = anr_closed(n, r);
      BigInt anti = anr(n, 2 * n + 1 - r);
      bool ok = (v == closed) && (anti == -v);
      all = all && ok;
      t.rows.push_back({"anr", std::to_string(n), std::to_string(r), "",
                        v.convert_to<std::string>(), closed.convert_to<std::string>(),
                        fmt_bool(ok)});
    }
  }
  for (unsigned n = 1; n <= std::min(n_max, 12u); ++n) {
    for (unsigned s = n + 1; s <= 2 * n; ++s) {
      for (unsigned r = 0; r <= n; ++r) {
        Rational v = anrs(n, r, s);
        Rational ref = anrs_gamma(n, r, s);
        bool ok = (s % 2 == 0) ? (v == ref) : (v == 0 && ref == 0);
        all = all && ok;
        t.rows.push_back({s % 2 ? "anrs_odd" : "anrs_gamma", std::to_string(n), std::to_string(r),
                          std::to_string(s), rational_to_string(v), rational_to_string(ref),
                          fmt_bool(ok)});
      }
    }
  }
  res.pass = all;
  res.max_residual = all ? 0.0 : 1.0;
  res.runtime_ms = timer.ms();
  emit(res, t);
  return res;
}

TaskResult run_hyp_identities(unsigned n_max, double tol, const std::string& out) {
  Timer timer;
  TaskResult res("identities");
  res.out_path = out;
  Table t;
  t.header = {"check", "a", "b", "c", "z", "m", "residual", "exact", "pass"};
  bool all = true;
  double worst = 0.0;
  auto push = [&](const std::string& check, const std::string& a, const std::string& b,
                  const std::string& c, const std::string& z, const std::string& m, double resid,
                  bool exact, bool ok) {
    all = all && ok;
    worst = std::max(worst, resid);
    t.rows.push_back({check, a, b, c, z, m, fmt(resid), fmt_bool(exact), fmt_bool(ok)});
  };

  const std::vector<Rational> smalls = {Rational(1, 2), Rational(1),    Rational(3, 2),
                                        Rational(2),    Rational(5, 2), Rational(3)};
  for (unsigned n = 0; n <= n_max; ++n) {
    Rational a = -Rational(n);
    for (const auto& b : smalls) {
      for (const auto& c : smalls) {
        if (!(b - a > -1)) continue;
        Rational r = check_pfaff(a, b, c);
        push("pfaff", rational_to_string(a), rational_to_string(b), rational_to_string(c), "1/2",
             "", std::abs(to_double(r)), true, r == 0);
      }
    }
  }
  const std::vector<Rational> zs = {Rational(1, 2), Rational(-3, 4)};
  for (unsigned n = 0; n <= n_max; ++n) {
    Rational a = -Rational(n);
    for (unsigned m = 0; m <= 8; ++m) {
      for (const auto& b : {Rational(1, 2), Rational(3, 2), Rational(5, 2)}) {
        for (const auto& c : {Rational(1, 2), Rational(3, 2), Rational(5, 2)}) {
          for (const auto& z : zs) {
            Rational r = check_zeng_lemma(a, b, c, m, z);
            push("zeng", rational_to_string(a), rational_to_string(b), rational_to_string(c),
                 rational_to_string(z), std::to_string(m), std::abs(to_double(r)), true, r == 0);
          }
        }
      }
    }
  }
  for (unsigned n = 0; n <= n_max; ++n) {
    Rational a = -Rational(n);
    for (const auto& b : smalls) {
      Rational r = check_bailey_exact(a, b);
      push("bailey", rational_to_string(a), rational_to_string(b), "", "1/2", "",
           std::abs(to_double(r)), true, r == 0);
    }
  }
  {
    const std::vector<std::array<Rational, 3>> params = {
        {Rational(1), Rational(1), Rational(3)},
        {Rational(1, 2), Rational(3, 2), Rational(2)},
        {Rational(2), Rational(1), Rational(7, 2)},
        {Rational(1), Rational(2), Rational(4)},
        {Rational(3, 2), Rational(1, 2), Rational(3)}};
    std::vector<Rational> zgrid;
    for (int num = -10; num <= 10; ++num) {
      if (num == 0) continue;
      zgrid.emplace_back(Rational(num, 20));
    }
    for (const auto& [a, b, c] : params) {
      for (const auto& z : zgrid) {
        double r = check_euler(a, b, c, z, tol);
        push("euler", rational_to_string(a), rational_to_string(b), rational_to_string(c),
             rational_to_string(z), "", r, false, r < tol);
      }
    }
  }
  for (unsigned n = 0; n <= 30; ++n) {
    BigInt s = binomial_half_sum(n);
    BigInt ref = BigInt(1) << (2 * n);
    push("half_sum", std::to_string(n), "", "", "", "", s == ref ? 0.0 : 1.0, true, s == ref);
  }
  res.pass = all;
  res.max_residual = worst;
  res.runtime_ms = timer.ms();
  emit(res, t);
  return res;
}

template <class S>
void coefficient_rows(const UnitBallFunction& b, const Rational& x0, unsigned n, double tol,
                      Table& t, bool& all, double& worst) {
  S x = field<S>::from(x0);
  auto spec = boundary_spec(x, n);
  auto jet = derivative_jet(b, x, 2 * n + 1);
  for (const auto& [l, resid] : coefficient_identities(spec, jet)) {
    bool ok = resid <= tol;
    all = all && ok;
    worst = std::max(worst, resid);
    t.rows.push_back({"coefficient", std::to_string(l), fmt(resid), fmt_bool(ok)});
  }
  auto suite = lambda_suite(spec, jet);
  auto push = [&](const std::string& kind, unsigned s, double resid) {
    bool ok = resid <= tol;
    all = all && ok;
    worst = std::max(worst, resid);
    t.rows.push_back({kind, std::to_string(s), fmt(resid), fmt_bool(ok)});
  };
  push("lambda0", 0, suite.lambda0_residual);
  for (unsigned s = 1; s <= 2 * n; ++s)
    push("lambda_mid", s, std::abs(field<S>::to_cdouble(suite.lambda[s])));
  push("lambda_norm", 2 * n + 1, suite.norm_relation_residual);
}

TaskResult run_coeff_identities(const UnitBallFunction& b, const Rational& x0, unsigned n,
                                double tol, bool exact, const std::string& out) {
  Timer timer;
  TaskResult res("identities");
  res.out_path = out;
  Table t;
  t.header = {"kind", "index", "residual", "pass"};
  bool all = true;
  double worst = 0.0;
  if (exact) {
    if (!b.exact_capable()) fail(errc::exact_unsupported, "function is not exactly representable");
    coefficient_rows<GaussianRational>(b, x0, n, tol, t, all, worst);
  } else {
    coefficient_rows<CDouble>(b, x0, n, tol, t, all, worst);
  }
  res.pass = all;
  res.max_residual = worst;
  res.runtime_ms = timer.ms();
  emit(res, t);
  return res;
}

TaskResult run_condition(const UnitBallFunction& b, const Rational& x0, unsigned n,
                         std::optional<double> tail, const std::string& out) {
  Timer timer;
  TaskResult res("condition");
  res.asserting = false;  // reporting, not asserting
  res.out_path = out;
  auto rep = ahern_clark_report(b, x0, n, {}, tail);
  Table t;
  t.header = {"x0",       "n",
              "blaschke", "singular",
              "log",      "log_error",
              "total",    "finite",
              "declared_tail_bound"};
  t.rows.push_back({rational_to_string(x0), std::to_string(n), fmt(rep.blaschke_term),
                    fmt(rep.singular_term), fmt(rep.log_term), fmt(rep.log_term_error),
                    fmt(rep.total), fmt_bool(rep.finite),
                    rep.declared_tail_bound ? fmt(*rep.declared_tail_bound) : ""});
  res.runtime_ms = timer.ms();
  emit(res, t);
  return res;
}

TaskResult run_represent(const UnitBallFunction& b, const GaussianRational& w, unsigned m,
                         bool boundary_mode, const GaussianRational& omega, const Rational& x0,
                         unsigned n, double tol, const std::string& out) {
  Timer timer;
  TaskResult res("represent");
  res.out_path = out;
  Table t;
  t.header = {"mode",   "w_re",         "w_im",         "m",
              "base",   "n",            "value_re",     "value_im",
              "ref_re", "ref_im",       "rel_residual", "error_estimate",
              "pass"};
  CDouble wd = to_cdouble(w);
  auto f = make_kernel_pair(b, wd, m);
  RepresentationResult rep;
  CDouble reference;
  std::string base_str;
  if (!boundary_mode) {
    CDouble od = to_cdouble(omega);
    rep = representation_interior(b, f, od, n);
    reference = kernel_derivative_closed_form(f, derivative_jet(b, od, n), n);
    base_str = fmt(od.real()) + "+" + fmt(od.imag()) + "i";
  } else {
    rep = representation_boundary(b, f, x0, n);
    std::vector<double> sched;
    std::vector<CDouble> vals;
    for (int k = 4; k <= 11; ++k) {
      double tt = std::pow(2.0, -k);
      sched.push_back(tt);
      auto zj = derivative_jet(b, CDouble(to_double(x0), tt), n);
      vals.push_back(kernel_derivative_closed_form(f, zj, n));
    }
    reference = extrapolate_to_zero(sched, vals).value;
    base_str = rational_to_string(x0);
  }
  double rel = std::abs(rep.value - reference) / std::max(1e-30, std::abs(reference));
  bool ok = rel < tol;
  t.rows.push_back({boundary_mode ? "boundary" : "interior", fmt(wd.real()), fmt(wd.imag()),
                    std::to_string(m), base_str, std::to_string(n), fmt(rep.value.real()),
                    fmt(rep.value.imag()), fmt(reference.real()), fmt(reference.imag()), fmt(rel),
                    fmt(rep.error_estimate), fmt_bool(ok)});
  res.pass = ok;
  res.max_residual = rel;
  res.runtime_ms = timer.ms();
  emit(res, t);
  return res;
}

TaskResult run_norm(const UnitBallFunction& b, const Rational& x0, unsigned n,
                    std::optional<GaussianRational> omega, double tol, const std::string& out) {
  Timer timer;
  TaskResult res("norm");
  res.out_path = out;
  Table t;
  t.header = {"method", "value", "rel_residual", "pass"};
  bool all = true;
  double worst = 0.0;

  double formula;
  if (b.exact_capable()) {
    auto spec = boundary_spec(GaussianRational(x0), n);
    formula = norm_sq_boundary(spec, derivative_jet(b, GaussianRational(x0), 2 * n + 1)).value();
  } else {
    auto spec = boundary_spec(CDouble(to_double(x0), 0.0), n);
    formula =
        norm_sq_boundary(spec, derivative_jet(b, CDouble(to_double(x0), 0.0), 2 * n + 1)).value();
  }
  t.rows.push_back({"formula", fmt(formula), "0", "1"});

  if (b.inner()) {
    auto quad = boundary_norm_l2(b, x0, n);
    double rel = std::abs(quad.value.real() - formula) / std::max(1e-30, formula);
    bool ok = rel < tol && quad.converged;
    all = all && ok;
    worst = std::max(worst, rel);
    t.rows.push_back({"l2_quadrature", fmt(quad.value.real()), fmt(rel), fmt_bool(ok)});
  }

  if (omega) {
    CDouble od = to_cdouble(*omega);
    auto ispec = interior_spec(od, n);
    auto ijet = derivative_jet(b, od, n);
    auto inorm = norm_sq_interior(ispec, ijet);
    CDouble via_deriv = kernel_b_z_derivative(ispec, ijet, derivative_jet(b, od, n), n);
    double rel = std::abs(inorm.value() - via_deriv.real()) / std::max(1e-30, inorm.value());
    bool ok = rel < tol;
    all = all && ok;
    worst = std::max(worst, rel);
    t.rows.push_back({"interior_at_omega", fmt(inorm.value()), fmt(rel), fmt_bool(ok)});
  }
  res.pass = all;
  res.max_residual = worst;
  res.runtime_ms = timer.ms();
  emit(res, t);
  return res;
}

template <class S>
ConvergenceTrace trace_for(const UnitBallFunction& b, const Rational& x0, unsigned n, int kmax) {
  return norm_convergence_trace<S>(b, x0, n, dyadic_schedule(kmax));
}

TaskResult run_converge(const UnitBallFunction& b, const Rational& x0, unsigned n, int kmax,
                        const std::string& mode, double threshold, const std::string& out) {
  Timer timer;
  TaskResult res("converge");
  res.out_path = out;
  ConvergenceTrace trace;
  if (mode == "exact") {
    trace = trace_for<GaussianRational>(b, x0, n, kmax);
  } else if (mode == "bigfloat") {
    set_precision_bits();
    trace = trace_for<CBig>(b, x0, n, kmax);
  } else {
    trace = trace_for<CDouble>(b, x0, n, kmax);
  }
  Table t;
  t.header = {"t", "interior_norm_sq", "diff_norm_sq", "cancellation_bits", "interior_pi_exact",
              "diff_pi_exact"};
  for (const auto& row : trace.rows) {
    t.rows.push_back({rational_to_string(row.t), fmt(row.interior_norm_sq), fmt(row.diff_norm_sq),
                      fmt(row.cancellation_bits),
                      row.interior_pi ? rational_to_string(*row.interior_pi) : "",
                      row.diff_pi ? rational_to_string(*row.diff_pi) : ""});
  }
  bool decreasing = true;
  std::size_t last = trace.rows.size();
  for (std::size_t i = last > 6 ? last - 6 : 1; i < last; ++i)
    decreasing = decreasing && trace.rows[i].diff_norm_sq < trace.rows[i - 1].diff_norm_sq;
  double final_diff = trace.rows.empty() ? 0.0 : trace.rows.back().diff_norm_sq;
  res.pass = decreasing && final_diff < threshold;
  res.max_residual = final_diff;
  res.runtime_ms = timer.ms();
  emit(res, t);
  return res;
}

TaskResult run_probe(const UnitBallFunction& b, const Rational& x0, unsigned n, int kmax,
                     const std::string& out) {
  Timer timer;
  TaskResult res("probe");
  res.asserting = false;  // the open question is probed, never asserted
  res.out_path = out;
  Table t;
  t.header = {"kind", "index", "value_re", "value_im"};
  if (b.exact_capable()) {
    GaussianRational x(x0);
    auto spec = boundary_spec(x, n);
    auto jet = derivative_jet(b, x, 2 * n + 1);
    for (const auto& [s, v] : odd_s_probe(spec, jet))
      t.rows.push_back({"odd_s", std::to_string(s), fmt(v.real()), fmt(v.imag())});
  } else {
    CDouble x(to_double(x0), 0.0);
    auto spec = boundary_spec(x, n);
    auto jet = derivative_jet(b, x, 2 * n + 1);
    for (const auto& [s, v] : odd_s_probe(spec, jet))
      t.rows.push_back({"odd_s", std::to_string(s), fmt(v.real()), fmt(v.imag())});
  }
  for (const auto& row : taylor_remainder_check(b, x0, n, dyadic_schedule(kmax)))
    t.rows.push_back({"taylor_remainder", fmt(row.t), fmt(row.abs_epsilon), "0"});
  res.runtime_ms = timer.ms();
  emit(res, t);
  return res;
}

// ---------------------------------------------------------------------------
// plan runner
// ---------------------------------------------------------------------------

Rational plan_rational(const json& j, const char* key) {
  if (!j.contains(key)) fail(errc::parse, std::string("task needs \"") + key + "\"");
  if (j[key].is_string()) return parse_rational(j[key].get<std::string>());
  if (j[key].is_number_integer()) return Rational(j[key].get<long long>());
  fail(errc::parse, std::string("\"") + key + "\" must be a rational string");
}

GaussianRational plan_complex(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
    fail(errc::parse, std::string("\"") + key + "\" must be a [re, im] pair");
  return {plan_rational(json{{"v", j[key][0]}}, "v"), plan_rational(json{{"v", j[key][1]}}, "v")};
}

TaskResult run_plan_task(const json& task, const std::optional<UnitBallFunction>& fn) {
  auto need_fn = [&]() -> const UnitBallFunction& {
    if (!fn) fail(errc::parse, "this task kind needs a \"function\" in the plan");
    return *fn;
  };
  const std::string kind = task.at("kind").get<std::string>();
  const std::string out = task.value("out", std::string{});
  const double tol = task.value("tol", 0.0);
  if (kind == "anr") return run_anr(task.value("n", 10u), out);
  if (kind == "identities") {
    if (task.contains("x0"))
      return run_coeff_identities(need_fn(), plan_rational(task, "x0"), task.value("n", 1u),
                                  tol > 0 ? tol : 1e-10, task.value("exact", need_fn().exact_capable()),
                                  out);
    return run_hyp_identities(task.value("n", 10u), tol > 0 ? tol : 1e-12, out);
  }
  if (kind == "condition") {
    std::optional<double> tail;
    if (task.contains("tail_bound")) tail = task["tail_bound"].get<double>();
    return run_condition(need_fn(), plan_rational(task, "x0"), task.value("n", 0u), tail, out);
  }
  if (kind == "represent") {
    bool boundary_mode = task.contains("x0");
    GaussianRational omega{Rational(0), Rational(1)};
    Rational x0(0);
    if (boundary_mode) {
      x0 = plan_rational(task, "x0");
    } else {
      omega = plan_complex(task, "omega");
    }
    return run_represent(need_fn(), plan_complex(task, "w"), task.value("m", 0u), boundary_mode,
                         omega, x0, task.value("n", 0u),
                         tol > 0 ? tol : (boundary_mode ? 1e-6 : 1e-8), out);
  }
  if (kind == "norm") {
    std::optional<GaussianRational> omega;
    if (task.contains("omega")) omega = plan_complex(task, "omega");
    return run_norm(need_fn(), plan_rational(task, "x0"), task.value("n", 0u), omega,
                    tol > 0 ? tol : 1e-8, out);
  }
  if (kind == "converge") {
    std::string mode = "double";
    if (task.value("exact", false)) mode = "exact";
    if (task.value("precision", 0) > 53) mode = "bigfloat";
    return run_converge(need_fn(), plan_rational(task, "x0"), task.value("n", 0u),
                        task.value("kmax", 12), mode, task.value("threshold", 1e-8), out);
  }
  if (kind == "probe")
    return run_probe(need_fn(), plan_rational(task, "x0"), task.value("n", 1u),
                     task.value("kmax", 10), out);
  fail(errc::parse, "unknown task kind '" + kind + "'");
}

int run_plan(const std::string& path, int jobs_override) {
  json plan;
  {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot read plan " << path << "\n";
      return 2;
    }
    plan = json::parse(in, nullptr, false);
    if (plan.is_discarded()) {
      std::cerr << "error: plan " << path << " is not valid JSON\n";
      return 2;
    }
  }
  std::optional<UnitBallFunction> fn;
  try {
    if (plan.contains("function")) fn = parse_function(plan["function"]);
    if (plan.contains("function_file"))
      fn = load_function(plan["function_file"].get<std::string>());
    if (!plan.contains("tasks") || !plan["tasks"].is_array()) {
      std::cerr << "error: plan needs a \"tasks\" array\n";
      return 2;
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const auto& tasks = plan["tasks"];
  int jobs = jobs_override > 0 ? jobs_override : plan.value("jobs", 1);
  std::vector<std::future<TaskResult>> futures(tasks.size());
  std::vector<TaskResult> results(tasks.size());
  std::size_t next = 0;
  while (next < tasks.size()) {
    std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)),
                                              tasks.size() - next);
    for (std::size_t i = 0; i < batch; ++i) {
      const json& spec = tasks[next + i];
      futures[next + i] = std::async(std::launch::async, [&spec, &fn] {
        set_precision_bits();
        try {
          return run_plan_task(spec, fn);
        } catch (const error& e) {
          TaskResult r(spec.value("kind", std::string("?")));
          r.pass = false;
          r.max_residual = std::numeric_limits<double>::infinity();
          r.message = e.what();
          return r;
        }
      });
    }
    for (std::size_t i = 0; i < batch; ++i) results[next + i] = futures[next + i].get();
    next += batch;
  }

  bool all = true;
  json out = json::array();
  for (const auto& r : results) {
    out.push_back(summary_json(r));
    if (r.asserting) all = all && r.pass;
  }
  std::cout << out.dump(2) << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"de Branges-Rovnyak derivative-kernel certification toolkit"};
  app.require_subcommand(1);

  std::string plan_path, config_path, out_path;
  std::string x0_str = "0", omega_str = "0,1", w_str = "0,1";
  unsigned n = 0, m = 0;
  int kmax = 12, jobs = 0;
  double tol = 0.0, tail_bound = -1.0, threshold = 1e-8;
  bool exact = false;
  unsigned precision = 0;

  auto* run_cmd = app.add_subcommand("run", "execute a JSON experiment plan");
  run_cmd->add_option("plan", plan_path, "plan file")->required();
  run_cmd->add_option("--jobs", jobs, "max parallel tasks");

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "function description JSON file")->required();
    cmd->add_option("--out", out_path, "output CSV path");
    cmd->add_option("--tol", tol, "residual tolerance");
    return cmd;
  };

  auto* anr_cmd = add_common(app.add_subcommand("anr", "combinatorial identity table"), false);
  anr_cmd->add_option("--n", n, "largest n")->required();

  auto* ids_cmd = app.add_subcommand("identities",
                                     "hypergeometric grids, or coefficient identities at --x0");
  ids_cmd->add_option("--n", n, "largest n (grids) or derivative order (with --x0)")->required();
  ids_cmd->add_option("--config", config_path, "function description JSON file");
  ids_cmd->add_option("--x0", x0_str, "boundary point (enables the coefficient suite)");
  ids_cmd->add_option("--out", out_path, "output CSV path");
  ids_cmd->add_option("--tol", tol, "residual tolerance");
  ids_cmd->add_flag("--exact", exact, "exact Q(i) arithmetic");

  auto* cond_cmd = add_common(app.add_subcommand("condition", "derivative-existence report"), true);
  cond_cmd->add_option("--x0", x0_str, "boundary point")->required();
  cond_cmd->add_option("--n", n, "derivative order")->required();
  cond_cmd->add_option("--tail-bound", tail_bound, "declared truncation tail bound (echoed)");

  auto* rep_cmd = add_common(app.add_subcommand("represent", "integral representation check"), true);
  rep_cmd->add_option("--w", w_str, "kernel base point re,im")->required();
  rep_cmd->add_option("--m", m, "kernel derivative order");
  rep_cmd->add_option("--n", n, "representation derivative order")->required();
  auto* rep_omega = rep_cmd->add_option("--omega", omega_str, "interior point re,im");
  auto* rep_x0 = rep_cmd->add_option("--x0", x0_str, "boundary point");
  rep_x0->excludes(rep_omega);

  auto* norm_cmd = add_common(app.add_subcommand("norm", "boundary norm formula check"), true);
  norm_cmd->add_option("--x0", x0_str, "boundary point")->required();
  norm_cmd->add_option("--n", n, "derivative order")->required();
  norm_cmd->add_option("--omega", omega_str, "also check at this interior point (re,im)");

  auto* conv_cmd = add_common(app.add_subcommand("converge", "radial norm convergence"), true);
  conv_cmd->add_option("--x0", x0_str, "boundary point")->required();
  conv_cmd->add_option("--n", n, "derivative order")->required();
  conv_cmd->add_option("--schedule", kmax, "largest k in t = 2^-k");
  conv_cmd->add_option("--threshold", threshold, "final difference-norm bound");
  conv_cmd->add_flag("--exact", exact, "exact Q(i) arithmetic");
  conv_cmd->add_option("--precision", precision, "MPFR bits (extended-precision path)");

  auto* probe_cmd = add_common(app.add_subcommand("probe", "open-question probes (report only)"), true);
  probe_cmd->add_option("--x0", x0_str, "boundary point")->required();
  probe_cmd->add_option("--n", n, "derivative order")->required();
  probe_cmd->add_option("--schedule", kmax, "largest k in t = 2^-k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  set_precision_bits(precision);
  try {
    if (*run_cmd) return run_plan(plan_path, jobs);

    auto default_out = [&](const char* name) {
      if (out_path.empty()) out_path = std::string(name) + ".csv";
    };
    TaskResult r;
    if (*anr_cmd) {
      default_out("anr");
      r = run_anr(n, out_path);
    } else if (*ids_cmd) {
      default_out("identities");
      if (ids_cmd->count("--x0")) {
        if (config_path.empty()) fail(errc::parse, "coefficient identities need --config");
        auto b = load_function(config_path);
        r = run_coeff_identities(b, parse_rational(x0_str), n, tol > 0 ? tol : 1e-10,
                                 exact || b.exact_capable(), out_path);
      } else {
        r = run_hyp_identities(n, tol > 0 ? tol : 1e-12, out_path);
      }
    } else if (*cond_cmd) {
      default_out("condition");
      std::optional<double> tail;
      if (tail_bound >= 0) tail = tail_bound;
      r = run_condition(load_function(config_path), parse_rational(x0_str), n, tail, out_path);
    } else if (*rep_cmd) {
      default_out("represent");
      bool boundary_mode = rep_cmd->count("--x0") > 0;
      r = run_represent(load_function(config_path), parse_complex_arg(w_str), m, boundary_mode,
                        parse_complex_arg(omega_str), parse_rational(x0_str), n,
                        tol > 0 ? tol : (boundary_mode ? 1e-6 : 1e-8), out_path);
    } else if (*norm_cmd) {
      default_out("norm");
      std::optional<GaussianRational> omega;
      if (norm_cmd->count("--omega")) omega = parse_complex_arg(omega_str);
      r = run_norm(load_function(config_path), parse_rational(x0_str), n, omega,
                   tol > 0 ? tol : 1e-8, out_path);
    } else if (*conv_cmd) {
      default_out("converge");
      std::string mode = exact ? "exact" : (precision > 53 ? "bigfloat" : "double");
      r = run_converge(load_function(config_path), parse_rational(x0_str), n, kmax, mode,
                       threshold, out_path);
    } else if (*probe_cmd) {
      default_out("probe");
      r = run_probe(load_function(config_path), parse_rational(x0_str), n, kmax, out_path);
    }
    std::cout << summary_json(r).dump(2) << "\n";
    return (!r.asserting || r.pass) ? 0 : 1;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::parse ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
