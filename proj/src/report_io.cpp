#include "restor/report_io.hpp"

#include <cmath>
#include <cstdio>

#include "restor/error.hpp"

namespace restor {

namespace {

json poly_to_json(const ActionPolynomial& p) {
  json out = json::array();
  for (const auto& [powers, c] : p.terms())
    out.push_back({{"powers", powers}, {"terms", trig_to_json(c)}});
  return out;
}

// NaN and infinities are not JSON numbers.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Eigen::VectorXd row = m.row(r).transpose();
    out.push_back(to_json(row));
  }
  return out;
}

json to_json(const AssumptionReport& r) {
  json a1{{"verdict", r.a1.verdict}};
  if (r.a1.verdict) {
    a1["theta_star"] = r.a1.theta_star;
    a1["i"] = r.a1.i + 1;
    a1["A_star"] = to_json(r.a1.a_star);
    a1["frobenius"] = r.a1.frobenius;
    a1["grid_max"] = r.a1.grid_max;
    a1["grid_tol"] = r.a1.grid_tol;
    a1["grid_per_axis"] = r.a1.grid_per_axis;
  }
  json a2{{"applicable", r.a2.applicable}, {"verdict", r.a2.verdict}};
  if (r.a2.applicable) {
    a2["a_star"] = r.a2.a_star;
    a2["reversal"] = r.a2.reversal;
  }
  json a3{{"applicable", r.a3.applicable}, {"verdict", r.a3.verdict}};
  if (r.a3.applicable) {
    a3["eigenvalues"] = to_json(r.a3.eigenvalues);
    a3["reversal"] = r.a3.reversal;
    if (r.a3.verdict) a3["lambda_star"] = r.a3.lambda_star;
  }
  json a4{{"verdict", r.a4.verdict}, {"constant_average", r.a4.constant_average}};
  if (r.a4.constant_average) {
    a4["A0"] = to_json(r.a4.a0);
    a4["margin"] = r.a4.margin;
  }
  return json{{"a1", a1}, {"a2", a2}, {"a3", a3}, {"a4", a4}};
}

json to_json(const NormalFormResult& r) {
  json divisors = json::array();
  for (const DivisorUse& u : r.divisors)
    divisors.push_back({{"k", u.k}, {"inverse_divisor", u.inverse_divisor}});
  return json{{"eps", r.eps},
              {"mu", r.mu},
              {"truncation_Q", r.truncation_q},
              {"divisor_worst", r.divisor_worst},
              {"remainder_bound", r.remainder_bound},
              {"displacement", r.displacement},
              {"C_star", r.c_star},
              {"f_prime_bound", r.f_prime_bound},
              {"C_prime", r.c_prime},
              {"predicted_scale", r.predicted_scale},
              {"samples", r.samples},
              {"divisors", divisors},
              {"fbar", poly_to_json(r.fbar)},
              {"generator", poly_to_json(r.generator)},
              {"tail", poly_to_json(r.tail)}};
}

json to_json(const EpsilonRecord& r) {
  json out{{"eps", r.eps}, {"mu", num(r.mu)}, {"tau", r.tau}, {"refused", r.refused}};
  if (r.refused) {
    out["message"] = r.message;
    return out;
  }
  json runs = json::array();
  for (const LiftRun& run : r.runs)
    runs.push_back({{"theta0", to_json(run.theta0)},
                    {"action_end", to_json(run.action_end)},
                    {"slow_signed", run.slow_signed},
                    {"fast_sup", run.fast_sup},
                    {"growth", run.growth},
                    {"energy_error", run.energy_error},
                    {"steps", run.steps},
                    {"exited", run.exited},
                    {"exit_time", run.exit_time}});
  out.update({{"slow_drift_worst", r.slow_worst},
              {"slow_drift_median", r.slow_median},
              {"slow_signed_min", r.slow_signed_min},
              {"fast_drift_worst", r.fast_worst},
              {"fast_drift_median", r.fast_median},
              {"growth_worst", r.growth_worst},
              {"growth_median", r.growth_median},
              {"energy_error", r.energy_error},
              {"exited", r.exited},
              {"runs", runs}});
  return out;
}

json to_json(const DriftReport& r) {
  json recs = json::array();
  for (const EpsilonRecord& e : r.records) recs.push_back(to_json(e));
  return json{{"mode", r.mode},
              {"i", r.i + 1},
              {"theta_star", r.theta_star},
              {"A_star", to_json(r.a_star)},
              {"direction", to_json(r.direction)},
              {"reversed", r.reversed},
              {"kappa", r.kappa},
              {"dt", r.dt},
              {"seed", r.seed},
              {"delta", r.delta.delta},
              {"delta_rung", r.delta.rung},
              {"rho", r.delta.rho},
              {"gamma_star", r.delta.gamma},
              {"slope", num(r.slope)},
              {"c", r.c},
              {"C", r.C},
              {"fast_spread", num(r.fast_spread)},
              {"growth_c_min", r.growth_c_min},
              {"growth_c_max", r.growth_c_max},
              {"records", recs}};
}

json to_json(const Theorem3Report& r) {
  json dirs = json::array();
  for (const DriftReport& d : r.directions) dirs.push_back(to_json(d));
  return json{{"mode", "thm3"},
              {"delta", r.delta.delta},
              {"delta_rung", r.delta.rung},
              {"rho", r.delta.rho},
              {"uniform_c", num(r.uniform_c)},
              {"reversed", r.reversed},
              {"lambda_star", r.lambda_star},
              {"directions", dirs}};
}

json to_json(const ExampleRecord& r) {
  return json{{"mode", "example"},
              {"eps", r.eps},
              {"t_final", r.t_final},
              {"j", r.j + 1},
              {"theta1_star", r.theta1_star},
              {"action0", to_json(r.action0)},
              {"rate", r.rate},
              {"I1_numeric", r.i1_numeric},
              {"I1_exact", r.i1_exact},
              {"max_rel_deviation", r.max_rel_deviation},
              {"max_abs_deviation", r.max_abs_deviation},
              {"theta1_deviation", r.theta1_deviation},
              {"other_deviation", r.other_deviation}};
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw Error(ErrorCode::usage, "cannot write " + path.string());
}

std::string CsvWriter::quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string CsvWriter::number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k)
    out_ << (k ? "," : "") << number(values[k]);
  out_ << "\r\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k)
    out_ << (k ? "," : "") << quote(fields[k]);
  out_ << "\r\n";
}

void write_psi_csv(const ArithmeticProfile& profile, const std::filesystem::path& path) {
  CsvWriter csv(path);
  csv.header({"Q", "Psi", "Q_Psi"});
  for (int q = 1; q <= profile.q_max(); ++q) {
    const double p = profile.psi(q);
    csv.row(std::vector<double>{static_cast<double>(q), p, q * p});
  }
}

void write_trajectory_csv(const std::vector<PhaseState>& samples, const PhaseFunction& h,
                          const std::filesystem::path& path) {
  CsvWriter csv(path);
  const int n = h.dim();
  std::vector<std::string> names{"t"};
  for (int a = 1; a <= n; ++a) names.push_back("theta" + std::to_string(a));
  for (int a = 1; a <= n; ++a) names.push_back("I" + std::to_string(a));
  names.push_back("H");
  csv.header(names);
  for (const PhaseState& s : samples) {
    std::vector<double> v{s.t};
    v.insert(v.end(), s.theta.data(), s.theta.data() + n);
    v.insert(v.end(), s.action.data(), s.action.data() + n);
    v.push_back(h.value(s.theta, s.action));
    csv.row(v);
  }
}

}  // namespace restor
