#include "restor/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "restor/assumptions.hpp"
#include "restor/error.hpp"
#include "restor/experiments.hpp"
#include "restor/freq_arith.hpp"
#include "restor/integrator.hpp"
#include "restor/model_io.hpp"
#include "restor/normal_form.hpp"
#include "restor/provenance.hpp"
#include "restor/report_io.hpp"

namespace restor {

namespace fs = std::filesystem;

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage:
      return 2;
    case ErrorCode::invalid_model:
      return 3;
    case ErrorCode::step_failure:
      return 5;
    default:
      return 4;
  }
}

void print_error(std::string_view code, std::string_view message) {
  std::cout << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

// Relative output paths resolve under RESTOR_OUT_DIR when it is set.
fs::path output_path(const std::string& p) {
  fs::path path(p);
  if (const char* dir = std::getenv("RESTOR_OUT_DIR"); dir && path.is_relative())
    path = fs::path(dir) / path;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  return path;
}

fs::path with_suffix(const fs::path& stem_source, const std::string& suffix) {
  fs::path p = stem_source;
  return p.replace_extension().concat(suffix);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Session {
  RunManifest manifest;
  fs::path manifest_path;

  void begin(std::string command, json config) {
    manifest.command = std::move(command);
    manifest.config_hash = config_hash(config);
    manifest.config = std::move(config);
    manifest.started = utc_timestamp();
  }
  void output(const fs::path& p) { manifest.outputs.push_back(p.string()); }
  void finish(const fs::path& stem) {
    manifest.finished = utc_timestamp();
    manifest_path = with_suffix(stem, ".manifest.json");
    write_json(to_json(manifest), manifest_path);
  }
  json tagged(json body) const {
    body["manifest"] = to_json(manifest);
    return body;
  }
};

// ---- arith ----------------------------------------------------------------

struct ArithArgs {
  std::vector<double> omega;
  std::string model;
  int q_max = 1000;
  double kappa = 1.0;
  std::vector<double> eps;
  std::string out = "arith";
};

int run_arith(const ArithArgs& a) {
  std::vector<double> fast = a.omega;
  double kappa = a.kappa;
  std::string mhash;
  if (!a.model.empty()) {
    const TorusHamiltonian h = load_model(a.model);
    fast = h.freq().fast();
    mhash = model_hash(h);
  }
  if (fast.empty()) throw Error(ErrorCode::usage, "arith needs --omega or --model");
  const int m = static_cast<int>(fast.size());
  const FrequencyVector freq(m + 1, 1, fast,
                             std::max(a.q_max, FrequencyVector::default_q_cert(m)));
  const ArithmeticProfile profile(freq, a.q_max, kappa);

  Session s;
  s.begin("arith", {{"omega", fast}, {"q_max", a.q_max}, {"kappa", kappa}, {"eps", a.eps}});
  s.manifest.model_hash = mhash;
  const fs::path stem = output_path(a.out);
  const fs::path psi_path = with_suffix(stem, ".psi.csv");
  write_psi_csv(profile, psi_path);
  s.output(psi_path);
  const fs::path mu_path = with_suffix(stem, ".mu.csv");
  {
    CsvWriter csv(mu_path);
    csv.header({"eps", "Delta", "mu"});
    for (double e : a.eps) {
      const double m_eps = mu(profile, e);
      csv.row(std::vector<double>{e, 1.0 / m_eps, m_eps});
    }
  }
  s.output(mu_path);
  s.finish(stem);
  std::cout << json{{"psi_csv", psi_path.string()},
                    {"mu_csv", mu_path.string()},
                    {"manifest", s.manifest_path.string()}}
                   .dump(2)
            << '\n';
  return 0;
}

// ---- check ----------------------------------------------------------------

int run_check(const std::string& model, const std::string& out) {
  const TorusHamiltonian h = load_model(model);
  Session s;
  s.begin("check", {{"model", model}});
  s.manifest.model_hash = model_hash(h);
  const json body = to_json(check_assumptions(h));
  if (!out.empty()) {
    const fs::path p = output_path(out);
    s.output(p);
    s.finish(p);
    write_json(s.tagged(body), p);
  } else {
    s.manifest.finished = utc_timestamp();
  }
  std::cout << s.tagged(body).dump(2) << '\n';
  return 0;
}

// ---- normalform -----------------------------------------------------------

struct NormalFormArgs {
  std::string model;
  double eps = 1e-2;
  TransformOptions opts;
  std::string out;
};

int run_normalform(const NormalFormArgs& a) {
  const TorusHamiltonian h = load_model(a.model);
  const ArithmeticProfile profile(h.freq(), h.freq().q_cert(), h.kappa());
  Session s;
  s.begin("normalform", {{"model", a.model},
                         {"eps", a.eps},
                         {"theta_grid", a.opts.theta_grid},
                         {"action_samples", a.opts.action_samples},
                         {"seed", a.opts.seed}});
  s.manifest.model_hash = model_hash(h);
  s.manifest.seed = a.opts.seed;
  const json body = to_json(normalize(h, a.eps, profile, a.opts));
  if (!a.out.empty()) {
    const fs::path p = output_path(a.out);
    s.output(p);
    s.finish(p);
    write_json(s.tagged(body), p);
  } else {
    s.manifest.finished = utc_timestamp();
  }
  std::cout << s.tagged(body).dump(2) << '\n';
  return 0;
}

// ---- integrate ------------------------------------------------------------

struct IntegrateArgs {
  std::string model;
  std::optional<double> eps;
  double t_final = 100.0;
  double dt = 1e-2;
  std::vector<double> theta0;
  std::vector<double> i0;
  int stride = 1;
  std::string out = "trajectory.csv";
};

int run_integrate(const IntegrateArgs& a) {
  const TorusHamiltonian h = load_model(a.model);
  const int n = h.n();
  if (static_cast<int>(a.theta0.size()) != n || static_cast<int>(a.i0.size()) != n)
    throw Error(ErrorCode::usage, "--theta0 and --I0 need n = " + std::to_string(n) + " values");
  if (!(a.dt > 0.0) || a.stride < 1) throw Error(ErrorCode::usage, "need --dt > 0, --stride >= 1");
  const PhaseFunction ham = a.eps ? scale(h, *a.eps).phase_function() : h.phase_function();
  IntegrateOptions opts;
  opts.stride = a.stride;
  const Trajectory traj =
      integrate(ham, PhaseState{to_vector(a.theta0), to_vector(a.i0), 0.0}, a.t_final, a.dt, opts);

  Session s;
  json config{{"model", a.model}, {"t_final", a.t_final}, {"dt", a.dt},
              {"theta0", a.theta0}, {"I0", a.i0},         {"stride", a.stride}};
  config["eps"] = a.eps ? json(*a.eps) : json(nullptr);
  s.begin("integrate", config);
  s.manifest.model_hash = model_hash(h);
  const fs::path p = output_path(a.out);
  write_trajectory_csv(traj.samples, ham, p);
  s.output(p);
  s.finish(p);
  std::cout << json{{"csv", p.string()},
                    {"samples", traj.samples.size()},
                    {"max_energy_error", traj.max_energy_error()},
                    {"manifest", s.manifest_path.string()}}
                   .dump(2)
            << '\n';
  return 0;
}

// ---- drift ----------------------------------------------------------------

struct DriftArgs {
  std::string model;
  std::string mode = "thm1";
  std::vector<double> eps{3e-2, 1e-2, 3e-3, 1e-3};
  bool eps_given = false;
  int samples = 8;
  std::uint64_t seed = 42;
  std::string delta = "auto";
  std::vector<double> direction;
  double mu0 = 0.1;
  double dt = 1e-2;
  int directions = 16;
  double t_final = 1e3;
  int points = 1000;
  std::string out = "report.json";
};

int run_drift(const DriftArgs& a) {
  Session s;
  json config{{"model", a.model}, {"mode", a.mode},   {"eps", a.eps},
              {"samples", a.samples}, {"seed", a.seed}, {"delta", a.delta},
              {"direction", a.direction}, {"mu0", a.mu0}, {"dt", a.dt},
              {"directions", a.directions}, {"t_final", a.t_final}, {"points", a.points}};
  s.begin("drift", config);
  s.manifest.seed = a.seed;
  const fs::path report_path = output_path(a.out);
  const auto csv_path = [&](const std::string& suffix) {
    return with_suffix(report_path, suffix);
  };
  json body;

  if (a.mode == "example") {
    const ExampleModel ex = a.model.empty() ? builtin_example() : [&] {
      const TorusHamiltonian h = load_model(a.model);
      std::vector<TrigPolyScalar> profiles;
      for (int k = 0; k < h.n(); ++k) {
        TrigPolyScalar p(1);
        for (const auto& [kv, c] : h.A().entry(k, k).terms()) p.add_raw({kv[0]}, c);
        profiles.push_back(p);
      }
      return builtin_example(h.n(), h.d(), h.freq().fast(), profiles);
    }();
    s.manifest.model_hash = model_hash(ex.hamiltonian);
    const double eps = a.eps_given && !a.eps.empty() ? a.eps.front() : 1e-3;
    const int stride = std::max(1, static_cast<int>(a.t_final / a.dt / a.points));
    const ExampleRecord rec = unbounded_example_run(ex, eps, a.t_final, a.dt, {}, stride);
    body = to_json(rec);
    const fs::path plot = csv_path(".plot.csv");
    CsvWriter csv(plot);
    csv.header({"t", "I1_numeric", "I1_exact"});
    for (const PhaseState& st : rec.samples)
      csv.row(std::vector<double>{st.t, st.action[0], rec.action0[0] - rec.rate * st.t});
    s.output(plot);
    const fs::path traj = csv_path(".traj.csv");
    write_trajectory_csv(rec.samples, ex.hamiltonian.phase_function(), traj);
    s.output(traj);
  } else {
    if (a.model.empty()) throw Error(ErrorCode::usage, "--model is required for mode " + a.mode);
    const TorusHamiltonian h = load_model(a.model);
    s.manifest.model_hash = model_hash(h);
    ExperimentConfig cfg;
    cfg.eps_list = a.eps;
    if (a.delta != "auto") {
      try {
        cfg.delta = std::stod(a.delta);
      } catch (const std::exception&) {
        throw Error(ErrorCode::usage, "--delta must be a number or auto");
      }
    }
    if (!a.direction.empty()) cfg.i0_direction = to_vector(a.direction);
    cfg.fast_angle_samples = a.samples;
    cfg.seed = a.seed;
    cfg.mu0 = a.mu0;
    cfg.dt = a.dt;
    cfg.random_directions = a.directions;

    std::vector<DriftReport> reports;
    if (a.mode == "thm1" || a.mode == "thm2") {
      DriftReport r = a.mode == "thm1" ? theorem1_run(h, cfg) : theorem2_run(h, cfg);
      body = to_json(r);
      reports.push_back(std::move(r));
    } else if (a.mode == "thm3") {
      Theorem3Report r = theorem3_run(h, cfg);
      body = to_json(r);
      reports = std::move(r.directions);
    } else {
      throw Error(ErrorCode::usage, "unknown mode " + a.mode);
    }

    const fs::path plot = csv_path(".plot.csv");
    {
      CsvWriter csv(plot);
      csv.header({"direction", "eps", "slow_drift", "fast_drift", "mu"});
      for (std::size_t d = 0; d < reports.size(); ++d)
        for (const EpsilonRecord& rec : reports[d].records)
          if (!rec.refused)
            csv.row(std::vector<double>{static_cast<double>(d), rec.eps, rec.slow_worst,
                                        rec.fast_worst, rec.mu});
    }
    s.output(plot);

    // Canonical-lift trajectories, rerun with thinning.
    for (std::size_t d = 0; d < reports.size(); ++d) {
      const DriftReport& r = reports[d];
      const TorusHamiltonian run_h = r.reversed ? reverse_time(h) : h;
      for (std::size_t e = 0; e < r.records.size(); ++e) {
        const EpsilonRecord& rec = r.records[e];
        if (rec.refused || rec.runs.empty()) continue;
        const LiftRun& lift = rec.runs.front();
        const PhaseFunction ham = scale(run_h, rec.eps).phase_function();
        IntegrateOptions opts;
        opts.stride = std::max<int>(1, static_cast<int>(lift.steps / a.points));
        opts.ball_radius = cfg.ball_radius;
        const Trajectory traj =
            integrate(ham, PhaseState{lift.theta0, lift.action0, 0.0}, rec.tau, a.dt, opts);
        std::string suffix = ".traj";
        if (reports.size() > 1) suffix += ".d" + std::to_string(d);
        suffix += ".e" + std::to_string(e) + ".csv";
        const fs::path p = csv_path(suffix);
        write_trajectory_csv(traj.samples, ham, p);
        s.output(p);
      }
    }
  }
  s.output(report_path);
  s.finish(report_path);
  write_json(s.tagged(body), report_path);
  std::cout << json{{"report", report_path.string()}, {"manifest", s.manifest_path.string()}}
                   .dump(2)
            << '\n';
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Resonant torus laboratory: arithmetic, assumption checks, averaging, "
               "symplectic integration and drift experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  ArithArgs arith;
  auto* c_arith = app.add_subcommand("arith", "Psi table and mu(eps) for a fast frequency");
  c_arith->add_option("--omega", arith.omega, "fast frequency, comma separated")->delimiter(',');
  c_arith->add_option("--model", arith.model, "take the frequency from a model file");
  c_arith->add_option("--q-max", arith.q_max, "table bound")->check(CLI::PositiveNumber);
  c_arith->add_option("--kappa", arith.kappa)->check(CLI::PositiveNumber);
  c_arith->add_option("--eps", arith.eps, "eps list")->delimiter(',');
  c_arith->add_option("--out", arith.out, "output stem");

  std::string check_model, check_out;
  auto* c_check = app.add_subcommand("check", "genericity assumption report a1-a4");
  c_check->add_option("--model", check_model)->required();
  c_check->add_option("--out", check_out, "also write the report here");

  NormalFormArgs nf;
  auto* c_nf = app.add_subcommand("normalform", "one resonant averaging step");
  c_nf->add_option("--model", nf.model)->required();
  c_nf->add_option("--eps", nf.eps)->required();
  c_nf->add_option("--theta-grid", nf.opts.theta_grid)->check(CLI::PositiveNumber);
  c_nf->add_option("--action-samples", nf.opts.action_samples)->check(CLI::PositiveNumber);
  c_nf->add_option("--seed", nf.opts.seed);
  c_nf->add_option("--out", nf.out, "also write the result here");

  IntegrateArgs integ;
  auto* c_int = app.add_subcommand("integrate", "implicit-midpoint trajectory");
  c_int->add_option("--model", integ.model)->required();
  c_int->add_option("--eps", integ.eps, "integrate the scaled system at this eps");
  c_int->add_option("--t-final", integ.t_final);
  c_int->add_option("--dt", integ.dt);
  c_int->add_option("--theta0", integ.theta0)->delimiter(',')->required();
  c_int->add_option("--I0", integ.i0)->delimiter(',')->required();
  c_int->add_option("--stride", integ.stride);
  c_int->add_option("--out", integ.out);

  DriftArgs drift;
  auto* c_drift = app.add_subcommand("drift", "action-drift experiments");
  c_drift->add_option("--model", drift.model);
  c_drift->add_option("--mode", drift.mode)
      ->check(CLI::IsMember({"thm1", "thm2", "thm3", "example"}));
  c_drift->add_option("--eps", drift.eps)->delimiter(',');
  c_drift->add_option("--samples", drift.samples)->check(CLI::PositiveNumber);
  c_drift->add_option("--seed", drift.seed);
  c_drift->add_option("--delta", drift.delta, "number in (0,1) or auto");
  c_drift->add_option("--direction", drift.direction, "initial direction")->delimiter(',');
  c_drift->add_option("--mu0", drift.mu0);
  c_drift->add_option("--dt", drift.dt)->check(CLI::PositiveNumber);
  c_drift->add_option("--directions", drift.directions, "random directions (thm3)");
  c_drift->add_option("--t-final", drift.t_final, "horizon (example)");
  c_drift->add_option("--points", drift.points, "samples per trajectory CSV")
      ->check(CLI::PositiveNumber);
  c_drift->add_option("--out", drift.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (c_arith->parsed()) return run_arith(arith);
    if (c_check->parsed()) return run_check(check_model, check_out);
    if (c_nf->parsed()) return run_normalform(nf);
    if (c_int->parsed()) return run_integrate(integ);
    if (c_drift->parsed()) {
      drift.eps_given = c_drift->count("--eps") > 0;
      return run_drift(drift);
    }
  } catch (const Error& e) {
    print_error(to_string(e.code()), e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 5;
  }
  return 2;
}

int dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace restor
