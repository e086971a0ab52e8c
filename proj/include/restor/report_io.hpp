#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "restor/assumptions.hpp"
#include "restor/experiments.hpp"
#include "restor/freq_arith.hpp"
#include "restor/model_io.hpp"
#include "restor/normal_form.hpp"

namespace restor {

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
json to_json(const AssumptionReport& r);
json to_json(const NormalFormResult& r);
json to_json(const EpsilonRecord& r);
json to_json(const DriftReport& r);
json to_json(const Theorem3Report& r);
json to_json(const ExampleRecord& r);

/// Comma-separated output with a header row; fields needing it are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& fields);

  static std::string quote(const std::string& field);
  static std::string number(double v);

 private:
  std::ofstream out_;
};

/// Q, Psi(Q), Q Psi(Q) for Q = 1..q_max.
void write_psi_csv(const ArithmeticProfile& profile, const std::filesystem::path& path);

/// t, theta_1..theta_n, I_1..I_n, H.
void write_trajectory_csv(const std::vector<PhaseState>& samples, const PhaseFunction& h,
                          const std::filesystem::path& path);

}  // namespace restor
