#include "restor/freq_arith.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "restor/error.hpp"

namespace restor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::not_certified: return "not_certified";
    case ErrorCode::table_exhausted: return "table_exhausted";
    case ErrorCode::inapplicable: return "inapplicable";
    case ErrorCode::refused: return "refused";
    case ErrorCode::ball_exit: return "ball_exit";
    case ErrorCode::step_failure: return "step_failure";
    case ErrorCode::invalid_model: return "invalid_model";
    case ErrorCode::usage: return "usage";
  }
  return "unknown";
}

double lattice_divisor(std::span<const int> k, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) acc += k[i] * w[i];
  return std::abs(acc);
}

namespace {

// Visits every k in Z^m with |k|_1 == shell whose first nonzero entry is
// positive (one representative of each pair k, -k).
void for_each_on_shell(int m, int shell,
                       const std::function<void(std::span<const int>)>& visit) {
  std::vector<int> k(m, 0);
  std::function<void(int, int, bool)> rec = [&](int idx, int remaining,
                                                bool signed_before) {
    if (idx == m - 1) {
      if (remaining == 0) {
        k[idx] = 0;
        visit(k);
        return;
      }
      k[idx] = remaining;
      visit(k);
      if (signed_before) {
        k[idx] = -remaining;
        visit(k);
      }
      return;
    }
    for (int v = signed_before ? -remaining : 0; v <= remaining; ++v) {
      k[idx] = v;
      rec(idx + 1, remaining - std::abs(v), signed_before || v != 0);
    }
  };
  rec(0, shell, false);
}

}  // namespace

int FrequencyVector::default_q_cert(int fast_dim) {
  switch (fast_dim) {
    case 1: return 100000;
    case 2: return 2000;
    case 3: return 120;
    case 4: return 40;
    default: return 16;
  }
}

FrequencyVector::FrequencyVector(int n, int d, std::vector<double> fast,
                                 int q_cert)
    : n_(n), d_(d), fast_(std::move(fast)) {
  if (n < 2) throw Error(ErrorCode::invalid_model, "n must be at least 2");
  if (d < 1 || d > n - 1)
    throw Error(ErrorCode::invalid_model, "d must satisfy 1 <= d <= n-1");
  if (static_cast<int>(fast_.size()) != n - d)
    throw Error(ErrorCode::invalid_model, "fast frequency must have n-d entries");
  double sup = 0.0;
  for (double w : fast_) {
    if (!std::isfinite(w))
      throw Error(ErrorCode::invalid_model, "fast frequency is not finite");
    sup = std::max(sup, std::abs(w));
  }
  if (std::abs(sup - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "fast frequency must have sup-norm 1 (got " << sup << ")";
    throw Error(ErrorCode::invalid_model, msg.str());
  }
  q_cert_ = q_cert > 0 ? q_cert : default_q_cert(n - d);

  const int m = n - d;
  auto table = std::make_shared<std::vector<double>>(q_cert_ + 1, 0.0);
  (*table)[0] = std::numeric_limits<double>::infinity();
  for (int s = 1; s <= q_cert_; ++s) {
    double best = std::numeric_limits<double>::infinity();
    if (m == 1) {
      best = lattice_divisor(std::span<const int>(&s, 1), fast_);
    } else {
      for_each_on_shell(m, s, [&](std::span<const int> k) {
        best = std::min(best, lattice_divisor(k, fast_));
      });
    }
    if (best < kResonanceThreshold) {
      std::ostringstream msg;
      msg << "fast frequency is resonant (|k.w| < " << kResonanceThreshold
          << " on l1 shell " << s << ")";
      throw Error(ErrorCode::not_certified, msg.str());
    }
    (*table)[s] = best;
  }
  shell_min_ = std::move(table);
}

Eigen::VectorXd FrequencyVector::full() const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n_);
  for (int j = 0; j < fast_dim(); ++j) w[d_ + j] = fast_[j];
  return w;
}

double FrequencyVector::shell_min(int s) const {
  if (s < 1 || s > q_cert_)
    throw Error(ErrorCode::not_certified, "shell outside certified range");
  return (*shell_min_)[s];
}

FrequencyVector FrequencyVector::negated() const {
  FrequencyVector out;
  out.n_ = n_;
  out.d_ = d_;
  out.fast_ = fast_;
  for (double& w : out.fast_) w = -w;
  out.q_cert_ = q_cert_;
  out.shell_min_ = shell_min_;
  return out;
}

double psi(const FrequencyVector& freq, int q) {
  if (q < 1) throw Error(ErrorCode::domain, "psi requires Q >= 1");
  if (q > freq.q_cert()) {
    std::ostringstream msg;
    msg << "psi(" << q << ") beyond certified range Q_cert=" << freq.q_cert();
    throw Error(ErrorCode::not_certified, msg.str());
  }
  double worst = 0.0;
  for (int s = 1; s <= q; ++s) worst = std::max(worst, 1.0 / freq.shell_min(s));
  return worst;
}

ArithmeticProfile::ArithmeticProfile(const FrequencyVector& freq, int q_max,
                                     double kappa)
    : kappa_(kappa), q_max_(q_max) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::domain, "kappa must be positive");
  if (q_max < 1) throw Error(ErrorCode::domain, "Q_max must be >= 1");
  if (q_max > freq.q_cert()) {
    std::ostringstream msg;
    msg << "Q_max=" << q_max << " exceeds certified range " << freq.q_cert();
    throw Error(ErrorCode::not_certified, msg.str());
  }
  double running = 0.0;
  for (int s = 1; s <= q_max; ++s) {
    const double v = 1.0 / freq.shell_min(s);
    if (v > running) {
      running = v;
      table_.push_back({s, v});
    }
  }
}

double ArithmeticProfile::psi(int q) const {
  if (q < 1 || q > q_max_)
    throw Error(ErrorCode::table_exhausted, "Q outside the profile table");
  auto it = std::upper_bound(
      table_.begin(), table_.end(), q,
      [](int value, const Breakpoint& b) { return value < b.q; });
  return std::prev(it)->psi;
}

double delta(const ArithmeticProfile& profile, double x) {
  const auto& table = profile.breakpoints();
  if (!(x >= table.front().psi)) {
    std::ostringstream msg;
    msg << "Delta(x) requires x >= Psi(1)=" << table.front().psi << " (got " << x
        << ")";
    throw Error(ErrorCode::domain, msg.str());
  }
  // Last breakpoint b with Q_b Psi_b <= x; Q Psi(Q) is increasing in Q.
  auto it = std::upper_bound(
      table.begin(), table.end(), x,
      [](double value, const ArithmeticProfile::Breakpoint& b) {
        return value < b.q * b.psi;
      });
  const auto& b = *std::prev(it);
  double result = x / b.psi;
  if (it != table.end()) result = std::min(result, static_cast<double>(it->q));
  if (result > profile.q_max()) {
    std::ostringstream msg;
    msg << "Delta(" << x << ") exceeds the table bound Q_max=" << profile.q_max();
    throw Error(ErrorCode::table_exhausted, msg.str());
  }
  return result;
}

double mu(const ArithmeticProfile& profile, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::domain, "mu requires eps > 0");
  return 1.0 / delta(profile, profile.kappa() / eps);
}

int truncation_order(const ArithmeticProfile& profile, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::domain, "eps must be positive");
  return static_cast<int>(std::floor(delta(profile, profile.kappa() / eps)));
}

}  // namespace restor
