#include "restor/model_io.hpp"

#include <fstream>
#include <sstream>

#include "restor/error.hpp"

namespace restor {

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::invalid_model, std::string("model is missing '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_model, std::string("bad '") + key + "': " + e.what());
  }
}

}  // namespace

json trig_to_json(const TrigPolyScalar& p) {
  json out = json::array();
  for (const auto& [k, c] : p.terms())
    out.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  return out;
}

TrigPolyScalar trig_from_json(const json& j, int dim) {
  if (!j.is_array()) throw Error(ErrorCode::invalid_model, "term list must be an array");
  TrigPolyScalar p(dim);
  for (const json& term : j) {
    const auto k = required<Wavevector>(term, "k");
    if (static_cast<int>(k.size()) != dim)
      throw Error(ErrorCode::invalid_model, "wavevector has wrong length");
    const double re = term.value("re", 0.0);
    const double im = term.value("im", 0.0);
    p.add_raw(k, {re, im});
  }
  if (!p.conjugate_symmetric())
    throw Error(ErrorCode::invalid_model,
                "term list is not conjugate-symmetric (list both k and -k)");
  return p;
}

json model_to_json(const TorusHamiltonian& h) {
  const int n = h.n();
  json a = json::array();
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) a.push_back(trig_to_json(h.A().entry(p, q)));
  json r = json::array();
  for (const auto& [powers, c] : h.R().terms())
    r.push_back({{"powers", powers}, {"terms", trig_to_json(c)}});
  return json{{"n", n},
              {"d", h.d()},
              {"omega_fast", h.freq().fast()},
              {"A", a},
              {"R", r},
              {"kappa", h.kappa()},
              {"q_cert", h.freq().q_cert()}};
}

namespace {

TorusHamiltonian parse_model(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_model, "model must be a JSON object");
  const int n = required<int>(j, "n");
  const int d = required<int>(j, "d");
  auto fast = required<std::vector<double>>(j, "omega_fast");
  const int q_cert = j.value("q_cert", 0);
  const double kappa = j.value("kappa", 1.0);
  FrequencyVector freq(n, d, std::move(fast), q_cert);

  const json& a_json = j.contains("A") ? j.at("A") : json::array();
  if (!a_json.is_array() || static_cast<int>(a_json.size()) != n * (n + 1) / 2) {
    std::ostringstream msg;
    msg << "'A' must list " << n * (n + 1) / 2 << " upper-triangle entries";
    throw Error(ErrorCode::invalid_model, msg.str());
  }
  TrigPolyMatrix a(n);
  std::size_t idx = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) a.entry(p, q) = trig_from_json(a_json[idx++], n);

  ActionPolynomial r(n);
  if (j.contains("R")) {
    for (const json& term : j.at("R")) {
      const auto powers = required<Powers>(term, "powers");
      if (static_cast<int>(powers.size()) != n)
        throw Error(ErrorCode::invalid_model, "remainder powers have wrong length");
      r.add(powers, trig_from_json(term.at("terms"), n));
    }
  }
  return TorusHamiltonian(std::move(freq), std::move(a), std::move(r), kappa);
}

}  // namespace

TorusHamiltonian model_from_json(const json& j) {
  try {
    return parse_model(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_model, std::string("malformed model: ") + e.what());
  }
}

TorusHamiltonian load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_model, "cannot open model " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_model, "malformed model JSON: " + std::string(e.what()));
  }
  return model_from_json(j);
}

void save_model(const TorusHamiltonian& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << model_to_json(h).dump(2) << '\n';
}

}  // namespace restor
