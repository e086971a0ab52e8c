#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "restor/hamiltonian.hpp"

namespace restor {

using json = nlohmann::json;

/// Term list [{"k": [...], "re": x, "im": y}, ...]; coefficients are raw, so
/// a real polynomial lists both k and -k.
json trig_to_json(const TrigPolyScalar& p);
TrigPolyScalar trig_from_json(const json& j, int dim);

/// Model file:
///   {"n", "d", "omega_fast": [...], "A": [n(n+1)/2 term lists, row-major upper
///    triangle], "R": [{"powers": [...], "terms": [...]}], "kappa", "q_cert"?}
json model_to_json(const TorusHamiltonian& h);
TorusHamiltonian model_from_json(const json& j);

TorusHamiltonian load_model(const std::filesystem::path& path);
void save_model(const TorusHamiltonian& h, const std::filesystem::path& path);

}  // namespace restor
