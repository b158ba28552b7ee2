#pragma once

// JSON documents for networks, polynomials and factored forms.
//
// Network layout:
//   {"input_dim": n,
//    "layers": [{"activation": "relu"|"identity",
//                "neurons": [{"kind": "quadratic", "w_r": [...], "b_r": x,
//                             "w_g": [...], "b_g": x, "w_b": [...], "c": x},
//                            {"kind": "conventional", "w": [...], "b": x},
//                            {"kind": "passthrough", "source": i}]}],
//    "shortcuts": [{"from": [layer, neuron], "to": [layer, neuron],
//                   "weight": x, "trainable": bool}],
//    "masks": [bool, ...]}          // neuron parameters, canonical order

#include <string>

#include <json.hpp>

#include "qnn/core.hpp"
#include "qnn/polynomial.hpp"

namespace qnn {

nlohmann::json to_json(const NetworkSpec& net);
NetworkSpec network_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FactoredForm& ff);
FactoredForm factored_form_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace qnn
