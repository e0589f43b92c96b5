#pragma once

#include <json.hpp>
#include <string>

#include "fbmou/quadrature.hpp"

namespace fbmou {

inline nlohmann::json scheme_to_json(const QuadratureScheme& scheme) {
    return nlohmann::json{
        {"H", scheme.params.H},
        {"T", scheme.params.T},
        {"n", scheme.n},
        {"m", scheme.m},
        {"r", scheme.r},
        {"xi", scheme.grid.xi},
        {"nodes", scheme.nodes},
        {"gauss_weights", scheme.gauss_weights},
        {"kernel_weights", scheme.kernel_weights},
    };
}

inline QuadratureScheme scheme_from_json(const nlohmann::json& j) {
    QuadratureScheme scheme;
    scheme.params = ModelParams::make(j.at("H").get<double>(), j.at("T").get<double>());
    scheme.n = j.at("n").get<int>();
    scheme.m = j.at("m").get<int>();
    scheme.r = j.at("r").get<double>();
    scheme.grid.n = scheme.n;
    scheme.grid.r = scheme.r;
    scheme.grid.xi = j.at("xi").get<std::vector<double>>();
    scheme.nodes = j.at("nodes").get<std::vector<double>>();
    scheme.gauss_weights = j.at("gauss_weights").get<std::vector<double>>();
    scheme.kernel_weights = j.at("kernel_weights").get<std::vector<double>>();
    return scheme;
}

}  // namespace fbmou
