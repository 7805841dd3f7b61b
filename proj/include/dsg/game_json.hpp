#pragma once

#include <string>

#include <json.hpp>

#include "dsg/hidden_game.hpp"
#include "dsg/stochastic_game.hpp"

namespace dsg {

/// Documented JSON schema (see README): states, per-state action lists,
/// transitions as sparse triples, payoffs per cell, absorbing flags; hidden
/// games add signals, (state, signal) transition targets and the initial
/// distribution.
nlohmann::json to_json(const FiniteStochasticGame& game);
FiniteStochasticGame fsg_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HiddenStochasticGame& game);
HiddenStochasticGame hsg_from_json(const nlohmann::json& j);

}  // namespace dsg
