#include "dsg/game_json.hpp"

#include <stdexcept>

namespace dsg {

using nlohmann::json;

nlohmann::json to_json(const FiniteStochasticGame& game) {
    json j;
    j["kind"] = "finite_stochastic_game";
    j["states"] = game.state_ids;
    json abs = json::array();
    for (int s = 0; s < game.n_states(); ++s)
        if (game.absorbing[s]) abs.push_back(game.state_ids[s]);
    j["absorbing"] = abs;
    json a1 = json::object(), a2 = json::object();
    for (int s = 0; s < game.n_states(); ++s) {
        a1[game.state_ids[s]] = game.actions1[s];
        a2[game.state_ids[s]] = game.actions2[s];
    }
    j["actions1"] = a1;
    j["actions2"] = a2;
    json payoffs = json::array(), transitions = json::array();
    for (int s = 0; s < game.n_states(); ++s) {
        for (std::size_t i = 0; i < game.actions1[s].size(); ++i) {
            for (std::size_t k = 0; k < game.actions2[s].size(); ++k) {
                payoffs.push_back({{"state", game.state_ids[s]},
                                   {"a1", game.actions1[s][i]},
                                   {"a2", game.actions2[s][k]},
                                   {"u1", game.payoff1[s][i][k]},
                                   {"u2", game.payoff2[s][i][k]}});
                json to = json::array();
                for (const auto& br : game.transition[s][i][k])
                    to.push_back({{"state", game.state_ids[br.state]}, {"p", br.prob}});
                transitions.push_back({{"state", game.state_ids[s]},
                                       {"a1", game.actions1[s][i]},
                                       {"a2", game.actions2[s][k]},
                                       {"to", to}});
            }
        }
    }
    j["payoffs"] = payoffs;
    j["transitions"] = transitions;
    return j;
}

namespace {

int index_of(const std::vector<std::string>& ids, const std::string& id, const char* what) {
    for (std::size_t k = 0; k < ids.size(); ++k)
        if (ids[k] == id) return static_cast<int>(k);
    throw std::invalid_argument(std::string("unknown ") + what + ": " + id);
}

}  // namespace

FiniteStochasticGame fsg_from_json(const nlohmann::json& j) {
    if (j.at("kind") != "finite_stochastic_game")
        throw std::invalid_argument("expected kind finite_stochastic_game");
    FiniteStochasticGame g;
    g.state_ids = j.at("states").get<std::vector<std::string>>();
    const int n = g.n_states();
    g.actions1.resize(n);
    g.actions2.resize(n);
    for (int s = 0; s < n; ++s) {
        g.actions1[s] = j.at("actions1").at(g.state_ids[s]).get<std::vector<std::string>>();
        g.actions2[s] = j.at("actions2").at(g.state_ids[s]).get<std::vector<std::string>>();
    }
    g.absorbing.assign(n, false);
    for (const auto& id : j.at("absorbing")) g.absorbing[index_of(g.state_ids, id, "state")] = true;
    g.transition.resize(n);
    g.payoff1.resize(n);
    g.payoff2.resize(n);
    for (int s = 0; s < n; ++s) {
        g.transition[s].assign(g.actions1[s].size(),
                               std::vector<std::vector<Transition>>(g.actions2[s].size()));
        g.payoff1[s].assign(g.actions1[s].size(), std::vector<double>(g.actions2[s].size(), 0.0));
        g.payoff2[s] = g.payoff1[s];
    }
    for (const auto& cell : j.at("payoffs")) {
        int s = index_of(g.state_ids, cell.at("state"), "state");
        int i = index_of(g.actions1[s], cell.at("a1"), "action");
        int k = index_of(g.actions2[s], cell.at("a2"), "action");
        g.payoff1[s][i][k] = cell.at("u1").get<double>();
        g.payoff2[s][i][k] = cell.at("u2").get<double>();
    }
    for (const auto& cell : j.at("transitions")) {
        int s = index_of(g.state_ids, cell.at("state"), "state");
        int i = index_of(g.actions1[s], cell.at("a1"), "action");
        int k = index_of(g.actions2[s], cell.at("a2"), "action");
        for (const auto& br : cell.at("to"))
            g.transition[s][i][k].push_back(
                {index_of(g.state_ids, br.at("state"), "state"), br.at("p").get<double>()});
    }
    g.validate();
    return g;
}

nlohmann::json to_json(const HiddenStochasticGame& game) {
    json j;
    j["kind"] = "hidden_stochastic_game";
    j["states"] = game.state_ids;
    j["signals"] = game.signal_ids;
    j["actions1"] = game.actions1;
    j["actions2"] = game.actions2;
    json payoffs = json::array(), transitions = json::array(), initial = json::array();
    for (int s = 0; s < game.n_states(); ++s) {
        for (std::size_t i = 0; i < game.actions1.size(); ++i) {
            for (std::size_t k = 0; k < game.actions2.size(); ++k) {
                payoffs.push_back({{"state", game.state_ids[s]},
                                   {"a1", game.actions1[i]},
                                   {"a2", game.actions2[k]},
                                   {"u1", game.payoff1[s][i][k]},
                                   {"u2", game.payoff2[s][i][k]}});
                json to = json::array();
                for (const auto& br : game.transition[s][i][k])
                    to.push_back({{"state", game.state_ids[br.state]},
                                  {"signal", game.signal_ids[br.signal]},
                                  {"p", br.prob}});
                transitions.push_back({{"state", game.state_ids[s]},
                                       {"a1", game.actions1[i]},
                                       {"a2", game.actions2[k]},
                                       {"to", to}});
            }
        }
    }
    for (const auto& br : game.initial)
        initial.push_back({{"state", game.state_ids[br.state]},
                           {"signal", game.signal_ids[br.signal]},
                           {"p", br.prob}});
    j["payoffs"] = payoffs;
    j["transitions"] = transitions;
    j["initial"] = initial;
    return j;
}

HiddenStochasticGame hsg_from_json(const nlohmann::json& j) {
    if (j.at("kind") != "hidden_stochastic_game")
        throw std::invalid_argument("expected kind hidden_stochastic_game");
    HiddenStochasticGame g;
    g.state_ids = j.at("states").get<std::vector<std::string>>();
    g.signal_ids = j.at("signals").get<std::vector<std::string>>();
    g.actions1 = j.at("actions1").get<std::vector<std::string>>();
    g.actions2 = j.at("actions2").get<std::vector<std::string>>();
    const int n = g.n_states();
    g.transition.assign(n, std::vector<std::vector<std::vector<HsgBranch>>>(
                               g.actions1.size(),
                               std::vector<std::vector<HsgBranch>>(g.actions2.size())));
    g.payoff1.assign(n, std::vector<std::vector<double>>(g.actions1.size(),
                                                         std::vector<double>(g.actions2.size())));
    g.payoff2 = g.payoff1;
    for (const auto& cell : j.at("payoffs")) {
        int s = index_of(g.state_ids, cell.at("state"), "state");
        int i = index_of(g.actions1, cell.at("a1"), "action");
        int k = index_of(g.actions2, cell.at("a2"), "action");
        g.payoff1[s][i][k] = cell.at("u1").get<double>();
        g.payoff2[s][i][k] = cell.at("u2").get<double>();
    }
    for (const auto& cell : j.at("transitions")) {
        int s = index_of(g.state_ids, cell.at("state"), "state");
        int i = index_of(g.actions1, cell.at("a1"), "action");
        int k = index_of(g.actions2, cell.at("a2"), "action");
        for (const auto& br : cell.at("to"))
            g.transition[s][i][k].push_back({index_of(g.state_ids, br.at("state"), "state"),
                                             index_of(g.signal_ids, br.at("signal"), "signal"),
                                             br.at("p").get<double>()});
    }
    for (const auto& br : j.at("initial"))
        g.initial.push_back({index_of(g.state_ids, br.at("state"), "state"),
                             index_of(g.signal_ids, br.at("signal"), "signal"),
                             br.at("p").get<double>()});
    g.validate();
    return g;
}

}  // namespace dsg
