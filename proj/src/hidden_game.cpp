#include "dsg/hidden_game.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "dsg/numeric.hpp"

namespace dsg {

int HiddenStochasticGame::state_index(const std::string& id) const {
    for (int s = 0; s < n_states(); ++s)
        if (state_ids[s] == id) return s;
    throw std::invalid_argument("unknown state id: " + id);
}

int HiddenStochasticGame::signal_index(const std::string& id) const {
    for (int s = 0; s < n_signals(); ++s)
        if (signal_ids[s] == id) return s;
    throw std::invalid_argument("unknown signal id: " + id);
}

void HiddenStochasticGame::validate(double tol) const {
    const int n = n_states();
    const std::size_t n1 = actions1.size(), n2 = actions2.size();
    require(n1 >= 1 && n2 >= 1, "each player needs at least one action");
    require(static_cast<int>(transition.size()) == n && static_cast<int>(payoff1.size()) == n &&
                static_cast<int>(payoff2.size()) == n,
            "tables must be indexed by the state list");
    auto check_branches = [&](const std::vector<HsgBranch>& branches, const std::string& where) {
        double sum = 0.0;
        for (const auto& br : branches) {
            require(br.prob >= 0.0, "negative probability in " + where);
            require(br.state >= 0 && br.state < n, "state out of range in " + where);
            require(br.signal >= 0 && br.signal < n_signals(), "signal out of range in " + where);
            sum += br.prob;
        }
        require(std::fabs(sum - 1.0) <= tol, where + " does not sum to 1");
    };
    for (int s = 0; s < n; ++s) {
        require(transition[s].size() == n1 && payoff1[s].size() == n1 && payoff2[s].size() == n1,
                "action-1 dimension mismatch at state " + state_ids[s]);
        for (std::size_t i = 0; i < n1; ++i) {
            require(transition[s][i].size() == n2 && payoff1[s][i].size() == n2 &&
                        payoff2[s][i].size() == n2,
                    "action-2 dimension mismatch at state " + state_ids[s]);
            for (std::size_t j = 0; j < n2; ++j)
                check_branches(transition[s][i][j], "transition from " + state_ids[s]);
        }
    }
    check_branches(initial, "initial distribution");
}

double Belief::prob_of(int state) const {
    for (const auto& atom : support)
        if (atom.state == state) return atom.prob;
    return 0.0;
}

void Belief::validate(double tol) const {
    double sum = 0.0;
    int last = -1;
    for (const auto& atom : support) {
        require(atom.prob > 0.0, "belief atoms must be strictly positive");
        require(atom.state > last, "belief support must be sorted with distinct states");
        last = atom.state;
        sum += atom.prob;
    }
    require(std::fabs(sum - 1.0) <= tol, "belief probabilities must sum to 1");
}

bool Belief::approx_equal(const Belief& other, double tol) const {
    if (support.size() != other.support.size()) return false;
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (support[k].state != other.support[k].state) return false;
        if (std::fabs(support[k].prob - other.support[k].prob) > tol) return false;
    }
    return true;
}

std::vector<std::pair<BeliefUpdate, int>> belief_branches(const HiddenStochasticGame& hsg,
                                                          const Belief& prior, int i, int j) {
    // accumulate P(state', signal) = sum_k b(k) q(k,i,j)(state', signal)
    std::vector<std::vector<double>> mass(hsg.n_signals(),
                                          std::vector<double>(hsg.n_states(), 0.0));
    std::vector<double> signal_mass(hsg.n_signals(), 0.0);
    for (const auto& atom : prior.support) {
        for (const auto& br : hsg.transition[atom.state][i][j]) {
            mass[br.signal][br.state] += atom.prob * br.prob;
            signal_mass[br.signal] += atom.prob * br.prob;
        }
    }
    std::vector<std::pair<BeliefUpdate, int>> out;
    for (int sig = 0; sig < hsg.n_signals(); ++sig) {
        if (signal_mass[sig] <= 0.0) continue;
        BeliefUpdate up;
        up.signal_prob = signal_mass[sig];
        for (int st = 0; st < hsg.n_states(); ++st)
            if (mass[sig][st] > 0.0) up.posterior.support.push_back({st, mass[sig][st] / signal_mass[sig]});
        out.emplace_back(std::move(up), sig);
    }
    return out;
}

BeliefUpdate belief_update(const HiddenStochasticGame& hsg, const Belief& prior, int i, int j,
                           int signal) {
    prior.validate();
    require(i >= 0 && i < static_cast<int>(hsg.actions1.size()), "action 1 out of range");
    require(j >= 0 && j < static_cast<int>(hsg.actions2.size()), "action 2 out of range");
    require(signal >= 0 && signal < hsg.n_signals(), "signal out of range");
    for (auto& [up, sig] : belief_branches(hsg, prior, i, j))
        if (sig == signal) return up;
    throw std::domain_error("belief_update: conditioning on zero-probability signal " +
                            hsg.signal_ids[signal]);
}

BeliefReduction belief_game_reduce(const HiddenStochasticGame& hsg, int depth, double merge_tol,
                                   int state_cap) {
    require(depth >= 1, "reduction depth must be >= 1");
    hsg.validate();

    BeliefReduction red;
    auto find_or_add = [&](const Belief& b, bool allow_add) -> int {
        for (std::size_t k = 0; k < red.beliefs.size(); ++k)
            if (red.beliefs[k].approx_equal(b, merge_tol)) return static_cast<int>(k);
        if (!allow_add) return -1;
        if (static_cast<int>(red.beliefs.size()) >= state_cap)
            throw std::runtime_error("belief reduction exceeded the state cap of " +
                                     std::to_string(state_cap) + " states");
        red.beliefs.push_back(b);
        return static_cast<int>(red.beliefs.size()) - 1;
    };

    // initial beliefs: conditionals of the initial distribution given each signal
    std::vector<double> init_signal_mass(hsg.n_signals(), 0.0);
    std::vector<std::vector<double>> init_mass(hsg.n_signals(),
                                               std::vector<double>(hsg.n_states(), 0.0));
    for (const auto& br : hsg.initial) {
        init_signal_mass[br.signal] += br.prob;
        init_mass[br.signal][br.state] += br.prob;
    }
    std::vector<int> depth_of;
    for (int sig = 0; sig < hsg.n_signals(); ++sig) {
        if (init_signal_mass[sig] <= 0.0) continue;
        Belief b;
        for (int st = 0; st < hsg.n_states(); ++st)
            if (init_mass[sig][st] > 0.0)
                b.support.push_back({st, init_mass[sig][st] / init_signal_mass[sig]});
        int idx = find_or_add(b, true);
        while (static_cast<int>(depth_of.size()) < idx + 1) depth_of.push_back(0);
        depth_of[idx] = 0;
        red.initial_states.push_back(idx);
        red.initial_probs.push_back(init_signal_mass[sig]);
    }

    // breadth-first closure up to depth
    for (std::size_t head = 0; head < red.beliefs.size(); ++head) {
        if (depth_of[head] >= depth) continue;
        for (std::size_t i = 0; i < hsg.actions1.size(); ++i) {
            for (std::size_t j = 0; j < hsg.actions2.size(); ++j) {
                for (auto& [up, sig] : belief_branches(hsg, red.beliefs[head],
                                                       static_cast<int>(i), static_cast<int>(j))) {
                    (void)sig;
                    int idx = find_or_add(up.posterior, true);
                    while (static_cast<int>(depth_of.size()) < idx + 1)
                        depth_of.push_back(depth_of[head] + 1);
                }
            }
        }
    }

    const int m = static_cast<int>(red.beliefs.size());
    auto& g = red.game;
    g.state_ids.resize(m);
    for (int s = 0; s < m; ++s) {
        std::string id = "b" + std::to_string(s) + ":{";
        for (std::size_t k = 0; k < red.beliefs[s].support.size(); ++k) {
            if (k) id += ",";
            id += hsg.state_ids[red.beliefs[s].support[k].state];
        }
        g.state_ids[s] = id + "}";
    }
    g.actions1.assign(m, hsg.actions1);
    g.actions2.assign(m, hsg.actions2);
    g.transition.assign(m, {});
    g.payoff1.assign(m, {});
    g.payoff2.assign(m, {});
    g.absorbing.assign(m, false);
    red.frontier.assign(m, false);

    for (int s = 0; s < m; ++s) {
        const auto& b = red.beliefs[s];
        const std::size_t n1 = hsg.actions1.size(), n2 = hsg.actions2.size();
        g.transition[s].assign(n1, std::vector<std::vector<Transition>>(n2));
        g.payoff1[s].assign(n1, std::vector<double>(n2, 0.0));
        g.payoff2[s].assign(n1, std::vector<double>(n2, 0.0));
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < n2; ++j) {
                double u1 = 0.0, u2 = 0.0;
                for (const auto& atom : b.support) {
                    u1 += atom.prob * hsg.payoff1[atom.state][i][j];
                    u2 += atom.prob * hsg.payoff2[atom.state][i][j];
                }
                g.payoff1[s][i][j] = u1;
                g.payoff2[s][i][j] = u2;
                std::vector<double> onto(m, 0.0);
                for (auto& [up, sig] : belief_branches(hsg, b, static_cast<int>(i),
                                                       static_cast<int>(j))) {
                    (void)sig;
                    int idx = find_or_add(up.posterior, false);
                    if (idx < 0) {  // left the depth-d set: keep the mass in place
                        idx = s;
                        red.frontier[s] = true;
                    }
                    onto[idx] += up.signal_prob;
                }
                for (int t = 0; t < m; ++t)
                    if (onto[t] > 0.0) g.transition[s][i][j].push_back({t, onto[t]});
            }
        }
    }

    // absorbing iff every action pair keeps all mass in place (frontier
    // redirection never creates this on its own unless the state really only
    // self-loops)
    for (int s = 0; s < m; ++s) {
        bool absorbing = true;
        for (std::size_t i = 0; i < hsg.actions1.size() && absorbing; ++i)
            for (std::size_t j = 0; j < hsg.actions2.size() && absorbing; ++j) {
                double self = 0.0;
                for (const auto& br : g.transition[s][i][j])
                    if (br.state == s) self += br.prob;
                if (std::fabs(self - 1.0) > 1e-12) absorbing = false;
            }
        g.absorbing[s] = absorbing && !red.frontier[s];
    }
    g.validate();
    return red;
}

namespace {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void merge(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace

PartitionResult known_payoffs_partition(const HiddenStochasticGame& hsg) {
    hsg.validate();
    const int n = hsg.n_states();
    UnionFind uf(n);

    // merge states that some transition (or the initial distribution) can
    // place under the same public signal
    std::vector<std::vector<bool>> seen(hsg.n_signals(), std::vector<bool>(n, false));
    auto feed = [&](int state, int signal) {
        for (int other = 0; other < n; ++other)
            if (seen[signal][other]) uf.merge(state, other);
        seen[signal][state] = true;
    };
    for (int s = 0; s < n; ++s)
        for (std::size_t i = 0; i < hsg.actions1.size(); ++i)
            for (std::size_t j = 0; j < hsg.actions2.size(); ++j)
                for (const auto& br : hsg.transition[s][i][j])
                    if (br.prob > 0.0) feed(br.state, br.signal);
    for (const auto& br : hsg.initial)
        if (br.prob > 0.0) feed(br.state, br.signal);

    PartitionResult out;
    std::vector<std::vector<int>> cells;
    std::vector<int> root_to_cell(n, -1);
    for (int s = 0; s < n; ++s) {
        int r = uf.find(s);
        if (root_to_cell[r] < 0) {
            root_to_cell[r] = static_cast<int>(cells.size());
            cells.push_back({});
        }
        cells[root_to_cell[r]].push_back(s);
    }
    std::sort(cells.begin(), cells.end());
    out.cells = cells;

    // payoff functions must agree within every cell
    for (const auto& cell : cells) {
        for (std::size_t k = 1; k < cell.size(); ++k) {
            int a = cell[0], b = cell[k];
            for (std::size_t i = 0; i < hsg.actions1.size(); ++i) {
                for (std::size_t j = 0; j < hsg.actions2.size(); ++j) {
                    for (int player = 1; player <= 2; ++player) {
                        double ua = player == 1 ? hsg.payoff1[a][i][j] : hsg.payoff2[a][i][j];
                        double ub = player == 1 ? hsg.payoff1[b][i][j] : hsg.payoff2[b][i][j];
                        if (std::fabs(ua - ub) > 1e-12) {
                            out.ok = false;
                            out.state_a = a;
                            out.state_b = b;
                            out.act_i = static_cast<int>(i);
                            out.act_j = static_cast<int>(j);
                            out.player = player;
                            out.reason = "payoff of player " + std::to_string(player) +
                                         " differs between " + hsg.state_ids[a] + " and " +
                                         hsg.state_ids[b] + " at (" + hsg.actions1[i] + "," +
                                         hsg.actions2[j] + ") although the signals pool them";
                            return out;
                        }
                    }
                }
            }
        }
    }
    out.ok = true;
    return out;
}

HiddenStochasticGame swap_players(const HiddenStochasticGame& hsg,
                                  const std::vector<int>& state_perm,
                                  const std::vector<int>& signal_perm) {
    require(state_perm.size() == hsg.state_ids.size(), "state permutation size mismatch");
    require(signal_perm.size() == hsg.signal_ids.size(), "signal permutation size mismatch");
    require(hsg.actions1.size() == hsg.actions2.size(),
            "player swap needs action sets of equal size");
    HiddenStochasticGame out;
    const int n = hsg.n_states();
    out.state_ids.resize(n);
    out.signal_ids.resize(hsg.n_signals());
    for (int s = 0; s < n; ++s) out.state_ids[state_perm[s]] = hsg.state_ids[s];
    for (int s = 0; s < hsg.n_signals(); ++s) out.signal_ids[signal_perm[s]] = hsg.signal_ids[s];
    out.actions1 = hsg.actions2;
    out.actions2 = hsg.actions1;
    const std::size_t n1 = hsg.actions2.size(), n2 = hsg.actions1.size();
    out.transition.assign(n, std::vector<std::vector<std::vector<HsgBranch>>>(
                                 n1, std::vector<std::vector<HsgBranch>>(n2)));
    out.payoff1.assign(n, std::vector<std::vector<double>>(n1, std::vector<double>(n2, 0.0)));
    out.payoff2 = out.payoff1;
    for (int s = 0; s < n; ++s) {
        int s2 = state_perm[s];
        for (std::size_t i = 0; i < hsg.actions1.size(); ++i) {
            for (std::size_t j = 0; j < hsg.actions2.size(); ++j) {
                out.payoff1[s2][j][i] = hsg.payoff2[s][i][j];
                out.payoff2[s2][j][i] = hsg.payoff1[s][i][j];
                auto& row = out.transition[s2][j][i];
                for (const auto& br : hsg.transition[s][i][j])
                    row.push_back({state_perm[br.state], signal_perm[br.signal], br.prob});
                std::sort(row.begin(), row.end(), [](const HsgBranch& a, const HsgBranch& b) {
                    return a.state != b.state ? a.state < b.state : a.signal < b.signal;
                });
            }
        }
    }
    for (const auto& br : hsg.initial)
        out.initial.push_back({state_perm[br.state], signal_perm[br.signal], br.prob});
    std::sort(out.initial.begin(), out.initial.end(), [](const HsgBranch& a, const HsgBranch& b) {
        return a.state != b.state ? a.state < b.state : a.signal < b.signal;
    });
    return out;
}

}  // namespace dsg
