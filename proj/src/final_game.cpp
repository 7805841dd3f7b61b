#include "dsg/final_game.hpp"

#include <cmath>
#include <stdexcept>

#include "dsg/numeric.hpp"

namespace dsg {

namespace {

// action index layout for both players: (move, side) with move in {W, J} and
// side in {T, B} resp. {L, R}
inline int move_of(int action) { return action / 2; }  // 0 = W, 1 = J
inline int side_of(int action) { return action % 2; }  // 0 = T/L, 1 = B/R

}  // namespace

FinalGame build_final_game(double epsilon, double r, double alpha, double beta) {
    require(epsilon > 0.0 && epsilon <= 5.0 / 12.0, "epsilon must lie in (0, 5/12]");
    require(r > 0.0 && r < epsilon / 5.0, "r must lie in (0, epsilon/5)");
    require(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0,
            "chain parameters must lie in (0,1)");

    FinalGame game;
    game.epsilon = epsilon;
    game.r = r;
    game.alpha = alpha;
    game.beta = beta;

    auto& g = game.hsg;
    g.state_ids = {"k1",      "G1:(1,1)", "G1:(1,0)", "G1:(2,1)", "G1:(2,0)", "G2:(1,1)",
                   "G2:(1,0)", "G2:(2,1)", "G2:(2,0)", "1*",       "0*",       "(e,e)*",
                   "(1-e,1-e)*"};
    g.signal_ids = {"s[k1]", "G1:s1", "G1:s1'", "G1:s2", "G1:s2'", "G2:s1", "G2:s1'",
                    "G2:s2", "G2:s2'", "s1*",   "s0*",   "s[e]",   "s[1-e]"};
    g.actions1 = {"W,T", "W,B", "J,T", "J,B"};
    g.actions2 = {"W,L", "W,R", "J,L", "J,R"};

    const int k1 = game.k1;
    const int g1 = game.g1_first, g2 = game.g2_first;
    const int win = game.win, lose = game.lose;
    const int eps_abs = game.eps_abs, far_abs = game.far_abs;
    const int sig_k1 = 0, sig_g1 = 1, sig_g2 = 5, sig_win = 9, sig_lose = 10, sig_eps = 11,
              sig_far = 12;
    const int n = 13;

    g.transition.assign(n, std::vector<std::vector<std::vector<HsgBranch>>>(
                               4, std::vector<std::vector<HsgBranch>>(4)));
    g.payoff1.assign(n, std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0)));
    g.payoff2 = g.payoff1;

    // state-base payoffs; the +-r bimatrix is added on top of every cell.
    // Both players' bases are written from the same two literals so the
    // player swap is a bit-exact symmetry.
    std::vector<double> base1(n, 0.0), base2(n, 0.0);
    auto set_base = [&](int s, double b1, double b2) {
        base1[s] = b1;
        base2[s] = b2;
    };
    set_base(g1 + 0, r, 1.0 - r);  // G1 alpha side pays the jumper-to-be r
    set_base(g1 + 1, r, 1.0 - r);
    set_base(g1 + 2, 1.0 - r, r);
    set_base(g1 + 3, 1.0 - r, r);
    set_base(g2 + 0, 1.0 - r, r);  // in G2 the roles are exchanged
    set_base(g2 + 1, 1.0 - r, r);
    set_base(g2 + 2, r, 1.0 - r);
    set_base(g2 + 3, r, 1.0 - r);
    set_base(win, 1.0 - r, r);
    set_base(lose, r, 1.0 - r);
    set_base(eps_abs, epsilon, epsilon);
    set_base(far_abs, 1.0 - epsilon, 1.0 - epsilon);

    for (int s = 0; s < n; ++s) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                double u1 = base1[s] + (side_of(j) == 0 ? r : -r);
                double u2 = base2[s] + (side_of(i) == 0 ? r : -r);
                if (s == k1) {
                    // first-period component of the meta choice
                    if (move_of(i) == 0 && move_of(j) == 0) {
                        u1 += epsilon;
                        u2 += epsilon;
                    } else if (move_of(i) == 1 && move_of(j) == 1) {
                        u1 += 1.0 - epsilon;
                        u2 += 1.0 - epsilon;
                    }
                }
                g.payoff1[s][i][j] = u1;
                g.payoff2[s][i][j] = u2;
            }
        }
    }

    // k1: the move coordinates pick the continuation
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            auto& tr = g.transition[k1][i][j];
            if (move_of(i) == 0 && move_of(j) == 0) tr = {{eps_abs, sig_eps, 1.0}};
            else if (move_of(i) == 1 && move_of(j) == 1) tr = {{far_abs, sig_far, 1.0}};
            else if (move_of(i) == 1) tr = {{g1 + 2, sig_g1 + 2, 1.0}};  // (J1,W2): G1 from (2,1)
            else tr = {{g2 + 2, sig_g2 + 2, 1.0}};                       // (W1,J2): G2 from (2,1)
        }
    }

    // embedded copy: `mover` selects whose move coordinate drives each side
    // of the copy; the non-moving coordinates never matter
    auto fill_copy = [&](int first, int sig_first, bool p1_on_alpha) {
        const int s11 = first + 0, s10 = first + 1, s21 = first + 2, s20 = first + 3;
        const int sg1 = sig_first + 0, sg1p = sig_first + 1, sg2 = sig_first + 2,
                  sg2p = sig_first + 3;
        // side failures: the alpha-side jumper busts to the state paying it r
        const int alpha_bust = p1_on_alpha ? lose : win;
        const int alpha_bust_sig = p1_on_alpha ? sig_lose : sig_win;
        const int beta_bust = p1_on_alpha ? win : lose;
        const int beta_bust_sig = p1_on_alpha ? sig_win : sig_lose;
        auto assign = [&](int s, bool alpha_side, std::vector<HsgBranch> wait,
                          std::vector<HsgBranch> jump) {
            const bool p1_moves = alpha_side == p1_on_alpha;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    int mv = p1_moves ? move_of(i) : move_of(j);
                    g.transition[s][i][j] = mv == 0 ? wait : jump;
                }
        };
        assign(s11, true,
               {{s11, sg1, 1.0 - alpha}, {s11, sg1p, alpha * alpha},
                {s10, sg1p, alpha * (1.0 - alpha)}},
               {{alpha_bust, alpha_bust_sig, 1.0}});
        assign(s10, true, {{s11, sg1, 1.0 - alpha}, {s10, sg1p, alpha}}, {{s21, sg2, 1.0}});
        assign(s21, false,
               {{s21, sg2, 1.0 - beta}, {s21, sg2p, beta * beta},
                {s20, sg2p, beta * (1.0 - beta)}},
               {{beta_bust, beta_bust_sig, 1.0}});
        assign(s20, false, {{s21, sg2, 1.0 - beta}, {s20, sg2p, beta}}, {{s11, sg1, 1.0}});
    };
    fill_copy(g1, sig_g1, true);
    fill_copy(g2, sig_g2, false);

    for (auto [s, sig] : {std::pair{win, sig_win}, {lose, sig_lose}, {eps_abs, sig_eps},
                          {far_abs, sig_far}})
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) g.transition[s][i][j] = {{s, sig, 1.0}};

    g.initial = {{k1, sig_k1, 1.0}};
    g.validate();
    return game;
}

std::vector<int> final_game_state_swap(const FinalGame& game) {
    std::vector<int> p(13);
    p[game.k1] = game.k1;
    for (int k = 0; k < 4; ++k) {
        p[game.g1_first + k] = game.g2_first + k;
        p[game.g2_first + k] = game.g1_first + k;
    }
    p[game.win] = game.lose;
    p[game.lose] = game.win;
    p[game.eps_abs] = game.eps_abs;
    p[game.far_abs] = game.far_abs;
    return p;
}

std::vector<int> final_game_signal_swap(const FinalGame& game) {
    (void)game;
    std::vector<int> p(13);
    p[0] = 0;
    for (int k = 0; k < 4; ++k) {
        p[1 + k] = 5 + k;
        p[5 + k] = 1 + k;
    }
    p[9] = 10;
    p[10] = 9;
    p[11] = 11;
    p[12] = 12;
    return p;
}

RegimeResult regime_classify(const FinalGame& game, DiscountFactor delta) {
    RegimeResult out;
    auto sol = solve_game(game.jump_params(), delta);
    out.v_zero_sum = sol.value;
    out.v_delta = game.r + (1.0 - 2.0 * game.r) * sol.value;
    // delta >= 1-2r and delta >= 1/(1+2r), checked on the complement
    out.in_e1_domain = delta.log_complement() <= std::log(2.0 * game.r);
    out.in_e2_domain =
        delta.log_complement() <= std::log(2.0 * game.r) - std::log1p(2.0 * game.r);
    out.e1_margin = (game.epsilon - 5.0 * game.r) - sol.value;
    out.e2_margin = sol.value - (game.epsilon + 5.0 * game.r);
    if (out.in_e1_domain && out.e1_margin > 0.0) {
        out.regime = Regime::E1;
        out.square = game.e1_square();
    } else if (out.in_e2_domain && out.e2_margin > 0.0) {
        out.regime = Regime::E2;
        out.square = game.e2_square();
    }
    if (out.regime != Regime::Unclassified)
        out.certificates = first_stage_certificates(game, delta, out.regime);
    return out;
}

std::vector<Certificate> first_stage_certificates(const FinalGame& game, DiscountFactor delta,
                                                  Regime regime) {
    require(regime != Regime::Unclassified, "certificates exist only for a tagged regime");
    const double eps = game.epsilon, r = game.r;
    const double d = delta.value();
    const double v = game.r + (1.0 - 2.0 * game.r) * solve_game(game.jump_params(), delta).value;
    std::vector<Certificate> certs;
    auto add = [&](std::string name, double margin) {
        certs.push_back({std::move(name), margin, margin > 0.0});
    };
    if (regime == Regime::E1) {
        const double dv = d * v;
        add("delta*v below eps-2r(1+delta)", (eps - 2.0 * r * (1.0 + d)) - dv);
        add("delta*(1-v)-r above 1-eps+r", (d * (1.0 - v) - r) - (1.0 - eps + r));
        add("wait beats jump vs waiting opponent", (eps - r) - (d * (v + 3.0 * r) + (1.0 - d) * r));
        add("wait beats jump vs jumping opponent", (d * (1.0 - v) - r) - (1.0 - eps + r));
    } else {
        const double dv = d * v;
        add("delta*v above eps+2r", dv - (eps + 2.0 * r));
        add("delta*v above eps+2r+delta(1+2r)-1", dv - (eps + 2.0 * r + d * (1.0 + 2.0 * r) - 1.0));
        add("jump beats wait vs jumping opponent",
            ((1.0 - d) * (-r) + d * (v - r)) - (eps + r));
        add("jump beats wait vs waiting opponent",
            (1.0 - eps - r) - ((1.0 - d) * r + d * (1.0 - v + 3.0 * r)));
    }
    return certs;
}

PerturbedBounds perturbed_bounds(const FinalGame& game, DiscountFactor delta, double eta) {
    const double eps = game.epsilon, r = game.r;
    require(eta >= 0.0 && eta < r * (eps - 5.0 * r) / 4.0,
            "perturbation must lie in [0, r(eps-5r)/4)");
    auto tag = regime_classify(game, delta);
    if (tag.regime == Regime::Unclassified)
        throw std::invalid_argument("perturbed bounds need a discount classified E1 or E2");

    PerturbedBounds out;
    out.eta = eta;
    out.regime = tag.regime;
    out.e1_bound = {eps, eps, r + 2.0 * eta};
    out.e2_bound = {1.0 - eps, 1.0 - eps, r + 2.0 * eta};
    out.bound = tag.regime == Regime::E1 ? out.e1_bound : out.e2_bound;
    out.disjoint = out.e1_bound.hi1() < out.e2_bound.lo1();

    const double d = delta.value();
    const double dv = d * tag.v_delta;
    auto add = [&](std::string name, double margin) {
        out.checks.push_back({std::move(name), margin, margin > 0.0});
    };
    if (tag.regime == Regime::E1) {
        add("v_delta <= eps-4(r+eta)", (eps - 4.0 * (r + eta)) - tag.v_delta);
        add("v_delta <= eps-2(r+eta)+delta-1", (eps - 2.0 * (r + eta) + d - 1.0) - tag.v_delta);
    } else {
        add("delta*v_delta > eps-1+2(r+eta)+delta(1+2(r+eta))",
            dv - (eps - 1.0 + 2.0 * (r + eta) + d * (1.0 + 2.0 * (r + eta))));
        add("delta*v_delta > eps+2(r+eta)", dv - (eps + 2.0 * (r + eta)));
    }
    for (const auto& c : out.checks)
        if (!c.pass)
            throw std::runtime_error("perturbed bound precondition failed: " + c.name +
                                     " (margin " + std::to_string(c.margin) + ")");
    return out;
}

RegimeSearch find_regime_point(const FinalGame& game, Regime target, int walk_cap, int index) {
    require(target != Regime::Unclassified, "pick a target regime");
    require(walk_cap >= 1 && index >= 1, "bad walk parameters");
    // Low values (E1) arise where the alpha threshold is misaligned, i.e. on
    // the beta-grid enumeration; high values (E2) from the alpha grid.
    const JointSet set = target == Regime::E1 ? JointSet::Delta2 : JointSet::Delta1;
    auto points = joint_delta_enumerate(game.jump_params(), set, walk_cap);
    int matches = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        auto res = regime_classify(game, points[k].delta);
        if (res.regime != target) continue;
        bool all_pass = true;
        for (const auto& c : res.certificates) all_pass = all_pass && c.pass;
        if (!all_pass) continue;
        if (++matches == index) {
            RegimeSearch out;
            out.point = points[k];
            out.result = std::move(res);
            out.points_walked = static_cast<int>(k) + 1;
            out.match_index = matches;
            return out;
        }
    }
    throw std::runtime_error("no certified discount for the requested regime within " +
                             std::to_string(walk_cap) + " enumerated points");
}

}  // namespace dsg
