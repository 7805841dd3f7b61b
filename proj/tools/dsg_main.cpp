// Command-line front end: every number printed here is produced by a library
// call; this file only parses arguments and formats results.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsg/classic_examples.hpp"
#include "dsg/final_game.hpp"
#include "dsg/game_json.hpp"
#include "dsg/gamma_star.hpp"
#include "dsg/jump_game.hpp"
#include "dsg/risk_chain.hpp"
#include "dsg/threshold_mdp.hpp"

using nlohmann::json;
using namespace dsg;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitCertificates = 3;

// FNV-1a over the canonical parameter serialization
std::string content_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
    return buf;
}

struct Output {
    std::string command;
    json parameters = json::object();
    std::optional<std::uint64_t> seed;
    json results = json::object();
    json certificates = json::array();
    bool certified_ok = true;

    json envelope() const {
        json j;
        j["command"] = command;
        j["parameters"] = parameters;
        j["input_hash"] = content_hash(command + "\n" + parameters.dump());
        if (seed) j["seed"] = *seed;
        j["results"] = results;
        if (!certificates.empty()) j["certificates"] = certificates;
        j["timestamp"] = static_cast<long>(std::time(nullptr));
        return j;
    }
};

// flatten one level of arrays-of-objects into CSV rows
void write_csv(std::ostream& os, const json& results) {
    const json* rows = &results;
    json wrapper = json::array();
    if (!results.is_array()) {
        wrapper.push_back(results);
        rows = &wrapper;
    }
    if (rows->empty()) return;
    std::vector<std::string> cols;
    for (auto& [k, v] : rows->front().items()) {
        (void)v;
        cols.push_back(k);
    }
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << "\n";
    for (const auto& row : *rows) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) os << ",";
            const auto& v = row.value(cols[c], json());
            if (v.is_string()) os << v.get<std::string>();
            else os << v.dump();
        }
        os << "\n";
    }
}

struct Emit {
    std::string format = "json";
    std::string out_path;

    void add_to(CLI::App* app) {
        app->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
        app->add_option("--out", out_path, "write to a file instead of stdout");
    }
    int finish(const Output& o) const {
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) throw std::runtime_error("cannot open " + out_path);
            os = &file;
        }
        if (format == "csv") write_csv(*os, o.results);
        else *os << o.envelope().dump(2) << "\n";
        return o.certified_ok ? 0 : kExitCertificates;
    }
};

// --delta / --one-minus-delta, the latter mandatory once 1-delta underflows
struct DiscountOpt {
    std::optional<double> delta, one_minus;

    void add_to(CLI::App* app) {
        auto* d = app->add_option("--delta", delta, "discount factor in [0,1)");
        auto* x = app->add_option("--one-minus-delta", one_minus,
                                  "complement 1-delta; required when below 1e-12");
        d->excludes(x);  // presence itself is validated by resolve()
    }
    bool given() const { return delta.has_value() || one_minus.has_value(); }
    DiscountFactor resolve() const {
        if (one_minus) return DiscountFactor::from_complement(*one_minus);
        if (!delta) throw std::invalid_argument("provide --delta or --one-minus-delta");
        if (1.0 - *delta < 1e-12)
            throw std::invalid_argument(
                "--delta loses precision this close to 1; pass --one-minus-delta instead");
        return DiscountFactor::from_value(*delta);
    }
    void record(json& params) const {
        if (delta) params["delta"] = *delta;
        if (one_minus) params["one_minus_delta"] = *one_minus;
    }
};

json square_json(const Square& s) {
    return {{"center", {s.center1, s.center2}},
            {"half_side", s.half_side},
            {"corners", {{s.lo1(), s.lo2()}, {s.hi1(), s.lo2()}, {s.hi1(), s.hi2()},
                         {s.lo1(), s.hi2()}}}};
}

json certificates_json(const std::vector<Certificate>& certs, bool* all_pass) {
    json arr = json::array();
    for (const auto& c : certs) {
        arr.push_back({{"name", c.name}, {"margin", c.margin}, {"pass", c.pass}});
        if (!c.pass && all_pass) *all_pass = false;
    }
    return arr;
}

json delta_json(DiscountFactor d) {
    return {{"delta", d.value()},
            {"one_minus_delta", d.complement()},
            {"log_one_minus_delta", d.log_complement()}};
}

Regime parse_regime(const std::string& which) {
    if (which == "Delta1" || which == "E1") return Regime::E1;
    if (which == "Delta2" || which == "E2") return Regime::E2;
    throw std::invalid_argument("--which must be Delta1/E1 or Delta2/E2");
}

StationaryProfile profile_from_json(const FiniteStochasticGame& g, const json& j,
                                    std::vector<PayoffPair>* payoffs) {
    StationaryProfile p;
    p.act1.resize(g.n_states());
    p.act2.resize(g.n_states());
    for (int s = 0; s < g.n_states(); ++s) {
        p.act1[s].probs = j.at("x").at(g.state_ids[s]).get<std::vector<double>>();
        p.act2[s].probs = j.at("y").at(g.state_ids[s]).get<std::vector<double>>();
        auto r = j.at("r").at(g.state_ids[s]).get<std::vector<double>>();
        if (r.size() != 2) throw std::invalid_argument("r entries must be [p1, p2]");
        payoffs->push_back({r[0], r[1]});
    }
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"threshold games on shrinking risk grids: closed forms, oracles, certificates"};
    app.require_subcommand(1);

    Output out;
    Emit emit;
    int exit_code = 0;

    // ---- risk ----
    auto* risk = app.add_subcommand("risk", "hitting times of the risk chain");
    risk->require_subcommand(1);
    {
        static double alpha;
        static long level;
        static long samples = 100000;
        static std::uint64_t seed = 0;
        static DiscountOpt disc;

        auto* factor = risk->add_subcommand("factor", "E(delta^T) closed form");
        factor->add_option("--alpha", alpha)->required();
        factor->add_option("--a", level)->required();
        disc.add_to(factor);
        emit.add_to(factor);
        factor->callback([&] {
            auto d = disc.resolve();
            out.command = "risk factor";
            out.parameters = {{"alpha", alpha}, {"a", level}};
            disc.record(out.parameters);
            out.results = {{"factor", discounted_hit_factor(RiskChain{alpha}, d, level)},
                           {"log_factor", log_discounted_hit_factor(RiskChain{alpha}, d, level)}};
            exit_code = emit.finish(out);
        });

        auto* rec = risk->add_subcommand("recursion", "E(delta^T) by the recursion");
        rec->add_option("--alpha", alpha)->required();
        rec->add_option("--a", level)->required();
        disc.add_to(rec);
        emit.add_to(rec);
        rec->callback([&] {
            auto d = disc.resolve();
            out.command = "risk recursion";
            out.parameters = {{"alpha", alpha}, {"a", level}};
            disc.record(out.parameters);
            out.results = {{"factor", discounted_hit_recursion(RiskChain{alpha}, d, level)}};
            exit_code = emit.finish(out);
        });

        auto* time_cmd = risk->add_subcommand("time", "expected hitting time");
        time_cmd->add_option("--alpha", alpha)->required();
        time_cmd->add_option("--a", level)->required();
        emit.add_to(time_cmd);
        time_cmd->callback([&] {
            out.command = "risk time";
            out.parameters = {{"alpha", alpha}, {"a", level}};
            out.results = {{"expected_periods", expected_hitting_time(RiskChain{alpha}, level)}};
            exit_code = emit.finish(out);
        });

        auto* mc = risk->add_subcommand("mc", "Monte Carlo estimate of E(delta^T)");
        mc->add_option("--alpha", alpha)->required();
        mc->add_option("--a", level)->required();
        mc->add_option("--samples", samples);
        mc->add_option("--seed", seed);
        disc.add_to(mc);
        emit.add_to(mc);
        mc->callback([&] {
            auto d = disc.resolve();
            out.command = "risk mc";
            out.parameters = {{"alpha", alpha}, {"a", level}, {"samples", samples}};
            disc.record(out.parameters);
            out.seed = seed;
            auto res = hit_factor_mc(RiskChain{alpha}, d, level, samples, SeedStream{seed, 0});
            out.results = {{"mean", res.estimate.mean},
                           {"stderr", res.estimate.stderr_},
                           {"t_cap", res.t_cap},
                           {"closed_form", discounted_hit_factor(RiskChain{alpha}, d, level)}};
            exit_code = emit.finish(out);
        });
    }

    // ---- mdp ----
    auto* mdp = app.add_subcommand("mdp", "the optimal-stopping side of one chain");
    mdp->require_subcommand(1);
    {
        static double alpha, reward = 1.0, level_real, tol = 1e-9;
        static int levels = 60;
        static DiscountOpt disc;

        auto* score_cmd = mdp->add_subcommand("score", "threshold payoff s(a)");
        score_cmd->add_option("--alpha", alpha)->required();
        score_cmd->add_option("--a", level_real)->required();
        score_cmd->add_option("--reward", reward);
        disc.add_to(score_cmd);
        emit.add_to(score_cmd);
        score_cmd->callback([&] {
            auto d = disc.resolve();
            out.command = "mdp score";
            out.parameters = {{"alpha", alpha}, {"a", level_real}, {"reward", reward}};
            disc.record(out.parameters);
            MdpParams p{alpha, reward};
            out.results = {{"score", score(p, d, level_real)},
                           {"log_one_minus_score",
                            log_one_minus_score(MdpParams{alpha, 1.0}, d, level_real)}};
            exit_code = emit.finish(out);
        });

        auto* value_cmd = mdp->add_subcommand("value", "optimal threshold and value");
        value_cmd->add_option("--alpha", alpha)->required();
        value_cmd->add_option("--reward", reward);
        disc.add_to(value_cmd);
        emit.add_to(value_cmd);
        value_cmd->callback([&] {
            auto d = disc.resolve();
            out.command = "mdp value";
            out.parameters = {{"alpha", alpha}, {"reward", reward}};
            disc.record(out.parameters);
            auto v = mdp_value(MdpParams{alpha, reward}, d);
            out.results = {{"value", v.value},
                           {"argmax", v.argmax},
                           {"log_one_minus_value", v.log_one_minus}};
            exit_code = emit.finish(out);
        });

        auto* astar = mdp->add_subcommand("astar", "critical threshold");
        astar->add_option("--alpha", alpha)->required();
        disc.add_to(astar);
        emit.add_to(astar);
        astar->callback([&] {
            auto d = disc.resolve();
            out.command = "mdp astar";
            out.parameters = {{"alpha", alpha}};
            disc.record(out.parameters);
            out.results = {{"a_star", critical_threshold(MdpParams{alpha, 1.0}, d)}};
            exit_code = emit.finish(out);
        });

        auto* classify = mdp->add_subcommand("classify", "aligned/misaligned discount sets");
        classify->add_option("--alpha", alpha)->required();
        classify->add_option("--tol", tol);
        disc.add_to(classify);
        emit.add_to(classify);
        classify->callback([&] {
            auto d = disc.resolve();
            out.command = "mdp classify";
            out.parameters = {{"alpha", alpha}, {"tol", tol}};
            disc.record(out.parameters);
            auto t = level_set_classify(MdpParams{alpha, 1.0}, d, tol);
            const char* names[] = {"Delta1", "Delta2", "Neither"};
            out.results = {{"tag", names[static_cast<int>(t.tag)]},
                           {"a_star", t.a_star},
                           {"nearest_a", t.nearest_a},
                           {"eta", t.eta},
                           {"grid_distance", std::fabs(t.a_star - static_cast<double>(t.nearest_a))}};
            exit_code = emit.finish(out);
        });

        auto* bounds = mdp->add_subcommand("bounds", "sandwich around the critical score");
        bounds->add_option("--alpha", alpha)->required();
        disc.add_to(bounds);
        emit.add_to(bounds);
        bounds->callback([&] {
            auto d = disc.resolve();
            out.command = "mdp bounds";
            out.parameters = {{"alpha", alpha}};
            disc.record(out.parameters);
            auto b = score_bounds(MdpParams{alpha, 1.0}, d);
            out.results = {{"lower_at_astar", b.lower_at_astar},
                           {"upper_at_astar", b.upper_at_astar},
                           {"off_grid_upper", b.off_grid_upper},
                           {"score_at_astar", b.score_at_astar}};
            exit_code = emit.finish(out);
        });

        auto* ratio = mdp->add_subcommand("ratio", "(1-v)/sqrt(1-delta)");
        ratio->add_option("--alpha", alpha)->required();
        disc.add_to(ratio);
        emit.add_to(ratio);
        ratio->callback([&] {
            auto d = disc.resolve();
            out.command = "mdp ratio";
            out.parameters = {{"alpha", alpha}};
            disc.record(out.parameters);
            out.results = {{"ratio", asymptotic_ratio(MdpParams{alpha, 1.0}, d)}};
            exit_code = emit.finish(out);
        });

        auto* vi = mdp->add_subcommand("vi", "Bellman oracle on the truncated levels");
        vi->add_option("--alpha", alpha)->required();
        vi->add_option("--levels", levels);
        vi->add_option("--reward", reward);
        disc.add_to(vi);
        emit.add_to(vi);
        vi->callback([&] {
            auto d = disc.resolve();
            out.command = "mdp vi";
            out.parameters = {{"alpha", alpha}, {"levels", levels}, {"reward", reward}};
            disc.record(out.parameters);
            auto r = mdp_vi_oracle(MdpParams{alpha, reward}, d, levels, {});
            out.results = {{"value", r.value},
                           {"jump_level", r.jump_level},
                           {"residual", r.residual},
                           {"iterations", r.iters}};
            exit_code = emit.finish(out);
        });
    }

    // ---- jump ----
    auto* jump = app.add_subcommand("jump", "the two-sided jump game");
    jump->require_subcommand(1);
    {
        static double alpha, beta, epsilon;
        static long amax = 6, bmax = 6;
        static int count = 10, levels = 60;
        static std::string which = "Delta1";
        static DiscountOpt disc;

        auto* table = jump->add_subcommand("table", "threshold-profile payoffs g(a,b)");
        table->add_option("--alpha", alpha)->required();
        table->add_option("--beta", beta)->required();
        table->add_option("--amax", amax);
        table->add_option("--bmax", bmax);
        disc.add_to(table);
        emit.add_to(table);
        table->callback([&] {
            auto d = disc.resolve();
            out.command = "jump table";
            out.parameters = {{"alpha", alpha}, {"beta", beta}, {"amax", amax}, {"bmax", bmax}};
            disc.record(out.parameters);
            json rows = json::array();
            for (long a = 0; a <= amax; ++a)
                for (long b = 0; b <= bmax; ++b)
                    rows.push_back({{"a", a},
                                    {"b", b},
                                    {"payoff", profile_payoff(JumpGameParams{alpha, beta}, d, a, b)}});
            out.results = rows;
            exit_code = emit.finish(out);
        });

        auto* solve = jump->add_subcommand("solve", "dominant thresholds and the value");
        solve->add_option("--alpha", alpha)->required();
        solve->add_option("--beta", beta)->required();
        disc.add_to(solve);
        emit.add_to(solve);
        solve->callback([&] {
            auto d = disc.resolve();
            out.command = "jump solve";
            out.parameters = {{"alpha", alpha}, {"beta", beta}};
            disc.record(out.parameters);
            auto s = solve_game(JumpGameParams{alpha, beta}, d);
            out.results = {{"value", s.value},
                           {"a_sharp", s.a_sharp},
                           {"b_sharp", s.b_sharp},
                           {"v_alpha", s.v_alpha.value},
                           {"v_beta", s.v_beta.value}};
            exit_code = emit.finish(out);
        });

        auto* enumerate = jump->add_subcommand("enumerate", "joint discount-set points");
        enumerate->add_option("--alpha", alpha)->required();
        enumerate->add_option("--beta", beta)->required();
        enumerate->add_option("--which", which)->check(CLI::IsMember({"Delta1", "Delta2"}));
        enumerate->add_option("--count", count);
        emit.add_to(enumerate);
        enumerate->callback([&] {
            out.command = "jump enumerate";
            out.parameters = {{"alpha", alpha}, {"beta", beta}, {"which", which}, {"count", count}};
            auto pts = joint_delta_enumerate(JumpGameParams{alpha, beta},
                                             which == "Delta1" ? JointSet::Delta1 : JointSet::Delta2,
                                             count);
            json rows = json::array();
            for (auto& p : pts) {
                json row = {{"a", p.a}, {"b", p.b}, {"eta", p.eta}};
                row.update(delta_json(p.delta));
                row["value"] = solve_game(JumpGameParams{alpha, beta}, p.delta).value;
                rows.push_back(row);
            }
            out.results = rows;
            exit_code = emit.finish(out);
        });

        auto* curve = jump->add_subcommand("curve", "plot data for the oscillating value");
        curve->add_option("--alpha", alpha)->required();
        curve->add_option("--beta", beta)->required();
        curve->add_option("--count", count);
        emit.add_to(curve);
        curve->callback([&] {
            out.command = "jump curve";
            out.parameters = {{"alpha", alpha}, {"beta", beta}, {"count", count}};
            json rows = json::array();
            JumpGameParams p{alpha, beta};
            for (auto whichSet : {JointSet::Delta1, JointSet::Delta2})
                for (auto& pt : joint_delta_enumerate(p, whichSet, count)) {
                    json row = {{"set", whichSet == JointSet::Delta1 ? "Delta1" : "Delta2"},
                                {"grid_level", whichSet == JointSet::Delta1 ? pt.a : pt.b}};
                    row.update(delta_json(pt.delta));
                    row["value"] = solve_game(p, pt.delta).value;
                    rows.push_back(row);
                }
            out.results = rows;
            exit_code = emit.finish(out);
        });

        auto* bounds = jump->add_subcommand("bounds", "asymptotic floor and ceiling");
        bounds->add_option("--alpha", alpha)->required();
        bounds->add_option("--beta", beta)->required();
        emit.add_to(bounds);
        bounds->callback([&] {
            out.command = "jump bounds";
            out.parameters = {{"alpha", alpha}, {"beta", beta}};
            auto b = oscillation_bounds(JumpGameParams{alpha, beta});
            out.results = {{"delta1_value_floor", b.delta1_value_floor},
                           {"delta2_value_ceiling", b.delta2_value_ceiling},
                           {"b_coefficient", b_coefficient(JumpGameParams{alpha, beta})},
                           {"a_coefficient", a_coefficient(JumpGameParams{alpha, beta})}};
            exit_code = emit.finish(out);
        });

        auto* find = jump->add_subcommand("find-params", "smallest 1/n pair with the gap");
        find->add_option("--epsilon", epsilon)->required();
        emit.add_to(find);
        find->callback([&] {
            out.command = "jump find-params";
            out.parameters = {{"epsilon", epsilon}};
            auto p = find_parameters(epsilon);
            out.results = {{"n", p.n},
                           {"alpha", p.alpha},
                           {"beta", p.beta},
                           {"value_floor", p.value_floor},
                           {"value_ceiling", p.value_ceiling},
                           {"b_coefficient", p.b_coeff}};
            exit_code = emit.finish(out);
        });

        auto* vi = jump->add_subcommand("vi", "Bellman oracle on the truncated sides");
        vi->add_option("--alpha", alpha)->required();
        vi->add_option("--beta", beta)->required();
        vi->add_option("--levels", levels);
        disc.add_to(vi);
        emit.add_to(vi);
        vi->callback([&] {
            auto d = disc.resolve();
            out.command = "jump vi";
            out.parameters = {{"alpha", alpha}, {"beta", beta}, {"levels", levels}};
            disc.record(out.parameters);
            auto r = zerosum_vi_oracle(JumpGameParams{alpha, beta}, d, levels, {});
            out.results = {{"value", r.value},
                           {"jump_level_1", r.jump_level_1},
                           {"jump_level_2", r.jump_level_2},
                           {"residual", r.residual},
                           {"iterations", r.iters}};
            exit_code = emit.finish(out);
        });
    }

    // ---- hsg ----
    auto* hsg = app.add_subcommand("hsg", "the six-state hidden version");
    hsg->require_subcommand(1);
    {
        static double alpha, beta, rescale = -1.0;
        static long a_thr = -1, b_thr = -1, samples = 100000;
        static std::uint64_t seed = 0;
        static DiscountOpt disc;

        auto* build = hsg->add_subcommand("build", "emit the game in the JSON schema");
        build->add_option("--alpha", alpha)->required();
        build->add_option("--beta", beta)->required();
        build->add_option("--rescale", rescale, "apply x -> r+(1-2r)x to the payoffs");
        emit.add_to(build);
        build->callback([&] {
            out.command = "hsg build";
            out.parameters = {{"alpha", alpha}, {"beta", beta}};
            auto g = build_gamma_star(alpha, beta);
            if (rescale >= 0.0) {
                out.parameters["rescale"] = rescale;
                g = rescale_embed(g, rescale);
            }
            out.results = to_json(g);
            exit_code = emit.finish(out);
        });

        auto* sim = hsg->add_subcommand("simulate", "discounted payoff of threshold play");
        sim->add_option("--alpha", alpha)->required();
        sim->add_option("--beta", beta)->required();
        sim->add_option("--a", a_thr)->required();
        sim->add_option("--b", b_thr)->required();
        sim->add_option("--samples", samples);
        sim->add_option("--seed", seed);
        disc.add_to(sim);
        emit.add_to(sim);
        sim->callback([&] {
            auto d = disc.resolve();
            out.command = "hsg simulate";
            out.parameters = {{"alpha", alpha}, {"beta", beta}, {"a", a_thr}, {"b", b_thr},
                              {"samples", samples}};
            disc.record(out.parameters);
            out.seed = seed;
            auto chk = gamma_star_value_check(alpha, beta, d, {a_thr, b_thr}, samples,
                                              SeedStream{seed, 0});
            out.results = {{"mean", chk.mc.mean},
                           {"stderr", chk.mc.stderr_},
                           {"t_cap", chk.t_cap}};
            exit_code = emit.finish(out);
        });

        auto* check = hsg->add_subcommand(
            "check", "simulated threshold payoff against the closed form");
        check->add_option("--alpha", alpha)->required();
        check->add_option("--beta", beta)->required();
        check->add_option("--a", a_thr, "defaults to the dominant threshold");
        check->add_option("--b", b_thr, "defaults to the dominant threshold");
        check->add_option("--samples", samples);
        check->add_option("--seed", seed);
        disc.add_to(check);
        emit.add_to(check);
        check->callback([&] {
            auto d = disc.resolve();
            auto sol = solve_game(JumpGameParams{alpha, beta}, d);
            ThresholdProfile prof{a_thr >= 0 ? a_thr : sol.a_sharp,
                                  b_thr >= 0 ? b_thr : sol.b_sharp};
            out.command = "hsg check";
            out.parameters = {{"alpha", alpha}, {"beta", beta}, {"a", prof.a}, {"b", prof.b},
                              {"samples", samples}};
            disc.record(out.parameters);
            out.seed = seed;
            auto chk = gamma_star_value_check(alpha, beta, d, prof, samples, SeedStream{seed, 0});
            bool pass = std::fabs(chk.mc.mean - chk.closed_form) <=
                        3.0 * chk.mc.stderr_ + 1e-9;
            out.results = {{"mean", chk.mc.mean},
                           {"stderr", chk.mc.stderr_},
                           {"closed_form", chk.closed_form},
                           {"z_score", chk.z_score},
                           {"t_cap", chk.t_cap}};
            out.certificates.push_back(
                {{"name", "simulation within 3 standard errors of the closed form"},
                 {"margin", 3.0 * chk.mc.stderr_ + 1e-9 - std::fabs(chk.mc.mean - chk.closed_form)},
                 {"pass", pass}});
            out.certified_ok = pass;
            exit_code = emit.finish(out);
        });
    }

    // ---- final ----
    auto* fin = app.add_subcommand("final", "the thirteen-state two-square game");
    fin->require_subcommand(1);
    {
        static double epsilon = 0.3, r = 0.05, alpha = 1.0 / 4096.0, beta = 1.0 / 5000.0;
        static double eta = -1.0;
        static std::string which = "Delta1";
        static int index = 1, walk_cap = 200;
        static DiscountOpt disc;

        auto add_params = [&](CLI::App* cmd) {
            cmd->add_option("--epsilon", epsilon);
            cmd->add_option("--r", r);
            cmd->add_option("--alpha", alpha);
            cmd->add_option("--beta", beta);
        };
        auto param_json = [&] {
            return json{{"epsilon", epsilon}, {"r", r}, {"alpha", alpha}, {"beta", beta}};
        };

        auto* build = fin->add_subcommand("build", "emit the game in the JSON schema");
        add_params(build);
        emit.add_to(build);
        build->callback([&] {
            out.command = "final build";
            out.parameters = param_json();
            out.results = to_json(build_final_game(epsilon, r, alpha, beta).hsg);
            exit_code = emit.finish(out);
        });

        auto* classify = fin->add_subcommand(
            "classify", "tag a discount (or the index-th certified one) with its square");
        add_params(classify);
        classify->add_option("--which", which,
                             "Delta1/E1 walks toward the low square, Delta2/E2 the high one");
        classify->add_option("--index", index, "1-based index among certified discounts");
        classify->add_option("--walk-cap", walk_cap);
        disc.add_to(classify);
        emit.add_to(classify);
        classify->callback([&] {
            out.command = "final classify";
            out.parameters = param_json();
            auto game = build_final_game(epsilon, r, alpha, beta);
            RegimeResult res;
            json delta_info;
            if (disc.given()) {
                auto d = disc.resolve();
                disc.record(out.parameters);
                res = regime_classify(game, d);
                delta_info = delta_json(d);
            } else {
                out.parameters["which"] = which;
                out.parameters["index"] = index;
                auto hit = find_regime_point(game, parse_regime(which), walk_cap, index);
                res = hit.result;
                delta_info = delta_json(hit.point.delta);
                delta_info["grid_level"] =
                    hit.point.which == JointSet::Delta1 ? hit.point.a : hit.point.b;
                delta_info["eta"] = hit.point.eta;
                delta_info["points_walked"] = hit.points_walked;
            }
            const char* names[] = {"E1", "E2", "Unclassified"};
            out.results = {{"regime", names[static_cast<int>(res.regime)]},
                           {"v_zero_sum", res.v_zero_sum},
                           {"v_delta", res.v_delta},
                           {"e1_margin", res.e1_margin},
                           {"e2_margin", res.e2_margin},
                           {"discount", delta_info}};
            if (res.square) out.results["square"] = square_json(*res.square);
            bool all_pass = res.regime != Regime::Unclassified;
            out.certificates = certificates_json(res.certificates, &all_pass);
            out.certified_ok = all_pass;
            exit_code = emit.finish(out);
        });

        auto* certify = fin->add_subcommand("certify", "first-period dominance margins");
        add_params(certify);
        certify->add_option("--which", which);
        disc.add_to(certify);
        emit.add_to(certify);
        certify->callback([&] {
            auto d = disc.resolve();
            out.command = "final certify";
            out.parameters = param_json();
            out.parameters["which"] = which;
            disc.record(out.parameters);
            auto game = build_final_game(epsilon, r, alpha, beta);
            auto certs = first_stage_certificates(game, d, parse_regime(which));
            bool all_pass = true;
            out.certificates = certificates_json(certs, &all_pass);
            out.results = {{"discount", delta_json(d)}};
            out.certified_ok = all_pass;
            exit_code = emit.finish(out);
        });

        auto* perturb = fin->add_subcommand("perturb", "payoff-perturbation bounds");
        add_params(perturb);
        perturb->add_option("--eta", eta)->required();
        perturb->add_option("--which", which, "walk to a certified discount instead of --delta");
        perturb->add_option("--index", index);
        disc.add_to(perturb);
        emit.add_to(perturb);
        perturb->callback([&] {
            out.command = "final perturb";
            out.parameters = param_json();
            out.parameters["eta"] = eta;
            auto game = build_final_game(epsilon, r, alpha, beta);
            DiscountFactor d = DiscountFactor::from_value(0.0);
            if (disc.given()) {
                d = disc.resolve();
                disc.record(out.parameters);
            } else {
                out.parameters["which"] = which;
                out.parameters["index"] = index;
                d = find_regime_point(game, parse_regime(which), walk_cap, index).point.delta;
            }
            auto pb = perturbed_bounds(game, d, eta);
            bool all_pass = true;
            out.certificates = certificates_json(pb.checks, &all_pass);
            out.results = {{"regime", pb.regime == Regime::E1 ? "E1" : "E2"},
                           {"bound", square_json(pb.bound)},
                           {"e1_bound", square_json(pb.e1_bound)},
                           {"e2_bound", square_json(pb.e2_bound)},
                           {"disjoint", pb.disjoint},
                           {"discount", delta_json(d)}};
            out.certified_ok = all_pass && pb.disjoint;
            exit_code = emit.finish(out);
        });

        auto* squares = fin->add_subcommand("squares", "figure data for the two squares");
        add_params(squares);
        squares->add_option("--eta", eta, "also emit perturbed bounds at this radius");
        emit.add_to(squares);
        squares->callback([&] {
            out.command = "final squares";
            out.parameters = param_json();
            auto game = build_final_game(epsilon, r, alpha, beta);
            json rows = json::array();
            auto push = [&](const std::string& name, const Square& s) {
                rows.push_back({{"name", name},
                                {"lo1", s.lo1()},
                                {"hi1", s.hi1()},
                                {"lo2", s.lo2()},
                                {"hi2", s.hi2()}});
            };
            push("E1", game.e1_square());
            push("E2", game.e2_square());
            if (eta >= 0.0) {
                out.parameters["eta"] = eta;
                push("E1+eta", Square{epsilon, epsilon, r + 2.0 * eta});
                push("E2+eta", Square{1.0 - epsilon, 1.0 - epsilon, r + 2.0 * eta});
            }
            out.results = rows;
            exit_code = emit.finish(out);
        });
    }

    // ---- examples ----
    auto* ex = app.add_subcommand("examples", "the two standard counter-games");
    ex->require_subcommand(1);
    {
        static double delta = 0.5, cont_a = -1.0, cont_b = -2.0, tol = 1e-9;
        static long n_split = -1;
        static std::string game_name = "ex1", game_path, profile_path;

        auto* ex1 = ex->add_subcommand("ex1", "regime of the first game");
        ex1->add_option("--delta", delta)->required();
        ex1->add_option("--tol", tol);
        ex1->add_option("--n", n_split, "also run the split-automaton check at this horizon");
        emit.add_to(ex1);
        ex1->callback([&] {
            out.command = "examples ex1";
            out.parameters = {{"delta", delta}, {"tol", tol}};
            auto reg = ex1_regime(delta, tol);
            out.results = {{"grid_distance", reg.grid_distance},
                           {"on_grid", reg.n_periods.has_value()},
                           {"set_kind", reg.set.kind == EquilibriumSet::Kind::Segment
                                            ? "segment"
                                            : "singleton"},
                           {"note", reg.set.note}};
            if (reg.n_periods) out.results["n"] = *reg.n_periods;
            json pts = json::array();
            for (auto& p : reg.set.points) pts.push_back({p.p1, p.p2});
            out.results["points"] = pts;
            if (n_split > 0) {
                out.parameters["n"] = n_split;
                auto rep = ex1_spe_check(delta, n_split);
                out.results["automaton_pass"] = rep.pass;
                out.results["k3_conditional"] = {rep.k3_conditional.p1, rep.k3_conditional.p2};
                out.certificates.push_back({{"name", "one-shot deviations all unprofitable"},
                                            {"margin", 0.0},
                                            {"pass", rep.pass}});
                out.certified_ok = rep.pass;
            }
            exit_code = emit.finish(out);
        });

        auto* ex15 = ex->add_subcommand("ex15", "payoff family of the second game");
        ex15->add_option("--delta", delta)->required();
        ex15->add_option("--tol", tol);
        emit.add_to(ex15);
        ex15->callback([&] {
            out.command = "examples ex15";
            out.parameters = {{"delta", delta}, {"tol", tol}};
            auto set = ex15_payoff_set(delta, tol);
            out.results = {{"grid_distance", set.grid_distance},
                           {"k1_segment_included", set.k1_segment_included},
                           {"note", set.k1_note},
                           {"family_base", {set.family_base.p1, set.family_base.p2}},
                           {"family_endpoints",
                            {{set.family_endpoints[0].p1, set.family_endpoints[0].p2},
                             {set.family_endpoints[1].p1, set.family_endpoints[1].p2}}}};
            if (set.m_grid) out.results["m"] = *set.m_grid;
            exit_code = emit.finish(out);
        });

        auto* stage = ex->add_subcommand("stage", "stage equilibria of the second game");
        stage->add_option("--cont-a", cont_a)->required();
        stage->add_option("--cont-b", cont_b)->required();
        emit.add_to(stage);
        stage->callback([&] {
            out.command = "examples stage";
            out.parameters = {{"cont_a", cont_a}, {"cont_b", cont_b}};
            auto res = ex15_stage_nash(cont_a, cont_b);
            json rows = json::array();
            for (auto& eq : res.equilibria)
                rows.push_back({{"x", eq.x},
                                {"y", eq.y},
                                {"u1", eq.u1},
                                {"u2", eq.u2},
                                {"degenerate_tie", eq.degenerate_tie},
                                {"support", eq.support_note}});
            out.results = {{"equilibria", rows}, {"degenerate_families", res.degenerate_families}};
            exit_code = emit.finish(out);
        });

        auto* verify = ex->add_subcommand("stationary-verify",
                                          "check a stationary profile on a game file");
        verify->add_option("--game", game_path)->required();
        verify->add_option("--profile", profile_path)->required();
        verify->add_option("--delta", delta)->required();
        verify->add_option("--tol", tol);
        emit.add_to(verify);
        verify->callback([&] {
            out.command = "examples stationary-verify";
            out.parameters = {{"game", game_path}, {"profile", profile_path}, {"delta", delta},
                              {"tol", tol}};
            std::ifstream gf(game_path), pf(profile_path);
            if (!gf) throw std::invalid_argument("cannot read " + game_path);
            if (!pf) throw std::invalid_argument("cannot read " + profile_path);
            auto game = fsg_from_json(json::parse(gf));
            std::vector<PayoffPair> payoffs;
            auto prof = profile_from_json(game, json::parse(pf), &payoffs);
            auto res = stationary_eq_verify(game, DiscountFactor::from_value(delta), prof,
                                            payoffs, tol);
            out.results = {{"pass", res.pass}};
            if (!res.pass) {
                out.results["violated"] = res.violated;
                out.results["margin"] = res.margin;
            }
            out.certificates.push_back({{"name", res.pass ? "stationary equilibrium system"
                                                          : res.violated},
                                        {"margin", res.pass ? 0.0 : res.margin},
                                        {"pass", res.pass}});
            out.certified_ok = res.pass;
            exit_code = emit.finish(out);
        });

        auto* exp = ex->add_subcommand("export", "emit an example game in the JSON schema");
        exp->add_option("--game", game_name)->check(CLI::IsMember({"ex1", "ex15"}));
        emit.add_to(exp);
        exp->callback([&] {
            out.command = "examples export";
            out.parameters = {{"game", game_name}};
            out.results = to_json(game_name == "ex1" ? make_example1_game()
                                                     : make_example15_game());
            exit_code = emit.finish(out);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter domain violation: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::domain_error& e) {
        std::cerr << "parameter domain violation: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::runtime_error& e) {
        std::cerr << "certificate or search failure: " << e.what() << "\n";
        return kExitCertificates;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
