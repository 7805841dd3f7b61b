#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string cli_path;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult res;
    std::string cmd = cli_path + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
    int status = pclose(pipe);
    res.exit_code = WEXITSTATUS(status);
    return res;
}

std::string strip_timestamp(std::string text) {
    return std::regex_replace(text, std::regex("\"timestamp\": [0-9]+"), "\"timestamp\": 0");
}

}  // namespace

TEST_CASE("closed-form query") {
    auto res = run("risk factor --alpha 0.5 --delta 0.5 --a 1");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["results"]["factor"].get<double>() == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(j["command"] == "risk factor");
    CHECK(j.contains("input_hash"));
}

TEST_CASE("identical invocations give identical envelopes") {
    const char* cmd = "jump solve --alpha 0.2 --beta 0.3 --delta 0.9";
    auto a = run(cmd), b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));
}

TEST_CASE("csv output") {
    auto res = run("jump table --alpha 0.5 --beta 0.5 --delta 0.5 --amax 1 --bmax 1 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(res.out.rfind("a,b,payoff", 0) == 0);
    CHECK(res.out.find("\n1,1,0.9230769230769") != std::string::npos);
}

TEST_CASE("domain violations exit with code 2") {
    CHECK(run("mdp value --alpha 1.5 --delta 0.5").exit_code == 2);
    CHECK(run("risk factor --alpha 0.5 --a -1 --delta 0.5").exit_code == 2);
    CHECK(run("final build --epsilon 0.5 --r 0.05").exit_code == 2);
}

TEST_CASE("a discount too close to 1 must come as a complement") {
    CHECK(run("mdp value --alpha 0.5 --delta 0.9999999999999999").exit_code == 2);
    auto res = run("mdp value --alpha 0.5 --one-minus-delta 1e-16");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["results"]["argmax"].get<long>() > 0);
}

TEST_CASE("failed certificates exit with code 3") {
    CHECK(run("final certify --which Delta1 --delta 0.5").exit_code == 3);
}

TEST_CASE("classification walks to the low square") {
    auto res = run("final classify --epsilon 0.3 --r 0.05 --which Delta1 --index 5");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["results"]["regime"] == "E1");
    CHECK(j["results"]["square"]["corners"][0][0].get<double>() == doctest::Approx(0.25));
    CHECK(j["results"]["v_zero_sum"].get<double>() < 0.05);
    for (const auto& c : j["certificates"]) CHECK(c["pass"].get<bool>());
}

TEST_CASE("classification walks to the high square") {
    auto res = run("final classify --which Delta2 --index 1");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["results"]["regime"] == "E2");
    CHECK(j["results"]["square"]["corners"][0][0].get<double>() == doctest::Approx(0.65));
}

TEST_CASE("threshold diagnostics") {
    auto cls = run("mdp classify --alpha 0.5 --delta 0.875");
    CHECK(cls.exit_code == 0);
    auto j = json::parse(cls.out);
    CHECK(j["results"]["tag"] == "Delta1");
    CHECK(j["results"]["nearest_a"].get<long>() == 1);
    CHECK(j["results"]["grid_distance"].get<double>() <= 1e-9);

    auto b = run("mdp bounds --alpha 0.3 --delta 0.9");
    CHECK(b.exit_code == 0);
    auto jb = json::parse(b.out);
    CHECK(jb["results"]["lower_at_astar"].get<double>() <=
          jb["results"]["score_at_astar"].get<double>());
    CHECK(jb["results"]["score_at_astar"].get<double>() <=
          jb["results"]["upper_at_astar"].get<double>());
}

TEST_CASE("parameter search over the reciprocal family") {
    auto res = run("jump find-params --epsilon 0.25");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["results"]["n"].get<long>() == 1296);
    CHECK(j["results"]["value_floor"].get<double>() > 0.75);
    CHECK(j["results"]["value_ceiling"].get<double>() < 0.25);
}

TEST_CASE("oscillation curve plot data") {
    auto res = run("jump curve --alpha 0.000244140625 --beta 0.0002 --count 4 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("log_one_minus_delta") != std::string::npos);
    // both branches of the curve appear
    CHECK(res.out.find("Delta1") != std::string::npos);
    CHECK(res.out.find("Delta2") != std::string::npos);
}

TEST_CASE("squares figure data") {
    auto csv = run("final squares --epsilon 0.3 --r 0.05 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("hi1,hi2,lo1,lo2,name", 0) == 0);
    auto res = run("final squares --epsilon 0.3 --r 0.05");
    auto j = json::parse(res.out);
    REQUIRE(j["results"].size() == 2);
    CHECK(j["results"][1]["name"] == "E2");
    CHECK(j["results"][1]["lo1"].get<double>() == doctest::Approx(0.65));
    CHECK(j["results"][1]["hi1"].get<double>() == doctest::Approx(0.75));
}

TEST_CASE("simulation check agrees with the closed form") {
    auto res = run("hsg check --alpha 0.5 --beta 0.5 --delta 0.5 --samples 20000 --seed 18");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(std::fabs(j["results"]["z_score"].get<double>()) <= 3.5);
}

TEST_CASE("stationary verification through game files") {
    auto exported = run("examples export --game ex1");
    REQUIRE(exported.exit_code == 0);
    auto game = json::parse(exported.out)["results"];
    {
        std::ofstream f("/tmp/dsg_cli_game.json");
        f << game.dump();
    }
    // the safe-door profile with its induced payoffs at delta = 0.9
    json profile;
    for (const auto& s : game["states"]) {
        std::string id = s.get<std::string>();
        profile["x"][id] = {1.0, 0.0};
        profile["y"][id] = {1.0, 0.0};
    }
    profile["r"]["k1"] = {0.5, 0.0};
    profile["r"]["k2"] = {0.05, 0.5};
    profile["r"]["k3"] = {1.0, 0.0};
    profile["r"]["(1/2,0)*"] = {0.5, 0.0};
    profile["r"]["(0,1/2)*"] = {0.0, 0.5};
    profile["r"]["(-1,-1)*"] = {-1.0, -1.0};
    profile["r"]["(0,1)*"] = {0.0, 1.0};
    {
        std::ofstream f("/tmp/dsg_cli_profile.json");
        f << profile.dump();
    }
    auto res = run("examples stationary-verify --game /tmp/dsg_cli_game.json "
                   "--profile /tmp/dsg_cli_profile.json --delta 0.9");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["results"]["pass"].get<bool>());
}

TEST_CASE("example regime queries") {
    auto res = run("examples ex1 --delta 0.7937005259840998 --n 3");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["results"]["on_grid"].get<bool>());
    CHECK(j["results"]["n"].get<long>() == 3);
    CHECK(j["results"]["automaton_pass"].get<bool>());

    auto off = run("examples ex15 --delta 0.8");
    auto j2 = json::parse(off.out);
    CHECK(!j2["results"]["k1_segment_included"].get<bool>());
}

int main(int argc, char** argv) {
    doctest::Context ctx;
    if (argc > 1 && argv[1][0] != '-') {
        cli_path = argv[1];
        ctx.applyCommandLine(argc - 1, argv + 1);
    } else {
        cli_path = "./tools/dsg";
        ctx.applyCommandLine(argc, argv);
    }
    return ctx.run();
}
