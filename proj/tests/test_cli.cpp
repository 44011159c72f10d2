// End-to-end checks of the tcube binary. Each case spawns the real
// executable (TCUBE_CLI_PATH) against the shipped data/ corpus and inspects
// exit codes, stdout, and emitted files. Numeric behavior itself is covered
// by the unit suites; this file pins the command surface.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support/test_util.hpp"

using namespace tcube;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

// Runs the CLI with the given argument string; stderr is dropped (error text
// is asserted through exit codes, not wording).
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(TCUBE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(TCUBE_DATA_DIR) + "/" + name; }

fs::path work_dir() {
    const fs::path p = fs::temp_directory_path() / "tcube_cli_work";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string write_doc(const std::string& name, const Json& j) {
    const fs::path p = work_dir() / name;
    save_json_file(p.string(), j);
    return p.string();
}

DenseMatrix<RealDomain> dense2x2(double a, double b, double c, double d) {
    return DenseMatrix<RealDomain>(2, 2, RealDomain{}, {a, b, c, d});
}

}  // namespace

TEST_CASE("product command reproduces the worked examples", "[cli]") {
    SECTION("dense DK-STP to stdout") {
        auto r = run_cli("product --kind dkstp " + data("dk_dense_a.json") + " " +
                         data("dk_dense_b.json"));
        REQUIRE(r.code == 0);
        REQUIRE(dense_real_from_json(Json::parse(r.out)) == dense2x2(0, 4, 2, 0));
    }
    SECTION("cubic DK-STP through --out") {
        const fs::path out = work_dir() / "dk_out.json";
        auto r = run_cli("product --kind dkstp " + data("dk_a.json") + " " + data("dk_b.json") +
                         " --out " + out.string());
        REQUIRE(r.code == 0);
        REQUIRE(r.out.empty());
        const auto c = cubic_real_from_json(load_json_file(out.string()));
        REQUIRE(c.dims() == Dims{2, 2, 6});
        REQUIRE(frontal_slice(c, 0) == dense2x2(-1, 2, -4, 2));
        REQUIRE(frontal_slice(c, 2) == dense2x2(5, 2, 3, 0));
        REQUIRE(frontal_slice(c, 3) == dense2x2(9, -2, 3, 0));
    }
    SECTION("t-STP pair, all six slices") {
        auto r = run_cli("product --kind tstp " + data("tstp_a.json") + " " + data("tstp_b.json"));
        REQUIRE(r.code == 0);
        const auto c = cubic_real_from_json(Json::parse(r.out));
        REQUIRE(frontal_slice(c, 0) == dense2x2(6, 10, -2, 8));
        REQUIRE(frontal_slice(c, 1) == dense2x2(6, 14, -22, 12));
        REQUIRE(frontal_slice(c, 2) == dense2x2(6, 22, -22, 12));
        REQUIRE(frontal_slice(c, 3) == dense2x2(6, 26, -2, 8));
        REQUIRE(frontal_slice(c, 4) == dense2x2(6, 22, 18, 4));
        REQUIRE(frontal_slice(c, 5) == dense2x2(6, 14, 18, 4));
        // The corpus files carry exactly the operands the library tests use.
        const auto a = cubic_real_from_json(load_json_file(data("tstp_a.json")));
        const auto b = cubic_real_from_json(load_json_file(data("tstp_b.json")));
        REQUIRE(cubic_real_from_json(Json::parse(r.out)) == t_stp(a, b));
    }
}

TEST_CASE("exit codes distinguish usage from domain failures", "[cli]") {
    SECTION("usage errors exit 2") {
        REQUIRE(run_cli("").code == 2);
        REQUIRE(run_cli("frobnicate").code == 2);
        REQUIRE(run_cli("product " + data("dk_a.json")).code == 2);
        REQUIRE(run_cli("product --kind bogus a b").code == 2);
    }
    SECTION("shape and domain errors exit 3") {
        // 2x2x3 by 3x2x2 does not conform under the plain t-product.
        REQUIRE(run_cli("product " + data("dk_a.json") + " " + data("dk_b.json")).code == 3);
        REQUIRE(run_cli("product " + data("dk_a.json") + " /nonexistent.json").code == 3);
        REQUIRE(run_cli("product --kind dkstp " + data("dk_dense_a.json") + " " +
                        data("dk_a.json")).code == 3);
        const std::string odd = write_doc("unrecognized.json", Json{{"foo", 1}});
        REQUIRE(run_cli("validate " + odd).code == 3);
    }
    SECTION("non-convergence exits 4") {
        auto r = run_cli("func --series exp --terms 2 " + data("tstp_a.json"));
        REQUIRE(r.code == 4);
        // Radius violations are domain errors, not convergence failures.
        REQUIRE(run_cli("func --series log1p " + data("tstp_a.json")).code == 3);
    }
}

TEST_CASE("func, eig, and charpoly agree with library anchors", "[cli]") {
    const std::string zero =
        write_doc("zero222.json", cubic_to_json(CubicMatrix<RealDomain>(Dims{2, 2, 2}, RealDomain{})));
    SECTION("exp of the zero cubic is the t-identity") {
        auto r = run_cli("func --series exp " + zero);
        REQUIRE(r.code == 0);
        REQUIRE(cubic_real_from_json(Json::parse(r.out)) == identity_t(2, 2));
    }
    SECTION("eig of the t-identity") {
        const std::string ident = write_doc("ident23.json", cubic_to_json(identity_t(2, 3)));
        auto r = run_cli("eig " + ident);
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        REQUIRE(j["eigenvalues"].size() == 6);
        for (const Json& l : j["eigenvalues"]) {
            REQUIRE(l["re"].get<double>() == Catch::Approx(1.0).margin(1e-10));
            REQUIRE(l["im"].get<double>() == Catch::Approx(0.0).margin(1e-10));
        }
        for (const Json& res : j["residuals"]) REQUIRE(res.get<double>() < 1e-9);
    }
    SECTION("charpoly of the t-identity gamma image") {
        const std::string ident = write_doc("ident23.json", cubic_to_json(identity_t(2, 3)));
        auto r = run_cli("charpoly " + ident);
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        const std::vector<double> expect{1, -6, 15, -20, 15, -6, 1};  // (x-1)^6, ascending
        REQUIRE(j["coeffs"].size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i)
            REQUIRE(j["coeffs"][i].get<double>() == Catch::Approx(expect[i]).margin(1e-9));
    }
}

TEST_CASE("sim emits trajectories in both formats", "[cli]") {
    const fs::path csv = work_dir() / "traj.csv";
    const fs::path out = work_dir() / "traj.json";
    auto r = run_cli("sim " + data("system_continuous.json") + " " + data("x0.json") +
                     " --input " + data("input_step.json") +
                     " --t-final 1 --dt 0.01 --csv " + csv.string() + " --out " + out.string());
    REQUIRE(r.code == 0);
    const std::string text = slurp(csv);
    REQUIRE(text.rfind("t,x_0_0_0,x_1_0_0,x_0_0_1,x_1_0_1\n0,1,0,0,0.5\n", 0) == 0);
    REQUIRE(std::count(text.begin(), text.end(), '\n') == 102);  // header + 101 states
    const Json j = load_json_file(out.string());
    REQUIRE(j["times"].size() == 101);
    REQUIRE(j["states"].size() == 101);
}

TEST_CASE("game pipeline on the shipped instance", "[cli]") {
    const auto a = cubic_mod_from_json(load_json_file(data("game_A.json")));
    const auto b = cubic_mod_from_json(load_json_file(data("game_B.json")));
    const auto e = cubic_mod_from_json(load_json_file(data("game_E.json")));
    const auto w0 = cubic_mod_from_json(load_json_file(data("game_W0.json")));
    SECTION("synthesize reaches the target exactly") {
        const fs::path out = work_dir() / "synth.json";
        auto r = run_cli("game-synthesize --A " + data("game_A.json") + " --B " +
                         data("game_B.json") + " --target " + data("game_E.json") +
                         " --out " + out.string());
        REQUIRE(r.code == 0);
        REQUIRE(r.out == "residual: 0 (entries differing mod 12)\n");
        const Json j = load_json_file(out.string());
        REQUIRE(j["feasible"].get<bool>());
        REQUIRE(j["residual"].get<int>() == 0);
        REQUIRE(j["divisors"].size() == 8);
        const auto f = cubic_mod_from_json(j["F"]);
        REQUIRE(add(a, t_stp(b, f)) == e);
    }
    SECTION("evolve matches the library step") {
        auto r = run_cli("game-evolve --A " + data("game_A.json") + " --W0 " +
                         data("game_W0.json") + " --steps 4");
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        REQUIRE(j["states"].size() == 5);
        REQUIRE(cubic_mod_from_json(j["states"][0]) == w0);
        REQUIRE(cubic_mod_from_json(j["states"][1]) == t_stp(a, w0));
    }
    SECTION("parallel multi-profile run returns one trajectory per W0") {
        auto single = run_cli("game-evolve --A " + data("game_A.json") + " --W0 " +
                              data("game_W0.json") + " --steps 3");
        auto batch = run_cli("game-evolve --A " + data("game_A.json") + " --W0 " +
                             data("game_W0.json") + " --W0 " + data("game_E.json") +
                             " --steps 3 --jobs 2");
        REQUIRE(batch.code == 0);
        const Json arr = Json::parse(batch.out);
        REQUIRE(arr.is_array());
        REQUIRE(arr.size() == 2);
        REQUIRE(arr[0] == Json::parse(single.out));
    }
    SECTION("cycle detection terminates inside the budget") {
        auto r = run_cli("game-cycle --A " + data("game_A.json") + " --W0 " +
                         data("game_W0.json") + " --max-steps 200000");
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        REQUIRE(j["found"].get<bool>());
        REQUIRE(j["period"].get<long long>() >= 1);
        REQUIRE(j["steps_used"].get<long long>() <= 200000);
    }
}

TEST_CASE("hyper-dual prints the expected dual sets", "[cli]") {
    SECTION("figure hypergraph") {
        auto r = run_cli("hyper-dual " + data("hypergraph.json"));
        REQUIRE(r.code == 0);
        const Hypergraph d = hypergraph_from_json(Json::parse(r.out));
        REQUIRE(d.vertex_names ==
                std::vector<std::string>{"e1", "e2", "e3", "e4", "e5", "e6"});
        const std::vector<std::vector<int>> expect{{4},    {4}, {2, 3},    {2},
                                                   {1, 2}, {0}, {0, 3, 5}, {0, 1}};
        REQUIRE(d.edges == expect);
    }
    SECTION("built-in supply chain") {
        auto r = run_cli("hyper-dual --supply-chain");
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        const Hypergraph d = hypergraph_from_json(j["dual"]);
        REQUIRE(d.edges.size() == 9);
        REQUIRE(d.edges[0] == std::vector<int>{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22});
        REQUIRE(d.edges[5] == std::vector<int>{0, 1, 8, 9, 16, 17});
        const Hypergraph h = hypergraph_from_json(j["hypergraph"]);
        REQUIRE(h.vertex_names.size() == 9);   // 2 manufacturers + 3 wholesalers + 4 markets
        REQUIRE(h.edges.size() == 24);         // one chain per (i, j, k)
    }
    SECTION("missing operand is a usage-level error") {
        REQUIRE(run_cli("hyper-dual").code == 3);
    }
}

TEST_CASE("validate classifies the corpus", "[cli]") {
    SECTION("hypergraph report includes simplicity") {
        auto r = run_cli("validate " + data("hypergraph.json"));
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        REQUIRE(j["type"] == "hypergraph");
        REQUIRE(j["valid"].get<bool>());
        // e6 = {x7} sits inside e4, so the structure is valid but not simple.
        REQUIRE_FALSE(j["simple"].get<bool>());
    }
    SECTION("cubic, series, and system documents") {
        auto rc = run_cli("validate " + data("game_A.json"));
        REQUIRE(rc.code == 0);
        REQUIRE(Json::parse(rc.out)["dims"] == "2x3x4");
        const std::string series =
            write_doc("series.json", Json{{"constant", 1.0}, {"coeffs", {1.0, 0.5}}});
        REQUIRE(Json::parse(run_cli("validate " + series).out)["type"] == "series");
        REQUIRE(Json::parse(run_cli("validate " + data("system_continuous.json")).out)["type"] ==
                "system");
    }
    SECTION("strict gamma accepts exactly the block-circulant images") {
        const auto a = cubic_real_from_json(load_json_file(data("dk_a.json")));
        const std::string good = write_doc("gamma_good.json", dense_to_json(gamma(a)));
        auto r = run_cli("validate --strict-gamma --dims 2,2,3 " + good);
        REQUIRE(r.code == 0);
        REQUIRE(Json::parse(r.out)["block_circulant"].get<bool>());
        auto g = gamma(a);
        g.at(0, 0) += 1.0;
        const std::string bad = write_doc("gamma_bad.json", dense_to_json(g));
        REQUIRE(run_cli("validate --strict-gamma --dims 2,2,3 " + bad).code == 3);
        REQUIRE(run_cli("validate --strict-gamma " + good).code == 3);  // missing --dims
    }
}

TEST_CASE("invocations are deterministic and never mutate inputs", "[cli]") {
    const std::string before = slurp(data("game_A.json"));
    const fs::path out1 = work_dir() / "det1.json";
    const fs::path out2 = work_dir() / "det2.json";
    const std::string synth = "game-synthesize --A " + data("game_A.json") + " --B " +
                              data("game_B.json") + " --target " + data("game_E.json") + " --out ";
    auto r1 = run_cli(synth + out1.string());
    auto r2 = run_cli(synth + out2.string());
    REQUIRE(r1.code == 0);
    REQUIRE(r1.out == r2.out);
    REQUIRE(slurp(out1) == slurp(out2));
    auto p1 = run_cli("product --kind tstp " + data("tstp_a.json") + " " + data("tstp_b.json"));
    auto p2 = run_cli("product --kind tstp " + data("tstp_a.json") + " " + data("tstp_b.json"));
    REQUIRE(p1.out == p2.out);
    REQUIRE(slurp(data("game_A.json")) == before);
}
