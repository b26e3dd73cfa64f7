#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "divisor_support.hpp"
#include "hopf/explorer.hpp"
#include "hopf/serialize.hpp"
#include "jacobian_support.hpp"

using namespace hopf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json identity_json() { return io::encode(GraphDivisor(Coeffs{0.0, 1.0}, Coeffs{-1.0, 0.0})); }

RunConfig config(const std::string& command, json j) { return parse_run_config(j, command); }

class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("hopf_explorer_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    fs::path write(const std::string& name, const json& j) const {
        std::ofstream(path_ / name) << j.dump();
        return path_ / name;
    }

  private:
    fs::path path_;
};

int run(const TempDir& dir, const std::string& command, const json& cfg, std::string* stdout_text = nullptr) {
    const fs::path p = dir.write(command + "_cfg.json", cfg);
    std::ostringstream out, err;
    const int code = run_tool(command, p, std::nullopt, dir.path(), out, err);
    if (stdout_text) *stdout_text = out.str() + err.str();
    return code;
}

}  // namespace

TEST(RunConfig, DefaultsAndEcho) {
    const RunConfig c = config("sample", json::object());
    EXPECT_EQ(c.n, 2);
    EXPECT_EQ(c.seed, 0u);
    EXPECT_EQ(c.mode, "census");
    EXPECT_DOUBLE_EQ(c.margin_threshold, 1e-10);
    const json e = encode(c);
    EXPECT_EQ(e["tolerances"]["max_depth"], 3);
    EXPECT_EQ(e["command"], "sample");
    EXPECT_NEAR(e["hopf"]["tau"][1].get<double>(), 1.0, 1e-15);
}

TEST(RunConfig, RejectsBadEntries) {
    for (const json& j : {json{{"n", 0}}, json{{"seed", -1}}, json{{"tolerances", {{"min_step", -1.0}}}},
                          json{{"mode", "walk"}}, json{{"schema", "v2"}}, json{{"mu", {2.0, 0.0}}},
                          json{{"samples", "many"}}, json::array()}) {
        try {
            config("sample", j);
            FAIL() << j.dump();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Parse) << j.dump();
        }
    }
    EXPECT_THROW(config("analyze", json::object()), Error);
    EXPECT_THROW(config("connect", json{{"start", identity_json()}}), Error);
}

TEST(RunConfig, MuInEitherComplexForm) {
    const RunConfig a = config("sample", json{{"mu", {0.1, 0.2}}});
    const RunConfig b = config("sample", json{{"mu", {{"re", 0.1}, {"im", 0.2}}}});
    EXPECT_EQ(a.hopf.mu(), cplx(0.1, 0.2));
    EXPECT_EQ(b.hopf.mu(), cplx(0.1, 0.2));
}

TEST(Analyze, IdentityMapIsElliptic) {
    const CommandResult r = cmd_analyze(config("analyze", json{{"divisor", identity_json()}}));
    const json& d = r.document;
    EXPECT_EQ(d["schema"], "v1");
    EXPECT_EQ(d["stratum"]["k"], 0);
    EXPECT_EQ(d["spectral_curve"]["genus"], 1);
    EXPECT_EQ(d["spectral_curve"]["branch_point_count"], 4);
    EXPECT_TRUE(d["regular"].get<bool>());
    EXPECT_EQ(d["fiber_types"].size(), 3u);
    EXPECT_EQ(d["dimension"]["total"], 4);
    EXPECT_EQ(d["config"]["command"], "analyze");
}

TEST(Analyze, PlantedJumpAndRandomCurve) {
    std::mt19937_64 rng(1);
    const auto planted = hopf::testing::planted_jumps(rng, 2, {1});
    const json jump = cmd_analyze(config("analyze", json{{"divisor", io::encode(planted.divisor)}})).document;
    EXPECT_EQ(jump["stratum"]["k"], 1);
    EXPECT_TRUE(jump["spectral_curve"].is_null());
    EXPECT_FALSE(jump["regular"].get<bool>());
    EXPECT_EQ(jump["special_fibers"][0]["kind"], "III");

    const json random = cmd_analyze(config("analyze", json{{"divisor", io::encode(hopf::testing::random_divisor(rng, 3))}}))
                            .document;
    EXPECT_EQ(random["spectral_curve"]["genus"], 5);
    EXPECT_EQ(random["spectral_curve"]["branch_point_count"], 12);
    EXPECT_EQ(random["special_fibers"].size(), 12u);
    for (const auto& f : random["special_fibers"]) EXPECT_EQ(f["kind"], "II");
}

TEST(Connect, IdenticalEndpointsAndRandomPair) {
    const json trivial =
        cmd_connect(config("connect", json{{"start", identity_json()}, {"end", identity_json()}})).document;
    EXPECT_EQ(trivial["base"]["waypoints"].size(), 1u);
    EXPECT_TRUE(trivial["fiber"].is_null());

    std::mt19937_64 rng(2);
    const json a = io::encode(hopf::testing::random_divisor(rng, 2));
    const json b = io::encode(hopf::testing::random_divisor(rng, 2));
    const json doc = cmd_connect(config("connect", json{{"start", a}, {"end", b}, {"seed", 4}})).document;
    EXPECT_GE(doc["base"]["certified_margin"].get<double>(), 1e-10);
    EXPECT_TRUE(doc["base"]["monodromy_safe"].get<bool>());
    EXPECT_EQ(doc["base"]["seed"], 4);

    const json fibred = cmd_connect(config("connect", json{{"start", {{"divisor", a}, {"fiber", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}}}},
                                                           {"end", {{"divisor", b}, {"fiber", {0.9, 0.8, 0.7, 0.6, 0.5, 0.4}}}}}))
                            .document;
    EXPECT_LE(fibred["fiber"]["endpoint_residual"].get<double>(), 1e-6);
    EXPECT_EQ(fibred["fiber"]["method"], "period-lattice continuation");
}

TEST(Sample, CensusAndDeterminism) {
    const RunConfig c = config("sample", json{{"n", 2}, {"samples", 2000}, {"seed", 9}});
    const CommandResult r = cmd_sample(c);
    EXPECT_EQ(r.document["census"]["counts"][0], 2000);
    EXPECT_EQ(r.document["census"]["irregular"], 0);
    EXPECT_DOUBLE_EQ(r.document["census"]["regular_fraction"].get<double>(), 1.0);
    EXPECT_EQ(cmd_sample(c).files.at("corpus.json"), r.files.at("corpus.json"));

    const HopfParameter h = HopfParameter::standard();
    std::vector<GraphDivisor> one, three;
    const CensusRecord a = census(2, 300, h, 5, 1, &one), b = census(2, 300, h, 5, 3, &three);
    EXPECT_EQ(a.counts, b.counts);
    ASSERT_EQ(one.size(), three.size());
    for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].joint(), three[i].joint());
    std::vector<GraphDivisor> other;
    census(2, 300, h, 6, 1, &other);
    EXPECT_NE(other[0].joint(), one[0].joint());
}

TEST(Sample, LimitModeDegenerates) {
    const json doc = cmd_sample(config("sample", json{{"n", 2}, {"mode", "limit"}, {"seed", 1}})).document;
    const json& lim = doc["limit"];
    EXPECT_TRUE(lim["margins_monotone"].get<bool>());
    EXPECT_TRUE(lim["jump_free_before_limit"].get<bool>());
    EXPECT_EQ(lim["limit_jumps"], 1);
    EXPECT_LT(lim["last_margin_before_limit"].get<double>(), 1e-12);
    EXPECT_GT(lim["samples"][0]["margin"].get<double>(), 1e-12);
}

TEST(Periods, LemniscaticAndRiemannRelations) {
    const CommandResult r = cmd_periods(config("periods", json{{"divisor", identity_json()}}));
    const json& p = r.document["periods"];
    const cplx tau = io::decode_complex(p["riemann"][0][0]);
    EXPECT_LE(std::abs(hopf::testing::j_invariant(tau) - 1728.0) / 1728.0, 1e-6);
    EXPECT_LE(std::abs(io::decode_complex(r.document["j_invariant"]) - 1728.0) / 1728.0, 1e-6);
    EXPECT_TRUE(p["metadata"]["chart_rotated"].get<bool>());
    EXPECT_EQ(p["metadata"]["quadrature_order"], 24);

    std::mt19937_64 rng(3);
    const json doc =
        cmd_periods(config("periods", json{{"divisor", io::encode(hopf::testing::random_divisor(rng, 2))}})).document;
    EXPECT_EQ(doc["periods"]["riemann"].size(), 3u);
    EXPECT_TRUE(doc["riemann_relations"]["symmetric"].get<bool>());
    EXPECT_TRUE(doc["riemann_relations"]["positive_definite"].get<bool>());
    EXPECT_TRUE(doc["j_invariant"].is_null());

    // Plot data: a header, then labels and numbers only.
    for (const auto& name : {"branch_points.csv", "integration_paths.csv"}) {
        std::istringstream in(r.files.at(name));
        std::string line;
        std::getline(in, line);
        int rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            std::istringstream cells(line);
            std::string cell;
            int column = 0;
            while (std::getline(cells, cell, ',')) {
                if (column++ == 0 && std::string(name) == "branch_points.csv") continue;
                std::size_t used = 0;
                std::stod(cell, &used);
                EXPECT_EQ(used, cell.size()) << cell;
            }
        }
        EXPECT_GT(rows, 4);
    }
}

TEST(Tool, ExitCodesPartitionOutcomes) {
    const TempDir dir;
    std::mt19937_64 rng(4);
    const json jump = io::encode(hopf::testing::planted_jumps(rng, 2, {1}).divisor);
    const auto e = branch_values(HopfParameter::standard()).values();
    const json irregular =
        io::encode(hopf::testing::planted_tangency(rng, 2, e[0], hopf::testing::random_point(rng)));
    const json good = io::encode(hopf::testing::random_divisor(rng, 2));

    EXPECT_EQ(run(dir, "analyze", {{"divisor", identity_json()}}), 0);
    EXPECT_EQ(run(dir, "connect", {{"start", identity_json()}, {"end", identity_json()}}), 0);
    EXPECT_EQ(run(dir, "analyze", {{"divisor", {{"n", 2}, {"A", {{1, 0}}}, {"B", {{1, 0}}}}}}), 2);
    EXPECT_EQ(run(dir, "connect", {{"start", good}, {"end", jump}}), 4);
    EXPECT_EQ(run(dir, "periods", {{"divisor", irregular}}), 6);
    EXPECT_EQ(run(dir, "connect", {{"start", good}, {"end", irregular}}), 4);

    std::ofstream(dir.path() / "broken.json") << "{\"divisor\": ";
    std::ostringstream out, err;
    EXPECT_EQ(run_tool("analyze", dir.path() / "broken.json", std::nullopt, dir.path(), out, err), 2);
    EXPECT_EQ(run_tool("analyze", dir.path() / "missing.json", std::nullopt, dir.path(), out, err), 2);
}

TEST(Tool, BudgetExhaustionExitsWithFive) {
    const TempDir dir;
    std::mt19937_64 rng(5);
    // No divisor has a margin above 1, so no path can be certified.
    const json cfg = {{"start", io::encode(hopf::testing::random_divisor(rng, 1))},
                      {"end", io::encode(hopf::testing::random_divisor(rng, 1))},
                      {"tolerances", {{"max_depth", 1}, {"margin_threshold", 10.0}}}};
    EXPECT_EQ(run(dir, "connect", cfg), 5);
}

TEST(Tool, RunPersistence) {
    const TempDir dir;
    std::ofstream(dir.path() / "d.json") << identity_json().dump();
    std::string text;
    ASSERT_EQ(run(dir, "periods", {{"divisor", "d.json"}, {"seed", 11}}, &text), 0);
    ASSERT_EQ(run(dir, "periods", {{"divisor", "d.json"}, {"seed", 11}}), 0);
    std::vector<fs::path> runs;
    for (const auto& entry : fs::directory_iterator(dir.path() / "runs")) runs.push_back(entry.path());
    ASSERT_EQ(runs.size(), 2u);
    std::sort(runs.begin(), runs.end());
    EXPECT_NE(text.find(runs[0].filename().string()), std::string::npos);
    const std::string name = runs[0].filename().string();
    EXPECT_EQ(name.substr(name.size() - 8), "-periods");

    json docs[2], configs[2];
    for (int i = 0; i < 2; ++i) {
        EXPECT_TRUE(fs::exists(runs[i] / "branch_points.csv"));
        EXPECT_TRUE(fs::exists(runs[i] / "integration_paths.csv"));
        std::ifstream(runs[i] / "periods.json") >> docs[i];
        std::ifstream(runs[i] / "config.json") >> configs[i];
    }
    EXPECT_EQ(docs[0], docs[1]);
    EXPECT_EQ(configs[0]["schema"], "v1");
    EXPECT_EQ(configs[0]["inputs_hash"], configs[1]["inputs_hash"]);
    EXPECT_EQ(configs[0]["inputs_hash"].get<std::string>().rfind("fnv1a64:", 0), 0u);
    EXPECT_EQ(docs[0]["config"]["seed"], 11);
    EXPECT_EQ(docs[0]["config"]["input_files"].size(), 1u);

    // A changed input file changes the hash.
    std::ofstream(dir.path() / "d.json") << io::encode(GraphDivisor(Coeffs{0.0, 2.0}, Coeffs{-1.0, 0.0})).dump();
    ASSERT_EQ(run(dir, "periods", {{"divisor", "d.json"}, {"seed", 11}}), 0);
    bool changed = false;
    for (const auto& entry : fs::directory_iterator(dir.path() / "runs")) {
        if (entry.path() == runs[0] || entry.path() == runs[1]) continue;
        json c;
        std::ifstream(entry.path() / "config.json") >> c;
        changed = c["inputs_hash"] != configs[0]["inputs_hash"];
    }
    EXPECT_TRUE(changed);
}

TEST(Tool, ThreadCountFromEnvironment) {
    ::setenv("HOPF_MODULI_THREADS", "3", 1);
    EXPECT_EQ(thread_count(), 3u);
    ::setenv("HOPF_MODULI_THREADS", "zero", 1);
    EXPECT_GE(thread_count(), 1u);
    ::unsetenv("HOPF_MODULI_THREADS");
}

TEST(Serialize, RoundTrips) {
    std::mt19937_64 rng(6);
    const GraphDivisor d = hopf::testing::random_divisor(rng, 3);
    const GraphDivisor back = io::decode_divisor(io::encode(d));
    EXPECT_EQ(back.joint(), d.joint());
    const ProjectivePoint p = hopf::testing::random_point(rng);
    const ProjectivePoint q = io::decode_point(io::encode(p));
    EXPECT_LT(chordal_distance(p, q), 1e-15);
    EXPECT_TRUE(io::decode_point("infinity").is_infinite());
    const HopfParameter h = HopfParameter::from_tau({0.2, 1.1});
    EXPECT_LT(std::abs(io::decode_hopf(io::encode(h)).mu() - h.mu()), 1e-16);
    EXPECT_THROW(io::decode_divisor(json{{"n", 1}, {"A", {{1, 0}}}, {"B", {{1, 0}, {0, 0}}}}), Error);
    EXPECT_THROW(io::decode_divisor(json{{"A", {{0, 0}}}, {"B", {{0, 0}}}}), Error);
    EXPECT_THROW(io::decode_complex(json("x")), Error);
}
