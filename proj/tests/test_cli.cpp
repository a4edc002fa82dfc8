// Command-line front end, driven end to end through the built binary:
// output shapes, numeric agreement with the library, exit codes, run
// manifests, and environment overrides.

#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace bassnet;

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "bassnet-cli-tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    REQUIRE(bool(out));
}

// Runs the binary through the shell with stdout/stderr captured to files.
RunResult run_cli(const std::string& argv_tail, const std::string& env = "") {
    static int counter = 0;
    const fs::path out =
        work_dir() / ("stdout" + std::to_string(counter) + ".txt");
    const fs::path err =
        work_dir() / ("stderr" + std::to_string(counter) + ".txt");
    ++counter;
    std::string cmd = env.empty() ? std::string() : env + " ";
    cmd += std::string(BASSNET_CLI_PATH) + " " + argv_tail + " > " +
           out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    if (raw != -1 && WIFEXITED(raw)) r.exit_code = WEXITSTATUS(raw);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// Parses one CSV data line into numeric fields.
std::vector<double> csv_fields(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
}

// A 5-node one-sided circle written once and reused across test cases.
const fs::path& circle5_path() {
    static const fs::path p = [] {
        const fs::path path = work_dir() / "circle5.json";
        spit(path, network_to_json(gen_circle(5, 0.3, 0.6)).dump(2) + "\n");
        return path;
    }();
    return p;
}

} // namespace

TEST_CASE("cli: --version and --help succeed") {
    const RunResult v = run_cli("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find(BASSNET_VERSION) != std::string::npos);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("gen --help").exit_code == 0);
}

TEST_CASE("cli: gen circle writes a loadable network plus a run manifest") {
    const fs::path net = work_dir() / "gen-c4.json";
    const RunResult r = run_cli("gen circle --M 4 --p 0.25 --q 0.5 --out " +
                                net.string());
    REQUIRE(r.exit_code == 0);

    const Network loaded = network_from_json_string(slurp(net));
    CHECK(loaded.M() == 4);
    CHECK(loaded.p(3) == 0.25);
    CHECK(loaded.q(1, 2) == 0.5);
    CHECK(loaded.q(4, 1) == 0.5);
    CHECK(loaded.q(2, 1) == 0.0);

    const nlohmann::json man =
        nlohmann::json::parse(slurp(net.string() + ".manifest.json"));
    CHECK(man["command"].get<std::string>().find("gen circle --M 4") !=
          std::string::npos);
    CHECK(man["version"].get<std::string>() == BASSNET_VERSION);
    CHECK(man["inputs"].is_object());
    CHECK(man["inputs"].empty()); // gen reads no files
    CHECK(man["seeds"].is_array());
    CHECK(man["seeds"].empty());
    CHECK(man["wall_ms"].is_number());
}

TEST_CASE("cli: gen two-sided line needs both directional rates") {
    const fs::path net = work_dir() / "gen-line.json";
    REQUIRE(run_cli("gen line --M 4 --p 0.2 --qR 0.5 --qL 0.3 --out " +
                    net.string())
                .exit_code == 0);
    const Network line = network_from_json_string(slurp(net));
    // qL is the rate received from the left neighbor (edges k -> k+1),
    // qR the rate received from the right neighbor (edges k+1 -> k).
    CHECK(line.q(1, 2) == 0.3);
    CHECK(line.q(2, 1) == 0.5);
    CHECK(line.q(4, 1) == 0.0); // no wrap-around edges

    // --qR without --qL is a usage error, as is mixing --q with --qR.
    CHECK(run_cli("gen line --M 4 --p 0.2 --qR 0.5 --out -").exit_code == 3);
    CHECK(run_cli("gen line --M 4 --p 0.2 --q 0.4 --qR 0.5 --qL 0.1 --out -")
              .exit_code == 3);
}

TEST_CASE("cli: solve emits the t,value grid and matches the library") {
    const RunResult r = run_cli("solve --net " + circle5_path().string() +
                                " --tmax 3 --steps 30 --out -");
    REQUIRE(r.exit_code == 0);

    const std::vector<std::string> rows = lines_of(r.out);
    REQUIRE(rows.size() == 32); // header plus 31 grid points
    CHECK(rows[0] == "t,value");

    const Network net = gen_circle(5, 0.3, 0.6);
    std::vector<double> times;
    for (int i = 0; i <= 30; ++i) times.push_back(3.0 * i / 30.0);
    const Curve level = f_level(net, times);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::vector<double> f = csv_fields(rows[i]);
        REQUIRE(f.size() == 2);
        CHECK(f[0] == Catch::Approx(times[i - 1]).margin(1e-12));
        CHECK(f[1] == Catch::Approx(level.values[i - 1]).margin(1e-9));
    }

    // Writing to stdout puts the single-line manifest on stderr.
    const std::vector<std::string> errs = lines_of(r.err);
    REQUIRE(errs.size() == 1);
    const nlohmann::json man = nlohmann::json::parse(errs[0]);
    REQUIRE(man["inputs"].size() == 1);
    const std::string h = man["inputs"].begin().value().get<std::string>();
    CHECK(h.rfind("fnv1a64:", 0) == 0);
    CHECK(h.size() == 8 + 16);
}

TEST_CASE("cli: solve target options are mutually exclusive") {
    const std::string base = "solve --net " + circle5_path().string() +
                             " --tmax 1 --steps 2 ";
    CHECK(run_cli(base + "--node 2 --out -").exit_code == 0);
    CHECK(run_cli(base + "--omega 1,2 --out -").exit_code == 0);
    CHECK(run_cli(base + "--pair 1,3 --out -").exit_code == 0);
    CHECK(run_cli(base + "--node 2 --level --out -").exit_code == 3);
    CHECK(run_cli(base + "--pair 1,2,3 --out -").exit_code == 3);
    CHECK(run_cli(base + "--omega 1,frog --out -").exit_code == 3);
}

TEST_CASE("cli: formula circle reproduces the frozen reference value") {
    // p = 0.3, q = 0.6 sits on the singular line q = 2p: the value must come
    // out of the exact fallback, matching the arbitrary-precision reference.
    const RunResult r =
        run_cli("formula circle --p 0.3 --q 0.6 --M 5 --tmax 1 --steps 2 "
                "--out -");
    REQUIRE(r.exit_code == 0);
    const std::vector<std::string> rows = lines_of(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "t,value");
    const std::vector<double> last = csv_fields(rows[3]);
    REQUIRE(last.size() == 2);
    CHECK(last[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(last[1] ==
          Catch::Approx(oracles::f_circle_1_03_06_5).margin(1e-12));

    // With the fallback disabled the same parameters are a validation error.
    CHECK(run_cli("formula circle --p 0.3 --q 0.6 --M 5 "
                  "--singular-fallback off --out -")
              .exit_code == 3);
}

TEST_CASE("cli: exit codes separate usage, validation, budget, and checks") {
    // 2: unknown subcommand or missing required option (CLI parse errors).
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);
    CHECK(run_cli("solve").exit_code == 2);
    CHECK(run_cli("gen circle --M 4 --p 0.2").exit_code == 2); // no --out
    CHECK(run_cli("verify nosuchfamily").exit_code == 2);

    // 3: validation failures inside the library or argument parsing.
    CHECK(run_cli("gen circle --M 0 --p 0.3 --q 0.6 --out -").exit_code == 3);
    CHECK(run_cli("gen circle --M 4 --p -0.1 --q 0.6 --out -").exit_code == 3);
    CHECK(run_cli("solve --net /nonexistent-net.json --out -").exit_code == 3);

    // 4: the state-space budget.
    const fs::path big = work_dir() / "circle20.json";
    REQUIRE(run_cli("gen circle --M 20 --p 0.1 --q 0.4 --out " + big.string())
                .exit_code == 0);
    CHECK(run_cli("solve --net " + big.string() + " --out -").exit_code == 4);
    CHECK(run_cli("gen torus --D 3 --M1 200 --p 0.1 --q 0.4 --out -")
              .exit_code == 4);
}

TEST_CASE("cli: BASSNET_STATE_CAP raises the solver budget") {
    const fs::path big = work_dir() / "circle17.json";
    REQUIRE(run_cli("gen circle --M 17 --p 0.2 --q 0.4 --out " + big.string())
                .exit_code == 0);
    const std::string solve =
        "solve --net " + big.string() + " --node 1 --tmax 1 --steps 2 --out -";
    CHECK(run_cli(solve).exit_code == 4);
    const RunResult ok = run_cli(solve, "BASSNET_STATE_CAP=17");
    CHECK(ok.exit_code == 0);
    CHECK(lines_of(ok.out).size() == 4);
}

TEST_CASE("cli: simulate reports t,mean,stderr and is seed-reproducible") {
    const std::string base = "simulate --net " + circle5_path().string() +
                             " --runs 1500 --tmax 2 --steps 8 ";
    const RunResult a = run_cli(base + "--seed 7 --jobs 2 --out -");
    REQUIRE(a.exit_code == 0);
    const std::vector<std::string> rows = lines_of(a.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "t,mean,stderr");
    const std::vector<double> last = csv_fields(rows.back());
    REQUIRE(last.size() == 3);
    CHECK(last[0] == Catch::Approx(2.0).margin(1e-12));
    CHECK(last[1] > 0.0);
    CHECK(last[1] < 1.0);
    CHECK(last[2] > 0.0);

    // The manifest records the seed.
    const nlohmann::json man = nlohmann::json::parse(lines_of(a.err)[0]);
    REQUIRE(man["seeds"].size() == 1);
    CHECK(man["seeds"][0].get<std::uint64_t>() == 7);

    // Same seed, different worker count: bit-identical bytes.
    const RunResult b = run_cli(base + "--seed 7 --jobs 5 --out -");
    REQUIRE(b.exit_code == 0);
    CHECK(b.out == a.out);

    // Different seed: different estimates.
    const RunResult c = run_cli(base + "--seed 8 --jobs 2 --out -");
    REQUIRE(c.exit_code == 0);
    CHECK(c.out != a.out);

    // The discrete scheme and explicit targets parse.
    CHECK(run_cli(base + "--seed 7 --scheme dt:0.05 --target node:3 --out -")
              .exit_code == 0);
    CHECK(run_cli(base + "--seed 7 --target omega:1,2 --out -").exit_code == 0);
    CHECK(run_cli(base + "--seed 7 --target pair:1,3 --out -").exit_code == 0);
    CHECK(run_cli(base + "--seed 7 --scheme dt:99 --out -").exit_code == 3);
    CHECK(run_cli(base + "--seed 7 --target pair:1 --out -").exit_code == 3);
}

TEST_CASE("cli: analyze influential flags exactly the influence-bearing "
          "edges") {
    // Chain 1 -> 2 -> 3 with the target {2}: node 1 (a path into the target)
    // and the target itself count as influential; node 3 and edge 2->3 do
    // not.
    const fs::path chain = work_dir() / "chain3.json";
    spit(chain, network_to_json(gen_line(3, 0.2, 0.5)).dump(2) + "\n");
    const RunResult r =
        run_cli("analyze influential --net " + chain.string() +
                " --omega 2 --out -");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["omega"] == nlohmann::json::array({2}));
    CHECK(doc["influential_nodes"] == nlohmann::json::array({1, 2}));
    REQUIRE(doc["influential_edges"].size() == 2);
    for (const auto& e : doc["influential_edges"]) {
        const bool is_12 = e["from"] == 1 && e["to"] == 2;
        CHECK(e["influential"].get<bool>() == is_12);
    }
}

TEST_CASE("cli: analyze reduce drops exactly the non-influential edges") {
    const fs::path chain = work_dir() / "chain3r.json";
    spit(chain, network_to_json(gen_line(3, 0.2, 0.5)).dump(2) + "\n");
    const RunResult r = run_cli("analyze reduce --net " + chain.string() +
                                " --omega 2 --out -");
    REQUIRE(r.exit_code == 0);
    const Network red = network_from_json_string(r.out);
    CHECK(red.M() == 3);
    REQUIRE(red.edges().size() == 1);
    CHECK(red.edges()[0].from == 1);
    CHECK(red.edges()[0].to == 2);
}

TEST_CASE("cli: analyze funnel and cut report the partition predicates") {
    const fs::path path3 = work_dir() / "path3.json";
    spit(path3,
         network_to_json(gen_line_two_sided(3, 0.2, 0.4, 0.4)).dump(2) + "\n");
    const RunResult r = run_cli("analyze funnel --net " + path3.string() +
                                " --A 1 --B 3 --j 2 --out -");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["funnel_node"].get<bool>());
    CHECK(doc["vertex_cut"].get<bool>());

    const RunResult c = run_cli("analyze cut --net " + path3.string() +
                                " --A 1 --B 3 --j 2 --out -");
    REQUIRE(c.exit_code == 0);
    CHECK(nlohmann::json::parse(c.out)["vertex_cut"].get<bool>());

    // An invalid partition is a validation failure.
    CHECK(run_cli("analyze funnel --net " + path3.string() +
                  " --A 1 --B 1 --j 2 --out -")
              .exit_code == 3);
}

TEST_CASE("cli: analyze dominate emits the relation with witnesses") {
    const Network a(3, {0.2, 0.2, 0.2}, {{1, 2, 0.5}, {2, 3, 0.4}}, "a");
    const Network b(3, {0.2, 0.2, 0.2}, {{1, 2, 0.9}, {2, 3, 0.4}}, "b");
    const fs::path pa = work_dir() / "domA.json";
    const fs::path pb = work_dir() / "domB.json";
    spit(pa, network_to_json(a).dump(2) + "\n");
    spit(pb, network_to_json(b).dump(2) + "\n");

    const RunResult eq = run_cli("analyze dominate --netA " + pa.string() +
                                 " --netB " + pa.string() + " --out -");
    REQUIRE(eq.exit_code == 0);
    CHECK(nlohmann::json::parse(eq.out)["relation"] == "equal");

    const RunResult st = run_cli("analyze dominate --netA " + pa.string() +
                                 " --netB " + pb.string() + " --j 3 --out -");
    REQUIRE(st.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(st.out);
    CHECK(doc["relation"] == "strictly_dominated");
    REQUIRE(doc["witnesses"].size() == 1);
    CHECK(doc["witnesses"][0]["kind"] == "q");
    CHECK(doc["witnesses"][0]["from"] == 1);
    CHECK(doc["witnesses"][0]["to"] == 2);
    // The strict coordinate 1->2 feeds node 3 through 2->3.
    CHECK(doc["strict_node_prediction"].get<bool>());

    const RunResult rev = run_cli("analyze dominate --netA " + pb.string() +
                                  " --netB " + pa.string() + " --j 3 --out -");
    REQUIRE(rev.exit_code == 0);
    const nlohmann::json rdoc = nlohmann::json::parse(rev.out);
    CHECK(rdoc["relation"] == "incomparable");
    CHECK(rdoc["strict_node_prediction"].is_null());
}

TEST_CASE("cli: verify runs fixtures files and gates the exit code") {
    // One passing circle-product fixture.
    nlohmann::json doc;
    doc["checks"] = nlohmann::json::array();
    doc["checks"].push_back({{"family", "circle"},
                             {"kind", "product"},
                             {"p", 0.2},
                             {"q1", 0.4},
                             {"q2", 0.4},
                             {"M", 6},
                             {"times", {0.0, 1.0}}});
    const fs::path fx = work_dir() / "fixtures.json";
    spit(fx, doc.dump(2) + "\n");

    const RunResult pass =
        run_cli("verify circle --fixtures " + fx.string() + " --out -");
    REQUIRE(pass.exit_code == 0);
    const nlohmann::json rep = nlohmann::json::parse(pass.out);
    CHECK(rep["pass"].get<bool>());
    REQUIRE(rep["checks"].size() == 1);
    CHECK(pass.err.find("[PASS]") != std::string::npos);

    // A family filter that matches nothing still succeeds (no checks run).
    const RunResult none =
        run_cli("verify pair --fixtures " + fx.string() + " --out -");
    REQUIRE(none.exit_code == 0);
    CHECK(nlohmann::json::parse(none.out)["checks"].empty());

    // An unreachable margin floor turns the run into exit code 5.
    doc["checks"][0]["require_margin"] = 0.5;
    spit(fx, doc.dump(2) + "\n");
    const RunResult fail =
        run_cli("verify circle --fixtures " + fx.string() + " --out -");
    CHECK(fail.exit_code == 5);
    CHECK(fail.err.find("[FAIL]") != std::string::npos);
    CHECK_FALSE(nlohmann::json::parse(fail.out)["pass"].get<bool>());

    // Unparseable fixtures files are validation errors.
    spit(fx, "{not json\n");
    CHECK(run_cli("verify circle --fixtures " + fx.string() + " --out -")
              .exit_code == 3);
}

TEST_CASE("cli: verify writes the report and manifest to files") {
    nlohmann::json doc;
    doc["checks"] = nlohmann::json::array();
    doc["checks"].push_back({{"family", "chebyshev"},
                             {"kind", "1d"},
                             {"f", {0.0, 0.5, 1.0}},
                             {"g", {0.0, 0.25, 1.0}},
                             {"w", {1.0, 1.0, 1.0}},
                             {"a", 0.0},
                             {"b", 1.0}});
    const fs::path fx = work_dir() / "cheb-fixture.json";
    const fs::path rep = work_dir() / "report.json";
    spit(fx, doc.dump(2) + "\n");

    const RunResult r = run_cli("verify all --fixtures " + fx.string() +
                                " --seed 99 --out " + rep.string());
    REQUIRE(r.exit_code == 0);
    CHECK(nlohmann::json::parse(slurp(rep))["pass"].get<bool>());

    const nlohmann::json man =
        nlohmann::json::parse(slurp(rep.string() + ".manifest.json"));
    REQUIRE(man["inputs"].size() == 1); // the fixtures file, hashed
    const std::string h = man["inputs"].begin().value().get<std::string>();
    CHECK(h.rfind("fnv1a64:", 0) == 0);
    REQUIRE(man["seeds"].size() == 1);
    CHECK(man["seeds"][0].get<std::uint64_t>() == 99);
}
