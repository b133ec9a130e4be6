#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "svarladder/io.hpp"
#include "svarladder/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli_output.log";
    const std::string command =
        std::string(SVARLADDER_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    result.output = fixtures::read_file(log);
    return result;
}

fs::path write_feb18_json(const fs::path& dir) {
    const fs::path path = dir / "feb18.json";
    svl::write_factors_json(fixtures::feb18_factors(), path.string(), 0.1, 5000);
    return path;
}

fs::path write_series_csv(const fs::path& dir, const std::string& name, std::uint64_t seed,
                          long n = 3000) {
    svl::SynthSpec spec;
    spec.factors = fixtures::baseline_factors();
    spec.noise_scale = Eigen::VectorXd::Ones(4);
    spec.length = n;
    spec.seed = seed;
    const fs::path path = dir / name;
    svl::write_csv(svl::simulate(spec), path.string());
    return path;
}

}  // namespace

TEST_CASE("cli: missing input exits 1 with no outputs") {
    const auto dir = fixtures::fresh_dir("cli_missing");
    const auto out_dir = dir / "out";
    const RunResult r =
        run_cli("estimate " + (dir / "nope.csv").string() + " --out-dir " + out_dir.string(), dir);
    CHECK(r.exit_code == 1);
    CHECK(!fs::exists(out_dir / "nope.factors.json"));
}

TEST_CASE("cli: one corrupt file among three exits 2, the others are written") {
    const auto dir = fixtures::fresh_dir("cli_partial");
    write_series_csv(dir, "day1.csv", 1);
    fixtures::write_file(dir / "day2.csv", "b1,b2\n1.0,oops\n");
    write_series_csv(dir, "day3.csv", 3);
    const auto out_dir = dir / "out";

    const RunResult r = run_cli("estimate " + (dir / "day1.csv").string() + " " +
                                    (dir / "day2.csv").string() + " " + (dir / "day3.csv").string() +
                                    " --out-dir " + out_dir.string(),
                                dir);
    CHECK(r.exit_code == 2);
    CHECK(fs::exists(out_dir / "day1.factors.json"));
    CHECK(!fs::exists(out_dir / "day2.factors.json"));
    CHECK(fs::exists(out_dir / "day3.factors.json"));
    CHECK(r.output.find("FAILED") != std::string::npos);
}

TEST_CASE("cli: estimate emits the requested artifacts and a summary") {
    const auto dir = fixtures::fresh_dir("cli_emit");
    write_series_csv(dir, "run.csv", 11);
    const auto out_dir = dir / "out";
    const RunResult r =
        run_cli("estimate " + (dir / "run.csv").string() + " --out-dir " + out_dir.string() +
                    " --emit factors-json,svg,dot,propositions,loops",
                dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out_dir / "run.factors.json"));
    CHECK(fs::exists(out_dir / "run.ladder.svg"));
    CHECK(fs::exists(out_dir / "run.ladder.dot"));
    CHECK(fs::exists(out_dir / "run.propositions.txt"));
    CHECK(fs::exists(out_dir / "run.loops.txt"));
    CHECK(r.output.find("SNL") != std::string::npos);
}

TEST_CASE("cli: config file sets options, flags win") {
    const auto dir = fixtures::fresh_dir("cli_config");
    write_series_csv(dir, "run.csv", 13);
    fixtures::write_file(dir / "run.cfg", "threshold=0.2\ntail-window=800\n");
    const auto out_dir = dir / "out";

    const RunResult r = run_cli("estimate " + (dir / "run.csv").string() + " --config " +
                                    (dir / "run.cfg").string() + " --threshold 0.05 --out-dir " +
                                    out_dir.string(),
                                dir);
    CHECK(r.exit_code == 0);
    const std::string json = fixtures::read_file(out_dir / "run.factors.json");
    CHECK(json.find("\"threshold\": 0.05") != std::string::npos);
}

TEST_CASE("cli: simulate is deterministic per seed and prints the radius") {
    const auto dir = fixtures::fresh_dir("cli_sim");
    const auto factors = write_feb18_json(dir);

    const std::string args = "simulate --factors " + factors.string() + " --length 500 --seed 42";
    const RunResult a = run_cli(args + " --out " + (dir / "a.csv").string(), dir);
    const RunResult b = run_cli(args + " --out " + (dir / "b.csv").string(), dir);
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(a.output.find("spectral radius") != std::string::npos);
    CHECK(fixtures::read_file(dir / "a.csv") == fixtures::read_file(dir / "b.csv"));
}

TEST_CASE("cli: simulate refuses an unstable model") {
    const auto dir = fixtures::fresh_dir("cli_unstable");
    svl::CausalFactors unstable = fixtures::baseline_factors();
    unstable.lagged[0](0, 0) = 1.2;
    const fs::path path = dir / "unstable.json";
    svl::write_factors_json(unstable, path.string());

    const RunResult r = run_cli(
        "simulate --factors " + path.string() + " --out " + (dir / "x.csv").string(), dir);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("spectral radius") != std::string::npos);
    CHECK(!fs::exists(dir / "x.csv"));
}

TEST_CASE("cli: verify agrees with the reference at near-zero process noise") {
    const auto dir = fixtures::fresh_dir("cli_verify");
    const auto csv = write_series_csv(dir, "run.csv", 21, 20000);
    const RunResult r = run_cli("verify " + csv.string() +
                                    " --process-noise 1e-8 --init-variance 1e6 --tolerance 1e-2",
                                dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("max |delta|") != std::string::npos);
}

TEST_CASE("cli: verify exits 3 when the tolerance is exceeded") {
    const auto dir = fixtures::fresh_dir("cli_verify3");
    const auto csv = write_series_csv(dir, "run.csv", 22, 3000);
    const RunResult r = run_cli("verify " + csv.string() + " --tolerance 1e-12", dir);
    CHECK(r.exit_code == 3);
}

TEST_CASE("cli: verify under heavy process noise diverges from the reference") {
    const auto dir = fixtures::fresh_dir("cli_verify_noise");
    const auto csv = write_series_csv(dir, "run.csv", 25, 6000);
    const RunResult r = run_cli(
        "verify " + csv.string() + " --beta 1 --process-noise 1e-1 --tolerance 1e-2", dir);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("max |delta|") != std::string::npos);
}

TEST_CASE("cli: verify on a scalar AR(1) is tight") {
    const auto dir = fixtures::fresh_dir("cli_verify_ar1");
    svl::CausalFactors truth;
    truth.channel_names = {"y"};
    truth.structural = Eigen::MatrixXd::Zero(1, 1);
    truth.lagged = {0.5 * Eigen::MatrixXd::Identity(1, 1)};
    svl::SynthSpec spec;
    spec.factors = truth;
    spec.noise_scale = Eigen::VectorXd::Ones(1);
    spec.length = 100000;
    spec.seed = 61;
    const fs::path csv = dir / "ar1.csv";
    svl::write_csv(svl::simulate(spec), csv.string());

    const RunResult r = run_cli("verify " + csv.string() + " --tolerance 1e-3", dir);
    CHECK(r.exit_code == 0);
}

TEST_CASE("cli: graph reports on the worked tables") {
    const auto dir = fixtures::fresh_dir("cli_graph");
    const auto factors = write_feb18_json(dir);
    const auto out_dir = dir / "reports";
    const RunResult r =
        run_cli("graph --factors " + factors.string() + " --out-dir " + out_dir.string(), dir);
    CHECK(r.exit_code == 0);

    const std::string props = fixtures::read_file(out_dir / "feb18.propositions.txt");
    CHECK(props.find("B1(t-1) raises B1(t)") != std::string::npos);
    CHECK(props.find("[conflict]") != std::string::npos);
    CHECK(fixtures::read_file(out_dir / "feb18.x_patterns.txt") == "B2 <-> B3\n");
    const std::string loops = fixtures::read_file(out_dir / "feb18.feedback_loops.txt");
    CHECK(loops.find("positive") != std::string::npos);
    CHECK(fs::exists(out_dir / "feb18.ladder.svg"));
    CHECK(fs::exists(out_dir / "feb18.ladder.dot"));
}

TEST_CASE("cli: sparse baseline tables report no multi-edge loops") {
    const auto dir = fixtures::fresh_dir("cli_graph_base");
    const fs::path path = dir / "baseline.json";
    svl::write_factors_json(fixtures::baseline_factors(), path.string());
    const auto out_dir = dir / "reports";
    const RunResult r =
        run_cli("graph --factors " + path.string() + " --out-dir " + out_dir.string(), dir);
    CHECK(r.exit_code == 0);

    const std::string loops = fixtures::read_file(out_dir / "baseline.feedback_loops.txt");
    CHECK(loops.find("edges=1") != std::string::npos);   // self loops are always there
    CHECK(loops.find("edges=2") == std::string::npos);   // but nothing multi-edge
    CHECK(loops.find("edges=3") == std::string::npos);
    CHECK(fixtures::read_file(out_dir / "baseline.x_patterns.txt").empty());
    CHECK(fixtures::read_file(out_dir / "baseline.structural_cycles.txt").empty());
}

TEST_CASE("cli: empty factor table gives empty reports and exit 0") {
    const auto dir = fixtures::fresh_dir("cli_graph_empty");
    svl::CausalFactors empty;
    empty.channel_names = {"a", "b"};
    empty.structural = Eigen::MatrixXd::Zero(2, 2);
    empty.lagged = {Eigen::MatrixXd::Zero(2, 2)};
    const fs::path path = dir / "empty.json";
    svl::write_factors_json(empty, path.string());

    const auto out_dir = dir / "reports";
    const RunResult r =
        run_cli("graph --factors " + path.string() + " --out-dir " + out_dir.string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(fixtures::read_file(out_dir / "empty.propositions.txt").empty());
    CHECK(fixtures::read_file(out_dir / "empty.feedback_loops.txt").empty());
}

TEST_CASE("cli: directory input expands to the contained files in name order") {
    const auto dir = fixtures::fresh_dir("cli_dirin");
    const auto data_dir = dir / "days";
    fs::create_directories(data_dir);
    write_series_csv(data_dir, "day1.csv", 31);
    write_series_csv(data_dir, "day2.csv", 32);
    const auto out_dir = dir / "out";

    const RunResult r =
        run_cli("estimate " + data_dir.string() + " --out-dir " + out_dir.string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out_dir / "day1.factors.json"));
    CHECK(fs::exists(out_dir / "day2.factors.json"));
    CHECK(r.output.find("day1.csv") < r.output.find("day2.csv"));
}
