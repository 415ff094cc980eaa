// Exercises the installed binary end to end: exit-code contract, report
// output, and file generation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

const std::string kCli = PWINTERP_CLI_PATH;
const std::string kData = PWINTERP_DATA_DIR;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string out_path = "/tmp/pwinterp_cli_out.txt";
    const std::string cmd = kCli + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string data(const std::string& name) { return kData + "/" + name; }

bool file_exists(const std::string& path) {
    return std::ifstream(path).good();
}

}  // namespace

TEST_CASE("classify exit codes follow the criterion case") {
    CHECK(run("classify " + data("vaaler.json") + " --grid 512 --refine 1")
              .exit_code == 0);
    CHECK(run("classify " + data("diffquot_eps1.json") +
              " --grid 512 --refine 1")
              .exit_code == 2);
    CHECK(run("classify " + data("shifted_collide.json") +
              " --grid 512 --refine 1")
              .exit_code == 3);
}

TEST_CASE("classify reports the essential infimum") {
    const RunResult r =
        run("classify " + data("vaaler.json") + " --grid 512 --refine 1");
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["case"] == "positive_essinf");
    CHECK(std::abs(j["essinf_estimate"].get<double>() - 0.7853981633974483) <
          1e-4);
}

TEST_CASE("classify --serial matches the parallel run") {
    const RunResult a =
        run("classify " + data("vaaler.json") + " --grid 256 --refine 1");
    const RunResult b = run("classify " + data("vaaler.json") +
                            " --grid 256 --refine 1 --serial");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("classify --sampling reports sampling verdicts") {
    const RunResult r = run("classify " + data("vaaler.json") +
                            " --grid 256 --refine 1 --sampling --delta 1.5");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["stable_sampling"] == "no");
    CHECK(j["interpolation_set"] == "yes");
}

TEST_CASE("malformed inputs exit 64, unknown operators 65") {
    CHECK(run("classify " + data("malformed.json")).exit_code == 64);
    CHECK(run("classify " + data("unknown_type.json")).exit_code == 65);
}

TEST_CASE("kernels writes spectra and values for a good family") {
    const RunResult r = run("kernels " + data("vaaler.json") +
                            " --out /tmp/pwinterp_vaaler --grid 32 "
                            "--xrange -4:4:33");
    CHECK(r.exit_code == 0);
    CHECK(file_exists("/tmp/pwinterp_vaaler_spectra.csv"));
    CHECK(file_exists("/tmp/pwinterp_vaaler_kernels.csv"));
    CHECK(r.out.find("biorthogonality_residual") != std::string::npos);
}

TEST_CASE("kernels on a degenerate family exits with its case") {
    CHECK(run("kernels " + data("shifted_collide.json") +
              " --out /tmp/pwinterp_bad")
              .exit_code == 3);
    CHECK(run("kernels " + data("diffquot_eps1.json") +
              " --out /tmp/pwinterp_bad2 --closed-form diffquot")
              .exit_code == 2);
}

TEST_CASE("closed-form kernel export") {
    const RunResult r = run("kernels " + data("littmann3.json") +
                            " --out /tmp/pwinterp_litt --closed-form littmann "
                            "--xrange -4:4:17 --jrange 2");
    CHECK(r.exit_code == 0);
    CHECK(file_exists("/tmp/pwinterp_litt_kernels.csv"));

    const RunResult dyn = run("kernels " + data("littmann3.json") +
                              " --out /tmp/pwinterp_dyn --closed-form "
                              "dynamical --grid 32 --xrange -4:4:17 "
                              "--jrange 2");
    CHECK(dyn.exit_code == 0);
    CHECK(file_exists("/tmp/pwinterp_dyn_spectra.csv"));

    const RunResult trunc = run("kernels " + data("littmann3.json") +
                                " --out /tmp/pwinterp_dynt --closed-form "
                                "dynamical --grid 32 --jdyn 16 "
                                "--dyn-truncated --xrange -4:4:17 "
                                "--jrange 1");
    CHECK(trunc.exit_code == 0);
    CHECK(trunc.out.find("correction_tail_estimate") != std::string::npos);
}

TEST_CASE("reconstruct prints a summary and writes CSVs") {
    const RunResult r =
        run("reconstruct " + data("vaaler.json") + " " + data("sig3.json") +
            " --closed-form littmann --M 80 --grid-range -2:2:41 "
            "--out /tmp/pwinterp_rec");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["sup_err"].get<double>() < 5e-3);
    CHECK(j["M"].get<int>() == 80);
    CHECK(file_exists("/tmp/pwinterp_rec_reconstruction.csv"));
    CHECK(file_exists("/tmp/pwinterp_rec_samples.csv"));
}

TEST_CASE("reconstruct rejects mismatched kernel families") {
    CHECK(run("reconstruct " + data("shannon.json") + " " + data("sig3.json") +
              " --kernel-family " + data("vaaler.json"))
              .exit_code == 66);
}

TEST_CASE("verify subcommand runs a suite") {
    const RunResult r = run("verify twonode");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("pass") != std::string::npos);
    CHECK(run("verify nosuchsuite").exit_code == 1);
}
