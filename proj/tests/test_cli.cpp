#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "exbounds/io.hpp"

using namespace exbounds;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

// Run the installed binary with stderr silenced unless merged; capture stdout.
CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args +
                            (merge_stderr ? " 2>&1" : " 2>/dev/null");
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_dir() {
    const auto dir =
        std::filesystem::temp_directory_path() / ("exb_cli_" + std::to_string(getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = temp_dir() / name;
    std::ofstream f(path);
    f << content;
    return path.string();
}

std::string bell_json() {
    return R"({"dims":[2,2],"matrix":[
       [[0.5,0],[0,0],[0,0],[0.5,0]],
       [[0,0],[0,0],[0,0],[0,0]],
       [[0,0],[0,0],[0,0],[0,0]],
       [[0.5,0],[0,0],[0,0],[0.5,0]]]})";
}

std::string mub_json() {
    const double r = 0.70710678118654752;
    json doc;
    doc["dimension"] = 2;
    doc["bases"] = json::array();
    doc["bases"].push_back(
        {{"label", "comp"}, {"vectors", {{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}}}});
    doc["bases"].push_back(
        {{"label", "hadamard"}, {"vectors", {{{r, 0}, {r, 0}}, {{r, 0}, {-r, 0}}}}});
    return doc.dump();
}

}  // namespace

TEST_CASE("cli: report on the Bell state with the MUB pair") {
    const std::string state = write_temp("bell.json", bell_json());
    const std::string ens = write_temp("mub.json", mub_json());
    const CliResult r = run_cli("bounds --state " + state + " --ensemble " + ens);
    CHECK(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("lhs").at("info_sum").get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.at("n").get<int>() == 2);
    CHECK(rep.at("worst_slack").get<double>() >= -1e-6);
    bool saw_thm1 = false;
    for (const auto& b : rep.at("bounds")) {
        if (b.at("name") == "thm1") {
            saw_thm1 = true;
            CHECK(b.at("value").get<double>() == doctest::Approx(2.0).epsilon(1e-9));
        }
    }
    CHECK(saw_thm1);
}

TEST_CASE("cli: bound selection filters the report") {
    const std::string state = write_temp("bell.json", bell_json());
    const std::string ens = write_temp("mub.json", mub_json());
    const CliResult r =
        run_cli("bounds --state " + state + " --ensemble " + ens + " --bounds thm1,MU");
    CHECK(r.exit_code == 0);
    const json rep = json::parse(r.out);
    REQUIRE(rep.at("bounds").size() == 2);
    CHECK(rep.at("bounds")[0].at("name") == "thm1");
    CHECK(rep.at("bounds")[1].at("name") == "MU");
}

TEST_CASE("cli: malformed input and bad selections exit with code 2") {
    const std::string state = write_temp("bell.json", bell_json());
    const std::string ens = write_temp("mub.json", mub_json());
    const std::string broken = write_temp("broken.json", R"({"dimension": 2, "bases": [)");
    CHECK(run_cli("bounds --state " + state + " --ensemble " + broken).exit_code == 2);

    // vector entry with wrong arity
    const std::string badvec = write_temp(
        "badvec.json",
        R"({"dimension":2,"bases":[{"label":"x","vectors":[[[1],[0,0]],[[0,0],[1,0]]]},
            {"label":"y","vectors":[[[1,0],[0,0]],[[0,0],[1,0]]]}]})");
    CHECK(run_cli("bounds --state " + state + " --ensemble " + badvec).exit_code == 2);

    // lemma2 needs three bases
    const CliResult lem = run_cli(
        "bounds --state " + state + " --ensemble " + ens + " --bounds lemma2", true);
    CHECK(lem.exit_code == 2);
    CHECK(lem.out.find("inapplicable") != std::string::npos);

    CHECK(run_cli("bounds --state " + state + " --ensemble " + ens +
                  " --bounds no_such_bound").exit_code == 2);
    CHECK(run_cli("definitely-not-a-subcommand").exit_code == 2);
    CHECK(run_cli("bounds").exit_code == 2);  // missing required options
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: fig2 sweep emits the pinned CSV") {
    const CliResult r = run_cli("sweep --preset fig2");
    CHECK(r.exit_code == 0);
    REQUIRE(!r.out.empty());
    // header is exact; rows are comma-separated with \n endings
    const std::size_t eol = r.out.find('\n');
    REQUIRE(eol != std::string::npos);
    CHECK(r.out.substr(0, eol) == "a,r_H,thm1,diff");
    CHECK(r.out.find('\r') == std::string::npos);

    int rows = 0;
    std::size_t pos = eol + 1;
    while (pos < r.out.size()) {
        const std::size_t next = r.out.find('\n', pos);
        REQUIRE(next != std::string::npos);  // every line is terminated
        const std::string line = r.out.substr(pos, next - pos);
        pos = next + 1;
        if (line.empty()) continue;
        ++rows;
        // diff column stays nonnegative up to tolerance
        const std::size_t last_comma = line.rfind(',');
        const double diff = std::stod(line.substr(last_comma + 1));
        CHECK(diff >= -1e-9);
    }
    CHECK(rows == 51);
}

TEST_CASE("cli: number formatting uses 12 significant digits") {
    const CliResult r = run_cli("sweep --preset fig1");
    CHECK(r.exit_code == 0);
    // row for a = 0.51: r_H = log2(4*0.51) = 1.0285691522, printed as
    // %.12g
    CHECK(r.out.find("1.0285691522") != std::string::npos);
    // no scientific-notation artifacts for the plain grid values
    CHECK(r.out.find("0.51,") != std::string::npos);
}

TEST_CASE("cli: scenario sweep with grid overrides") {
    const CliResult r = run_cli(
        "sweep --scenario qubit_family --grid a=0.5:0.25:1,phi=1.5707963267948966 "
        "--bounds r_H,r_CP");
    CHECK(r.exit_code == 0);
    const std::size_t eol = r.out.find('\n');
    CHECK(r.out.substr(0, eol) == "a,r_H,r_CP");
    int rows = 0;
    for (std::size_t pos = eol + 1; pos < r.out.size();) {
        const std::size_t next = r.out.find('\n', pos);
        if (next == std::string::npos) break;
        if (next > pos) ++rows;
        pos = next + 1;
    }
    CHECK(rows == 3);  // a = 0.5, 0.75, 1.0

    CHECK(run_cli("sweep --scenario qubit_family --grid a=0.5:0.25:1").exit_code == 2);
    CHECK(run_cli("sweep --scenario qubit_family --grid b=0:1:1 --bounds r_H").exit_code ==
          2);
    CHECK(run_cli("sweep --preset fig7").exit_code == 2);
}

TEST_CASE("cli: sweep writes to a file when asked") {
    const auto out = temp_dir() / "fig3.csv";
    std::filesystem::remove(out);
    const CliResult r = run_cli("sweep --preset fig3 --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out);
    std::string header;
    std::getline(f, header);
    CHECK(header == "theta,r_CP,thm1");
}

TEST_CASE("cli: verify is deterministic and honors fault injection") {
    const std::string args = "verify --trials 20 --dominance-states 30 --seed 11";
    const CliResult r1 = run_cli(args);
    const CliResult r2 = run_cli(args);
    CHECK(r1.exit_code == 0);
    CHECK(r1.out == r2.out);  // bitwise identical summaries
    CHECK(r1.out.find("PASS") != std::string::npos);
    CHECK(r1.out.find("FAIL") == std::string::npos);
    CHECK(r1.out.find("dominance d=2") != std::string::npos);
    CHECK(r1.out.find("dominance d=3") != std::string::npos);

    const CliResult bad =
        run_cli("verify --trials 10 --dominance-states 30 --dims 2 --omega-scale 0.99");
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("cli: verify accepts explicit ensemble files") {
    const std::string ens = write_temp("mub.json", mub_json());
    const CliResult r =
        run_cli("verify --trials 10 --dominance-states 20 --ensembles " + ens);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(r.out.find("lemma2") == std::string::npos);  // pair ensemble only
}

TEST_CASE("cli: compare emits winner column and win counts") {
    const CliResult r = run_cli(
        "compare --scenario qubit_family --grid a=0.5:0.1:1 --bounds r_H,thm1", true);
    CHECK(r.exit_code == 0);
    const std::size_t eol = r.out.find('\n');
    CHECK(r.out.substr(0, eol) == "a,r_H,thm1,min,winner");
    CHECK(r.out.find(",thm1\n") != std::string::npos);  // interior winner
    CHECK(r.out.find("wins thm1=") != std::string::npos);
    CHECK(r.out.find("wins r_H=") != std::string::npos);
}

TEST_CASE("cli: ensemble round-trip preserves 12 significant digits") {
    // build an ensemble with irrational amplitudes, serialize, reload
    const Ensemble e = parse_ensemble(mub_json());
    const std::string text = serialize_ensemble(e);
    const Ensemble back = parse_ensemble(text);
    REQUIRE(back.n() == e.n());
    for (int m = 0; m < e.n(); ++m) {
        const CMatrix diff = back.bases[static_cast<std::size_t>(m)].vectors -
                             e.bases[static_cast<std::size_t>(m)].vectors;
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(back.bases[static_cast<std::size_t>(m)].label ==
              e.bases[static_cast<std::size_t>(m)].label);
    }

    // and the state schema round-trips too
    const DensityMatrix rho = parse_state(bell_json());
    const DensityMatrix rho2 = parse_state(serialize_state(rho));
    CHECK((rho.mat - rho2.mat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(rho2.dims == rho.dims);
}

TEST_CASE("cli: state file errors carry location context") {
    const std::string ens = write_temp("mub.json", mub_json());
    const std::string badstate = write_temp(
        "badstate.json", R"({"dims":[2,2],"matrix":[[[0.5,0],[0,0],[0,0]],[],[],[]]})");
    const CliResult r =
        run_cli("bounds --state " + badstate + " --ensemble " + ens, true);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("row") != std::string::npos);
}
