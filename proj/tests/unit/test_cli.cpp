#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "qcsense/report.hpp"

using namespace qcsense;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("qcsense_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(QCSENSE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json load(const std::string& path) { return Json::parse(slurp(path)); }

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

const char* kReferenceMatrix = "8.23,4.19,2.56,3.96\n4.78,2.88,5.76,13.43\n";

}  // namespace

TEST_CASE("analyze on the reference matrix") {
    Scratch s;
    write(s.path("m.csv"), kReferenceMatrix);
    REQUIRE(run("analyze --input " + s.path("m.csv") + " --dup 1 --epsilon 0.1 --output " + s.path("r.json")) == 0);
    const Json r = load(s.path("r.json"));
    CHECK(r["schema"] == 1);
    CHECK(r["command"] == "analyze");
    CHECK(r["input"]["rows"] == 2);
    CHECK(r["input"]["sha256"].get<std::string>().size() == 64);
    CHECK(r["result"]["profile"]["L"][0] == 0.75);
    CHECK(r["result"]["profile"]["L"][1] == 0.0);
    CHECK(r["result"]["d_hat_low"]["value"] == 1);
}

TEST_CASE("usage and input errors exit with status 2") {
    Scratch s;
    write(s.path("m.csv"), kReferenceMatrix);
    write(s.path("dup.csv"), "1,2,1\n");
    CHECK(run("analyze --input " + s.path("missing.csv")) == 2);
    CHECK(run("analyze --input " + s.path("m.csv") + " --epsilon 0") == 2);
    CHECK(run("analyze --input " + s.path("dup.csv")) == 2);
    CHECK(run("subsample --input " + s.path("m.csv") + " --size 9") == 2);
    CHECK(run("frobnicate") == 2);
    // with tie breaking the same file is accepted, and --strict escalates its warning
    CHECK(run("--break-ties analyze --input " + s.path("dup.csv") + " --dup 0 --output " + s.path("t.json")) == 0);
    CHECK(run("--strict --break-ties analyze --input " + s.path("dup.csv") + " --dup 0 --output " +
              s.path("t2.json")) == 1);
}

TEST_CASE("central report") {
    Scratch s;
    write(s.path("m.csv"), kReferenceMatrix);
    REQUIRE(run("central --input " + s.path("m.csv") + " --output " + s.path("c.json")) == 0);
    const Json r = load(s.path("c.json"));
    CHECK(r["result"]["central"]["fraction"] == 0.5);
    CHECK(r["result"]["central"]["members"] == Json::array({1, 2}));
    CHECK(r["result"]["verdict"] == "complete-evidence");
}

TEST_CASE("subsample reports are byte-identical across runs and thread counts") {
    Scratch s;
    REQUIRE(run("generate --family quadratic --d 2 --m 4 --n 80 --seed 3 --outdir " + s.path("g")) == 0);
    const std::string input = s.path("g") + "/matrix.csv";
    REQUIRE(run("--threads 1 subsample --input " + input + " --mode points --size 40 --reps 12 --seed 9 --output " +
                s.path("a.json")) == 0);
    REQUIRE(run("--threads 3 subsample --input " + input + " --mode points --size 40 --reps 12 --seed 9 --output " +
                s.path("b.json") + " --raw " + s.path("a.json.replicates.csv.copy")) == 0);
    CHECK(slurp(s.path("a.json.replicates.csv")) == slurp(s.path("a.json.replicates.csv.copy")));
    Json a = load(s.path("a.json")), b = load(s.path("b.json"));
    a["result"].erase("raw");
    b["result"].erase("raw");
    a["params"].erase("raw");
    b["params"].erase("raw");
    CHECK(a == b);
    REQUIRE(run("--threads 1 subsample --input " + input + " --mode points --size 40 --reps 12 --seed 9 --output " +
                s.path("c.json") + " --raw " + s.path("a.json.replicates.csv")) == 0);
    CHECK(slurp(s.path("a.json")) == slurp(s.path("c.json")));

    SUBCASE("full-size point subsamples have zero spread") {
        REQUIRE(run("subsample --input " + input + " --mode points --size 80 --reps 5 --output " + s.path("z.json")) == 0);
        for (const auto& box : load(s.path("z.json"))["result"]["boxplots"]) CHECK(box["iqr"] == 0.0);
    }
}

TEST_CASE("generate writes a reproducible linear pair") {
    Scratch s;
    REQUIRE(run("generate --family linear --d 3 --m 5 --n 40 --seed 4 --outdir " + s.path("x")) == 0);
    REQUIRE(run("generate --family linear --d 3 --m 5 --n 40 --seed 4 --outdir " + s.path("y")) == 0);
    CHECK(slurp(s.path("x") + "/matrix.csv") == slurp(s.path("y") + "/matrix.csv"));
    CHECK(slurp(s.path("x") + "/cloud.csv") == slurp(s.path("y") + "/cloud.csv"));

    const auto spec = spec_from_json(load(s.path("x") + "/spec.json"));
    REQUIRE(spec.m() == 5);
    const auto matrix = load_matrix_file(s.path("x") + "/matrix.csv").matrix;
    const auto cloud = load_matrix_file(s.path("x") + "/cloud.csv").matrix;
    REQUIRE(cloud.rows() == 40);
    for (std::size_t a = 0; a < 40; ++a) {
        Point x(3);
        for (int j = 0; j < 3; ++j) x[j] = cloud(a, static_cast<std::size_t>(j));
        for (std::size_t i = 0; i < 5; ++i) CHECK(matrix(i, a) == spec.value(i, x));
    }
    CHECK(run("generate --family linear --d 3 --m 5 --n 40 --outdir /proc/forbidden") == 2);
}

TEST_CASE("interleave report") {
    Scratch s;
    write(s.path("a.csv"), "1,2\n");
    write(s.path("b.csv"), "1,2,3,4\n");
    REQUIRE(run("interleave --a " + s.path("a.csv") + " --b " + s.path("b.csv") + " --output " + s.path("i.json")) == 0);
    const Json r = load(s.path("i.json"));
    CHECK(r["result"]["distance"].get<double>() <= 0.25);
    CHECK(r["result"]["grids"] == Json::array({2, 4}));
    CHECK(run("interleave --a " + s.path("a.csv") + " --b " + s.path("a.csv") + " --output " + s.path("j.json")) == 0);
    CHECK(load(s.path("j.json"))["result"]["distance"] == 0.0);
}

TEST_CASE("spec JSON round trips exactly") {
    for (auto family : {PairFamily::linear, PairFamily::quadratic}) {
        const auto spec = family == PairFamily::linear ? random_linear_pair(3, 4, 8) : random_quadratic_pair(3, 4, 8);
        const auto back = spec_from_json(Json::parse(to_json(spec).dump()));
        CHECK(back.family == spec.family);
        CHECK(back.seed == spec.seed);
        const Point x = Point::Constant(3, 0.3);
        for (std::size_t i = 0; i < 4; ++i) CHECK(back.value(i, x) == spec.value(i, x));
    }
}

TEST_CASE("replicate CSV layout") {
    SubsampleSummary summary;
    summary.d_up = 1;
    summary.replicate_L = {{0.5, 0.0}, {0.25, 0.125}};
    std::ostringstream out;
    write_replicates_csv(out, summary);
    CHECK(out.str() == "replicate,L0,L1\n0,0.5,0\n1,0.25,0.125\n");
}
