#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "qcsense/central.hpp"
#include "qcsense/estimator.hpp"
#include "qcsense/geometry.hpp"
#include "qcsense/interleave.hpp"
#include "qcsense/parallel.hpp"
#include "qcsense/random.hpp"
#include "qcsense/report.hpp"

namespace fs = std::filesystem;
using namespace qcsense;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitWarning = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

struct Input {
    std::string path;
    std::string digest;
    LoadResult loaded;
};

Input load_input(const std::string& path, bool break_ties) {
    Input in;
    in.path = path;
    const std::string bytes = read_file(path);
    in.digest = sha256_hex(bytes);
    std::istringstream stream(bytes);
    LoadOptions opts;
    opts.ties = break_ties ? TiePolicy::break_by_column_index : TiePolicy::reject;
    in.loaded = load_matrix(stream, opts);
    return in;
}

Json input_json(const Input& in) {
    Json j;
    j["path"] = in.path;
    j["sha256"] = in.digest;
    j["rows"] = in.loaded.matrix.rows();
    j["cols"] = in.loaded.matrix.cols();
    return j;
}

Json report_header(const std::string& command) {
    Json j;
    j["schema"] = kReportSchema;
    j["tool"] = "qcsense";
    j["version"] = kToolVersion;
    j["command"] = command;
    return j;
}

void emit(const Json& report, const std::string& output) {
    const std::string text = report.dump(2) + "\n";
    if (output.empty() || output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw InputError("cannot write output file '" + output + "'");
    out << text;
}

int finish(const Json& report, const std::string& output, bool strict) {
    emit(report, output);
    const bool warned = !report["warnings"].empty() || !report["flags"].empty();
    return strict && warned ? kExitWarning : kExitOk;
}

unsigned resolve_threads(std::optional<unsigned> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("QCSENSE_THREADS")) {
        try {
            return static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw UsageError("QCSENSE_THREADS must be a nonnegative integer");
        }
    }
    return 0;
}

std::size_t g_progress_step = 1;

void print_progress(std::size_t done, std::size_t total) {
    if (done % g_progress_step == 0 || done == total)
        std::cerr << "replicate " << done << "/" << total << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dimension and completeness estimates from sensor ranking data"};
    app.require_subcommand(1);
    std::optional<unsigned> threads_flag;
    bool strict = false;
    bool break_ties = false;
    app.add_option("--threads", threads_flag, "Worker threads (0 = all cores; default $QCSENSE_THREADS)");
    app.add_flag("--strict", strict, "Exit with status 1 when the report carries warnings or flags");
    app.add_flag("--break-ties", break_ties, "Accept tied rows, ordering ties by column index");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "L_k profile and dimension lower bound");
    std::string an_input, an_output;
    std::optional<int> an_dup;
    double an_eps = 0.1;
    bool an_per_column = false;
    analyze->add_option("--input", an_input, "Matrix CSV (rows = sensors, columns = samples)")->required();
    analyze->add_option("--dup", an_dup, "Highest homology dimension (default min(m-2, 6))");
    analyze->add_option("--epsilon", an_eps, "Significance threshold on L_k")->capture_default_str();
    analyze->add_flag("--per-column", an_per_column, "Include per-column l_max values");
    analyze->add_option("--output", an_output, "Report path (default stdout)");

    // subsample
    auto* subsample = app.add_subcommand("subsample", "Boxplots of L_k over subsampled replicates");
    std::string ss_input, ss_output, ss_mode = "points";
    std::optional<std::string> ss_raw;
    std::size_t ss_size = 0, ss_reps = 100;
    std::optional<int> ss_dup;
    std::uint64_t ss_seed = 0;
    subsample->add_option("--input", ss_input, "Matrix CSV")->required();
    subsample->add_option("--mode", ss_mode, "points or functions")
        ->check(CLI::IsMember({"points", "functions"}))
        ->capture_default_str();
    subsample->add_option("--size", ss_size, "Columns (points) or rows (functions) per replicate")->required();
    subsample->add_option("--reps", ss_reps, "Replicates")->capture_default_str();
    subsample->add_option("--dup", ss_dup, "Highest homology dimension");
    subsample->add_option("--seed", ss_seed, "Seed")->capture_default_str();
    subsample->add_option("--output", ss_output, "Report path (default stdout)");
    subsample->add_option("--raw", ss_raw, "Replicate CSV path (default <output>.replicates.csv)");

    // central
    auto* central = app.add_subcommand("central", "Discretized central region and completeness test");
    std::string ce_input, ce_output;
    double ce_threshold = kDefaultCompletenessThreshold;
    central->add_option("--input", ce_input, "Matrix CSV")->required();
    central->add_option("--threshold", ce_threshold, "Fraction above which completeness is reported")
        ->capture_default_str();
    central->add_option("--output", ce_output, "Report path (default stdout)");

    // generate
    auto* generate = app.add_subcommand("generate", "Synthetic sensor pair, sample cloud and matrix");
    std::string ge_family = "quadratic", ge_outdir, ge_output;
    int ge_d = 0;
    std::size_t ge_m = 0, ge_n = 0;
    std::uint64_t ge_seed = 0;
    generate->add_option("--family", ge_family, "linear or quadratic")
        ->check(CLI::IsMember({"linear", "quadratic"}))
        ->capture_default_str();
    generate->add_option("--d", ge_d, "Ambient dimension")->required();
    generate->add_option("--m", ge_m, "Number of sensors")->required();
    generate->add_option("--n", ge_n, "Number of sample points")->required();
    generate->add_option("--seed", ge_seed, "Seed")->capture_default_str();
    generate->add_option("--outdir", ge_outdir, "Directory for spec.json, matrix.csv, cloud.csv")->required();
    generate->add_option("--output", ge_output, "Report path (default stdout)");

    // interleave
    auto* interleave = app.add_subcommand("interleave", "Interleaving distance of two empirical Dowker filtrations");
    std::string il_a, il_b, il_output;
    std::optional<int> il_dup;
    interleave->add_option("--a", il_a, "First matrix CSV")->required();
    interleave->add_option("--b", il_b, "Second matrix CSV")->required();
    interleave->add_option("--dup", il_dup, "Highest homology dimension; simplices up to dimension dup+1 are checked");
    interleave->add_option("--output", il_output, "Report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const unsigned threads = resolve_threads(threads_flag);

        if (*analyze) {
            if (!(an_eps > 0)) throw UsageError("--epsilon must be positive");
            const Input in = load_input(an_input, break_ties);
            const auto& M = in.loaded.matrix;
            const int dup = an_dup.value_or(default_d_up(M.rows()));
            if (dup < 0) throw UsageError("--dup must be nonnegative");
            std::cerr << "analyze: " << M.rows() << " x " << M.cols() << ", d_up " << dup << '\n';
            LkOptions opts;
            opts.keep_per_column = an_per_column;
            opts.threads = threads;
            const LkProfile profile = compute_Lk(M, dup, opts);
            const DimensionEstimate est = d_hat_low(profile, an_eps);

            Json r = report_header("analyze");
            r["params"] = {{"input", an_input}, {"dup", dup}, {"epsilon", an_eps},
                           {"per_column", an_per_column}, {"break_ties", break_ties}};
            r["input"] = input_json(in);
            r["seed"] = nullptr;
            r["warnings"] = in.loaded.warnings;
            r["flags"] = est.flags();
            r["result"] = {{"profile", to_json(profile)}, {"d_hat_low", to_json(est)}};
            return finish(r, an_output, strict);
        }

        if (*subsample) {
            const Input in = load_input(ss_input, break_ties);
            const auto& M = in.loaded.matrix;
            const bool points = ss_mode == "points";
            const std::size_t limit = points ? M.cols() : M.rows();
            if (ss_size < 1 || ss_size > limit)
                throw UsageError("--size must lie in [1, " + std::to_string(limit) + "]");
            if (ss_reps < 1) throw UsageError("--reps must be at least 1");
            const int dup = ss_dup.value_or(default_d_up(points ? M.rows() : ss_size));
            if (dup < 0) throw UsageError("--dup must be nonnegative");

            SubsampleOptions opts;
            opts.threads = threads;
            g_progress_step = std::max<std::size_t>(1, ss_reps / 10);
            opts.progress = print_progress;
            const SubsampleSummary summary = points ? subsample_points(M, ss_size, ss_reps, dup, ss_seed, opts)
                                                    : subsample_functions(M, ss_size, ss_reps, dup, ss_seed, opts);
            const DimensionEstimate verdict = decide_dimension(summary.per_k);

            std::string raw = ss_raw.value_or("");
            if (raw.empty()) raw = ss_output.empty() || ss_output == "-" ? "" : ss_output + ".replicates.csv";
            if (!raw.empty()) {
                std::ofstream out(raw, std::ios::binary);
                if (!out) throw InputError("cannot write replicate file '" + raw + "'");
                write_replicates_csv(out, summary);
            }

            Json r = report_header("subsample");
            r["params"] = {{"input", ss_input}, {"mode", ss_mode}, {"size", ss_size}, {"reps", ss_reps},
                           {"dup", dup},        {"seed", ss_seed}, {"break_ties", break_ties}};
            r["input"] = input_json(in);
            r["seed"] = ss_seed;
            r["rng"] = std::string(Rng::algorithm);
            r["warnings"] = in.loaded.warnings;
            r["flags"] = verdict.flags();
            r["result"] = to_json(summary);
            r["result"]["verdict"] = to_json(verdict);
            r["result"]["raw"] = raw.empty() ? Json(nullptr) : Json(raw);
            return finish(r, ss_output, strict);
        }

        if (*central) {
            if (!(ce_threshold > 0)) throw UsageError("--threshold must be positive");
            const Input in = load_input(ce_input, break_ties);
            const CompletenessResult res = completeness_test(in.loaded.matrix, ce_threshold);
            Json r = report_header("central");
            r["params"] = {{"input", ce_input}, {"threshold", ce_threshold}, {"break_ties", break_ties}};
            r["input"] = input_json(in);
            r["seed"] = nullptr;
            r["warnings"] = in.loaded.warnings;
            r["flags"] = Json::array();
            if (res.verdict == Completeness::no_evidence) r["flags"].push_back("no-evidence");
            r["result"] = to_json(res);
            return finish(r, ce_output, strict);
        }

        if (*generate) {
            if (ge_d < 1 || ge_m < 1 || ge_n < 1) throw UsageError("--d, --m and --n must be at least 1");
            const PairFamily family = parse_family(ge_family);
            const RegularPairSpec spec = family == PairFamily::linear
                                             ? random_linear_pair(ge_d, ge_m, derive_seed(ge_seed, 0))
                                             : random_quadratic_pair(ge_d, ge_m, derive_seed(ge_seed, 0));
            const SampledPair sample = sample_pair(spec, ge_n, derive_seed(ge_seed, 1));

            std::error_code ec;
            fs::create_directories(ge_outdir, ec);
            if (ec) throw InputError("cannot create output directory '" + ge_outdir + "': " + ec.message());
            auto open = [&](const char* name) {
                const fs::path p = fs::path(ge_outdir) / name;
                std::ofstream out(p, std::ios::binary);
                if (!out) throw InputError("cannot write '" + p.string() + "'");
                return out;
            };
            {
                auto out = open("spec.json");
                out << to_json(spec).dump(2) << '\n';
            }
            {
                auto out = open("matrix.csv");
                write_matrix_csv(out, sample.matrix);
            }
            {
                auto out = open("cloud.csv");
                write_cloud_csv(out, sample.cloud);
            }

            Json r = report_header("generate");
            r["params"] = {{"family", ge_family}, {"d", ge_d}, {"m", ge_m},
                           {"n", ge_n},           {"seed", ge_seed}, {"outdir", ge_outdir}};
            r["seed"] = ge_seed;
            r["rng"] = std::string(Rng::algorithm);
            r["warnings"] = sample.notes;
            r["flags"] = Json::array();
            r["result"] = {{"spec", (fs::path(ge_outdir) / "spec.json").string()},
                           {"matrix", (fs::path(ge_outdir) / "matrix.csv").string()},
                           {"cloud", (fs::path(ge_outdir) / "cloud.csv").string()}};
            return finish(r, ge_output, strict);
        }

        if (*interleave) {
            const Input a = load_input(il_a, break_ties);
            const Input b = load_input(il_b, break_ties);
            const std::size_t m = a.loaded.matrix.rows();
            const int dup = il_dup.value_or(default_d_up(m));
            if (dup < 0) throw UsageError("--dup must be nonnegative");
            const InterleaveResult res = interleaving_distance(OrderTable(a.loaded.matrix),
                                                               OrderTable(b.loaded.matrix),
                                                               skeleton_dimension(dup, m));
            Json r = report_header("interleave");
            r["params"] = {{"a", il_a}, {"b", il_b}, {"dup", dup}, {"break_ties", break_ties}};
            r["input"] = {{"a", input_json(a)}, {"b", input_json(b)}};
            r["seed"] = nullptr;
            Json warnings = a.loaded.warnings;
            for (const auto& w : b.loaded.warnings) warnings.push_back(w);
            r["warnings"] = std::move(warnings);
            r["flags"] = Json::array();
            r["result"] = to_json(res);
            return finish(r, il_output, strict);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}
