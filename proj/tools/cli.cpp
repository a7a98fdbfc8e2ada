#include "cli.hpp"

#include <rmtshrink/csv.hpp>
#include <rmtshrink/mp_law.hpp>
#include <rmtshrink/schemes.hpp>
#include <rmtshrink/simulation.hpp>
#include <rmtshrink/variance_estimator.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace rmtshrink::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum class NoiseScaling { sqrt_n, none };

struct SigmaMode {
    std::optional<double> fixed; // empty means estimate
};

struct SchemeChoice {
    enum Kind { rmt, hard, soft } kind = rmt;
    double parameter = 0.0;
};

double parse_positive(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InvalidArgument(what + ": '" + text + "' is not a number");
    }
    if (used != text.size() || !(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(what + ": expected a positive number, got '" + text + "'");
    }
    return value;
}

SigmaMode parse_sigma(const std::string& text) {
    if (text == "auto") return {};
    return {parse_positive(text, "--sigma")};
}

SchemeChoice parse_scheme(const std::string& text) {
    if (text == "rmt") return {};
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (colon == std::string::npos || (head != "hard" && head != "soft")) {
        throw InvalidArgument("--scheme: expected rmt, hard:<lambda> or soft:<nu>, got '" + text + "'");
    }
    SchemeChoice choice;
    choice.kind = head == "hard" ? SchemeChoice::hard : SchemeChoice::soft;
    choice.parameter = parse_positive(text.substr(colon + 1), "--scheme " + head);
    return choice;
}

NoiseScaling parse_scaling(const std::string& text) {
    if (text == "sqrt-n") return NoiseScaling::sqrt_n;
    if (text == "none") return NoiseScaling::none;
    throw InvalidArgument("--noise-scaling: expected sqrt-n or none, got '" + text + "'");
}

// The library works in the Y = A + sigma n^{-1/2} W convention. Under
// Y = A + sigma W the same noise has sigma_model = sigma sqrt(n).
double to_model_sigma(double sigma, NoiseScaling scaling, Index n) {
    return scaling == NoiseScaling::none ? sigma * std::sqrt(static_cast<double>(n)) : sigma;
}

double from_model_sigma(double sigma, NoiseScaling scaling, Index n) {
    return scaling == NoiseScaling::none ? sigma / std::sqrt(static_cast<double>(n)) : sigma;
}

const char* scaling_name(NoiseScaling scaling) {
    return scaling == NoiseScaling::none ? "none" : "sqrt-n";
}

const char* source_name(SigmaSource source) {
    switch (source) {
    case SigmaSource::known:
        return "known";
    case SigmaSource::estimated:
        return "estimated";
    case SigmaSource::none:
        break;
    }
    return "none";
}

std::span<const double> as_span(const Vector& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

std::vector<double> to_std(const Vector& v) {
    return {v.data(), v.data() + v.size()};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text(path, text);
    }
}

unsigned default_threads() {
    if (const char* env = std::getenv("RMTSHRINK_THREADS")) {
        const int value = std::atoi(env);
        if (value > 0) return static_cast<unsigned>(value);
    }
    return 1;
}

// --- denoise -------------------------------------------------------------

struct DenoiseArgs {
    std::string input;
    std::string output;
    std::string scheme = "rmt";
    std::string sigma = "auto";
    std::string scaling = "sqrt-n";
    std::string report;
};

int run_denoise(const DenoiseArgs& args, std::ostream& out) {
    const SchemeChoice scheme = parse_scheme(args.scheme);
    const SigmaMode sigma = parse_sigma(args.sigma);
    const NoiseScaling scaling = parse_scaling(args.scaling);

    const Matrix y = read_matrix_csv(fs::path(args.input));
    const Svd f = svd(y);

    Reconstruction r;
    switch (scheme.kind) {
    case SchemeChoice::hard:
        r = hard_threshold(f, scheme.parameter);
        break;
    case SchemeChoice::soft:
        r = soft_threshold(f, scheme.parameter);
        break;
    case SchemeChoice::rmt:
        r = sigma.fixed ? rmt_known_sigma(f, to_model_sigma(*sigma.fixed, scaling, y.cols())) : rmt_reconstruct(f);
        break;
    }
    write_matrix_csv(fs::path(args.output), r.a_hat);

    json report;
    report["schema_version"] = kSchemaVersion;
    report["scheme_id"] = r.scheme_id;
    report["m"] = y.rows();
    report["n"] = y.cols();
    report["noise_scaling"] = scaling_name(scaling);
    report["sigma_source"] = source_name(r.sigma_source);
    report["sigma_used"] =
        r.sigma_source == SigmaSource::none ? json(nullptr) : json(from_model_sigma(r.sigma_used, scaling, y.cols()));
    report["parameter"] = r.parameter ? json(*r.parameter) : json(nullptr);
    report["coefficients"] = to_std(r.coefficients);
    report["detected_rank"] = r.detected_rank();
    if (r.sigma_estimate) {
        report["ks_value"] = r.sigma_estimate->ks_value;
        report["window_count"] = r.sigma_estimate->window_count;
    }
    emit(report.dump(2) + "\n", args.report, out);
    return kOk;
}

// --- estimate-sigma ------------------------------------------------------

int run_estimate_sigma(const std::string& input, const std::string& scaling_text, std::ostream& out) {
    const NoiseScaling scaling = parse_scaling(scaling_text);
    const Matrix y = read_matrix_csv(fs::path(input));
    const Svd f = svd(y);
    const SigmaEstimate est = estimate_sigma(as_span(f.values), y.rows(), y.cols());

    json report;
    report["schema_version"] = kSchemaVersion;
    report["sigma_hat"] = from_model_sigma(est.sigma_hat, scaling, y.cols());
    report["ks_value"] = est.ks_value;
    report["window_count"] = est.window_count;
    report["grid_size"] = est.grid_size;
    report["m"] = y.rows();
    report["n"] = y.cols();
    report["noise_scaling"] = scaling_name(scaling);
    out << report.dump(2) << "\n";
    return kOk;
}

// --- spectrum ------------------------------------------------------------

int run_spectrum(const std::string& input, const std::string& sigma_text, const std::string& scaling_text,
                 const std::string& output, std::ostream& out) {
    const SigmaMode sigma = parse_sigma(sigma_text);
    const NoiseScaling scaling = parse_scaling(scaling_text);
    const Matrix y = read_matrix_csv(fs::path(input));
    const Svd f = svd(y);
    const double model_sigma = sigma.fixed ? to_model_sigma(*sigma.fixed, scaling, y.cols())
                                           : estimate_sigma(as_span(f.values), y.rows(), y.cols()).sigma_hat;
    const auto spikes = rmt_spectrum(f.values, y.rows(), y.cols(), model_sigma);

    std::ostringstream csv;
    csv << "index,lambda_y,detected,lambda_a_hat,cos2_left,cos2_right,coefficient\n";
    for (std::size_t j = 0; j < spikes.size(); ++j) {
        const auto& s = spikes[j];
        csv << j + 1 << ',' << format_double(f.values(static_cast<Index>(j))) << ',' << (s.detected ? 1 : 0) << ','
            << format_double(model_sigma * s.lambda_a_hat) << ',' << format_double(s.cos2_left) << ','
            << format_double(s.cos2_right) << ',' << format_double(model_sigma * s.coefficient) << '\n';
    }
    emit(csv.str(), output, out);
    return kOk;
}

// --- mp-law --------------------------------------------------------------

int run_mp_law(double c, int points, const std::string& output, std::ostream& out) {
    if (points < 2) throw InvalidArgument("--points must be at least 2");
    const MpLaw law(c);
    const auto [lo, hi] = law.support();
    std::ostringstream csv;
    csv << "s,density,cdf\n";
    for (int i = 0; i < points; ++i) {
        const double s = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        csv << format_double(s) << ',' << format_double(law.density(s)) << ',' << format_double(law.cdf(s)) << '\n';
    }
    emit(csv.str(), output, out);
    return kOk;
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
    long long m = 0;
    long long n = 0;
    std::uint64_t seed = 0;
    std::string out_dir;
    unsigned threads = 1;
    std::string table;
    std::vector<long long> sizes;
};

json profiles_json() {
    json profiles = json::array();
    const std::pair<Profile, const char*> formulas[] = {
        {Profile::equal, "lambda_j = lambda_1"},
        {Profile::linear_to_zero, "lambda_j = lambda_1 * (r - j + 1) / r"},
        {Profile::linear_to_half, "lambda_j = lambda_1 * (1 - (j - 1) / (2 (r - 1))); equal when r = 1"},
        {Profile::exp_0_5, "lambda_j = lambda_1 * 0.5^(j - 1)"},
        {Profile::exp_0_7, "lambda_j = lambda_1 * 0.7^(j - 1)"},
        {Profile::exp_0_9, "lambda_j = lambda_1 * 0.9^(j - 1)"},
        {Profile::exp_0_95, "lambda_j = lambda_1 * 0.95^(j - 1)"},
        {Profile::exp_0_99, "lambda_j = lambda_1 * 0.99^(j - 1)"},
    };
    for (const auto& [p, formula] : formulas) {
        profiles.push_back({{"name", profile_name(p)}, {"formula", formula}});
    }
    return profiles;
}

json summary_json(const SuiteReport& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["m"] = report.m;
    j["n"] = report.n;
    j["c"] = static_cast<double>(report.m) / static_cast<double>(report.n);
    j["master_seed"] = report.master_seed;
    j["model"] = "Y = A + n^{-1/2} W, W i.i.d. N(0,1), A diagonal";
    j["grid"] = {{"ranks", report.ranks},
                 {"lambda_multipliers", report.multipliers},
                 {"lambda_scale", "c^{1/4}"},
                 {"profiles", profiles_json()},
                 {"draws_per_cell", 1}};
    j["cell_count"] = report.cell_count;
    j["included_count"] = report.included_count;
    j["excluded_count"] = report.excluded_count;
    j["arel"] = report.arel;
    return j;
}

std::string trials_csv(const SuiteReport& report) {
    std::ostringstream csv;
    std::vector<std::string> keys;
    for (const Scheme s : kSuiteSchemes) keys.emplace_back(scheme_key(s));
    csv << "trial_index,m,n,rank,lambda_max,profile,sigma_hat,rmt_rank,excluded";
    for (const auto& k : keys) csv << ",loss_" << k;
    for (const auto& k : keys) csv << ",rel_" << k;
    csv << '\n';
    auto cell = [](const std::map<std::string, double>& values, const std::string& key) {
        const auto it = values.find(key);
        return it == values.end() ? std::string() : format_double(it->second);
    };
    for (const auto& t : report.trials) {
        csv << t.trial_index << ',' << t.spec.m << ',' << t.spec.n << ',' << t.spec.rank << ','
            << format_double(t.spec.lambda_max) << ',' << profile_name(t.spec.profile) << ','
            << (t.sigma_hat ? format_double(*t.sigma_hat) : std::string()) << ',' << t.rmt_rank << ','
            << (t.excluded ? 1 : 0);
        for (const auto& k : keys) csv << ',' << cell(t.losses, k);
        for (const auto& k : keys) csv << ',' << cell(t.rel, k);
        csv << '\n';
    }
    return csv.str();
}

SuiteReport simulate_one(Index m, Index n, const SimulateArgs& args, const fs::path& dir, const std::string& suffix,
                         std::ostream& err) {
    const SuiteReport report = run_suite(m, n, args.seed, args.threads);
    write_text(dir / ("trials" + suffix + ".csv"), trials_csv(report));
    write_text(dir / ("summary" + suffix + ".json"), summary_json(report).dump(2) + "\n");
    err << "simulate " << m << "x" << n << ": " << report.cell_count << " cells, " << report.excluded_count
        << " excluded, " << report.wall_seconds << " s\n";
    return report;
}

int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    if (args.threads < 1) throw InvalidArgument("--threads must be at least 1");
    const fs::path dir(args.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }

    if (args.table.empty()) {
        if (args.m < 1 || args.n < 1) throw InvalidArgument("simulate: --m and --n are required without --table");
        if (grid_ranks(args.m, args.n).empty()) {
            throw InvalidArgument("simulate: min(m, n) must be at least 10 for a rank-1 signal");
        }
        const SuiteReport report = simulate_one(args.m, args.n, args, dir, "", err);
        out << summary_json(report).dump(2) << "\n";
        return kOk;
    }

    std::vector<std::pair<Index, Index>> shapes;
    if (args.table == "square") {
        const std::vector<long long> sizes =
            args.sizes.empty() ? std::vector<long long>{2000, 1000, 500, 100, 50} : args.sizes;
        for (const auto s : sizes) shapes.emplace_back(s, s);
    } else if (args.table == "aspect") {
        const long long m = args.m > 0 ? args.m : 2000;
        const std::vector<long long> cols =
            args.sizes.empty() ? std::vector<long long>{2000, 1000, 500, 100, 50, 10} : args.sizes;
        for (const auto n : cols) shapes.emplace_back(m, n);
    } else {
        throw InvalidArgument("--table: expected square or aspect, got '" + args.table + "'");
    }

    json table;
    table["schema_version"] = kSchemaVersion;
    table["table"] = args.table;
    table["master_seed"] = args.seed;
    table["rows"] = json::array();
    for (const auto& [m, n] : shapes) {
        if (m < 1 || n < 1 || grid_ranks(m, n).empty()) {
            throw InvalidArgument("simulate: every size needs min(m, n) >= 10");
        }
        const std::string suffix = "_" + std::to_string(m) + "x" + std::to_string(n);
        const SuiteReport report = simulate_one(m, n, args, dir, suffix, err);
        table["rows"].push_back({{"m", m}, {"n", n}, {"cell_count", report.cell_count}, {"arel", report.arel}});
    }
    const std::string text = table.dump(2) + "\n";
    write_text(dir / "table.json", text);
    out << text;
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Low-rank matrix reconstruction by random-matrix-theory singular value shrinkage"};
    app.name("rmtshrink");
    app.require_subcommand(1);

    DenoiseArgs denoise;
    auto* denoise_cmd = app.add_subcommand("denoise", "Reconstruct the signal from a noisy matrix CSV");
    denoise_cmd->add_option("input", denoise.input, "Observed matrix CSV")->required();
    denoise_cmd->add_option("output", denoise.output, "Reconstructed matrix CSV")->required();
    denoise_cmd->add_option("--scheme", denoise.scheme, "rmt | hard:<lambda> | soft:<nu>")->capture_default_str();
    denoise_cmd->add_option("--sigma", denoise.sigma, "Noise scale, or auto to estimate it")->capture_default_str();
    denoise_cmd
        ->add_option("--noise-scaling", denoise.scaling,
                     "sqrt-n: Y = A + sigma n^{-1/2} W (default); none: Y = A + sigma W")
        ->capture_default_str();
    denoise_cmd->add_option("--report", denoise.report, "JSON report path (default: stdout)");

    std::string est_input;
    std::string est_scaling = "sqrt-n";
    auto* est_cmd = app.add_subcommand("estimate-sigma", "Estimate the noise scale of a matrix CSV");
    est_cmd->add_option("input", est_input, "Observed matrix CSV")->required();
    est_cmd->add_option("--noise-scaling", est_scaling, "sqrt-n | none")->capture_default_str();

    std::string spec_input;
    std::string spec_sigma = "auto";
    std::string spec_scaling = "sqrt-n";
    std::string spec_output;
    auto* spec_cmd = app.add_subcommand("spectrum", "Per-singular-value shrinkage diagnostics (scree data)");
    spec_cmd->add_option("input", spec_input, "Observed matrix CSV")->required();
    spec_cmd->add_option("--sigma", spec_sigma, "Noise scale, or auto")->capture_default_str();
    spec_cmd->add_option("--noise-scaling", spec_scaling, "sqrt-n | none")->capture_default_str();
    spec_cmd->add_option("--out", spec_output, "CSV output path (default: stdout)");

    double mp_c = 1.0;
    int mp_points = 101;
    std::string mp_output;
    auto* mp_cmd = app.add_subcommand("mp-law", "Marchenko-Pastur singular value density and CDF on a grid");
    mp_cmd->add_option("--c", mp_c, "Aspect ratio m / n")->required();
    mp_cmd->add_option("--points", mp_points, "Grid points across the support")->capture_default_str();
    mp_cmd->add_option("--out", mp_output, "CSV output path (default: stdout)");

    SimulateArgs sim;
    sim.threads = default_threads();
    auto* sim_cmd = app.add_subcommand("simulate", "Oracle comparison study over the signal grid");
    sim_cmd->add_option("--m", sim.m, "Rows");
    sim_cmd->add_option("--n", sim.n, "Columns");
    sim_cmd->add_option("--seed", sim.seed, "Master seed")->required();
    sim_cmd->add_option("--out", sim.out_dir, "Output directory")->required();
    sim_cmd->add_option("--threads", sim.threads, "Worker threads (default: $RMTSHRINK_THREADS or 1)");
    sim_cmd->add_option("--table", sim.table, "Preset: square | aspect");
    sim_cmd->add_option("--sizes", sim.sizes, "Preset sizes: square side lengths or aspect column counts")
        ->delimiter(',');

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("rmtshrink");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*denoise_cmd) return run_denoise(denoise, out);
        if (*est_cmd) return run_estimate_sigma(est_input, est_scaling, out);
        if (*spec_cmd) return run_spectrum(spec_input, spec_sigma, spec_scaling, spec_output, out);
        if (*mp_cmd) return run_mp_law(mp_c, mp_points, mp_output, out);
        if (*sim_cmd) return run_simulate(sim, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kFormatError;
    } catch (const InfeasibleSigma& e) {
        err << "error: " << e.what() << "\n";
        return kInfeasibleSigma;
    } catch (const NumericalFailure& e) {
        err << "error: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidArgument;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kUsageError;
}

} // namespace rmtshrink::cli
