#include "qclab/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qclab/format.hpp"

#ifndef QCLAB_VERSION
#define QCLAB_VERSION "0.0.0"
#endif

namespace qclab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string tool_version() { return QCLAB_VERSION; }

Matrix2 parse_matrix_literal(const std::string& text) {
    const auto semi = text.find(';');
    if (semi == std::string::npos || text.find(';', semi + 1) != std::string::npos)
        throw ConfigError("matrix literal must look like \"a11,a12;a21,a22\": '" + text + "'");

    auto parse_row = [&](const std::string& row) {
        const auto comma = row.find(',');
        if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos)
            throw ConfigError("matrix row must hold two comma-separated numbers: '" + row + "'");
        auto number = [&](const std::string& s) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception&) {
                throw ConfigError("not a number in matrix literal: '" + s + "'");
            }
            if (s.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v))
                throw ConfigError("not a finite number in matrix literal: '" + s + "'");
            return v;
        };
        return Vec2{number(row.substr(0, comma)), number(row.substr(comma + 1))};
    };

    const Vec2 r1 = parse_row(text.substr(0, semi));
    const Vec2 r2 = parse_row(text.substr(semi + 1));
    return {r1[0], r1[1], r2[0], r2[1]};
}

std::string format_matrix_literal(const Matrix2& m) {
    return format_double(m.a11) + "," + format_double(m.a12) + ";" + format_double(m.a21) + "," +
           format_double(m.a22);
}

namespace {

json options_to_json(const CampaignOptions& o) {
    const DescentConfig& c = o.config;
    return json{
        {"mesh_n", c.grid.n()},
        {"gamma_start", c.gamma_start},
        {"gamma_end", c.gamma_end},
        {"gamma_step", c.gamma_step},
        {"xi_mode", c.xi_mode == XiMode::Fixed ? "fixed" : "random"},
        {"xi", {c.xi_fixed.a11, c.xi_fixed.a12, c.xi_fixed.a21, c.xi_fixed.a22}},
        {"xi_scale", c.xi_scale},
        {"max_iters_per_gamma", c.max_iters_per_gamma},
        {"secant",
         {{"alpha0", c.secant.alpha0},
          {"alpha1", c.secant.alpha1},
          {"max_iters", c.secant.max_iters},
          {"root_tol", c.secant.root_tol},
          {"denom_floor", c.secant.denom_floor},
          {"fallback_tau", c.secant.fallback_tau},
          {"max_halvings", c.secant.max_halvings}}},
        {"seed_first", o.seed_first},
        {"seed_last", o.seed_last},
        {"scheme", to_string(c.scheme)},
        {"violation_tol", c.violation_tol},
        {"initializer", to_string(c.initializer)},
        {"reset_on_gamma_change", c.reset_on_gamma_change},
        {"verify_refine", o.verify_refine},
        {"trace_all_seeds", o.trace_all_seeds},
        {"latex", o.latex},
        {"jobs", o.jobs},
        {"out_dir", o.out_dir.string()},
    };
}

CampaignOptions options_from_json(const json& j) {
    CampaignOptions o;
    DescentConfig& c = o.config;
    try {
        c.grid = GridSpec(j.at("mesh_n").get<int>());
        c.gamma_start = j.at("gamma_start").get<double>();
        c.gamma_end = j.at("gamma_end").get<double>();
        c.gamma_step = j.at("gamma_step").get<double>();
        const auto mode = j.at("xi_mode").get<std::string>();
        if (mode != "fixed" && mode != "random") throw ConfigError("bad xi_mode '" + mode + "'");
        c.xi_mode = mode == "fixed" ? XiMode::Fixed : XiMode::RandomPerIteration;
        const auto xi = j.at("xi").get<std::vector<double>>();
        if (xi.size() != 4) throw ConfigError("xi must hold 4 entries");
        c.xi_fixed = {xi[0], xi[1], xi[2], xi[3]};
        c.xi_scale = j.at("xi_scale").get<double>();
        c.max_iters_per_gamma = j.at("max_iters_per_gamma").get<int>();
        const json& s = j.at("secant");
        c.secant.alpha0 = s.at("alpha0").get<double>();
        c.secant.alpha1 = s.at("alpha1").get<double>();
        c.secant.max_iters = s.at("max_iters").get<int>();
        c.secant.root_tol = s.at("root_tol").get<double>();
        c.secant.denom_floor = s.at("denom_floor").get<double>();
        c.secant.fallback_tau = s.at("fallback_tau").get<double>();
        c.secant.max_halvings = s.at("max_halvings").get<int>();
        o.seed_first = j.at("seed_first").get<std::uint64_t>();
        o.seed_last = j.at("seed_last").get<std::uint64_t>();
        c.seed = o.seed_first;
        c.scheme = parse_scheme(j.at("scheme").get<std::string>());
        c.violation_tol = j.at("violation_tol").get<double>();
        c.initializer = parse_initializer(j.at("initializer").get<std::string>());
        c.reset_on_gamma_change = j.at("reset_on_gamma_change").get<bool>();
        o.verify_refine = j.at("verify_refine").get<int>();
        o.trace_all_seeds = j.at("trace_all_seeds").get<bool>();
        o.latex = j.at("latex").get<bool>();
        o.jobs = j.at("jobs").get<int>();
        o.out_dir = j.at("out_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest config: ") + e.what());
    }
    return o;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw ConfigError("--seeds expects 'a..b', got '" + text + "'");
    auto number = [&](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw ConfigError("bad seed '" + s + "' in '" + text + "'");
        return std::stoull(s);
    };
    const auto a = number(text.substr(0, dots));
    const auto b = number(text.substr(dots + 2));
    if (b < a) throw ConfigError("--seeds range is empty: '" + text + "'");
    return {a, b};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string snapshot_name(std::uint64_t seed, std::int64_t iteration) {
    return "snapshots/seed_" + std::to_string(seed) + "_iter_" + std::to_string(iteration) + ".txt";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

CampaignOptions parse_config(const std::vector<std::string>& args, const std::string& env_out_dir) {
    CLI::App app{"qclab run"};
    app.allow_extras(false);

    std::string config_file, xi_mode, xi, phi0, scheme, seeds, out;
    int mesh_n = 0, max_iters = 0, verify_refine = 0, jobs = 0, secant_iters = 0, halvings = 0;
    double gamma_start = 0, gamma_end = 0, gamma_step = 0, xi_scale = 0, violation_tol = 0;
    double alpha0 = 0, alpha1 = 0, root_tol = 0, denom_floor = 0, fallback_tau = 0;
    std::uint64_t seed = 0;
    bool trace = false, latex = false, reset = false;

    app.add_option("--config", config_file, "manifest.json whose config to start from");
    app.add_option("--mesh-n", mesh_n, "subdivisions per axis");
    app.add_option("--gamma-start", gamma_start);
    app.add_option("--gamma-end", gamma_end);
    app.add_option("--gamma-step", gamma_step);
    app.add_option("--xi-mode", xi_mode)->check(CLI::IsMember({"fixed", "random"}));
    app.add_option("--xi", xi, "fixed xi as \"a11,a12;a21,a22\"");
    app.add_option("--xi-scale", xi_scale, "random xi entries ~ U[0, scale)");
    app.add_option("--phi0", phi0)->check(CLI::IsMember({"p1", "p2", "p3", "p4", "zero"}));
    app.add_option("--seed", seed);
    app.add_option("--seeds", seeds, "inclusive seed range a..b");
    app.add_option("--max-iters", max_iters, "descent iterations per gamma");
    app.add_option("--violation-tol", violation_tol);
    app.add_option("--scheme", scheme)->check(CLI::IsMember({"trapezoid", "p1exact"}));
    app.add_option("--out", out, "output directory (fallback: $QCLAB_OUT_DIR)");
    app.add_flag("--trace", trace, "also write traces/seed_<s>.csv for every seed");
    app.add_option("--verify-refine", verify_refine, "refinement factor for verification");
    app.add_flag("--latex", latex, "also write table.tex");
    app.add_option("--jobs", jobs, "concurrent seeds");
    app.add_flag("--reset-on-gamma", reset, "restart from phi0 at every gamma");
    app.add_option("--secant-alpha0", alpha0);
    app.add_option("--secant-alpha1", alpha1);
    app.add_option("--secant-max-iters", secant_iters);
    app.add_option("--secant-tol", root_tol);
    app.add_option("--secant-denom-floor", denom_floor);
    app.add_option("--fallback-tau", fallback_tau);
    app.add_option("--max-halvings", halvings);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    auto given = [&](const char* name) { return app.count(name) > 0; };

    try {
        CampaignOptions o = given("--config") ? load_manifest_options(config_file)
                                              : CampaignOptions{};
        DescentConfig& c = o.config;
        if (!given("--config") && !env_out_dir.empty()) o.out_dir = env_out_dir;

        if (given("--mesh-n")) c.grid = GridSpec(mesh_n);
        if (given("--gamma-start")) c.gamma_start = gamma_start;
        if (given("--gamma-end")) c.gamma_end = gamma_end;
        if (given("--gamma-step")) c.gamma_step = gamma_step;
        if (given("--xi-mode"))
            c.xi_mode = xi_mode == "fixed" ? XiMode::Fixed : XiMode::RandomPerIteration;
        if (given("--xi")) {
            c.xi_fixed = parse_matrix_literal(xi);
            if (!given("--xi-mode")) c.xi_mode = XiMode::Fixed;
        }
        if (given("--xi-scale")) c.xi_scale = xi_scale;
        if (given("--phi0")) c.initializer = parse_initializer(phi0);
        if (given("--seed") && given("--seeds"))
            throw ConfigError("--seed and --seeds are mutually exclusive");
        if (given("--seed")) o.seed_first = o.seed_last = seed;
        if (given("--seeds")) std::tie(o.seed_first, o.seed_last) = parse_seed_range(seeds);
        c.seed = o.seed_first;
        if (given("--max-iters")) c.max_iters_per_gamma = max_iters;
        if (given("--violation-tol")) c.violation_tol = violation_tol;
        if (given("--scheme")) c.scheme = parse_scheme(scheme);
        if (given("--out")) o.out_dir = out;
        if (given("--trace")) o.trace_all_seeds = trace;
        if (given("--verify-refine")) o.verify_refine = verify_refine;
        if (given("--latex")) o.latex = latex;
        if (given("--jobs")) o.jobs = jobs;
        if (given("--reset-on-gamma")) c.reset_on_gamma_change = reset;
        if (given("--secant-alpha0")) c.secant.alpha0 = alpha0;
        if (given("--secant-alpha1")) c.secant.alpha1 = alpha1;
        if (given("--secant-max-iters")) c.secant.max_iters = secant_iters;
        if (given("--secant-tol")) c.secant.root_tol = root_tol;
        if (given("--secant-denom-floor")) c.secant.denom_floor = denom_floor;
        if (given("--fallback-tau")) c.secant.fallback_tau = fallback_tau;
        if (given("--max-halvings")) c.secant.max_halvings = halvings;

        c.validate();
        if (o.verify_refine != 0 && o.verify_refine < 2)
            throw ConfigError("--verify-refine must be 0 (off) or >= 2");
        if (o.jobs < 1) throw ConfigError("--jobs must be >= 1");
        return o;
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::string> config_to_args(const CampaignOptions& o) {
    const DescentConfig& c = o.config;
    const SecantConfig& s = c.secant;
    std::vector<std::string> a = {
        "--mesh-n", std::to_string(c.grid.n()),
        "--gamma-start", format_double(c.gamma_start),
        "--gamma-end", format_double(c.gamma_end),
        "--gamma-step", format_double(c.gamma_step),
        "--xi", format_matrix_literal(c.xi_fixed),
        "--xi-mode", c.xi_mode == XiMode::Fixed ? "fixed" : "random",
        "--xi-scale", format_double(c.xi_scale),
        "--phi0", to_string(c.initializer),
        "--seeds", std::to_string(o.seed_first) + ".." + std::to_string(o.seed_last),
        "--max-iters", std::to_string(c.max_iters_per_gamma),
        "--violation-tol", format_double(c.violation_tol),
        "--scheme", to_string(c.scheme),
        "--out", o.out_dir.string(),
        "--verify-refine", std::to_string(o.verify_refine),
        "--jobs", std::to_string(o.jobs),
        "--secant-alpha0", format_double(s.alpha0),
        "--secant-alpha1", format_double(s.alpha1),
        "--secant-max-iters", std::to_string(s.max_iters),
        "--secant-tol", format_double(s.root_tol),
        "--secant-denom-floor", format_double(s.denom_floor),
        "--fallback-tau", format_double(s.fallback_tau),
        "--max-halvings", std::to_string(s.max_halvings),
    };
    if (o.trace_all_seeds) a.push_back("--trace");
    if (o.latex) a.push_back("--latex");
    if (c.reset_on_gamma_change) a.push_back("--reset-on-gamma");
    return a;
}

CampaignResult run_sweep(const CampaignOptions& opts) {
    opts.config.validate();
    const std::uint64_t count = opts.seed_last - opts.seed_first + 1;

    struct PerSeed {
        std::vector<TrialRecord> records;
        IterationTrace trace;
    };
    std::vector<PerSeed> slots(count);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (true) {
            const std::uint64_t k = next.fetch_add(1);
            if (k >= count) return;
            try {
                DescentConfig cfg = opts.config;
                cfg.seed = opts.seed_first + k;
                SearchResult r = run_search(cfg);
                for (TrialRecord& rec : r.records)
                    rec = verify_record(std::move(rec), opts.verify_refine, cfg.violation_tol);
                slots[k] = {std::move(r.records), std::move(r.trace)};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
            }
        }
    };

    const auto threads = static_cast<std::uint64_t>(std::max(1, opts.jobs));
    {
        std::vector<std::jthread> pool;
        for (std::uint64_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    CampaignResult out;
    out.manifest.options = opts;
    out.manifest.tool_version = tool_version();
    for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t seed = opts.seed_first + k;
        for (TrialRecord& rec : slots[k].records) {
            const std::int64_t it = rec.iteration;
            out.records.push_back({seed, std::move(rec), snapshot_name(seed, it)});
        }
        out.traces.push_back(std::move(slots[k].trace));
    }
    out.manifest.record_count = static_cast<std::int64_t>(out.records.size());
    out.manifest.verified_count = std::count_if(
        out.records.begin(), out.records.end(),
        [](const CampaignRecord& r) { return r.record.verified; });
    return out;
}

RunManifest run_campaign(const CampaignOptions& opts) {
    const std::string started = utc_timestamp();
    CampaignResult result = run_sweep(opts);
    result.manifest.started_at = started;

    const fs::path out = opts.out_dir;
    const fs::path staging = out / ".staging";
    try {
        fs::create_directories(out);
        fs::remove_all(staging);
        fs::create_directories(staging / "snapshots");
        if (opts.trace_all_seeds) fs::create_directories(staging / "traces");

        for (const CampaignRecord& r : result.records)
            save_snapshot(staging / r.snapshot_path, r.record.field_snapshot);
        write_text(staging / "records.csv", emit_records_csv(result.records));
        write_text(staging / "records.json", emit_records_json(result.records));
        write_text(staging / "trace.csv", emit_trace_csv(result.traces.front()));
        if (opts.trace_all_seeds) {
            for (std::size_t k = 0; k < result.traces.size(); ++k)
                write_text(staging / "traces" /
                               ("seed_" + std::to_string(opts.seed_first + k) + ".csv"),
                           emit_trace_csv(result.traces[k]));
        }
        if (opts.latex) write_text(staging / "table.tex", emit_latex_table(result.records));
        result.manifest.finished_at = utc_timestamp();
        write_text(staging / "manifest.json", emit_manifest_json(result.manifest));

        // Publish: replace previous artifacts of the same names.
        for (const auto& entry : fs::directory_iterator(staging)) {
            const fs::path target = out / entry.path().filename();
            fs::remove_all(target);
            fs::rename(entry.path(), target);
        }
        fs::remove_all(staging);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        throw;
    }
    return result.manifest;
}

std::string emit_records_csv(const std::vector<CampaignRecord>& records) {
    std::ostringstream os;
    os << "seed,iteration,gamma,xi11,xi12,xi21,xi22,j_value,j_exact_p1,j_refined,verified,"
          "snapshot_path\n";
    for (const CampaignRecord& c : records) {
        const TrialRecord& r = c.record;
        os << c.seed << ',' << r.iteration << ',' << format_double(r.gamma) << ','
           << format_double(r.xi.a11) << ',' << format_double(r.xi.a12) << ','
           << format_double(r.xi.a21) << ',' << format_double(r.xi.a22) << ','
           << format_double(r.j_value) << ',' << format_double(r.j_exact_p1) << ','
           << format_double(r.j_refined) << ',' << (r.verified ? "true" : "false") << ','
           << c.snapshot_path << '\n';
    }
    return os.str();
}

std::string emit_records_json(const std::vector<CampaignRecord>& records) {
    json arr = json::array();
    for (const CampaignRecord& c : records) {
        const TrialRecord& r = c.record;
        auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
        arr.push_back(json{
            {"seed", c.seed},
            {"iteration", r.iteration},
            {"gamma", r.gamma},
            {"xi11", r.xi.a11},
            {"xi12", r.xi.a12},
            {"xi21", r.xi.a21},
            {"xi22", r.xi.a22},
            {"j_value", number(r.j_value)},
            {"j_exact_p1", number(r.j_exact_p1)},
            {"j_refined", number(r.j_refined)},
            {"verified", r.verified},
            {"snapshot_path", c.snapshot_path},
        });
    }
    return arr.dump(2) + "\n";
}

std::string emit_trace_csv(const IterationTrace& trace) {
    std::ostringstream os;
    os << "iteration,gamma,j_value,tau\n";
    for (const TraceEntry& e : trace)
        os << e.iteration << ',' << format_double(e.gamma) << ',' << format_double(e.j_value)
           << ',' << format_double(e.tau) << '\n';
    return os.str();
}

std::string emit_latex_table(const std::vector<CampaignRecord>& records) {
    std::ostringstream os;
    os << "\\begin{tabular}{llll}\n\\toprule\n & $\\xi$ & $\\gamma$ & $J_\\gamma(\\xi, \\phi_k)$ "
          "\\\\\n\\midrule\n";
    int row = 1;
    for (const CampaignRecord& c : records) {
        const TrialRecord& r = c.record;
        os << row++ << ". & $\\begin{bmatrix} " << format_double(r.xi.a11) << " & "
           << format_double(r.xi.a12) << " \\\\ " << format_double(r.xi.a21) << " & "
           << format_double(r.xi.a22) << " \\end{bmatrix}$ & " << format_double(r.gamma)
           << " & " << format_double(r.j_exact_p1) << " \\\\\n";
    }
    os << "\\bottomrule\n\\end{tabular}\n";
    return os.str();
}

std::string emit_manifest_json(const RunManifest& m) {
    const json j{
        {"tool_version", m.tool_version},
        {"started_at", m.started_at},
        {"finished_at", m.finished_at},
        {"record_count", m.record_count},
        {"verified_count", m.verified_count},
        {"config", options_to_json(m.options)},
        {"argv", config_to_args(m.options)},
    };
    return j.dump(2) + "\n";
}

CampaignOptions load_manifest_options(const fs::path& manifest_path) {
    std::ifstream is(manifest_path);
    if (!is) throw ConfigError("cannot open manifest: " + manifest_path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError("manifest is not valid JSON: " + std::string(e.what()));
    }
    if (!j.contains("config")) throw ConfigError("manifest has no 'config' object");
    return options_from_json(j.at("config"));
}

}  // namespace qclab
