// qclab: search for Jensen-inequality violations of f_gamma by steepest descent.
//
//   qclab [run] [flags]                      descent campaign (see --help)
//   qclab verify --snapshot F --gamma G --xi "a,b;c,d"
//   qclab rank-one --gamma G [--seed S] [--budget B]
//
// Exit status: 0 success, 2 usage error, 1 runtime failure.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qclab/campaign.hpp"
#include "qclab/format.hpp"

namespace {

int run_verify(const std::vector<std::string>& args) {
    CLI::App app{"qclab verify: exact P1 Jensen integral of a field snapshot"};
    std::string snapshot, xi_text;
    double gamma = 0.0;
    int refine_factor = 0;
    app.add_option("--snapshot", snapshot)->required();
    app.add_option("--gamma", gamma)->required();
    app.add_option("--xi", xi_text)->required();
    app.add_option("--refine", refine_factor, "also report J on a refined copy (factor >= 2)");
    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    qclab::Matrix2 xi;
    try {
        xi = qclab::parse_matrix_literal(xi_text);
    } catch (const qclab::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    const qclab::VectorField f = qclab::load_snapshot(snapshot);
    const qclab::EnergyParams p{gamma};
    std::cout << "n=" << f.spec.n() << "\n";
    std::cout << "j_exact_p1=" << qclab::format_double(qclab::p1_exact_integral(p, xi, f)) << "\n";
    std::cout << "j_trapezoid="
              << qclab::format_double(qclab::eval_J(p, xi, f, qclab::Scheme::TrapezoidNodal))
              << "\n";
    if (refine_factor >= 2)
        std::cout << "j_refined="
                  << qclab::format_double(
                         qclab::p1_exact_integral(p, xi, qclab::refine(f, refine_factor)))
                  << "\n";
    return 0;
}

int run_rank_one(const std::vector<std::string>& args) {
    CLI::App app{"qclab rank-one: sample second differences along rank-one lines"};
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::int64_t budget = 100000;
    app.add_option("--gamma", gamma)->required();
    app.add_option("--seed", seed);
    app.add_option("--budget", budget);
    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    const auto w = qclab::search_rank_one_violation({gamma}, seed, budget);
    std::cout << "threshold=" << qclab::format_double(qclab::rank_one_threshold()) << "\n";
    if (!w) {
        std::cout << "witness=none\n";
        return 0;
    }
    std::cout << "witness=found\n"
              << "base=" << qclab::format_matrix_literal(w->base) << "\n"
              << "a=" << qclab::format_double(w->dir_a[0]) << "," << qclab::format_double(w->dir_a[1])
              << "\n"
              << "b=" << qclab::format_double(w->dir_b[0]) << "," << qclab::format_double(w->dir_b[1])
              << "\n"
              << "t=" << qclab::format_double(w->t) << "\n"
              << "second_diff=" << qclab::format_double(w->second_diff) << "\n";
    return 0;
}

int run_main(const std::vector<std::string>& args) {
    if (!args.empty() && (args[0] == "--help" || args[0] == "-h")) {
        std::cout << "usage: qclab [run] [--mesh-n N] [--gamma-start G] [--gamma-end G] "
                     "[--gamma-step D]\n"
                     "             [--xi-mode fixed|random] [--xi \"a11,a12;a21,a22\"] "
                     "[--xi-scale S]\n"
                     "             [--phi0 p1|p2|p3|p4|zero] [--seed S | --seeds A..B] "
                     "[--max-iters K]\n"
                     "             [--violation-tol T] [--scheme trapezoid|p1exact] [--out DIR]\n"
                     "             [--trace] [--verify-refine K] [--latex] [--jobs J] "
                     "[--config manifest.json]\n"
                     "       qclab verify --snapshot FILE --gamma G --xi \"a11,a12;a21,a22\" "
                     "[--refine K]\n"
                     "       qclab rank-one --gamma G [--seed S] [--budget B]\n";
        return 0;
    }
    if (!args.empty() && args[0] == "verify") return run_verify({args.begin() + 1, args.end()});
    if (!args.empty() && args[0] == "rank-one")
        return run_rank_one({args.begin() + 1, args.end()});

    std::vector<std::string> run_args = args;
    if (!run_args.empty() && run_args[0] == "run") run_args.erase(run_args.begin());

    const char* env_out = std::getenv("QCLAB_OUT_DIR");
    qclab::CampaignOptions opts;
    try {
        opts = qclab::parse_config(run_args, env_out ? env_out : "");
    } catch (const qclab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    const qclab::RunManifest m = qclab::run_campaign(opts);
    std::cout << "out=" << opts.out_dir.string() << "\n"
              << "seeds=" << opts.seed_first << ".." << opts.seed_last << "\n"
              << "records=" << m.record_count << "\n"
              << "verified=" << m.verified_count << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
