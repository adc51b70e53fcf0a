// Command-line front end: load a sparse matrix, run one of the randomized
// truncated-SVD algorithms, and emit factors, error metrics, or benchmark
// sweeps in machine-readable form.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dashsvd/bounds.hpp"
#include "dashsvd/errors.hpp"
#include "dashsvd/matrix_market.hpp"
#include "dashsvd/metrics.hpp"
#include "dashsvd/solver.hpp"
#include "dashsvd/synthetic.hpp"
#include "dashsvd/threads.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

dashsvd::Algorithm parse_alg(const std::string& name) {
    static const std::map<std::string, dashsvd::Algorithm> table{
        {"basic", dashsvd::Algorithm::basic},
        {"shifted", dashsvd::Algorithm::shifted},
        {"fixed-shift", dashsvd::Algorithm::fixed_shift},
        {"fixed_shift", dashsvd::Algorithm::fixed_shift},
        {"dash", dashsvd::Algorithm::dash},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw dashsvd::ConfigError("unknown algorithm '" + name +
                                   "' (expected basic, shifted, fixed-shift or dash)");
    return it->second;
}

const char* alg_name(dashsvd::Algorithm alg) {
    switch (alg) {
        case dashsvd::Algorithm::basic: return "basic";
        case dashsvd::Algorithm::shifted: return "shifted";
        case dashsvd::Algorithm::fixed_shift: return "fixed-shift";
        case dashsvd::Algorithm::dash: return "dash";
    }
    return "?";
}

const char* stop_name(dashsvd::StopReason r) {
    switch (r) {
        case dashsvd::StopReason::fixed_p: return "fixed_p";
        case dashsvd::StopReason::tol_met: return "tol_met";
        case dashsvd::StopReason::p_max_reached: return "p_max_reached";
    }
    return "?";
}

// Flag > environment > library default (0 = all cores).
int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    const char* env = std::getenv("DASHSVD_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1)
        throw dashsvd::ConfigError("DASHSVD_THREADS must be a positive integer, got '" +
                                   std::string(env) + "'");
    return static_cast<int>(v);
}

dashsvd::SparseMatrix load_input(const std::string& path) {
    if (path.size() > 4 && path.compare(path.size() - 4, 4, ".dsh") == 0)
        return dashsvd::load_cache(path);
    return dashsvd::load_matrix_market(path);
}

// --synthetic dense1:N | dense2:N | sparse:R:C:NPR (generator seed is fixed so
// a spec names one matrix). For dense2 the exact spectrum is known.
dashsvd::SparseMatrix make_synthetic(const std::string& spec, std::vector<double>* exact_spectrum) {
    const auto fail = [&]() {
        throw dashsvd::ConfigError("bad --synthetic spec '" + spec +
                                   "' (expected dense1:N, dense2:N or sparse:R:C:NPR)");
    };
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    auto as_count = [&](const std::string& s) -> dashsvd::index_t {
        char* end = nullptr;
        const long long v = std::strtoll(s.c_str(), &end, 10);
        if (s.empty() || *end != '\0' || v < 1) fail();
        return static_cast<dashsvd::index_t>(v);
    };
    if (parts[0] == "dense1" && parts.size() == 2) return dashsvd::dense1_matrix(as_count(parts[1]), 0);
    if (parts[0] == "dense2" && parts.size() == 2) {
        const dashsvd::index_t n = as_count(parts[1]);
        if (exact_spectrum) *exact_spectrum = dashsvd::dense2_spectrum(n);
        return dashsvd::dense2_matrix(n, 0);
    }
    if (parts[0] == "sparse" && parts.size() == 4)
        return dashsvd::sparse_random(as_count(parts[1]), as_count(parts[2]), as_count(parts[3]), 0,
                                      /*row_decay=*/true);
    fail();
    return {};
}

struct RunFlags {
    std::string input;
    std::int64_t k = 0;
    std::int64_t s = -1;
    std::int64_t p = -1;
    double tol = 1e-2;
    std::int64_t p_max = 1000;
    std::string alg = "dash";
    std::string orth = "eigsvd";
    std::uint64_t seed = 0;
    int threads = 0;
    bool deterministic = true;
    std::string out_prefix;
};

dashsvd::SolverConfig to_config(const RunFlags& f) {
    dashsvd::SolverConfig cfg;
    cfg.k = f.k;
    cfg.s = f.s;
    cfg.p = f.p;
    cfg.tol = f.tol;
    cfg.p_max = f.p_max;
    cfg.alg = parse_alg(f.alg);
    if (f.orth == "eigsvd")
        cfg.orth = dashsvd::Orthonormalizer::eigsvd;
    else if (f.orth == "qr")
        cfg.orth = dashsvd::Orthonormalizer::qr;
    else
        throw dashsvd::ConfigError("unknown orthonormalizer '" + f.orth + "'");
    cfg.seed = f.seed;
    cfg.deterministic = f.deterministic;
    return cfg;
}

int cmd_run(const RunFlags& flags, bool p_given, bool tol_given, bool pmax_given) {
    dashsvd::SolverConfig cfg = to_config(flags);
    if (cfg.alg == dashsvd::Algorithm::dash) {
        if (p_given) throw dashsvd::ConfigError("--p applies to fixed-power algorithms; dash uses --tol");
    } else if (tol_given || pmax_given) {
        throw dashsvd::ConfigError("--tol/--pmax apply to the dash algorithm only");
    }
    dashsvd::set_thread_count(resolve_threads(flags.threads));

    const auto t0 = Clock::now();
    dashsvd::SparseMatrix a = load_input(flags.input);
    const auto t_loaded = Clock::now();

    // The last observer callback separates iteration work from finalization.
    Clock::time_point last_iteration = t_loaded;
    dashsvd::IterationObserver observer = [&](const dashsvd::IterationState&) {
        last_iteration = Clock::now();
    };
    const dashsvd::SparseMatrix at = dashsvd::transpose(a);
    dashsvd::SolveResult r = dashsvd::solve(a, at, cfg, observer);
    const auto t_solved = Clock::now();

    std::string s_file, u_file, v_file;
    if (!flags.out_prefix.empty()) {
        s_file = flags.out_prefix + ".S.txt";
        u_file = flags.out_prefix + ".U.mtx";
        v_file = flags.out_prefix + ".V.mtx";
        dashsvd::write_reference_spectrum(s_file, r.svd.s);
        dashsvd::write_dense_array(u_file, r.svd.u);
        dashsvd::write_dense_array(v_file, r.svd.v);
    }
    const auto t_end = Clock::now();

    std::printf("matrix: %s\n", flags.input.c_str());
    std::printf("rows: %lld\n", static_cast<long long>(a.rows));
    std::printf("cols: %lld\n", static_cast<long long>(a.cols));
    std::printf("nnz: %lld\n", static_cast<long long>(a.nnz()));
    std::printf("alg: %s\n", alg_name(cfg.alg));
    std::printf("k: %lld\n", static_cast<long long>(cfg.k));
    std::printf("s: %lld\n", static_cast<long long>(cfg.effective_s(cfg.k)));
    std::printf("l: %lld\n", static_cast<long long>(cfg.sketch_width()));
    if (cfg.alg == dashsvd::Algorithm::dash) {
        std::printf("tol: %.17g\n", cfg.tol);
        std::printf("p_max: %lld\n", static_cast<long long>(cfg.p_max));
    } else {
        std::printf("p: %lld\n", static_cast<long long>(cfg.p));
    }
    std::printf("orth: %s\n", flags.orth.c_str());
    std::printf("seed: %llu\n", static_cast<unsigned long long>(cfg.seed));
    std::printf("threads: %d\n", dashsvd::thread_count());
    std::printf("deterministic: %s\n", cfg.deterministic ? "true" : "false");
    std::printf("load_seconds: %.6f\n", seconds_between(t0, t_loaded));
    std::printf("iterate_seconds: %.6f\n", seconds_between(t_loaded, last_iteration));
    std::printf("finalize_seconds: %.6f\n", seconds_between(last_iteration, t_solved));
    std::printf("total_seconds: %.6f\n", seconds_between(t0, t_end));
    std::printf("iterations: %lld\n", static_cast<long long>(r.trace.iterations));
    std::printf("stop_reason: %s\n", stop_name(r.trace.stop_reason));
    std::printf("alphas:");
    for (double alpha : r.trace.alphas) std::printf(" %.17g", alpha);
    std::printf("\n");
    std::printf("sigma:");
    for (double s : r.svd.s) std::printf(" %.17g", s);
    std::printf("\n");
    std::printf("max_triplet_residual: %.6e\n", dashsvd::max_triplet_residual(a, r.svd));
    if (!flags.out_prefix.empty()) {
        std::printf("s_file: %s\n", s_file.c_str());
        std::printf("u_file: %s\n", u_file.c_str());
        std::printf("v_file: %s\n", v_file.c_str());
    }
    return 0;
}

struct MetricsFlags {
    std::string input;
    std::string factors;
    std::string reference;
    std::int64_t power_iters = 300;
    int threads = 0;
};

int cmd_metrics(const MetricsFlags& flags) {
    dashsvd::set_thread_count(resolve_threads(flags.threads));
    dashsvd::SparseMatrix a = load_input(flags.input);

    dashsvd::TruncatedSvd approx;
    approx.u = dashsvd::load_dense_array(flags.factors + ".U.mtx");
    approx.v = dashsvd::load_dense_array(flags.factors + ".V.mtx");
    approx.s = dashsvd::load_reference_spectrum(flags.factors + ".S.txt").sigmas;

    dashsvd::ReferenceSpectrum ref = flags.reference == "oracle"
                                         ? dashsvd::reference_from_oracle(a)
                                         : dashsvd::load_reference_spectrum(flags.reference);

    const double pve = dashsvd::eps_pve(a, approx.u, ref);
    const double res = dashsvd::eps_res(a, approx, ref);
    const double spec = dashsvd::eps_spec(a, approx, ref, flags.power_iters);
    const double sig = dashsvd::eps_sigma(approx.s, ref);
    std::printf("eps_pve,eps_res,eps_spec,eps_sigma\n");
    std::printf("%.9e,%.9e,%.9e,%.9e\n", pve, res, spec, sig);
    return 0;
}

struct BenchFlags {
    std::string input;
    std::string synthetic;
    std::string reference;
    std::int64_t k = 0;
    std::int64_t s = -1;
    std::vector<std::string> algs;
    std::vector<std::int64_t> p_list;
    std::vector<double> tol_list;
    std::int64_t repeats = 1;
    std::uint64_t seed_base = 1;
    int threads = 0;
};

int cmd_bench(const BenchFlags& flags) {
    dashsvd::set_thread_count(resolve_threads(flags.threads));

    std::vector<double> exact;
    dashsvd::SparseMatrix a =
        flags.synthetic.empty() ? load_input(flags.input) : make_synthetic(flags.synthetic, &exact);
    const dashsvd::SparseMatrix at = dashsvd::transpose(a);

    dashsvd::ReferenceSpectrum ref;
    if (!flags.reference.empty() && flags.reference != "oracle")
        ref = dashsvd::load_reference_spectrum(flags.reference);
    else if (!exact.empty())
        ref = {std::move(exact), dashsvd::ReferenceSource::file};
    else
        ref = dashsvd::reference_from_oracle(a);

    if (flags.p_list.empty() == flags.tol_list.empty())
        throw dashsvd::ConfigError("exactly one of --p-list and --tol-list is required");

    std::printf("alg,param,seed,time_s,iterations,stop_reason,eps_pve,eps_res,eps_spec,eps_sigma\n");
    for (const std::string& alg_str : flags.algs) {
        const dashsvd::Algorithm alg = parse_alg(alg_str);
        const bool fixed_power = alg != dashsvd::Algorithm::dash;
        if (fixed_power && flags.p_list.empty())
            throw dashsvd::ConfigError("algorithm '" + alg_str + "' sweeps --p-list");
        if (!fixed_power && flags.tol_list.empty())
            throw dashsvd::ConfigError("algorithm 'dash' sweeps --tol-list");

        const std::size_t params = fixed_power ? flags.p_list.size() : flags.tol_list.size();
        for (std::size_t pi = 0; pi < params; ++pi) {
            for (std::int64_t rep = 0; rep < flags.repeats; ++rep) {
                dashsvd::SolverConfig cfg;
                cfg.alg = alg;
                cfg.k = flags.k;
                cfg.s = flags.s;
                cfg.seed = flags.seed_base + static_cast<std::uint64_t>(rep);
                char param_text[64];
                if (fixed_power) {
                    cfg.p = flags.p_list[pi];
                    std::snprintf(param_text, sizeof param_text, "%lld",
                                  static_cast<long long>(cfg.p));
                } else {
                    cfg.tol = flags.tol_list[pi];
                    std::snprintf(param_text, sizeof param_text, "%g", cfg.tol);
                }

                const auto t0 = Clock::now();
                dashsvd::SolveResult r = dashsvd::solve(a, at, cfg);
                const double elapsed = seconds_between(t0, Clock::now());

                const double pve = dashsvd::eps_pve(a, r.svd.u, ref);
                const double res = dashsvd::eps_res(a, r.svd, ref);
                const double spec = dashsvd::eps_spec(a, r.svd, ref);
                const double sig = dashsvd::eps_sigma(r.svd.s, ref);
                std::printf("%s,%s,%llu,%.6f,%lld,%s,%.9e,%.9e,%.9e,%.9e\n", alg_name(alg),
                            param_text, static_cast<unsigned long long>(cfg.seed), elapsed,
                            static_cast<long long>(r.trace.iterations), stop_name(r.trace.stop_reason),
                            pve, res, spec, sig);
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomized truncated SVD for large sparse matrices"};
    app.require_subcommand(1);

    RunFlags run;
    CLI::App* c_run = app.add_subcommand("run", "factor a matrix and write the results");
    c_run->add_option("--input", run.input, "Matrix Market file (.mtx) or CSR cache (.dsh)")
        ->required();
    c_run->add_option("--k", run.k, "target rank")->required();
    c_run->add_option("--s", run.s, "oversampling (default k/2)");
    CLI::Option* opt_p = c_run->add_option("--p", run.p, "power-iteration count (basic/shifted)");
    CLI::Option* opt_tol = c_run->add_option("--tol", run.tol, "accuracy tolerance (dash)");
    CLI::Option* opt_pmax = c_run->add_option("--pmax", run.p_max, "iteration cap (dash)");
    opt_p->excludes(opt_tol);
    opt_tol->excludes(opt_p);
    c_run->add_option("--alg", run.alg, "basic | shifted | fixed-shift | dash (default dash)");
    c_run->add_option("--orth", run.orth, "eigsvd | qr (basic only; default eigsvd)");
    c_run->add_option("--seed", run.seed, "sketch seed (default 0)");
    c_run->add_option("--threads", run.threads, "worker threads (default: DASHSVD_THREADS or all)");
    c_run->add_flag("--deterministic,!--no-deterministic", run.deterministic,
                    "bitwise reproducible runs (default on; kernels are invariant either way)");
    c_run->add_option("--out-prefix", run.out_prefix,
                      "write PREFIX.S.txt, PREFIX.U.mtx, PREFIX.V.mtx");

    MetricsFlags met;
    CLI::App* c_met = app.add_subcommand("metrics", "error metrics of stored factors");
    c_met->add_option("--input", met.input, "matrix the factors approximate")->required();
    c_met->add_option("--factors", met.factors, "prefix written by run --out-prefix")->required();
    c_met->add_option("--reference", met.reference, "spectrum file, or 'oracle' for small inputs")
        ->required();
    c_met->add_option("--power-iters", met.power_iters, "spectral-norm power iterations (default 300)");
    c_met->add_option("--threads", met.threads, "worker threads");

    BenchFlags bench;
    CLI::App* c_bench = app.add_subcommand("bench", "parameter sweeps as long-format CSV");
    CLI::Option* opt_in = c_bench->add_option("--input", bench.input, "matrix file");
    CLI::Option* opt_syn = c_bench->add_option(
        "--synthetic", bench.synthetic, "dense1:N | dense2:N | sparse:R:C:NPR instead of --input");
    opt_in->excludes(opt_syn);
    opt_syn->excludes(opt_in);
    c_bench->add_option("--reference", bench.reference,
                        "spectrum file or 'oracle' (default: exact for dense2, else oracle)");
    c_bench->add_option("--k", bench.k, "target rank")->required();
    c_bench->add_option("--s", bench.s, "oversampling (default k/2)");
    c_bench->add_option("--alg", bench.algs, "algorithms to sweep (comma separated)")
        ->required()
        ->delimiter(',');
    CLI::Option* opt_plist =
        c_bench->add_option("--p-list", bench.p_list, "power counts to sweep")->delimiter(',');
    CLI::Option* opt_tlist =
        c_bench->add_option("--tol-list", bench.tol_list, "tolerances to sweep")->delimiter(',');
    opt_plist->excludes(opt_tlist);
    opt_tlist->excludes(opt_plist);
    c_bench->add_option("--repeats", bench.repeats, "seeds per configuration (default 1)");
    c_bench->add_option("--seed-base", bench.seed_base, "first seed (default 1)");
    c_bench->add_option("--threads", bench.threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_run->parsed())
            return cmd_run(run, opt_p->count() > 0, opt_tol->count() > 0, opt_pmax->count() > 0);
        if (c_met->parsed()) return cmd_metrics(met);
        return cmd_bench(bench);
    } catch (const dashsvd::RankDeficient& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const dashsvd::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const dashsvd::DegenerateReference& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const dashsvd::HypothesisError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const dashsvd::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
