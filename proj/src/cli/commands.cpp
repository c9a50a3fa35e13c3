#include "smoothmax/cli/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "smoothmax/baselines.hpp"
#include "smoothmax/cli/io.hpp"
#include "smoothmax/errors.hpp"
#include "smoothmax/meb.hpp"
#include "smoothmax/random.hpp"

namespace smoothmax::cli {

using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

void check_relative_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
        throw ContractViolation("epsilon must lie in (0, 1]");
    }
}

struct Timed {
    MebResult result;
    double    wall_time_ms = 0.0;
};

RunOptions run_options_from_environment() {
    RunOptions options;
    options.reduction = Reduction::from_environment();
    return options;
}

MebResult run_algorithm(Algorithm algorithm, const PointCloud& cloud, double epsilon, std::uint64_t seed,
                        const RunOptions& options) {
    switch (algorithm) {
        case Algorithm::smooth:
            return solve_meb(cloud, MebConfig{epsilon}, options);
        case Algorithm::coreset:
            return badoiu_clarkson(cloud, epsilon);
        case Algorithm::exact: {
            const ExactMebResult exact = welzl_exact(cloud, seed);
            MebResult            result;
            result.center = exact.center;
            result.radius = exact.radius;
            return result;
        }
    }
    throw ContractViolation("unknown algorithm");
}

// Shortest representation that round-trips.
std::string format_number(double v) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
    return std::string(buffer, result.ptr);
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
    if (name == "smooth") {
        return Algorithm::smooth;
    }
    if (name == "coreset") {
        return Algorithm::coreset;
    }
    if (name == "exact") {
        return Algorithm::exact;
    }
    throw ContractViolation("unknown algorithm '" + std::string(name) + "' (expected smooth, coreset or exact)");
}

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::smooth:
            return "smooth";
        case Algorithm::coreset:
            return "coreset";
        case Algorithm::exact:
            return "exact";
    }
    return "unknown";
}

json solve_cloud(const PointCloud& cloud, const SolveOptions& options, std::ostream* trace) {
    check_relative_epsilon(options.epsilon);

    RunOptions run_options = run_options_from_environment();
    if (trace != nullptr && options.algorithm == Algorithm::smooth) {
        *trace << "t,smooth_value,gradient_norm\n";
        run_options.observer = [trace](const IterationInfo& info) {
            *trace << info.state.t << ',' << format_number(info.smooth_value_at_y) << ','
                   << format_number(info.gradient_norm_at_y) << '\n';
        };
    }

    const auto      start  = Clock::now();
    const MebResult result = run_algorithm(options.algorithm, cloud, options.epsilon, options.seed, run_options);
    const double    wall   = elapsed_ms(start);

    json out;
    out["algorithm"]          = std::string(to_string(options.algorithm));
    out["n"]                  = cloud.size();
    out["d"]                  = cloud.dim();
    out["epsilon"]            = options.epsilon;
    out["center"]             = to_json(result.center);
    out["radius"]             = result.radius;
    out["iterations"]         = result.iterations;
    out["planned_iterations"] = result.planned_iterations;
    out["wall_time_ms"]       = wall;
    if (options.algorithm == Algorithm::smooth) {
        out["constants"] = json{{"s", result.s},
                                {"L_s", result.L_s},
                                {"U_s", result.U_s},
                                {"kappa_s", result.kappa_s},
                                {"G_s", result.G_s}};
    }

    if (options.verify) {
        const double exact = welzl_exact(cloud, options.seed).radius;
        const double bound = options.algorithm == Algorithm::exact ? 1.0 : 1.0 + options.epsilon;
        const bool   ok    = result.radius <= bound * exact * (1.0 + 1e-9);
        out["verification"] = json{{"exact_radius", exact},
                                   {"ratio", exact > 0.0 ? result.radius / exact : 1.0},
                                   {"bound", bound},
                                   {"passed", ok}};
        if (!ok) {
            throw Error("verification failed: radius " + format_number(result.radius) + " exceeds " +
                        format_number(bound) + " x exact radius " + format_number(exact));
        }
    }
    return out;
}

double loglog_slope(const std::vector<double>& epsilons, const std::vector<double>& iterations) {
    if (epsilons.size() != iterations.size() || epsilons.size() < 2) {
        throw ContractViolation("loglog_slope needs at least two matching samples");
    }
    const auto   count = static_cast<double>(epsilons.size());
    double       mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        mx += std::log(1.0 / epsilons[i]);
        my += std::log(iterations[i]);
    }
    mx /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        const double dx = std::log(1.0 / epsilons[i]) - mx;
        sxy += dx * (std::log(iterations[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) {
        throw ContractViolation("loglog_slope needs at least two distinct epsilons");
    }
    return sxy / sxx;
}

BenchReport run_bench(const BenchOptions& options) {
    if (options.epsilons.empty() || options.algorithms.empty()) {
        throw ContractViolation("bench needs at least one epsilon and one algorithm");
    }
    for (double e : options.epsilons) {
        check_relative_epsilon(e);
    }
    testkit::CloudSpec spec;
    spec.n            = options.n;
    spec.dim          = options.dim;
    spec.distribution = options.distribution;
    const PointCloud cloud = testkit::random_point_cloud(options.seed, spec);

    BenchReport report;
    report.options = options;
    if (cloud.dim() <= kMaxExactDimension) {
        report.reference_kind   = "welzl";
        report.reference_radius = welzl_exact(cloud, options.seed).radius;
        report.exact_radius     = report.reference_radius;
    } else {
        report.reference_kind   = "coreset_1e-3";
        report.reference_radius = badoiu_clarkson(cloud, 1e-3).radius;
    }

    const RunOptions timed_options = run_options_from_environment();
    for (Algorithm algorithm : options.algorithms) {
        for (double epsilon : options.epsilons) {
            BenchRow row;
            row.algorithm = algorithm;
            row.epsilon   = epsilon;

            // Warm-up run, excluded from timing; for the smoothed solver it also records the
            // first step whose covering radius reaches (1 + eps) R_exact.
            RunOptions warmup = timed_options;
            if (algorithm == Algorithm::smooth && report.exact_radius) {
                const double target = (1.0 + epsilon) * *report.exact_radius;
                auto         first  = std::make_shared<std::optional<std::size_t>>();
                warmup.observer     = [&cloud, target, first](const IterationInfo& info) {
                    if (!*first &&
                        std::sqrt(farthest_sq_distance(cloud, info.state.x_current).squared_distance) <= target) {
                        *first = info.state.t - 1;
                    }
                };
                const MebResult warm = run_algorithm(algorithm, cloud, epsilon, options.seed, warmup);
                if (!*first && warm.radius <= target) {
                    *first = warm.iterations;
                }
                row.observed_iterations = *first;
            } else {
                run_algorithm(algorithm, cloud, epsilon, options.seed, warmup);
            }

            const auto      start  = Clock::now();
            const MebResult result = run_algorithm(algorithm, cloud, epsilon, options.seed, timed_options);
            row.wall_time_ms       = elapsed_ms(start);

            row.iterations         = result.iterations;
            row.planned_iterations = result.planned_iterations;
            if (algorithm == Algorithm::smooth) {
                row.formula_iterations = required_iterations_meb(epsilon, cloud.size());
            }
            row.radius = result.radius;
            row.radius_over_reference =
                report.reference_radius > 0.0 ? result.radius / report.reference_radius : 1.0;
            if (report.exact_radius) {
                row.radius_over_exact = row.radius_over_reference;
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

json bench_to_json(const BenchReport& report) {
    json out;
    out["instance"] = json{{"seed", report.options.seed},
                           {"n", report.options.n},
                           {"d", report.options.dim},
                           {"distribution", std::string(testkit::to_string(report.options.distribution))}};
    out["reference"]        = report.reference_kind;
    out["reference_radius"] = report.reference_radius;
    out["exact_radius"]     = optional_json(report.exact_radius);

    json rows = json::array();
    for (const BenchRow& row : report.rows) {
        rows.push_back(json{{"algorithm", std::string(to_string(row.algorithm))},
                            {"epsilon", row.epsilon},
                            {"iterations", row.iterations},
                            {"planned_iterations", row.planned_iterations},
                            {"formula_iterations", optional_json(row.formula_iterations)},
                            {"observed_iterations", optional_json(row.observed_iterations)},
                            {"wall_time_ms", row.wall_time_ms},
                            {"radius", row.radius},
                            {"radius_over_reference", row.radius_over_reference},
                            {"radius_over_exact", optional_json(row.radius_over_exact)}});
    }
    out["rows"] = rows;

    // iteration-count scaling against 1/eps for every algorithm with an iteration count
    json scaling = json::object();
    for (Algorithm algorithm : report.options.algorithms) {
        std::vector<double> eps, its;
        for (const BenchRow& row : report.rows) {
            if (row.algorithm == algorithm && row.planned_iterations > 0) {
                eps.push_back(row.epsilon);
                its.push_back(static_cast<double>(row.planned_iterations));
            }
        }
        bool distinct = false;
        for (double e : eps) {
            distinct = distinct || e != eps.front();
        }
        if (eps.size() >= 2 && distinct) {
            scaling[std::string(to_string(algorithm))] = loglog_slope(eps, its);
        }
    }
    out["planned_iteration_slope"] = scaling;
    return out;
}

std::string bench_to_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "algorithm,epsilon,iterations,planned_iterations,formula_iterations,observed_iterations,wall_time_ms,"
           "radius,radius_over_reference,radius_over_exact\n";
    auto opt = [](const auto& v) { return v ? format_number(static_cast<double>(*v)) : std::string(); };
    for (const BenchRow& row : report.rows) {
        out << to_string(row.algorithm) << ',' << format_number(row.epsilon) << ',' << row.iterations << ','
            << row.planned_iterations << ',' << opt(row.formula_iterations) << ','
            << opt(row.observed_iterations) << ',' << format_number(row.wall_time_ms) << ','
            << format_number(row.radius) << ',' << format_number(row.radius_over_reference) << ','
            << opt(row.radius_over_exact) << '\n';
    }
    return out.str();
}

GradcheckSummary run_gradcheck(const GradcheckOptions& options) {
    if (options.trials == 0 || options.n == 0 || options.dim == 0 || !(options.smoother > 0.0)) {
        throw ContractViolation("gradcheck needs trials, n, dim >= 1 and a positive smoother");
    }
    GradcheckSummary summary;
    Rng              points(options.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const testkit::RandomQuadraticFamily instance =
            testkit::random_quadratic_family(options.seed + trial, {options.n, options.dim, 0.5, 2.0, 1.0});
        Vector x(static_cast<Eigen::Index>(options.dim));
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            x[j] = points.uniform(-1.5, 1.5);
        }
        const testkit::DerivativeErrors errors = testkit::check_smooth_derivatives(instance.family, options.smoother, x);
        if (errors.gradient > summary.worst_gradient_error) {
            summary.worst_gradient_error = errors.gradient;
            summary.worst_gradient_trial = trial;
        }
        if (errors.hessian > summary.worst_hessian_error) {
            summary.worst_hessian_error = errors.hessian;
            summary.worst_hessian_trial = trial;
        }
    }
    return summary;
}

namespace {

struct OutputSink {
    std::ofstream file;
    std::ostream* stream = nullptr;
};

void open_sink(OutputSink& sink, const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        sink.stream = &fallback;
        return;
    }
    sink.file.open(path, std::ios::binary);
    if (!sink.file) {
        throw ContractViolation("cannot open output file '" + path + "'");
    }
    sink.stream = &sink.file;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream   in(text);
    std::string         item;
    while (std::getline(in, item, ',')) {
        std::size_t used  = 0;
        double      value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ContractViolation("not a number in list: '" + item + "'");
        }
        if (used != item.size()) {
            throw ContractViolation("not a number in list: '" + item + "'");
        }
        values.push_back(value);
    }
    return values;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream        in(text);
    std::string              item;
    while (std::getline(in, item, ',')) {
        items.push_back(item);
    }
    return items;
}

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Smoothed min-max optimization and approximate minimal enclosing balls", "smoothmax"};
    app.require_subcommand(1);

    // solve
    auto*       solve = app.add_subcommand("solve", "Enclosing ball of a CSV point set");
    std::string solve_input, solve_output, solve_trace, solve_algorithm = "smooth";
    double      solve_epsilon = 0.1;
    std::uint64_t solve_seed  = 0;
    bool        solve_verify  = false;
    solve->add_option("--input", solve_input, "CSV file, one point per line")->required();
    solve->add_option("--epsilon", solve_epsilon, "relative approximation epsilon in (0, 1]");
    solve->add_option("--algorithm", solve_algorithm, "smooth | coreset | exact")
        ->check(CLI::IsMember({"smooth", "coreset", "exact"}));
    solve->add_option("--output", solve_output, "JSON output path (default stdout)");
    solve->add_option("--seed", solve_seed, "seed for the exact solver's point order");
    solve->add_option("--trace", solve_trace, "per-iteration CSV trace (smooth only)");
    solve->add_flag("--verify", solve_verify, "check the radius against the exact solver");

    // bench
    auto*       bench = app.add_subcommand("bench", "Iteration and wall-time comparison on a generated instance");
    BenchOptions bench_options;
    std::string bench_distribution = "gaussian", bench_epsilons = "0.2,0.1,0.05,0.025",
                bench_algorithms = "smooth,coreset", bench_output, bench_format = "json";
    bench->add_option("--n", bench_options.n, "number of points")->check(CLI::PositiveNumber);
    bench->add_option("--dim", bench_options.dim, "dimension")->check(CLI::PositiveNumber);
    bench->add_option("--distribution", bench_distribution, "gaussian | sphere_surface | clustered")
        ->check(CLI::IsMember({"gaussian", "sphere_surface", "clustered"}));
    bench->add_option("--seed", bench_options.seed, "instance seed");
    bench->add_option("--epsilons", bench_epsilons, "comma-separated relative epsilons");
    bench->add_option("--algorithms", bench_algorithms, "comma-separated subset of smooth,coreset,exact");
    bench->add_option("--output", bench_output, "output path (default stdout)");
    bench->add_option("--format", bench_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    // gradcheck
    auto*            gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of smooth derivatives");
    GradcheckOptions grad_options;
    gradcheck->add_option("--seed", grad_options.seed, "seed");
    gradcheck->add_option("--n", grad_options.n, "components per family")->check(CLI::PositiveNumber);
    gradcheck->add_option("--dim", grad_options.dim, "dimension")->check(CLI::PositiveNumber);
    gradcheck->add_option("--smoother", grad_options.smoother, "smoother s")->check(CLI::PositiveNumber);
    gradcheck->add_option("--trials", grad_options.trials, "number of random families")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::bad_flags;
    }

    try {
        if (solve->parsed()) {
            SolveOptions options;
            try {
                check_relative_epsilon(solve_epsilon);
                options.algorithm = parse_algorithm(solve_algorithm);
                if (!solve_trace.empty() && options.algorithm != Algorithm::smooth) {
                    throw ContractViolation("--trace is only available with --algorithm smooth");
                }
            } catch (const ContractViolation& e) {
                err << "error: " << e.what() << '\n';
                return exit_code::bad_flags;
            }
            options.epsilon = solve_epsilon;
            options.seed    = solve_seed;
            options.verify  = solve_verify;

            PointCloud cloud = [&] {
                try {
                    return read_points_csv(solve_input);
                } catch (const InputError&) {
                    throw;
                }
            }();

            OutputSink sink, trace_sink;
            open_sink(sink, solve_output, out);
            std::ostream* trace = nullptr;
            if (!solve_trace.empty()) {
                open_sink(trace_sink, solve_trace, out);
                trace = trace_sink.stream;
            }
            const json result = solve_cloud(cloud, options, trace);
            *sink.stream << result.dump(2) << '\n';
            return exit_code::ok;
        }

        if (bench->parsed()) {
            try {
                bench_options.distribution = testkit::parse_distribution(bench_distribution);
                bench_options.epsilons     = parse_double_list(bench_epsilons);
                bench_options.algorithms.clear();
                for (const std::string& name : split_list(bench_algorithms)) {
                    bench_options.algorithms.push_back(parse_algorithm(name));
                }
                if (bench_options.epsilons.empty() || bench_options.algorithms.empty()) {
                    throw ContractViolation("--epsilons and --algorithms must be non-empty");
                }
                for (double e : bench_options.epsilons) {
                    check_relative_epsilon(e);
                }
            } catch (const ContractViolation& e) {
                err << "error: " << e.what() << '\n';
                return exit_code::bad_flags;
            }
            const BenchReport report = run_bench(bench_options);
            OutputSink        sink;
            open_sink(sink, bench_output, out);
            if (bench_format == "csv") {
                *sink.stream << bench_to_csv(report);
            } else {
                *sink.stream << bench_to_json(report).dump(2) << '\n';
            }
            return exit_code::ok;
        }

        if (gradcheck->parsed()) {
            const GradcheckSummary summary = run_gradcheck(grad_options);
            out << "gradient max relative error: " << format_number(summary.worst_gradient_error) << " (trial "
                << summary.worst_gradient_trial << ", tolerance " << kGradientTolerance << ")\n";
            out << "hessian max relative error:  " << format_number(summary.worst_hessian_error) << " (trial "
                << summary.worst_hessian_trial << ", tolerance " << kHessianTolerance << ")\n";
            if (!summary.passed()) {
                err << "gradcheck failed\n";
                return exit_code::tolerance_failure;
            }
            return exit_code::ok;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::parse_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::solver_error;
    }
    return exit_code::bad_flags;
}

}  // namespace smoothmax::cli
