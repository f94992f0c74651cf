// Command-line front end: plan, enumerate, validate, bench, gen.
// Exit codes: 0 success, 1 domain or I/O errors, 2 usage errors.

#include <charconv>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtplan/baselines.hpp"
#include "dtplan/domain_io.hpp"
#include "dtplan/errors.hpp"
#include "dtplan/generator.hpp"
#include "dtplan/planner.hpp"

namespace {

using dtplan::Domain;
using json = nlohmann::ordered_json;

// Thrown for malformed flag values; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& params) {
    std::map<std::string, double> out;
    for (const std::string& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("--param expects name=value, got '" + p + "'");
        std::string name = p.substr(0, eq);
        std::string value = p.substr(eq + 1);
        try {
            size_t used = 0;
            out[name] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw UsageError("--param value for '" + name + "' is not a number: '" + value + "'");
        }
    }
    return out;
}

struct Sweep {
    std::string name;
    std::vector<double> values;
};

Sweep parse_sweep(const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("--sweep expects name=lo:hi:steps, got '" + text + "'");
    Sweep sweep;
    sweep.name = text.substr(0, eq);
    std::string rest = text.substr(eq + 1);
    double lo = 0, hi = 0;
    long steps = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(rest);
    if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || !in.eof() ||
        steps < 1)
        throw UsageError("--sweep expects name=lo:hi:steps with steps >= 1, got '" + text + "'");
    for (long i = 0; i < steps; ++i)
        sweep.values.push_back(steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                                          static_cast<double>(steps - 1));
    return sweep;
}

// Loads and validates; a non-empty report goes to stderr and throws.
Domain load_checked(const std::string& path, const std::map<std::string, double>& overrides) {
    Domain domain = dtplan::load_domain_file(path, overrides);
    dtplan::ValidationReport report = dtplan::validate_domain(domain);
    if (!report.ok()) {
        for (const auto& entry : report.entries)
            std::cerr << path << ": " << entry.path << ": " << entry.message << "\n";
        throw dtplan::Error("domain '" + path + "' failed validation");
    }
    return domain;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw dtplan::Error("cannot open output file '" + out_path + "'");
    out << text;
}

double best_mid(const std::vector<dtplan::Plan>& plans) {
    double best = -std::numeric_limits<double>::infinity();
    for (const dtplan::Plan& p : plans) best = std::max(best, p.eu.eu.mid());
    return plans.empty() ? 0.0 : best;
}

json plans_to_json(const Domain& domain, const std::vector<dtplan::Plan>& plans) {
    json arr = json::array();
    for (const dtplan::Plan& plan : plans) {
        json steps = json::array();
        for (dtplan::ActionId id : plan.steps) steps.push_back(domain.action(id).name);
        arr.push_back({{"steps", std::move(steps)},
                       {"eu_lo", plan.eu.eu.lo},
                       {"eu_hi", plan.eu.eu.hi}});
    }
    return arr;
}

dtplan::Strategy make_strategy(const std::string& name) {
    dtplan::Strategy strategy;
    if (name == "first")
        strategy.kind = dtplan::StrategyKind::FirstAction;
    else if (name == "priority")
        strategy.kind = dtplan::StrategyKind::FixedPriority;
    else if (name == "sensitivity")
        strategy.kind = dtplan::StrategyKind::Sensitivity;
    else
        throw UsageError("unknown strategy '" + name + "'");
    return strategy;
}

struct PlanArgs {
    std::string file;
    std::string strategy = "first";
    std::vector<std::string> params;
    std::optional<std::size_t> budget_expansions;
    std::optional<double> budget_ms;
    std::string out;
    int jobs = 1;
};

int run_plan(const PlanArgs& args) {
    auto overrides = parse_params(args.params);
    Domain domain = load_checked(args.file, overrides);

    dtplan::PlannerOptions options;
    options.budget.expansions = args.budget_expansions;
    options.budget.ms = args.budget_ms;
    options.jobs = args.jobs;
    dtplan::PlanResult result = dtplan::drips_plan(domain, make_strategy(args.strategy), options);

    json config{{"domain", args.file}, {"strategy", args.strategy}, {"jobs", args.jobs}};
    json params = json::object();
    for (const auto& [name, value] : overrides) params[name] = value;
    config["params"] = std::move(params);
    config["budget_expansions"] =
        args.budget_expansions ? json(*args.budget_expansions) : json(nullptr);
    config["budget_ms"] = args.budget_ms ? json(*args.budget_ms) : json(nullptr);

    json doc{{"config", std::move(config)},
             {"plans", plans_to_json(domain, result.plans)},
             {"stats",
              {{"plans_evaluated", result.stats.plans_evaluated},
               {"expansions", result.stats.expansions},
               {"peak_states", result.stats.peak_states},
               {"wall_ms", result.stats.wall_ms}}}};
    write_output(args.out, doc.dump(2) + "\n");
    return 0;
}

struct EnumerateArgs {
    std::string file;
    std::vector<std::string> params;
    std::string out;
};

int run_enumerate(const EnumerateArgs& args) {
    auto overrides = parse_params(args.params);
    Domain domain = load_checked(args.file, overrides);
    std::size_t total = dtplan::enumerate_plans(domain).size();
    std::vector<dtplan::Plan> optimal = dtplan::enumerate_optimal(domain);

    double best = optimal.empty() ? 0.0 : optimal.front().eu.eu.mid();
    json doc{{"config", {{"domain", args.file}}},
             {"total_plans", total},
             {"optimal_eu", best},
             {"plans", plans_to_json(domain, optimal)}};
    write_output(args.out, doc.dump(2) + "\n");
    return 0;
}

int run_validate(const std::string& file) {
    Domain domain = dtplan::load_domain_file(file);
    dtplan::ValidationReport report = dtplan::validate_domain(domain);
    if (report.ok()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const auto& entry : report.entries)
        std::cout << entry.path << ": " << entry.message << "\n";
    return 1;
}

struct GenArgs {
    unsigned long seed = 1;
    int depth = 3;
    int branching = 3;
    int plans_target = 100;
    std::string out;
};

int run_gen(const GenArgs& args) {
    if (args.depth < 1) throw UsageError("--depth must be at least 1");
    if (args.branching < 2) throw UsageError("--branching must be at least 2");
    if (args.plans_target < 2) throw UsageError("--plans-target must be at least 2");
    dtplan::GenParams params;
    params.seed = args.seed;
    params.depth = args.depth;
    params.branching = args.branching;
    params.plans_target = args.plans_target;
    Domain domain = dtplan::generate_domain(params);
    write_output(args.out, dtplan::serialize_domain(domain));
    return 0;
}

struct BenchArgs {
    std::vector<std::string> files;
    std::string strategies = "first,priority,sensitivity";
    std::string sweep;
    std::string algo = "drips";
    std::string csv;
    int jobs = 1;
};

std::string domain_label(const std::string& path) {
    auto slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
        name = name.substr(0, name.size() - 5);
    return name;
}

int run_bench(const BenchArgs& args) {
    std::vector<std::string> strategies;
    {
        std::istringstream in(args.strategies);
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty()) strategies.push_back(item);
    }
    for (const std::string& s : strategies) make_strategy(s);  // usage check up front
    const bool run_drips = args.algo == "drips" || args.algo == "both";
    const bool run_bb = args.algo == "bb" || args.algo == "both";

    std::optional<Sweep> sweep;
    if (!args.sweep.empty()) sweep = parse_sweep(args.sweep);

    std::ostringstream csv;
    csv << "domain,algo,strategy,param,param_value,plans_evaluated,expansions,peak_states,"
           "wall_ms,optimal_eu,n_optimal_plans\n";
    auto row = [&](const std::string& domain, const std::string& algo,
                   const std::string& strategy, const std::string& param_value,
                   std::size_t evaluated, std::size_t expansions, std::size_t peak,
                   double wall_ms, double optimal_eu, std::size_t n_optimal) {
        csv << domain << ',' << algo << ',' << strategy << ','
            << (sweep ? sweep->name : std::string()) << ',' << param_value << ',' << evaluated
            << ',' << expansions << ',' << peak << ',' << fmt_double(wall_ms) << ','
            << fmt_double(optimal_eu) << ',' << n_optimal << "\n";
    };

    std::vector<double> values = sweep ? sweep->values : std::vector<double>{0.0};
    for (const std::string& file : args.files) {
        std::string label = domain_label(file);
        for (double value : values) {
            std::map<std::string, double> overrides;
            std::string param_value;
            if (sweep) {
                overrides[sweep->name] = value;
                param_value = fmt_double(value);
            }
            Domain domain = load_checked(file, overrides);
            if (run_drips) {
                for (const std::string& name : strategies) {
                    dtplan::PlannerOptions options;
                    options.jobs = args.jobs;
                    dtplan::PlanResult result =
                        dtplan::drips_plan(domain, make_strategy(name), options);
                    double best = best_mid(result.plans);
                    row(label, "drips", name, param_value, result.stats.plans_evaluated,
                        result.stats.expansions, result.stats.peak_states, result.stats.wall_ms,
                        best, result.plans.size());
                }
            }
            if (run_bb) {
                dtplan::BBResult result = dtplan::bb_decision_tree(domain);
                double best = best_mid(result.plans);
                row(label, "bb", "", param_value, result.stats.plans_evaluated,
                    result.stats.nodes_expanded, result.stats.peak_states, result.stats.wall_ms,
                    best, result.plans.size());
            }
        }
    }
    write_output(args.csv, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decision-theoretic refinement planner"};
    app.require_subcommand(1);

    PlanArgs plan_args;
    CLI::App* plan = app.add_subcommand("plan", "Refine the root plan to the optimal set");
    plan->add_option("domain", plan_args.file, "Domain file (JSON)")->required();
    plan->add_option("--strategy", plan_args.strategy, "Search control: first|priority|sensitivity")
        ->check(CLI::IsMember({"first", "priority", "sensitivity"}));
    plan->add_option("--param", plan_args.params, "Override a named constant, name=value");
    std::size_t budget_expansions = 0;
    double budget_ms = 0.0;
    CLI::Option* opt_be =
        plan->add_option("--budget-expansions", budget_expansions, "Stop after N expansions");
    CLI::Option* opt_bm = plan->add_option("--budget-ms", budget_ms, "Stop after N milliseconds");
    plan->add_option("--out", plan_args.out, "Result file (default stdout)");
    plan->add_option("--jobs", plan_args.jobs, "Concurrent plan evaluations")
        ->check(CLI::PositiveNumber);

    EnumerateArgs enum_args;
    CLI::App* enumerate = app.add_subcommand("enumerate", "Exhaustive optimal-plan oracle");
    enumerate->add_option("domain", enum_args.file, "Domain file (JSON)")->required();
    enumerate->add_option("--param", enum_args.params, "Override a named constant, name=value");
    enumerate->add_option("--out", enum_args.out, "Result file (default stdout)");

    std::string validate_file;
    CLI::App* validate = app.add_subcommand("validate", "Check a domain file");
    validate->add_option("domain", validate_file, "Domain file (JSON)")->required();

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a random domain");
    gen->add_option("--seed", gen_args.seed, "RNG seed");
    gen->add_option("--depth", gen_args.depth, "Refinement nesting depth");
    gen->add_option("--branching", gen_args.branching, "Max instantiations per abstract action");
    gen->add_option("--plans-target", gen_args.plans_target, "Concrete plan count");
    gen->add_option("--out", gen_args.out, "Output file (default stdout)");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Measure planner and baseline runs");
    bench->add_option("domains", bench_args.files, "Domain files (JSON)")->required();
    bench->add_option("--strategies", bench_args.strategies, "Comma-separated strategy list");
    bench->add_option("--sweep", bench_args.sweep, "Named constant sweep, name=lo:hi:steps");
    bench->add_option("--algo", bench_args.algo, "drips|bb|both")
        ->check(CLI::IsMember({"drips", "bb", "both"}));
    bench->add_option("--csv", bench_args.csv, "CSV file (default stdout)");
    bench->add_option("--jobs", bench_args.jobs, "Concurrent plan evaluations")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*plan) {
            if (*opt_be) plan_args.budget_expansions = budget_expansions;
            if (*opt_bm) plan_args.budget_ms = budget_ms;
            return run_plan(plan_args);
        }
        if (*enumerate) return run_enumerate(enum_args);
        if (*validate) return run_validate(validate_file);
        if (*gen) return run_gen(gen_args);
        if (*bench) return run_bench(bench_args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
