#include "cli.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "mhgf/domain_io.hpp"
#include "mhgf/errors.hpp"
#include "mhgf/oracle.hpp"

namespace mhgf::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct Options {
    std::string domain;
    std::string trace;
    std::string mode = "lifted";
    std::string output;
    std::string stats;
    std::string log_level = "warn";
    std::uint64_t cap = kDefaultEnumerationCap;
    std::uint64_t seed = 1;
    std::size_t length = 0;
    std::optional<std::size_t> corrupt_at;
    double tolerance = 1e-9;
};

struct Failure {
    std::size_t step;
    std::string message;
};

struct Run {
    std::vector<StepStats> stats;
    std::optional<Failure> failure;
    std::vector<Belief> lifted;
    std::vector<GroundBelief> ground;
};

template <class F, class B>
Run drive(F& f, const std::vector<AnnotationTuple>& trace, std::vector<B>* keep) {
    Run run;
    run.stats.push_back(f.initial_stats());
    if (keep) keep->push_back(f.belief());
    for (const auto& y : trace) {
        try {
            run.stats.push_back(f.step(y));
        } catch (const TraceInconsistency& e) {
            run.failure = Failure{e.step(), e.what()};
            break;
        }
        if (keep) keep->push_back(f.belief());
    }
    return run;
}

Run run_lifted(const Domain& d, const std::vector<AnnotationTuple>& trace, const Options& o, bool keep) {
    LiftedFilter f(d, FilterOptions{o.cap});
    std::vector<Belief> beliefs;
    Run run = drive(f, trace, keep ? &beliefs : nullptr);
    run.lifted = std::move(beliefs);
    return run;
}

Run run_ground(const Domain& d, const std::vector<AnnotationTuple>& trace, const Options& o, bool keep) {
    GroundFilter f(d, FilterOptions{o.cap});
    std::vector<GroundBelief> beliefs;
    Run run = drive(f, trace, keep ? &beliefs : nullptr);
    run.ground = std::move(beliefs);
    return run;
}

ojson stats_json(const StepStats& s) {
    return ojson{{"step", s.step},
                 {"mode", s.mode},
                 {"action", s.action},
                 {"lifted_count", s.lifted_count},
                 {"ground_count", s.ground_count},
                 {"log_z", s.log_z}};
}

ojson report_json(const std::string& mode, const Domain& d, const Options& o, const Run& run) {
    ojson j;
    j["format"] = "mhgf-run-report";
    j["version"] = kReportVersion;
    j["mode"] = mode;
    j["domain"] = d.name;
    j["trace"] = o.trace;
    j["steps"] = ojson::array();
    double loglik = 0.0;
    std::size_t max_lifted = 0;
    std::uint64_t max_ground = 0;
    for (const auto& s : run.stats) {
        j["steps"].push_back(stats_json(s));
        loglik += s.log_z;
        max_lifted = std::max(max_lifted, s.lifted_count);
        max_ground = std::max(max_ground, s.ground_count);
    }
    ojson totals;
    totals["log_likelihood"] = run.failure ? ojson(nullptr) : ojson(loglik);
    totals["max_lifted_count"] = max_lifted;
    totals["max_ground_count"] = max_ground;
    totals["compression_ratio"] =
        max_lifted > 0 ? ojson(static_cast<double>(max_ground) / static_cast<double>(max_lifted)) : ojson(nullptr);
    j["totals"] = totals;
    if (run.failure)
        j["outcome"] = ojson{{"status", "inconsistent"}, {"step", run.failure->step}, {"message", run.failure->message}};
    else
        j["outcome"] = ojson{{"status", "explained"}};
    return j;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else write_file(path, text);
}

int cmd_filter(const Options& o, std::ostream& out, std::ostream& err) {
    Domain d = resolve_domain(o.domain);
    auto trace = load_trace(o.trace);
    if (o.mode != "lifted" && o.mode != "ground") {
        err << "error: --mode must be 'lifted' or 'ground'\n";
        return kUsage;
    }
    Run run = o.mode == "lifted" ? run_lifted(d, trace, o, false) : run_ground(d, trace, o, false);
    emit(o.output, report_json(o.mode, d, o, run).dump(2) + "\n", out);
    if (!o.stats.empty()) {
        std::string lines;
        for (const auto& s : run.stats) lines += stats_json(s).dump() + "\n";
        write_file(o.stats, lines);
    }
    if (run.failure) {
        err << "inconsistent: " << run.failure->message << "\n";
        return kInconsistent;
    }
    return kOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
    Domain d = resolve_domain(o.domain);
    auto trace = load_trace(o.trace);
    Run lifted = run_lifted(d, trace, o, true);
    Run ground = run_ground(d, trace, o, true);

    std::size_t n = std::min(lifted.lifted.size(), ground.ground.size());
    std::optional<std::size_t> first;
    double max_tv = 0.0, ll_lifted = 0.0, ll_ground = 0.0;
    ojson steps = ojson::array();
    out << "step\ttv\n";
    for (std::size_t i = 0; i < n; ++i) {
        double tv = total_variation(expand(lifted.lifted[i], o.cap), ground.ground[i]);
        ll_lifted += lifted.stats[i].log_z;
        ll_ground += ground.stats[i].log_z;
        max_tv = std::max(max_tv, tv);
        if (tv > o.tolerance && !first) first = i;
        std::ostringstream line;
        line.precision(3);
        line << std::scientific << tv;
        out << i << "\t" << line.str() << "\n";
        steps.push_back(ojson{{"step", i},
                              {"tv", tv},
                              {"lifted_log_z", lifted.stats[i].log_z},
                              {"ground_log_z", ground.stats[i].log_z}});
    }
    const double ll_diff = std::abs(ll_lifted - ll_ground);
    bool same_failure = lifted.failure.has_value() == ground.failure.has_value() &&
                        (!lifted.failure || lifted.failure->step == ground.failure->step);
    if (!same_failure && !first) first = n;
    if (!first && ll_diff > o.tolerance) first = n == 0 ? 0 : n - 1;
    const bool pass = !first;

    out << "max_tv\t" << max_tv << "\nloglik_diff\t" << ll_diff << "\n";
    if (first) out << "first divergence at step " << *first << "\n";

    if (!o.output.empty()) {
        ojson j;
        j["format"] = "mhgf-compare-report";
        j["version"] = kReportVersion;
        j["domain"] = d.name;
        j["trace"] = o.trace;
        j["tolerance"] = o.tolerance;
        j["steps"] = steps;
        j["max_tv"] = max_tv;
        j["loglik_diff"] = ll_diff;
        j["first_divergence"] = first ? ojson(*first) : ojson(nullptr);
        j["lifted_outcome"] = lifted.failure ? ojson{{"status", "inconsistent"}, {"step", lifted.failure->step}}
                                             : ojson{{"status", "explained"}};
        j["ground_outcome"] = ground.failure ? ojson{{"status", "inconsistent"}, {"step", ground.failure->step}}
                                             : ojson{{"status", "explained"}};
        j["outcome"] = pass ? "pass" : "fail";
        write_file(o.output, j.dump(2) + "\n");
    }
    if (!pass) {
        err << "lifted and ground filtering diverge at step " << *first << "\n";
        return kTolerance;
    }
    if (lifted.failure) {
        err << "both filters reject the trace at step " << lifted.failure->step << "\n";
        return kInconsistent;
    }
    return kOk;
}

int cmd_gentrace(const Options& o, std::ostream& out) {
    Domain d = resolve_domain(o.domain);
    auto g = generate_trace(d, o.seed, o.length, o.corrupt_at);
    if (g.dead_end)
        spdlog::warn("simulation reached a dead end after {} of {} steps", g.tuples.size(), o.length);
    if (o.corrupt_at && !g.corrupted_at)
        spdlog::warn("step {} is outside the generated trace; nothing corrupted", *o.corrupt_at);
    emit(o.output, serialize_trace(g.tuples), out);
    return kOk;
}

int cmd_domain(const Options& o, std::ostream& out) {
    emit(o.output, serialize_domain(resolve_domain(o.domain)), out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("mhgf", sink);
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);

    Options o;
    CLI::App app{"Lifted Bayesian filtering over multi-hypergraph states"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    auto add_domain = [&](CLI::App* c) {
        c->add_option("--domain", o.domain, "Domain file, or builtin:bookshelf / builtin:bookshelf-mini")->required();
    };
    auto add_common = [&](CLI::App* c) {
        add_domain(c);
        c->add_option("--trace", o.trace, "Annotation trace (JSON lines)")->required();
        c->add_option("--max-groundings", o.cap, "Grounding enumeration cap");
    };
    auto add_log = [&](CLI::App* c) {
        c->add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off");
    };

    auto* filter = app.add_subcommand("filter", "Filter a trace, write a run report");
    add_common(filter);
    filter->add_option("--mode", o.mode, "lifted or ground")->check(CLI::IsMember({"lifted", "ground"}));
    filter->add_option("--output", o.output, "Report path (default: stdout)");
    filter->add_option("--stats", o.stats, "Per-step statistics, JSON lines");
    add_log(filter);

    auto* compare = app.add_subcommand("compare", "Compare lifted filtering against the ground oracle");
    add_common(compare);
    compare->add_option("--tolerance", o.tolerance, "Maximum per-step total variation");
    compare->add_option("--output", o.output, "Comparison report path");
    add_log(compare);

    auto* gentrace = app.add_subcommand("gentrace", "Simulate the domain and write an annotation trace");
    add_domain(gentrace);
    gentrace->add_option("--seed", o.seed, "Random seed");
    gentrace->add_option("--length", o.length, "Number of annotations")->required();
    gentrace->add_option("--corrupt-at", o.corrupt_at, "Corrupt this 1-based step");
    gentrace->add_option("--output", o.output, "Trace path (default: stdout)");
    add_log(gentrace);

    auto* domain = app.add_subcommand("domain", "Print a domain as JSON");
    add_domain(domain);
    domain->add_option("--output", o.output, "Output path (default: stdout)");
    add_log(domain);

    std::vector<std::string> argv_store{"mhgf"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    auto level = spdlog::level::from_str(o.log_level);
    if (level == spdlog::level::off && o.log_level != "off") {
        err << "error: unknown log level '" << o.log_level << "'\n";
        return kUsage;
    }
    logger->set_level(level);

    try {
        if (filter->parsed()) return cmd_filter(o, out, err);
        if (compare->parsed()) return cmd_compare(o, out, err);
        if (gentrace->parsed()) return cmd_gentrace(o, out);
        return cmd_domain(o, out);
    } catch (const ParseError& e) {
        err << "parse error (line " << e.line() << ", column " << e.column() << "): " << e.what() << "\n";
        return kParse;
    } catch (const SemanticError& e) {
        err << "invalid domain: " << e.what() << "\n";
        return kParse;
    } catch (const IntegrityError& e) {
        err << "integrity error at '" << e.subject() << "': " << e.what() << "\n";
        return kParse;
    } catch (const InputError& e) {
        err << "invalid annotation: " << e.what() << "\n";
        return kParse;
    } catch (const EnumerationLimitError& e) {
        err << "enumeration cap exceeded: " << e.what() << "\n";
        return kCap;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    }
}

}  // namespace mhgf::cli
