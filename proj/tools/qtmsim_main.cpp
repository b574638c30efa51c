// qtmsim: command-line front end.
//
// Every subcommand builds one payload object. `--format text` prints it as
// key: value lines, `--format json` as {version, request, payload, timing}.
// Payloads depend only on the request (including the seed).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_support.hpp"
#include "qtmsim/complexity.hpp"
#include "qtmsim/ensemble.hpp"
#include "qtmsim/errors.hpp"
#include "qtmsim/kernels.hpp"
#include "qtmsim/machine_ir.hpp"
#include "qtmsim/measurement.hpp"
#include "qtmsim/statistics.hpp"
#include "qtmsim/superposition.hpp"
#include "qtmsim/wellformed.hpp"

using json = nlohmann::ordered_json;
using namespace qtm;

namespace {

// Failure that maps to exit 3 after the payload is printed.
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string format = "text";
    std::string path;
    std::string input;
    std::int64_t steps = 0;
    std::int64_t cell = 0;
    std::string model;
    std::string theta_text;
    std::string epsilon_text;
    std::optional<std::int64_t> n;
    std::optional<std::uint64_t> seed;
    std::int64_t partitions = 1;
    bool slow_path = false;
    bool dump = false;
    std::string noise = "uniform";
    std::string scale = "probability";
    std::optional<std::int64_t> trials;
    std::int64_t repeat = 1;
    std::int64_t window = 4;
    std::int64_t window_steps = 2;
    std::int64_t samples = 32;
    std::string thetas;
    std::string epsilons;
    std::string convention = "two-sided";
    std::string mode = "exact";
    std::string source = "abstract";
    std::string to = "zbqp-star";
    std::string out;
    std::string instance_out;
};

bool is_ir_path(const std::string &p) { return std::filesystem::path(p).extension() == ".mqir"; }

Machine load_any_machine(const std::string &path) {
    if (is_ir_path(path)) {
        return lower(load_ir(path));
    }
    return load_machine(path);
}

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json marginal_json(const Machine &m, const std::vector<double> &p) {
    json out = json::object();
    for (SymbolId k = 0; k < p.size(); ++k) {
        out[m.alphabet()[k]] = p[k];
    }
    return out;
}

json outcome_json(const MeasurementOutcome &o) {
    return json{{"model", kind_name(o.model)},
                {"value", o.value},
                {"value_unclamped", o.value_unclamped},
                {"fault", o.fault},
                {"collapsed", o.collapsed},
                {"theta", o.theta},
                {"epsilon", o.epsilon},
                {"seed", o.seed}};
}

json verdict_json(const Verdict &v) {
    json margins = json::object();
    for (const auto &[k, x] : v.margins) {
        margins[k] = x;
    }
    json out{{"class", class_name(v.cls)},
             {"in_class_evidence", v.in_class_evidence},
             {"label", v.label},
             {"margins", margins},
             {"mode", mode_name(v.mode)}};
    out["trials"] = v.trials ? json(*v.trials) : json(nullptr);
    out["seed"] = v.seed ? json(*v.seed) : json(nullptr);
    out["k"] = v.k ? json(*v.k) : json(nullptr);
    out["notes"] = v.notes;
    return out;
}

json cmd_validate(const Options &o, json &request) {
    const Machine m = load_any_machine(o.path);
    const std::uint64_t seed = cli::resolve_seed(o.seed);
    request["seed"] = seed;
    request["window"] = o.window;
    request["steps"] = o.window_steps;
    request["samples"] = o.samples;
    const auto report = validate_wellformed(m);
    const auto window = check_unitarity_window(m, o.window, o.window_steps, o.samples, seed);
    json norms = json::array();
    for (const auto &c : report.norms) {
        norms.push_back(json{{"column", c.column}, {"norm_sq", c.norm_sq}, {"ok", c.ok}});
    }
    json overlaps = json::array();
    for (const auto &c : report.overlaps) {
        overlaps.push_back(json{{"kind", c.kind},
                                {"first", c.first},
                                {"second", c.second},
                                {"written", c.written},
                                {"value", complex_json(c.value)},
                                {"ok", c.ok}});
    }
    json payload{{"machine", m.name()},
                 {"symbols", m.symbol_count()},
                 {"states", m.state_count()},
                 {"entries", m.entry_count()},
                 {"wellformed",
                  {{"scope", report.scope},
                   {"pass", report.pass},
                   {"pairs_checked", report.pairs_checked},
                   {"failures", report.failures},
                   {"norms", norms},
                   {"overlaps", overlaps}}},
                 {"window",
                  {{"pass", window.pass},
                   {"worst_deviation", window.worst_deviation},
                   {"radius", window.radius},
                   {"steps", window.steps},
                   {"samples", window.samples},
                   {"seed", window.seed},
                   {"largest_support", window.largest_support}}},
                 {"pass", report.pass && window.pass}};
    return payload;
}

json cmd_run(const Options &o, json &request) {
    const Machine m = load_any_machine(o.path);
    request["input"] = o.input;
    request["steps"] = o.steps;
    if (o.steps < 0) {
        throw std::invalid_argument("--steps must be non-negative");
    }
    const auto s = run(m, o.input, o.steps);
    json payload{{"machine", m.name()},
                 {"input", o.input},
                 {"steps", o.steps},
                 {"support", s.size()},
                 {"norm_sq", s.norm_sq()},
                 {"halted_mass", halted_mass(m, s)}};
    payload["marginal_cell"] = o.cell;
    payload["marginal"] = marginal_json(m, marginal(m, s, o.cell));
    if (o.dump) {
        json amps = json::array();
        for (std::size_t k = 0; k < s.size(); ++k) {
            amps.push_back(json{{"configuration", s.config(k).describe(m)},
                                {"re", s.amplitude(k).real()},
                                {"im", s.amplitude(k).imag()}});
        }
        payload["amplitudes"] = amps;
    }
    return payload;
}

json cmd_observe(const Options &o, json &request) {
    const Machine m = load_any_machine(o.path);
    const std::uint64_t seed = cli::resolve_seed(o.seed);
    request["input"] = o.input;
    request["steps"] = o.steps;
    request["cell"] = o.cell;
    request["model"] = o.model;
    request["seed"] = seed;
    Rng rng = make_rng(seed);
    Harness h(m, run(m, o.input, o.steps), MachineModel::qtm);
    json payload{{"machine", m.name()}, {"seed", seed}, {"collapsed", true}};
    if (o.model == "qtm") {
        payload["model"] = "qtm-observe";
        payload["configuration"] = h.observe_full(rng).describe(m);
    } else if (o.model == "qtm-partial") {
        payload["model"] = "qtm-partial";
        payload["cell"] = o.cell;
        payload["marginal_before"] = marginal_json(m, marginal(m, h.state(), o.cell));
        payload["symbol"] = m.alphabet()[h.observe_cell(o.cell, rng)];
        payload["support_after"] = h.state().size();
    } else {
        throw std::invalid_argument("--model must be qtm or qtm-partial");
    }
    return payload;
}

json cmd_measure(const Options &o, json &request) {
    const Machine m = load_any_machine(o.path);
    const std::uint64_t seed = cli::resolve_seed(o.seed);
    const double theta = cli::parse_real(o.theta_text);
    request["input"] = o.input;
    request["steps"] = o.steps;
    request["cell"] = o.cell;
    request["model"] = o.model;
    request["theta"] = theta;
    request["noise"] = o.noise;
    request["repeat"] = o.repeat;
    request["seed"] = seed;
    if (o.repeat < 1) {
        throw std::invalid_argument("--repeat must be at least 1");
    }
    Rng rng = make_rng(seed);
    NoiseModel noise(parse_noise(o.noise), theta);
    const auto state = run(m, o.input, o.steps);
    json outcomes = json::array();
    json payload{{"machine", m.name()}, {"exact_p1", qubit_marginal(m, state, o.cell).p1}};
    if (o.model == "bqtm") {
        Harness h(m, state, MachineModel::bqtm);
        for (std::int64_t r = 0; r < o.repeat; ++r) {
            auto out = h.bulk_measure(o.cell, noise, rng);
            out.seed = seed;
            outcomes.push_back(outcome_json(out));
        }
    } else if (o.model == "mbqtm") {
        if (o.epsilon_text.empty()) {
            throw std::invalid_argument("--model mbqtm needs --epsilon");
        }
        const double epsilon = cli::parse_real(o.epsilon_text);
        request["epsilon"] = epsilon;
        if (o.n) {
            // Ensemble realisation: n members, one binomial draw.
            request["n"] = *o.n;
            auto q = qubit_marginal(m, state, o.cell);
            auto plus = sample_count_plus(q.p1, *o.n, seed, 1);
            double avg = static_cast<double>(2 * plus - *o.n) / static_cast<double>(*o.n);
            json rec{{"model", "mbqtm-et"},    {"value", avg},       {"value_unclamped", avg},
                     {"fault", std::abs(avg - q.expectation()) >= theta},
                     {"collapsed", true},      {"theta", theta},     {"epsilon", epsilon},
                     {"seed", seed},           {"n", *o.n},          {"count_plus", plus}};
            outcomes.push_back(rec);
            if (o.repeat > 1) {
                throw ConsumedError("the ensemble has been measured; an (ε,θ)-measurement cannot be repeated");
            }
        } else {
            Harness h(m, state, MachineModel::mbqtm);
            for (std::int64_t r = 0; r < o.repeat; ++r) {
                auto out = h.et_measure(o.cell, epsilon, theta, rng, &noise);
                out.seed = seed;
                outcomes.push_back(outcome_json(out));
            }
        }
    } else {
        throw std::invalid_argument("--model must be bqtm or mbqtm");
    }
    payload["outcomes"] = outcomes;
    return payload;
}

json ensemble_json(const EnsembleReport &r) {
    json out{{"n", r.n},
             {"count_plus", r.count_plus},
             {"count_minus", r.count_minus},
             {"average", r.average},
             {"exact_p1", r.exact_p1}};
    out["theta"] = r.theta ? json(*r.theta) : json(nullptr);
    out["within_theta"] = r.within_theta;
    out["scale"] = scale_name(r.scale);
    out["seed"] = r.seed;
    out["partitions"] = r.partitions;
    out["slow_path"] = r.slow_path;
    return out;
}

json cmd_ensemble(const Options &o, json &request) {
    const Machine m = load_any_machine(o.path);
    const std::uint64_t seed = cli::resolve_seed(o.seed);
    if (!o.n) {
        throw std::invalid_argument("--n is required");
    }
    EnsembleConfig cfg{*o.n, seed, o.partitions, o.slow_path};
    std::optional<double> theta;
    if (!o.theta_text.empty()) {
        theta = cli::parse_real(o.theta_text);
    }
    const auto scale = parse_scale(o.scale);
    request["input"] = o.input;
    request["steps"] = o.steps;
    request["cell"] = o.cell;
    request["n"] = *o.n;
    request["partitions"] = o.partitions;
    request["slow_path"] = o.slow_path;
    request["scale"] = o.scale;
    request["seed"] = seed;
    const auto report = ensemble_measure(m, o.input, o.steps, o.cell, cfg, theta, scale);
    json payload = ensemble_json(report);
    if (o.trials) {
        if (!theta) {
            throw std::invalid_argument("--trials needs --theta");
        }
        request["trials"] = *o.trials;
        auto rate = empirical_error_rate(report.exact_p1, *o.n, *theta, scale, *o.trials, cfg);
        json r{{"rate", rate.rate}, {"trials", rate.trials}, {"mc_sigma", rate.mc_sigma}};
        if (*o.n <= 1'000'000) {
            r["exact"] = binomial_exceedance(*o.n, report.exact_p1, *theta, scale);
        }
        if (scale == EstimateScale::probability && *theta < 0.5) {
            r["normal_approximation"] = achieved_epsilon(*theta, *o.n);
        }
        payload["error_rate"] = r;
    }
    return payload;
}

json cmd_table(const Options &o, json &request, std::string &grid_text) {
    TableSpec spec{cli::parse_real_list(o.thetas), cli::parse_real_list(o.epsilons),
                   parse_convention(o.convention)};
    request["thetas"] = spec.thetas;
    request["epsilons"] = spec.epsilons;
    request["convention"] = o.convention;
    const auto grid = build_table(spec);
    json records = json::array();
    std::ostringstream text;
    text << "theta \\ epsilon";
    for (double e : spec.epsilons) {
        text << '\t' << json(e).dump();
    }
    text << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        text << json(spec.thetas[i]).dump();
        for (std::size_t j = 0; j < grid[i].size(); ++j) {
            text << '\t' << grid[i][j];
            records.push_back(json{{"theta", spec.thetas[i]},
                                   {"epsilon", spec.epsilons[j]},
                                   {"convention", o.convention},
                                   {"n", grid[i][j]}});
        }
        text << '\n';
    }
    grid_text = text.str();
    return json{{"convention", o.convention}, {"grid", grid}, {"records", records}};
}

json cmd_audit(std::string &grid_text) {
    const auto audit = audit_table1();
    json records = json::array();
    std::ostringstream text;
    text << "theta\teps_stated\tn_paper\tn_two_sided\tn_cols23\teps_achieved\tverdict\n";
    for (const auto &r : audit.records) {
        records.push_back(json{{"theta", r.theta},
                               {"epsilon_stated", r.epsilon_stated},
                               {"n_paper", r.n_paper},
                               {"n_two_sided", r.n_two_sided},
                               {"n_paper_cols23", r.n_paper_cols23},
                               {"epsilon_achieved", r.epsilon_achieved},
                               {"verdict", r.verdict}});
        char eps[32];
        std::snprintf(eps, sizeof eps, "%.5f", r.epsilon_achieved);
        text << json(r.theta).dump() << '\t' << r.epsilon_stated << '\t' << r.n_paper << '\t' << r.n_two_sided
             << '\t' << r.n_paper_cols23 << '\t' << eps << '\t' << r.verdict << '\n';
    }
    grid_text = text.str();
    return json{{"records", records},
                {"column1_two_sided", audit.column1_two_sided},
                {"columns23_half_epsilon", audit.columns23_half_epsilon}};
}

CheckOptions check_options(const Options &o, json &request, bool stochastic) {
    CheckOptions opt;
    opt.mode = parse_mode(o.mode);
    if (!o.theta_text.empty()) {
        opt.theta = cli::parse_real(o.theta_text);
    }
    if (!o.epsilon_text.empty()) {
        opt.epsilon = cli::parse_real(o.epsilon_text);
    }
    opt.n = o.n;
    opt.noise = parse_noise(o.noise);
    opt.source = parse_source(o.source);
    if (o.trials) {
        opt.trials = *o.trials;
    }
    request["mode"] = o.mode;
    request["theta"] = opt.theta;
    request["epsilon"] = opt.epsilon;
    request["n"] = o.n ? json(*o.n) : json(nullptr);
    request["noise"] = o.noise;
    request["source"] = o.source;
    if (stochastic) {
        opt.seed = cli::resolve_seed(o.seed);
        request["trials"] = opt.trials;
        request["seed"] = opt.seed;
    }
    return opt;
}

json cmd_check(const Options &o, json &request, int &exit_code) {
    const auto inst = load_instance(o.path);
    const auto opt = check_options(o, request, parse_mode(o.mode) == CheckMode::empirical);
    const auto verdict = check(inst, opt);
    exit_code = verdict.in_class_evidence ? cli::kExitOk : cli::kExitNegative;
    json payload{{"instance", std::filesystem::path(o.path).filename().string()},
                 {"machine", inst.machine->name()},
                 {"input", inst.input},
                 {"steps", inst.steps()},
                 {"verdict", verdict_json(verdict)}};
    return payload;
}

json cmd_transform(const Options &o, json &request) {
    if (o.to != "zbqp-star") {
        throw std::invalid_argument("--to supports only zbqp-star");
    }
    request["to"] = o.to;
    request["out"] = o.out;
    MachineIR source;
    std::optional<DecisionProblemInstance> inst;
    if (is_ir_path(o.path)) {
        source = load_ir(o.path);
    } else {
        inst = load_instance(o.path);
        if (!inst->ir) {
            throw std::invalid_argument("instance does not reference an IR file");
        }
        source = *inst->ir;
    }
    const MachineIR result = transform_zqp_to_zbqp_star(source);
    const Machine before = lower(source);
    LoweringInfo info;
    const Machine after = lower(result, &info);
    const auto report = validate_wellformed(after);

    std::vector<std::string> inputs;
    for (int len = 1; len <= 8; ++len) {
        std::string ones(static_cast<std::size_t>(len), '1');
        std::string alt;
        for (int i = 0; i < len; ++i) {
            alt += (i % 2 == 0) ? '1' : '0';
        }
        inputs.push_back(ones);
        inputs.push_back(alt);
    }
    const auto overhead = step_overhead(before, after, inputs);
    bool constant = std::all_of(overhead.begin(), overhead.end(), [&](auto d) { return d == overhead.front(); });

    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) {
            throw std::runtime_error("cannot write '" + o.out + "'");
        }
        f << ir_to_text(result);
    }
    if (inst && !o.instance_out.empty()) {
        auto transformed = transform_zqp_instance(*inst);
        std::ofstream f(o.instance_out);
        if (!f) {
            throw std::runtime_error("cannot write '" + o.instance_out + "'");
        }
        auto rel = std::filesystem::relative(std::filesystem::absolute(o.out),
                                             std::filesystem::absolute(o.instance_out).parent_path());
        f << instance_to_text(transformed, "ir " + rel.string());
    }
    json payload{{"source", source.name},
                 {"result", result.name},
                 {"k", result.k},
                 {"cells", result.cells},
                 {"wellformed", report.pass},
                 {"completed_columns", info.completed.size()},
                 {"overhead_inputs", inputs},
                 {"overhead", overhead},
                 {"overhead_constant", constant}};
    if (!report.pass) {
        payload["failures"] = report.failures;
    }
    return payload;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator for quantum Turing machines, bulk measurement and ensemble statistics"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.set_version_flag("--version", cli::version_string());

    auto add_seed = [&](CLI::App *c) {
        c->add_option("--seed", o.seed, "RNG seed (default: $QTMSIM_SEED, else random and echoed)");
    };
    auto add_run_args = [&](CLI::App *c) {
        c->add_option("--input", o.input, "Input symbols");
        c->add_option("--steps", o.steps, "Step count")->required();
    };

    auto *validate = app.add_subcommand("validate", "Check well-formedness and window unitarity");
    validate->add_option("machine", o.path)->required();
    validate->add_option("--window", o.window, "Window radius");
    validate->add_option("--window-steps", o.window_steps, "Steps evolved in the window check");
    validate->add_option("--samples", o.samples, "Sampled vector pairs");
    add_seed(validate);

    auto *run_cmd = app.add_subcommand("run", "Evolve and summarise the superposition");
    run_cmd->add_option("machine", o.path)->required();
    add_run_args(run_cmd);
    run_cmd->add_option("--cell", o.cell, "Cell whose marginal is reported");
    run_cmd->add_flag("--dump-amplitudes", o.dump, "List every configuration and amplitude");

    auto *observe = app.add_subcommand("observe", "Projective observation (QTM)");
    observe->add_option("machine", o.path)->required();
    add_run_args(observe);
    observe->add_option("--cell", o.cell);
    observe->add_option("--model", o.model)->required()->check(CLI::IsMember({"qtm", "qtm-partial"}));
    add_seed(observe);

    auto *measure = app.add_subcommand("measure", "Bulk or (ε,θ)-measurement");
    measure->add_option("machine", o.path)->required();
    add_run_args(measure);
    measure->add_option("--cell", o.cell);
    measure->add_option("--model", o.model)->required()->check(CLI::IsMember({"bqtm", "mbqtm"}));
    measure->add_option("--theta", o.theta_text, "θ, decimal or 2^-k")->required();
    measure->add_option("--epsilon", o.epsilon_text, "ε, decimal or 2^-k");
    measure->add_option("--n", o.n, "Realise the (ε,θ)-measurement with n ensemble members");
    measure->add_option("--noise", o.noise)->check(CLI::IsMember({"uniform", "adversarial-edge"}));
    measure->add_option("--repeat", o.repeat, "Measurements on the same state");
    add_seed(measure);

    auto *ensemble = app.add_subcommand("ensemble", "Ensemble-average measurement");
    ensemble->add_option("machine", o.path)->required();
    add_run_args(ensemble);
    ensemble->add_option("--cell", o.cell);
    ensemble->add_option("--n", o.n, "Ensemble members")->required();
    ensemble->add_option("--partitions", o.partitions, "Worker split");
    ensemble->add_flag("--slow-path", o.slow_path, "Simulate every member independently");
    ensemble->add_option("--theta", o.theta_text, "θ for within_theta and error rates");
    ensemble->add_option("--scale", o.scale)->check(CLI::IsMember({"probability", "plusminus"}));
    ensemble->add_option("--trials", o.trials, "Monte Carlo trials for the error rate");
    add_seed(ensemble);

    auto *table = app.add_subcommand("table", "Required n for a grid of (θ, ε)");
    table->add_option("--thetas", o.thetas)->required();
    table->add_option("--epsilons", o.epsilons)->required();
    table->add_option("--convention", o.convention)->check(CLI::IsMember({"two-sided", "paper-cols23"}));

    auto *audit = app.add_subcommand("audit-table1", "Recompute the published n table");

    auto *check_cmd = app.add_subcommand("check", "Class acceptance checker on an instance");
    check_cmd->add_option("instance", o.path)->required();
    check_cmd->add_option("--mode", o.mode)->check(CLI::IsMember({"exact", "empirical"}));
    check_cmd->add_option("--trials", o.trials);
    check_cmd->add_option("--theta", o.theta_text);
    check_cmd->add_option("--epsilon", o.epsilon_text);
    check_cmd->add_option("--n", o.n);
    check_cmd->add_option("--noise", o.noise)->check(CLI::IsMember({"uniform", "adversarial-edge"}));
    check_cmd->add_option("--source", o.source)->check(CLI::IsMember({"abstract", "ensemble"}));
    add_seed(check_cmd);

    auto *transform = app.add_subcommand("transform", "ZQP to ZBQP* rewrite of a phased IR");
    transform->add_option("ir", o.path, "IR file or instance referencing one")->required();
    transform->add_option("--to", o.to)->required();
    transform->add_option("-o,--out", o.out, "Output IR path");
    transform->add_option("--instance-out", o.instance_out, "Output instance path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? cli::kExitOk : cli::kExitUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    json request{{"subcommand", app.get_subcommands().front()->get_name()}};
    if (!o.path.empty()) {
        request["path"] = o.path;
    }
    json payload;
    std::string grid_text;
    int exit_code = cli::kExitOk;
    try {
        if (*validate) {
            payload = cmd_validate(o, request);
            if (!payload["pass"].get<bool>()) {
                exit_code = cli::kExitInvalid;
                for (const auto &f : payload["wellformed"]["failures"]) {
                    std::cerr << "invalid: " << f.get<std::string>() << '\n';
                }
                if (!payload["window"]["pass"].get<bool>()) {
                    std::cerr << "invalid: window unitarity check failed, worst deviation "
                              << payload["window"]["worst_deviation"].dump() << '\n';
                }
            }
        } else if (*run_cmd) {
            payload = cmd_run(o, request);
        } else if (*observe) {
            payload = cmd_observe(o, request);
        } else if (*measure) {
            payload = cmd_measure(o, request);
        } else if (*ensemble) {
            payload = cmd_ensemble(o, request);
        } else if (*table) {
            payload = cmd_table(o, request, grid_text);
        } else if (*audit) {
            payload = cmd_audit(grid_text);
        } else if (*check_cmd) {
            payload = cmd_check(o, request, exit_code);
        } else if (*transform) {
            payload = cmd_transform(o, request);
            if (!payload["wellformed"].get<bool>()) {
                exit_code = cli::kExitInvalid;
            }
        }
    } catch (const ParseError &e) {
        std::cerr << "error: " << o.path << ": " << e.what() << '\n';
        return cli::kExitInvalid;
    } catch (const ValidationFailure &e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitInvalid;
    } catch (const std::runtime_error &e) {
        // Lowering failures name the offending column; unreadable files land here too.
        std::string what = e.what();
        std::cerr << "error: " << what << '\n';
        return what.find("not well-formed") != std::string::npos ? cli::kExitInvalid : cli::kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitUsage;
    }

    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (o.format == "json") {
        json doc{{"version", cli::version_string()},
                 {"request", request},
                 {"payload", payload},
                 {"timing", {{"elapsed_ms", elapsed_ms}, {"simd", kernels::isa_name(kernels::active_isa())}}}};
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << grid_text << cli::render_text(payload);
    }
    return exit_code;
}
