#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "causalq/diagnostics.hpp"
#include "causalq/io.hpp"
#include "causalq/rng.hpp"
#include "causalq/sampling.hpp"
#include "causalq/scenarios.hpp"
#include "causalq/simulate.hpp"

namespace {

using causalq::Provenance;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void emit(const std::string& content, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << content;
    } else {
        causalq::write_text_file(output_path, content);
    }
}

causalq::NoiseModel parse_noise(const std::string& text) {
    if (text == "reference") return {0.01, 0.03};
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("--noise expects 'p1,p3' or the named preset 'reference'");
    }
    causalq::NoiseModel noise;
    noise.p1 = std::stod(text.substr(0, comma));
    noise.p3 = std::stod(text.substr(comma + 1));
    if (noise.p1 < 0.0 || noise.p1 > 1.0 || noise.p3 < 0.0 || noise.p3 > 1.0) {
        throw std::invalid_argument("noise probabilities must lie in [0, 1]");
    }
    return noise;
}

causalq::ComplexMatrix named_state(const std::string& name) {
    const double s = 1.0 / std::sqrt(2.0);
    if (name == "zero") return causalq::ComplexMatrix::outer({1.0, 0.0});
    if (name == "one") return causalq::ComplexMatrix::outer({0.0, 1.0});
    if (name == "plus") return causalq::ComplexMatrix::outer({s, s});
    if (name == "minus") return causalq::ComplexMatrix::outer({s, -s});
    if (name == "mixed") return causalq::ComplexMatrix::identity(2) * 0.5;
    throw std::invalid_argument("unknown state '" + name +
                                "' (expected zero, one, plus, minus, or mixed)");
}

struct SimulateConfig {
    std::uint64_t shots = 100000;
    std::uint64_t seed = 0;
    std::string noise;
    bool ideal = false;
    bool exact_only = false;
    std::string format = "text";
    std::string output;
};

std::string conditional_text(const causalq::ConditionalTable& table) {
    std::string out = "conditional P(target | control):\n";
    for (std::size_t c = 0; c < table.rows.size(); ++c) {
        if (!table.rows[c]) continue;
        out += "  c=" + std::to_string(c) + ": " + fmt((*table.rows[c])[0]) + ", " +
               fmt((*table.rows[c])[1]) + "\n";
    }
    if (const auto tv = causalq::conditional_tv(table)) {
        out += "conditional TV across control: " + fmt(*tv) + "\n";
    }
    return out;
}

json conditional_json(const causalq::ConditionalTable& table) {
    json obj = json::object();
    for (std::size_t c = 0; c < table.rows.size(); ++c) {
        if (!table.rows[c]) continue;
        obj[std::to_string(c)] = {(*table.rows[c])[0], (*table.rows[c])[1]};
    }
    if (const auto tv = causalq::conditional_tv(table)) obj["tv"] = *tv;
    return obj;
}

int cmd_simulate(const SimulateConfig& cfg) {
    std::optional<causalq::NoiseModel> noise;
    if (!cfg.noise.empty()) noise = parse_noise(cfg.noise);

    const causalq::Circuit circuit = causalq::build_switch_circuit(noise);
    const causalq::OutcomeDistribution exact = causalq::simulate_exact(circuit);
    const std::string noise_desc = cfg.noise.empty() ? "ideal" : cfg.noise;

    if (cfg.exact_only) {
        const Provenance prov{cfg.seed, 0, noise_desc};
        if (cfg.format == "csv") {
            emit(causalq::distribution_to_csv(exact, prov), cfg.output);
        } else if (cfg.format == "json") {
            emit(causalq::distribution_to_json(exact, prov), cfg.output);
        } else {
            std::string out = "switch circuit, noise=" + noise_desc + "\n";
            out += "exact distribution (label = control bit then target bit):\n";
            for (std::size_t i = 0; i < exact.labels.size(); ++i) {
                out += "  " + exact.labels[i] + "  " + fmt(exact.probs[i]) + "\n";
            }
            out += conditional_text(causalq::conditional_table(exact));
            emit(out, cfg.output);
        }
        return kExitOk;
    }

    const causalq::OutcomeCounts counts = causalq::sample_shots(exact, cfg.shots, cfg.seed);
    const causalq::ConditionalTable table = causalq::conditional_table(counts);
    const Provenance prov{cfg.seed, cfg.shots, noise_desc};

    if (cfg.format == "csv") {
        emit(causalq::counts_to_csv(counts, prov) + "\n" +
                 causalq::conditional_table_to_csv(table, prov),
             cfg.output);
    } else if (cfg.format == "json") {
        json obj;
        obj["exact"] = json::parse(causalq::distribution_to_json(exact, prov));
        obj["counts"] = json::parse(causalq::counts_to_json(counts, prov));
        obj["conditionals"] = conditional_json(table);
        emit(obj.dump(2) + "\n", cfg.output);
    } else {
        std::string out = "switch circuit, noise=" + noise_desc + "\n";
        out += "sampled " + std::to_string(cfg.shots) + " shots, seed " +
               std::to_string(cfg.seed) + " (label = control bit then target bit):\n";
        for (std::size_t i = 0; i < counts.labels.size(); ++i) {
            out += "  " + counts.labels[i] + "  " + std::to_string(counts.counts[i]) + "\n";
        }
        out += conditional_text(table);
        emit(out, cfg.output);
    }
    return kExitOk;
}

struct DiagnoseConfig {
    std::string scenario;
    double eps = causalq::kEpsExact;
    double noise_p = -1.0;  // < 0 means no noisy pass
    bool sampled = false;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 0;
    double delta = 1e-3;
    std::string format = "text";
    std::string output;
};

causalq::CausalScenario load_scenario(const std::string& name_or_path) {
    const auto names = causalq::scenario_preset_names();
    for (const auto& n : names) {
        if (n == name_or_path) return causalq::scenario_preset(name_or_path);
    }
    return causalq::scenario_from_json(causalq::read_text_file(name_or_path));
}

int cmd_diagnose(const DiagnoseConfig& cfg) {
    std::vector<std::string> targets;
    if (!cfg.scenario.empty()) {
        targets.push_back(cfg.scenario);
    } else {
        targets = {"switch-coherent", "switch-decohered", "fixed-order-ab", "fixed-order-ba"};
    }

    std::optional<double> noise_p;
    if (cfg.noise_p >= 0.0) noise_p = cfg.noise_p;

    std::vector<causalq::DiagnosticReport> reports;
    for (const auto& t : targets) {
        const causalq::CausalScenario s = load_scenario(t);
        reports.push_back(cfg.sampled
                              ? causalq::run_diagnostics_sampled(s, cfg.shots, cfg.seed,
                                                                 cfg.delta)
                              : causalq::run_diagnostics(s, cfg.eps, noise_p));
    }

    const std::string noise_desc =
        noise_p ? "depolarizing p=" + fmt(*noise_p) : std::string("ideal");
    const Provenance prov{cfg.sampled ? cfg.seed : 0, cfg.sampled ? cfg.shots : 0,
                          noise_desc};

    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& r : reports) {
            arr.push_back(json::parse(causalq::report_to_json(r, prov)));
        }
        emit((targets.size() == 1 ? arr[0].dump(2) : arr.dump(2)) + "\n", cfg.output);
    } else {
        std::string out;
        for (const auto& r : reports) {
            if (!out.empty()) out += "\n";
            out += causalq::report_to_text(r);
        }
        emit(out, cfg.output);
    }

    for (const auto& r : reports) {
        if (r.any_violation()) return kExitViolation;
    }
    return kExitOk;
}

int cmd_process_build(const std::string& control, const std::string& target,
                      const std::string& output) {
    const causalq::ProcessMatrix w =
        causalq::switch_process_matrix(named_state(control), named_state(target));
    const causalq::ProcessReport report = causalq::validate_process(w);
    emit(causalq::process_to_json(w), output);
    if (!report.ok()) {
        std::cerr << "warning: built process failed validation (max violation "
                  << fmt(report.max_violation) << ")\n";
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_process_validate(const std::string& path) {
    const causalq::ProcessMatrix w =
        causalq::process_from_json(causalq::read_text_file(path));
    const causalq::ProcessReport report = causalq::validate_process(w);
    std::string out;
    out += std::string("hermitian: ") + (report.hermitian_ok ? "ok" : "FAIL") + "\n";
    out += std::string("positive semidefinite: ") + (report.psd_ok ? "ok" : "FAIL") + "\n";
    out += std::string("normalization on channel products: ") +
           (report.normalization_ok ? "ok" : "FAIL") + "\n";
    out += "max violation: " + fmt(report.max_violation) + "\n";
    std::cout << out;
    return report.ok() ? kExitOk : kExitViolation;
}

int cmd_process_contract(const std::string& path, const std::string& effects,
                         const std::string& output) {
    const causalq::ProcessMatrix w =
        causalq::process_from_json(causalq::read_text_file(path));

    const auto dim_of = [&w](const std::string& name) -> std::size_t {
        for (const auto& s : w.spaces) {
            if (s.name == name) return s.dim;
        }
        return 0;
    };
    const std::size_t d_a = dim_of(causalq::kSpaceAIn);
    const std::size_t d_b = dim_of(causalq::kSpaceBIn);
    const std::size_t d_f = dim_of(causalq::kSpaceFuture);
    const std::size_t d_c = dim_of(causalq::kSpaceControl);
    if (d_a == 0 || d_b == 0 || d_f == 0) {
        throw std::invalid_argument(
            "process is missing the A_I/B_I/F spaces needed for contraction");
    }

    causalq::ComplexMatrix f_effect = causalq::ComplexMatrix::identity(d_f);
    causalq::ComplexMatrix c_effect;
    if (d_c > 0) c_effect = causalq::ComplexMatrix::identity(d_c);

    std::string rest = effects;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string part = rest.substr(0, comma);
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("effect '" + part + "' is not of the form key=value");
        }
        const std::string key = part.substr(0, eq);
        const std::string value = part.substr(eq + 1);
        if (key == "c") {
            if (d_c == 0) {
                throw std::invalid_argument("this process has no control space");
            }
            c_effect = value == "identity" ? causalq::ComplexMatrix::identity(d_c)
                                           : named_state(value == "0"   ? "zero"
                                                         : value == "1" ? "one"
                                                         : value == "+" ? "plus"
                                                         : value == "-" ? "minus"
                                                                        : value);
        } else if (key == "Ob") {
            if (value == "identity") {
                f_effect = causalq::ComplexMatrix::identity(d_f);
            } else {
                const std::size_t o = std::stoul(value);
                if (o >= d_f) throw std::invalid_argument("Ob outcome out of range");
                std::vector<causalq::Cx> ket(d_f, 0.0);
                ket[o] = 1.0;
                f_effect = causalq::ComplexMatrix::outer(ket);
            }
        } else {
            throw std::invalid_argument("unknown effect key '" + key + "' (use c or Ob)");
        }
    }

    std::vector<causalq::BornTerm> terms;
    terms.push_back(causalq::BornTerm::channel(causalq::choi_from_kraus(
        {causalq::ComplexMatrix::identity(d_a)}, {causalq::kSpaceAIn, d_a},
        {causalq::kSpaceAOut, d_a})));
    terms.push_back(causalq::BornTerm::channel(causalq::choi_from_kraus(
        {causalq::ComplexMatrix::identity(d_b)}, {causalq::kSpaceBIn, d_b},
        {causalq::kSpaceBOut, d_b})));
    terms.push_back(causalq::BornTerm::effect(f_effect, {causalq::kSpaceFuture, d_f}));
    if (d_c > 0) {
        terms.push_back(causalq::BornTerm::effect(c_effect, {causalq::kSpaceControl, d_c}));
    }

    const double p = causalq::born_probability(w, terms);
    emit("probability = " + fmt(p) + "\n", output);
    return kExitOk;
}

struct TablesConfig {
    std::uint64_t shots = 10000;
    std::uint64_t seed = 0;
    std::string output;
};

int cmd_tables(const TablesConfig& cfg) {
    // Claimed conditional values quoted verbatim from the source tables; they
    // are reported for comparison only and are not reproduced by this model.
    const double reference_ideal[2][2] = {{0.68, 0.32}, {0.53, 0.47}};
    const double reference_noisy[2][2] = {{0.911, 0.089}, {0.336, 0.664}};

    const causalq::NoiseModel noise{0.01, 0.03};

    const auto exact_ideal =
        causalq::conditional_table(causalq::simulate_exact(causalq::build_switch_circuit({})));
    const auto exact_noisy = causalq::conditional_table(
        causalq::simulate_exact(causalq::build_switch_circuit(noise)));

    const auto sampled_ideal =
        causalq::run_switch_experiment(cfg.shots, causalq::mix64(cfg.seed ^ 1)).conditionals;
    const auto sampled_noisy =
        causalq::run_switch_experiment(cfg.shots, causalq::mix64(cfg.seed ^ 2), noise)
            .conditionals;

    std::string out;
    out += std::string("# causalq ") + causalq::kToolVersion + "\n";
    out += "# seed=" + std::to_string(cfg.seed) + "\n";
    out += "# shots=" + std::to_string(cfg.shots) + "\n";
    out += "# noise=ideal rows use none, noisy rows use 0.01,0.03\n";
    out += "# reference values are quoted claims for comparison, not outputs of this tool\n";
    out += "table,quantity,reference,exact,sampled\n";

    const auto block = [&out](const char* tag, const double reference[2][2],
                              const causalq::ConditionalTable& exact,
                              const causalq::ConditionalTable& sampled) {
        for (std::size_t c = 0; c < 2; ++c) {
            for (std::size_t t = 0; t < 2; ++t) {
                out += std::string(tag) + ",P(Ob=" + std::to_string(t) +
                       "|c=" + std::to_string(c) + ")," + fmt(reference[c][t]) + ",";
                out += exact.rows[c] ? fmt((*exact.rows[c])[t]) : "undefined";
                out += ",";
                out += sampled.rows[c] ? fmt((*sampled.rows[c])[t]) : "undefined";
                out += "\n";
            }
        }
    };
    block("ideal", reference_ideal, exact_ideal, sampled_ideal);
    block("noisy", reference_noisy, exact_noisy, sampled_noisy);

    emit(out, cfg.output);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-process causal diagnostics toolkit"};
    app.set_version_flag("--version", std::string("causalq ") + causalq::kToolVersion);
    app.require_subcommand(1);

    SimulateConfig sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "simulate the switch interference circuit and sample outcomes");
    simulate->add_option("--shots", sim.shots, "number of sampled shots")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "sampling seed")->envname("CAUSALQ_SEED");
    CLI::Option* sim_noise = simulate->add_option(
        "--noise", sim.noise, "depolarizing strengths 'p1,p3' or the preset 'reference'");
    simulate->add_flag("--ideal", sim.ideal, "run without noise (the default)")
        ->excludes(sim_noise);
    simulate->add_flag("--exact", sim.exact_only,
                       "emit the exact distribution and skip sampling");
    simulate->add_option("--format", sim.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    simulate->add_option("--output,-o", sim.output, "write to this file instead of stdout");

    DiagnoseConfig diag;
    CLI::App* diagnose = app.add_subcommand(
        "diagnose", "run the causal consistency rules over scenarios");
    diagnose->add_option("--scenario", diag.scenario,
                         "preset name or scenario JSON file (default: canonical suite)");
    diagnose->add_option("--eps", diag.eps, "equality tolerance for exact checks")
        ->check(CLI::PositiveNumber);
    diagnose->add_option("--noise", diag.noise_p,
                         "also evaluate with depolarizing noise of this strength")
        ->check(CLI::Range(0.0, 1.0));
    diagnose->add_flag("--sampled", diag.sampled,
                       "estimate from finite samples instead of exact values");
    diagnose->add_option("--shots", diag.shots, "shots per sampled sub-run")
        ->check(CLI::PositiveNumber);
    diagnose->add_option("--seed", diag.seed, "sampling seed")->envname("CAUSALQ_SEED");
    diagnose->add_option("--delta", diag.delta,
                         "confidence parameter for sampled thresholds");
    diagnose->add_option("--format", diag.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    diagnose->add_option("--output,-o", diag.output, "write to this file instead of stdout");

    CLI::App* process = app.add_subcommand(
        "process", "build, validate, and contract process matrices");
    process->require_subcommand(1);

    std::string build_control = "plus";
    std::string build_target = "zero";
    std::string build_output;
    CLI::App* build = process->add_subcommand("build-switch",
                                              "emit the switch process matrix as JSON");
    build->add_option("--control", build_control, "control preparation");
    build->add_option("--target", build_target, "target preparation");
    build->add_option("--output,-o", build_output, "write to this file instead of stdout");

    std::string validate_path;
    CLI::App* validate = process->add_subcommand(
        "validate", "check a process matrix file for the defining properties");
    validate->add_option("file", validate_path, "process matrix JSON file")->required();

    std::string contract_path;
    std::string contract_effects;
    std::string contract_output;
    CLI::App* contract = process->add_subcommand(
        "contract", "contract a process with identity parties and chosen effects");
    contract->add_option("file", contract_path, "process matrix JSON file")->required();
    contract->add_option("--effects", contract_effects,
                         "comma-separated effects, e.g. c=0,Ob=identity");
    contract->add_option("--output,-o", contract_output,
                         "write to this file instead of stdout");

    TablesConfig tab;
    CLI::App* tables = app.add_subcommand(
        "tables", "emit the reference-vs-computed conditional comparison table");
    tables->add_option("--shots", tab.shots, "shots for the sampled column")
        ->check(CLI::PositiveNumber);
    tables->add_option("--seed", tab.seed, "sampling seed")->envname("CAUSALQ_SEED");
    tables->add_option("--output,-o", tab.output, "write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (diagnose->parsed()) return cmd_diagnose(diag);
        if (process->parsed()) {
            if (build->parsed()) return cmd_process_build(build_control, build_target,
                                                          build_output);
            if (validate->parsed()) return cmd_process_validate(validate_path);
            if (contract->parsed()) return cmd_process_contract(contract_path,
                                                                contract_effects,
                                                                contract_output);
        }
        if (tables->parsed()) return cmd_tables(tab);
        std::cerr << "no command selected\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
