#include "evp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "evp/stats.hpp"

namespace evp {

namespace {

using nlohmann::json;

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ScenarioError(path + ": " + message);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) fail(path, "unknown field '" + item.key() + "'");
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

std::uint64_t as_u64(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
        fail(path, "expected a non-negative integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        fail(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::size_t as_count(const json& v, const std::string& path) {
    const std::uint64_t n = as_u64(v, path);
    return static_cast<std::size_t>(n);
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

WeightScheme parse_weights(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::string kind = as_string(require(obj, path, "kind"), path + ".kind");
    if (kind == "constant") {
        check_keys(obj, path, {"kind"});
        return WeightScheme::constant();
    }
    if (kind == "power") {
        check_keys(obj, path, {"kind", "beta"});
        return WeightScheme::power(as_number(require(obj, path, "beta"), path + ".beta"));
    }
    if (kind == "explicit") {
        check_keys(obj, path, {"kind", "values"});
        const json& values = require(obj, path, "values");
        if (!values.is_array()) fail(path + ".values", "expected an array");
        std::vector<double> table;
        for (const auto& v : values) table.push_back(as_number(v, path + ".values"));
        return WeightScheme::explicit_table(std::move(table));
    }
    fail(path + ".kind", "must be one of constant|power|explicit");
}

ModelParams parse_model(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path, {"alpha", "weights", "perturbation", "bounds"});
    ModelParams model;
    model.alpha = as_number(require(obj, path, "alpha"), path + ".alpha");
    model.weights = parse_weights(require(obj, path, "weights"), path + ".weights");
    if (obj.contains("perturbation")) {
        const json& pert = obj["perturbation"];
        const std::string ppath = path + ".perturbation";
        if (!pert.is_object()) fail(ppath, "expected an object");
        const std::string kind = as_string(require(pert, ppath, "kind"), ppath + ".kind");
        if (kind == "zero") {
            check_keys(pert, ppath, {"kind"});
        } else if (kind == "uniform_decay") {
            check_keys(pert, ppath, {"kind", "m0", "lambda"});
            model.perturbation_kind = Perturbation::Kind::UniformDecay;
            model.m0 = as_number(require(pert, ppath, "m0"), ppath + ".m0");
            model.lambda = as_number(require(pert, ppath, "lambda"), ppath + ".lambda");
        } else {
            fail(ppath + ".kind", "must be one of zero|uniform_decay");
        }
    }
    if (obj.contains("bounds")) {
        const json& bounds = obj["bounds"];
        const std::string bpath = path + ".bounds";
        if (!bounds.is_object()) fail(bpath, "expected an object");
        check_keys(bounds, bpath, {"m_lo", "M_hi"});
        model.m_lo = as_number(require(bounds, bpath, "m_lo"), bpath + ".m_lo");
        model.m_hi = as_number(require(bounds, bpath, "M_hi"), bpath + ".M_hi");
    }
    return model;
}

BoxSpec parse_box(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path, {"t1", "t2", "a", "b"});
    BoxSpec box;
    box.t_lo = as_number(require(obj, path, "t1"), path + ".t1");
    box.t_hi = as_number(require(obj, path, "t2"), path + ".t2");
    box.height_lo = as_number(require(obj, path, "a"), path + ".a");
    if (obj.contains("b")) {
        const json& b = obj["b"];
        if (b.is_string()) {
            if (b.get<std::string>() != "inf") fail(path + ".b", "expected a number or \"inf\"");
        } else {
            box.height_hi = as_number(b, path + ".b");
        }
    }
    if (!(box.t_lo >= 0.0 && box.t_hi <= 1.0 && box.t_lo <= box.t_hi))
        fail(path, "need 0 <= t1 <= t2 <= 1");
    if (!(box.height_lo > 0.0 && box.height_hi > box.height_lo))
        fail(path, "need 0 < a < b");
    return box;
}

TestFunction parse_test_function(const json& arr, const std::string& path) {
    if (!arr.is_array()) fail(path, "expected an array of rectangles");
    std::vector<WeightedRectangle> rects;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const json& obj = arr[k];
        const std::string rpath = path + "[" + std::to_string(k) + "]";
        if (!obj.is_object()) fail(rpath, "expected an object");
        check_keys(obj, rpath, {"s", "t1", "t2", "a", "b"});
        WeightedRectangle r;
        r.scale = as_number(require(obj, rpath, "s"), rpath + ".s");
        r.t_lo = as_number(require(obj, rpath, "t1"), rpath + ".t1");
        r.t_hi = as_number(require(obj, rpath, "t2"), rpath + ".t2");
        r.height_lo = as_number(require(obj, rpath, "a"), rpath + ".a");
        r.height_hi = std::numeric_limits<double>::infinity();
        const json& b = require(obj, rpath, "b");
        if (b.is_string()) {
            if (b.get<std::string>() != "inf") fail(rpath + ".b", "expected a number or \"inf\"");
        } else {
            r.height_hi = as_number(b, rpath + ".b");
        }
        rects.push_back(r);
    }
    try {
        return TestFunction(std::move(rects));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

ExperimentParams parse_experiment(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path,
               {"kind", "source", "n", "replicates", "grid", "boxes", "test_functions",
                "epsilon", "oracle_alpha"});
    ExperimentParams exp;
    const std::string kind = as_string(require(obj, path, "kind"), path + ".kind");
    if (kind == "argmax")
        exp.kind = ExperimentKind::Argmax;
    else if (kind == "max")
        exp.kind = ExperimentKind::Max;
    else if (kind == "ladder")
        exp.kind = ExperimentKind::Ladder;
    else if (kind == "poisson_counts")
        exp.kind = ExperimentKind::PoissonCounts;
    else if (kind == "laplace")
        exp.kind = ExperimentKind::Laplace;
    else
        fail(path + ".kind", "must be one of argmax|max|ladder|poisson_counts|laplace");

    if (obj.contains("source")) {
        const std::string source = as_string(obj["source"], path + ".source");
        if (source == "empirical")
            exp.source = SampleSource::Empirical;
        else if (source == "poisson")
            exp.source = SampleSource::PoissonLimit;
        else
            fail(path + ".source", "must be empirical|poisson");
        if (exp.source == SampleSource::PoissonLimit &&
            exp.kind != ExperimentKind::Argmax && exp.kind != ExperimentKind::Max)
            fail(path + ".source", "source=poisson applies to argmax|max experiments");
    }
    if (obj.contains("n")) {
        const json& arr = obj["n"];
        if (!arr.is_array()) fail(path + ".n", "expected an array of row sizes");
        for (const auto& v : arr) exp.n_values.push_back(as_count(v, path + ".n"));
    }
    if (obj.contains("replicates"))
        exp.replicates = as_count(obj["replicates"], path + ".replicates");
    if (obj.contains("grid")) {
        const json& arr = obj["grid"];
        if (!arr.is_array()) fail(path + ".grid", "expected an array");
        for (const auto& v : arr) exp.grid.push_back(as_number(v, path + ".grid"));
    }
    if (obj.contains("boxes")) {
        const json& arr = obj["boxes"];
        if (!arr.is_array()) fail(path + ".boxes", "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k)
            exp.boxes.push_back(parse_box(arr[k], path + ".boxes[" + std::to_string(k) + "]"));
    }
    if (obj.contains("test_functions")) {
        const json& arr = obj["test_functions"];
        if (!arr.is_array()) fail(path + ".test_functions", "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k)
            exp.test_functions.push_back(parse_test_function(
                arr[k], path + ".test_functions[" + std::to_string(k) + "]"));
    }
    if (obj.contains("epsilon")) {
        exp.epsilon = as_number(obj["epsilon"], path + ".epsilon");
        if (!(exp.epsilon > 0.0)) fail(path + ".epsilon", "must be > 0");
    }
    if (obj.contains("oracle_alpha")) {
        exp.oracle_alpha = as_number(obj["oracle_alpha"], path + ".oracle_alpha");
        if (!(exp.oracle_alpha > 0.0)) fail(path + ".oracle_alpha", "must be > 0");
    }
    return exp;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

} // namespace

TailModel ModelParams::build() const {
    Perturbation pert = Perturbation::zero();
    if (perturbation_kind == Perturbation::Kind::UniformDecay)
        pert = Perturbation::uniform_decay(m0, lambda);
    // Declared bounds must enclose the family's actual range; the derived
    // (tightest) bounds are what the quantile brackets use.
    if (m_lo && *m_lo < pert.lower_bound())
        throw ScenarioError("model.bounds.m_lo is tighter than the perturbation allows");
    if (m_hi && *m_hi < pert.upper_bound())
        throw ScenarioError("model.bounds.M_hi is tighter than the perturbation allows");
    return TailModel(alpha, weights, pert);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read scenario file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path.string() + ":" +
                            std::to_string(line_of_offset(text, e.byte)) +
                            ": JSON parse error: " + e.what());
    }

    if (!root.is_object()) throw ScenarioError(path.string() + ": expected a JSON object");
    check_keys(root, "$", {"schema", "seed", "output", "replicates", "model", "experiments"});

    Scenario scenario;
    scenario.name = path.stem().string();
    const int schema = static_cast<int>(as_u64(require(root, "$", "schema"), "$.schema"));
    if (schema != 1) fail("$.schema", "unsupported schema version (expected 1)");
    scenario.schema = schema;
    if (root.contains("seed")) scenario.seed = as_u64(root["seed"], "$.seed");
    if (root.contains("output")) scenario.output = as_string(root["output"], "$.output");
    if (root.contains("replicates"))
        scenario.replicates = as_count(root["replicates"], "$.replicates");
    scenario.model = parse_model(require(root, "$", "model"), "$.model");

    const json& experiments = require(root, "$", "experiments");
    if (!experiments.is_array() || experiments.empty())
        fail("$.experiments", "expected a non-empty array");
    for (std::size_t k = 0; k < experiments.size(); ++k)
        scenario.experiments.push_back(parse_experiment(
            experiments[k], "$.experiments[" + std::to_string(k) + "]"));
    return scenario;
}

ResolvedScenario resolve(const Scenario& scenario, const CliOverrides& overrides) {
    ModelParams model_params = scenario.model;
    if (overrides.alpha) model_params.alpha = *overrides.alpha;

    std::uint64_t seed = 0;
    if (overrides.seed) {
        seed = *overrides.seed;
    } else if (scenario.seed) {
        seed = *scenario.seed;
    } else if (overrides.allow_entropy) {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    } else {
        throw ScenarioError(
            "no seed: set the scenario's 'seed' field, pass --seed, or allow "
            "wall-entropy seeding explicitly with --allow-entropy");
    }

    ResolvedScenario resolved{seed,
                              overrides.out ? *overrides.out : scenario.output,
                              model_params.build(),
                              {},
                              scenario.name};

    std::vector<std::size_t> n_override = overrides.n_values;
    std::sort(n_override.begin(), n_override.end());
    n_override.erase(std::unique(n_override.begin(), n_override.end()), n_override.end());

    for (const ExperimentParams& params : scenario.experiments) {
        ExperimentConfig config{resolved.model};
        config.kind = params.kind;
        config.source = params.source;
        config.n_values = n_override.empty() ? params.n_values : n_override;
        config.replicates = overrides.replicates
                                ? *overrides.replicates
                                : params.replicates.value_or(scenario.replicates);
        config.seed = seed;
        config.grid = params.grid;
        config.boxes = params.boxes;
        config.test_functions = params.test_functions;
        config.epsilon = params.epsilon;
        config.oracle_alpha = params.oracle_alpha;
        config.threads = overrides.threads;
        resolved.experiments.push_back(std::move(config));
    }
    return resolved;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string experiment_tag(std::size_t index, const ExperimentConfig& config) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu", index);
    return std::string(buf) + "_" + to_string(config.kind);
}

void write_metrics_csv(const std::filesystem::path& path, std::uint64_t seed,
                       std::size_t index, const ExperimentConfig& config,
                       const ExperimentReport& report) {
    auto out = open_output(path);
    out << "seed,experiment,kind,source,n,metric,param,value,std_error,p_value,"
           "threshold,checked,pass\n";
    for (const MetricRow& row : report.rows) {
        out << seed << ',' << index << ',' << report.kind_name << ','
            << report.source_name << ',' << row.n << ',' << row.metric << ','
            << row.param << ',' << format_real(row.value) << ','
            << format_real(row.std_error) << ',' << format_real(row.p_value) << ','
            << format_real(row.threshold) << ',' << (row.checked ? 1 : 0) << ','
            << (row.pass ? 1 : 0) << '\n';
    }
    (void)config;
    if (!out) throw IoError("failed while writing " + path.string());
}

void simulate_experiment(const std::filesystem::path& dir, std::size_t index,
                         const ExperimentConfig& config) {
    const std::string tag = experiment_tag(index, config);

    if (config.kind == ExperimentKind::PoissonCounts ||
        config.source == SampleSource::PoissonLimit) {
        // Raw configurations of the truncated limit process (and, for
        // argmax/max, the functional values), one CSV row per point.
        const double alpha = config.model.alpha();
        const double eps = config.epsilon > 0.0 ? config.epsilon
                                                : PoissonSpec::default_epsilon(alpha);
        auto mu = scheme_limit_measure(config.model.weights());
        if (!mu)
            throw ScenarioError(
                "poisson experiments need constant or power weights (closed-form mu)");
        const PoissonSpec spec(*mu, TailMeasure::frechet(alpha), eps);

        auto configs_out = open_output(dir / ("configurations_" + tag + ".csv"));
        configs_out << "replicate,t,x\n";
        std::ofstream functionals_out;
        const bool wants_functionals = config.kind == ExperimentKind::Argmax ||
                                       config.kind == ExperimentKind::Max;
        if (wants_functionals) {
            functionals_out = open_output(dir / ("samples_" + tag + ".csv"));
            functionals_out << "replicate,argmax_location,max_height\n";
        }
        for (std::size_t r = 0; r < config.replicates; ++r) {
            SplitMix64 stream = replicate_stream(config.seed, 0, r);
            const PlanarConfiguration c = sample_poisson(spec, stream);
            for (const auto& p : c.points())
                configs_out << r << ',' << format_real(p.location) << ','
                            << format_real(p.height) << '\n';
            if (wants_functionals && !c.empty()) {
                functionals_out << r << ',' << format_real(argmax_location(c)) << ','
                                << format_real(max_height(c)) << '\n';
            }
        }
        if (!configs_out) throw IoError("failed while writing configurations CSV");
        return;
    }

    for (std::size_t n : config.n_values) {
        const std::string stem = "samples_" + tag + "_n" + std::to_string(n) + ".csv";
        auto out = open_output(dir / stem);
        switch (config.kind) {
            case ExperimentKind::Argmax: {
                const auto samples = collect_row_argmax(config.model, n, config.replicates,
                                                        config.seed, config.threads);
                out << "replicate,index,location\n";
                for (std::size_t r = 0; r < samples.size(); ++r)
                    out << r << ',' << samples[r].index << ','
                        << format_real(samples[r].location) << '\n';
                break;
            }
            case ExperimentKind::Max: {
                const auto maxima = collect_row_maxima(config.model, n, config.replicates,
                                                       config.seed, config.threads);
                out << "replicate,value\n";
                for (std::size_t r = 0; r < maxima.size(); ++r)
                    out << r << ',' << format_real(maxima[r]) << '\n';
                break;
            }
            case ExperimentKind::Ladder: {
                if (config.grid.empty())
                    throw ScenarioError("ladder experiment: grid must be non-empty");
                std::size_t empties = 0;
                const auto ladder =
                    collect_row_ladder(config.model, n, config.grid, config.replicates,
                                       config.seed, config.threads, &empties);
                out << "replicate,t,value\n";
                for (std::size_t r = 0; r < config.replicates; ++r)
                    for (std::size_t k = 0; k < config.grid.size(); ++k)
                        out << r << ',' << format_real(config.grid[k]) << ','
                            << format_real(ladder[r * config.grid.size() + k]) << '\n';
                break;
            }
            case ExperimentKind::Laplace: {
                if (config.test_functions.empty())
                    throw ScenarioError("laplace experiment: test_functions must be non-empty");
                out << "replicate,f,value\n";
                for (std::size_t fi = 0; fi < config.test_functions.size(); ++fi) {
                    const auto values = laplace_empirical_samples(
                        config.model, n, config.test_functions[fi], config.replicates,
                        config.seed);
                    for (std::size_t r = 0; r < values.size(); ++r)
                        out << r << ',' << fi << ',' << format_real(values[r]) << '\n';
                }
                break;
            }
            case ExperimentKind::PoissonCounts:
                break; // handled above
        }
        if (!out) throw IoError("failed while writing " + stem);
    }
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ScenarioError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

} // namespace

int cmd_simulate(const std::filesystem::path& scenario_path, const CliOverrides& overrides) {
    return guarded([&] {
        const ResolvedScenario resolved = resolve(load_scenario(scenario_path), overrides);
        ensure_directory(resolved.output);
        for (std::size_t i = 0; i < resolved.experiments.size(); ++i)
            simulate_experiment(resolved.output, i, resolved.experiments[i]);
        return kExitOk;
    });
}

int cmd_verify(const std::filesystem::path& scenario_path, const CliOverrides& overrides) {
    return guarded([&] {
        const ResolvedScenario resolved = resolve(load_scenario(scenario_path), overrides);
        ensure_directory(resolved.output);

        std::vector<ExperimentReport> reports;
        for (std::size_t i = 0; i < resolved.experiments.size(); ++i) {
            const ExperimentConfig& config = resolved.experiments[i];
            ExperimentReport report = run_experiment(config);
            write_metrics_csv(resolved.output /
                                  ("metrics_" + experiment_tag(i, config) + ".csv"),
                              resolved.seed, i, config, report);
            std::cerr << "experiment " << i << " (" << report.kind_name << "/"
                      << report.source_name << "): "
                      << (report.passed() ? "pass" : "FAIL") << " in "
                      << format_short(report.wall_seconds) << "s\n";
            reports.push_back(std::move(report));
        }

        auto summary = open_output(resolved.output / "summary.txt");
        summary << "scenario: " << resolved.name << "\n";
        summary << "seed: " << resolved.seed << "\n";
        std::size_t checked = 0, failed = 0, informational = 0;
        std::size_t ties = 0, empty_sections = 0, empty_configs = 0;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const ExperimentReport& report = reports[i];
            for (const MetricRow& row : report.rows) {
                std::string line = "exp=" + std::to_string(i) + " kind=" + report.kind_name +
                                   " source=" + report.source_name +
                                   " n=" + std::to_string(row.n) + " metric=" + row.metric;
                if (!row.param.empty()) line += " param=" + row.param;
                line += " value=" + format_short(row.value);
                if (std::isfinite(row.threshold))
                    line += " threshold=" + format_short(row.threshold);
                if (std::isfinite(row.p_value)) line += " p=" + format_short(row.p_value);
                if (row.checked) {
                    ++checked;
                    if (!row.pass) ++failed;
                    summary << (row.pass ? "[PASS] " : "[FAIL] ") << line << "\n";
                } else {
                    ++informational;
                    summary << "[info] " << line << "\n";
                }
            }
            ties += report.tie_count;
            empty_sections += report.empty_section_count;
            empty_configs += report.empty_config_count;
        }
        summary << "checks: " << (checked - failed) << " passed, " << failed
                << " failed, " << informational << " informational\n";
        summary << "argmax_ties: " << ties << "\n";
        summary << "empty_ladder_sections: " << empty_sections << "\n";
        summary << "empty_configurations: " << empty_configs << "\n";
        const bool all_passed = failed == 0;
        summary << "OVERALL: " << (all_passed ? "PASS" : "FAIL") << "\n";
        if (!summary) throw IoError("failed while writing summary.txt");
        summary.close();
        return all_passed ? kExitOk : kExitVerdictFailed;
    });
}

namespace {

struct SummaryKey {
    std::string seed;
    std::string experiment;
    std::string kind;
    std::string source;
    std::string metric;
    std::string param;
    long long n = 0;

    bool operator<(const SummaryKey& other) const {
        return std::tie(seed, experiment, kind, source, metric, param, n) <
               std::tie(other.seed, other.experiment, other.kind, other.source,
                        other.metric, other.param, other.n);
    }
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

} // namespace

int cmd_report(const std::filesystem::path& output_dir) {
    return guarded([&] {
        if (!std::filesystem::is_directory(output_dir))
            throw ScenarioError("not a directory: " + output_dir.string());

        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(output_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("metrics_", 0) == 0 && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        }
        if (files.empty())
            throw ScenarioError("no metrics CSV files in " + output_dir.string());
        std::sort(files.begin(), files.end());

        std::map<SummaryKey, std::vector<std::string>> rows;
        for (const auto& file : files) {
            std::ifstream in(file);
            if (!in) throw IoError("cannot read " + file.string());
            std::string line;
            std::getline(in, line); // header
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const auto f = split_csv_line(line);
                if (f.size() != 13)
                    throw ScenarioError("malformed metrics row in " + file.string());
                SummaryKey key{f[0], f[1], f[2], f[3], f[5], f[6], std::stoll(f[4])};
                // value, std_error, p_value, threshold, checked, pass
                rows[key] = {f[7], f[8], f[9], f[10], f[11], f[12]};
            }
        }

        auto out = open_output(output_dir / "summary_table.csv");
        out << "seed,experiment,kind,source,metric,param,n,value,std_error,p_value,"
               "threshold,checked,pass\n";
        for (const auto& [key, v] : rows) {
            out << key.seed << ',' << key.experiment << ',' << key.kind << ','
                << key.source << ',' << key.metric << ',' << key.param << ',' << key.n
                << ',' << v[0] << ',' << v[1] << ',' << v[2] << ',' << v[3] << ','
                << v[4] << ',' << v[5] << '\n';
        }
        if (!out) throw IoError("failed while writing summary_table.csv");
        return kExitOk;
    });
}

} // namespace evp
