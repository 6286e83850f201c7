#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pentao/instances.hpp"
#include "pentao/io.hpp"
#include "pentao/metrics.hpp"
#include "pentao/penta_o.hpp"
#include "pentao/report.hpp"

namespace pentao::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Usage problems detected after CLI11 parsing (bad family parameters,
/// empty ranges). Mapped to exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Fill options not given on the command line from a flat JSON object whose
/// keys are long option names without the leading dashes.
void apply_json_config(CLI::App *app, const std::string &path) {
    if (path.empty()) {
        return;
    }
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw UsageError("config file " + path + " must hold a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        CLI::Option *opt = app->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
            throw UsageError("config file " + path + ": unknown key '" + key + "'");
        }
        if (opt->count() > 0) {
            continue; // command-line flags win
        }
        std::vector<std::string> inputs;
        auto push = [&](const json &v) {
            if (v.is_string()) {
                inputs.push_back(v.get<std::string>());
            } else if (v.is_boolean()) {
                inputs.push_back(v.get<bool>() ? "true" : "false");
            } else if (v.is_number()) {
                inputs.push_back(v.dump());
            } else {
                throw UsageError("config file " + path + ": bad value for '" + key + "'");
            }
        };
        if (value.is_array()) {
            for (const auto &v : value) {
                push(v);
            }
        } else {
            push(value);
        }
        try {
            opt->add_result(inputs);
            opt->run_callback();
        } catch (const CLI::Error &e) {
            throw UsageError("config file " + path + ": '" + key + "': " + e.what());
        }
    }
}

// Family / replica generation -------------------------------------------------

struct FamilyOptions {
    std::string family;
    int n = 0;
    int d = 3;
    std::string dist = "unit";
    double lambda = 1.0;
    double mean = 0.0;
    double stddev = 1.0;
    std::vector<double> h0 = {0.0};
    double h0_start = 0.0;
    double h0_stop = -1.0;
    double h0_step = 0.1;
    int rows = 0;
    int cols = 0;
    std::string graph6_file;
    int replicas = 1;
    std::string normalize = "auto";
    Seed seed = 0;

    json to_json() const {
        return {{"family", family},   {"n", n},         {"d", d},
                {"dist", dist},       {"lambda", lambda}, {"mean", mean},
                {"stddev", stddev},   {"h0", h0_values()}, {"rows", rows},
                {"cols", cols},       {"graph6_file", graph6_file},
                {"replicas", replicas}, {"normalize", normalize}, {"seed", seed}};
    }

    std::vector<double> h0_values() const {
        if (h0_stop < h0_start) {
            return h0;
        }
        if (!(h0_step > 0.0)) {
            throw UsageError("--h0-step must be positive");
        }
        std::vector<double> out;
        const auto count = static_cast<int>(std::floor((h0_stop - h0_start) / h0_step + 1e-9));
        for (int k = 0; k <= count; ++k) {
            // Round to 12 digits so 0.1 steps print as 0.3, not 0.30000000000000004.
            const double v = h0_start + k * h0_step;
            out.push_back(std::round(v * 1e12) / 1e12);
        }
        return out;
    }
};

void add_family_options(CLI::App *app, FamilyOptions &f, bool with_replicas = true) {
    app->add_option("--family", f.family, "grid | u3r | wdr | sk | graph6")
        ->check(CLI::IsMember({"grid", "u3r", "wdr", "sk", "graph6"}));
    app->add_option("--n", f.n, "Vertex / spin count");
    app->add_option("--d", f.d, "Degree for wdr")->capture_default_str();
    app->add_option("--dist", f.dist, "Edge weights: unit | poisson | normal | pm1")
        ->check(CLI::IsMember({"unit", "poisson", "normal", "pm1"}))
        ->capture_default_str();
    app->add_option("--lambda", f.lambda, "Poisson mean")->capture_default_str();
    app->add_option("--mean", f.mean, "Normal mean")->capture_default_str();
    app->add_option("--stddev", f.stddev, "Normal standard deviation")->capture_default_str();
    app->add_option("--h0", f.h0, "SK field value(s)")->delimiter(',');
    app->add_option("--h0-start", f.h0_start, "SK field sweep start");
    app->add_option("--h0-stop", f.h0_stop, "SK field sweep stop (inclusive)");
    app->add_option("--h0-step", f.h0_step, "SK field sweep step");
    app->add_option("--rows", f.rows, "Grid rows");
    app->add_option("--cols", f.cols, "Grid columns");
    app->add_option("--graph6-file", f.graph6_file, "graph6 file, one graph per line");
    if (with_replicas) {
        app->add_option("--replicas", f.replicas,
                        "Replicas (weight sets per graph for graph6)")
            ->capture_default_str();
    }
    app->add_option("--normalize", f.normalize,
                    "Divide weights by max |w_ij|: auto (wdr only) | yes | no")
        ->check(CLI::IsMember({"auto", "yes", "no"}))
        ->capture_default_str();
    app->add_option("--seed", f.seed, "Base seed")->capture_default_str();
}

WeightDistribution make_distribution(const FamilyOptions &f) {
    if (f.dist == "poisson") {
        if (!(f.lambda > 0.0)) {
            throw UsageError("--lambda must be positive");
        }
        return weights::Poisson{f.lambda};
    }
    if (f.dist == "normal") {
        if (!(f.stddev > 0.0)) {
            throw UsageError("--stddev must be positive");
        }
        return weights::Normal{f.mean, f.stddev};
    }
    if (f.dist == "pm1") {
        return weights::PlusMinusOne{};
    }
    return weights::Unit{};
}

struct Replica {
    std::string group;
    int index = 0;
    std::string name;
    IsingInstance instance;
};

std::string replica_tag(int k) {
    std::ostringstream out;
    out << 'r' << std::setw(3) << std::setfill('0') << k;
    return out.str();
}

std::vector<Replica> make_replicas(const FamilyOptions &f) {
    if (f.family.empty()) {
        throw UsageError("--family is required");
    }
    if (f.replicas < 1) {
        throw UsageError("--replicas must be >= 1");
    }
    const bool normalize_weights =
        f.normalize == "yes" || (f.normalize == "auto" && f.family == "wdr");
    std::vector<Replica> out;
    auto add = [&](std::string group, int k, std::string name, IsingInstance inst) {
        if (normalize_weights) {
            inst = normalize(inst);
        }
        out.push_back({std::move(group), k, std::move(name), std::move(inst)});
    };
    const auto dist = make_distribution(f);
    const bool weighted = !std::holds_alternative<weights::Unit>(dist);

    try {
        if (f.family == "grid") {
            if (f.rows < 1 || f.cols < 1) {
                throw UsageError("grid family needs --rows and --cols >= 1");
            }
            const auto g = grid_graph(f.rows, f.cols);
            const std::string base = "grid_" + std::to_string(f.rows) + "x" + std::to_string(f.cols);
            for (int k = 0; k < (weighted ? f.replicas : 1); ++k) {
                const Seed rs = derive_seed(f.seed, static_cast<std::uint64_t>(k));
                auto inst = weighted ? assign_weights(g, dist, rs) : to_instance(g);
                inst.set_label(base + (weighted ? " " + inst.label() : ""));
                add(f.family, k, weighted ? base + "_" + replica_tag(k) : base, std::move(inst));
            }
        } else if (f.family == "u3r" || f.family == "wdr") {
            const int d = f.family == "u3r" ? 3 : f.d;
            for (int k = 0; k < f.replicas; ++k) {
                const Seed rs = derive_seed(f.seed, static_cast<std::uint64_t>(k));
                const auto g = gen_regular(f.n, d, rs);
                IsingInstance inst = (f.family == "wdr" || weighted)
                                         ? assign_weights(g, dist, splitmix64(rs))
                                         : to_instance(g);
                std::ostringstream label;
                label << f.family << " n=" << f.n << " d=" << d << " replica=" << k
                      << " seed=" << rs << " rng=" << kRngVersion;
                if (f.family == "wdr" || weighted) {
                    label << " weights=" << describe(dist);
                }
                inst.set_label(label.str());
                add(f.family, k,
                    f.family + "_n" + std::to_string(f.n) + "_" + replica_tag(k), std::move(inst));
            }
        } else if (f.family == "sk") {
            for (double h0 : f.h0_values()) {
                const std::string group = "h0=" + format_double(h0);
                for (int k = 0; k < f.replicas; ++k) {
                    add(group, k,
                        "sk_n" + std::to_string(f.n) + "_h0_" + format_double(h0) + "_" +
                            replica_tag(k),
                        gen_sk(f.n, h0, derive_seed(f.seed, static_cast<std::uint64_t>(k))));
                }
            }
        } else if (f.family == "graph6") {
            if (f.graph6_file.empty()) {
                throw UsageError("graph6 family needs --graph6-file");
            }
            if (!fs::exists(f.graph6_file)) {
                throw UsageError("graph6 file not found: " + f.graph6_file);
            }
            const auto graphs = parse_graph6_lines(read_text_file(f.graph6_file));
            if (graphs.empty()) {
                throw UsageError("graph6 file holds no graphs: " + f.graph6_file);
            }
            int k = 0;
            for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
                for (int w = 0; w < (weighted ? f.replicas : 1); ++w, ++k) {
                    const Seed rs = derive_seed(f.seed, static_cast<std::uint64_t>(k));
                    auto inst = weighted ? assign_weights(graphs[gi], dist, rs) : to_instance(graphs[gi]);
                    inst.set_label("graph6 " + fs::path(f.graph6_file).filename().string() +
                                   " line=" + std::to_string(gi + 1) +
                                   (weighted ? " " + inst.label() : ""));
                    add("graph6", k, "graph6_" + replica_tag(k), std::move(inst));
                }
            }
        }
    } catch (const InputError &e) {
        throw UsageError(e.what());
    }
    return out;
}

// Penta-O options --------------------------------------------------------------

struct RunOptions {
    double gamma0 = 0.2;
    std::vector<double> gammas;
    int p_max = 10;
    std::string mode = "exact";
    std::uint64_t shots = 3000;
    Seed seed = 0;
    bool converge = false;
    double epsilon = kDefaultConvergenceEpsilon;
    std::string metric = "auto";
    bool no_final_sample = false;
    int qubit_cap = kDefaultQubitCap;

    PentaOConfig to_config() const {
        PentaOConfig cfg;
        cfg.gamma0 = gamma0;
        cfg.gammas = gammas;
        cfg.p_max = p_max;
        cfg.mode = mode == "shots" ? ProbeMode::Shots : ProbeMode::Exact;
        cfg.shots = shots;
        cfg.seed = seed;
        cfg.converge = converge;
        cfg.epsilon = epsilon;
        cfg.metric = metric == "ratio"               ? ConvergenceMetric::ApproximationRatio
                     : metric == "normalized_energy" ? ConvergenceMetric::NormalizedEnergy
                                                     : ConvergenceMetric::Auto;
        cfg.final_sample = !no_final_sample;
        cfg.qubit_cap = qubit_cap;
        return cfg;
    }
};

void add_run_options(CLI::App *app, RunOptions &r) {
    app->add_option("--gamma0", r.gamma0, "Cost angle used at every level")->capture_default_str();
    app->add_option("--gammas", r.gammas, "Per-level cost angles (overrides --gamma0)")
        ->delimiter(',');
    app->add_option("--p-max", r.p_max, "Maximum level")->capture_default_str();
    app->add_option("--mode", r.mode, "exact | shots")
        ->check(CLI::IsMember({"exact", "shots"}))
        ->capture_default_str();
    app->add_option("--M", r.shots, "Shots per trial")->capture_default_str();
    app->add_option("--converge", r.converge, "Stop once the level improvement drops below epsilon")
        ->capture_default_str();
    app->add_option("--epsilon", r.epsilon, "Convergence threshold")->capture_default_str();
    app->add_option("--metric", r.metric, "Convergence metric: auto | ratio | normalized_energy")
        ->check(CLI::IsMember({"auto", "ratio", "normalized_energy"}))
        ->capture_default_str();
    app->add_flag("--no-final-sample", r.no_final_sample, "Skip the final sampling trial");
    app->add_option("--qubit-cap", r.qubit_cap, "Largest simulated qubit count")
        ->capture_default_str();
}

void ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

std::ofstream open_out(const fs::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

void write_header(std::ostream &out, const std::string &kind, const json &config) {
    out << "# pentao " << kind << " format " << kReportFormatVersion << '\n';
    out << "# config: " << config.dump() << '\n';
}

std::string csv_field(const std::string &text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') {
            quoted += '"';
        }
        quoted += ch;
    }
    return quoted + '"';
}

// gen ---------------------------------------------------------------------------

int cmd_gen(const FamilyOptions &f, const std::string &out_dir, std::ostream &out) {
    const auto replicas = make_replicas(f);
    ensure_dir(out_dir);
    for (const auto &r : replicas) {
        const fs::path path = fs::path(out_dir) / (r.name + ".json");
        write_instance_file(path, r.instance);
        out << path.string() << '\n';
    }
    return kExitOk;
}

// run ---------------------------------------------------------------------------

struct RunFiles {
    std::string instance;
    std::string out_dir = ".";
    std::string prefix;
    std::string normalize = "no";
    std::string state_dump;
};

int cmd_run(const RunFiles &files, const RunOptions &opts, std::ostream &out) {
    if (files.instance.empty()) {
        throw UsageError("--instance is required");
    }
    if (!fs::exists(files.instance)) {
        throw UsageError("instance file not found: " + files.instance);
    }
    IsingInstance inst;
    try {
        inst = read_instance_file(files.instance);
    } catch (const ParseError &e) {
        const auto ext = fs::path(files.instance).extension();
        const bool by_line = ext != ".json" && ext != ".g6" && ext != ".graph6";
        throw Error(files.instance + ": " + e.what() + (by_line ? " at line " : " at byte ") +
                    std::to_string(e.position()));
    }
    if (files.normalize == "yes") {
        inst = normalize(inst);
    }
    const auto cfg = opts.to_config();
    json config = config_to_json(cfg);
    config["command"] = "run";
    config["instance"] = files.instance;
    config["normalize"] = files.normalize;

    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = diagonal<double>(inst, cfg.qubit_cap);
    const auto result = penta_o_run(inst, spec, cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto report = build_report(inst, spec, result, cfg, config, elapsed);

    ensure_dir(files.out_dir);
    const fs::path base = fs::path(files.out_dir) / files.prefix;
    {
        auto f = open_out(base.string() + "report.json");
        f << to_json(report).dump(2) << '\n';
    }
    {
        auto f = open_out(base.string() + "levels.csv");
        write_levels_csv(f, report);
    }
    if (!files.state_dump.empty()) {
        auto f = open_out(files.state_dump);
        write_state_dump(f, result.final_state);
    }
    out << "levels=" << report.j_trajectory.size() << " J=" << format_double(report.j_trajectory.back());
    if (!report.r_trajectory.empty()) {
        out << " r=" << format_double(report.r_trajectory.back());
    }
    out << " low_energy=" << format_double(report.low_energy_probability)
        << " trials=" << report.total_trials << '\n';
    return kExitOk;
}

// sweep ---------------------------------------------------------------------------

struct SweepOutcome {
    bool ok = false;
    std::string error;
    RunReport report;
};

int cmd_sweep(const FamilyOptions &f, const RunOptions &opts, const std::string &out_dir,
              int threads, std::ostream &out, std::ostream &err) {
    const auto replicas = make_replicas(f);
    auto cfg = opts.to_config();
    if (f.family == "sk" && cfg.metric == ConvergenceMetric::Auto) {
        // One metric across the whole field sweep, h0 = 0 included.
        cfg.metric = ConvergenceMetric::NormalizedEnergy;
    }
    cfg.validate();
    json config = config_to_json(cfg);
    config["command"] = "sweep";
    config["family"] = f.to_json();

    std::vector<SweepOutcome> outcomes(replicas.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next++; k < replicas.size(); k = next++) {
            try {
                const auto &inst = replicas[k].instance;
                const auto spec = diagonal<double>(inst, cfg.qubit_cap);
                const auto result = penta_o_run(inst, spec, cfg);
                outcomes[k].report = build_report(inst, spec, result, cfg);
                outcomes[k].ok = true;
            } catch (const std::exception &e) {
                outcomes[k].error = e.what();
            }
        }
    };
    const int pool = std::max(1, threads > 0 ? threads
                                             : static_cast<int>(std::thread::hardware_concurrency()));
    {
        std::vector<std::jthread> workers;
        for (int t = 0; t < std::min<int>(pool, static_cast<int>(replicas.size())); ++t) {
            workers.emplace_back(worker);
        }
    }

    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    auto per_level = open_out(dir / "replicas.csv");
    write_header(per_level, "sweep-replicas", config);
    per_level << "group,replica,level,J,r,normalized_energy,low_energy_probability,trials\n";
    auto summary = open_out(dir / "summary.csv");
    write_header(summary, "sweep-summary", config);
    summary << "group,replica,name,status,levels,p_c,r_c,low_energy_probability,"
               "ground_state_probability,trials\n";

    // Groups in first-appearance order; replicas already sorted by id.
    std::vector<std::string> groups;
    for (const auto &r : replicas) {
        if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) {
            groups.push_back(r.group);
        }
    }
    bool any_failed = false;
    for (std::size_t k = 0; k < replicas.size(); ++k) {
        const auto &r = replicas[k];
        const auto &o = outcomes[k];
        if (!o.ok) {
            any_failed = true;
            summary << csv_field(r.group) << ',' << r.index << ',' << r.name << ','
                    << csv_field("error: " + o.error) << ",,,,,,\n";
            err << "replica " << r.name << " failed: " << o.error << '\n';
            continue;
        }
        const auto &rep = o.report;
        for (std::size_t l = 0; l < rep.j_trajectory.size(); ++l) {
            per_level << csv_field(r.group) << ',' << r.index << ',' << (l + 1) << ','
                      << format_double(rep.j_trajectory[l]) << ','
                      << (l < rep.r_trajectory.size() ? format_double(rep.r_trajectory[l]) : "")
                      << ','
                      << (l < rep.normalized_trajectory.size()
                              ? format_double(rep.normalized_trajectory[l])
                              : "")
                      << ',' << format_double(rep.low_energy_trajectory[l]) << ','
                      << rep.trials_cumulative[l] << '\n';
        }
        summary << csv_field(r.group) << ',' << r.index << ',' << r.name << ",ok,"
                << rep.j_trajectory.size() << ',' << rep.convergence.level << ','
                << (rep.r_c ? format_double(*rep.r_c) : "") << ','
                << format_double(rep.low_energy_probability) << ','
                << format_double(rep.ground_state_probability) << ',' << rep.total_trials << '\n';
    }

    auto levels = open_out(dir / "aggregate_levels.csv");
    write_header(levels, "sweep-aggregate-levels", config);
    levels << "group,level,count,mean_r,median_r,q1_r,q3_r,mean_normalized_energy,"
              "mean_low_energy_probability\n";
    auto finals = open_out(dir / "aggregate_final.csv");
    write_header(finals, "sweep-aggregate-final", config);
    finals << "group,metric,count,mean,median,q1,q3,whisker_low,whisker_high,min,max\n";

    auto mean = [](const std::vector<double> &v) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        return s / static_cast<double>(v.size());
    };
    for (const auto &group : groups) {
        std::size_t max_levels = 0;
        for (std::size_t k = 0; k < replicas.size(); ++k) {
            if (replicas[k].group == group && outcomes[k].ok) {
                max_levels = std::max(max_levels, outcomes[k].report.j_trajectory.size());
            }
        }
        for (std::size_t l = 0; l < max_levels; ++l) {
            std::vector<double> rs, es, lows;
            std::size_t count = 0;
            for (std::size_t k = 0; k < replicas.size(); ++k) {
                const auto &rep = outcomes[k].report;
                if (replicas[k].group != group || !outcomes[k].ok || l >= rep.j_trajectory.size()) {
                    continue;
                }
                ++count;
                if (l < rep.r_trajectory.size()) {
                    rs.push_back(rep.r_trajectory[l]);
                }
                if (l < rep.normalized_trajectory.size()) {
                    es.push_back(rep.normalized_trajectory[l]);
                }
                lows.push_back(rep.low_energy_trajectory[l]);
            }
            levels << csv_field(group) << ',' << (l + 1) << ',' << count << ',';
            if (!rs.empty()) {
                const auto box = box_stats(rs);
                levels << format_double(box.mean) << ',' << format_double(box.median) << ','
                       << format_double(box.q1) << ',' << format_double(box.q3);
            } else {
                levels << ",,,";
            }
            levels << ',' << (es.empty() ? "" : format_double(mean(es))) << ','
                   << format_double(mean(lows)) << '\n';
        }

        std::map<std::string, std::vector<double>> metrics;
        for (std::size_t k = 0; k < replicas.size(); ++k) {
            if (replicas[k].group != group || !outcomes[k].ok) {
                continue;
            }
            const auto &rep = outcomes[k].report;
            if (rep.r_c) {
                metrics["r_c"].push_back(*rep.r_c);
            }
            metrics["low_energy_probability"].push_back(rep.low_energy_probability);
            metrics["ground_state_probability"].push_back(rep.ground_state_probability);
        }
        for (const auto &[name, values] : metrics) {
            const auto box = box_stats(values);
            finals << csv_field(group) << ',' << name << ',' << box.count << ','
                   << format_double(box.mean) << ',' << format_double(box.median) << ','
                   << format_double(box.q1) << ',' << format_double(box.q3) << ','
                   << format_double(box.whisker_low) << ',' << format_double(box.whisker_high)
                   << ',' << format_double(box.min) << ',' << format_double(box.max) << '\n';
        }
    }
    out << "replicas=" << replicas.size() << " groups=" << groups.size()
        << (any_failed ? " (with failures)" : "") << '\n';
    return any_failed ? kExitFailure : kExitOk;
}

// tts -----------------------------------------------------------------------------

struct TtsOptions {
    int n_start = 100;
    int n_stop = 1000;
    int n_step = 50;
    std::string scaling = "all";
    double tau = 500e-9;
    double shots = 1e3;
    std::string out_file;
};

PScaling parse_scaling(const std::string &name) {
    if (name == "quadratic") {
        return PScaling::Quadratic;
    }
    if (name == "linear") {
        return PScaling::Linear;
    }
    return PScaling::Log;
}

int cmd_tts(const TtsOptions &t, std::ostream &out) {
    if (t.n_start < 1 || t.n_stop < t.n_start || t.n_step < 1) {
        throw UsageError("tts: empty or invalid N range");
    }
    if (!(t.tau > 0.0) || !(t.shots > 0.0)) {
        throw UsageError("tts: --tau and --M must be positive");
    }
    const std::vector<std::string> laws =
        t.scaling == "all" ? std::vector<std::string>{"quadratic", "linear", "log"}
                           : std::vector<std::string>{t.scaling};
    json config = {{"command", "tts"}, {"n_start", t.n_start}, {"n_stop", t.n_stop},
                   {"n_step", t.n_step}, {"scaling", t.scaling}, {"tau", t.tau},
                   {"M", t.shots}};

    std::ofstream file;
    std::ostream *sink = &out;
    if (!t.out_file.empty()) {
        file = open_out(t.out_file);
        sink = &file;
    }
    std::ostream &csv = *sink;
    write_header(csv, "tts", config);
    csv << "N,T_c";
    for (const auto &law : laws) {
        csv << ",p_" << law << ",T_q_" << law;
    }
    csv << '\n';
    for (int n = t.n_start; n <= t.n_stop; n += t.n_step) {
        csv << n << ',' << format_double(tts_classical(n));
        for (const auto &law : laws) {
            const TtsParams params{t.tau, t.shots, parse_scaling(law)};
            const int p = p_scaling(n, params);
            csv << ',' << p << ',' << format_double(tts_quantum(p, n, params));
        }
        csv << '\n';
    }
    for (const auto &law : laws) {
        const TtsParams params{t.tau, t.shots, parse_scaling(law)};
        const auto cross = crossover(params, t.n_start, t.n_stop, t.n_step);
        csv << "# crossover " << law << ": ";
        if (cross) {
            const int p = p_scaling(*cross, params);
            csv << "N=" << *cross << " p=" << p << " T_q=" << format_double(tts_quantum(p, *cross, params))
                << " T_c=" << format_double(tts_classical(*cross)) << '\n';
        } else {
            csv << "none\n";
        }
    }
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Level-wise QAOA parameter setting (Penta-O) on a statevector simulator", "pentao"};
    app.require_subcommand(1);

    FamilyOptions gen_family;
    std::string gen_out = ".";
    auto *gen = app.add_subcommand("gen", "Generate instance files");
    add_family_options(gen, gen_family);
    gen->add_option("--out", gen_out, "Output directory")->capture_default_str();
    std::string gen_config;
    gen->add_option("--config", gen_config, "JSON config file; flags override its values");

    RunFiles run_files;
    RunOptions run_opts;
    auto *run_cmd = app.add_subcommand("run", "Run Penta-O on one instance");
    run_cmd->add_option("--instance", run_files.instance, "Instance file (.json, .g6, edge list)");
    run_cmd->add_option("--out", run_files.out_dir, "Output directory")->capture_default_str();
    run_cmd->add_option("--prefix", run_files.prefix, "Output file name prefix");
    run_cmd->add_option("--normalize", run_files.normalize, "Divide weights by max |w_ij|: yes | no")
        ->check(CLI::IsMember({"yes", "no"}))
        ->capture_default_str();
    run_cmd->add_option("--state-dump", run_files.state_dump, "Write the final state (binary)");
    run_cmd->add_option("--seed", run_opts.seed, "Seed for shot sampling")->capture_default_str();
    add_run_options(run_cmd, run_opts);
    std::string run_cmd_config;
    run_cmd->add_option("--config", run_cmd_config, "JSON config file; flags override its values");

    FamilyOptions sweep_family;
    RunOptions sweep_opts;
    std::string sweep_out = ".";
    int threads = 0;
    auto *sweep = app.add_subcommand("sweep", "Run Penta-O over a benchmark family");
    add_family_options(sweep, sweep_family);
    add_run_options(sweep, sweep_opts);
    sweep->add_option("--out", sweep_out, "Output directory")->capture_default_str();
    sweep->add_option("--threads", threads, "Worker threads (0: hardware threads)")
        ->capture_default_str();
    std::string sweep_config;
    sweep->add_option("--config", sweep_config, "JSON config file; flags override its values");

    TtsOptions tts_opts;
    auto *tts = app.add_subcommand("tts", "Time-to-solution model table");
    tts->add_option("--n-start", tts_opts.n_start)->capture_default_str();
    tts->add_option("--n-stop", tts_opts.n_stop)->capture_default_str();
    tts->add_option("--n-step", tts_opts.n_step)->capture_default_str();
    tts->add_option("--scaling", tts_opts.scaling, "all | quadratic | linear | log")
        ->check(CLI::IsMember({"all", "quadratic", "linear", "log"}))
        ->capture_default_str();
    tts->add_option("--tau", tts_opts.tau, "Two-qubit gate time (s)")->capture_default_str();
    tts->add_option("--M", tts_opts.shots, "Shots per trial")->capture_default_str();
    tts->add_option("--out", tts_opts.out_file, "CSV file (default: stdout)");
    std::string tts_config;
    tts->add_option("--config", tts_config, "JSON config file; flags override its values");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help(e.get_name() == "CallForAllHelp" ? "" : "", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return kExitOk;
        }
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        for (auto [sub, path] : {std::pair{gen, &gen_config}, std::pair{run_cmd, &run_cmd_config},
                                 std::pair{sweep, &sweep_config}, std::pair{tts, &tts_config}}) {
            if (sub->parsed()) {
                apply_json_config(sub, *path);
            }
        }
        if (gen->parsed()) {
            return cmd_gen(gen_family, gen_out, out);
        }
        if (run_cmd->parsed()) {
            return cmd_run(run_files, run_opts, out);
        }
        if (sweep->parsed()) {
            sweep_opts.seed = sweep_family.seed;
            return cmd_sweep(sweep_family, sweep_opts, sweep_out, threads, out, err);
        }
        if (tts->parsed()) {
            return cmd_tts(tts_opts, out);
        }
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace pentao::cli
