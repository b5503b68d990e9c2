#include "lassolab/report.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace lassolab {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20250810;

std::string fmt10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// ---- enum <-> string ----

const std::map<std::string, SeqEstimator> kSeqEstimators = {
    {"lasso", SeqEstimator::lasso},
    {"opt_lasso", SeqEstimator::opt_lasso},
    {"oracle_ls", SeqEstimator::oracle_ls},
};
const std::map<std::string, PolicyKind> kPolicies = {
    {"random", PolicyKind::random_policy},
    {"three_stage", PolicyKind::three_stage},
    {"two_stage_opt", PolicyKind::two_stage_opt},
    {"two_stage_lasso", PolicyKind::two_stage_lasso},
    {"oracle", PolicyKind::oracle},
};
const std::map<std::string, CovarianceKind> kCovKinds = {
    {"gaussian_identity", CovarianceKind::gaussian_identity},
    {"gaussian_circulant", CovarianceKind::gaussian_circulant},
    {"gaussian_block", CovarianceKind::gaussian_block},
    {"clipped_gaussian", CovarianceKind::clipped_gaussian},
};

template <typename T>
std::string name_of(const std::map<std::string, T>& table, T value) {
    for (const auto& [k, v] : table)
        if (v == value) return k;
    return "?";
}

template <typename T>
T parse_enum(const std::map<std::string, T>& table, const std::string& text,
             const std::string& field) {
    auto it = table.find(text);
    if (it == table.end()) throw ConfigInvalid(field + ": unknown value '" + text + "'");
    return it->second;
}

template <typename T>
T get_field(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigInvalid(where + "." + key + ": missing");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigInvalid(where + "." + key + ": " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

json cov_to_json(const CovariateModel& m) {
    json j;
    j["kind"] = name_of(kCovKinds, m.kind);
    switch (m.kind) {
        case CovarianceKind::gaussian_circulant: j["r"] = m.r; break;
        case CovarianceKind::gaussian_block: j["block_size"] = m.block_size; break;
        case CovarianceKind::clipped_gaussian: j["bound"] = m.bound; break;
        default: break;
    }
    return j;
}

CovariateModel cov_from_json(const json& j, std::size_t d, const std::string& where) {
    CovariateModel m;
    m.d = d;
    m.kind = parse_enum(kCovKinds, get_field<std::string>(j, "kind", where), where + ".kind");
    m.r = get_or<double>(j, "r", 0.5);
    m.block_size = get_or<std::size_t>(j, "block_size", 2);
    m.bound = get_or<double>(j, "bound", 1.0);
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw ConfigInvalid(where + ": " + e.what());
    }
    return m;
}

// ---- job pool: run `count` jobs on `jobs` threads, results by index ----

template <typename Fn>
void run_jobs(std::size_t count, std::size_t jobs, Fn&& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, count == 0 ? std::size_t{1} : count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> workers;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---- CSV / manifest emission ----

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

// RFC-4180: fields holding a comma, quote or newline get quoted
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string table_csv_text(const std::vector<TableRow>& rows) {
    std::string text = "scenario,method,metric,mean,sem,sd,reps,seed\n";
    for (const TableRow& r : rows) {
        text += csv_field(r.scenario) + ',' + csv_field(r.method) + ',' + csv_field(r.metric) +
                ',' + fmt10(r.agg.mean) + ',' + fmt10(r.agg.sem) + ',' + fmt10(r.agg.sd) + ',' +
                std::to_string(r.reps) + ',' + std::to_string(r.seed) + '\n';
    }
    return text;
}

struct CurvePoint {
    std::string method;
    std::string metric;
    std::size_t t;
    double value;
};

std::string curves_csv_text(const std::string& scenario, const std::vector<CurvePoint>& pts) {
    std::string text = "scenario,method,metric,t,value\n";
    for (const CurvePoint& p : pts) {
        text += csv_field(scenario) + ',' + csv_field(p.method) + ',' + csv_field(p.metric) +
                ',' + std::to_string(p.t) + ',' + fmt10(p.value) + '\n';
    }
    return text;
}

}  // namespace

std::size_t ExperimentConfig::reps() const {
    switch (kind) {
        case ExperimentKind::sequential: return seq.reps;
        case ExperimentKind::bandit: return bandit.reps;
        case ExperimentKind::fixtures: return 1;
    }
    return 0;
}

std::uint64_t ExperimentConfig::seed() const {
    switch (kind) {
        case ExperimentKind::sequential: return seq.base_seed;
        case ExperimentKind::bandit: return bandit.base_seed;
        case ExperimentKind::fixtures: return fixture_seed;
    }
    return 0;
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
    json j;
    j["label"] = cfg.label;
    j["output_dir"] = cfg.output_dir;
    j["parallel_jobs"] = cfg.parallel_jobs;
    switch (cfg.kind) {
        case ExperimentKind::sequential: {
            j["kind"] = "sequential";
            json sc;
            sc["s0"] = cfg.seq.s0;
            sc["d"] = cfg.seq.d;
            sc["T"] = cfg.seq.T;
            sc["sigma"] = cfg.seq.sigma;
            sc["cov"] = cov_to_json(cfg.seq.cov);
            sc["schedule"] =
                cfg.seq.schedule_variant == ScheduleVariant::theory_seq ? "theory_seq" : "sim_seq";
            sc["window"] = {cfg.seq.error_window.first, cfg.seq.error_window.second};
            if (cfg.seq.cap_xi)
                sc["cap"] = *cfg.seq.cap_xi;
            else
                sc["cap"] = nullptr;
            sc["refit_every"] = cfg.seq.refit_every;
            sc["solver_tol"] = cfg.seq.solver_tol;
            j["scenario"] = sc;
            j["reps"] = cfg.seq.reps;
            j["seed"] = cfg.seq.base_seed;
            json ms = json::array();
            for (const SeqMethodSpec& m : cfg.seq_methods) {
                json mj;
                mj["name"] = m.name;
                mj["estimator"] = name_of(kSeqEstimators, m.estimator);
                mj["C0"] = m.C0;
                mj["C0_hard"] = m.C0_hard;
                ms.push_back(mj);
            }
            j["methods"] = ms;
            break;
        }
        case ExperimentKind::bandit: {
            j["kind"] = "bandit";
            json sc;
            sc["K"] = cfg.bandit.K;
            sc["s0"] = cfg.bandit.s0;
            sc["d"] = cfg.bandit.d;
            sc["T"] = cfg.bandit.T;
            sc["sigma"] = cfg.bandit.sigma;
            sc["cov"] = cov_to_json(cfg.bandit.cov);
            sc["gamma1"] = cfg.bandit.gamma1;
            sc["gamma2"] = cfg.bandit.gamma2;
            sc["g1"] = cfg.bandit.g1;
            sc["g2"] = cfg.bandit.g2;
            sc["C0"] = cfg.bandit.C0;
            sc["C0_hard"] = cfg.bandit.C0_hard;
            sc["lambda_variant"] = cfg.bandit.lambda_variant == BanditLambdaVariant::theory_bandit
                                       ? "theory_bandit"
                                       : "sim_bandit";
            sc["tie_rule"] =
                cfg.bandit.tie_rule == TieRule::random_tie ? "random" : "lowest_index";
            sc["m_X"] = cfg.bandit.m_X;
            sc["L3"] = cfg.bandit.L3;
            sc["solver_tol"] = cfg.bandit.solver_tol;
            j["scenario"] = sc;
            j["reps"] = cfg.bandit.reps;
            j["seed"] = cfg.bandit.base_seed;
            json ms = json::array();
            for (const BanditMethodSpec& m : cfg.bandit_methods) {
                json mj;
                mj["name"] = m.name;
                mj["policy"] = name_of(kPolicies, m.policy);
                ms.push_back(mj);
            }
            j["methods"] = ms;
            break;
        }
        case ExperimentKind::fixtures: {
            j["kind"] = "fixtures";
            json sc;
            sc["what"] = cfg.fixtures.what;
            sc["d"] = cfg.fixtures.d;
            sc["s"] = cfg.fixtures.s;
            sc["r"] = cfg.fixtures.r;
            sc["delta"] = cfg.fixtures.delta;
            sc["n"] = cfg.fixtures.n;
            j["scenario"] = sc;
            j["seed"] = cfg.fixture_seed;
            j["reps"] = 1;
            break;
        }
    }
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("config: not valid JSON: ") + e.what());
    }
    if (j.contains("config")) j = j.at("config");  // manifest reuse

    ExperimentConfig cfg;
    const std::string kind = get_field<std::string>(j, "kind", "config");
    cfg.label = get_or<std::string>(j, "label", "custom");
    cfg.output_dir = get_or<std::string>(j, "output_dir", "out");
    cfg.parallel_jobs = get_or<std::size_t>(j, "parallel_jobs", 0);
    const json sc = j.contains("scenario") ? j.at("scenario") : json::object();

    if (kind == "sequential") {
        cfg.kind = ExperimentKind::sequential;
        SequentialScenario& s = cfg.seq;
        s.s0 = get_field<std::size_t>(sc, "s0", "scenario");
        s.d = get_field<std::size_t>(sc, "d", "scenario");
        s.T = get_field<std::size_t>(sc, "T", "scenario");
        s.sigma = get_or<double>(sc, "sigma", 1.0);
        s.cov = sc.contains("cov") ? cov_from_json(sc.at("cov"), s.d, "scenario.cov")
                                   : CovariateModel::identity(s.d);
        const std::string sched = get_or<std::string>(sc, "schedule", "sim_seq");
        if (sched == "theory_seq")
            s.schedule_variant = ScheduleVariant::theory_seq;
        else if (sched == "sim_seq")
            s.schedule_variant = ScheduleVariant::sim_seq;
        else
            throw ConfigInvalid("scenario.schedule: unknown value '" + sched + "'");
        if (sc.contains("window")) {
            const auto w = sc.at("window");
            if (!w.is_array() || w.size() != 2)
                throw ConfigInvalid("scenario.window: expected [from, to]");
            s.error_window = {w.at(0).get<std::size_t>(), w.at(1).get<std::size_t>()};
        } else {
            s.error_window = {std::max<std::size_t>(1, s.T / 10), s.T};
        }
        if (sc.contains("cap") && !sc.at("cap").is_null())
            s.cap_xi = sc.at("cap").get<double>();
        s.refit_every = get_or<std::size_t>(sc, "refit_every", 1);
        s.solver_tol = get_or<double>(sc, "solver_tol", 1e-10);
        s.reps = get_field<std::size_t>(j, "reps", "config");
        s.base_seed = get_or<std::uint64_t>(j, "seed", kDefaultSeed);
        if (!j.contains("methods") || !j.at("methods").is_array() || j.at("methods").empty())
            throw ConfigInvalid("methods: at least one method required");
        for (const json& mj : j.at("methods")) {
            SeqMethodSpec m;
            m.estimator = parse_enum(kSeqEstimators,
                                     get_field<std::string>(mj, "estimator", "methods[]"),
                                     "methods[].estimator");
            m.C0 = get_or<double>(mj, "C0", 0.8);
            m.C0_hard = get_or<double>(mj, "C0_hard", 0.6);
            m.name = get_or<std::string>(mj, "name", name_of(kSeqEstimators, m.estimator));
            cfg.seq_methods.push_back(std::move(m));
        }
        try {
            s.validate();
        } catch (const std::exception& e) {
            throw ConfigInvalid(std::string("scenario: ") + e.what());
        }
    } else if (kind == "bandit") {
        cfg.kind = ExperimentKind::bandit;
        BanditScenario& b = cfg.bandit;
        b.K = get_field<std::size_t>(sc, "K", "scenario");
        b.s0 = get_field<std::size_t>(sc, "s0", "scenario");
        b.d = get_field<std::size_t>(sc, "d", "scenario");
        b.T = get_field<std::size_t>(sc, "T", "scenario");
        b.sigma = get_or<double>(sc, "sigma", 1.0);
        b.cov = sc.contains("cov") ? cov_from_json(sc.at("cov"), b.d, "scenario.cov")
                                   : CovariateModel::clipped(b.d, 1.0);
        b.gamma1 = get_or<std::size_t>(sc, "gamma1", 10 * b.K);
        b.gamma2 = get_or<std::size_t>(sc, "gamma2", 8 * b.gamma1);
        b.g1 = get_or<std::size_t>(sc, "g1", 50);
        b.g2 = get_or<std::size_t>(sc, "g2", 50);
        b.C0 = get_or<double>(sc, "C0", 2.0);
        b.C0_hard = get_or<double>(sc, "C0_hard", 0.6);
        const std::string lv = get_or<std::string>(sc, "lambda_variant", "sim_bandit");
        if (lv == "theory_bandit")
            b.lambda_variant = BanditLambdaVariant::theory_bandit;
        else if (lv == "sim_bandit")
            b.lambda_variant = BanditLambdaVariant::sim_bandit;
        else
            throw ConfigInvalid("scenario.lambda_variant: unknown value '" + lv + "'");
        const std::string tie = get_or<std::string>(sc, "tie_rule", "lowest_index");
        if (tie == "random")
            b.tie_rule = TieRule::random_tie;
        else if (tie == "lowest_index")
            b.tie_rule = TieRule::lowest_index;
        else
            throw ConfigInvalid("scenario.tie_rule: unknown value '" + tie + "'");
        b.m_X = get_or<double>(sc, "m_X", 1.0);
        b.L3 = get_or<double>(sc, "L3", 2.0);
        b.solver_tol = get_or<double>(sc, "solver_tol", 1e-10);
        b.reps = get_field<std::size_t>(j, "reps", "config");
        b.base_seed = get_or<std::uint64_t>(j, "seed", kDefaultSeed);
        if (!j.contains("methods") || !j.at("methods").is_array() || j.at("methods").empty())
            throw ConfigInvalid("methods: at least one method required");
        for (const json& mj : j.at("methods")) {
            BanditMethodSpec m;
            m.policy = parse_enum(kPolicies, get_field<std::string>(mj, "policy", "methods[]"),
                                  "methods[].policy");
            m.name = get_or<std::string>(mj, "name", name_of(kPolicies, m.policy));
            cfg.bandit_methods.push_back(std::move(m));
        }
        try {
            b.validate();
        } catch (const std::exception& e) {
            throw ConfigInvalid(std::string("scenario: ") + e.what());
        }
    } else if (kind == "fixtures") {
        cfg.kind = ExperimentKind::fixtures;
        cfg.fixtures.what = get_or<std::string>(sc, "what", "packing");
        if (cfg.fixtures.what != "packing" && cfg.fixtures.what != "omega1")
            throw ConfigInvalid("scenario.what: expected 'packing' or 'omega1'");
        cfg.fixtures.d = get_field<std::size_t>(sc, "d", "scenario");
        cfg.fixtures.s = get_field<std::size_t>(sc, "s", "scenario");
        cfg.fixtures.r = get_or<double>(sc, "r", 1.0);
        cfg.fixtures.delta = get_or<double>(sc, "delta", 0.1);
        cfg.fixtures.n = get_or<std::size_t>(sc, "n", 1000);
        cfg.fixture_seed = get_or<std::uint64_t>(j, "seed", kDefaultSeed);
    } else {
        throw ConfigInvalid("config.kind: expected sequential | bandit | fixtures");
    }
    return cfg;
}

ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

namespace {

ExperimentResult finish_experiment(const ExperimentConfig& cfg, std::vector<TableRow> rows,
                                   const std::vector<CurvePoint>& curves, double wall_seconds) {
    const std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output_dir " + dir.string() + ": " + ec.message());

    write_text_file(dir / "table.csv", table_csv_text(rows));
    write_text_file(dir / "curves.csv", curves_csv_text(cfg.label, curves));

    json manifest;
    manifest["version"] = version_string();
    manifest["seed"] = cfg.seed();
    manifest["wall_time_seconds"] = wall_seconds;
    manifest["config"] = json::parse(config_to_json_text(cfg));
    manifest["outputs"] = {"table.csv", "curves.csv"};
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    return {dir / "manifest.json", std::move(rows)};
}

ExperimentResult run_sequential_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const SequentialScenario& base = cfg.seq;
    const std::size_t reps = base.reps;
    const std::size_t wfrom = base.error_window.first;
    const std::size_t wto = base.error_window.second;

    std::vector<TableRow> rows;
    std::vector<CurvePoint> curves;

    for (const SeqMethodSpec& m : cfg.seq_methods) {
        SequentialScenario sc = base;
        sc.estimator = m.estimator;
        sc.C0 = m.C0;
        sc.C0_hard = m.C0_hard;

        std::vector<SeqRunRecord> slots(reps);
        run_jobs(reps, cfg.parallel_jobs, [&](std::size_t rep) {
            slots[rep] = run_sequential_replication(sc, make_stream(sc.base_seed, rep));
        });

        RealVector cells(reps);
        RealVector runcum_sum(wto - wfrom + 1, 0.0);
        RealVector fp_sum(sc.T, 0.0), fn_sum(sc.T, 0.0);
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const SeqRunRecord& rec = slots[rep];
            cells[rep] = cumulative_error(rec, {wfrom, wto}, sc.cap_xi);
            double run = 0.0;
            for (std::size_t t = wfrom; t <= wto; ++t) {
                const double e = rec.squared_error[t - 1];
                run += sc.cap_xi ? std::min(e, *sc.cap_xi) : e;
                runcum_sum[t - wfrom] += run;
            }
            for (std::size_t t = 1; t <= sc.T; ++t) {
                fp_sum[t - 1] += rec.fp[t - 1];
                fn_sum[t - 1] += rec.fn[t - 1];
            }
            slots[rep] = SeqRunRecord{};  // release per-round buffers early
        }

        rows.push_back(
            {cfg.label, m.name, "cum_error_window", aggregate_replications(cells), reps, sc.base_seed});

        const double n = static_cast<double>(reps);
        for (std::size_t t = wfrom; t <= wto; ++t)
            curves.push_back({m.name, "running_cum_error", t, runcum_sum[t - wfrom] / n});
        for (std::size_t t = 1; t <= sc.T; ++t) {
            curves.push_back({m.name, "fp_mean", t, fp_sum[t - 1] / n});
            curves.push_back({m.name, "fn_mean", t, fn_sum[t - 1] / n});
        }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish_experiment(cfg, std::move(rows), curves, wall);
}

ExperimentResult run_bandit_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const BanditScenario& base = cfg.bandit;
    const std::size_t reps = base.reps;

    std::vector<TableRow> rows;
    std::vector<CurvePoint> curves;

    for (const BanditMethodSpec& m : cfg.bandit_methods) {
        std::vector<BanditRunRecord> slots(reps);
        run_jobs(reps, cfg.parallel_jobs, [&](std::size_t rep) {
            slots[rep] = run_bandit_replication(base, m.policy, make_stream(base.base_seed, rep));
        });

        RealVector cells(reps);
        RealVector runcum_sum(base.T, 0.0);
        std::vector<std::size_t> refit_rounds;
        RealVector refit_fp_sum, refit_fn_sum;
        if (!slots.empty()) {
            for (const RefitRecord& rr : slots.front().refits) refit_rounds.push_back(rr.round);
            refit_fp_sum.assign(refit_rounds.size(), 0.0);
            refit_fn_sum.assign(refit_rounds.size(), 0.0);
        }
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const BanditRunRecord& rec = slots[rep];
            cells[rep] = cumulative_regret(rec, {1, base.T});
            double run = 0.0;
            for (std::size_t t = 1; t <= base.T; ++t) {
                run += rec.regret[t - 1];
                runcum_sum[t - 1] += run;
            }
            for (std::size_t i = 0; i < rec.refits.size(); ++i) {
                const RefitRecord& rr = rec.refits[i];
                double fp = 0.0, fn = 0.0;
                for (std::size_t k = 0; k < rr.fp.size(); ++k) {
                    fp += rr.fp[k];
                    fn += rr.fn[k];
                }
                refit_fp_sum[i] += fp / static_cast<double>(base.K);
                refit_fn_sum[i] += fn / static_cast<double>(base.K);
            }
            slots[rep] = BanditRunRecord{};
        }

        rows.push_back(
            {cfg.label, m.name, "cum_regret", aggregate_replications(cells), reps, base.base_seed});

        const double n = static_cast<double>(reps);
        for (std::size_t t = 1; t <= base.T; ++t)
            curves.push_back({m.name, "running_cum_regret", t, runcum_sum[t - 1] / n});
        for (std::size_t i = 0; i < refit_rounds.size(); ++i) {
            curves.push_back({m.name, "fp_mean_refit", refit_rounds[i], refit_fp_sum[i] / n});
            curves.push_back({m.name, "fn_mean_refit", refit_rounds[i], refit_fn_sum[i] / n});
        }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish_experiment(cfg, std::move(rows), curves, wall);
}

ExperimentResult run_fixtures_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const FixturesSpec& fx = cfg.fixtures;
    const std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output_dir " + dir.string() + ": " + ec.message());

    std::vector<TableRow> rows;
    RngStream stream = make_stream(cfg.fixture_seed, 0);

    if (fx.what == "packing") {
        const PackingSet set = build_packing_set(fx.d, fx.s, fx.r, fx.delta, stream);
        std::string csv = "vector,index,value\n";
        for (std::size_t i = 0; i < set.size(); ++i)
            for (std::size_t k = 0; k < set.vectors[i].support.size(); ++k)
                csv += std::to_string(i) + ',' + std::to_string(set.vectors[i].support[k]) + ',' +
                       fmt10(set.vectors[i].values[k]) + '\n';
        write_text_file(dir / "packing.csv", csv);
        rows.push_back({cfg.label, "packing", "M",
                        {static_cast<double>(set.size()), 0.0, 0.0}, 1, cfg.fixture_seed});
        rows.push_back({cfg.label, "packing", "l_ds",
                        {l_ds(fx.d, fx.s), 0.0, 0.0}, 1, cfg.fixture_seed});
    } else {
        std::string csv = "sample,index,value\n";
        RealVector radii(fx.n, 0.0);
        for (std::size_t i = 0; i < fx.n; ++i) {
            const SparseParam th = sample_omega1(fx.d, fx.s, fx.r, stream);
            radii[i] = std::sqrt(th.l2_norm_sq());
            for (std::size_t k = 0; k < th.support.size(); ++k)
                csv += std::to_string(i) + ',' + std::to_string(th.support[k]) + ',' +
                       fmt10(th.values[k]) + '\n';
        }
        write_text_file(dir / "omega1.csv", csv);
        rows.push_back({cfg.label, "omega1", "mean_radius", aggregate_replications(radii), fx.n,
                        cfg.fixture_seed});
    }

    write_text_file(dir / "table.csv", table_csv_text(rows));
    write_text_file(dir / "curves.csv", curves_csv_text(cfg.label, {}));

    json manifest;
    manifest["version"] = version_string();
    manifest["seed"] = cfg.fixture_seed;
    manifest["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest["config"] = json::parse(config_to_json_text(cfg));
    manifest["outputs"] = {"table.csv", "curves.csv",
                           fx.what == "packing" ? "packing.csv" : "omega1.csv"};
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return {dir / "manifest.json", std::move(rows)};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::sequential:
            if (cfg.seq_methods.empty()) throw ConfigInvalid("methods: none configured");
            try {
                cfg.seq.validate();
            } catch (const std::exception& e) {
                throw ConfigInvalid(std::string("scenario: ") + e.what());
            }
            return run_sequential_experiment(cfg);
        case ExperimentKind::bandit:
            if (cfg.bandit_methods.empty()) throw ConfigInvalid("methods: none configured");
            try {
                cfg.bandit.validate();
            } catch (const std::exception& e) {
                throw ConfigInvalid(std::string("scenario: ") + e.what());
            }
            return run_bandit_experiment(cfg);
        case ExperimentKind::fixtures:
            return run_fixtures_experiment(cfg);
    }
    throw ConfigInvalid("config.kind: unset");
}

SweepResult sensitivity_sweep(const std::vector<double>& C0_grid,
                              const std::vector<double>& C0_hard_grid,
                              const ExperimentConfig& base) {
    if (C0_grid.empty() || C0_hard_grid.empty())
        throw ConfigInvalid("sensitivity_sweep: grids must be nonempty");
    if (base.kind == ExperimentKind::fixtures)
        throw ConfigInvalid("sensitivity_sweep: base must be sequential or bandit");

    SweepResult out;
    out.C0_grid = C0_grid;
    out.C0_hard_grid = C0_hard_grid;
    double best = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < C0_grid.size(); ++i) {
        std::vector<TableRow> row;
        for (std::size_t k = 0; k < C0_hard_grid.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof(name), "C0=%g;C0_hard=%g", C0_grid[i], C0_hard_grid[k]);
            ExperimentConfig cell = base;
            cell.output_dir = base.output_dir + "/cell_" + std::to_string(i) + "_" +
                              std::to_string(k);
            if (base.kind == ExperimentKind::sequential) {
                cell.seq_methods = {{name, SeqEstimator::opt_lasso, C0_grid[i], C0_hard_grid[k]}};
            } else {
                cell.bandit.C0 = C0_grid[i];
                cell.bandit.C0_hard = C0_hard_grid[k];
                cell.bandit_methods = {{name, PolicyKind::three_stage}};
            }
            ExperimentResult res = run_experiment(cell);
            TableRow cell_row = res.table.front();
            if (cell_row.agg.mean < best) {
                best = cell_row.agg.mean;
                out.min_row = i;
                out.min_col = k;
            }
            row.push_back(std::move(cell_row));
        }
        out.cells.push_back(std::move(row));
    }

    if (base.kind == ExperimentKind::sequential) {
        for (std::size_t i = 0; i < C0_grid.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof(name), "lasso(C0=%g)", C0_grid[i]);
            ExperimentConfig cell = base;
            cell.output_dir = base.output_dir + "/lasso_" + std::to_string(i);
            cell.seq_methods = {{name, SeqEstimator::lasso, C0_grid[i], 0.0}};
            out.lasso_column.push_back(run_experiment(cell).table.front());
        }
    }
    return out;
}

std::string version_string() { return "lassolab 0.1.0"; }

namespace {

ExperimentConfig seq_preset(const std::string& label, std::size_t s0, std::size_t d,
                            std::size_t T) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::sequential;
    cfg.label = label;
    cfg.seq.s0 = s0;
    cfg.seq.d = d;
    cfg.seq.T = T;
    cfg.seq.sigma = 1.0;
    cfg.seq.cov = CovariateModel::identity(d);
    cfg.seq.schedule_variant = ScheduleVariant::sim_seq;
    cfg.seq.error_window = {std::max<std::size_t>(1, T / 10), T};
    cfg.seq.reps = 200;
    cfg.seq.base_seed = kDefaultSeed;
    cfg.seq_methods = {
        {"opt_lasso(0.8;0.6)", SeqEstimator::opt_lasso, 0.8, 0.6},
        {"opt_lasso(1.0;0.4)", SeqEstimator::opt_lasso, 1.0, 0.4},
        {"lasso(0.8)", SeqEstimator::lasso, 0.8, 0.0},
        {"lasso(1.0)", SeqEstimator::lasso, 1.0, 0.0},
        {"oracle_ls", SeqEstimator::oracle_ls, 0.0, 0.0},  // the running-error figures include it
    };
    cfg.output_dir = "out/" + label;
    return cfg;
}

ExperimentConfig bandit_preset(const std::string& label, std::size_t s0, std::size_t d,
                               std::size_t K) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::bandit;
    cfg.label = label;
    cfg.bandit.K = K;
    cfg.bandit.s0 = s0;
    cfg.bandit.d = d;
    cfg.bandit.T = 10000;
    cfg.bandit.sigma = 1.0;
    cfg.bandit.cov = CovariateModel::clipped(d, 1.0);
    cfg.bandit.gamma1 = 10 * K;
    cfg.bandit.gamma2 = 80 * K;
    cfg.bandit.g1 = 50;
    cfg.bandit.g2 = 50;
    cfg.bandit.C0 = 2.0;
    cfg.bandit.C0_hard = K == 10 ? 1.0 : 0.6;
    cfg.bandit.lambda_variant = BanditLambdaVariant::sim_bandit;
    cfg.bandit.tie_rule = TieRule::lowest_index;
    cfg.bandit.reps = 1000;
    cfg.bandit.base_seed = kDefaultSeed;
    cfg.bandit_methods = {
        {"three_stage", PolicyKind::three_stage},
        {"two_stage_opt", PolicyKind::two_stage_opt},
        {"two_stage_lasso", PolicyKind::two_stage_lasso},
    };
    cfg.output_dir = "out/" + label;
    return cfg;
}

ExperimentConfig scenario_preset(const std::string& name) {
    if (name == "seq-a") return seq_preset(name, 5, 100, 10000);
    if (name == "seq-b") return seq_preset(name, 10, 500, 10000);
    if (name == "seq-c") return seq_preset(name, 5, 1000, 5000);
    if (name == "seq-d") return seq_preset(name, 10, 1000, 5000);
    if (name == "bandit-a") return bandit_preset(name, 5, 100, 5);
    if (name == "bandit-b") return bandit_preset(name, 5, 100, 10);
    if (name == "bandit-c") return bandit_preset(name, 10, 500, 5);
    if (name == "bandit-d") return bandit_preset(name, 10, 500, 10);
    if (name == "bandit-e") return bandit_preset(name, 5, 1000, 5);
    if (name == "bandit-f") return bandit_preset(name, 5, 1000, 10);
    if (name == "bandit-g") return bandit_preset(name, 10, 1000, 5);
    if (name == "bandit-h") return bandit_preset(name, 10, 1000, 10);
    throw ConfigInvalid("preset: unknown name '" + name + "'");
}

void apply_overrides(ExperimentConfig& cfg, const PresetOverrides& ov, const std::string& root) {
    if (cfg.kind == ExperimentKind::sequential) {
        if (ov.reps) cfg.seq.reps = *ov.reps;
        if (ov.T) {
            cfg.seq.T = *ov.T;
            cfg.seq.error_window = {std::max<std::size_t>(1, cfg.seq.T / 10), cfg.seq.T};
        }
        if (ov.seed) cfg.seq.base_seed = *ov.seed;
    } else if (cfg.kind == ExperimentKind::bandit) {
        if (ov.reps) cfg.bandit.reps = *ov.reps;
        if (ov.T) {
            cfg.bandit.T = *ov.T;
            // desk-scale horizons may undercut the preset stage ends
            cfg.bandit.gamma2 = std::min(cfg.bandit.gamma2, cfg.bandit.T);
            cfg.bandit.gamma1 = std::min(cfg.bandit.gamma1, cfg.bandit.gamma2);
        }
        if (ov.seed) cfg.bandit.base_seed = *ov.seed;
    }
    if (ov.parallel_jobs) cfg.parallel_jobs = *ov.parallel_jobs;
    cfg.output_dir = root + "/" + cfg.label;
}

const std::vector<double> kSweepC0 = {1.0, 1.6, 2.0, 2.6, 3.0};
const std::vector<double> kSweepC0Hard = {0.2, 0.6, 1.0, 1.5, 2.0};

}  // namespace

std::vector<std::string> preset_names() {
    return {"table1",   "table2",   "table3",   "table4",   "seq-a",    "seq-b",
            "seq-c",    "seq-d",    "bandit-a", "bandit-b", "bandit-c", "bandit-d",
            "bandit-e", "bandit-f", "bandit-g", "bandit-h"};
}

std::vector<ExperimentConfig> expand_preset(const std::string& name, const PresetOverrides& ov) {
    const std::string root = ov.output_dir.value_or("out/" + name);
    std::vector<std::string> labels;
    if (name == "table1")
        labels = {"seq-a", "seq-b", "seq-c", "seq-d"};
    else if (name == "table2")
        labels = {"bandit-a", "bandit-b", "bandit-c", "bandit-d",
                  "bandit-e", "bandit-f", "bandit-g", "bandit-h"};
    else if (name == "table3")
        labels = {"bandit-e"};
    else if (name == "table4")
        labels = {"bandit-f"};
    else
        labels = {name};

    std::vector<ExperimentConfig> configs;
    for (const std::string& label : labels) {
        ExperimentConfig cfg = scenario_preset(label);
        apply_overrides(cfg, ov, root);
        configs.push_back(std::move(cfg));
    }
    return configs;
}

PresetResult run_preset(const std::string& name, const PresetOverrides& ov) {
    const std::string root = ov.output_dir.value_or("out/" + name);
    PresetResult out;
    std::vector<TableRow> combined;

    if (name == "table3" || name == "table4") {
        ExperimentConfig base = expand_preset(name, ov).front();
        base.output_dir = root + "/cells";
        const SweepResult sweep = sensitivity_sweep(kSweepC0, kSweepC0Hard, base);
        for (const auto& row : sweep.cells)
            for (const TableRow& cell : row) combined.push_back(cell);
        const TableRow& best = sweep.cells[sweep.min_row][sweep.min_col];
        json summary;
        summary["min_cell"] = {{"method", best.method}, {"mean", best.agg.mean}};
        summary["C0_grid"] = sweep.C0_grid;
        summary["C0_hard_grid"] = sweep.C0_hard_grid;
        std::filesystem::create_directories(root);
        write_text_file(std::filesystem::path(root) / "sweep.json", summary.dump(2) + "\n");
    } else {
        for (const ExperimentConfig& cfg : expand_preset(name, ov)) {
            ExperimentResult res = run_experiment(cfg);
            for (const TableRow& row : res.table) combined.push_back(row);
            out.experiments.push_back(std::move(res));
        }
    }

    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw IoError("cannot create output dir " + root + ": " + ec.message());
    out.table_csv = std::filesystem::path(root) / "table.csv";
    write_text_file(out.table_csv, table_csv_text(combined));
    return out;
}

}  // namespace lassolab
