#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "lassolab/report.hpp"

namespace {

using namespace lassolab;

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

void print_rows(const std::vector<TableRow>& rows) {
    for (const TableRow& r : rows) {
        std::printf("%-10s %-22s %-18s %12.4f  sem %8.4f  sd %9.4f  reps %zu\n",
                    r.scenario.c_str(), r.method.c_str(), r.metric.c_str(), r.agg.mean, r.agg.sem,
                    r.agg.sd, r.reps);
    }
}

int cmd_plot(const std::string& curves_path, const std::string& out_path,
             std::string scenario, std::string metric) {
    std::ifstream in(curves_path);
    if (!in) {
        std::cerr << "cannot read " << curves_path << "\n";
        return 1;
    }
    std::string line;
    if (!std::getline(in, line)) {
        std::cerr << "empty curves file\n";
        return 1;
    }
    struct Key {
        std::string scenario, method, metric;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, CurveSeries> series;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string sc, method, met, t_str, v_str;
        if (!std::getline(ss, sc, ',') || !std::getline(ss, method, ',') ||
            !std::getline(ss, met, ',') || !std::getline(ss, t_str, ',') ||
            !std::getline(ss, v_str))
            continue;
        if (scenario.empty()) scenario = sc;
        if (metric.empty()) metric = met;
        if (sc != scenario || met != metric) continue;
        CurveSeries& s = series[{sc, method, met}];
        s.label = method;
        s.xs.push_back(std::stod(t_str));
        s.ys.push_back(std::stod(v_str));
    }
    if (series.empty()) {
        std::cerr << "no matching rows for scenario=" << scenario << " metric=" << metric << "\n";
        return 1;
    }
    std::vector<CurveSeries> list;
    for (auto& [k, s] : series) list.push_back(std::move(s));
    render_curves_svg(list, out_path, scenario + ": " + metric, "t", metric);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lassolab experiment runner"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run an experiment from a JSON config (or a manifest)");
    std::string config_path;
    run->add_option("--config", config_path, "config JSON path")->required();

    // preset
    auto* preset = app.add_subcommand("preset", "run a named preset");
    std::string preset_name;
    PresetOverrides ov;
    std::size_t ov_reps = 0, ov_T = 0, ov_jobs = 0;
    std::uint64_t ov_seed = 0;
    std::string ov_out;
    preset->add_option("name", preset_name, "preset name");
    preset->add_option("--reps", ov_reps, "replication override");
    preset->add_option("--T", ov_T, "horizon override");
    preset->add_option("--seed", ov_seed, "base seed override");
    preset->add_option("--jobs", ov_jobs, "worker thread count");
    preset->add_option("--out", ov_out, "output directory");
    bool list_presets = false;
    preset->add_flag("--list", list_presets, "list preset names and exit");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "(C0, C0_hard) sensitivity sweep over a preset scenario");
    std::string sweep_preset, sweep_c0 = "1.0,1.6,2.0,2.6,3.0", sweep_c0h = "0.2,0.6,1.0,1.5,2.0";
    std::size_t sw_reps = 0, sw_T = 0, sw_jobs = 0;
    std::uint64_t sw_seed = 0;
    std::string sw_out;
    sweep->add_option("--preset", sweep_preset, "base scenario preset (seq-a..d, bandit-a..h)")
        ->required();
    sweep->add_option("--C0", sweep_c0, "comma-separated C0 grid");
    sweep->add_option("--C0h", sweep_c0h, "comma-separated C0_hard grid");
    sweep->add_option("--reps", sw_reps, "replication override");
    sweep->add_option("--T", sw_T, "horizon override");
    sweep->add_option("--seed", sw_seed, "base seed override");
    sweep->add_option("--jobs", sw_jobs, "worker thread count");
    sweep->add_option("--out", sw_out, "output directory");

    // fixtures
    auto* fixtures = app.add_subcommand("fixtures", "dump appendix constructions as CSV");
    fixtures->require_subcommand(1);
    auto* packing = fixtures->add_subcommand("packing", "sparse packing set");
    auto* omega1 = fixtures->add_subcommand("omega1", "prior samples");
    std::size_t fx_d = 100, fx_s = 5, fx_n = 1000;
    double fx_r = 1.0, fx_delta = 0.1;
    std::uint64_t fx_seed = 20250810;
    std::string fx_out = "out/fixtures";
    for (auto* sub : {packing, omega1}) {
        sub->add_option("--d", fx_d, "dimension");
        sub->add_option("--s", fx_s, "sparsity");
        sub->add_option("--r", fx_r, "radius");
        sub->add_option("--seed", fx_seed, "seed");
        sub->add_option("--out", fx_out, "output directory");
    }
    packing->add_option("--delta", fx_delta, "separation");
    omega1->add_option("--n", fx_n, "sample count");

    // plot
    auto* plot = app.add_subcommand("plot", "render curves.csv series as an SVG line chart");
    std::string plot_curves, plot_out = "fig.svg", plot_scenario, plot_metric;
    plot->add_option("--curves", plot_curves, "curves.csv path")->required();
    plot->add_option("--out", plot_out, "output SVG path");
    plot->add_option("--scenario", plot_scenario, "scenario filter (default: first seen)");
    plot->add_option("--metric", plot_metric, "metric filter (default: first seen)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentConfig cfg = config_from_json_file(config_path);
            ExperimentResult res = run_experiment(cfg);
            print_rows(res.table);
            std::cout << "manifest: " << res.manifest_path.string() << "\n";
            return 0;
        }
        if (preset->parsed()) {
            if (list_presets) {
                for (const std::string& n : preset_names()) std::cout << n << "\n";
                return 0;
            }
            if (preset_name.empty()) {
                std::cerr << "preset: name required (or --list)\n";
                return 2;
            }
            if (ov_reps) ov.reps = ov_reps;
            if (ov_T) ov.T = ov_T;
            if (ov_seed) ov.seed = ov_seed;
            if (ov_jobs) ov.parallel_jobs = ov_jobs;
            if (!ov_out.empty()) ov.output_dir = ov_out;
            PresetResult res = run_preset(preset_name, ov);
            for (const ExperimentResult& e : res.experiments) print_rows(e.table);
            std::cout << "table: " << res.table_csv.string() << "\n";
            return 0;
        }
        if (sweep->parsed()) {
            PresetOverrides sov;
            if (sw_reps) sov.reps = sw_reps;
            if (sw_T) sov.T = sw_T;
            if (sw_seed) sov.seed = sw_seed;
            if (sw_jobs) sov.parallel_jobs = sw_jobs;
            sov.output_dir = sw_out.empty() ? "out/sweep-" + sweep_preset : sw_out;
            ExperimentConfig base = expand_preset(sweep_preset, sov).front();
            base.output_dir = *sov.output_dir + "/cells";
            const SweepResult res =
                sensitivity_sweep(parse_grid(sweep_c0), parse_grid(sweep_c0h), base);
            for (const auto& row : res.cells) print_rows(row);
            if (!res.lasso_column.empty()) print_rows(res.lasso_column);
            const TableRow& best = res.cells[res.min_row][res.min_col];
            std::cout << "lowest mean: " << best.method << " -> " << best.agg.mean << "\n";
            return 0;
        }
        if (fixtures->parsed()) {
            ExperimentConfig cfg;
            cfg.kind = ExperimentKind::fixtures;
            cfg.label = packing->parsed() ? "packing" : "omega1";
            cfg.fixtures.what = cfg.label;
            cfg.fixtures.d = fx_d;
            cfg.fixtures.s = fx_s;
            cfg.fixtures.r = fx_r;
            cfg.fixtures.delta = fx_delta;
            cfg.fixtures.n = fx_n;
            cfg.fixture_seed = fx_seed;
            cfg.output_dir = fx_out;
            ExperimentResult res = run_experiment(cfg);
            print_rows(res.table);
            std::cout << "manifest: " << res.manifest_path.string() << "\n";
            return 0;
        }
        if (plot->parsed()) return cmd_plot(plot_curves, plot_out, plot_scenario, plot_metric);
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
