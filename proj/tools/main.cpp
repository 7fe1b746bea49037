// gorec command line: synth, features, codebook, discover, recognize,
// evaluate, tune. Flat JSON config files; flags override file values.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gorec/dataset.hpp"
#include "gorec/discover.hpp"
#include "gorec/errors.hpp"
#include "gorec/eval.hpp"
#include "gorec/featsel.hpp"
#include "gorec/quantize.hpp"
#include "gorec/recognize.hpp"
#include "gorec/tune.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw gorec::validation_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw gorec::validation_error("cannot write " + path.string());
    out << text;
}

/// Pre-pass config loader: pull --config out of argv and return its JSON so
/// file values can seed the option defaults before CLI11 parses the flags.
json load_config(int argc, char** argv) {
    for (int i = 1; i < argc - 1; ++i)
        if (std::string(argv[i]) == "--config") {
            const auto parsed = json::parse(read_file(argv[i + 1]), nullptr, false);
            if (parsed.is_discarded() || !parsed.is_object())
                throw gorec::validation_error(std::string("config file is not a JSON object: ") +
                                              argv[i + 1]);
            return parsed;
        }
    return json::object();
}

template <typename T>
void from_config(const json& config, const char* key, T& target) {
    if (auto it = config.find(key); it != config.end()) target = it->get<T>();
}

gorec::TrainedArtifacts load_artifacts(const fs::path& dir) {
    gorec::TrainedArtifacts artifacts;
    artifacts.selection = gorec::FeatureSelection::from_json(read_file(dir / "selection.json"));
    artifacts.codebook = gorec::Codebook::from_json(read_file(dir / "codebook.json"));
    std::vector<fs::path> model_files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("model.", 0) == 0 && entry.path().extension() == ".json")
            model_files.push_back(entry.path());
    }
    std::sort(model_files.begin(), model_files.end());
    for (const auto& path : model_files)
        artifacts.models.push_back(gorec::GoalModel::from_json(read_file(path)));
    if (artifacts.models.empty())
        throw gorec::validation_error("no model.<goal>.json files in " + dir.string());
    return artifacts;
}

int run(int argc, char** argv) {
    const json config = load_config(argc, argv);

    CLI::App app{"Goal recognition over discretized motion traces"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Flat JSON config file; flags override its values");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic dataset CSV");
    gorec::SynthSpec spec;
    std::string synth_out = "dataset.csv";
    from_config(config, "goals", spec.goals);
    from_config(config, "traces-per-goal", spec.traces_per_goal);
    from_config(config, "features", spec.features);
    from_config(config, "regimes-per-goal", spec.regimes_per_goal);
    from_config(config, "noise", spec.noise);
    from_config(config, "seed", spec.seed);
    from_config(config, "informative-features", spec.informative_features);
    from_config(config, "out", synth_out);
    synth->add_option("--goals", spec.goals, "Number of goals")->capture_default_str();
    synth->add_option("--traces-per-goal", spec.traces_per_goal, "Traces per goal")
        ->capture_default_str();
    synth->add_option("--features", spec.features, "Feature columns")->capture_default_str();
    synth->add_option("--regimes-per-goal", spec.regimes_per_goal, "Hidden regimes per goal")
        ->capture_default_str();
    synth->add_option("--noise", spec.noise, "Gaussian noise std around regime means")
        ->capture_default_str();
    synth->add_option("--seed", spec.seed, "RNG seed (no entropy defaults)")
        ->capture_default_str();
    synth->add_option("--rows-min", spec.rows_per_regime_min, "Min rows per regime visit")
        ->capture_default_str();
    synth->add_option("--rows-max", spec.rows_per_regime_max, "Max rows per regime visit")
        ->capture_default_str();
    synth->add_option("--informative-features", spec.informative_features,
                      "Leading features with goal-specific regime means")
        ->capture_default_str();
    synth->add_option("--regime-spread", spec.regime_spread, "Std of regime mean placement")
        ->capture_default_str();
    synth->add_option("--out", synth_out, "Output CSV path")->capture_default_str();

    // shared pipeline knobs
    std::string data_path;
    gorec::PipelineConfig pipeline;
    std::string linkage = "average";
    int workers = 1;
    from_config(config, "data", data_path);
    from_config(config, "n-f", pipeline.n_f);
    from_config(config, "n-c", pipeline.n_c);
    from_config(config, "filter-threshold", pipeline.filter_threshold);
    from_config(config, "phi", pipeline.weights.phi);
    from_config(config, "delta", pipeline.weights.delta);
    from_config(config, "lambda", pipeline.weights.lambda);
    from_config(config, "beta", pipeline.weights.beta);
    from_config(config, "tie-epsilon", pipeline.weights.tie_epsilon);
    from_config(config, "obs-levels", pipeline.obs_levels);
    from_config(config, "pipeline-seed", pipeline.seed);
    from_config(config, "linkage", linkage);
    from_config(config, "normalize", pipeline.normalize);
    from_config(config, "kmeans-restarts", pipeline.kmeans_restarts);
    from_config(config, "lda-tail-rows", pipeline.lda_tail_rows);
    from_config(config, "subject", pipeline.subject);
    from_config(config, "workers", workers);

    auto add_data = [&](CLI::App* cmd) {
        cmd->add_option("--data", data_path, "Dataset CSV (trace, goal, feature columns)")
            ->required();
    };
    auto add_weights = [&](CLI::App* cmd) {
        cmd->add_option("--phi", pipeline.weights.phi, "Weight offset phi")
            ->capture_default_str();
        cmd->add_option("--delta", pipeline.weights.delta, "Positional exponent delta")
            ->capture_default_str();
        cmd->add_option("--lambda", pipeline.weights.lambda,
                        "Trailing-log penalty base lambda, >= 1")
            ->capture_default_str();
        cmd->add_option("--beta", pipeline.weights.beta, "Softmax scale beta, in (0, 1]")
            ->capture_default_str();
        cmd->add_option("--tie-epsilon", pipeline.weights.tie_epsilon,
                        "Posterior tie tolerance for the inferred set")
            ->capture_default_str();
    };

    // features
    auto* features = app.add_subcommand("features", "Fit and save the feature selection");
    std::string selection_out = "selection.json";
    from_config(config, "selection", selection_out);
    add_data(features);
    features->add_option("--n-f", pipeline.n_f, "Number of feature clusters / medoids")
        ->capture_default_str();
    features->add_option("--linkage", linkage, "Cluster linkage: single, complete, average")
        ->capture_default_str();
    features->add_option("--out", selection_out, "Output selection JSON")
        ->capture_default_str();

    // codebook
    auto* codebook_cmd = app.add_subcommand("codebook", "Fit and save the event codebook");
    std::string selection_in = "selection.json";
    std::string codebook_out = "codebook.json";
    from_config(config, "codebook", codebook_out);
    add_data(codebook_cmd);
    codebook_cmd->add_option("--selection", selection_in, "Feature selection JSON")
        ->capture_default_str();
    codebook_cmd->add_option("--n-c", pipeline.n_c, "Number of event clusters")
        ->capture_default_str();
    codebook_cmd->add_option("--seed", pipeline.seed, "k-means seed (no entropy defaults)")
        ->capture_default_str();
    codebook_cmd
        ->add_option("--kmeans-restarts", pipeline.kmeans_restarts, "k-means restarts")
        ->capture_default_str();
    codebook_cmd
        ->add_flag("--no-normalize", "Skip z-score normalization before k-means")
        ->capture_default_str();
    codebook_cmd->add_option("--out", codebook_out, "Output codebook JSON")
        ->capture_default_str();

    // discover
    auto* discover_cmd =
        app.add_subcommand("discover", "Build and save one goal model per goal");
    std::string codebook_in = "codebook.json";
    std::string models_dir = ".";
    std::string dot_dir;
    add_data(discover_cmd);
    discover_cmd->add_option("--selection", selection_in, "Feature selection JSON")
        ->capture_default_str();
    discover_cmd->add_option("--codebook", codebook_in, "Codebook JSON")
        ->capture_default_str();
    discover_cmd
        ->add_option("--filter-threshold", pipeline.filter_threshold,
                     "Drop arcs whose relative frequency is below this, in [0, 1)")
        ->capture_default_str();
    discover_cmd->add_option("--out-dir", models_dir, "Directory for model.<goal>.json files")
        ->capture_default_str();
    discover_cmd->add_option("--dot-dir", dot_dir,
                             "Also write Graphviz model.<goal>.dot files here");

    // recognize
    auto* recognize_cmd =
        app.add_subcommand("recognize", "Posterior over goals for observed prefixes");
    std::string prefix_path, artifacts_dir = ".", posterior_out;
    recognize_cmd
        ->add_option("--prefix", prefix_path, "CSV with the observed prefix trace(s)")
        ->required();
    recognize_cmd
        ->add_option("--artifacts", artifacts_dir,
                     "Directory holding selection.json, codebook.json, model.<goal>.json")
        ->capture_default_str();
    add_weights(recognize_cmd);
    recognize_cmd->add_option("--workers", workers, "Parallel alignment workers")
        ->capture_default_str();
    recognize_cmd->add_option("--out", posterior_out,
                              "Output JSON path (default: print to stdout)");

    // evaluate
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "Cross-validated evaluation report");
    std::string methods_csv = "pm,lda";
    std::string report_json = "report.json", summary_csv = "summary.csv",
                instances_csv = "instances.csv";
    from_config(config, "methods", methods_csv);
    add_data(evaluate_cmd);
    evaluate_cmd->add_option("--n-f", pipeline.n_f, "Number of selected features")
        ->capture_default_str();
    evaluate_cmd->add_option("--n-c", pipeline.n_c, "Number of event clusters")
        ->capture_default_str();
    evaluate_cmd
        ->add_option("--filter-threshold", pipeline.filter_threshold,
                     "Model arc frequency filter, in [0, 1)")
        ->capture_default_str();
    add_weights(evaluate_cmd);
    evaluate_cmd
        ->add_option("--obs-levels", pipeline.obs_levels,
                     "Observation fractions to score, each in (0, 1]")
        ->delimiter(',')
        ->capture_default_str();
    evaluate_cmd->add_option("--seed", pipeline.seed, "Pipeline seed (no entropy defaults)")
        ->capture_default_str();
    evaluate_cmd->add_option("--linkage", linkage, "single, complete, average")
        ->capture_default_str();
    evaluate_cmd
        ->add_option("--lda-tail-rows", pipeline.lda_tail_rows,
                     "Training rows taken from the end of each trace for LDA")
        ->capture_default_str();
    evaluate_cmd
        ->add_option("--kmeans-restarts", pipeline.kmeans_restarts, "k-means restarts")
        ->capture_default_str();
    evaluate_cmd->add_option("--subject", pipeline.subject, "Subject label for the report")
        ->capture_default_str();
    evaluate_cmd->add_option("--methods", methods_csv, "Comma list of methods: pm, lda")
        ->capture_default_str();
    evaluate_cmd->add_option("--workers", workers, "Parallel fold workers")
        ->capture_default_str();
    evaluate_cmd->add_option("--out-json", report_json, "Report JSON path")
        ->capture_default_str();
    evaluate_cmd->add_option("--out-summary", summary_csv, "Aggregate CSV path")
        ->capture_default_str();
    evaluate_cmd->add_option("--out-instances", instances_csv, "Per-instance CSV path")
        ->capture_default_str();

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "Structural grid search or weight LHS search");
    std::string tune_mode = "grid";
    std::vector<std::size_t> nf_values = {4, 8, 16};
    std::vector<std::size_t> nc_values = {8, 16};
    std::size_t lhs_samples = 20;
    std::uint64_t lhs_seed = 1;
    std::string tune_out = "tune.json", progress_path;
    from_config(config, "nf-values", nf_values);
    from_config(config, "nc-values", nc_values);
    add_data(tune_cmd);
    tune_cmd->add_option("--mode", tune_mode, "grid (over n-f, n-c) or weights (LHS)")
        ->check(CLI::IsMember({"grid", "weights"}))
        ->capture_default_str();
    tune_cmd->add_option("--nf-values", nf_values, "Grid values for the feature count")
        ->delimiter(',')
        ->capture_default_str();
    tune_cmd->add_option("--nc-values", nc_values, "Grid values for the cluster count")
        ->delimiter(',')
        ->capture_default_str();
    tune_cmd->add_option("--n-f", pipeline.n_f, "Feature count during weight tuning")
        ->capture_default_str();
    tune_cmd->add_option("--n-c", pipeline.n_c, "Cluster count during weight tuning")
        ->capture_default_str();
    tune_cmd
        ->add_option("--obs-levels", pipeline.obs_levels,
                     "Observation fractions to score, each in (0, 1]")
        ->delimiter(',')
        ->capture_default_str();
    tune_cmd->add_option("--samples", lhs_samples, "Latin hypercube sample count")
        ->capture_default_str();
    tune_cmd->add_option("--lhs-seed", lhs_seed, "Latin hypercube seed")
        ->capture_default_str();
    tune_cmd->add_option("--seed", pipeline.seed, "Pipeline seed (no entropy defaults)")
        ->capture_default_str();
    tune_cmd->add_option("--workers", workers, "Parallel configuration workers")
        ->capture_default_str();
    tune_cmd->add_option("--progress", progress_path,
                         "JSONL progress file for resuming interrupted searches");
    tune_cmd->add_option("--out", tune_out, "Result JSON path")->capture_default_str();

    for (auto* sub : {synth, features, codebook_cmd, discover_cmd, recognize_cmd, evaluate_cmd,
                      tune_cmd})
        sub->fallthrough();  // --config may appear after the subcommand name
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return 1;
    }
    pipeline.linkage = gorec::linkage_from_name(linkage);
    if (workers < 1) throw gorec::validation_error("--workers must be >= 1");

    if (synth->parsed()) {
        const auto dataset = gorec::synth_dataset(spec);
        gorec::save_dataset(dataset, synth_out);
        std::cout << "wrote " << synth_out << " (" << dataset.traces.size() << " traces, "
                  << dataset.feature_count << " features)\n";
        return 0;
    }

    if (features->parsed()) {
        const auto dataset = gorec::load_dataset(data_path);
        std::vector<std::size_t> all(dataset.traces.size());
        std::iota(all.begin(), all.end(), 0);
        const auto corr = gorec::correlation_matrix(gorec::pooled_rows(dataset, all));
        const auto selection = gorec::select_medoids(
            gorec::cluster_features(corr, pipeline.n_f, pipeline.linkage), corr);
        write_file(selection_out, selection.to_json());
        std::cout << "wrote " << selection_out << "\n";
        return 0;
    }

    if (codebook_cmd->parsed()) {
        const auto dataset = gorec::load_dataset(data_path);
        const auto selection =
            gorec::FeatureSelection::from_json(read_file(selection_in));
        std::vector<std::size_t> all(dataset.traces.size());
        std::iota(all.begin(), all.end(), 0);
        gorec::KMeansOptions options;
        options.restarts = pipeline.kmeans_restarts;
        options.normalize = codebook_cmd->count("--no-normalize") == 0;
        const auto codebook =
            gorec::fit_codebook(gorec::pooled_rows(dataset, all), selection.selected,
                                pipeline.n_c, pipeline.seed, options);
        write_file(codebook_out, codebook.to_json());
        std::cout << "wrote " << codebook_out << "\n";
        return 0;
    }

    if (discover_cmd->parsed()) {
        const auto dataset = gorec::load_dataset(data_path);
        const auto codebook = gorec::Codebook::from_json(read_file(codebook_in));
        const auto logs = gorec::discretize(dataset, codebook);
        for (const auto& goal : dataset.goals) {
            const auto model = gorec::build_model(logs.at(goal), pipeline.filter_threshold);
            write_file(fs::path(models_dir) / ("model." + goal + ".json"), model.to_json());
            if (!dot_dir.empty())
                write_file(fs::path(dot_dir) / ("model." + goal + ".dot"), model.to_dot());
        }
        std::cout << "wrote " << dataset.goals.size() << " goal models to " << models_dir
                  << "\n";
        return 0;
    }

    if (recognize_cmd->parsed()) {
        pipeline.weights.validate();
        const auto prefixes = gorec::load_dataset(prefix_path);
        const auto artifacts = load_artifacts(artifacts_dir);
        nlohmann::ordered_json out = nlohmann::ordered_json::object();
        for (const auto& trace : prefixes.traces) {
            const auto posterior =
                gorec::recognize(trace, artifacts, pipeline.weights, workers);
            out[trace.trace_id] = json::parse(posterior.to_json());
        }
        const auto text = out.dump(2) + "\n";
        if (posterior_out.empty())
            std::cout << text;
        else {
            write_file(posterior_out, text);
            std::cout << "wrote " << posterior_out << "\n";
        }
        return 0;
    }

    if (evaluate_cmd->parsed()) {
        pipeline.weights.validate();
        const auto dataset = gorec::load_dataset(data_path);
        std::vector<gorec::Method> methods;
        std::stringstream stream(methods_csv);
        for (std::string token; std::getline(stream, token, ',');)
            methods.push_back(gorec::method_from_name(token));
        if (methods.empty()) throw gorec::validation_error("--methods is empty");
        const auto report = gorec::cross_validate(dataset, pipeline, methods, workers);
        write_file(report_json, report.to_json());
        write_file(summary_csv, report.summary_csv());
        write_file(instances_csv, report.instances_csv());
        std::cout << report.summary_csv();
        return 0;
    }

    if (tune_cmd->parsed()) {
        const auto dataset = gorec::load_dataset(data_path);
        gorec::TuneResult result;
        if (tune_mode == "grid") {
            result = gorec::grid_search(dataset, nf_values, nc_values, pipeline, workers,
                                        progress_path);
        } else {
            const auto candidates = gorec::lhs_sample({}, lhs_samples, lhs_seed);
            result =
                gorec::tune_weights(dataset, candidates, pipeline, workers, progress_path);
        }
        write_file(tune_out, result.to_json());
        std::cout << "wrote " << tune_out << " (best F1 " << result.best_f1 << ")\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gorec::validation_error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "internal error: " << error.what() << "\n";
        return 2;
    }
}
