// Command-line surface: corrupt treebanks (strip/inject), train and run the
// reference parser, score, and orchestrate robustness experiments.

#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "punct/conll.hpp"
#include "punct/errors.hpp"
#include "punct/eval.hpp"
#include "punct/experiment.hpp"
#include "punct/parser.hpp"
#include "punct/perturb.hpp"

namespace {

using namespace punct;

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ContractViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

PunctClass punct_class_option(const std::string& value) {
    return punct_class_from_string(value);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"punctuation-robustness toolkit for dependency treebanks"};
    app.require_subcommand(1);

    std::string in_path, out_path, gold_path, system_path, model_path, config_path;
    std::string punct_class_name = "dots-commas";
    std::string mode_name = "standard";
    double chi = 0.0, delta = 0.0;
    std::uint64_t seed = 0;
    int epochs = 5;

    CLI::App* strip = app.add_subcommand("strip", "remove punctuation tokens");
    strip->add_option("input", in_path, "CoNLL input file")->required();
    strip->add_option("--out", out_path, "CoNLL output file")->required();
    strip->add_option("--punct-class", punct_class_name, "dots-commas|all");

    CLI::App* inject = app.add_subcommand("inject", "inject commas and dots");
    inject->add_option("input", in_path, "CoNLL input file")->required();
    inject->add_option("--out", out_path, "CoNLL output file")->required();
    inject->add_option("--chi", chi, "comma-injection probability");
    inject->add_option("--delta", delta, "dot-injection probability");
    inject->add_option("--seed", seed, "master random seed");

    std::string filter_name = "all";
    CLI::App* eval_cmd = app.add_subcommand("eval", "punctuation-excluded UAS/LAS");
    eval_cmd->add_option("gold", gold_path, "gold CoNLL file")->required();
    eval_cmd->add_option("system", system_path, "system CoNLL file")->required();
    eval_cmd->add_option("--punct-class", punct_class_name, "dots-commas|all");
    eval_cmd->add_option("--filter", filter_name,
                         "score only matching sentences: all|no-punct-5plus|multi-dot");
    eval_cmd->add_option("--out", out_path, "write the JSON report here");

    CLI::App* train_cmd = app.add_subcommand("train", "train the reference parser");
    train_cmd->add_option("input", in_path, "CoNLL training file")->required();
    train_cmd->add_option("--out", out_path, "model output file")->required();
    train_cmd->add_option("--mode", mode_name, "standard|nopunct");
    train_cmd->add_option("--epochs", epochs, "training epochs");
    train_cmd->add_option("--seed", seed, "shuffle seed");

    CLI::App* parse_cmd = app.add_subcommand("parse", "parse with a trained model");
    parse_cmd->add_option("model", model_path, "model file")->required();
    parse_cmd->add_option("input", in_path, "CoNLL input file")->required();
    parse_cmd->add_option("--out", out_path, "CoNLL output file")->required();

    CLI::App* experiment = app.add_subcommand("experiment", "run a robustness experiment");
    experiment->add_option("config", config_path, "experiment config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (strip->parsed()) {
        return run_guarded([&] {
            Document doc = read_conll_file(in_path);
            auto [stripped, stats] = strip_document(doc, punct_class_option(punct_class_name));
            write_conll_file(stripped, out_path);
            std::cout << "removed " << stats.removed_tokens << " punctuation tokens, lifted "
                      << stats.lifted_dependents << " dependents\n";
        });
    }
    if (inject->parsed()) {
        return run_guarded([&] {
            if (chi < 0.0 || chi > 1.0 || delta < 0.0 || delta > 1.0) {
                throw UsageError("--chi and --delta must lie in [0,1]");
            }
            Document doc = read_conll_file(in_path);
            PerturbConfig config;
            config.chi = chi;
            config.delta = delta;
            config.master_seed = seed;
            auto [injected, stats] = inject_document(doc, config);
            write_conll_file(injected, out_path);
            std::cout << "injected " << stats.injected_tokens << " tokens ("
                      << stats.injected_commas << " commas, " << stats.injected_dots
                      << " dots); " << stats.sentences_made_nonprojective
                      << " sentences turned non-projective\n";
        });
    }
    if (eval_cmd->parsed()) {
        return run_guarded([&] {
            const PunctClass pc = punct_class_option(punct_class_name);
            const SentenceFilter filter = sentence_filter_from_string(filter_name);
            Document gold = read_conll_file(gold_path);
            Document system = read_conll_file(system_path);
            if (filter != SentenceFilter::All) {
                auto [g, s] = filter_pairs(gold, system, filter, pc);
                gold = std::move(g);
                system = std::move(s);
                std::cout << "filter kept " << gold.sentences.size() << " sentences\n";
            }
            EvalReport report = attachment_scores(gold, system, pc);
            std::cout << "UAS " << report.uas << "\nLAS " << report.las << "\nscored "
                      << report.scored_tokens << " tokens\n";
            if (!out_path.empty()) {
                nlohmann::json j{{"uas", report.uas},
                                 {"las", report.las},
                                 {"scored_tokens", report.scored_tokens}};
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw DataError("cannot open " + out_path + " for writing");
                out << j.dump(2) << "\n";
            }
        });
    }
    if (train_cmd->parsed()) {
        return run_guarded([&] {
            if (epochs < 1) throw UsageError("--epochs must be >= 1");
            Document doc = read_conll_file(in_path);
            ParserModel model =
                train({doc}, epochs, mode_from_string(mode_name), seed);
            save_model_file(model, out_path);
            std::cout << "trained " << to_string(model.mode) << " model: " << epochs
                      << " epochs, " << model.label_set.size() << " labels, "
                      << model.weights.size() << " features; skipped "
                      << model.meta.skipped_nonprojective << " non-projective";
            if (model.meta.skipped_unstrippable > 0) {
                std::cout << ", " << model.meta.skipped_unstrippable << " unstrippable";
            }
            std::cout << " sentences\n";
        });
    }
    if (parse_cmd->parsed()) {
        return run_guarded([&] {
            ParserModel model = load_model_file(model_path);
            Document doc = read_conll_file(in_path);
            Document parsed = parse_document(model, doc);
            write_conll_file(parsed, out_path);
            std::cout << "parsed " << parsed.sentences.size() << " sentences\n";
        });
    }
    if (experiment->parsed()) {
        return run_guarded([&] {
            std::string config_hash;
            ExperimentConfig config = read_experiment_config(config_path, &config_hash);
            run_experiment(config, config_hash, std::cout);
        });
    }
    return 0;
}
