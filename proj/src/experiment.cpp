#include "punct/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "punct/conll.hpp"
#include "punct/errors.hpp"
#include "punct/eval.hpp"
#include "punct/perturb.hpp"
#include "punct/rng.hpp"

namespace punct {

PunctClass punct_class_from_string(const std::string& name) {
    if (name == "dots-commas") return PunctClass::DotsAndCommas;
    if (name == "all") return PunctClass::AllPunct;
    throw UsageError("unknown punctuation class \"" + name +
                     "\" (expected dots-commas|all)");
}

std::string to_string(PunctClass punct_class) {
    return punct_class == PunctClass::DotsAndCommas ? "dots-commas" : "all";
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string part;
    while (in >> part) parts.push_back(part);
    return parts;
}

double parse_probability(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        if (v < 0.0 || v > 1.0) {
            throw UsageError(what + " must lie in [0,1], got " + s);
        }
        return v;
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError(what + " \"" + s + "\" is not a number");
    }
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig config;
    bool have_modes = false;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(line_no) +
                             ": expected key = value");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key == "train_path") {
            config.train_path = value;
        } else if (key == "test_path") {
            config.test_path = value;
        } else if (key == "seed") {
            config.seed = std::stoull(value);
        } else if (key == "epochs") {
            config.epochs = std::stoi(value);
        } else if (key == "strip_class") {
            config.strip_class = punct_class_from_string(value);
        } else if (key == "eval_class") {
            config.eval_class = punct_class_from_string(value);
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "modes") {
            config.modes.clear();
            have_modes = true;
            for (std::string& m : split_ws(value)) config.modes.push_back(mode_from_string(m));
        } else if (key == "condition") {
            std::vector<std::string> parts = split_ws(value);
            Condition cond;
            if (parts.size() == 1 && parts[0] == "no_punct") {
                cond.name = "no_punct";
                cond.is_no_punct = true;
            } else if (parts.size() == 3) {
                cond.name = parts[0];
                cond.chi = parse_probability(parts[1], "chi");
                cond.delta = parse_probability(parts[2], "delta");
            } else {
                throw UsageError("config line " + std::to_string(line_no) +
                                 ": condition must be \"no_punct\" or \"<name> <chi> <delta>\"");
            }
            config.conditions.push_back(std::move(cond));
        } else {
            throw UsageError("config line " + std::to_string(line_no) +
                             ": unknown key \"" + key + "\"");
        }
    }

    if (config.train_path.empty()) throw UsageError("config: train_path is required");
    if (config.test_path.empty()) throw UsageError("config: test_path is required");
    if (config.conditions.empty()) throw UsageError("config: at least one condition is required");
    if (config.epochs < 1) throw UsageError("config: epochs must be >= 1");
    if (have_modes && config.modes.empty()) throw UsageError("config: modes is empty");
    for (size_t i = 0; i < config.conditions.size(); ++i) {
        for (size_t j = i + 1; j < config.conditions.size(); ++j) {
            if (config.conditions[i].name == config.conditions[j].name) {
                throw UsageError("config: duplicate condition name \"" +
                                 config.conditions[i].name + "\"");
            }
        }
    }
    return config;
}

ExperimentConfig read_experiment_config(const std::string& path, std::string* config_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (config_hash) *config_hash = hex64(fnv1a64(text));
    return parse_experiment_config(text);
}

namespace {

nlohmann::json eval_json(const EvalReport& report) {
    return {{"uas", report.uas},
            {"las", report.las},
            {"scored_tokens", report.scored_tokens}};
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config,
                                const std::string& config_hash, std::ostream& log) {
    ExperimentOutput output;

    const Document train_doc = read_conll_file(config.train_path);
    const Document test_doc = read_conll_file(config.test_path);
    log << "loaded " << train_doc.sentences.size() << " training and "
        << test_doc.sentences.size() << " test sentences\n";

    // Perturbed test sets are shared across modes; every condition gets its
    // own injection seed derived from (master seed, condition name).
    struct PreparedCondition {
        const Condition* cond;
        Document doc;
        nlohmann::json counts;
    };
    std::vector<PreparedCondition> prepared;
    for (const Condition& cond : config.conditions) {
        PreparedCondition p;
        p.cond = &cond;
        if (cond.is_no_punct) {
            auto [doc, stats] = strip_document(test_doc, config.strip_class);
            p.doc = std::move(doc);
            p.counts = {{"removed_tokens", stats.removed_tokens},
                        {"lifted_dependents", stats.lifted_dependents}};
        } else {
            PerturbConfig pc;
            pc.chi = cond.chi;
            pc.delta = cond.delta;
            pc.master_seed = derive_seed(config.seed, fnv1a64(cond.name));
            auto [doc, stats] = inject_document(test_doc, pc);
            p.doc = std::move(doc);
            p.counts = {{"chi", cond.chi},
                        {"delta", cond.delta},
                        {"injected_tokens", stats.injected_tokens},
                        {"injected_commas", stats.injected_commas},
                        {"injected_dots", stats.injected_dots},
                        {"sentences_made_nonprojective", stats.sentences_made_nonprojective}};
        }
        prepared.push_back(std::move(p));
    }

    for (Mode mode : config.modes) {
        const std::string mode_name = to_string(mode);
        log << "training " << mode_name << " model (" << config.epochs << " epochs, seed "
            << config.seed << ")\n";
        ParserModel model;
        try {
            model = train({train_doc}, config.epochs, mode, config.seed);
        } catch (const Error& e) {
            throw DataError("stage train[" + mode_name + "]: " + e.what());
        }

        EvalReport baseline;
        std::map<std::string, EvalReport> condition_reports;
        try {
            baseline = attachment_scores(test_doc, parse_document(model, test_doc),
                                         config.eval_class);
            for (const PreparedCondition& p : prepared) {
                condition_reports[p.cond->name] = attachment_scores(
                    test_doc, parse_document(model, p.doc), config.eval_class);
            }
        } catch (const Error& e) {
            throw DataError("stage evaluate[" + mode_name + "]: " + e.what());
        }

        RobustnessReport robustness;
        try {
            robustness = robustness_report(baseline, condition_reports);
        } catch (const Error& e) {
            throw DataError("stage report[" + mode_name + "]: " + e.what());
        }

        nlohmann::json conditions_json(nlohmann::json::value_t::object);
        nlohmann::json rel_err_json(nlohmann::json::value_t::object);
        for (const PreparedCondition& p : prepared) {
            nlohmann::json c = eval_json(condition_reports.at(p.cond->name));
            c["counts"] = p.counts;
            conditions_json[p.cond->name] = std::move(c);
            rel_err_json[p.cond->name] = robustness.rel_err_increase.at(p.cond->name);
        }
        nlohmann::json report{
            {"toolkit_version", kToolkitVersion},
            {"config_hash", config_hash},
            {"mode", mode_name},
            {"seed", config.seed},
            {"epochs", config.epochs},
            {"strip_class", to_string(config.strip_class)},
            {"eval_class", to_string(config.eval_class)},
            {"train",
             {{"path", config.train_path},
              {"sentences", train_doc.sentences.size()},
              {"skipped_nonprojective", model.meta.skipped_nonprojective},
              {"skipped_unstrippable", model.meta.skipped_unstrippable}}},
            {"test", {{"path", config.test_path}, {"sentences", test_doc.sentences.size()}}},
            {"baseline", eval_json(baseline)},
            {"conditions", std::move(conditions_json)},
            {"rel_err_increase", std::move(rel_err_json)},
        };

        std::string json_text = report.dump(2) + "\n";
        std::string table = render_robustness_table(robustness);
        log << "[" << mode_name << "]\n" << table;

        std::filesystem::create_directories(config.out_dir);
        const std::string base =
            (std::filesystem::path(config.out_dir) / ("report_" + mode_name)).string();
        {
            std::ofstream out(base + ".json", std::ios::binary);
            if (!out) throw DataError("cannot open " + base + ".json for writing");
            out << json_text;
        }
        {
            std::ofstream out(base + ".txt", std::ios::binary);
            if (!out) throw DataError("cannot open " + base + ".txt for writing");
            out << table;
        }
        output.reports_json[mode_name] = std::move(json_text);
        output.tables[mode_name] = std::move(table);
    }
    return output;
}

}  // namespace punct
