#ifndef PUNCT_EXPERIMENT_HPP
#define PUNCT_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "punct/parser.hpp"
#include "punct/tree.hpp"

namespace punct {

inline constexpr const char* kToolkitVersion = "0.1.0";

// One evaluation condition: either the distinguished "no_punct" stripping
// condition or an injection condition with rates (chi, delta).
struct Condition {
    std::string name;
    bool is_no_punct = false;
    double chi = 0.0;
    double delta = 0.0;
};

struct ExperimentConfig {
    std::string train_path;
    std::string test_path;
    std::vector<Condition> conditions;
    PunctClass strip_class = PunctClass::DotsAndCommas;  // for no_punct stripping
    PunctClass eval_class = PunctClass::DotsAndCommas;   // for scoring
    std::uint64_t seed = 0;
    int epochs = 5;
    std::vector<Mode> modes = {Mode::Standard, Mode::NoPunct};
    std::string out_dir = ".";
};

// Flat key/value format, one "key = value" per line, "#" comments, with one
// "condition = ..." line per condition ("no_punct", or "<name> <chi>
// <delta>"). Throws UsageError on malformed or inconsistent configs.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig read_experiment_config(const std::string& path,
                                        std::string* config_hash = nullptr);

struct ExperimentOutput {
    // mode name -> serialized JSON report / rendered table
    std::map<std::string, std::string> reports_json;
    std::map<std::string, std::string> tables;
};

// Trains the requested modes, evaluates the baseline and every condition,
// and writes report_<mode>.json / report_<mode>.txt under out_dir. Progress
// and the final tables go to `log`. Fully deterministic given the config.
ExperimentOutput run_experiment(const ExperimentConfig& config,
                                const std::string& config_hash, std::ostream& log);

PunctClass punct_class_from_string(const std::string& name);
std::string to_string(PunctClass punct_class);

}  // namespace punct

#endif  // PUNCT_EXPERIMENT_HPP
