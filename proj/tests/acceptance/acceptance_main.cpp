// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Uses the bundled treebank under data/.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "punct/conll.hpp"
#include "punct/errors.hpp"
#include "punct/eval.hpp"
#include "punct/experiment.hpp"
#include "punct/parser.hpp"
#include "punct/perturb.hpp"
#include "punct/rng.hpp"
#include "../testutil.hpp"

using namespace punct;

namespace {

#ifndef PUNCT_REPO_DIR
#define PUNCT_REPO_DIR "."
#endif

const std::string kRepoDir = PUNCT_REPO_DIR;
const std::string kTrainPath = kRepoDir + "/data/train.conllu";
const std::string kTestPath = kRepoDir + "/data/test.conllu";

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure(msg);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

void criterion_metric_reproduction(std::ostream& note) {
    struct Cell {
        double bl, sys, expected;
    };
    // published no-punct column and the delta=0.1/chi=0.1 column
    const std::vector<Cell> cells = {
        {0.918, 0.869, 0.598}, {0.910, 0.865, 0.500}, {0.858, 0.805, 0.373},
        {0.894, 0.852, 0.396}, {0.870, 0.816, 0.415}, {0.898, 0.898, 0.000},
        {0.904, 0.847, 0.594}, {0.917, 0.871, 0.554},

        {0.918, 0.794, 1.512}, {0.910, 0.779, 1.456}, {0.858, 0.675, 1.289},
        {0.894, 0.802, 0.868}, {0.870, 0.688, 1.400}, {0.898, 0.898, 0.000},
        {0.904, 0.748, 1.625}, {0.917, 0.793, 1.494},
    };
    for (const Cell& c : cells) {
        const double got = relative_error_increase(c.bl, c.sys);
        require(std::abs(got - c.expected) <= 0.0015,
                "cell (" + fmt(c.bl) + ", " + fmt(c.sys) + ") gave " + fmt(got) +
                    ", expected " + fmt(c.expected));
    }
    note << cells.size() << "/16 cells within +/-0.0015";
}

// ---------------------------------------------------------------- criterion 2

void criterion_perturbation_properties(std::ostream& note) {
    const int kSentences = 10000;
    Rng gen(0xACCE5501);
    Document gold;
    gold.sentences.reserve(kSentences);
    long total_nodes = 0;
    for (int i = 0; i < kSentences; ++i) {
        const int n = 1 + static_cast<int>(gen.below(40));
        gold.sentences.push_back(testutil::random_projective_tree(gen, n, 0.12));
        total_nodes += n;
    }

    // stripped copy once; the strip(inject(s)) == strip(s) baseline
    std::vector<Sentence> strip_of_gold;
    strip_of_gold.reserve(gold.sentences.size());
    Document stripped_doc;
    for (const Sentence& s : gold.sentences) {
        auto [st, log] = strip_punct(s, PunctClass::DotsAndCommas);
        require(validate(st).ok(), "strip output failed validation");
        strip_of_gold.push_back(st);
        stripped_doc.sentences.push_back(std::move(st));
    }
    EvalReport strip_eval = attachment_scores(gold, stripped_doc, PunctClass::DotsAndCommas);
    require(strip_eval.las == 1.0,
            "gold vs stripped gold LAS " + fmt(strip_eval.las) + " != 1.0");

    const double rates[3][2] = {{0.01, 0.01}, {0.05, 0.05}, {0.1, 0.1}};
    for (int r = 0; r < 3; ++r) {
        PerturbConfig config;
        config.chi = rates[r][0];
        config.delta = rates[r][1];
        config.master_seed = 0xBEEF00 + static_cast<std::uint64_t>(r);
        Document injected;
        injected.sentences.reserve(gold.sentences.size());
        long injected_count = 0;
        for (size_t i = 0; i < gold.sentences.size(); ++i) {
            auto [sent, log] = inject_punct(gold.sentences[i], config, i);
            require(validate(sent).ok(), "inject output failed validation");
            injected_count += static_cast<long>(log.injected.size());
            auto [strip_again, log2] = strip_punct(sent, PunctClass::DotsAndCommas);
            require(strip_again == strip_of_gold[i],
                    "strip(inject(s)) != strip(s) at sentence " + std::to_string(i + 1));
            injected.sentences.push_back(std::move(sent));
        }
        const double p = config.chi + config.delta;
        const double mean = static_cast<double>(total_nodes) * p;
        const double se = std::sqrt(static_cast<double>(total_nodes) *
                                    (config.chi * (1 - config.chi) +
                                     config.delta * (1 - config.delta)));
        require(std::abs(static_cast<double>(injected_count) - mean) <= 3.0 * se,
                "injected count " + std::to_string(injected_count) + " outside 3 SE of " +
                    fmt(mean));
        EvalReport inj_eval = attachment_scores(gold, injected, PunctClass::DotsAndCommas);
        require(inj_eval.las == 1.0, "gold vs injected gold LAS != 1.0");
    }
    note << kSentences << " sentences, 3 rate pairs";
}

// ---------------------------------------------------------------- criterion 3

void criterion_nonprojectivity(std::ostream& note) {
    Sentence s = testutil::make_sentence({{"big", "ADJ", 2, "amod"},
                                          {"dogs", "NOUN", 3, "nsubj"},
                                          {"bark", "VERB", 0, "root"}});
    auto [forced, forced_log] = apply_injections(s, {{1, Injection::Kind::DotAfter}});
    require(forced_log.made_nonprojective,
            "forced dot after \"big\" did not create crossing arcs");

    PerturbConfig config;
    config.chi = 0.0;
    config.delta = 1.0;
    config.master_seed = 5;
    auto [all_dots, log] = inject_punct(s, config);
    require(log.made_nonprojective, "delta=1 injection did not create crossing arcs");

    Rng rng(0xC40551);
    long disagreements = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        const int n = 1 + static_cast<int>(rng.below(12));
        Sentence t = testutil::random_tree(rng, n, 0.15, true);
        auto ours = crossing_arc_pairs(t);
        auto brute = testutil::bruteforce_crossing_pairs(t);
        if (ours != brute) ++disagreements;
        if (is_projective(t) != testutil::descendant_oracle_projective(t)) ++disagreements;
        if (ours.empty() != is_projective(t)) ++disagreements;
    }
    require(disagreements == 0,
            std::to_string(disagreements) + " oracle disagreements on random trees");
    note << "made_nonprojective set; 1000 trees, 0 disagreements";
}

// ---------------------------------------------------------------- criterion 4

void criterion_oracle_soundness(std::ostream& note) {
    long projective_checked = 0;
    const char* labels[] = {"la", "lb", "lc"};
    for (int n = 1; n <= 5; ++n) {
        std::vector<int> heads(static_cast<size_t>(n), 0);
        while (true) {
            Sentence s;
            for (int i = 0; i < n; ++i) {
                Token t;
                t.id = i + 1;
                t.form = "w" + std::to_string(i + 1);
                t.upos = "X";
                t.head = heads[static_cast<size_t>(i)];
                t.deprel = labels[i % 3];
                s.tokens.push_back(std::move(t));
            }
            if (validate(s).ok() && is_projective(s)) {
                auto arcs = replay_transitions(n, oracle_transitions(s));
                std::sort(arcs.begin(), arcs.end());
                auto gold = gold_arcs(s);
                std::sort(gold.begin(), gold.end());
                require(arcs == gold, "oracle replay mismatch on an enumerated tree");
                ++projective_checked;
            }
            int pos = 0;
            while (pos < n) {
                if (++heads[static_cast<size_t>(pos)] <= n) break;
                heads[static_cast<size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == n) break;
        }
    }

    Document test_doc = read_conll_file(kTestPath);
    long corpus_checked = 0;
    for (const Sentence& s : test_doc.sentences) {
        if (!is_projective(s)) continue;
        auto arcs = replay_transitions(s.size(), oracle_transitions(s));
        std::sort(arcs.begin(), arcs.end());
        auto gold = gold_arcs(s);
        std::sort(gold.begin(), gold.end());
        require(arcs == gold, "oracle replay mismatch on the test corpus");
        ++corpus_checked;
    }
    note << projective_checked << " enumerated trees (n<=5), " << corpus_checked
         << " corpus sentences";
}

// ------------------------------------------------------------- criteria 5 & 6

struct DeskScale {
    Document train_doc;
    Document test_doc;
    Document stripped_test;
    // per rate pair, per seed
    std::vector<std::vector<Document>> injected_tests;
    const double rates[3][2] = {{0.01, 0.01}, {0.05, 0.05}, {0.1, 0.1}};
    const std::uint64_t seeds[5] = {101, 102, 103, 104, 105};

    DeskScale() {
        train_doc = read_conll_file(kTrainPath);
        test_doc = read_conll_file(kTestPath);
        stripped_test = strip_document(test_doc, PunctClass::DotsAndCommas).first;
        injected_tests.resize(3);
        for (int r = 0; r < 3; ++r) {
            for (int s = 0; s < 5; ++s) {
                PerturbConfig config;
                config.chi = rates[r][0];
                config.delta = rates[r][1];
                config.master_seed = seeds[s];
                injected_tests[static_cast<size_t>(r)].push_back(
                    inject_document(test_doc, config).first);
            }
        }
    }
};

const DeskScale& desk() {
    static DeskScale instance;
    return instance;
}

void criterion_desk_scale(std::ostream& note) {
    const DeskScale& d = desk();
    require(d.train_doc.sentences.size() >= 2000,
            "bundled training corpus is too small");
    ParserModel model = train({d.train_doc}, 8, Mode::Standard, 1);

    const EvalReport baseline = attachment_scores(
        d.test_doc, parse_document(model, d.test_doc), PunctClass::DotsAndCommas);
    const EvalReport stripped = attachment_scores(
        d.test_doc, parse_document(model, d.stripped_test), PunctClass::DotsAndCommas);
    require(baseline.las - stripped.las >= 0.010,
            "stripped-test LAS drop " + fmt(baseline.las - stripped.las) +
                " is below 1.0 absolute point");

    double avg[3] = {0, 0, 0};
    for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 5; ++s) {
            const EvalReport rep = attachment_scores(
                d.test_doc,
                parse_document(model, d.injected_tests[static_cast<size_t>(r)][static_cast<size_t>(s)]),
                PunctClass::DotsAndCommas);
            avg[r] += rep.las;
        }
        avg[r] /= 5.0;
    }
    require(avg[0] >= avg[1] && avg[1] >= avg[2],
            "injected-test LAS is not monotone: " + fmt(avg[0]) + ", " + fmt(avg[1]) +
                ", " + fmt(avg[2]));
    note << "baseline " << fmt(baseline.las) << ", stripped " << fmt(stripped.las)
         << ", injected " << fmt(avg[0]) << "/" << fmt(avg[1]) << "/" << fmt(avg[2]);
}

void criterion_nopunct_invariance(std::ostream& note) {
    const DeskScale& d = desk();
    ParserModel model = train({d.train_doc}, 8, Mode::NoPunct, 1);

    const EvalReport baseline = attachment_scores(
        d.test_doc, parse_document(model, d.test_doc), PunctClass::DotsAndCommas);
    require(baseline.las < 1.0, "NoPunct baseline is perfect; metric undefined");

    std::vector<double> las_values;
    las_values.push_back(attachment_scores(d.test_doc,
                                           parse_document(model, d.stripped_test),
                                           PunctClass::DotsAndCommas)
                             .las);
    for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 5; ++s) {
            las_values.push_back(
                attachment_scores(
                    d.test_doc,
                    parse_document(model, d.injected_tests[static_cast<size_t>(r)][static_cast<size_t>(s)]),
                    PunctClass::DotsAndCommas)
                    .las);
        }
    }
    for (double las : las_values) {
        require(las == baseline.las,
                "NoPunct LAS " + fmt(las) + " differs from baseline " + fmt(baseline.las));
        require(relative_error_increase(baseline.las, las) == 0.0,
                "NoPunct relative error increase is not exactly 0.0");
    }
    note << "LAS bitwise identical across " << las_values.size() + 1
         << " conditions (" << fmt(baseline.las) << ")";
}

// ---------------------------------------------------------------- criterion 7

void criterion_reproducibility(std::ostream& note) {
    ExperimentConfig config;
    config.train_path = kTrainPath;
    config.test_path = kTestPath;
    config.seed = 77;
    config.epochs = 2;
    config.conditions = {{"no_punct", true, 0.0, 0.0},
                         {"inject_low", false, 0.01, 0.01},
                         {"inject_high", false, 0.1, 0.1}};
    config.modes = {Mode::Standard, Mode::NoPunct};

    const auto out_a = std::filesystem::temp_directory_path() / "punct-accept-a";
    const auto out_b = std::filesystem::temp_directory_path() / "punct-accept-b";
    std::ostringstream log;
    config.out_dir = out_a.string();
    ExperimentOutput a = run_experiment(config, "selfhash", log);
    config.out_dir = out_b.string();
    ExperimentOutput b = run_experiment(config, "selfhash", log);
    require(a.reports_json == b.reports_json, "experiment reports differ between runs");
    require(a.reports_json.size() == 2, "expected one report per mode");
    std::filesystem::remove_all(out_a);
    std::filesystem::remove_all(out_b);

    for (const std::string& path : {kTrainPath, kTestPath}) {
        std::ifstream in(path, std::ios::binary);
        require(static_cast<bool>(in), "cannot open " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        Document doc = read_conll_file(path);
        require(to_conll_string(doc) == buf.str(),
                "CoNLL round-trip is not byte-identical for " + path);
    }
    note << "byte-identical reports and round-trips";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(std::ostream&)> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "metric reproduction", criterion_metric_reproduction},
        {2, "perturbation property suite", criterion_perturbation_properties},
        {3, "non-projectivity creation", criterion_nonprojectivity},
        {4, "oracle soundness", criterion_oracle_soundness},
        {5, "desk-scale directional replication", criterion_desk_scale},
        {6, "NoPunct invariance", criterion_nopunct_invariance},
        {7, "reproducibility", criterion_reproducibility},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::ostringstream note;
        try {
            c.body(note);
            std::cout << "[PASS] criterion " << c.id << ": " << c.title;
            if (!note.str().empty()) std::cout << " (" << note.str() << ")";
            std::cout << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "[FAIL] criterion " << c.id << ": " << c.title << " -- "
                      << e.what() << "\n";
        }
        std::cout.flush();
    }
    if (failures > 0) {
        std::cout << failures << " of " << criteria.size() << " criteria failed\n";
        return 1;
    }
    std::cout << "all " << criteria.size() << " criteria passed\n";
    return 0;
}
