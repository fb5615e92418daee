#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lumpbn/checkers.hpp"
#include "lumpbn/errors.hpp"
#include "lumpbn/io.hpp"
#include "lumpbn/markov.hpp"
#include "lumpbn/search.hpp"

namespace {

using nlohmann::json;

// Stable exit codes: 0 holds, 1 fails, 2 inconclusive, 64 input error,
// 65 budget exceeded, 70 internal inconsistency.
constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInput = 64;
constexpr int kExitBudget = 65;
constexpr int kExitInternal = 70;

int verdict_exit(lumpbn::Verdict v) {
    switch (v) {
        case lumpbn::Verdict::holds: return kExitHolds;
        case lumpbn::Verdict::fails: return kExitFails;
        case lumpbn::Verdict::inconclusive: return kExitInconclusive;
    }
    return kExitInternal;
}

void render(const lumpbn::CheckReport& rep, const std::string& format) {
    if (format == "json") {
        std::cout << rep.to_json().dump(2) << "\n";
    } else {
        std::cout << rep.to_text();
    }
}

lumpbn::Lumping resolve_lumping(const lumpbn::ModelFile& file,
                                const std::string& lumping_arg) {
    if (!lumping_arg.empty()) {
        return lumpbn::Lumping::shared(file.net.alphabets,
                                       lumpbn::parse_lumping_arg(lumping_arg));
    }
    if (file.lumping) return *file.lumping;
    throw lumpbn::InputError("--lumping",
                             "no lumping in the model file and none given");
}

int cmd_check(const std::string& path, const std::string& property,
              const std::string& format, const std::string& lumping_arg,
              bool emit_dot) {
    const lumpbn::ModelFile file = lumpbn::load_model(path);
    if (emit_dot) std::cout << file.net.dag.to_dot();
    const lumpbn::Lumping lump = resolve_lumping(file, lumping_arg);

    if (property == "all") {
        const auto reports = lumpbn::check_all(file.net, lump);
        lumpbn::Verdict worst = lumpbn::Verdict::holds;
        std::string summary = "summary:";
        for (const auto& rep : reports) {
            render(rep, format);
            summary += " " + rep.property + "=" + lumpbn::to_string(rep.verdict);
            if (rep.property == "D1" || rep.property == "D2" ||
                rep.property == "D3") {
                if (rep.fails()) worst = lumpbn::Verdict::fails;
                else if (rep.verdict == lumpbn::Verdict::inconclusive &&
                         worst == lumpbn::Verdict::holds) {
                    worst = lumpbn::Verdict::inconclusive;
                }
            }
        }
        // Lemma strength_Ds cross-check happened inside check_all.
        std::cout << summary << " (D3 => D2 => D1 verified)\n";
        return verdict_exit(worst);
    }

    lumpbn::CheckReport rep;
    if (property == "d1") rep = lumpbn::check_d1(file.net, lump);
    else if (property == "d2") rep = lumpbn::check_d2_exact(file.net, lump);
    else if (property == "d3") rep = lumpbn::check_d3(file.net, lump);
    else if (property == "ks") rep = lumpbn::check_kemeny_snell(file.net, lump);
    else throw lumpbn::InputError("--property", "unknown property " + property);
    render(rep, format);
    return verdict_exit(rep.verdict);
}

int cmd_search(const std::string& path, const std::string& property,
               bool shared, int max_classes, bool include_trivial) {
    const lumpbn::ModelFile file = lumpbn::load_model(path);
    lumpbn::EnumerateOptions eopts;
    eopts.include_trivial = include_trivial;
    if (max_classes > 0) eopts.max_classes = max_classes;

    auto lumping_json = [&](const lumpbn::Lumping& l) {
        return lumpbn::serialize_model(file.net, &l)["lumping"];
    };

    if (property.empty()) {
        // enumeration only: one candidate per line
        for (const auto& l : lumpbn::enumerate_lumpings(file.net, shared, eopts)) {
            json line;
            line["lumping"] = lumping_json(l);
            std::cout << line.dump() << "\n";
        }
        return kExitHolds;
    }
    lumpbn::Property prop;
    if (property == "d1") prop = lumpbn::Property::D1;
    else if (property == "d2") prop = lumpbn::Property::D2;
    else if (property == "d3") prop = lumpbn::Property::D3;
    else if (property == "ks") prop = lumpbn::Property::KS;
    else throw lumpbn::InputError("--property", "unknown property " + property);

    const auto found =
        lumpbn::search_valid_lumpings(file.net, prop, shared, eopts);
    for (const auto& [l, rep] : found) {
        json line;
        line["lumping"] = lumping_json(l);
        line["report"] = rep.to_json();
        std::cout << line.dump() << "\n";
    }
    return found.empty() ? kExitInconclusive : kExitHolds;
}

int cmd_markov(const std::string& path, const std::string& initial_arg,
               int horizon, const std::string& lumping_arg,
               const std::string& mode, const std::string& format) {
    std::ifstream in(path);
    if (!in) throw lumpbn::InputError(path, "cannot open file");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    const lumpbn::StochasticMatrix p = lumpbn::parse_matrix_text(text);
    const lumpbn::Lumping lump = lumpbn::Lumping::shared(
        {p.states}, lumpbn::parse_lumping_arg(lumping_arg));

    lumpbn::CheckReport rep;
    if (mode == "strong") {
        rep = lumpbn::strong_lumpability(p, lump);
    } else if (mode == "weak") {
        if (initial_arg.empty()) {
            throw lumpbn::InputError("--initial", "required for weak mode");
        }
        rep = lumpbn::weak_lumpability_horizon(
            p, lumpbn::parse_vector_arg(initial_arg), lump, horizon);
    } else {
        throw lumpbn::InputError("--mode", "expected strong or weak");
    }
    render(rep, format);
    return verdict_exit(rep.verdict);
}

int cmd_witness(const std::string& path, const std::string& lumping_arg,
                int attempts, std::uint64_t seed, const std::string& out_path) {
    std::ifstream in(path);
    if (!in) throw lumpbn::InputError(path, "cannot open file");
    json doc;
    in >> doc;
    if (!doc.contains("vertices") || !doc.contains("edges") ||
        !doc.contains("alphabet")) {
        throw lumpbn::InputError(path, "need vertices, edges, alphabet");
    }
    std::vector<std::string> names = doc["vertices"].get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : doc["edges"]) {
        edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    const lumpbn::Dag dag(names, edges);
    lumpbn::Alphabet alphabet;
    alphabet.symbols = doc["alphabet"].get<std::vector<std::string>>();
    const lumpbn::Lumping lump = lumpbn::Lumping::shared(
        std::vector<lumpbn::Alphabet>(names.size(), alphabet),
        lumpbn::parse_lumping_arg(lumping_arg));

    lumpbn::CounterexampleOptions opts;
    opts.attempts = attempts;
    opts.seed = seed;
    const auto found = lumpbn::find_d1_counterexample(dag, alphabet, lump, opts);
    if (!found) {
        std::cerr << "no counterexample in " << attempts << " attempts\n";
        return kExitInconclusive;
    }
    const json model = lumpbn::serialize_model(found->first, &lump);
    if (out_path.empty()) {
        std::cout << model.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << model.dump(2) << "\n";
        std::cout << "counterexample written to " << out_path << "\n";
    }
    std::cout << found->second.to_text();
    return kExitHolds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact lumpability checks for discrete Bayesian networks"};
    app.require_subcommand(1);

    std::string model_path, property = "all", format = "text", lumping_arg;
    bool emit_dot = false;
    auto* check = app.add_subcommand("check", "check D1/D2/D3/KS for a model file");
    check->add_option("model", model_path, "model JSON file")->required();
    check->add_option("--property", property, "d1|d2|d3|ks|all");
    check->add_option("--format", format, "json|text");
    check->add_option("--lumping", lumping_arg, "shared map a1:b1,a2:b1,...");
    check->add_flag("--emit-dot", emit_dot, "print the DAG in DOT first");

    std::string s_path, s_property;
    bool s_shared = true, s_trivial = false;
    int s_max_classes = 0;
    auto* search = app.add_subcommand("search", "enumerate/search lumpings (JSON lines)");
    search->add_option("model", s_path, "model JSON file")->required();
    search->add_option("--property", s_property, "d1|d2|d3|ks (omit to enumerate)");
    search->add_flag("--shared,!--per-vertex", s_shared, "shared-alphabet partitions");
    search->add_option("--max-classes", s_max_classes, "cap on target classes");
    search->add_flag("--include-trivial", s_trivial, "include the identity lumping");

    std::string m_path, m_initial, m_lumping, m_mode = "strong", m_format = "text";
    int m_horizon = 2;
    auto* markov = app.add_subcommand("markov", "lumpability of a transition matrix");
    markov->add_option("matrix", m_path, "whitespace matrix file (states a1..ak)")->required();
    markov->add_option("--initial", m_initial, "initial distribution 1/2,1/2,...");
    markov->add_option("--horizon", m_horizon, "unrolling horizon (weak mode)");
    markov->add_option("--lumping", m_lumping, "state map a1:b1,...")->required();
    markov->add_option("--mode", m_mode, "strong|weak");
    markov->add_option("--format", m_format, "json|text");

    std::string w_path, w_lumping, w_out;
    int w_attempts = 1000;
    std::uint64_t w_seed = 1;
    auto* witness = app.add_subcommand("witness", "search for a random D1 counterexample");
    witness->add_option("dag", w_path, "JSON with vertices, edges, alphabet")->required();
    witness->add_option("--lumping", w_lumping, "shared map a1:b1,...")->required();
    witness->add_option("--attempts", w_attempts, "sampling attempts");
    witness->add_option("--seed", w_seed, "RNG seed")->required();
    witness->add_option("--out", w_out, "write the counterexample model here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) return cmd_check(model_path, property, format, lumping_arg, emit_dot);
        if (*search) return cmd_search(s_path, s_property, s_shared, s_max_classes, s_trivial);
        if (*markov) return cmd_markov(m_path, m_initial, m_horizon, m_lumping, m_mode, m_format);
        if (*witness) return cmd_witness(w_path, w_lumping, w_attempts, w_seed, w_out);
    } catch (const lumpbn::InternalInconsistency& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kExitInternal;
    } catch (const lumpbn::ModelTooLarge& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const lumpbn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
