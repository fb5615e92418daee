#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lumpbn/lumping.hpp"
#include "lumpbn/markov.hpp"
#include "lumpbn/model.hpp"

namespace lumpbn {

// Optional Markov section of a model file.
struct MarkovSpec {
    std::vector<StochasticMatrix> matrices;  // one entry = homogeneous chain
    std::vector<Rational> initial;
    int horizon = 0;
};

// In-memory form of a model file. Probabilities are "p/q" strings on disk;
// parsing validates the full schema and reports JSON-pointer-style paths.
struct ModelFile {
    BayesNet net;
    std::optional<Lumping> lumping;
    std::optional<MarkovSpec> markov;
};

ModelFile parse_model(const nlohmann::json& doc);
ModelFile load_model(const std::string& path);
nlohmann::json serialize_model(const BayesNet& net,
                               const Lumping* lumping = nullptr);

// Whitespace matrix convenience format: one row per line of p/q tokens;
// states named a1..ak.
StochasticMatrix parse_matrix_text(const std::string& text);

// "a1:b1,a2:b1,a3:b2"
std::map<std::string, std::string> parse_lumping_arg(const std::string& arg);

// "1/3,1/3,1/3"
std::vector<Rational> parse_vector_arg(const std::string& arg);

}  // namespace lumpbn
