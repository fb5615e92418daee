#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "lumpbn/rational.hpp"

namespace lumpbn {

enum class Verdict { holds, fails, inconclusive };

std::string to_string(Verdict v);

// Structured counterexample. `lhs` and `rhs` are the two sides of the
// violated equation, exact; `detail` carries the assignments and initial
// distributions needed to re-evaluate them independently.
struct Witness {
    std::string vertex;
    Rational lhs = 0;
    Rational rhs = 0;
    nlohmann::json detail;
};

struct CheckReport {
    std::string property;
    Verdict verdict = Verdict::inconclusive;
    std::optional<Witness> witness;
    std::string certificate;
    nlohmann::json extra;  // quotient matrices, extracted tables, flags
    std::uint64_t instances_checked = 0;

    bool holds() const { return verdict == Verdict::holds; }
    bool fails() const { return verdict == Verdict::fails; }

    nlohmann::json to_json() const;
    std::string to_text() const;
};

}  // namespace lumpbn
