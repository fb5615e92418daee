#include "lumpbn/report.hpp"

#include <sstream>

namespace lumpbn {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j;
    j["property"] = property;
    j["verdict"] = to_string(verdict);
    if (witness) {
        nlohmann::json w;
        w["vertex"] = witness->vertex;
        w["lhs"] = to_string(witness->lhs);
        w["rhs"] = to_string(witness->rhs);
        w["detail"] = witness->detail;
        j["witness"] = w;
    }
    if (!certificate.empty()) j["certificate"] = certificate;
    if (!extra.is_null()) j["extra"] = extra;
    j["instances_checked"] = instances_checked;
    return j;
}

std::string CheckReport::to_text() const {
    std::ostringstream os;
    os << property << ": " << to_string(verdict);
    if (!certificate.empty()) os << "  [" << certificate << "]";
    os << "\n";
    if (witness) {
        os << "  witness at " << witness->vertex << ": lhs = "
           << to_string(witness->lhs) << ", rhs = " << to_string(witness->rhs)
           << "\n";
        if (!witness->detail.is_null()) {
            os << "  detail: " << witness->detail.dump() << "\n";
        }
    }
    os << "  instances checked: " << instances_checked << "\n";
    return os.str();
}

}  // namespace lumpbn
