#include "lumpbn/io.hpp"

#include <fstream>
#include <sstream>

#include "lumpbn/errors.hpp"

namespace lumpbn {

namespace {

using nlohmann::json;

const json& require(const json& doc, const std::string& key,
                    const std::string& path) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw InputError(path, "missing required field \"" + key + "\"");
    }
    return doc.at(key);
}

std::string require_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw InputError(path, "expected a string");
    return j.get<std::string>();
}

Rational require_rational(const json& j, const std::string& path) {
    if (!j.is_string()) throw InputError(path, "expected a \"p/q\" string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
        throw InputError(path, e.what());
    }
}

std::vector<std::string> require_string_array(const json& j,
                                              const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(require_string(j[i], path + "/" + std::to_string(i)));
    }
    return out;
}

std::vector<Rational> require_rational_array(const json& j,
                                             const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(require_rational(j[i], path + "/" + std::to_string(i)));
    }
    return out;
}

std::map<std::string, std::string> require_string_map(const json& j,
                                                      const std::string& path) {
    if (!j.is_object()) throw InputError(path, "expected an object");
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : j.items()) {
        out[key] = require_string(value, path + "/" + key);
    }
    return out;
}

StochasticMatrix parse_matrix(const json& j, const std::string& path) {
    StochasticMatrix m;
    m.states.symbols = require_string_array(require(j, "states", path), path + "/states");
    const json& rows = require(j, "rows", path);
    if (!rows.is_array()) throw InputError(path + "/rows", "expected an array");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        m.rows.push_back(
            require_rational_array(rows[r], path + "/rows/" + std::to_string(r)));
    }
    try {
        m.validate();
    } catch (const Error& e) {
        throw InputError(path, e.what());
    }
    return m;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

ModelFile parse_model(const json& doc) {
    if (!doc.is_object()) throw InputError("", "model file must be a JSON object");
    const json& vertices = require(doc, "vertices", "");
    if (!vertices.is_array() || vertices.empty()) {
        throw InputError("/vertices", "expected a nonempty array");
    }

    std::vector<std::string> names;
    std::vector<std::vector<std::string>> parent_names;
    std::vector<Alphabet> alphabets;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const std::string path = "/vertices/" + std::to_string(i);
        const json& v = vertices[i];
        names.push_back(require_string(require(v, "name", path), path + "/name"));
        Alphabet ab;
        ab.symbols = require_string_array(require(v, "alphabet", path), path + "/alphabet");
        alphabets.push_back(std::move(ab));
        if (v.contains("parents")) {
            parent_names.push_back(
                require_string_array(v.at("parents"), path + "/parents"));
        } else {
            parent_names.push_back({});
        }
    }

    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (const auto& p : parent_names[i]) edges.emplace_back(p, names[i]);
    }

    ModelFile out;
    try {
        out.net.dag = Dag(names, edges);
    } catch (const Error& e) {
        throw InputError("/vertices", e.what());
    }
    out.net.alphabets = std::move(alphabets);

    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const std::string path = "/vertices/" + std::to_string(i);
        // The declared parent list must match the index-sorted order the CPT
        // rows are keyed on, so row indexing is unambiguous in the file.
        std::vector<std::string> expected;
        for (int p : out.net.dag.parents(static_cast<int>(i))) {
            expected.push_back(out.net.dag.name(p));
        }
        if (parent_names[i] != expected) {
            std::string want = "[";
            for (std::size_t j = 0; j < expected.size(); ++j) {
                want += (j ? ", " : "") + expected[j];
            }
            throw InputError(path + "/parents",
                             "parents must be listed in declaration order " + want + "]");
        }
        Cpt cpt;
        cpt.vertex = static_cast<int>(i);
        cpt.parent_order = out.net.dag.parents(static_cast<int>(i));
        const json& rows = require(vertices[i], "cpt", path);
        if (!rows.is_array()) throw InputError(path + "/cpt", "expected an array");
        for (std::size_t r = 0; r < rows.size(); ++r) {
            cpt.rows.push_back(
                require_rational_array(rows[r], path + "/cpt/" + std::to_string(r)));
        }
        out.net.cpts.push_back(std::move(cpt));
    }
    try {
        out.net.validate();
    } catch (const Error& e) {
        throw InputError("/vertices", e.what());
    }

    if (doc.contains("lumping")) {
        const json& l = doc.at("lumping");
        try {
            if (l.contains("shared")) {
                out.lumping = Lumping::shared(
                    out.net.alphabets, require_string_map(l.at("shared"), "/lumping/shared"));
            } else if (l.contains("per_vertex")) {
                const json& pv = l.at("per_vertex");
                if (!pv.is_object()) {
                    throw InputError("/lumping/per_vertex", "expected an object");
                }
                std::vector<std::map<std::string, std::string>> maps(names.size());
                for (const auto& [vertex, symbol_map] : pv.items()) {
                    const int v = out.net.dag.index_of(vertex);
                    maps[static_cast<std::size_t>(v)] = require_string_map(
                        symbol_map, "/lumping/per_vertex/" + vertex);
                }
                for (std::size_t v = 0; v < names.size(); ++v) {
                    if (maps[v].empty()) {
                        // unmentioned vertices keep their alphabet
                        for (const auto& s : out.net.alphabets[v].symbols) maps[v][s] = s;
                    }
                }
                out.lumping = Lumping::per_vertex(out.net.alphabets, maps);
            } else {
                throw InputError("/lumping", "expected \"shared\" or \"per_vertex\"");
            }
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            throw InputError("/lumping", e.what());
        }
    }

    if (doc.contains("markov")) {
        const json& mk = doc.at("markov");
        MarkovSpec spec;
        const json& ms = require(mk, "matrices", "/markov");
        if (!ms.is_array() || ms.empty()) {
            throw InputError("/markov/matrices", "expected a nonempty array");
        }
        for (std::size_t i = 0; i < ms.size(); ++i) {
            spec.matrices.push_back(
                parse_matrix(ms[i], "/markov/matrices/" + std::to_string(i)));
        }
        spec.initial = require_rational_array(require(mk, "initial", "/markov"),
                                              "/markov/initial");
        const json& h = require(mk, "horizon", "/markov");
        if (!h.is_number_integer()) {
            throw InputError("/markov/horizon", "expected an integer");
        }
        spec.horizon = h.get<int>();
        if (spec.horizon < 2) {
            throw InputError("/markov/horizon", "horizon must be at least 2");
        }
        out.markov = std::move(spec);
    }
    return out;
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path, "cannot open file");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw InputError(path, e.what());
    }
    return parse_model(doc);
}

json serialize_model(const BayesNet& net, const Lumping* lumping) {
    json doc;
    doc["vertices"] = json::array();
    for (int v = 0; v < net.dag.size(); ++v) {
        json jv;
        jv["name"] = net.dag.name(v);
        jv["alphabet"] = net.alphabets[static_cast<std::size_t>(v)].symbols;
        json parents = json::array();
        for (int p : net.dag.parents(v)) parents.push_back(net.dag.name(p));
        jv["parents"] = parents;
        json rows = json::array();
        for (const auto& row : net.cpts[static_cast<std::size_t>(v)].rows) {
            json jrow = json::array();
            for (const Rational& x : row) jrow.push_back(to_string(x));
            rows.push_back(jrow);
        }
        jv["cpt"] = rows;
        doc["vertices"].push_back(jv);
    }
    if (lumping) {
        json pv = json::object();
        for (int v = 0; v < net.dag.size(); ++v) {
            json m = json::object();
            const auto& ab = net.alphabets[static_cast<std::size_t>(v)];
            for (int a = 0; a < ab.size(); ++a) {
                m[ab.symbols[static_cast<std::size_t>(a)]] =
                    lumping->targets[static_cast<std::size_t>(v)]
                        .symbols[static_cast<std::size_t>(
                            lumping->map[static_cast<std::size_t>(v)][static_cast<std::size_t>(a)])];
            }
            pv[net.dag.name(v)] = m;
        }
        doc["lumping"]["per_vertex"] = pv;
    }
    return doc;
}

StochasticMatrix parse_matrix_text(const std::string& text) {
    StochasticMatrix m;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream tokens(line);
        std::vector<Rational> row;
        std::string token;
        while (tokens >> token) row.push_back(parse_rational(token));
        if (!row.empty()) m.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        m.states.symbols.push_back("a" + std::to_string(i + 1));
    }
    m.validate();
    return m;
}

std::map<std::string, std::string> parse_lumping_arg(const std::string& arg) {
    std::map<std::string, std::string> out;
    for (const std::string& pair : split(arg, ',')) {
        const auto sep = pair.find(':');
        if (sep == std::string::npos || sep == 0 || sep + 1 == pair.size()) {
            throw InputError(arg, "expected \"source:target\" pairs");
        }
        out[pair.substr(0, sep)] = pair.substr(sep + 1);
    }
    if (out.empty()) throw InputError(arg, "empty lumping");
    return out;
}

std::vector<Rational> parse_vector_arg(const std::string& arg) {
    std::vector<Rational> out;
    for (const std::string& token : split(arg, ',')) out.push_back(parse_rational(token));
    if (out.empty()) throw InputError(arg, "empty vector");
    return out;
}

}  // namespace lumpbn
