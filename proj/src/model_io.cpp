#include "bellsim/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bellsim {

namespace {

double number_or_exact(const nlohmann::json& v, const char* what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string())
        return parse_rational(v.get<std::string>()).convert_to<double>();
    throw std::invalid_argument(std::string(what) + ": expected number or rational string");
}

Rational rational_value(const nlohmann::json& v, const char* what) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw std::invalid_argument(std::string(what) + ": expected integer or rational string");
}

int index_of(const std::vector<std::string>& names, const std::string& name, const char* side) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw std::out_of_range(std::string("unknown ") + side + " setting '" + name + "'");
    return static_cast<int>(it - names.begin());
}

std::pair<std::string, std::string> split_pair_key(const std::string& key) {
    const auto comma = key.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("expected 'x,y' key, got '" + key + "'");
    return {key.substr(0, comma), key.substr(comma + 1)};
}

LoadedModel load_noncontextual(const nlohmann::json& doc) {
    LoadedModel loaded;
    FiniteNoncontextualModel model;

    const auto& lambdas = doc.at("lambdas");
    std::vector<std::string> lambda_names;
    for (const auto& l : lambdas) lambda_names.push_back(l.get<std::string>());

    const auto& weights = doc.at("weights");
    if (weights.size() != lambda_names.size())
        throw std::invalid_argument("model: weights/lambdas length mismatch");
    for (const auto& w : weights) model.weights.push_back(number_or_exact(w, "weight"));

    auto load_responses = [&](const char* key, std::vector<std::string>& names,
                              std::vector<std::vector<double>>& table) {
        const auto& resp = doc.at(key);
        for (const auto& [setting, probs] : resp.items()) names.push_back(setting);
        std::sort(names.begin(), names.end());
        for (const std::string& setting : names) {
            std::vector<double> row(lambda_names.size());
            const auto& probs = resp.at(setting);
            for (std::size_t l = 0; l < lambda_names.size(); ++l)
                row[l] = number_or_exact(probs.at(lambda_names[l]), key);
            table.push_back(std::move(row));
        }
    };
    load_responses("response_a", loaded.a_settings, model.response_a);
    load_responses("response_b", loaded.b_settings, model.response_b);

    model.validate();
    loaded.model = std::move(model);
    return loaded;
}

LoadedModel load_contextual(const nlohmann::json& doc) {
    LoadedModel loaded;
    ContextualModel model;

    const auto& contexts = doc.at("contexts");
    std::set<std::string> a_names;
    std::set<std::string> b_names;
    for (const auto& [key, value] : contexts.items()) {
        const auto [x, y] = split_pair_key(key);
        a_names.insert(x);
        b_names.insert(y);
    }
    loaded.a_settings.assign(a_names.begin(), a_names.end());
    loaded.b_settings.assign(b_names.begin(), b_names.end());

    for (const auto& [key, value] : contexts.items()) {
        const auto [x, y] = split_pair_key(key);
        Context ctx;
        for (const auto& atom_doc : value.at("atoms")) {
            ContextAtom atom;
            atom.a = atom_doc.at("a").get<int>();
            atom.b = atom_doc.at("b").get<int>();
            atom.weight = number_or_exact(atom_doc.at("w"), "atom weight");
            atom.pair_component = atom_doc.value("pair", -1);
            ctx.atoms.push_back(atom);
        }
        model.contexts[{index_of(loaded.a_settings, x, "x"), index_of(loaded.b_settings, y, "y")}] =
            std::move(ctx);
    }

    model.validate();
    loaded.model = std::move(model);
    return loaded;
}

} // namespace

int LoadedModel::a_id(const std::string& name) const {
    return index_of(a_settings, name, "x");
}

int LoadedModel::b_id(const std::string& name) const {
    return index_of(b_settings, name, "y");
}

LoadedModel load_model(const nlohmann::json& doc) {
    const std::string type = doc.at("type").get<std::string>();
    if (type == "noncontextual") return load_noncontextual(doc);
    if (type == "contextual") return load_contextual(doc);
    throw std::invalid_argument("model: unknown type '" + type + "'");
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file '" + path + "'");
    return load_model(nlohmann::json::parse(in));
}

MarginalProblem load_problem(const nlohmann::json& doc) {
    MarginalProblem problem;
    problem.n = doc.at("n").get<int>();
    for (const auto& [key, value] : doc.at("pairs").items()) {
        const auto [i_str, j_str] = split_pair_key(key);
        problem.pair_constraints[{std::stoi(i_str), std::stoi(j_str)}] =
            rational_value(value, "pair moment");
    }
    if (doc.contains("singles")) {
        for (const auto& [key, value] : doc.at("singles").items())
            problem.single_constraints[std::stoi(key)] = rational_value(value, "single moment");
    }
    problem.validate();
    return problem;
}

MarginalProblem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open problem file '" + path + "'");
    return load_problem(nlohmann::json::parse(in));
}

nlohmann::ordered_json witness_to_json(const JointWitness& witness) {
    nlohmann::ordered_json atoms = nlohmann::ordered_json::object();
    for (std::uint32_t s = 0; s < witness.atom_probabilities.size(); ++s) {
        if (witness.atom_probabilities[s] == 0) continue;
        std::string name;
        for (int i = 0; i < witness.n; ++i) name += (s >> i) & 1 ? '+' : '-';
        atoms[name] = rational_to_string(witness.atom_probabilities[s]);
    }
    return {{"result", "feasible"}, {"atoms", atoms}};
}

nlohmann::ordered_json certificate_to_json(const InfeasibilityCertificate& cert) {
    nlohmann::ordered_json pairs = nlohmann::ordered_json::object();
    for (const auto& [ij, c] : cert.pair_coefficients) {
        std::ostringstream key;
        key << ij.first << "," << ij.second;
        pairs[key.str()] = rational_to_string(c);
    }
    nlohmann::ordered_json singles = nlohmann::ordered_json::object();
    for (const auto& [i, c] : cert.single_coefficients)
        singles[std::to_string(i)] = rational_to_string(c);
    return {{"result", "infeasible"},
            {"certificate",
             {{"constant", rational_to_string(cert.constant)},
              {"pair_coefficients", pairs},
              {"single_coefficients", singles}}}};
}

} // namespace bellsim
