#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bellsim/feasibility.hpp"
#include "bellsim/hvmodels.hpp"

namespace bellsim {

/// Model parsed from JSON together with the setting-name -> id mapping the
/// numeric model uses internally.
struct LoadedModel {
    std::variant<FiniteNoncontextualModel, ContextualModel> model;
    std::vector<std::string> a_settings; // index = setting id
    std::vector<std::string> b_settings;

    bool is_contextual() const { return std::holds_alternative<ContextualModel>(model); }
    int a_id(const std::string& name) const;
    int b_id(const std::string& name) const;
};

/// Parses the model schema:
///   {"type":"noncontextual","lambdas":[...],"weights":[...],
///    "response_a":{setting:{lambda:p}},"response_b":{...}}
/// or
///   {"type":"contextual","contexts":{"x,y":{"atoms":[{"a":1,"b":-1,
///    "w":"1/2","pair":0}]}}}
/// Probabilities and weights may be JSON numbers or exact strings ("1/2",
/// "0.25"). Setting ids are assigned by sorted name.
LoadedModel load_model(const nlohmann::json& doc);
LoadedModel load_model_file(const std::string& path);

/// {"n":3,"pairs":{"0,1":"1","0,2":"-1","1,2":"-1/2"},"singles":{"0":"0"}}
MarginalProblem load_problem(const nlohmann::json& doc);
MarginalProblem load_problem_file(const std::string& path);

nlohmann::ordered_json witness_to_json(const JointWitness& witness);
nlohmann::ordered_json certificate_to_json(const InfeasibilityCertificate& cert);

} // namespace bellsim
