// bellsim: Bell/CHSH/Boole inequality simulations and the joint-distribution
// feasibility solver, behind one seeded, fully reproducible command line.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "bellsim/bertrand.hpp"
#include "bellsim/collision.hpp"
#include "bellsim/feasibility.hpp"
#include "bellsim/hvmodels.hpp"
#include "bellsim/model_io.hpp"

namespace {

using bellsim::Estimate;
using bellsim::SeededStream;
using json = nlohmann::ordered_json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

/// Doubles are printed with 12 significant digits so that identical runs give
/// byte-identical output regardless of how the value was accumulated.
json num12(double x) {
    if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return json::parse(buf);
}

json estimate_json(const Estimate& e) {
    return {{"value", num12(e.value)}, {"stderr", num12(e.stderr_)}, {"n", e.n}};
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

struct GlobalOptions {
    std::uint64_t seed = 1;
    std::uint64_t n = 1000000;
    std::string format = "json";
    int workers = 0;
};

void apply_workers(int workers) {
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

// ---------------------------------------------------------------- bertrand

int run_bertrand(const GlobalOptions& opts, const std::string& protocol_name) {
    bellsim::BertrandProtocol protocol;
    if (protocol_name == "offset")
        protocol = bellsim::BertrandProtocol::RandomOffset;
    else if (protocol_name == "endpoints")
        protocol = bellsim::BertrandProtocol::RandomEndpoints;
    else if (protocol_name == "midpoint")
        protocol = bellsim::BertrandProtocol::RandomMidpoint;
    else
        throw CLI::ValidationError("--protocol", "expected offset, endpoints or midpoint");

    const SeededStream stream(opts.seed);
    const auto [num, den] = bellsim::analytic_probability(protocol);
    const double analytic = static_cast<double>(num) / static_cast<double>(den);
    const Estimate est = bellsim::estimate_probability(protocol, opts.n, stream);

    if (opts.format == "csv") {
        std::cout << "protocol,analytic,estimate,stderr,z\n";
        std::printf("%s,%d/%d,%.12g,%.12g,%.12g\n", protocol_name.c_str(), num, den, est.value,
                    est.stderr_, est.z_score(analytic));
        return 0;
    }
    emit({{"command", "bertrand"},
          {"protocol", protocol_name},
          {"n", opts.n},
          {"seed", opts.seed},
          {"analytic", std::to_string(num) + "/" + std::to_string(den)},
          {"analytic_value", num12(analytic)},
          {"estimate", num12(est.value)},
          {"stderr", num12(est.stderr_)},
          {"z", num12(est.z_score(analytic))}});
    return 0;
}

// ---------------------------------------------------------------- collision

bellsim::DetectorAssignment parse_assignment(const std::string& pair) {
    if (pair.size() != 3 || pair[1] != ':')
        throw CLI::ValidationError("--pair", "expected X:Y with detectors A, B or C");
    return {bellsim::ThresholdDetector::from_label(pair[0]),
            bellsim::ThresholdDetector::from_label(pair[2])};
}

int run_collision(const GlobalOptions& opts, const std::string& pair, const std::string& density,
                  double restitution) {
    bellsim::CollisionConfig config;
    config.v_density = bellsim::DensitySpec::parse(density);
    config.restitution = restitution;
    config.validate();
    const SeededStream stream(opts.seed);

    if (pair != "all") {
        const auto assignment = parse_assignment(pair);
        const Estimate est =
            bellsim::estimate_correlation(bellsim::run_experiment(config, assignment, opts.n, stream));
        emit({{"command", "collision"},
              {"pair", pair},
              {"density", config.v_density.to_string()},
              {"restitution", num12(config.restitution)},
              {"n", opts.n},
              {"seed", opts.seed},
              {"estimate", num12(est.value)},
              {"stderr", num12(est.stderr_)}});
        return 0;
    }

    auto correlate = [&](char d1, char d2, std::uint64_t substream) {
        const bellsim::DetectorAssignment assignment{bellsim::ThresholdDetector::from_label(d1),
                                                     bellsim::ThresholdDetector::from_label(d2)};
        return bellsim::estimate_correlation(
            bellsim::run_experiment(config, assignment, opts.n, stream.substream(substream)));
    };
    const Estimate e_ab = correlate('A', 'B', 0);
    const Estimate e_ac = correlate('A', 'C', 1);
    const Estimate e_bc = correlate('B', 'C', 2);
    const auto report = bellsim::check_bell_triple(e_ab.value, e_ac.value, e_bc.value);

    emit({{"command", "collision"},
          {"pair", "all"},
          {"density", config.v_density.to_string()},
          {"restitution", num12(config.restitution)},
          {"n", opts.n},
          {"seed", opts.seed},
          {"e_ab", estimate_json(e_ab)},
          {"e_ac", estimate_json(e_ac)},
          {"e_bc", estimate_json(e_bc)},
          {"analytic_e_bc", num12(bellsim::analytic_E_BC(config))},
          {"bell",
           {{"lhs", num12(report.lhs)},
            {"rhs_plus", num12(report.rhs_plus)},
            {"rhs_minus", num12(report.rhs_minus)},
            {"violated_plus", report.violated_plus},
            {"violated_minus", report.violated_minus},
            {"margin", num12(report.margin)}}}});
    return 0;
}

// ---------------------------------------------------------------- chsh

std::vector<double> parse_angle_list(const std::string& text, std::size_t expected) {
    std::vector<double> angles;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) angles.push_back(std::stod(item));
    if (angles.size() != expected)
        throw CLI::ValidationError("--angles", "expected " + std::to_string(expected) + " angles");
    return angles;
}

json facet_slacks_json(double e11, double e12, double e21, double e22) {
    // Same eight facets as the exact module, evaluated in double for
    // simulated tables.
    json out = json::array();
    const double e[4] = {e11, e12, e21, e22};
    const char* label[4] = {"e11", "e12", "e21", "e22"};
    for (int minus_at = 0; minus_at < 4; ++minus_at) {
        double combo = 0;
        std::string inner;
        for (int k = 0; k < 4; ++k) {
            combo += (k == minus_at ? -1 : 1) * e[k];
            if (k > 0) inner += (k == minus_at) ? " - " : " + ";
            else if (minus_at == 0) inner += "-";
            inner += label[k];
        }
        for (int outer : {+1, -1}) {
            out.push_back({{"facet", std::string("2 ") + (outer > 0 ? "-" : "+") + " (" + inner +
                                         ") >= 0"},
                           {"slack", num12(2.0 - outer * combo)}});
        }
    }
    return out;
}

json chsh_report(const GlobalOptions& opts, const std::array<Estimate, 4>& est) {
    const double s = est[0].value - est[1].value + est[2].value + est[3].value;
    return {{"command", "chsh"},
            {"n", opts.n},
            {"seed", opts.seed},
            {"e11", estimate_json(est[0])},
            {"e12", estimate_json(est[1])},
            {"e21", estimate_json(est[2])},
            {"e22", estimate_json(est[3])},
            {"S", num12(s)},
            {"classical_bound", 2},
            {"facets", facet_slacks_json(est[0].value, est[1].value, est[2].value, est[3].value)}};
}

int run_chsh(const GlobalOptions& opts, bool singlet, const std::string& angles_text,
             const std::string& model_path, const std::string& a_settings_text,
             const std::string& b_settings_text, bool enumerate_deterministic) {
    if (enumerate_deterministic) {
        emit({{"command", "chsh"},
              {"enumerate_deterministic", true},
              {"max_abs_s", num12(bellsim::max_chsh_over_deterministic())}});
        return 0;
    }

    const SeededStream stream(opts.seed);
    std::array<Estimate, 4> est;

    if (singlet) {
        const auto deg = parse_angle_list(angles_text, 4); // a1, a2, b1, b2
        const double a[2] = {deg[0] * kDegToRad, deg[1] * kDegToRad};
        const double b[2] = {deg[2] * kDegToRad, deg[3] * kDegToRad};
        int sub = 0;
        // Order: (a1,b1), (a1,b2), (a2,b1), (a2,b2)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const auto ctx = bellsim::contextual_singlet(a[i], b[j]);
                est[static_cast<std::size_t>(i * 2 + j)] = bellsim::estimate_correlation(
                    bellsim::simulate_coincidence(ctx, opts.n, stream.substream(sub++)));
            }
        json doc = chsh_report(opts, est);
        doc["angles_deg"] = {num12(deg[0]), num12(deg[1]), num12(deg[2]), num12(deg[3])};
        emit(doc);
        return 0;
    }

    if (model_path.empty())
        throw CLI::ValidationError("chsh", "need --singlet, --model or --enumerate-deterministic");

    const auto loaded = bellsim::load_model_file(model_path);
    auto pick_settings = [](const std::vector<std::string>& names, const std::string& text,
                            const char* flag) {
        std::vector<std::string> chosen;
        if (text.empty()) {
            if (names.size() < 2)
                throw CLI::ValidationError(flag, "model needs at least two settings");
            chosen = {names[0], names[1]};
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) chosen.push_back(item);
            if (chosen.size() != 2) throw CLI::ValidationError(flag, "expected two setting names");
        }
        return chosen;
    };
    const auto a_names = pick_settings(loaded.a_settings, a_settings_text, "--a-settings");
    const auto b_names = pick_settings(loaded.b_settings, b_settings_text, "--b-settings");

    int sub = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const int x = loaded.a_id(a_names[static_cast<std::size_t>(i)]);
            const int y = loaded.b_id(b_names[static_cast<std::size_t>(j)]);
            const auto run = [&](const auto& model) {
                return bellsim::simulate_coincidence(model, x, y, opts.n, stream.substream(sub));
            };
            est[static_cast<std::size_t>(i * 2 + j)] =
                bellsim::estimate_correlation(std::visit(run, loaded.model));
            sub++;
        }

    json doc = chsh_report(opts, est);
    doc["model"] = model_path;
    if (const auto* m = std::get_if<bellsim::FiniteNoncontextualModel>(&loaded.model)) {
        double s_exact = 0.0;
        const double sign[4] = {1, -1, 1, 1};
        int k = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const int x = loaded.a_id(a_names[static_cast<std::size_t>(i)]);
                const int y = loaded.b_id(b_names[static_cast<std::size_t>(j)]);
                s_exact += sign[k++] * bellsim::joint_from_noncontextual(*m, x, y).correlation();
            }
        doc["S_exact"] = num12(s_exact);
    }
    emit(doc);
    return 0;
}

// ---------------------------------------------------------------- feasibility

int run_feasibility(const std::string& problem_path) {
    const auto problem = bellsim::load_problem_file(problem_path);
    const auto result = bellsim::solve(problem);

    json doc = {{"command", "feasibility"}, {"n", problem.n}};
    json pairs = json::object();
    for (const auto& [ij, v] : problem.pair_constraints) {
        std::ostringstream key;
        key << ij.first << "," << ij.second;
        pairs[key.str()] = bellsim::rational_to_string(v);
    }
    doc["pairs"] = pairs;

    if (const auto* witness = std::get_if<bellsim::JointWitness>(&result)) {
        doc.update(bellsim::witness_to_json(*witness));
    } else {
        const auto& cert = std::get<bellsim::InfeasibilityCertificate>(result);
        doc.update(bellsim::certificate_to_json(cert));
    }

    // For the plain triple problem also show the named facet slacks.
    if (problem.n == 3 && problem.single_constraints.empty() &&
        problem.pair_constraints.size() == 3) {
        json facets = json::array();
        for (const auto& f :
             bellsim::triple_facets(problem.pair_constraints.at({0, 1}),
                                    problem.pair_constraints.at({0, 2}),
                                    problem.pair_constraints.at({1, 2}))) {
            facets.push_back({{"facet", f.name}, {"slack", bellsim::rational_to_string(f.slack)}});
        }
        doc["facets"] = facets;
    }
    emit(doc);
    return 0;
}

// ---------------------------------------------------------------- protocols

int run_protocols(const GlobalOptions& opts, const std::string& model_path, const std::string& x_name,
                  const std::string& y_name, std::uint64_t n_pairs, std::uint64_t n_repeats) {
    const auto loaded = bellsim::load_model_file(model_path);
    const int x = loaded.a_id(x_name);
    const int y = loaded.b_id(y_name);
    const SeededStream stream(opts.seed);

    const auto coincidence = std::visit(
        [&](const auto& model) {
            return bellsim::estimate_correlation(
                bellsim::simulate_coincidence(model, x, y, n_pairs, stream.substream(0)));
        },
        loaded.model);
    const auto protocol = std::visit(
        [&](const auto& model) {
            return bellsim::simulate_bell_protocol(model, x, y, n_pairs, n_repeats,
                                                   stream.substream(1));
        },
        loaded.model);

    const double diff = coincidence.value - protocol.value;
    emit({{"command", "protocols"},
          {"model", model_path},
          {"x", x_name},
          {"y", y_name},
          {"n_pairs", n_pairs},
          {"n_repeats", n_repeats},
          {"seed", opts.seed},
          {"coincidence", estimate_json(coincidence)},
          {"bell_protocol", estimate_json(protocol)},
          {"difference", num12(diff)},
          {"combined_stderr",
           num12(std::sqrt(coincidence.stderr_ * coincidence.stderr_ +
                           protocol.stderr_ * protocol.stderr_))}});
    return 0;
}

// ---------------------------------------------------------------- sweep

int run_sweep(const GlobalOptions& opts, const std::string& target, double from_deg, double to_deg,
              double step_deg, const std::string& pair, const std::string& restitution_list,
              const std::string& density) {
    const SeededStream stream(opts.seed);
    if (target == "singlet") {
        if (step_deg <= 0.0 || to_deg < from_deg)
            throw CLI::ValidationError("sweep", "empty grid: need step > 0 and to >= from");
        std::cout << "angle_deg,e,stderr\n";
        std::uint64_t sub = 0;
        for (double angle = from_deg; angle <= to_deg + 1e-9; angle += step_deg) {
            const auto ctx = bellsim::contextual_singlet(0.0, angle * kDegToRad);
            const Estimate est = bellsim::estimate_correlation(
                bellsim::simulate_coincidence(ctx, opts.n, stream.substream(sub++)));
            std::printf("%.12g,%.12g,%.12g\n", angle, est.value, est.stderr_);
        }
        return 0;
    }
    if (target == "collision") {
        std::vector<double> restitutions;
        std::stringstream ss(restitution_list);
        std::string item;
        while (std::getline(ss, item, ',')) restitutions.push_back(std::stod(item));
        if (restitutions.empty())
            throw CLI::ValidationError("sweep", "empty grid: no restitution values");
        const auto assignment = parse_assignment(pair);
        std::cout << "restitution,e,stderr\n";
        std::uint64_t sub = 0;
        for (double e : restitutions) {
            bellsim::CollisionConfig config;
            config.v_density = bellsim::DensitySpec::parse(density);
            config.restitution = e;
            config.validate();
            const Estimate est = bellsim::estimate_correlation(
                bellsim::run_experiment(config, assignment, opts.n, stream.substream(sub++)));
            std::printf("%.12g,%.12g,%.12g\n", e, est.value, est.stderr_);
        }
        return 0;
    }
    throw CLI::ValidationError("--target", "expected singlet or collision");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell/CHSH/Boole inequality simulations and joint-distribution feasibility"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--seed", opts.seed, "Root seed for all randomness")->capture_default_str();
    app.add_option("--n", opts.n, "Trial count")->capture_default_str();
    app.add_option("--format", opts.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--workers", opts.workers, "OpenMP worker count (0 = library default)")
        ->capture_default_str();

    auto* bertrand = app.add_subcommand("bertrand", "Bertrand chord protocols");
    std::string protocol = "offset";
    bertrand->add_option("--protocol", protocol, "offset, endpoints or midpoint")
        ->check(CLI::IsMember({"offset", "endpoints", "midpoint"}))
        ->capture_default_str();

    auto* collision = app.add_subcommand("collision", "Elastic-collision entangled pair");
    std::string pair = "all";
    std::string density = "uniform:0:10";
    double restitution = 1.0;
    collision->add_option("--pair", pair, "Detector pair X:Y or 'all'")->capture_default_str();
    collision->add_option("--density", density, "Speed density family:lo:hi")
        ->capture_default_str();
    collision->add_option("--restitution", restitution, "Restitution coefficient in (0, 1]")
        ->capture_default_str();

    auto* chsh = app.add_subcommand("chsh", "CHSH correlations and facets");
    bool singlet = false;
    bool enumerate_det = false;
    std::string angles = "0,90,45,135";
    std::string model_path;
    std::string a_settings;
    std::string b_settings;
    chsh->add_flag("--singlet", singlet, "Use the built-in singlet contexts");
    chsh->add_option("--angles", angles, "a1,a2,b1,b2 in degrees")->capture_default_str();
    chsh->add_option("--model", model_path, "Model JSON file");
    chsh->add_option("--a-settings", a_settings, "Two wing-A setting names x1,x2");
    chsh->add_option("--b-settings", b_settings, "Two wing-B setting names y1,y2");
    chsh->add_flag("--enumerate-deterministic", enumerate_det,
                   "Max |S| over the 16 deterministic local strategies");

    auto* feasibility = app.add_subcommand("feasibility", "Joint-distribution existence (exact LP)");
    std::string problem_path;
    feasibility->add_option("problem", problem_path, "Problem JSON file")->required();

    auto* protocols = app.add_subcommand("protocols", "Coincidence vs factorization protocol");
    std::string x_name;
    std::string y_name;
    std::uint64_t n_pairs = 100000;
    std::uint64_t n_repeats = 16;
    protocols->add_option("--model", model_path, "Model JSON file")->required();
    protocols->add_option("--x", x_name, "Wing-A setting name")->required();
    protocols->add_option("--y", y_name, "Wing-B setting name")->required();
    protocols->add_option("--pairs", n_pairs, "Number of emitted pairs")->capture_default_str();
    protocols->add_option("--repeats", n_repeats, "Re-measurements per wing per pair")
        ->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Parameter sweeps as CSV plot data");
    std::string target = "singlet";
    double from_deg = 0.0;
    double to_deg = 180.0;
    double step_deg = 15.0;
    std::string sweep_pair = "A:B";
    std::string restitution_list = "1.0";
    sweep->add_option("--target", target, "singlet or collision")->capture_default_str();
    sweep->add_option("--from", from_deg, "Grid start (degrees)")->capture_default_str();
    sweep->add_option("--to", to_deg, "Grid end (degrees)")->capture_default_str();
    sweep->add_option("--step", step_deg, "Grid step (degrees)")->capture_default_str();
    sweep->add_option("--pair", sweep_pair, "Detector pair for collision sweeps")
        ->capture_default_str();
    sweep->add_option("--restitution-list", restitution_list,
                      "Comma-separated restitution values for collision sweeps")
        ->capture_default_str();
    sweep->add_option("--density", density, "Speed density for collision sweeps")
        ->capture_default_str();

    // Let --seed/--n/--format/--workers appear after the subcommand name.
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    apply_workers(opts.workers);
    try {
        if (bertrand->parsed()) return run_bertrand(opts, protocol);
        if (collision->parsed()) return run_collision(opts, pair, density, restitution);
        if (chsh->parsed())
            return run_chsh(opts, singlet, angles, model_path, a_settings, b_settings,
                            enumerate_det);
        if (feasibility->parsed()) return run_feasibility(problem_path);
        if (protocols->parsed())
            return run_protocols(opts, model_path, x_name, y_name, n_pairs, n_repeats);
        if (sweep->parsed())
            return run_sweep(opts, target, from_deg, to_deg, step_deg, sweep_pair, restitution_list,
                             density);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
