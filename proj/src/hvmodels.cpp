#include "bellsim/hvmodels.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bellsim {

namespace {

constexpr double kWeightTol = 1e-12;

void check_weights(const std::vector<double>& w, const char* what) {
    double sum = 0.0;
    for (double wi : w) {
        if (wi < 0.0) throw std::invalid_argument(std::string(what) + ": negative weight");
        sum += wi;
    }
    if (std::abs(sum - 1.0) > kWeightTol)
        throw std::invalid_argument(std::string(what) + ": weights do not sum to 1");
}

/// Inverse-CDF draw over a small weight vector.
std::size_t draw_index(const std::vector<double>& weights, SeededStream& stream) {
    const double u = stream.next_unit_open();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

} // namespace

bool FiniteNoncontextualModel::is_deterministic() const {
    auto all01 = [](const std::vector<std::vector<double>>& table) {
        for (const auto& row : table)
            for (double p : row)
                if (p != 0.0 && p != 1.0) return false;
        return true;
    };
    return all01(response_a) && all01(response_b);
}

void FiniteNoncontextualModel::validate() const {
    if (weights.empty()) throw std::invalid_argument("model: empty lambda space");
    check_weights(weights, "model");
    auto check_table = [&](const std::vector<std::vector<double>>& table, const char* name) {
        if (table.empty()) throw std::invalid_argument(std::string(name) + ": no settings");
        for (const auto& row : table) {
            if (row.size() != weights.size())
                throw std::invalid_argument(std::string(name) + ": row size mismatch");
            for (double p : row)
                if (p < 0.0 || p > 1.0)
                    throw std::invalid_argument(std::string(name) + ": probability out of [0,1]");
        }
    };
    check_table(response_a, "response_a");
    check_table(response_b, "response_b");
}

FiniteNoncontextualModel FiniteNoncontextualModel::fair_coins(int settings_a, int settings_b) {
    FiniteNoncontextualModel m;
    m.weights = {1.0};
    m.response_a.assign(static_cast<std::size_t>(settings_a), {0.5});
    m.response_b.assign(static_cast<std::size_t>(settings_b), {0.5});
    return m;
}

FiniteNoncontextualModel FiniteNoncontextualModel::random(std::size_t lambdas, int settings_a,
                                                          int settings_b, SeededStream& stream) {
    FiniteNoncontextualModel m;
    m.weights.resize(lambdas);
    double sum = 0.0;
    for (double& w : m.weights) {
        w = stream.next_unit_open();
        sum += w;
    }
    for (double& w : m.weights) w /= sum;
    auto fill = [&](std::vector<std::vector<double>>& table, int settings) {
        table.assign(static_cast<std::size_t>(settings), std::vector<double>(lambdas));
        for (auto& row : table)
            for (double& p : row) p = stream.next_unit_open();
    };
    fill(m.response_a, settings_a);
    fill(m.response_b, settings_b);
    return m;
}

JointDistribution joint_from_noncontextual(const FiniteNoncontextualModel& model, int x, int y) {
    if (x < 0 || static_cast<std::size_t>(x) >= model.response_a.size())
        throw std::out_of_range("joint_from_noncontextual: unknown setting x");
    if (y < 0 || static_cast<std::size_t>(y) >= model.response_b.size())
        throw std::out_of_range("joint_from_noncontextual: unknown setting y");

    JointDistribution j;
    for (std::size_t l = 0; l < model.n_lambdas(); ++l) {
        const double w = model.weights[l];
        const double pa = model.response_a[static_cast<std::size_t>(x)][l];
        const double pb = model.response_b[static_cast<std::size_t>(y)][l];
        j.p_pp += w * pa * pb;
        j.p_pm += w * pa * (1.0 - pb);
        j.p_mp += w * (1.0 - pa) * pb;
        j.p_mm += w * (1.0 - pa) * (1.0 - pb);
    }
    return j;
}

void Context::validate() const {
    if (atoms.empty()) throw std::invalid_argument("context: no atoms");
    double sum = 0.0;
    for (const ContextAtom& atom : atoms) {
        if (atom.weight < 0.0) throw std::invalid_argument("context: negative weight");
        if (atom.a != 1 && atom.a != -1) throw std::invalid_argument("context: outcome a not +-1");
        if (atom.b != 1 && atom.b != -1) throw std::invalid_argument("context: outcome b not +-1");
        sum += atom.weight;
    }
    if (std::abs(sum - 1.0) > kWeightTol)
        throw std::invalid_argument("context: weights do not sum to 1");
}

JointDistribution Context::joint() const {
    JointDistribution j;
    for (const ContextAtom& atom : atoms) {
        if (atom.a > 0)
            (atom.b > 0 ? j.p_pp : j.p_pm) += atom.weight;
        else
            (atom.b > 0 ? j.p_mp : j.p_mm) += atom.weight;
    }
    return j;
}

const Context& ContextualModel::context_for(int x, int y) const {
    auto it = contexts.find({x, y});
    if (it == contexts.end()) {
        std::ostringstream msg;
        msg << "contextual model: no context for setting pair (" << x << ", " << y << ")";
        throw std::out_of_range(msg.str());
    }
    return it->second;
}

void ContextualModel::validate() const {
    if (contexts.empty()) throw std::invalid_argument("contextual model: no contexts");
    for (const auto& [key, ctx] : contexts) ctx.validate();
}

Context contextual_singlet(double x_angle, double y_angle) {
    const double c = std::cos(x_angle - y_angle);
    Context ctx;
    int next_component = 0;
    for (int a : {+1, -1})
        for (int b : {+1, -1})
            ctx.atoms.push_back({a, b, (1.0 - a * b * c) / 4.0, next_component++});
    return ctx;
}

PairSampleSummary simulate_coincidence(const FiniteNoncontextualModel& model, int x, int y,
                                       std::uint64_t n, const SeededStream& stream,
                                       ExecutionPolicy policy) {
    if (n == 0) throw std::invalid_argument("simulate_coincidence: n = 0");
    if (x < 0 || static_cast<std::size_t>(x) >= model.response_a.size() || y < 0 ||
        static_cast<std::size_t>(y) >= model.response_b.size())
        throw std::out_of_range("simulate_coincidence: unknown setting");

    return run_chunked<PairSampleSummary>(
        stream, n,
        [&model, x, y](SeededStream& sub, std::uint64_t count, PairSampleSummary& out) {
            const auto& ra = model.response_a[static_cast<std::size_t>(x)];
            const auto& rb = model.response_b[static_cast<std::size_t>(y)];
            for (std::uint64_t i = 0; i < count; ++i) {
                const std::size_t l = draw_index(model.weights, sub);
                const int a = sub.bernoulli(ra[l]) ? +1 : -1;
                const int b = sub.bernoulli(rb[l]) ? +1 : -1;
                out.add(a, b);
            }
        },
        policy);
}

PairSampleSummary simulate_coincidence(const Context& context, std::uint64_t n,
                                       const SeededStream& stream, ExecutionPolicy policy) {
    if (n == 0) throw std::invalid_argument("simulate_coincidence: n = 0");
    std::vector<double> weights;
    weights.reserve(context.atoms.size());
    for (const ContextAtom& atom : context.atoms) weights.push_back(atom.weight);

    return run_chunked<PairSampleSummary>(
        stream, n,
        [&context, &weights](SeededStream& sub, std::uint64_t count, PairSampleSummary& out) {
            for (std::uint64_t i = 0; i < count; ++i) {
                const ContextAtom& atom = context.atoms[draw_index(weights, sub)];
                out.add(atom.a, atom.b);
            }
        },
        policy);
}

PairSampleSummary simulate_coincidence(const ContextualModel& model, int x, int y, std::uint64_t n,
                                       const SeededStream& stream, ExecutionPolicy policy) {
    return simulate_coincidence(model.context_for(x, y), n, stream, policy);
}

namespace {

/// Per-pair kernel shared by both protocol variants: hold the hidden pair
/// state, estimate each wing's +1 probability from repeated draws, and
/// return the correlation implied by the product of the wing estimates.
double protocol_pair_value(double p_a_plus, double p_b_plus, std::uint64_t n_repeats,
                           SeededStream& stream) {
    std::uint64_t plus_a = 0;
    for (std::uint64_t r = 0; r < n_repeats; ++r) plus_a += stream.bernoulli(p_a_plus) ? 1 : 0;
    std::uint64_t plus_b = 0;
    for (std::uint64_t r = 0; r < n_repeats; ++r) plus_b += stream.bernoulli(p_b_plus) ? 1 : 0;
    const double pa = static_cast<double>(plus_a) / static_cast<double>(n_repeats);
    const double pb = static_cast<double>(plus_b) / static_cast<double>(n_repeats);
    // E = sum_ab a*b*P(a)P(b) = (2pa - 1)(2pb - 1)
    return (2.0 * pa - 1.0) * (2.0 * pb - 1.0);
}

Estimate protocol_estimate(const std::vector<double>& weights, const std::vector<double>& p_a_plus,
                           const std::vector<double>& p_b_plus, std::uint64_t n_pairs,
                           std::uint64_t n_repeats, const SeededStream& stream,
                           ExecutionPolicy policy) {
    if (n_pairs == 0) throw std::invalid_argument("simulate_bell_protocol: n_pairs = 0");
    if (n_repeats == 0) throw std::invalid_argument("simulate_bell_protocol: n_repeats = 0");
    auto summary = run_chunked<MeanSummary>(
        stream, n_pairs,
        [&](SeededStream& sub, std::uint64_t count, MeanSummary& out) {
            for (std::uint64_t i = 0; i < count; ++i) {
                const std::size_t l = draw_index(weights, sub);
                out.add(protocol_pair_value(p_a_plus[l], p_b_plus[l], n_repeats, sub));
            }
        },
        policy);
    return summary.estimate();
}

} // namespace

Estimate simulate_bell_protocol(const FiniteNoncontextualModel& model, int x, int y,
                                std::uint64_t n_pairs, std::uint64_t n_repeats,
                                const SeededStream& stream, ExecutionPolicy policy) {
    if (x < 0 || static_cast<std::size_t>(x) >= model.response_a.size() || y < 0 ||
        static_cast<std::size_t>(y) >= model.response_b.size())
        throw std::out_of_range("simulate_bell_protocol: unknown setting");
    return protocol_estimate(model.weights, model.response_a[static_cast<std::size_t>(x)],
                             model.response_b[static_cast<std::size_t>(y)], n_pairs, n_repeats,
                             stream, policy);
}

Estimate simulate_bell_protocol(const Context& context, std::uint64_t n_pairs,
                                std::uint64_t n_repeats, const SeededStream& stream,
                                ExecutionPolicy policy) {
    // Group atoms by pair_component; within a group only the instrument
    // variables differ, so the wing marginals conditional on the group are
    // what a repeated measurement on the held pair samples.
    std::map<int, std::size_t> group_of;
    std::vector<double> weights;
    std::vector<double> wing_a_plus;
    std::vector<double> wing_b_plus;
    int synthetic = -2; // unique negative keys for atoms without a component
    for (const ContextAtom& atom : context.atoms) {
        const int key = atom.pair_component >= 0 ? atom.pair_component : synthetic--;
        auto [it, inserted] = group_of.try_emplace(key, weights.size());
        if (inserted) {
            weights.push_back(0.0);
            wing_a_plus.push_back(0.0);
            wing_b_plus.push_back(0.0);
        }
        const std::size_t g = it->second;
        weights[g] += atom.weight;
        if (atom.a > 0) wing_a_plus[g] += atom.weight;
        if (atom.b > 0) wing_b_plus[g] += atom.weight;
    }
    for (std::size_t g = 0; g < weights.size(); ++g) {
        if (weights[g] > 0.0) {
            wing_a_plus[g] /= weights[g];
            wing_b_plus[g] /= weights[g];
        }
    }
    return protocol_estimate(weights, wing_a_plus, wing_b_plus, n_pairs, n_repeats, stream, policy);
}

Estimate simulate_bell_protocol(const ContextualModel& model, int x, int y, std::uint64_t n_pairs,
                                std::uint64_t n_repeats, const SeededStream& stream,
                                ExecutionPolicy policy) {
    return simulate_bell_protocol(model.context_for(x, y), n_pairs, n_repeats, stream, policy);
}

double CorrelationTable::at(int x, int y) const {
    auto it = entries.find({x, y});
    if (it == entries.end()) {
        std::ostringstream msg;
        msg << "correlation table: missing entry (" << x << ", " << y << ")";
        throw std::out_of_range(msg.str());
    }
    return it->second;
}

void CorrelationTable::set(int x, int y, double e) {
    if (e < -1.0 || e > 1.0)
        throw std::invalid_argument("correlation table: |E| > 1");
    entries[{x, y}] = e;
}

double chsh_value(const CorrelationTable& table, int x1, int x2, int y1, int y2) {
    return table.at(x1, y1) - table.at(x1, y2) + table.at(x2, y1) + table.at(x2, y2);
}

double chsh_of_strategy(int a1, int a2, int b1, int b2) {
    return static_cast<double>(a1 * b1 - a1 * b2 + a2 * b1 + a2 * b2);
}

double max_chsh_over_deterministic() {
    double best = 0.0;
    for (int a1 : {-1, 1})
        for (int a2 : {-1, 1})
            for (int b1 : {-1, 1})
                for (int b2 : {-1, 1})
                    best = std::max(best, std::abs(chsh_of_strategy(a1, a2, b1, b2)));
    return best;
}

void ScaledPairModel::validate() const {
    if (!(s > 0.0) || !(t > 0.0)) throw std::invalid_argument("scaled pair: need s, t > 0");
    c_density.validate();
}

ScaledPairMoments scaled_pair_moments(const ScaledPairModel& model) {
    model.validate();
    const double ec = model.c_density.mean();
    const double ec2 = model.c_density.second_moment();
    return {model.s * ec, model.t * ec, model.s * model.t * ec2,
            model.s * model.t * (ec2 - ec * ec)};
}

void ScaledPairSampleSummary::merge(const ScaledPairSampleSummary& other) {
    sum_a += other.sum_a;
    sum_b += other.sum_b;
    sum_ab += other.sum_ab;
    n += other.n;
    max_line_residual = std::max(max_line_residual, other.max_line_residual);
}

ScaledPairSampleSummary scaled_pair_simulate(const ScaledPairModel& model, std::uint64_t n,
                                             const SeededStream& stream, ExecutionPolicy policy) {
    if (n == 0) throw std::invalid_argument("scaled_pair_simulate: n = 0");
    model.validate();
    return run_chunked<ScaledPairSampleSummary>(
        stream, n,
        [&model](SeededStream& sub, std::uint64_t count, ScaledPairSampleSummary& out) {
            for (std::uint64_t i = 0; i < count; ++i) {
                const double c = model.c_density.sample(sub);
                const double a = model.s * c;
                const double b = model.t * c;
                out.sum_a += a;
                out.sum_b += b;
                out.sum_ab += a * b;
                out.n++;
                out.max_line_residual =
                    std::max(out.max_line_residual, std::abs(model.s * b - model.t * a));
            }
        },
        policy);
}

} // namespace bellsim
