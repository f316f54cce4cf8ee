#include "bellsim/feasibility.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bellsim {

using boost::multiprecision::cpp_int;

namespace {

// Decimal-only integer parse. The cpp_int string constructor reads a
// leading 0 as octal, so digits are validated and stripped here instead.
cpp_int parse_decimal_int(const std::string& text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        pos++;
    }
    if (pos == text.size()) throw std::invalid_argument("rational: malformed '" + text + "'");
    for (std::size_t i = pos; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("rational: malformed '" + text + "'");
    while (pos + 1 < text.size() && text[pos] == '0') pos++;
    const cpp_int value(text.substr(pos));
    return negative ? -value : value;
}

} // namespace

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("rational: empty string");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const cpp_int num = parse_decimal_int(text.substr(0, slash));
        const cpp_int den = parse_decimal_int(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
        const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        const std::size_t frac_len = text.size() - dot - 1;
        cpp_int den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rational(parse_decimal_int(digits), den);
    }
    return Rational(parse_decimal_int(text));
}

std::string rational_to_string(const Rational& value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

void MarginalProblem::validate() const {
    if (n < 3 || n > 4) throw std::invalid_argument("marginal problem: only n = 3 or 4 supported");
    auto check_value = [](const Rational& v) {
        if (v < -1 || v > 1)
            throw std::invalid_argument("marginal problem: moment outside [-1, 1]");
    };
    for (const auto& [ij, v] : pair_constraints) {
        const auto [i, j] = ij;
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw std::invalid_argument("marginal problem: bad pair index");
        check_value(v);
    }
    for (const auto& [i, v] : single_constraints) {
        if (i < 0 || i >= n) throw std::invalid_argument("marginal problem: bad single index");
        check_value(v);
    }
}

MarginalProblem MarginalProblem::triple(const Rational& e12, const Rational& e13,
                                        const Rational& e23) {
    MarginalProblem p;
    p.n = 3;
    p.pair_constraints[{0, 1}] = e12;
    p.pair_constraints[{0, 2}] = e13;
    p.pair_constraints[{1, 2}] = e23;
    return p;
}

MarginalProblem MarginalProblem::chsh(const Rational& e11, const Rational& e12, const Rational& e21,
                                      const Rational& e22) {
    MarginalProblem p;
    p.n = 4;
    p.pair_constraints[{0, 2}] = e11;
    p.pair_constraints[{0, 3}] = e12;
    p.pair_constraints[{1, 2}] = e21;
    p.pair_constraints[{1, 3}] = e22;
    return p;
}

namespace {

/// Dense phase-1 simplex tableau in exact rationals. Columns: the 2^n atom
/// probabilities, then one artificial per row, then the rhs. Bland's rule
/// keeps it finite; the problem never exceeds 11 rows by 27 columns.
struct Phase1Result {
    bool feasible = false;
    std::vector<Rational> solution; // atom probabilities when feasible
    std::vector<Rational> farkas_y; // y with y.A <= 0, y.b > 0 when infeasible
};

Phase1Result phase1_simplex(const std::vector<std::vector<Rational>>& rows_in,
                            const std::vector<Rational>& rhs_in) {
    const std::size_t m = rows_in.size();
    const std::size_t n_atoms = rows_in.empty() ? 0 : rows_in[0].size();
    const std::size_t n_cols = n_atoms + m;

    // Sign-normalize so every rhs is >= 0; remember the flips for recovering
    // the Farkas vector of the original rows.
    std::vector<int> flip(m, 1);
    std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(n_cols + 1));
    for (std::size_t r = 0; r < m; ++r) {
        const int f = rhs_in[r] < 0 ? -1 : 1;
        flip[r] = f;
        for (std::size_t c = 0; c < n_atoms; ++c) tab[r][c] = f * rows_in[r][c];
        tab[r][n_atoms + r] = 1;
        tab[r][n_cols] = f * rhs_in[r];
    }

    // Reduced-cost row for minimizing the sum of artificials; obj holds the
    // negated objective value.
    std::vector<Rational> cost(n_cols);
    Rational obj = 0;
    for (std::size_t c = 0; c < n_atoms; ++c)
        for (std::size_t r = 0; r < m; ++r) cost[c] -= tab[r][c];
    for (std::size_t r = 0; r < m; ++r) obj -= tab[r][n_cols];

    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = n_atoms + r;

    for (;;) {
        // Bland: entering column = lowest index with negative reduced cost.
        std::size_t enter = n_cols;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (cost[c] < 0) {
                enter = c;
                break;
            }
        }
        if (enter == n_cols) break;

        // Ratio test; ties broken by lowest basis index (Bland).
        std::size_t leave = m;
        Rational best_ratio = 0;
        for (std::size_t r = 0; r < m; ++r) {
            if (tab[r][enter] <= 0) continue;
            const Rational ratio = tab[r][n_cols] / tab[r][enter];
            if (leave == m || ratio < best_ratio ||
                (ratio == best_ratio && basis[r] < basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave == m)
            throw std::logic_error("phase1: unbounded (cannot happen with bounded objective)");

        // Pivot.
        const Rational pivot = tab[leave][enter];
        for (std::size_t c = 0; c <= n_cols; ++c) tab[leave][c] /= pivot;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || tab[r][enter] == 0) continue;
            const Rational factor = tab[r][enter];
            for (std::size_t c = 0; c <= n_cols; ++c) tab[r][c] -= factor * tab[leave][c];
        }
        if (cost[enter] != 0) {
            const Rational factor = cost[enter];
            for (std::size_t c = 0; c < n_cols; ++c) cost[c] -= factor * tab[leave][c];
            obj -= factor * tab[leave][n_cols];
        }
        basis[leave] = enter;
    }

    Phase1Result result;
    if (obj == 0) {
        result.feasible = true;
        result.solution.assign(n_atoms, Rational(0));
        for (std::size_t r = 0; r < m; ++r)
            if (basis[r] < n_atoms) result.solution[basis[r]] = tab[r][n_cols];
    } else {
        // At optimality the dual vector satisfies y.A <= 0 (original columns
        // have reduced cost -y.A >= 0) and y.b = objective > 0. Recover y
        // from the artificial columns' reduced costs: rc_r = 1 - y_r.
        result.farkas_y.assign(m, Rational(0));
        for (std::size_t r = 0; r < m; ++r)
            result.farkas_y[r] = flip[r] * (Rational(1) - cost[n_atoms + r]);
    }
    return result;
}

Rational moment_at_input(const MarginalProblem& p, int i, int j) {
    auto it = p.pair_constraints.find({i, j});
    if (it != p.pair_constraints.end()) return it->second;
    throw std::logic_error("moment_at_input: missing pair");
}

} // namespace

SolveResult solve(const MarginalProblem& problem) {
    problem.validate();
    const std::uint32_t n_atoms = 1u << problem.n;

    // Rows: normalization, then singles, then pairs, in map order.
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    rows.emplace_back(n_atoms, Rational(1));
    rhs.push_back(1);
    std::vector<int> single_rows;
    for (const auto& [i, v] : problem.single_constraints) {
        std::vector<Rational> row(n_atoms);
        for (std::uint32_t s = 0; s < n_atoms; ++s) row[s] = (s >> i) & 1 ? 1 : -1;
        rows.push_back(std::move(row));
        rhs.push_back(v);
        single_rows.push_back(i);
    }
    std::vector<std::pair<int, int>> pair_rows;
    for (const auto& [ij, v] : problem.pair_constraints) {
        std::vector<Rational> row(n_atoms);
        for (std::uint32_t s = 0; s < n_atoms; ++s) row[s] = atom_pair_value(s, ij.first, ij.second);
        rows.push_back(std::move(row));
        rhs.push_back(v);
        pair_rows.push_back(ij);
    }

    Phase1Result lp = phase1_simplex(rows, rhs);

    if (lp.feasible) {
        JointWitness witness;
        witness.n = problem.n;
        witness.atom_probabilities = std::move(lp.solution);
        if (!verify_witness(problem, witness))
            throw std::logic_error("solve: witness failed verification");
        return witness;
    }

    // Farkas y gives y.A <= 0 and y.b > 0; the certificate functional is -y.
    InfeasibilityCertificate cert;
    cert.n = problem.n;
    cert.constant = -lp.farkas_y[0];
    std::size_t r = 1;
    for (int i : single_rows) cert.single_coefficients[i] = -lp.farkas_y[r++];
    for (const auto& ij : pair_rows) cert.pair_coefficients[ij] = -lp.farkas_y[r++];

    // Normalize to the familiar Bell/Boole scale: constant 1 for triples,
    // 2 for the CHSH cycle; fall back to unit leading coefficient.
    const Rational target = problem.n == 3 ? 1 : 2;
    Rational scale = 0;
    if (cert.constant > 0) {
        scale = target / cert.constant;
    } else {
        Rational max_abs = 0;
        for (const auto& [ij, c] : cert.pair_coefficients) {
            const Rational a = abs(c);
            if (a > max_abs) max_abs = a;
        }
        for (const auto& [i, c] : cert.single_coefficients) {
            const Rational a = abs(c);
            if (a > max_abs) max_abs = a;
        }
        if (max_abs > 0) scale = 1 / max_abs;
    }
    if (scale > 0) {
        cert.constant *= scale;
        for (auto& [ij, c] : cert.pair_coefficients) c *= scale;
        for (auto& [i, c] : cert.single_coefficients) c *= scale;
    }

    if (!verify_certificate(problem, cert))
        throw std::logic_error("solve: certificate failed verification");
    return cert;
}

bool verify_witness(const MarginalProblem& problem, const JointWitness& witness) {
    const std::uint32_t n_atoms = 1u << problem.n;
    if (witness.atom_probabilities.size() != n_atoms) return false;
    Rational total = 0;
    for (const Rational& p : witness.atom_probabilities) {
        if (p < 0) return false;
        total += p;
    }
    if (total != 1) return false;
    for (const auto& [ij, v] : problem.pair_constraints) {
        Rational moment = 0;
        for (std::uint32_t s = 0; s < n_atoms; ++s)
            moment += witness.atom_probabilities[s] * atom_pair_value(s, ij.first, ij.second);
        if (moment != v) return false;
    }
    for (const auto& [i, v] : problem.single_constraints) {
        Rational moment = 0;
        for (std::uint32_t s = 0; s < n_atoms; ++s)
            moment += witness.atom_probabilities[s] * ((s >> i) & 1 ? 1 : -1);
        if (moment != v) return false;
    }
    return true;
}

bool verify_certificate(const MarginalProblem& problem, const InfeasibilityCertificate& cert) {
    const std::uint32_t n_atoms = 1u << problem.n;
    // Non-negative at every deterministic atom...
    for (std::uint32_t s = 0; s < n_atoms; ++s) {
        Rational value = cert.constant;
        for (const auto& [ij, c] : cert.pair_coefficients)
            value += c * atom_pair_value(s, ij.first, ij.second);
        for (const auto& [i, c] : cert.single_coefficients)
            value += c * ((s >> i) & 1 ? 1 : -1);
        if (value < 0) return false;
    }
    // ...strictly negative at the input moments.
    Rational at_input = cert.constant;
    for (const auto& [ij, c] : cert.pair_coefficients)
        at_input += c * moment_at_input(problem, ij.first, ij.second);
    for (const auto& [i, c] : cert.single_coefficients) {
        auto it = problem.single_constraints.find(i);
        if (it == problem.single_constraints.end()) return false;
        at_input += c * it->second;
    }
    return at_input < 0;
}

Rational min_slack(const std::vector<FacetSlack>& slacks) {
    if (slacks.empty()) throw std::invalid_argument("min_slack: empty");
    Rational best = slacks.front().slack;
    for (const FacetSlack& f : slacks) best = std::min(best, f.slack);
    return best;
}

namespace {
const char* sign_str(int s) { return s > 0 ? "+" : "-"; }
} // namespace

std::vector<FacetSlack> triple_facets(const Rational& e12, const Rational& e13,
                                      const Rational& e23) {
    std::vector<FacetSlack> facets;
    for (int s1 : {+1, -1}) {
        for (int s2 : {+1, -1}) {
            std::ostringstream name;
            name << "1 " << sign_str(s1) << " e12 " << sign_str(s2) << " e13 "
                 << sign_str(s1 * s2) << " e23 >= 0";
            facets.push_back({name.str(), 1 + s1 * e12 + s2 * e13 + s1 * s2 * e23});
        }
    }
    return facets;
}

std::vector<FacetSlack> chsh_facets(const Rational& e11, const Rational& e12, const Rational& e21,
                                    const Rational& e22) {
    const std::array<Rational, 4> e{e11, e12, e21, e22};
    const std::array<const char*, 4> label{"e11", "e12", "e21", "e22"};
    std::vector<FacetSlack> facets;
    for (int minus_at = 0; minus_at < 4; ++minus_at) {
        Rational combo = 0;
        for (int k = 0; k < 4; ++k) combo += (k == minus_at ? -1 : 1) * e[k];
        for (int outer : {+1, -1}) {
            std::ostringstream name;
            name << "2 " << (outer > 0 ? "-" : "+") << " (";
            for (int k = 0; k < 4; ++k) {
                if (k > 0) name << " " << sign_str(k == minus_at ? -1 : 1) << " ";
                else if (minus_at == 0) name << "-";
                name << label[k];
            }
            name << ") >= 0";
            facets.push_back({name.str(), 2 - outer * combo});
        }
    }
    return facets;
}

BooleReport boole_check(const TripleDataset& dataset) {
    if (dataset.empty()) throw std::invalid_argument("boole_check: empty dataset");
    long long s12 = 0, s13 = 0, s23 = 0;
    for (const TripleRow& row : dataset) {
        for (int v : row.s)
            if (v != 1 && v != -1) throw std::invalid_argument("boole_check: entries must be +-1");
        s12 += row.s[0] * row.s[1];
        s13 += row.s[0] * row.s[2];
        s23 += row.s[1] * row.s[2];
    }
    const auto n = static_cast<long long>(dataset.size());
    BooleReport report;
    report.e12 = Rational(s12, n);
    report.e13 = Rational(s13, n);
    report.e23 = Rational(s23, n);
    report.slacks = triple_facets(report.e12, report.e13, report.e23);
    report.single_dataset = true;
    return report;
}

BooleReport boole_check_separate(const Rational& e12, const Rational& e13, const Rational& e23) {
    BooleReport report;
    report.e12 = e12;
    report.e13 = e13;
    report.e23 = e23;
    report.slacks = triple_facets(e12, e13, e23);
    report.single_dataset = false;
    return report;
}

} // namespace bellsim
