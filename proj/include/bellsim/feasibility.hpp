#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bellsim {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-1/2" or exact decimals like "0.25".
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& value);

/// Does a joint distribution over n dichotomous +-1 variables exist with the
/// given pairwise (and optionally single) moments? The Boole / Vorob'ev
/// marginal problem, posed over the 2^n-atom outcome simplex.
struct MarginalProblem {
    int n = 3; // 3 or 4 supported
    std::map<std::pair<int, int>, Rational> pair_constraints;
    std::map<int, Rational> single_constraints;

    void validate() const;

    static MarginalProblem triple(const Rational& e12, const Rational& e13, const Rational& e23);
    /// Bipartite 4-cycle: variables (A1, A2, B1, B2) = (0, 1, 2, 3) with only
    /// the four cross moments E(Ai Bj) constrained; E(A1A2) and E(B1B2) are
    /// left free, matching what is physically measurable.
    static MarginalProblem chsh(const Rational& e11, const Rational& e12, const Rational& e21,
                                const Rational& e22);
};

/// Explicit joint distribution reproducing every constrained moment exactly.
/// Atom s is indexed by bitmask: bit i set means s_i = +1.
struct JointWitness {
    int n = 0;
    std::vector<Rational> atom_probabilities; // size 2^n
};

/// Separating hyperplane: constant + sum coeff*moment is >= 0 at every
/// deterministic atom but < 0 at the input constraints, so no distribution
/// can match them. Read directly as a violated Bell/Boole inequality.
struct InfeasibilityCertificate {
    int n = 0;
    Rational constant;
    std::map<std::pair<int, int>, Rational> pair_coefficients;
    std::map<int, Rational> single_coefficients;
};

using SolveResult = std::variant<JointWitness, InfeasibilityCertificate>;

/// Exact-rational phase-1 simplex (Bland's rule) over the atom simplex.
/// Witnesses and certificates are verified against their invariants before
/// being returned.
SolveResult solve(const MarginalProblem& problem);

bool verify_witness(const MarginalProblem& problem, const JointWitness& witness);
bool verify_certificate(const MarginalProblem& problem, const InfeasibilityCertificate& cert);

/// Value of s_i s_j at atom `mask` (bit set = +1).
inline int atom_pair_value(std::uint32_t mask, int i, int j) {
    const int si = (mask >> i) & 1 ? 1 : -1;
    const int sj = (mask >> j) & 1 ? 1 : -1;
    return si * sj;
}

struct FacetSlack {
    std::string name;
    Rational slack;
};

Rational min_slack(const std::vector<FacetSlack>& slacks);

/// The four inequalities 1 + s1*e12 + s2*e13 + s1*s2*e23 >= 0 over sign
/// choices s1, s2. The moments-only triple problem is feasible iff all four
/// slacks are non-negative.
std::vector<FacetSlack> triple_facets(const Rational& e12, const Rational& e13,
                                      const Rational& e23);

/// The eight CHSH inequalities 2 +- (sum with an odd number of minus signs)
/// >= 0. The 4-cycle problem is feasible iff all slacks are non-negative.
std::vector<FacetSlack> chsh_facets(const Rational& e11, const Rational& e12, const Rational& e21,
                                    const Rational& e22);

struct TripleRow {
    std::array<int, 3> s; // each +-1
};

using TripleDataset = std::vector<TripleRow>;

struct BooleReport {
    Rational e12, e13, e23;
    std::vector<FacetSlack> slacks;
    bool single_dataset = true;

    Rational min_slack() const { return bellsim::min_slack(slacks); }
};

/// Pairwise product averages of one dataset of triples, all three taken from
/// the SAME rows, plus their facet slacks. These are non-negative for every
/// dataset, which is Boole's point.
BooleReport boole_check(const TripleDataset& dataset);

/// The three averages come from unrelated runs; nothing protects the facets
/// and slacks may go negative.
BooleReport boole_check_separate(const Rational& e12, const Rational& e13, const Rational& e23);

} // namespace bellsim
