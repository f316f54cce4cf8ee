#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bellsim/feasibility.hpp"
#include "bellsim/rng.hpp"

using namespace bellsim;

namespace {

Rational certificate_value(const MarginalProblem& problem, const InfeasibilityCertificate& cert) {
    Rational v = cert.constant;
    for (const auto& [pair, coeff] : cert.pair_coefficients)
        v += coeff * problem.pair_constraints.at(pair);
    for (const auto& [idx, coeff] : cert.single_coefficients)
        v += coeff * problem.single_constraints.at(idx);
    return v;
}

Rational random_moment(SeededStream& s) {
    // Rational in [-1, 1] with denominator up to 20.
    const std::int64_t den = 1 + static_cast<std::int64_t>(s.next_u64() % 20);
    const std::int64_t num = static_cast<std::int64_t>(s.next_u64() % (2 * den + 1)) - den;
    return Rational(num, den);
}

} // namespace

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-1/2") == Rational(-1, 2));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("-0.125") == Rational(-1, 8));
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK(rational_to_string(Rational(-1, 2)) == "-1/2");
    CHECK(rational_to_string(Rational(2)) == "2");
}

TEST_CASE("perfectly aligned triple is feasible with an exact witness") {
    const auto problem = MarginalProblem::triple(1, 1, 1);
    const auto result = solve(problem);
    REQUIRE(std::holds_alternative<JointWitness>(result));
    const auto& witness = std::get<JointWitness>(result);
    CHECK(verify_witness(problem, witness));
    Rational total = 0;
    for (const auto& p : witness.atom_probabilities) {
        CHECK(p >= 0);
        total += p;
    }
    CHECK(total == 1);
}

TEST_CASE("fully anticorrelated triple is infeasible, certificate evaluates to -2") {
    const auto problem = MarginalProblem::triple(-1, -1, -1);
    const auto result = solve(problem);
    REQUIRE(std::holds_alternative<InfeasibilityCertificate>(result));
    const auto& cert = std::get<InfeasibilityCertificate>(result);
    CHECK(verify_certificate(problem, cert));
    CHECK(certificate_value(problem, cert) == -2);
}

TEST_CASE("the (1, -1, -1/2) triple is infeasible; certificate is a unit facet") {
    const auto problem = MarginalProblem::triple(1, -1, Rational(-1, 2));
    const auto result = solve(problem);
    REQUIRE(std::holds_alternative<InfeasibilityCertificate>(result));
    const auto& cert = std::get<InfeasibilityCertificate>(result);
    CHECK(verify_certificate(problem, cert));
    CHECK(cert.constant == 1);
    CHECK(cert.single_coefficients.empty());
    for (const auto& [pair, coeff] : cert.pair_coefficients)
        CHECK((coeff == 1 || coeff == -1 || coeff == 0));
    CHECK(certificate_value(problem, cert) == Rational(-1, 2));
}

TEST_CASE("triple facet slacks") {
    const auto at_zero = triple_facets(0, 0, 0);
    REQUIRE(at_zero.size() == 4);
    for (const auto& f : at_zero) CHECK(f.slack == 1);

    CHECK(min_slack(triple_facets(-1, -1, -1)) == -2);
    CHECK(min_slack(triple_facets(1, -1, Rational(-1, 2))) == Rational(-1, 2));
    CHECK(min_slack(triple_facets(1, 1, 1)) == 0);
    CHECK(min_slack(triple_facets(Rational(1, 2), 0, 0)) == Rational(1, 2));
}

TEST_CASE("CHSH facet slacks") {
    const auto at_zero = chsh_facets(0, 0, 0, 0);
    REQUIRE(at_zero.size() == 8);
    for (const auto& f : at_zero) CHECK(f.slack == 2);

    // Rational approximation of the quantum singlet table at optimal angles:
    // every moment is +-0.707107, combination reaches ~2.828 > 2.
    const Rational q(707107, 1000000);
    CHECK(min_slack(chsh_facets(-q, -q, -q, q)) < 0);

    // (1, 1, 1, -1) maximizes a facet combination at 4, so it lies outside.
    CHECK(min_slack(chsh_facets(1, 1, 1, -1)) == -2);
    CHECK(min_slack(chsh_facets(1, 1, 1, 1)) == 0);
}

TEST_CASE("LP and facet checks agree on random triples") {
    SeededStream s(31);
    int infeasible_seen = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const Rational e12 = random_moment(s);
        const Rational e13 = random_moment(s);
        const Rational e23 = random_moment(s);
        const auto problem = MarginalProblem::triple(e12, e13, e23);
        const auto result = solve(problem);
        const bool lp_feasible = std::holds_alternative<JointWitness>(result);
        const bool facets_ok = min_slack(triple_facets(e12, e13, e23)) >= 0;
        REQUIRE(lp_feasible == facets_ok);
        if (lp_feasible) {
            CHECK(verify_witness(problem, std::get<JointWitness>(result)));
        } else {
            infeasible_seen++;
            const auto& cert = std::get<InfeasibilityCertificate>(result);
            CHECK(verify_certificate(problem, cert));
            CHECK(certificate_value(problem, cert) < 0);
        }
    }
    CHECK(infeasible_seen > 0); // the sweep exercises both branches
}

TEST_CASE("LP and facet checks agree on random CHSH tables") {
    SeededStream s(32);
    int infeasible_seen = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const Rational e11 = random_moment(s);
        const Rational e12 = random_moment(s);
        const Rational e21 = random_moment(s);
        const Rational e22 = random_moment(s);
        const auto problem = MarginalProblem::chsh(e11, e12, e21, e22);
        const auto result = solve(problem);
        const bool lp_feasible = std::holds_alternative<JointWitness>(result);
        const bool facets_ok = min_slack(chsh_facets(e11, e12, e21, e22)) >= 0;
        REQUIRE(lp_feasible == facets_ok);
        if (!lp_feasible) {
            infeasible_seen++;
            CHECK(verify_certificate(problem, std::get<InfeasibilityCertificate>(result)));
        }
    }
    CHECK(infeasible_seen > 0);
}

TEST_CASE("single constraints participate") {
    MarginalProblem problem = MarginalProblem::triple(1, 1, 1);
    problem.single_constraints[0] = 1;
    problem.single_constraints[1] = -1; // clashes with e12 = 1
    const auto result = solve(problem);
    REQUIRE(std::holds_alternative<InfeasibilityCertificate>(result));
    CHECK(verify_certificate(problem, std::get<InfeasibilityCertificate>(result)));

    MarginalProblem ok = MarginalProblem::triple(1, 1, 1);
    ok.single_constraints[0] = 1;
    ok.single_constraints[1] = 1;
    ok.single_constraints[2] = 1;
    const auto fine = solve(ok);
    REQUIRE(std::holds_alternative<JointWitness>(fine));
    const auto& witness = std::get<JointWitness>(fine);
    CHECK(verify_witness(ok, witness));
    CHECK(witness.atom_probabilities[0b111] == 1);
}

TEST_CASE("problem validation") {
    MarginalProblem bad = MarginalProblem::triple(2, 0, 0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    MarginalProblem bad_index = MarginalProblem::triple(0, 0, 0);
    bad_index.single_constraints[7] = 0;
    CHECK_THROWS_AS(bad_index.validate(), std::invalid_argument);
}

TEST_CASE("pair product averages of one dataset always satisfy the facets") {
    SeededStream s(33);
    for (int rep = 0; rep < 200; ++rep) {
        TripleDataset dataset;
        const int rows = 1 + static_cast<int>(s.next_u64() % 40);
        for (int i = 0; i < rows; ++i)
            dataset.push_back({{s.bernoulli(0.5) ? 1 : -1, s.bernoulli(0.5) ? 1 : -1,
                                s.bernoulli(0.5) ? 1 : -1}});
        const BooleReport report = boole_check(dataset);
        CHECK(report.single_dataset);
        CHECK(report.min_slack() >= 0);
    }
    CHECK_THROWS_AS(boole_check({}), std::invalid_argument);
}

TEST_CASE("separately sourced averages can break the facets") {
    const BooleReport report = boole_check_separate(1, -1, Rational(-1, 2));
    CHECK_FALSE(report.single_dataset);
    CHECK(report.min_slack() == Rational(-1, 2));
}
