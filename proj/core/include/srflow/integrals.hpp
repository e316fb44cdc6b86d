#ifndef SRFLOW_INTEGRALS_HPP
#define SRFLOW_INTEGRALS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "srflow/carnot.hpp"
#include "srflow/phase_poly.hpp"

namespace srflow::integrals {

using poly::PhasePolynomial;

/// A named family of claimed first integrals for one catalog system.
/// members[0] is the Hamiltonian. Extras commute with H but are not part of
/// the involutive family; identities are claimed polynomial relations.
struct IntegralSet {
    std::string system;
    std::vector<std::pair<std::string, PhasePolynomial>> members;
    bool claimed_involutive = true;
    int claimed_independent = 0;

    struct Extra {
        std::string name;
        PhasePolynomial value;
    };
    std::vector<Extra> extras;

    struct Identity {
        std::string name;
        PhasePolynomial lhs, rhs;
    };
    std::vector<Identity> identities;
};

/// True iff {H, F} is the zero polynomial.
bool check_commute(const PhasePolynomial& H, const PhasePolynomial& F);

/// Pairwise involutivity table; entry (j, k) is true iff {I_j, I_k} == 0.
std::vector<std::vector<bool>> check_involutive(const IntegralSet& set);

bool all_involutive(const std::vector<std::vector<bool>>& table);

/// Exact polynomial equality.
bool check_identity(const PhasePolynomial& lhs, const PhasePolynomial& rhs);

struct PhasePoint {
    std::vector<Rational> x, p;
};

/// Deterministic pseudo-random rational phase-space points (fixed seed).
std::vector<PhasePoint> sample_points(int D, int count, std::uint64_t seed = 0x5eed1234abcdull);

/// Exact rank of the members' Jacobian in all 2D phase variables, maximized
/// over the given points. A positive value is a rigorous lower bound for
/// the generic rank.
int jacobian_rank_at(const IntegralSet& set, const std::vector<PhasePoint>& points);

/// The claimed integral families of the built-in systems (possibly several
/// per system, e.g. the alternative involutive family in dimension 4).
std::vector<IntegralSet> integral_sets_for(const std::string& name);

/// The family {H, p_3, ..., p_D} shared by every obstruct-ready system;
/// used for user-supplied systems and the parametric gen6 entry.
IntegralSet noether_family(const carnot::SRSystem& sys);

} // namespace srflow::integrals

#endif
