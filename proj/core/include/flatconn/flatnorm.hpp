#pragma once

// Flat norms of finite atomic distributions: min |R| + beta * |S| over
// decompositions T = R + dS into point charges R and segments S.

#include <cstddef>
#include <string>
#include <vector>

#include "flatconn/currents.hpp"

namespace flatconn {

// beta = 2 is the flat,alpha norm (alpha = 1/2), beta = 1 the classical flat norm.
// An unmatched interior charge always costs 1.
struct NormKind {
  double beta = 2.0;

  explicit NormKind(double b = 2.0);
};

// Partition {I_P, I_D} of the pair indices of the (P_f) form together with the
// injection tau: I_D -> I. dipole[k] is joined to the negative pole of pair tau[k].
struct MatchingAssignment {
  std::vector<std::size_t> charges;
  std::vector<std::size_t> dipoles;
  std::vector<std::size_t> tau;
  std::vector<Route> routes;  // per dipole: direct, or a hop to the boundary
};

// Segments run from the negative end a to the positive end b, so dS = delta_b - delta_a.
struct Decomposition {
  SignedAtomList R;
  std::vector<Segment> S;
  double value = 0.0;
  NormKind kind;
  MatchingAssignment assignment;
};

double mass_R(const SignedAtomList& r, const Domain& d);
double mass_S(const std::vector<Segment>& s, const Domain& d);

// Exhaustive search over partitions and injections. Refuses more than
// kBruteforceLimit pairs in the (P_f) form with GuardError.
inline constexpr std::size_t kBruteforceLimit = 8;
Decomposition solve_bruteforce(const AtomicDistribution& t, NormKind kind);

// Bipartite assignment of interior positives against interior negatives, each
// node also allowed to escape to a private boundary partner at cost
// min(1, beta * dist_to_boundary).
Decomposition solve_matching(const AtomicDistribution& t, NormKind kind);

enum class CheckStatus { pass, fail, skipped_degenerate, not_applicable };
std::string to_string(CheckStatus s);

struct StructureReport {
  CheckStatus a = CheckStatus::not_applicable;  // free charges far apart and deep
  CheckStatus b = CheckStatus::not_applicable;  // dipoles inside and short
  CheckStatus e = CheckStatus::not_applicable;  // single-point contacts only at common ends
  CheckStatus f = CheckStatus::not_applicable;  // overlaps never nested
  CheckStatus g = CheckStatus::not_applicable;  // disjoint in general position
  CheckStatus h = CheckStatus::not_applicable;  // |S| equals the sum of lengths
  bool degenerate = false;
  std::vector<std::string> notes;

  bool hard_failure() const;
};

// Structural properties of minimizers; (a)-(g) are only defined for beta = 2.
StructureReport verify_structure(const Decomposition& dec, const AtomicDistribution& t, const Domain& d);

}  // namespace flatconn
