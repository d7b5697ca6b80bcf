#pragma once

// Finite atomic distributions sum_i (delta_{x_i} - delta_{y_i}) on a domain,
// their canonical pole-pair forms, and their action on test functions.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "flatconn/geom.hpp"

namespace flatconn {

struct PolePair {
  Point2 x;  // positive pole
  Point2 y;  // negative pole
};

struct SignedAtom {
  Point2 location;
  int multiplicity = 0;
};

using SignedAtomList = std::vector<SignedAtom>;
using DomainPtr = std::shared_ptr<const Domain>;
using ScalarField = std::function<double(Point2)>;

class AtomicDistribution {
 public:
  // An empty pair list is the zero distribution.
  AtomicDistribution(DomainPtr domain, std::vector<PolePair> pairs);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::span<const PolePair> pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  // Flags are recomputed from the pairs at construction.
  bool satisfies_P() const { return satisfies_P_; }
  bool satisfies_Pf() const { return satisfies_Pf_; }

  // Factor c such that the represented measure is c * sum(delta_x - delta_y);
  // pi for Jacobians of S1-valued maps, 1 otherwise. Solvers ignore it.
  double measure_scale() const { return measure_scale_; }
  AtomicDistribution with_measure_scale(double scale) const;

 private:
  DomainPtr domain_;
  std::vector<PolePair> pairs_;
  bool satisfies_P_ = true;
  bool satisfies_Pf_ = true;
  double measure_scale_ = 1.0;
};

bool has_property_P(const AtomicDistribution& t);
bool has_property_Pf(const AtomicDistribution& t);

// Expands multiplicities into unit atoms and pairs + with - greedily by
// ascending distance (ties by index); leftovers go to their nearest boundary
// point. Atoms on the boundary act as zero and are dropped.
AtomicDistribution from_signed_atoms(const SignedAtomList& atoms, DomainPtr domain);

// Interior poles with signs, opposite unit atoms at the same point cancelled.
SignedAtomList to_signed_atoms(const AtomicDistribution& t);

AtomicDistribution to_property_P(const AtomicDistribution& t);
AtomicDistribution to_property_Pf(const AtomicDistribution& t);

double evaluate(const AtomicDistribution& t, const ScalarField& phi);

// beta * sum |x_i - y_i| over a representation with property (P).
double trivial_upper_bound(const AtomicDistribution& t, double beta);

// Restriction to the domain punctured at the given points: poles within
// eps_match of a puncture are removed and orphaned partners re-paired with
// their nearest boundary point of the punctured domain. eps_match <= 0 selects
// the default 1e-7 * diameter.
AtomicDistribution restrict(const AtomicDistribution& t, std::span<const Point2> punctures,
                            double eps_match = 0.0);

}  // namespace flatconn
