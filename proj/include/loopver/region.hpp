#pragma once

#include <string>
#include <vector>

#include "loopver/contracts.hpp"

namespace loopver::resources {

enum class Truth { True, False, Unknown };

// Conjunction of linear constraints over (i, N). Regions produced by
// split_regions additionally decide every guard atom they were built from.
class Region {
 public:
  Region() = default;

  void add(const Constraint& c);
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool trivially_empty() const { return trivially_empty_; }

  bool contains(long long i, long long n) const;
  std::string str(const std::string& iter, const std::string& bound) const;

 private:
  std::vector<Constraint> constraints_;
  bool trivially_empty_ = false;
};

// Integer emptiness check; exact when every i-coefficient is a unit, which
// covers everything validate admits. Sound in general: "false" is a proof
// of emptiness.
bool feasible(const Region& r);

Truth decide(const Region& r, const Constraint& c);
Truth decide(const Region& r, const Guard& g);

// Refines the iteration space [lo,hi) x N by every guard atom of the given
// clauses plus the send/receive existence conditions is_iteration(i +- d).
// The result partitions {(i,N) : lo <= i < hi} (intersected with `extra`).
std::vector<Region> split_regions(const std::vector<NormClause>& clauses,
                                  const std::vector<long long>& send_distances,
                                  const LoopBounds& bounds,
                                  const std::vector<Constraint>& extra = {});

}  // namespace loopver::resources
