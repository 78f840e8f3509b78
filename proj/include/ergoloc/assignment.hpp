#pragma once

#include <vector>

#include "ergoloc/qmat.hpp"

namespace ergoloc {

struct Assignment {
  double cost = 0.0;
  std::vector<int> column;  // column[i] is the column assigned to row i
};

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(n^3), shortest augmenting paths with potentials).
Assignment solve_assignment(const RealMatrix& cost);

}  // namespace ergoloc
