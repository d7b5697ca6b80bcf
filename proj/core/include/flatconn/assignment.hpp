#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flatconn {

// Minimum-cost perfect assignment on a dense n x n row-major cost matrix
// (Hungarian method with potentials, O(n^3)). Returns the column assigned to
// each row. Costs must be finite.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n);

}  // namespace flatconn
