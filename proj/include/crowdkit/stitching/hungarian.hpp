#pragma once

#include <vector>

namespace crowdkit {

// Minimum-cost perfect matching on a square cost matrix (shortest augmenting
// path / Jonker-Volgenant style, O(n^3)). Throws on non-square or non-finite
// input. Returns col_of_row: the column assigned to each row.
std::vector<int> hungarian_assign(const std::vector<std::vector<double>>& cost);

double assignment_cost(const std::vector<std::vector<double>>& cost,
                       const std::vector<int>& col_of_row);

}  // namespace crowdkit
