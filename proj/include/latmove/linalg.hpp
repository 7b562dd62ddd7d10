#ifndef LATMOVE_LINALG_HPP
#define LATMOVE_LINALG_HPP

#include <optional>
#include <utility>
#include <vector>

#include "latmove/numeric.hpp"

namespace latmove {

// Exact integer linear algebra used by every predicate in the kernel.
// Everything here is fraction-free (Bareiss) or rational, never floating.

// Determinant of a square integer matrix.
Int det(std::vector<Vec> m);

// Rank of the row span of an integer matrix.
int linear_rank(std::vector<Vec> rows);

// Dimension of the affine hull: -1 for no points, 0 for a single point.
int affine_rank(const std::vector<Vec>& pts);

// Normal vector orthogonal to d-1 difference vectors in R^d, computed as the
// cofactor expansion of the matrix missing one column. Zero vector means the
// inputs do not span a hyperplane.
Vec generalized_cross(const std::vector<Vec>& diffs, int d);

// Hyperplane a.x = b through exactly d points, primitive a. Returns nothing
// when the points are affinely dependent.
std::optional<std::pair<Vec, Int>> hyperplane_through(const std::vector<Vec>& pts);

// One primitive integer vector spanning a direction of the kernel of the
// given row constraints (rows * c = 0). Returns nothing if the kernel is {0}.
std::optional<Vec> integer_kernel_vector(const std::vector<Vec>& rows, int d);

// Exact solution of a square rational system; nothing when singular.
std::optional<std::vector<Rat>> solve_rational(std::vector<std::vector<Rat>> a, std::vector<Rat> b);

}  // namespace latmove

#endif
