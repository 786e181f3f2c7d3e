#ifndef HMD_TYPES_HPP
#define HMD_TYPES_HPP

#include <Eigen/Dense>
#include <vector>

namespace hmd {

using Real = double;
using Index = int;

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

// The density, measure and normalized spaces are isomorphic copies of R^V;
// the aliases record which coordinates a function expects or returns.
using DensityVector = Vector;     // f
using MeasureVector = Vector;     // phi = W f
using NormalizedVector = Vector;  // x = W^{1/2} f

// Sorted list of vertex ids.
using VertexSet = std::vector<Index>;

}  // namespace hmd

#endif
