#pragma once

#include "hypmin/geometry.hpp"

#include <array>
#include <vector>

namespace hypmin {

enum Direction : int { kEast = 0, kWest = 1, kNorth = 2, kSouth = 3 };

/// Sparse linear combination of nodal values plus a coefficient multiplying
/// the (uniform) boundary value.
struct LinearForm {
  static constexpr int kCapacity = 16;
  std::array<int, kCapacity> col{};
  std::array<double, kCapacity> weight{};
  int size = 0;
  double boundary = 0.0;

  void add(int c, double w);
  void add_boundary(double w) { boundary += w; }
  void scale(double s);

  template <class Vec>
  double apply(const Vec& u, double tau) const {
    double acc = boundary * tau;
    for (int k = 0; k < size; ++k) acc += weight[k] * u[col[k]];
    return acc;
  }
};

/// Difference operators at one interior node.
struct Stencil {
  LinearForm dx, dy, dxx, dyy, dxy;
};

struct GridNode {
  int i = 0;
  int j = 0;
  Point x;
  /// Fractional arm lengths in (0, 1], indexed by Direction.
  std::array<double, 4> arm{1.0, 1.0, 1.0, 1.0};
  /// Neighbor node index or -1 when the arm ends on the boundary.
  std::array<int, 4> neighbor{-1, -1, -1, -1};
  /// Same along the diagonals NE, SW, NW, SE, in units of sqrt(2) h.
  std::array<double, 4> diagonal_arm{1.0, 1.0, 1.0, 1.0};
  std::array<int, 4> diagonal_neighbor{-1, -1, -1, -1};
  double boundary_distance = 0.0;
  /// Difference quotients are applied to u^2 instead of u at this node.
  bool squared_form = false;
  /// Nodes with an arm shorter than kInterpolationArm drop the difference
  /// equation and interpolate u^2 along that line through the boundary point
  /// and the nodes on the opposite side:
  ///   u^2 = b tau^2 + w0 u_q0^2 + w1 u_q1^2.
  /// Quadratic when both q0 and q1 exist (q1 = -1 otherwise).
  std::array<int, 2> interpolation_nodes{-1, -1};
  std::array<double, 2> interpolation_weights{0.0, 0.0};
  double interpolation_boundary_weight = 0.0;
  bool interpolated() const { return interpolation_nodes[0] >= 0; }
};

/// Uniform Cartesian lattice clipped to a domain, with Shortley-Weller arms
/// and the difference stencils used by the solver.
class Grid {
 public:
  Grid(DomainSpec domain, double h);

  const DomainSpec& domain() const { return domain_; }
  double spacing() const { return h_; }
  double diameter() const { return diameter_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  const std::vector<GridNode>& nodes() const { return nodes_; }
  const GridNode& node(int k) const { return nodes_[k]; }
  const Stencil& stencil(int k) const { return stencils_[k]; }

  /// Lattice coordinates of a point: x = h * (i0 + i, j0 + j).
  Point position(int i, int j) const;
  /// Node index at lattice (i, j), or -1 when not an interior node.
  int index_of(int i, int j) const;
  /// Node index nearest to x if x is a lattice point (within 1e-6 h), else -1.
  int locate(const Point& x) const;
  /// Lower-left lattice coordinates of the cell containing x.
  std::array<int, 2> cell_of(const Point& x) const;

 private:
  void build_stencils();

  DomainSpec domain_;
  double h_;
  double diameter_ = 0.0;
  int i0_ = 0;
  int j0_ = 0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<int> index_;
  std::vector<GridNode> nodes_;
  std::vector<Stencil> stencils_;
};

/// Nodes closer than this fraction of h to the boundary are treated as
/// boundary points.
inline constexpr double kMinArm = 1e-6;

/// Width of the boundary band, relative to the diameter, in which the solver
/// differentiates u^2. Cut-cell nodes always belong to the band.
inline constexpr double kSquaredBand = 0.1;

/// Arm fraction below which a node switches to the interpolation equation.
/// Rows of nodes hugging a flat edge closer than about 0.1 h leave the
/// discrete problem without a reachable solution otherwise.
inline constexpr double kInterpolationArm = 0.25;

Grid build_grid(const DomainSpec& domain, double h);

}  // namespace hypmin
