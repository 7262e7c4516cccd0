#include "hypmin/grid.hpp"

#include "hypmin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace hypmin {

void LinearForm::add(int c, double w) {
  for (int k = 0; k < size; ++k) {
    if (col[k] == c) {
      weight[k] += w;
      return;
    }
  }
  if (size == kCapacity) throw GridError("stencil capacity exceeded");
  col[size] = c;
  weight[size] = w;
  ++size;
}

void LinearForm::scale(double s) {
  for (int k = 0; k < size; ++k) weight[k] *= s;
  boundary *= s;
}

namespace {

constexpr std::array<std::array<int, 2>, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<std::array<int, 2>, 4> kDiagonals{{{1, 1}, {-1, -1}, {-1, 1}, {1, -1}}};

void add_value(LinearForm& f, int neighbor, double w) {
  if (neighbor >= 0) {
    f.add(neighbor, w);
  } else {
    f.add_boundary(w);
  }
}

// Second difference with arms (plus, minus) along one axis.
void second_difference(LinearForm& f, int self, int plus, int minus, double tp, double tm,
                       double h) {
  const double cp = 2.0 / (h * h * tp * (tp + tm));
  const double cm = 2.0 / (h * h * tm * (tp + tm));
  add_value(f, plus, cp);
  add_value(f, minus, cm);
  f.add(self, -(cp + cm));
}

// Three-point first difference, second order for unequal arms.
void first_difference(LinearForm& f, int self, int plus, int minus, double tp, double tm,
                      double h) {
  const double denom = h * tp * tm * (tp + tm);
  const double a = tm * tm / denom;
  const double b = tp * tp / denom;
  add_value(f, plus, a);
  add_value(f, minus, -b);
  f.add(self, b - a);
}

}  // namespace

Grid::Grid(DomainSpec domain, double h) : domain_(std::move(domain)), h_(h) {
  if (!(h_ > 0.0)) throw ConfigError("grid spacing must be positive");
  diameter_ = hypmin::diameter(domain_, 512);
  if (h_ > diameter_ / 16.0) throw GridError("grid too coarse: h must be <= diameter / 16");

  const auto pts = boundary_samples(domain_, 512);
  Point lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  i0_ = static_cast<int>(std::floor(lo.x() / h_)) - 2;
  j0_ = static_cast<int>(std::floor(lo.y() / h_)) - 2;
  nx_ = static_cast<int>(std::ceil(hi.x() / h_)) + 2 - i0_ + 1;
  ny_ = static_cast<int>(std::ceil(hi.y() / h_)) + 2 - j0_ + 1;
  index_.assign(static_cast<std::size_t>(nx_) * ny_, -1);

  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const Point x = position(i, j);
      if (!contains(domain_, x)) continue;
      const double d = boundary_distance(domain_, x);
      if (d < kMinArm * h_) continue;
      index_[static_cast<std::size_t>(j) * nx_ + i] = static_cast<int>(nodes_.size());
      GridNode node;
      node.i = i;
      node.j = j;
      node.x = x;
      node.boundary_distance = d;
      nodes_.push_back(node);
    }
  }
  if (nodes_.empty()) throw GridError("grid too coarse: no interior points");

  // Single component check.
  std::vector<char> seen(nodes_.size(), 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const auto& n = nodes_[queue.front()];
    queue.pop();
    for (const auto& step : kSteps) {
      const int k = index_of(n.i + step[0], n.j + step[1]);
      if (k >= 0 && !seen[k]) {
        seen[k] = 1;
        ++reached;
        queue.push(k);
      }
    }
  }
  if (reached != nodes_.size()) throw GridError("grid too coarse: interior mask is disconnected");

  for (auto& n : nodes_) {
    for (int dir = 0; dir < 4; ++dir) {
      const int k = index_of(n.i + kSteps[dir][0], n.j + kSteps[dir][1]);
      if (k >= 0) {
        n.neighbor[dir] = k;
        n.arm[dir] = 1.0;
        continue;
      }
      const Point e(kSteps[dir][0], kSteps[dir][1]);
      const double t = ray_exit(domain_, n.x, e);
      n.arm[dir] = std::clamp(t / h_, kMinArm, 1.0);
    }
    for (int dir = 0; dir < 4; ++dir) {
      const auto& step = kDiagonals[dir];
      const int k = index_of(n.i + step[0], n.j + step[1]);
      if (k >= 0) {
        n.diagonal_neighbor[dir] = k;
        n.diagonal_arm[dir] = 1.0;
        continue;
      }
      const Point e = Point(step[0], step[1]).normalized();
      const double t = ray_exit(domain_, n.x, e);
      n.diagonal_arm[dir] = std::clamp(t / (std::sqrt(2.0) * h_), kMinArm, 1.0);
    }
    n.squared_form = n.boundary_distance < kSquaredBand * diameter_;
    for (int dir = 0; dir < 4; ++dir)
      if (n.neighbor[dir] < 0 || n.diagonal_neighbor[dir] < 0) n.squared_form = true;

    // Directions come in opposite pairs (0, 1) and (2, 3). With the boundary
    // at -t and the opposite nodes at 1 and 2 (in units of the step), the
    // Lagrange weights at 0 follow.
    double shortest = kInterpolationArm;
    auto consider = [&](double t, std::array<int, 2> step) {
      if (!(t < shortest)) return;
      const int q0 = index_of(n.i - step[0], n.j - step[1]);
      if (q0 < 0) return;
      shortest = t;
      const int q1 = index_of(n.i - 2 * step[0], n.j - 2 * step[1]);
      n.interpolation_nodes = {q0, q1};
      if (q1 >= 0) {
        n.interpolation_boundary_weight = 2.0 / ((1.0 + t) * (2.0 + t));
        n.interpolation_weights = {2.0 * t / (1.0 + t), -t / (2.0 + t)};
      } else {
        n.interpolation_boundary_weight = 1.0 / (1.0 + t);
        n.interpolation_weights = {t / (1.0 + t), 0.0};
      }
    };
    for (int dir = 0; dir < 4; ++dir) {
      consider(n.arm[dir], kSteps[dir]);
      consider(n.diagonal_arm[dir], kDiagonals[dir]);
    }
  }
  build_stencils();
}

Point Grid::position(int i, int j) const {
  return {static_cast<double>(i0_ + i) * h_, static_cast<double>(j0_ + j) * h_};
}

int Grid::index_of(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
  return index_[static_cast<std::size_t>(j) * nx_ + i];
}

int Grid::locate(const Point& x) const {
  const double fi = x.x() / h_ - i0_;
  const double fj = x.y() / h_ - j0_;
  const double ri = std::round(fi), rj = std::round(fj);
  if (std::abs(fi - ri) > 1e-6 || std::abs(fj - rj) > 1e-6) return -1;
  return index_of(static_cast<int>(ri), static_cast<int>(rj));
}

std::array<int, 2> Grid::cell_of(const Point& x) const {
  return {static_cast<int>(std::floor(x.x() / h_ - i0_)),
          static_cast<int>(std::floor(x.y() / h_ - j0_))};
}

void Grid::build_stencils() {
  stencils_.resize(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const auto& n = nodes_[k];
    const int self = static_cast<int>(k);
    auto& st = stencils_[k];
    second_difference(st.dxx, self, n.neighbor[kEast], n.neighbor[kWest], n.arm[kEast],
                      n.arm[kWest], h_);
    second_difference(st.dyy, self, n.neighbor[kNorth], n.neighbor[kSouth], n.arm[kNorth],
                      n.arm[kSouth], h_);
    first_difference(st.dx, self, n.neighbor[kEast], n.neighbor[kWest], n.arm[kEast],
                     n.arm[kWest], h_);
    first_difference(st.dy, self, n.neighbor[kNorth], n.neighbor[kSouth], n.arm[kNorth],
                     n.arm[kSouth], h_);

    // Mixed derivative as (u_ss - u_tt) / 2 along the two diagonals. With
    // all eight neighbors present this is the centered cross stencil.
    LinearForm diag_ne, diag_nw;
    const double hd = std::sqrt(2.0) * h_;
    second_difference(diag_ne, self, n.diagonal_neighbor[0], n.diagonal_neighbor[1],
                      n.diagonal_arm[0], n.diagonal_arm[1], hd);
    second_difference(diag_nw, self, n.diagonal_neighbor[2], n.diagonal_neighbor[3],
                      n.diagonal_arm[2], n.diagonal_arm[3], hd);
    for (int t = 0; t < diag_ne.size; ++t) st.dxy.add(diag_ne.col[t], 0.5 * diag_ne.weight[t]);
    for (int t = 0; t < diag_nw.size; ++t) st.dxy.add(diag_nw.col[t], -0.5 * diag_nw.weight[t]);
    st.dxy.add_boundary(0.5 * (diag_ne.boundary - diag_nw.boundary));
  }
}

Grid build_grid(const DomainSpec& domain, double h) { return Grid(domain, h); }

}  // namespace hypmin
