#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "tabletop/error.hpp"

namespace tabletop::geom {

// Quickhull in D dimensions with simplicial facets. Points within
// `tolerance` of a facet hyperplane count as inside, so coplanar input yields
// several coplanar simplices rather than merged facets.
template <int D>
class Quickhull {
 public:
  using Point = Eigen::Matrix<double, D, 1>;

  struct Facet {
    std::array<int, D> vertices{};
    Point normal = Point::Zero();  // unit, pointing away from the hull
    double offset = 0.0;           // normal . x == offset on the hyperplane
  };

  // Throws DegenerateInput when the points do not span D dimensions, and
  // std::runtime_error when round-off breaks the facet topology.
  static std::vector<Facet> compute(const std::vector<Point>& points, double tolerance) {
    Quickhull hull(points, tolerance);
    hull.run();
    std::vector<Facet> out;
    for (const auto& f : hull.facets_) {
      if (f.alive) out.push_back(Facet{f.vertices, f.normal, f.offset});
    }
    return out;
  }

  // Largest signed distance of any point above any facet.
  static double max_violation(const std::vector<Point>& points, const std::vector<Facet>& facets) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& f : facets) {
      for (const auto& p : points) worst = std::max(worst, f.normal.dot(p) - f.offset);
    }
    return worst;
  }

 private:
  struct Work {
    std::array<int, D> vertices{};
    std::array<int, D> neighbors{};
    Point normal = Point::Zero();
    double offset = 0.0;
    std::vector<int> outside;
    int furthest = -1;
    double furthest_distance = 0.0;
    bool alive = true;
    int visit = -1;
    bool visible = false;
  };

  using RidgeKey = std::array<int, D - 1>;

  Quickhull(const std::vector<Point>& points, double tolerance)
      : points_(points), tol_(tolerance) {}

  double distance(const Work& f, int p) const { return f.normal.dot(points_[static_cast<std::size_t>(p)]) - f.offset; }

  const Point& at(int i) const { return points_[static_cast<std::size_t>(i)]; }

  void set_plane(Work& f) const {
    // Orthonormal basis of the edge vectors (Gram-Schmidt, two passes), then
    // the coordinate axis with the largest residual gives the normal.
    std::array<Point, D - 1> q;
    for (int k = 1; k < D; ++k) {
      Point e = at(f.vertices[static_cast<std::size_t>(k)]) - at(f.vertices[0]);
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < k - 1; ++j) e -= q[static_cast<std::size_t>(j)].dot(e) * q[static_cast<std::size_t>(j)];
      }
      const double len = e.norm();
      q[static_cast<std::size_t>(k - 1)] = len > 0.0 ? Point(e / len) : Point::Zero();
    }
    Point n = Point::Zero();
    double best = -1.0;
    for (int axis = 0; axis < D; ++axis) {
      Point r = Point::Unit(axis);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : q) r -= v.dot(r) * v;
      }
      const double len = r.squaredNorm();
      if (len > best) {
        best = len;
        n = r;
      }
    }
    n.normalize();
    if (n.dot(interior_ - at(f.vertices[0])) > 0.0) n = -n;
    double off = 0.0;
    for (int v : f.vertices) off += n.dot(at(v));
    f.normal = n;
    f.offset = off / D;
  }

  std::vector<int> initial_simplex() const {
    const int n = static_cast<int>(points_.size());
    if (n < D + 1) throw Error(ErrorCode::DegenerateInput, "too few points for a hull");
    int first = 0;
    for (int i = 1; i < n; ++i) {
      if (at(i)[0] < at(first)[0]) first = i;
    }
    std::vector<int> simplex{first};
    std::vector<Point> basis;
    while (static_cast<int>(simplex.size()) < D + 1) {
      int best = -1;
      double best_d = tol_;
      Point best_r = Point::Zero();
      for (int i = 0; i < n; ++i) {
        Point r = at(i) - at(first);
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& b : basis) r -= b.dot(r) * b;
        }
        const double d = r.norm();
        if (d > best_d) {
          best_d = d;
          best = i;
          best_r = r;
        }
      }
      if (best < 0) throw Error(ErrorCode::DegenerateInput, "points do not span the space");
      simplex.push_back(best);
      basis.push_back(best_r / best_d);
    }
    return simplex;
  }

  void assign(int p, const std::vector<int>& candidates) {
    for (int fi : candidates) {
      Work& f = facets_[static_cast<std::size_t>(fi)];
      const double d = distance(f, p);
      if (d > tol_) {
        f.outside.push_back(p);
        if (d > f.furthest_distance || f.furthest < 0) {
          f.furthest_distance = d;
          f.furthest = p;
        }
        return;
      }
    }
  }

  static RidgeKey ridge_key(const std::array<int, D>& vertices, int skip) {
    RidgeKey key{};
    int j = 0;
    for (int k = 0; k < D; ++k) {
      if (k != skip) key[static_cast<std::size_t>(j++)] = vertices[static_cast<std::size_t>(k)];
    }
    std::sort(key.begin(), key.end());
    return key;
  }

  void run() {
    const auto simplex = initial_simplex();
    interior_ = Point::Zero();
    for (int v : simplex) interior_ += at(v);
    interior_ /= static_cast<double>(D + 1);

    std::vector<int> all;
    for (int i = 0; i <= D; ++i) {
      Work f;
      int k = 0;
      for (int j = 0; j <= D; ++j) {
        if (j == i) continue;
        f.vertices[static_cast<std::size_t>(k)] = simplex[static_cast<std::size_t>(j)];
        f.neighbors[static_cast<std::size_t>(k)] = j;
        ++k;
      }
      set_plane(f);
      facets_.push_back(std::move(f));
      all.push_back(i);
    }
    std::vector<char> in_simplex(points_.size(), 0);
    for (int v : simplex) in_simplex[static_cast<std::size_t>(v)] = 1;
    for (int p = 0; p < static_cast<int>(points_.size()); ++p) {
      if (!in_simplex[static_cast<std::size_t>(p)]) assign(p, all);
    }

    std::vector<int> pending = all;
    int stamp = 0;
    while (!pending.empty()) {
      const int fi = pending.back();
      Work& start = facets_[static_cast<std::size_t>(fi)];
      if (!start.alive || start.outside.empty()) {
        pending.pop_back();
        continue;
      }
      const int apex = start.furthest;
      ++stamp;

      // Visible region by flood fill from the starting facet.
      std::vector<int> visible{fi};
      start.visit = stamp;
      start.visible = true;
      for (std::size_t q = 0; q < visible.size(); ++q) {
        const auto nbs = facets_[static_cast<std::size_t>(visible[q])].neighbors;
        for (int h : nbs) {
          Work& g = facets_[static_cast<std::size_t>(h)];
          if (g.visit == stamp) continue;
          g.visit = stamp;
          g.visible = distance(g, apex) > tol_;
          if (g.visible) visible.push_back(h);
        }
      }

      std::vector<int> created;
      struct Open {
        RidgeKey key;
        int facet;
        int slot;
      };
      std::vector<Open> open;
      for (int vi : visible) {
        for (int k = 0; k < D; ++k) {
          const int h = facets_[static_cast<std::size_t>(vi)].neighbors[static_cast<std::size_t>(k)];
          const Work& other = facets_[static_cast<std::size_t>(h)];
          if (other.visit == stamp && other.visible) continue;
          Work nf;
          nf.vertices = facets_[static_cast<std::size_t>(vi)].vertices;
          nf.vertices[static_cast<std::size_t>(k)] = apex;
          nf.neighbors.fill(-1);
          nf.neighbors[static_cast<std::size_t>(k)] = h;
          set_plane(nf);
          const int ni = static_cast<int>(facets_.size());
          facets_.push_back(std::move(nf));
          Work& hor = facets_[static_cast<std::size_t>(h)];
          for (auto& nb : hor.neighbors) {
            if (nb == vi) nb = ni;
          }
          for (int m = 0; m < D; ++m) {
            if (m != k) open.push_back({ridge_key(facets_[static_cast<std::size_t>(ni)].vertices, m), ni, m});
          }
          created.push_back(ni);
        }
      }
      // New facets meet pairwise along ridges through the apex.
      std::sort(open.begin(), open.end(), [](const Open& a, const Open& b) { return a.key < b.key; });
      bool paired = open.size() % 2 == 0;
      for (std::size_t q = 0; paired && q < open.size(); q += 2) {
        if (open[q].key != open[q + 1].key || (q + 2 < open.size() && open[q + 2].key == open[q].key)) {
          paired = false;
          break;
        }
        facets_[static_cast<std::size_t>(open[q].facet)].neighbors[static_cast<std::size_t>(open[q].slot)] =
            open[q + 1].facet;
        facets_[static_cast<std::size_t>(open[q + 1].facet)]
            .neighbors[static_cast<std::size_t>(open[q + 1].slot)] = open[q].facet;
      }
      if (!paired) throw std::runtime_error("quickhull: inconsistent horizon");

      for (int vi : visible) {
        Work& v = facets_[static_cast<std::size_t>(vi)];
        v.alive = false;
        std::vector<int> orphans;
        orphans.swap(v.outside);
        for (int p : orphans) {
          if (p != apex) assign(p, created);
        }
      }
      for (int ni : created) {
        if (!facets_[static_cast<std::size_t>(ni)].outside.empty()) pending.push_back(ni);
      }
    }
  }

  const std::vector<Point>& points_;
  double tol_;
  Point interior_ = Point::Zero();
  std::vector<Work> facets_;
};

}  // namespace tabletop::geom
