#include "tabletop/graspeval/wrench.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tabletop/error.hpp"
#include "tabletop/geom/pose.hpp"
#include "tabletop/geom/quickhull.hpp"
#include "tabletop/geom/rng.hpp"
#include "tabletop/graspeval/linear_program.hpp"

namespace tabletop::graspeval {
namespace {

using Hull = geom::Quickhull<6>;

// Relative singular value below which the wrench set is treated as flat.
constexpr double kRankTolerance = 1e-9;

Eigen::Vector3d tangent(const ContactPoint& c, const Eigen::Vector3d& origin) {
  const Eigen::Vector3d n = c.normal.normalized();
  const Eigen::Vector3d arm = c.position - origin;
  Eigen::Vector3d t = n.cross(arm);
  if (t.norm() > 1e-9 * std::max(1.0, arm.norm())) return t.normalized();
  return n.unitOrthogonal();
}

// Epsilon from a hull of `points`; negative when the hull cannot be trusted.
double hull_epsilon(const std::vector<Vector6d>& points, double scale, double jitter) {
  std::vector<Vector6d> work = points;
  if (jitter > 0.0) {
    Rng rng(0x5eed);
    for (auto& p : work) {
      for (int k = 0; k < 6; ++k) p[k] += jitter * scale * rng.uniform(-1.0, 1.0);
    }
  }
  try {
    const auto facets = Hull::compute(work, 1e-12 * scale);
    if (Hull::max_violation(work, facets) > 1e-9 * scale) return -1.0;
    double eps = std::numeric_limits<double>::infinity();
    for (const auto& f : facets) eps = std::min(eps, f.offset);
    const double noise = std::max(1e-11, 10.0 * jitter) * scale;
    return eps > noise ? eps : 0.0;
  } catch (const std::exception&) {
    return -1.0;
  }
}

// Fallback when no hull could be built: strict interiority from an LP
// (maximise the smallest convex weight of a combination hitting the origin),
// radius from the support function over fixed directions.
double lp_epsilon(const std::vector<Vector6d>& points) {
  const int n = static_cast<int>(points.size());
  // Variables: mu_i = lambda_i - s >= 0, s >= 0. sum(mu) + n s = 1,
  // W mu + (W 1) s = 0. Maximise s.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(7, n + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(7);
  Vector6d sum = Vector6d::Zero();
  for (int i = 0; i < n; ++i) {
    a.block<6, 1>(0, i) = points[static_cast<std::size_t>(i)];
    a(6, i) = 1.0;
    sum += points[static_cast<std::size_t>(i)];
  }
  a.block<6, 1>(0, n) = sum;
  a(6, n) = n;
  b(6) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = -1.0;
  const auto lp = solve_lp(a, b, c);
  if (lp.status != LpStatus::Optimal || lp.x(n) <= 1e-12) return 0.0;
  Rng rng(0xd1ec7);
  double eps = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4096; ++k) {
    Vector6d u;
    for (int j = 0; j < 6; ++j) u[j] = rng.uniform(-1.0, 1.0);
    if (u.norm() < 1e-3) continue;
    u.normalize();
    double support = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) support = std::max(support, u.dot(p));
    eps = std::min(eps, support);
  }
  return std::max(0.0, eps);
}

}  // namespace

void EvalConfig::validate() const {
  if (cone_edges < 3) throw Error(ErrorCode::InvalidArgument, "cone_edges must be at least 3");
  if (!(max_grip_force > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_grip_force must be positive");
  if (!(lift_wrench_scale > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "lift_wrench_scale must be positive");
  }
  if (!(gravity > 0.0)) throw Error(ErrorCode::InvalidArgument, "gravity must be positive");
}

std::vector<Eigen::Vector3d> cone_edges(const ContactPoint& contact, const Eigen::Vector3d& origin,
                                        int edges) {
  const Eigen::Vector3d n = contact.normal.normalized();
  const Eigen::Vector3d t1 = tangent(contact, origin);
  const Eigen::Vector3d t2 = n.cross(t1);
  std::vector<Eigen::Vector3d> out;
  out.reserve(static_cast<std::size_t>(edges));
  for (int k = 0; k < edges; ++k) {
    const double a = 2.0 * geom::kPi * k / edges;
    out.push_back(n + contact.friction * (std::cos(a) * t1 + std::sin(a) * t2));
  }
  return out;
}

double torque_scale(const std::vector<ContactPoint>& contacts, const Eigen::Vector3d& origin) {
  double rho = 0.0;
  for (const auto& c : contacts) rho = std::max(rho, (c.position - origin).norm());
  return rho > 0.0 ? rho : 1.0;
}

std::vector<Vector6d> primitive_wrenches(const std::vector<ContactPoint>& contacts,
                                         const Eigen::Vector3d& origin, int edges) {
  const double rho = torque_scale(contacts, origin);
  std::vector<Vector6d> out;
  out.reserve(contacts.size() * static_cast<std::size_t>(edges));
  for (const auto& c : contacts) {
    const Eigen::Vector3d arm = c.position - origin;
    for (const auto& e : cone_edges(c, origin, edges)) {
      const Eigen::Vector3d f = e.normalized();
      Vector6d w;
      w << f, arm.cross(f) / rho;
      out.push_back(w);
    }
  }
  return out;
}

double force_closure_epsilon(const std::vector<ContactPoint>& contacts,
                             const Eigen::Vector3d& origin, const EvalConfig& config) {
  if (contacts.size() < 2) return 0.0;
  const auto points = primitive_wrenches(contacts, origin, config.cone_edges);
  Eigen::Matrix<double, 6, Eigen::Dynamic> w(6, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) w.col(static_cast<Eigen::Index>(i)) = points[i];
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
  const auto& sv = svd.singularValues();
  if (sv.size() < 6 || sv(5) <= kRankTolerance * sv(0)) return 0.0;

  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, p.norm());
  for (double jitter : {0.0, 1e-9, 1e-7, 1e-5}) {
    const double eps = hull_epsilon(points, scale, jitter);
    if (eps >= 0.0) return eps;
  }
  return lp_epsilon(points);
}

bool can_resist_wrench(const std::vector<ContactPoint>& contacts, const Eigen::Vector3d& origin,
                       const Vector6d& wrench, const EvalConfig& config) {
  if (wrench.isZero(0.0)) return true;
  if (contacts.empty()) return false;
  // Torque rows divided by rho keep the system well scaled.
  const double rho = torque_scale(contacts, origin);
  const int m = config.cone_edges;
  const int n = static_cast<int>(contacts.size()) * m;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(7, n + 1);
  Eigen::VectorXd b(7);
  b << -wrench.head<3>(), -wrench.tail<3>() / rho, config.max_grip_force;
  int col = 0;
  for (const auto& c : contacts) {
    const Eigen::Vector3d arm = c.position - origin;
    for (const auto& e : cone_edges(c, origin, m)) {
      a.block<3, 1>(0, col) = e;
      a.block<3, 1>(3, col) = arm.cross(e) / rho;
      a(6, col) = 1.0;  // each edge carries unit normal force
      ++col;
    }
  }
  a(6, n) = 1.0;  // slack on the force budget
  const auto lp = solve_lp(a, b, Eigen::VectorXd::Zero(n + 1));
  if (lp.status != LpStatus::Optimal) return false;
  const Eigen::VectorXd residual = a * lp.x - b;
  const double tol = kFeasibilityTolerance * std::max(1.0, b.head<6>().cwiseAbs().maxCoeff());
  return residual.head<6>().cwiseAbs().maxCoeff() <= tol && residual(6) <= tol;
}

}  // namespace tabletop::graspeval
