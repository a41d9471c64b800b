#include "anytime/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace anytime {

double pairing(const DualVector& g, const Vector& h) {
  if (g.dim() != h.dim()) {
    throw std::invalid_argument("pairing: dimension mismatch " + std::to_string(g.dim()) +
                                " vs " + std::to_string(h.dim()));
  }
  return g.coords().dot(h.coords());
}

double dual_norm(const DualVector& g, Norm kind) {
  if (kind == Norm::L1) throw std::invalid_argument("dual_norm: l1 is not a shipped dual norm");
  return g.norm(kind);
}

double primal_norm(const Vector& h, Norm kind) {
  if (kind == Norm::LInf) throw std::invalid_argument("primal_norm: linf is not a shipped primal norm");
  return h.norm(kind);
}

Norm dual_of(Norm primal) {
  switch (primal) {
    case Norm::L2: return Norm::L2;
    case Norm::L1: return Norm::LInf;
    case Norm::LInf: return Norm::L1;
  }
  return Norm::L2;
}

// ---------------------------------------------------------------------------
// FeasibleSet

FeasibleSet FeasibleSet::l2_ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("l2_ball: radius must be positive and finite");
  }
  return FeasibleSet(Kind::L2Ball, std::move(center), radius);
}

FeasibleSet FeasibleSet::simplex(Index dim) {
  if (dim < 1) throw std::invalid_argument("simplex: dimension must be >= 1");
  return FeasibleSet(Kind::Simplex, Vector::constant(dim, 1.0 / static_cast<double>(dim)), 0.0);
}

double FeasibleSet::diameter() const {
  if (kind_ == Kind::L2Ball) return 2.0 * radius_;
  return dim() > 1 ? std::sqrt(2.0) : 0.0;
}

bool FeasibleSet::contains(const Vector& h, double tol) const {
  if (h.dim() != dim()) return false;
  if (kind_ == Kind::L2Ball) return (h.coords() - center_.coords()).norm() <= radius_ + tol;
  if (h.coords().minCoeff() < -tol) return false;
  return std::abs(h.coords().sum() - 1.0) <= tol;
}

namespace {

Eigen::VectorXd project_simplex(const Eigen::VectorXd& y) {
  // Sort-based projection onto {x >= 0, sum x = 1}.
  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  return (y.array() - tau).max(0.0).matrix();
}

}  // namespace

Vector FeasibleSet::project(const Vector& h) const {
  center_.check_same_dim(h);
  if (kind_ == Kind::L2Ball) {
    const Eigen::VectorXd offset = h.coords() - center_.coords();
    const double dist = offset.norm();
    if (dist <= radius_) return h;
    return Vector(center_.coords() + (radius_ / dist) * offset);
  }
  if (contains(h, 0.0)) return h;
  return Vector(project_simplex(h.coords()));
}

double FeasibleSet::support_width(const DualVector& g) const {
  if (g.dim() != dim()) throw std::invalid_argument("support_width: dimension mismatch");
  if (kind_ == Kind::L2Ball) return 2.0 * radius_ * g.coords().norm();
  return g.coords().maxCoeff() - g.coords().minCoeff();
}

// ---------------------------------------------------------------------------
// MirrorMap

namespace {

void require_positive(const Vector& v, const char* what) {
  if (v.coords().minCoeff() <= 0.0) {
    throw DomainError(std::string(what) + ": entropy map needs strictly positive coordinates");
  }
}

void require_nonnegative(const Vector& v, const char* what) {
  if (v.coords().minCoeff() < 0.0) {
    throw DomainError(std::string(what) + ": entropy map needs nonnegative coordinates");
  }
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double MirrorMap::potential(const Vector& h) const {
  if (kind_ == Kind::Euclidean) return 0.5 * h.coords().squaredNorm();
  require_nonnegative(h, "potential");
  double sum = 0.0;
  for (Index i = 0; i < h.dim(); ++i) sum += xlogx(h[i]);
  return sum;
}

DualVector MirrorMap::gradient(const Vector& h) const {
  if (kind_ == Kind::Euclidean) return DualVector(h.coords());
  require_positive(h, "gradient");
  return DualVector((h.coords().array().log() + 1.0).matrix());
}

Vector MirrorMap::gradient_inverse(const DualVector& theta) const {
  if (kind_ == Kind::Euclidean) return Vector(theta.coords());
  return Vector((theta.coords().array() - 1.0).exp().matrix());
}

double MirrorMap::bregman(const Vector& u, const Vector& v) const {
  u.check_same_dim(v);
  if (kind_ == Kind::Euclidean) return 0.5 * (u.coords() - v.coords()).squaredNorm();
  require_nonnegative(u, "bregman");
  require_positive(v, "bregman");
  // sum u log(u/v) - u + v, with 0 log 0 = 0.
  double sum = 0.0;
  for (Index i = 0; i < u.dim(); ++i) {
    const double ui = u[i];
    const double vi = v[i];
    sum += (ui > 0.0 ? ui * std::log(ui / vi) : 0.0) - ui + vi;
  }
  return std::max(sum, 0.0);
}

Vector MirrorMap::project(const FeasibleSet& set, const Vector& point) const {
  if (kind_ == Kind::Euclidean) return set.project(point);
  if (set.kind() != FeasibleSet::Kind::Simplex) {
    throw std::invalid_argument("entropy mirror map is only supported on the simplex");
  }
  require_nonnegative(point, "project");
  Eigen::VectorXd p = point.coords().cwiseMax(kEntropyFloor);
  p /= p.sum();
  return Vector(std::move(p));
}

double MirrorMap::bregman_diameter(const FeasibleSet& set) const {
  if (kind_ == Kind::Euclidean) {
    const double d = set.diameter();
    return 0.5 * d * d;
  }
  if (set.kind() != FeasibleSet::Kind::Simplex) {
    throw std::invalid_argument("entropy mirror map is only supported on the simplex");
  }
  return set.dim() > 1 ? std::numeric_limits<double>::infinity() : 0.0;
}

double bregman(const MirrorMap& map, const Vector& u, const Vector& v) { return map.bregman(u, v); }

Vector project(const FeasibleSet& set, const Vector& h) { return set.project(h); }

Vector project(const FeasibleSet& set, const MirrorMap& map, const Vector& h) {
  return map.project(set, h);
}

}  // namespace anytime
