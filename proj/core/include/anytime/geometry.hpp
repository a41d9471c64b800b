#ifndef ANYTIME_GEOMETRY_HPP
#define ANYTIME_GEOMETRY_HPP

#include <Eigen/Dense>

#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>

namespace anytime {

using Index = Eigen::Index;

/// Norms used by the shipped geometries. L2 is self-dual; LInf is the dual of L1.
enum class Norm { L1, L2, LInf };

/// Thrown when a point leaves the domain of a potential (e.g. a zero coordinate
/// handed to the entropy map as the second Bregman argument).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PrimalTag {};
struct DualTag {};

/// Finite real vector of fixed dimension. The tag separates points of the
/// hypothesis space from linear functionals acting on them; the two only meet
/// through pairing().
template <class Tag>
class BasicVector {
 public:
  BasicVector() = default;

  explicit BasicVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1) throw std::invalid_argument("vector dimension must be >= 1");
    if (!coords_.allFinite()) throw DomainError("vector has non-finite entries");
  }

  BasicVector(std::initializer_list<double> values)
      : BasicVector(Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                                      static_cast<Index>(values.size()))) {}

  static BasicVector zeros(Index dim) { return BasicVector(Eigen::VectorXd::Zero(dim)); }
  static BasicVector constant(Index dim, double value) {
    return BasicVector(Eigen::VectorXd::Constant(dim, value));
  }

  Index dim() const { return coords_.size(); }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](Index i) const { return coords_[i]; }

  double norm(Norm kind) const {
    switch (kind) {
      case Norm::L1: return coords_.lpNorm<1>();
      case Norm::L2: return coords_.norm();
      case Norm::LInf: return coords_.lpNorm<Eigen::Infinity>();
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  BasicVector& operator+=(const BasicVector& o) {
    check_same_dim(o);
    coords_ += o.coords_;
    check_finite();
    return *this;
  }
  BasicVector& operator-=(const BasicVector& o) {
    check_same_dim(o);
    coords_ -= o.coords_;
    check_finite();
    return *this;
  }
  BasicVector& operator*=(double s) {
    coords_ *= s;
    check_finite();
    return *this;
  }

  friend BasicVector operator+(BasicVector a, const BasicVector& b) { return a += b; }
  friend BasicVector operator-(BasicVector a, const BasicVector& b) { return a -= b; }
  friend BasicVector operator*(double s, BasicVector a) { return a *= s; }
  friend BasicVector operator*(BasicVector a, double s) { return a *= s; }
  friend BasicVector operator-(BasicVector a) { return a *= -1.0; }
  friend bool operator==(const BasicVector& a, const BasicVector& b) {
    return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

  void check_same_dim(const BasicVector& o) const {
    if (o.dim() != dim()) {
      throw std::invalid_argument("dimension mismatch: " + std::to_string(dim()) + " vs " +
                                  std::to_string(o.dim()));
    }
  }

 private:
  void check_finite() const {
    if (!coords_.allFinite()) throw DomainError("vector has non-finite entries");
  }

  Eigen::VectorXd coords_;
};

using Vector = BasicVector<PrimalTag>;
using DualVector = BasicVector<DualTag>;

/// <g, h> = sum_i g_i h_i. Throws std::invalid_argument on dimension mismatch.
double pairing(const DualVector& g, const Vector& h);

/// Dual norm of a gradient. Accepts L2 (self-dual) or LInf (dual of L1).
double dual_norm(const DualVector& g, Norm kind);

/// Primal norm of a point or difference. Accepts L2 or L1.
double primal_norm(const Vector& h, Norm kind);

/// The dual norm matching a primal norm (L2 -> L2, L1 -> LInf).
Norm dual_of(Norm primal);

/// Closed convex feasible set: an L2 ball or the probability simplex.
class FeasibleSet {
 public:
  enum class Kind { L2Ball, Simplex };

  static FeasibleSet l2_ball(Vector center, double radius);
  static FeasibleSet simplex(Index dim);

  Kind kind() const { return kind_; }
  Index dim() const { return center_.dim(); }
  /// Diameter under the l2 norm: 2r for a ball, sqrt(2) for the simplex.
  double diameter() const;
  double radius() const { return radius_; }
  /// Ball center, or the barycenter of the simplex.
  const Vector& center() const { return center_; }

  bool contains(const Vector& h, double tol = 1e-12) const;
  /// Euclidean projection.
  Vector project(const Vector& h) const;
  /// sup over h, h' in the set of <g, h - h'>.
  double support_width(const DualVector& g) const;

 private:
  FeasibleSet(Kind kind, Vector center, double radius)
      : kind_(kind), center_(std::move(center)), radius_(radius) {}

  Kind kind_;
  Vector center_;
  double radius_ = 0.0;
};

/// Mirror map potential. Euclidean: Phi(h) = |h|^2 / 2, 1-strongly convex in l2.
/// NegativeEntropy: Phi(h) = sum h_i log h_i, 1-strongly convex in l1 on the simplex.
class MirrorMap {
 public:
  enum class Kind { Euclidean, NegativeEntropy };

  /// Lower clamp applied to entropy iterates before they are reused.
  static constexpr double kEntropyFloor = 1e-12;

  explicit MirrorMap(Kind kind = Kind::Euclidean) : kind_(kind) {}
  static MirrorMap euclidean() { return MirrorMap(Kind::Euclidean); }
  static MirrorMap negative_entropy() { return MirrorMap(Kind::NegativeEntropy); }

  Kind kind() const { return kind_; }
  double strong_convexity() const { return 1.0; }
  Norm primal_norm() const { return kind_ == Kind::Euclidean ? Norm::L2 : Norm::L1; }
  Norm dual_norm() const { return kind_ == Kind::Euclidean ? Norm::L2 : Norm::LInf; }

  double potential(const Vector& h) const;
  DualVector gradient(const Vector& h) const;
  /// Inverse of the gradient map: the point whose mirror image is theta.
  Vector gradient_inverse(const DualVector& theta) const;
  double bregman(const Vector& u, const Vector& v) const;
  /// argmin over the set of B(h; point).
  Vector project(const FeasibleSet& set, const Vector& point) const;
  /// sup over the set of B(h; h'). Infinite for the entropy map on the simplex.
  double bregman_diameter(const FeasibleSet& set) const;

 private:
  Kind kind_;
};

double bregman(const MirrorMap& map, const Vector& u, const Vector& v);
Vector project(const FeasibleSet& set, const Vector& h);
Vector project(const FeasibleSet& set, const MirrorMap& map, const Vector& h);

}  // namespace anytime

#endif  // ANYTIME_GEOMETRY_HPP
