#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nnpart/lp.hpp"

namespace nnpart {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// (box ∩ halfspaces) ⊕ expansion·B, halfspaces read ⟨a, v⟩ ≤ b with unit a.
///
/// Constraints of the polytope part are indexed uniformly for the solvers:
/// [0, d) are the upper box faces, [d, 2d) the lower box faces, and 2d + j
/// is halfspace j.
class ConvexBody {
 public:
  ConvexBody(Eigen::VectorXd lower, Eigen::VectorXd upper, double expansion = 0.0);

  static ConvexBody cube(Eigen::Index dim, double lo, double hi);

  Eigen::Index dimension() const { return lower_.size(); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  double expansion() const { return expansion_; }

  Eigen::Index halfspace_count() const { return rows_; }
  auto normals() const { return normals_.topRows(rows_); }
  auto offsets() const { return offsets_.head(rows_); }

  /// Appends ⟨normal, v⟩ ≤ offset, rescaling so the stored normal is unit.
  void add_halfspace(const Eigen::VectorXd& normal, double offset);

  ConvexBody expanded(double z) const;
  ConvexBody polytope() const { return expanded(0.0); }

  Eigen::Index constraint_count() const { return 2 * dimension() + rows_; }
  Eigen::VectorXd constraint_normal(Eigen::Index idx) const;
  double constraint_offset(Eigen::Index idx) const;

  /// Largest violation of the polytope constraints (box and halfspaces).
  double polytope_violation(const Eigen::VectorXd& point) const;
  bool polytope_contains(const Eigen::VectorXd& point, double tol = 1e-9) const {
    return polytope_violation(point) <= tol;
  }

  /// Polytope part as an LP feasibility problem in the same coordinates.
  LinearProgram to_linear_program() const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  RowMatrixXd normals_;
  Eigen::VectorXd offsets_;
  Eigen::Index rows_ = 0;
  double expansion_ = 0.0;
};

/// Euclidean projection onto the polytope part by Dykstra's alternating
/// projections over the box and each halfspace.
Eigen::VectorXd project_onto_polytope(const ConvexBody& body, const Eigen::VectorXd& point,
                                      double tol = 1e-14, int max_sweeps = 200000);

double distance_to_polytope(const ConvexBody& body, const Eigen::VectorXd& point);

/// True iff the point lies in the body, to 1e-9 in distance.
bool membership(const ConvexBody& body, const Eigen::VectorXd& point);

/// A vertex of the polytope part and the constraints that pin it down.
struct Vertex {
  Eigen::VectorXd point;
  std::vector<Eigen::Index> active;
  Eigen::MatrixXd basis_inverse;  // inverse of the matrix of active normals (rows)
};

/// The corner of the box where every upper face is tight.
Vertex box_corner(const ConvexBody& body);

struct SupportPoint {
  double value = 0.0;
  Vertex vertex;
};

/// max ⟨c, v⟩ over the polytope part, walking vertex to vertex from `start`
/// (a dual simplex on the active set with Bland's rule).
SupportPoint maximize_from(const ConvexBody& body, const Eigen::VectorXd& c, Vertex start);

/// A vertex of the polytope part, or nullopt if it is empty.
std::optional<Vertex> find_vertex(const ConvexBody& body);

/// Support function h(c) = max over the body of ⟨c, v⟩, expansion included.
/// Throws EmptyBodyError on an empty body.
double support(const ConvexBody& body, const Eigen::VectorXd& c);

/// Bodies above this dimension use the tableau solver instead of the
/// active-set walk (whose basis inverse is dense d×d).
inline constexpr Eigen::Index kActiveSetMaxDim = 640;

/// max ⟨c, v⟩ over the polytope part using whichever solver suits the shape.
SupportPoint maximize_polytope(const ConvexBody& body, const Eigen::VectorXd& c);

struct InscribedBall {
  Eigen::VectorXd center;
  double radius = 0.0;
};

/// Largest ball inside the polytope part (an LP in d + 1 variables), or
/// nullopt if the polytope is empty.
std::optional<InscribedBall> chebyshev_center(const ConvexBody& body);

}  // namespace nnpart
