#pragma once

// Brute-force space-time reference. Every form is integrated by its own
// tensor Gauss rule over each prism with shape functions obtained from a 3x3
// solve per triangle; nothing here calls the library's element matrices,
// sweeps or quadrature tables.

#include <Eigen/Dense>
#include <functional>

#include "dbc/mesh.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Fn = std::function<double(double, double, double)>;

class DenseOracle {
 public:
  explicit DenseOracle(dbc::MeshPtr mesh);

  int state_size() const { return nw_; }
  int control_size() const { return nq_; }

  /// B(trial, test) with test functions from the state space. Columns
  /// [0, nw) are state trials, [nw, nw + nq) control trials.
  const Mat& form() const { return bfull_; }
  Mat state_block() const { return bfull_.leftCols(nw_); }
  Mat coupling_block() const { return bfull_.rightCols(nq_); }
  /// L2(Omega x I) Gram matrix of the combined basis (state, then control).
  const Mat& gram() const { return gram_; }
  /// Space-time H1 seminorm on the control basis.
  const Mat& seminorm() const { return semi_; }
  /// sum_m k_m (grad v_m, grad v_m) as a matrix on the state basis.
  const Mat& energy() const { return energy_; }

  /// (f, v)_I + (u0, v_1) for every state test function.
  Vec state_load(const Fn& f, const std::function<double(double, double)>& u0) const;
  /// (g, b)_I for every combined basis function b.
  Vec gram_load(const Fn& g) const;
  double norm2(const Fn& g) const;
  Vec interpolate(const Fn& g) const;

  /// State coefficients for control q.
  Vec state(const Vec& q, const Vec& load) const;
  /// d(state)/dq.
  Mat sensitivity() const;
  /// Reduced Hessian lambda A + P^T G P with P = [sensitivity; I].
  Mat hessian(double lambda) const;

  struct Problem {
    double lambda = 1.0;
    Fn source, target, shift;
    std::function<double(double, double)> initial;
  };
  double objective(const Problem& p, const Vec& q) const;
  Vec gradient(const Problem& p, const Vec& q) const;

 private:
  struct Local {
    int index;      // in the combined basis
    double value;
    double dx, dy;  // spatial gradient
    double dt;
  };
  template <class Visit>
  void for_each_point(Visit&& visit) const;

  dbc::MeshPtr mesh_;
  int nw_ = 0;
  int nq_ = 0;
  Mat bfull_, gram_, semi_, energy_;
};

}  // namespace oracle
