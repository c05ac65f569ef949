#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "isscert/pdelab/model.hpp"

namespace isscert {

using SparseMat = Eigen::SparseMatrix<double>;
using SparseSolver = Eigen::SparseLU<SparseMat>;

struct ModelImpl {
  ModelKind kind;
  InputChannel channel;
  int N = 0;
  double L = 1.0, h = 0.0, dt = 0.0;
  int comps = 1;
  int size = 0;
  int input_size = 0;
  std::map<std::string, double> params;

  // Grid kinds: x' = lin x + explicit(x, u); pinned rows stay at zero.
  SparseMat lin;
  std::vector<char> pinned;
  std::shared_ptr<SparseSolver> solver;  // factor of I - dt*lin

  double p(const char* name) const { return params.at(name); }
  bool implicit() const { return lin.rows() > 0; }
};

// Factor I - dt*lin with identity rows at pinned nodes.
std::shared_ptr<SparseSolver> factor_step(const ModelImpl& m, double dt);

// Explicit part of the right-hand side (nonlinearity and input).
void explicit_rhs(const ModelImpl& m, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  Eigen::VectorXd& out);

// Network right-hand side; ensemble right-hand side ignores u.
void network_rhs(const ModelImpl& m, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                 Eigen::VectorXd& out);
void ensemble_rhs(const ModelImpl& m, const Eigen::VectorXd& x, Eigen::VectorXd& out);

}  // namespace isscert
