// graph.hpp — finite weighted graphs with killing, transition matrices, and
// Green-matrix determinants.
//
// The Green matrix G^D is the inverse of the restriction of (lambda_x d_{x,y}
// - C_{x,y}) to D x D. Complete graphs with unit conductances and constant
// killing take a closed-form path evaluated in log space; everything else
// goes through pivoted dense factorization. Determinant ratios are always
// exponentials of log-determinant differences: det G underflows doubles near
// n ~ 150 while every ratio stays O(1).
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "json.hpp"
#include "loopsoup/partition.hpp"

namespace loopsoup {

struct CompleteGraphParams {
  int n = 2;            // vertex count, >= 2
  double kappa = 1.0;   // constant killing rate, > 0
};

class GraphSpec {
 public:
  // Validates: conductances symmetric with zero diagonal and nonnegative
  // entries, killing nonnegative with at least one positive entry, and
  // lambda_x = sum_y C_{x,y} + kappa_x > 0 for every x.
  GraphSpec(Eigen::MatrixXd conductances, Eigen::VectorXd killing);
  static GraphSpec complete(const CompleteGraphParams& params);

  int size() const { return static_cast<int>(killing_.size()); }
  const Eigen::MatrixXd& conductances() const { return conductances_; }
  const Eigen::VectorXd& killing() const { return killing_; }
  const Eigen::VectorXd& lambda() const { return lambda_; }

  // Unit conductances + constant killing: the Lemma 2.1 closed forms apply.
  bool is_complete() const { return complete_kappa_.has_value(); }
  double complete_kappa() const { return *complete_kappa_; }

  nlohmann::json to_json() const;
  static GraphSpec from_json(const nlohmann::json& j);

 private:
  Eigen::MatrixXd conductances_;
  Eigen::VectorXd killing_;
  Eigen::VectorXd lambda_;
  std::optional<double> complete_kappa_;
};

struct TransitionMatrix {
  Eigen::MatrixXd p;      // P_{x,y} = C_{x,y} / lambda_x
  double spectral_bound;  // largest |eigenvalue|, < 1 when killing is present
};

TransitionMatrix build_transition(const GraphSpec& g);

// log det G^D. subset must be nonempty with distinct in-range vertices;
// subset = all vertices gives log det G. Throws if the restricted matrix is
// numerically singular.
double green_logdet(const GraphSpec& g, std::span<const int> subset);
double green_det(const GraphSpec& g, std::span<const int> subset);

// Dense-factorization route, ignoring the complete-graph fast path. Kept
// callable so the two routes can be checked against each other.
double green_logdet_dense(const GraphSpec& g, std::span<const int> subset);

// prod_i det(G^{B_i}) / det(G) over the blocks of pi; in (0,1], equal to 1
// iff pi is the single-block partition.
double det_ratio(const GraphSpec& g, const Partition& pi);
double log_det_ratio(const GraphSpec& g, const Partition& pi);

}  // namespace loopsoup
