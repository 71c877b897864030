#include "loopsoup/graph.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace loopsoup {

namespace {

void check_subset(const GraphSpec& g, std::span<const int> subset) {
  if (subset.empty()) throw std::invalid_argument("green_det: empty subset");
  std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
  for (int v : subset) {
    if (v < 0 || v >= g.size()) throw std::invalid_argument("green_det: vertex out of range");
    if (seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("green_det: repeated vertex in subset");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

}  // namespace

GraphSpec::GraphSpec(Eigen::MatrixXd conductances, Eigen::VectorXd killing)
    : conductances_(std::move(conductances)), killing_(std::move(killing)) {
  const auto n = conductances_.rows();
  if (n < 2) throw std::invalid_argument("GraphSpec: need at least 2 vertices");
  if (conductances_.cols() != n || killing_.size() != n)
    throw std::invalid_argument("GraphSpec: dimension mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (conductances_(i, i) != 0.0)
      throw std::invalid_argument("GraphSpec: conductance diagonal must be zero");
    if (killing_(i) < 0.0) throw std::invalid_argument("GraphSpec: negative killing rate");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (conductances_(i, j) < 0.0)
        throw std::invalid_argument("GraphSpec: negative conductance");
      if (conductances_(i, j) != conductances_(j, i))
        throw std::invalid_argument("GraphSpec: conductances must be symmetric");
    }
  }
  if ((killing_.array() > 0.0).count() == 0)
    throw std::invalid_argument("GraphSpec: killing must be positive somewhere (Green matrix must exist)");
  lambda_ = conductances_.rowwise().sum() + killing_;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lambda_(i) > 0.0))
      throw std::invalid_argument("GraphSpec: lambda_x = sum_y C_{x,y} + kappa_x must be positive");
  }
  // Tag the Lemma 2.1 fast path: unit off-diagonal conductances, constant kappa.
  bool complete = true;
  for (Eigen::Index i = 0; i < n && complete; ++i) {
    if (killing_(i) != killing_(0)) complete = false;
    for (Eigen::Index j = 0; j < n && complete; ++j) {
      if (i != j && conductances_(i, j) != 1.0) complete = false;
    }
  }
  if (complete) complete_kappa_ = killing_(0);
}

GraphSpec GraphSpec::complete(const CompleteGraphParams& params) {
  if (params.n < 2) throw std::invalid_argument("CompleteGraphParams: n must be >= 2");
  if (!(params.kappa > 0.0)) throw std::invalid_argument("CompleteGraphParams: kappa must be positive");
  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(params.n, params.n);
  c.diagonal().setZero();
  Eigen::VectorXd k = Eigen::VectorXd::Constant(params.n, params.kappa);
  return GraphSpec(std::move(c), std::move(k));
}

nlohmann::json GraphSpec::to_json() const {
  nlohmann::json j;
  j["n"] = size();
  if (is_complete()) {
    j["kappa"] = complete_kappa();
    return j;
  }
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(size()) * static_cast<std::size_t>(size()));
  for (int i = 0; i < size(); ++i)
    for (int k = 0; k < size(); ++k) c.push_back(conductances_(i, k));
  j["conductances"] = c;
  j["killing"] = std::vector<double>(killing_.data(), killing_.data() + killing_.size());
  return j;
}

GraphSpec GraphSpec::from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  if (!j.contains("conductances")) {
    return complete({n, j.at("kappa").get<double>()});
  }
  const auto flat = j.at("conductances").get<std::vector<double>>();
  if (flat.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw std::invalid_argument("GraphSpec: conductances must be a dense n*n row-major array");
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) c(i, k) = flat[static_cast<std::size_t>(i * n + k)];
  Eigen::VectorXd kill;
  if (j.contains("killing")) {
    const auto kv = j.at("killing").get<std::vector<double>>();
    if (kv.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("GraphSpec: killing must have n entries");
    kill = Eigen::Map<const Eigen::VectorXd>(kv.data(), n);
  } else {
    kill = Eigen::VectorXd::Constant(n, j.at("kappa").get<double>());
  }
  return GraphSpec(std::move(c), std::move(kill));
}

TransitionMatrix build_transition(const GraphSpec& g) {
  const int n = g.size();
  Eigen::MatrixXd p = g.conductances().array().colwise() / g.lambda().array();
  // P is similar to the symmetric M_{x,y} = C_{x,y}/sqrt(lambda_x lambda_y),
  // so its spectrum is real and safely computed from M.
  Eigen::VectorXd root = g.lambda().array().sqrt();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g.conductances()(i, j) / (root(i) * root(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double bound = es.eigenvalues().cwiseAbs().maxCoeff();
  return TransitionMatrix{std::move(p), bound};
}

double green_logdet_dense(const GraphSpec& g, std::span<const int> subset) {
  check_subset(g, subset);
  const int d = static_cast<int>(subset.size());
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double c = g.conductances()(subset[static_cast<std::size_t>(i)],
                                        subset[static_cast<std::size_t>(j)]);
      m(i, j) = (i == j) ? g.lambda()(subset[static_cast<std::size_t>(i)]) : -c;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const auto& u = lu.matrixLU();
  double logdet = 0.0;
  double sign = lu.permutationP().determinant() > 0 ? 1.0 : -1.0;
  const double scale = m.cwiseAbs().maxCoeff();
  for (int i = 0; i < d; ++i) {
    const double piv = u(i, i);
    if (std::abs(piv) <= 1e-14 * scale)
      throw std::runtime_error("green_det: restricted matrix is numerically singular");
    if (piv < 0) sign = -sign;
    logdet += std::log(std::abs(piv));
  }
  if (sign < 0)
    throw std::runtime_error("green_det: restricted matrix has non-positive determinant");
  return -logdet;  // det G^D = 1 / det(restriction)
}

double green_logdet(const GraphSpec& g, std::span<const int> subset) {
  if (g.is_complete()) {
    check_subset(g, subset);
    const double n = g.size();
    const double kappa = g.complete_kappa();
    const double d = static_cast<double>(subset.size());
    // Lemma 2.1: det G^D = 1 / ((n - d + kappa)(n + kappa)^{d-1}).
    return -(std::log(n - d + kappa) + (d - 1.0) * std::log(n + kappa));
  }
  return green_logdet_dense(g, subset);
}

double green_det(const GraphSpec& g, std::span<const int> subset) {
  return std::exp(green_logdet(g, subset));
}

double log_det_ratio(const GraphSpec& g, const Partition& pi) {
  if (pi.ground_size() != g.size())
    throw std::invalid_argument("det_ratio: partition does not cover the vertex set");
  if (g.is_complete()) {
    const double n = g.size();
    const double kappa = g.complete_kappa();
    double log_ratio = std::log(kappa) - std::log(kappa + n);
    for (const auto& b : pi.blocks())
      log_ratio -= std::log1p(-static_cast<double>(b.size()) / (n + kappa));
    return log_ratio;
  }
  std::vector<int> all(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  double log_ratio = -green_logdet(g, all);
  for (const auto& b : pi.blocks()) log_ratio += green_logdet(g, b);
  return log_ratio;
}

double det_ratio(const GraphSpec& g, const Partition& pi) {
  return std::exp(log_det_ratio(g, pi));
}

}  // namespace loopsoup
