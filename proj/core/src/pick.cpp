#include "rowlift/pick.hpp"

#include <stdexcept>
#include <string>

namespace rowlift {

int PickSystem::n() const { return nodes.empty() ? 0 : static_cast<int>(nodes[0].size()); }
int PickSystem::count() const { return static_cast<int>(nodes.size()); }
Eigen::Index PickSystem::target_dim() const { return targets.empty() ? 0 : targets[0].rows(); }

PickSystem PickSystem::scalar_system(std::vector<Vec> nodes, std::vector<Complex> values) {
  PickSystem s;
  s.nodes = std::move(nodes);
  s.targets.reserve(values.size());
  for (Complex v : values) {
    Mat w(1, 1);
    w(0, 0) = v;
    s.targets.push_back(w);
  }
  return s;
}

void validate(const PickSystem& sys) {
  if (sys.nodes.empty()) throw std::invalid_argument("PickSystem: no nodes");
  if (sys.nodes.size() != sys.targets.size())
    throw std::invalid_argument("PickSystem: node/target count mismatch");
  const int n = sys.n();
  const Eigen::Index dt = sys.target_dim();
  for (const Vec& x : sys.nodes) {
    if (x.size() != n) throw std::invalid_argument("PickSystem: inconsistent node arity");
    if (x.norm() >= 1.0)
      throw std::domain_error("PickSystem: node on or outside the unit sphere");
  }
  for (const Mat& w : sys.targets)
    if (w.rows() != dt || w.cols() != dt)
      throw std::invalid_argument("PickSystem: targets must be square of equal dimension");
  for (std::size_t i = 0; i < sys.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < sys.nodes.size(); ++j)
      if ((sys.nodes[i] - sys.nodes[j]).norm() <= 1e-14)
        throw std::invalid_argument("PickSystem: nodes must be distinct");
}

Mat gram_matrix(const PickSystem& sys) {
  validate(sys);
  const int N = sys.count();
  Mat G(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) G(i, j) = kernel_value(sys.nodes[i], sys.nodes[j]);
  return G;
}

Mat pick_matrix(const PickSystem& sys) {
  validate(sys);
  const int N = sys.count();
  const Eigen::Index dt = sys.target_dim();
  Mat G = gram_matrix(sys);
  Mat P(N * dt, N * dt);
  Mat I = Mat::Identity(dt, dt);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      P.block(i * dt, j * dt, dt, dt) =
          (I - sys.targets[static_cast<std::size_t>(i)] *
                   sys.targets[static_cast<std::size_t>(j)].adjoint()) *
          G(i, j);
  return P;
}

namespace {

Mat kron_identity(const Mat& G, Eigen::Index dt) {
  if (dt == 1) return G;
  Mat out = Mat::Zero(G.rows() * dt, G.cols() * dt);
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      for (Eigen::Index a = 0; a < dt; ++a) out(i * dt + a, j * dt + a) = G(i, j);
  return out;
}

Mat target_blockdiag(const PickSystem& sys, bool adjoint) {
  const int N = sys.count();
  const Eigen::Index dt = sys.target_dim();
  Mat D = Mat::Zero(N * dt, N * dt);
  for (int i = 0; i < N; ++i)
    D.block(i * dt, i * dt, dt, dt) =
        adjoint ? Mat(sys.targets[static_cast<std::size_t>(i)].adjoint())
                : sys.targets[static_cast<std::size_t>(i)];
  return D;
}

}  // namespace

Mat ModelOperators::coordinate(int i) const {
  // [T_i] = G^{-1} [T_i*]^H G; with a diagonal adjoint the similarity is
  // computed through the Hermitian square roots for stability
  Mat D = adjoint_diag[static_cast<std::size_t>(i - 1)].adjoint();
  return gram_inv_sqrt * gram_inv_sqrt * D * gram;
}

Mat ModelOperators::orthonormal(int i) const {
  Mat D = adjoint_diag[static_cast<std::size_t>(i - 1)].adjoint();
  return gram_inv_sqrt * D * gram_sqrt;
}

RowOperator ModelOperators::tuple() const {
  std::vector<Mat> blocks;
  for (int i = 1; i <= n; ++i) blocks.push_back(orthonormal(i));
  return RowOperator(std::move(blocks));
}

double ModelOperators::row_norm() const { return rowlift::row_norm(tuple()); }

ModelOperators model_operators(const PickSystem& sys, double cond_limit) {
  validate(sys);
  const int N = sys.count();
  const Eigen::Index dt = sys.target_dim();
  ModelOperators m;
  m.n = sys.n();
  Mat G = gram_matrix(sys);
  m.gram = kron_identity(G, dt);
  try {
    m.gram_sqrt = hpd_sqrt(m.gram, cond_limit);
    m.gram_inv_sqrt = hpd_inv_sqrt(m.gram, cond_limit);
  } catch (const std::domain_error&) {
    throw std::domain_error("model_operators: ill-conditioned nodes (Gram condition number "
                            "above limit)");
  }
  for (int i = 1; i <= m.n; ++i) {
    Mat D = Mat::Zero(N * dt, N * dt);
    for (int s = 0; s < N; ++s) {
      Complex lam_bar = std::conj(sys.nodes[static_cast<std::size_t>(s)][i - 1]);
      for (Eigen::Index a = 0; a < dt; ++a) D(s * dt + a, s * dt + a) = lam_bar;
    }
    m.adjoint_diag.push_back(std::move(D));
  }
  return m;
}

ModelX model_X(const PickSystem& sys, double cond_limit) {
  ModelOperators m = model_operators(sys, cond_limit);
  ModelX x;
  x.adjoint_diag = target_blockdiag(sys, /*adjoint=*/true);
  x.orthonormal = m.gram_inv_sqrt * target_blockdiag(sys, false) * m.gram_sqrt;
  x.norm = spectral_norm(x.orthonormal);
  return x;
}

PickFeasibility pick_feasibility(const PickSystem& sys) {
  PickFeasibility f{};
  Mat P = pick_matrix(sys);
  HermEig e = herm_eig(P);
  f.min_eigenvalue = e.values[0];
  f.scale = std::max(std::abs(e.values[0]), std::abs(e.values[e.values.size() - 1]));
  f.psd = f.min_eigenvalue >= -1e-10 * std::max(1.0, f.scale);
  f.norm_X = model_X(sys).norm;
  return f;
}

NPSolution solve_np(const PickSystem& sys, int d, const NPOptions& opts) {
  validate(sys);
  NPSolution out{};
  PickFeasibility feas = pick_feasibility(sys);
  out.pick_min_eigenvalue = feas.min_eigenvalue;
  out.norm_X = feas.norm_X;
  out.feasible = feas.psd;
  if (!out.feasible) return out;

  const int n = sys.n();
  const int N = sys.count();
  const Eigen::Index dt = sys.target_dim();
  TruncatedFock F(n, d);
  const Eigen::Index Ns = F.sym_dim();

  // embedding of the tensored kernel span, copy-major multiplier layout
  Mat E = Mat::Zero(Ns * dt, N * dt);
  for (int i = 0; i < N; ++i) {
    Vec kv = kernel_vector(sys.nodes[static_cast<std::size_t>(i)], F);
    for (Eigen::Index a = 0; a < dt; ++a) E.block(a * Ns, i * dt + a, Ns, 1) = kv;
  }
  Mat Gt = E.adjoint() * E;  // truncated Gram
  try {
    (void)hpd_inv_sqrt(Gt, opts.cond_limit);
  } catch (const std::domain_error&) {
    throw std::domain_error("solve_np: ill-conditioned nodes at this truncation degree");
  }

  // coordinate matrix of X on the truncated kernel basis
  Mat Xcoord = Gt.inverse() * target_blockdiag(sys, false) * Gt;

  std::vector<Mat> blocks;
  for (int i = 1; i <= n; ++i) {
    Mat Mi = multiplier_matrix(i, F);
    Mat Vi = Mat::Zero(Ns * dt, Ns * dt);
    for (Eigen::Index a = 0; a < dt; ++a) Vi.block(a * Ns, a * Ns, Ns, Ns) = Mi;
    blocks.push_back(std::move(Vi));
  }
  DilationResult dil{RowOperator(std::move(blocks)),
                     E,
                     d,
                     DilationKind::assembled,
                     static_cast<int>(dt),
                     0.0,
                     0.0,
                     SummandInfo{static_cast<int>(dt), Ns, 0},
                     MultModelStructure{n, d, static_cast<int>(dt)}};
  dil.embed_defect = (Gt - Mat::Identity(Gt.rows(), Gt.cols())).norm();

  LiftingProblem problem =
      make_commutant_problem(dil, Xcoord, DilationConstraintForm::compression, 1e-5);
  LiftingOptions lopts = opts.lifting;
  if (lopts.refine_target_slack == 0.0) {
    // multiplier recovery wants the minimizer, not just a feasible point;
    // tighten by descent, with a budget that respects the problem size
    lopts.refine_target_slack = 2e-7;
    lopts.first_probe_slack = std::min(lopts.first_probe_slack, 1e-5);
    const Eigen::Index K = Ns * dt;
    lopts.refine_iter_budget = K <= 24 ? 200000 : (K <= 120 ? 60000 : 30000);
  }
  out.lifting = min_norm_lifting(problem, lopts);
  out.achieved_norm = out.lifting.achieved_norm;

  // multiplier coefficients from the action on the vacuum column of each copy
  const Mat& Z = out.lifting.Z;
  out.coeff_index.clear();
  out.coefficients.clear();
  for (Eigen::Index s = 0; s < Ns; ++s) {
    double w = std::sqrt(static_cast<double>(multinomial_count(F.multi_at(s))));
    Mat c(dt, dt);
    for (Eigen::Index a = 0; a < dt; ++a)
      for (Eigen::Index b = 0; b < dt; ++b) c(a, b) = w * Z(a * Ns + s, b * Ns + 0);
    out.coeff_index.push_back(F.multi_at(s));
    out.coefficients.push_back(std::move(c));
  }

  out.node_residuals.clear();
  for (int i = 0; i < N; ++i) {
    Mat h = Mat::Zero(dt, dt);
    for (Eigen::Index s = 0; s < Ns; ++s)
      h += monomial_value(sys.nodes[static_cast<std::size_t>(i)], out.coeff_index[static_cast<std::size_t>(s)]) *
           out.coefficients[static_cast<std::size_t>(s)];
    out.node_residuals.push_back((h - sys.targets[static_cast<std::size_t>(i)]).norm());
  }
  return out;
}

}  // namespace rowlift
