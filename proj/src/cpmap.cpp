#include "qfa/cpmap.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

namespace qfa {

CMat kraus_dense(const KrausOp& op, int rows, int cols) {
  if (std::holds_alternative<CMat>(op)) return std::get<CMat>(op);
  const PermOp& p = std::get<PermOp>(op);
  CMat m = CMat::Zero(rows, cols);
  for (int i = 0; i < cols; ++i) m(p.dest[static_cast<size_t>(i)], i) = p.scale;
  return m;
}

CpMap CpMap::from_kraus(std::vector<CMat> kraus) {
  if (kraus.empty()) throw InputError("a CP map needs at least one Kraus operator");
  CpMap c;
  c.dim_out = static_cast<int>(kraus[0].rows());
  c.dim_in = static_cast<int>(kraus[0].cols());
  for (const CMat& k : kraus)
    if (k.rows() != c.dim_out || k.cols() != c.dim_in)
      throw InputError("Kraus operators have inconsistent shapes");
  for (CMat& k : kraus) c.ops.emplace_back(std::move(k));
  return c;
}

CpMap CpMap::identity(int dim) {
  CpMap c;
  c.dim_in = c.dim_out = dim;
  PermOp p;
  p.scale = 1.0;
  p.dest.resize(static_cast<size_t>(dim));
  std::iota(p.dest.begin(), p.dest.end(), 0);
  c.ops.emplace_back(std::move(p));
  return c;
}

CMat CpMap::apply(const CMat& rho) const {
  if (rho.rows() != dim_in || rho.cols() != dim_in)
    throw InputError("density matrix dimension mismatch");
  CMat out = CMat::Zero(dim_out, dim_out);
  for (const KrausOp& op : ops) {
    if (std::holds_alternative<CMat>(op)) {
      const CMat& v = std::get<CMat>(op);
      out.noalias() += v * rho * v.adjoint();
    } else {
      const PermOp& p = std::get<PermOp>(op);
      double s2 = p.scale * p.scale;
      for (int i = 0; i < dim_in; ++i)
        for (int j = 0; j < dim_in; ++j)
          out(p.dest[static_cast<size_t>(i)], p.dest[static_cast<size_t>(j)]) +=
              s2 * rho(i, j);
    }
  }
  return out;
}

bool CpMap::all_perm() const {
  for (const KrausOp& op : ops)
    if (!std::holds_alternative<PermOp>(op)) return false;
  return true;
}

void CpMap::apply_diag(std::vector<double>& diag) const {
  std::vector<double> out(static_cast<size_t>(dim_out), 0.0);
  for (const KrausOp& op : ops) {
    const PermOp& p = std::get<PermOp>(op);
    double s2 = p.scale * p.scale;
    for (int i = 0; i < dim_in; ++i)
      out[static_cast<size_t>(p.dest[static_cast<size_t>(i)])] +=
          s2 * diag[static_cast<size_t>(i)];
  }
  diag = std::move(out);
}

CpMap compose(const CpMap& f, const CpMap& g) {
  if (f.dim_in != g.dim_out)
    throw InputError("CP map composition dimension mismatch");
  CpMap c;
  c.dim_in = g.dim_in;
  c.dim_out = f.dim_out;
  for (const KrausOp& fo : f.ops)
    for (const KrausOp& go : g.ops) {
      if (std::holds_alternative<PermOp>(fo) &&
          std::holds_alternative<PermOp>(go)) {
        const PermOp& a = std::get<PermOp>(fo);
        const PermOp& b = std::get<PermOp>(go);
        PermOp p;
        p.scale = a.scale * b.scale;
        p.dest.resize(b.dest.size());
        for (size_t i = 0; i < b.dest.size(); ++i)
          p.dest[i] = a.dest[static_cast<size_t>(b.dest[i])];
        c.ops.emplace_back(std::move(p));
      } else {
        c.ops.emplace_back(kraus_dense(fo, f.dim_out, f.dim_in) *
                           kraus_dense(go, g.dim_out, g.dim_in));
      }
    }
  return c;
}

bool is_positive(const CMat& m, double tol) {
  if (m.rows() != m.cols()) throw InputError("positivity needs a square matrix");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<CMat> es((m + m.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff() >= -tol;
}

bool is_scaled_density(const CMat& rho, double tol) {
  if (!is_positive(rho, tol)) return false;
  double tr = rho.trace().real();
  return tr >= -tol && tr <= 1.0 + tol;
}

namespace {

// sum V*V and sum VV*, computed without densifying permutation operators.
std::pair<CMat, CMat> gram_sums(const CpMap& c) {
  CMat in_sum = CMat::Zero(c.dim_in, c.dim_in);
  CMat out_sum = CMat::Zero(c.dim_out, c.dim_out);
  for (const KrausOp& op : c.ops) {
    if (std::holds_alternative<PermOp>(op) && c.square()) {
      const PermOp& p = std::get<PermOp>(op);
      double s2 = p.scale * p.scale;
      for (int i = 0; i < c.dim_in; ++i) {
        in_sum(i, i) += s2;
        out_sum(p.dest[static_cast<size_t>(i)], p.dest[static_cast<size_t>(i)]) += s2;
      }
    } else {
      CMat v = kraus_dense(op, c.dim_out, c.dim_in);
      in_sum.noalias() += v.adjoint() * v;
      out_sum.noalias() += v * v.adjoint();
    }
  }
  return {in_sum, out_sum};
}

// Both gram sums of a scaled-permutation family are diagonal; large lifted
// automata stay in this path and never materialize dim x dim matrices.
std::pair<std::vector<double>, std::vector<double>> gram_diags(const CpMap& c) {
  std::vector<double> in(static_cast<size_t>(c.dim_in), 0.0);
  std::vector<double> out(static_cast<size_t>(c.dim_out), 0.0);
  for (const KrausOp& op : c.ops) {
    const PermOp& p = std::get<PermOp>(op);
    double s2 = p.scale * p.scale;
    for (int i = 0; i < c.dim_in; ++i) {
      in[static_cast<size_t>(i)] += s2;
      out[static_cast<size_t>(p.dest[static_cast<size_t>(i)])] += s2;
    }
  }
  return {in, out};
}

double max_dev_from_one(const std::vector<double>& d) {
  double worst = 0;
  for (double x : d) worst = std::max(worst, std::abs(x - 1.0));
  return worst;
}

}  // namespace

ChannelFlags channel_predicates(const CpMap& c, double tol) {
  ChannelFlags f;
  if (c.square() && c.all_perm()) {
    auto [in, out] = gram_diags(c);
    double max_in = *std::max_element(in.begin(), in.end());
    double max_out = *std::max_element(out.begin(), out.end());
    f.trace_preserving = max_dev_from_one(in) <= tol;
    f.unital = max_dev_from_one(out) <= tol;
    f.sub_tracial = max_in <= 1.0 + tol;
    f.sub_unital = max_out <= 1.0 + tol;
  } else {
    auto [in_sum, out_sum] = gram_sums(c);
    CMat id_in = CMat::Identity(c.dim_in, c.dim_in);
    CMat id_out = CMat::Identity(c.dim_out, c.dim_out);
    f.trace_preserving = (in_sum - id_in).cwiseAbs().maxCoeff() <= tol;
    f.unital = c.square() && (out_sum - id_out).cwiseAbs().maxCoeff() <= tol;
    {
      Eigen::SelfAdjointEigenSolver<CMat> es((in_sum + in_sum.adjoint()) / 2.0);
      f.sub_tracial = es.eigenvalues().maxCoeff() <= 1.0 + tol;
    }
    {
      Eigen::SelfAdjointEigenSolver<CMat> es((out_sum + out_sum.adjoint()) / 2.0);
      f.sub_unital = c.square() && es.eigenvalues().maxCoeff() <= 1.0 + tol;
    }
  }
  f.bistochastic = f.trace_preserving && f.unital;
  f.sub_bistochastic = f.sub_tracial && f.sub_unital;
  return f;
}

double bistochastic_defect(const CpMap& c) {
  if (!c.square()) throw InputError("bistochasticity needs a square channel");
  if (c.all_perm()) {
    auto [in, out] = gram_diags(c);
    return std::max(max_dev_from_one(in), max_dev_from_one(out));
  }
  auto [in_sum, out_sum] = gram_sums(c);
  CMat id = CMat::Identity(c.dim_in, c.dim_in);
  return std::max((in_sum - id).cwiseAbs().maxCoeff(),
                  (out_sum - id).cwiseAbs().maxCoeff());
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat superoperator(const CpMap& c) {
  CMat t = CMat::Zero(static_cast<Eigen::Index>(c.dim_out) * c.dim_out,
                      static_cast<Eigen::Index>(c.dim_in) * c.dim_in);
  for (const KrausOp& op : c.ops) {
    CMat v = kraus_dense(op, c.dim_out, c.dim_in);
    t += kron(v.conjugate(), v);
  }
  return t;
}

namespace {

// Unitary similarity swapping adjacent diagonal entries of an upper
// triangular matrix (the ztrexc step): the Givens rotation whose first
// column is the eigenvector of the trailing eigenvalue.
void schur_swap(CMat& u, CMat& q, int p) {
  std::complex<double> a = u(p, p), b = u(p, p + 1), d = u(p + 1, p + 1);
  std::complex<double> x1 = b, x2 = d - a;
  double norm = std::sqrt(std::norm(x1) + std::norm(x2));
  if (norm == 0) return;  // equal eigenvalues, nothing to move
  std::complex<double> c1 = x1 / norm, c2 = x2 / norm;
  CMat g(2, 2);
  g << c1, -std::conj(c2), c2, std::conj(c1);
  u.block(0, p, u.rows(), 2) = u.block(0, p, u.rows(), 2) * g;
  u.block(p, 0, 2, u.cols()) = g.adjoint() * u.block(p, 0, 2, u.cols());
  q.block(0, p, q.rows(), 2) = q.block(0, p, q.rows(), 2) * g;
  u(p + 1, p) = 0;
}

CMat cesaro_fallback(const CMat& t) {
  CMat s = t;
  for (int k = 0; k < 48; ++k) s = s * s;
  CMat power = s;
  CMat sum = s;
  for (int j = 1; j < 192; ++j) {
    power = power * s;
    sum += power;
  }
  return sum / 192.0;
}

}  // namespace

OmegaResult omega_limit_superop(const CMat& t, double tol_peripheral,
                                double tol_idem) {
  if (t.rows() != t.cols()) throw InputError("superoperator must be square");
  int n = static_cast<int>(t.rows());
  OmegaResult res;

  Eigen::ComplexSchur<CMat> schur(t);
  if (schur.info() != Eigen::Success)
    throw NumericError("Schur decomposition failed");
  CMat u = schur.matrixT();
  CMat q = schur.matrixU();

  auto peripheral = [&](const std::complex<double>& lambda) {
    return std::abs(lambda) >= 1.0 - tol_peripheral;
  };

  // Bubble peripheral eigenvalues to the leading block.
  int k = 0;
  for (int target = 0; target < n; ++target) {
    int found = -1;
    for (int j = target; j < n; ++j)
      if (peripheral(u(j, j))) {
        found = j;
        break;
      }
    if (found < 0) break;
    for (int j = found; j > target; --j) schur_swap(u, q, j - 1);
    ++k;
  }
  res.peripheral_dim = k;

  CMat projector;
  if (k == 0) {
    projector = CMat::Zero(n, n);
  } else if (k == n) {
    projector = CMat::Identity(n, n);
  } else {
    // u = [[A, C], [0, B]]; spectral projector is Q [[I, R], [0, 0]] Q*
    // where A R - R B = C.
    CMat a = u.topLeftCorner(k, k);
    CMat b = u.bottomRightCorner(n - k, n - k);
    CMat cmat = u.topRightCorner(k, n - k);
    CMat r = CMat::Zero(k, n - k);
    for (int j = 0; j < n - k; ++j) {
      CVec rhs = cmat.col(j);
      for (int l = 0; l < j; ++l) rhs += r.col(l) * b(l, j);
      // (A - b_jj I) r_j = rhs, A upper triangular.
      for (int i = k - 1; i >= 0; --i) {
        std::complex<double> v = rhs(i);
        for (int l = i + 1; l < k; ++l) v -= a(i, l) * r(l, j);
        std::complex<double> pivot = a(i, i) - b(j, j);
        if (std::abs(pivot) < 1e-13)
          throw NumericError(
              "peripheral spectrum not separated from the interior "
              "(|pivot| < 1e-13); raise tol or use the fallback");
        r(i, j) = v / pivot;
      }
    }
    CMat p_schur = CMat::Zero(n, n);
    p_schur.topLeftCorner(k, k) = CMat::Identity(k, k);
    p_schur.topRightCorner(k, n - k) = r;
    projector = q * p_schur * q.adjoint();
  }

  double idem_defect = (projector * projector - projector).norm();
  if (idem_defect < tol_idem) {
    res.projector = std::move(projector);
    return res;
  }

  res.projector = cesaro_fallback(t);
  res.reduced_confidence = true;
  if ((res.projector * res.projector - res.projector).norm() > tol_idem)
    throw NumericError(
        "omega-limit failed: spectral projector defect " +
        std::to_string(idem_defect) + " and the Cesaro fallback is not "
        "idempotent either");
  return res;
}

OmegaResult omega_limit(const CpMap& c, double tol_peripheral, double tol_idem) {
  if (!c.square()) throw InputError("omega-limit needs a square channel");
  ChannelFlags f = channel_predicates(c, 1e-8);
  if (!f.sub_bistochastic)
    throw InputError("omega-limit requires a sub-bistochastic channel");
  return omega_limit_superop(superoperator(c), tol_peripheral, tol_idem);
}

BistEjReport verify_bist_ej(const std::vector<CMat>& idempotents,
                            std::mt19937_64& rng, int samples,
                            double tol_idem) {
  if (idempotents.empty()) throw InputError("need at least one idempotent");
  for (const CMat& e : idempotents)
    if ((e * e - e).norm() > tol_idem)
      throw InputError("input map is not idempotent within tolerance");

  auto product_for = [&](const std::vector<int>& order) {
    CMat out = idempotents[static_cast<size_t>(order[0])];
    for (size_t i = 1; i < order.size(); ++i)
      out = out * idempotents[static_cast<size_t>(order[i])];
    return out;
  };

  int kk = static_cast<int>(idempotents.size());
  std::vector<int> order(static_cast<size_t>(kk));
  std::iota(order.begin(), order.end(), 0);
  CMat e = omega_limit_superop(product_for(order)).projector;

  BistEjReport rep;
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> rev(order.rbegin(), order.rend());
    perms.push_back(rev);
    for (int s = 0; s < samples; ++s) {
      std::vector<int> p = order;
      std::shuffle(p.begin(), p.end(), rng);
      perms.push_back(p);
    }
  }
  for (const auto& p : perms) {
    CMat ep = omega_limit_superop(product_for(p)).projector;
    rep.max_permutation_dev =
        std::max(rep.max_permutation_dev, (e - ep).norm());
  }
  rep.permutations_tested = static_cast<int>(perms.size());
  for (const CMat& ei : idempotents) {
    rep.max_absorption_dev =
        std::max(rep.max_absorption_dev, (ei * e - e).norm());
    rep.max_absorption_dev =
        std::max(rep.max_absorption_dev, (e * ei - e).norm());
  }
  return rep;
}

CMat random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    std::complex<double> d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a == 0) ? 1.0 : d / a;
  }
  return q;
}

CpMap random_measurement_channel(int dim, std::mt19937_64& rng) {
  CMat u = random_unitary(dim, rng);
  std::uniform_int_distribution<int> pick(1, dim);
  // Random composition of dim into blocks; projectors onto the spans of the
  // corresponding column groups.
  std::vector<CMat> kraus;
  int at = 0;
  while (at < dim) {
    int len = std::min(pick(rng), dim - at);
    CMat cols = u.middleCols(at, len);
    kraus.push_back(cols * cols.adjoint());
    at += len;
  }
  return CpMap::from_kraus(std::move(kraus));
}

CpMap random_permutation_mixture(int dim, std::mt19937_64& rng, int terms) {
  std::vector<double> w(static_cast<size_t>(terms));
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  double total = 0;
  for (double& x : w) {
    x = unif(rng);
    total += x;
  }
  CpMap c;
  c.dim_in = c.dim_out = dim;
  for (int t = 0; t < terms; ++t) {
    PermOp p;
    p.scale = std::sqrt(w[static_cast<size_t>(t)] / total);
    p.dest.resize(static_cast<size_t>(dim));
    std::iota(p.dest.begin(), p.dest.end(), 0);
    std::shuffle(p.dest.begin(), p.dest.end(), rng);
    c.ops.emplace_back(std::move(p));
  }
  return c;
}

CpMap random_bistochastic_channel(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> layers(1, 3);
  CpMap c = CpMap::identity(dim);
  int count = layers(rng);
  for (int l = 0; l < count; ++l) {
    CpMap next;
    switch (kind(rng)) {
      case 0:
        next = CpMap::from_kraus({random_unitary(dim, rng)});
        break;
      case 1:
        next = random_measurement_channel(dim, rng);
        break;
      default:
        next = random_permutation_mixture(dim, rng, 1 + layers(rng));
        break;
    }
    c = compose(next, c);
  }
  return c;
}

CpMap random_sub_bistochastic_channel(int dim, std::mt19937_64& rng) {
  CpMap c = random_bistochastic_channel(dim, rng);
  std::uniform_int_distribution<int> rank(1, dim);
  int keep = rank(rng);
  if (keep == dim) return c;
  CMat p = CMat::Zero(dim, dim);
  std::vector<int> coords(static_cast<size_t>(dim));
  std::iota(coords.begin(), coords.end(), 0);
  std::shuffle(coords.begin(), coords.end(), rng);
  for (int i = 0; i < keep; ++i)
    p(coords[static_cast<size_t>(i)], coords[static_cast<size_t>(i)]) = 1.0;
  CpMap cut = CpMap::from_kraus({p});
  return compose(cut, compose(c, cut));
}

}  // namespace qfa
