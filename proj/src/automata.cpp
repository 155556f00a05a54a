#include "qfa/automata.hpp"

#include <complex>

namespace qfa {

std::string role_str(Role r) {
  switch (r) {
    case Role::Non:
      return "non";
    case Role::Acc:
      return "acc";
    case Role::Rej:
      return "rej";
  }
  throw Error("unreachable");
}

Role role_parse(std::string_view s) {
  if (s == "non") return Role::Non;
  if (s == "acc") return Role::Acc;
  if (s == "rej") return Role::Rej;
  throw InputError("unknown role \"" + std::string(s) + "\"");
}

int StateTable::add(std::string id, Role role) {
  auto [it, inserted] = index.emplace(id, n());
  if (!inserted) throw InputError("duplicate state id \"" + id + "\"");
  ids.push_back(std::move(id));
  roles.push_back(role);
  return it->second;
}

int StateTable::at(const std::string& id) const {
  auto it = index.find(id);
  if (it == index.end()) throw InputError("unknown state id \"" + id + "\"");
  return it->second;
}

void ProbAutomaton::check_distributions() const {
  for (const auto& [sym, dist] : trans) {
    for (size_t src = 0; src < dist.size(); ++src) {
      if (dist[src].empty()) continue;
      if (states.is_halting(static_cast<int>(src)))
        throw InputError(std::string("halting state has outgoing '") + sym +
                         "' transitions: " + states.ids[src]);
      Rat sum = 0;
      for (const auto& [dst, p] : dist[src]) {
        if (p < 0 || p > 1)
          throw InputError("transition probability outside [0,1]");
        (void)dst;
        sum += p;
      }
      if (sum != 1)
        throw InputError(std::string("outgoing '") + sym +
                         "' distribution of " + states.ids[src] +
                         " sums to " + rat_str(sum));
    }
  }
}

SparseRatMat SparseRatMat::identity(int n) {
  SparseRatMat m(n);
  for (int i = 0; i < n; ++i) m.col[static_cast<size_t>(i)].emplace_back(i, Rat(1));
  return m;
}

void SparseRatMat::set(int dst, int src, const Rat& v) {
  if (v == 0) return;
  col[static_cast<size_t>(src)].emplace_back(dst, v);
}

bool SparseRatMat::is_doubly_stochastic() const {
  std::vector<Rat> row_sum(static_cast<size_t>(n), Rat(0));
  for (int src = 0; src < n; ++src) {
    Rat col_sum = 0;
    for (const auto& [dst, v] : col[static_cast<size_t>(src)]) {
      if (v < 0 || v > 1) return false;
      col_sum += v;
      row_sum[static_cast<size_t>(dst)] += v;
    }
    if (col_sum != 1) return false;
  }
  for (const Rat& r : row_sum)
    if (r != 1) return false;
  return true;
}

size_t SparseRatMat::nnz() const {
  size_t total = 0;
  for (const auto& c : col) total += c.size();
  return total;
}

void DhPra::check_doubly_stochastic() const {
  for (const auto& [sym, m] : mat)
    if (!m.is_doubly_stochastic())
      throw InputError(std::string("matrix for '") + sym +
                       "' is not doubly stochastic");
}

void UnitaryBlocks::apply(Eigen::VectorXcd& psi) const {
  for (const Block& blk : blocks) {
    int k = static_cast<int>(blk.idx.size());
    Eigen::VectorXcd sub(k);
    for (int i = 0; i < k; ++i) sub(i) = psi(blk.idx[static_cast<size_t>(i)]);
    Eigen::VectorXcd out = blk.u * sub;
    for (int i = 0; i < k; ++i) psi(blk.idx[static_cast<size_t>(i)]) = out(i);
  }
}

Eigen::MatrixXcd UnitaryBlocks::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
  for (const Block& blk : blocks) {
    int k = static_cast<int>(blk.idx.size());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        m(blk.idx[static_cast<size_t>(i)], blk.idx[static_cast<size_t>(j)]) =
            blk.u(i, j);
  }
  return m;
}

double UnitaryBlocks::unitarity_defect() const {
  double worst = 0;
  for (const Block& blk : blocks) {
    Eigen::MatrixXcd d =
        blk.u * blk.u.adjoint() -
        Eigen::MatrixXcd::Identity(blk.u.rows(), blk.u.cols());
    worst = std::max(worst, d.cwiseAbs().maxCoeff());
  }
  return worst;
}

void UnitaryBlocks::check_disjoint() const {
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (const Block& blk : blocks) {
    if (blk.u.rows() != blk.u.cols() ||
        blk.u.rows() != static_cast<Eigen::Index>(blk.idx.size()))
      throw InputError("unitary block shape mismatch");
    for (int i : blk.idx) {
      if (i < 0 || i >= n || seen[static_cast<size_t>(i)])
        throw InputError("unitary blocks overlap or index out of range");
      seen[static_cast<size_t>(i)] = 1;
    }
  }
}

double Mmqfa::unitarity_defect() const {
  double worst = 0;
  for (const auto& [sym, m] : mat) worst = std::max(worst, m.unitarity_defect());
  return worst;
}

}  // namespace qfa
