#include "lenard/linsolve.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace lenard {

struct LinearSystem::Echelon {
  std::vector<SparseRow> rows;
  std::vector<Rational> rhs;
  std::vector<int> pivot_row;  // per column, -1 if free
  bool consistent = true;
  int rank = 0;
};

void LinearSystem::add_equation(SparseRow coeffs, Rational rhs) {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (it->first < 0 || it->first >= n_) throw Error(ErrorCode::InvalidArgument, "unknown index");
    it = (it->second == 0) ? coeffs.erase(it) : std::next(it);
  }
  rows_.push_back(std::move(coeffs));
  rhs_.push_back(std::move(rhs));
}

LinearSystem::Echelon LinearSystem::eliminate(const std::vector<int>& column_order) const {
  Echelon e;
  e.rows = rows_;
  e.rhs = rhs_;
  e.pivot_row.assign(n_, -1);
  const int m = static_cast<int>(e.rows.size());

  std::vector<std::set<int>> occ(n_);
  for (int r = 0; r < m; ++r)
    for (const auto& [c, a] : e.rows[r]) occ[c].insert(r);

  std::vector<bool> used(m, false);
  for (int col : column_order) {
    int best = -1;
    for (int r : occ[col]) {
      if (used[r]) continue;
      if (best < 0 || e.rows[r].size() < e.rows[best].size()) best = r;
    }
    if (best < 0) continue;
    used[best] = true;
    e.pivot_row[col] = best;
    ++e.rank;

    Rational inv = 1 / e.rows[best].at(col);
    for (auto& [c, a] : e.rows[best]) a *= inv;
    e.rhs[best] *= inv;

    const SparseRow pivot = e.rows[best];
    const Rational pivot_rhs = e.rhs[best];
    std::vector<int> targets(occ[col].begin(), occ[col].end());
    for (int r : targets) {
      if (r == best) continue;
      Rational factor = e.rows[r].at(col);
      for (const auto& [c, a] : pivot) {
        auto it = e.rows[r].find(c);
        if (it == e.rows[r].end()) {
          e.rows[r].emplace(c, -factor * a);
          occ[c].insert(r);
        } else {
          it->second -= factor * a;
          if (it->second == 0) {
            e.rows[r].erase(it);
            occ[c].erase(r);
          }
        }
      }
      e.rhs[r] -= factor * pivot_rhs;
    }
  }
  for (int r = 0; r < m; ++r) {
    if (!used[r] && e.rows[r].empty() && e.rhs[r] != 0) e.consistent = false;
  }
  return e;
}

std::optional<std::vector<Rational>> LinearSystem::solve(const std::vector<int>& pivot_last) const {
  std::vector<int> order;
  order.reserve(n_);
  std::vector<bool> late(n_, false);
  for (int c : pivot_last)
    if (c >= 0 && c < n_) late[c] = true;
  for (int c = 0; c < n_; ++c)
    if (!late[c]) order.push_back(c);
  for (int c : pivot_last)
    if (c >= 0 && c < n_) order.push_back(c);

  Echelon e = eliminate(order);
  if (!e.consistent) return std::nullopt;
  std::vector<Rational> x(n_);
  for (int c = 0; c < n_; ++c)
    if (e.pivot_row[c] >= 0) x[c] = e.rhs[e.pivot_row[c]];
  return x;
}

int LinearSystem::rank() const {
  std::vector<int> order(n_);
  std::iota(order.begin(), order.end(), 0);
  return eliminate(order).rank;
}

std::optional<std::vector<Rational>> solve_vector_equation(
    const std::vector<VectorFunction>& columns, const VectorFunction& target,
    const std::vector<int>& pivot_last) {
  struct KeyHash {
    std::size_t operator()(const std::pair<int, Monomial>& k) const noexcept {
      return k.second.hash() * 31 + static_cast<std::size_t>(k.first);
    }
  };
  std::unordered_map<std::pair<int, Monomial>, int, KeyHash> index;
  std::vector<SparseRow> rows;
  std::vector<Rational> rhs;
  auto row_of = [&](int comp, const Monomial& m) {
    auto [it, inserted] = index.try_emplace({comp, m}, static_cast<int>(rows.size()));
    if (inserted) {
      rows.emplace_back();
      rhs.emplace_back(0);
    }
    return it->second;
  };
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t comp = 0; comp < columns[j].size(); ++comp)
      for (const auto& t : columns[j][comp].terms())
        rows[row_of(static_cast<int>(comp), t.mono)][static_cast<int>(j)] += t.coeff;
  }
  for (std::size_t comp = 0; comp < target.size(); ++comp)
    for (const auto& t : target[comp].terms()) rhs[row_of(static_cast<int>(comp), t.mono)] += t.coeff;

  LinearSystem sys(static_cast<int>(columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) sys.add_equation(std::move(rows[r]), rhs[r]);
  return sys.solve(pivot_last);
}

}  // namespace lenard
