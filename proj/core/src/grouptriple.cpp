#include "lptriple/grouptriple.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace lpt {

GroupModel GroupModel::integers() { return GroupModel(GroupKind::Integers, 0); }

GroupModel GroupModel::lattice(int d) {
  if (d < 1) throw ValidationError("lattice dimension must be >= 1");
  return GroupModel(GroupKind::Lattice, d);
}

GroupModel GroupModel::free_group(int k) {
  if (k < 1) throw ValidationError("free group rank must be >= 1");
  if (k > 26) throw ValidationError("free group rank limited to 26 letters");
  return GroupModel(GroupKind::Free, k);
}

GroupModel GroupModel::cyclic(int m) {
  if (m < 1) throw ValidationError("cyclic order must be >= 1");
  return GroupModel(GroupKind::Cyclic, m);
}

GroupElement GroupModel::identity() const {
  switch (kind_) {
    case GroupKind::Integers:
      return {0};
    case GroupKind::Lattice:
      return GroupElement(std::size_t(param_), 0);
    case GroupKind::Free:
      return {};
    case GroupKind::Cyclic:
      return {0};
  }
  return {};
}

GroupElement GroupModel::multiply(const GroupElement& a,
                                  const GroupElement& b) const {
  switch (kind_) {
    case GroupKind::Integers:
      return {a[0] + b[0]};
    case GroupKind::Lattice: {
      GroupElement r(a);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
      return r;
    }
    case GroupKind::Free: {
      GroupElement r(a);
      for (int letter : b) {
        if (!r.empty() && r.back() == -letter) {
          r.pop_back();
        } else {
          r.push_back(letter);
        }
      }
      return r;
    }
    case GroupKind::Cyclic: {
      int m = param_;
      return {((a[0] + b[0]) % m + m) % m};
    }
  }
  return {};
}

GroupElement GroupModel::invert(const GroupElement& a) const {
  switch (kind_) {
    case GroupKind::Integers:
      return {-a[0]};
    case GroupKind::Lattice: {
      GroupElement r(a);
      for (auto& c : r) c = -c;
      return r;
    }
    case GroupKind::Free: {
      GroupElement r;
      r.reserve(a.size());
      for (auto it = a.rbegin(); it != a.rend(); ++it) r.push_back(-*it);
      return r;
    }
    case GroupKind::Cyclic: {
      int m = param_;
      return {(m - a[0]) % m};
    }
  }
  return {};
}

std::vector<GroupElement> GroupModel::generators() const {
  std::vector<GroupElement> gens;
  switch (kind_) {
    case GroupKind::Integers:
      gens = {{1}, {-1}};
      break;
    case GroupKind::Lattice:
      for (int i = 0; i < param_; ++i) {
        GroupElement e(std::size_t(param_), 0);
        e[std::size_t(i)] = 1;
        gens.push_back(e);
        e[std::size_t(i)] = -1;
        gens.push_back(e);
      }
      break;
    case GroupKind::Free:
      for (int i = 1; i <= param_; ++i) {
        gens.push_back({i});
        gens.push_back({-i});
      }
      break;
    case GroupKind::Cyclic:
      gens = {{1 % param_}, {(param_ - 1) % param_}};
      break;
  }
  return gens;
}

std::string GroupModel::encode(const GroupElement& e) const {
  switch (kind_) {
    case GroupKind::Integers:
    case GroupKind::Cyclic:
      return std::to_string(e[0]);
    case GroupKind::Lattice: {
      std::string s;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(e[i]);
      }
      return s;
    }
    case GroupKind::Free: {
      if (e.empty()) return "e";
      std::string s;
      for (int letter : e) {
        s += letter > 0 ? char('a' + letter - 1) : char('A' - letter - 1);
      }
      return s;
    }
  }
  return {};
}

GroupElement GroupModel::parse(const std::string& s) const {
  switch (kind_) {
    case GroupKind::Integers:
      return {std::stoi(s)};
    case GroupKind::Cyclic: {
      int m = param_;
      return {((std::stoi(s) % m) + m) % m};
    }
    case GroupKind::Lattice: {
      GroupElement e;
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) e.push_back(std::stoi(tok));
      if (int(e.size()) != param_) {
        throw ValidationError("lattice element has wrong arity: " + s);
      }
      return e;
    }
    case GroupKind::Free: {
      if (s == "e") return {};
      GroupElement raw;
      for (char c : s) {
        if (c >= 'a' && c < char('a' + param_)) {
          raw.push_back(c - 'a' + 1);
        } else if (c >= 'A' && c < char('A' + param_)) {
          raw.push_back(-(c - 'A' + 1));
        } else {
          throw ValidationError(std::string("bad free-group letter: ") + c);
        }
      }
      // reduce
      return multiply(identity(), raw);
    }
  }
  return {};
}

LengthFn LengthFn::builtin(const GroupModel& g) {
  LengthFn fn;
  switch (g.kind()) {
    case GroupKind::Integers:
      fn.eval = [](const GroupElement& e) { return double(std::abs(e[0])); };
      fn.next_length_beyond = [](double r) {
        return std::optional<double>(std::floor(r) + 1.0);
      };
      break;
    case GroupKind::Lattice:
      fn.eval = [](const GroupElement& e) {
        long s = 0;
        for (int c : e) s += std::abs(c);
        return double(s);
      };
      fn.next_length_beyond = [](double r) {
        return std::optional<double>(std::floor(r) + 1.0);
      };
      break;
    case GroupKind::Free:
      fn.eval = [](const GroupElement& e) { return double(e.size()); };
      fn.next_length_beyond = [](double r) {
        return std::optional<double>(std::floor(r) + 1.0);
      };
      break;
    case GroupKind::Cyclic: {
      const int m = g.param();
      fn.eval = [m](const GroupElement& e) {
        return double(std::min(e[0], m - e[0]));
      };
      fn.next_length_beyond = [m](double r) -> std::optional<double> {
        const double next = std::floor(r) + 1.0;
        if (next > double(m / 2)) return std::nullopt;
        return next;
      };
      break;
    }
  }
  return fn;
}

int BallTruncation::find(const GroupModel& g, const GroupElement& e) const {
  auto it = index.find(g.encode(e));
  return it == index.end() ? -1 : it->second;
}

BallTruncation ball(const GroupModel& g, const LengthFn& length, double radius,
                    std::size_t cap) {
  if (radius < 0.0) throw ValidationError("ball radius must be >= 0");
  const auto gens = g.generators();
  std::map<std::string, GroupElement> seen;
  std::deque<GroupElement> queue;
  const GroupElement id = g.identity();
  seen.emplace(g.encode(id), id);
  queue.push_back(id);
  while (!queue.empty()) {
    const GroupElement cur = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      GroupElement nxt = g.multiply(cur, s);
      if (length(nxt) > radius) continue;
      auto key = g.encode(nxt);
      if (seen.count(key)) continue;
      if (seen.size() >= cap) {
        throw ResourceError("ball enumeration exceeded element cap");
      }
      seen.emplace(std::move(key), nxt);
      queue.push_back(std::move(nxt));
    }
  }
  std::vector<GroupElement> elems;
  elems.reserve(seen.size());
  for (auto& [key, e] : seen) elems.push_back(e);
  std::sort(elems.begin(), elems.end(),
            [&](const GroupElement& a, const GroupElement& b) {
              const double la = length(a), lb = length(b);
              if (la != lb) return la < lb;
              return g.encode(a) < g.encode(b);
            });
  BallTruncation t{radius, std::move(elems), {},
                   WeightedPointSpace::counting(Eigen::Index(seen.size()))};
  for (std::size_t i = 0; i < t.elements.size(); ++i) {
    t.index.emplace(g.encode(t.elements[i]), int(i));
  }
  return t;
}

GroupAlgElem::GroupAlgElem(const GroupModel& g,
                           std::vector<std::pair<GroupElement, Complex>> terms) {
  std::map<std::string, std::pair<GroupElement, Complex>> acc;
  for (auto& [e, c] : terms) {
    auto key = g.encode(e);
    auto it = acc.find(key);
    if (it == acc.end()) {
      acc.emplace(std::move(key), std::make_pair(e, c));
    } else {
      it->second.second += c;
    }
  }
  for (auto& [key, ec] : acc) {
    if (std::abs(ec.second) != 0.0) terms_.push_back(std::move(ec));
  }
}

double GroupAlgElem::l1_norm() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += std::abs(c);
  return s;
}

GroupAlgElem convolve(const GroupModel& g, const GroupAlgElem& a,
                      const GroupAlgElem& b) {
  std::vector<std::pair<GroupElement, Complex>> terms;
  for (const auto& [x, cx] : a.support()) {
    for (const auto& [y, cy] : b.support()) {
      terms.emplace_back(g.multiply(x, y), cx * cy);
    }
  }
  return GroupAlgElem(g, std::move(terms));
}

OperatorMatrix lambda_matrix(const GroupModel& g, const GroupAlgElem& a,
                             const BallTruncation& trunc) {
  const Eigen::Index n = Eigen::Index(trunc.elements.size());
  Matrix m = Matrix::Zero(n, n);
  for (const auto& [k, coeff] : a.support()) {
    // (a*xi)(g) = sum_k a(k) xi(k^{-1} g): column h contributes to row k*h
    for (Eigen::Index h = 0; h < n; ++h) {
      const GroupElement target = g.multiply(k, trunc.elements[std::size_t(h)]);
      const int row = trunc.find(g, target);
      if (row >= 0) m(row, h) += coeff;
    }
  }
  return OperatorMatrix(trunc.space, trunc.space, std::move(m));
}

OperatorMatrix dirac_matrix(const BallTruncation& trunc,
                            const LengthFn& length) {
  const Eigen::Index n = Eigen::Index(trunc.elements.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = length(trunc.elements[std::size_t(i)]);
  }
  return OperatorMatrix(trunc.space, trunc.space, std::move(m));
}

double commutator_bound(const GroupAlgElem& a, const LengthFn& length,
                        PExponent p) {
  const double pv = p.value();
  double s = 0.0;
  for (const auto& [e, c] : a.support()) {
    s += std::pow(length(e), pv);
  }
  return std::pow(std::pow(a.l1_norm(), pv) * s, 1.0 / pv);
}

NormEstimate commutator_norm_est(const GroupModel& g, const GroupAlgElem& a,
                                 const BallTruncation& trunc,
                                 const LengthFn& length, PExponent p,
                                 const NormBudget& budget) {
  for (const auto& [e, c] : a.support()) {
    if (trunc.find(g, e) < 0) {
      throw ValidationError(
          "coefficient support must lie inside the truncation ball");
    }
  }
  const OperatorMatrix d = dirac_matrix(trunc, length);
  const OperatorMatrix m = lambda_matrix(g, a, trunc);
  return op_norm(d * m - m * d, p, budget);
}

std::pair<OperatorMatrix, double> resolvent_approx(const BallTruncation& trunc,
                                                   const LengthFn& length,
                                                   ResolventMode mode,
                                                   Complex lambda) {
  const Eigen::Index n = Eigen::Index(trunc.elements.size());
  Matrix m = Matrix::Zero(n, n);
  if (mode == ResolventMode::Shifted) {
    for (const auto& e : trunc.elements) {
      if (std::abs(Complex(length(e)) - lambda) < 1e-12) {
        throw ValidationError(
            "shift lambda lies on the achieved spectrum of the Dirac");
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = length(trunc.elements[std::size_t(i)]);
    m(i, i) = mode == ResolventMode::Squared
                  ? Complex(1.0 / (1.0 + l * l))
                  : 1.0 / (Complex(l) - lambda);
  }
  // Tail residual from the growth of the length beyond the ball. Lengths
  // beyond R form a subset of {next, next+1, ...} for the built-ins.
  double residual = 0.0;
  if (auto next = length.next_length_beyond(trunc.radius)) {
    if (mode == ResolventMode::Squared) {
      residual = 1.0 / (1.0 + *next * *next);
    } else {
      // 1/|l - lambda| peaks at the achievable length closest to Re(lambda)
      const double anchor = std::max(*next, std::round(lambda.real()));
      for (double l : {anchor - 1.0, anchor, anchor + 1.0}) {
        if (l < *next) continue;
        residual = std::max(residual, 1.0 / std::abs(Complex(l) - lambda));
      }
    }
  }
  return {OperatorMatrix(trunc.space, trunc.space, std::move(m)), residual};
}

}  // namespace lpt
