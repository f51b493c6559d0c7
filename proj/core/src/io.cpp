#include "lptriple/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lpt::io {

std::string format_complex(Complex z) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

namespace {

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw ValidationError("bad numeric literal: " + s);
    }
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError("bad numeric literal: " + s);
  }
}

}  // namespace

Complex parse_complex(const std::string& s) {
  if (s.empty()) throw ValidationError("empty complex literal");
  std::string body = s;
  const bool has_j = body.back() == 'j' || body.back() == 'J';
  if (has_j) body.pop_back();
  if (!has_j) {
    return Complex(to_double(body), 0.0);
  }
  // find the sign splitting real and imaginary parts, skipping exponents
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    const char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    return Complex(0.0, to_double(body));  // pure imaginary
  }
  return Complex(to_double(body.substr(0, split)),
                 to_double(body.substr(split)));
}

namespace {

void write_weights(std::ostream& out, const WeightedPointSpace& s,
                   const char* label) {
  if (s.kind() == SpaceKind::Counting) return;
  out << label << ":\n";
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (i) out << ' ';
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", s.weights()[i]);
    out << buf;
  }
  out << '\n';
}

WeightedPointSpace space_from(const std::vector<double>& weights,
                              Eigen::Index n) {
  if (weights.empty()) return WeightedPointSpace::counting(n);
  if (Eigen::Index(weights.size()) != n) {
    throw ValidationError("weight block length does not match matrix shape");
  }
  RealVector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = weights[std::size_t(i)];
  return WeightedPointSpace::probability(std::move(w));
}

}  // namespace

void write_matrix(std::ostream& out, const OperatorMatrix& m) {
  out << m.entries.rows() << ' ' << m.entries.cols() << '\n';
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
      if (j) out << ' ';
      out << format_complex(m.entries(i, j));
    }
    out << '\n';
  }
  write_weights(out, m.domain, "domain-weights");
  write_weights(out, m.codomain, "codomain-weights");
}

OperatorMatrix read_matrix(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw ValidationError("matrix file: bad shape line");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      std::string tok;
      if (!(in >> tok)) {
        throw ValidationError("matrix file: missing entries");
      }
      m(i, j) = parse_complex(tok);
    }
  }
  std::vector<double> dom_w, cod_w;
  std::vector<double>* target = nullptr;
  std::string tok;
  while (in >> tok) {
    if (tok == "domain-weights:") {
      target = &dom_w;
    } else if (tok == "codomain-weights:") {
      target = &cod_w;
    } else if (target) {
      target->push_back(to_double(tok));
    } else {
      throw ValidationError("matrix file: unexpected token " + tok);
    }
  }
  return OperatorMatrix(space_from(dom_w, cols), space_from(cod_w, rows),
                        std::move(m));
}

OperatorMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file: " + path);
  return read_matrix(in);
}

void write_matrix_file(const std::string& path, const OperatorMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write matrix file: " + path);
  write_matrix(out, m);
}

GroupAlgElem read_coeffs(std::istream& in, const GroupModel& g) {
  std::vector<std::pair<GroupElement, Complex>> terms;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string elem, coeff;
    if (!(ls >> elem)) continue;  // blank line
    if (elem[0] == '#') continue;
    if (!(ls >> coeff)) {
      throw ValidationError("coefficient file: line missing coefficient: " +
                            line);
    }
    terms.emplace_back(g.parse(elem), parse_complex(coeff));
  }
  return GroupAlgElem(g, std::move(terms));
}

GroupAlgElem read_coeffs_file(const std::string& path, const GroupModel& g) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open coefficient file: " + path);
  return read_coeffs(in, g);
}

State read_state(std::istream& in, const UHFTower& tower) {
  std::string kind;
  if (!(in >> kind)) throw ValidationError("state file: missing kind");
  if (kind == "point") {
    Eigen::Index idx = -1;
    if (!(in >> idx)) throw ValidationError("state file: point needs an index");
    return State::point(tower, idx);
  }
  if (kind == "trace") return State::trace(tower);
  if (kind == "custom") {
    Vector w(tower.total_dim());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      std::string tok;
      if (!(in >> tok)) {
        throw ValidationError("state file: custom needs one weight per point");
      }
      w[i] = parse_complex(tok);
    }
    return State::custom(tower, std::move(w));
  }
  throw ValidationError("state file: unknown kind " + kind);
}

State read_state_file(const std::string& path, const UHFTower& tower) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state file: " + path);
  return read_state(in, tower);
}

}  // namespace lpt::io
