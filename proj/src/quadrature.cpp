#include "steerkit/quadrature.hpp"

#include <set>
#include <sstream>

namespace steerkit {

std::string mode_label(int mode) {
  if (mode < 0 || mode >= 26) {
    std::ostringstream msg;
    msg << "no letter label for mode index " << mode;
    throw DomainError(msg.str());
  }
  return std::string(1, static_cast<char>('A' + mode));
}

Eigen::VectorXd combo_vector(const QuadratureCombo& combo, int n_modes) {
  if (combo.empty()) {
    throw DomainError("quadrature combination must have at least one term");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * n_modes);
  std::set<std::pair<int, int>> seen;
  for (const auto& term : combo) {
    if (term.coefficient != 1 && term.coefficient != -1) {
      throw DomainError("quadrature coefficients must be +1 or -1");
    }
    if (term.mode < 0 || term.mode >= n_modes) {
      std::ostringstream msg;
      msg << "mode index " << term.mode << " out of range for " << n_modes
          << "-mode state";
      throw DomainError(msg.str());
    }
    const int offset = term.quad == Quadrature::x ? 0 : 1;
    if (!seen.insert({term.mode, offset}).second) {
      std::ostringstream msg;
      msg << "quadrature " << (offset == 0 ? 'x' : 'p') << mode_label(term.mode)
          << " appears more than once in a combination";
      throw DomainError(msg.str());
    }
    v(2 * term.mode + offset) = term.coefficient;
  }
  return v;
}

double combo_variance(const CovarianceMatrix& cm, const QuadratureCombo& combo) {
  const Eigen::VectorXd v = combo_vector(combo, cm.n_modes());
  return v.dot(cm.data() * v);
}

std::string combo_name(const QuadratureCombo& combo) {
  if (combo.empty()) {
    throw DomainError("quadrature combination must have at least one term");
  }
  std::string name;
  for (std::size_t i = 0; i < combo.size(); ++i) {
    const auto& term = combo[i];
    if (term.coefficient == -1) {
      name += '-';
    } else if (i > 0) {
      name += '+';
    }
    name += term.quad == Quadrature::x ? 'x' : 'p';
    name += mode_label(term.mode);
  }
  return name;
}

QuadratureCombo parse_combo(const std::string& text) {
  QuadratureCombo combo;
  std::size_t i = 0;
  while (i < text.size()) {
    int coefficient = 1;
    if (text[i] == '+' || text[i] == '-') {
      coefficient = text[i] == '-' ? -1 : 1;
      ++i;
    } else if (!combo.empty()) {
      throw ParseError("missing sign between terms in combination '" + text +
                       "'");
    }
    if (i + 2 > text.size()) {
      throw ParseError("truncated term in combination '" + text + "'");
    }
    Quadrature quad;
    if (text[i] == 'x') {
      quad = Quadrature::x;
    } else if (text[i] == 'p') {
      quad = Quadrature::p;
    } else {
      throw ParseError(std::string("expected quadrature 'x' or 'p', got '") +
                       text[i] + "' in combination '" + text + "'");
    }
    ++i;
    if (text[i] < 'A' || text[i] > 'Z') {
      throw ParseError(std::string("expected mode letter, got '") + text[i] +
                       "' in combination '" + text + "'");
    }
    combo.push_back(QuadratureTerm{text[i] - 'A', quad, coefficient});
    ++i;
  }
  if (combo.empty()) {
    throw ParseError("empty quadrature combination");
  }
  return combo;
}

}  // namespace steerkit
