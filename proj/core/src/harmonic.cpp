#include "latdual/harmonic.hpp"

#include <cmath>
#include <sstream>

namespace latdual {

std::vector<cplx> fourier_abelian(const std::vector<cplx>& f, const AbelianGroup& a) {
  const int n = a.order();
  if (static_cast<int>(f.size()) != n) throw ParseError("weight length != group order");
  std::vector<cplx> out(n, cplx(0, 0));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int ad = 0; ad < n; ++ad) {
    cplx s = 0;
    for (int x = 0; x < n; ++x) s += std::conj(a.pairing(x, ad)) * f[x];
    out[ad] = s * scale;
  }
  return out;
}

std::vector<cplx> fourier_abelian_inverse(const std::vector<cplx>& f, const AbelianGroup& a) {
  const int n = a.order();
  if (static_cast<int>(f.size()) != n) throw ParseError("weight length != group order");
  std::vector<cplx> out(n, cplx(0, 0));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int x = 0; x < n; ++x) {
    cplx s = 0;
    for (int ad = 0; ad < n; ++ad) s += a.pairing(x, ad) * f[ad];
    out[x] = s * scale;
  }
  return out;
}

std::vector<cplx> fourier_abelian(const WeightFunction& f, const AbelianGroup& a) {
  std::vector<cplx> fc(f.begin(), f.end());
  return fourier_abelian(fc, a);
}

WeightFunction fourier_abelian_even(const WeightFunction& f, const AbelianGroup& a, double tol) {
  auto fc = fourier_abelian(f, a);
  WeightFunction out(fc.size());
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < fc.size(); ++i) {
    if (std::abs(fc[i].imag()) > tol * std::max(1.0, scale))
      throw NotEven("transform has a nonreal component; theta is not even");
    out[i] = fc[i].real();
  }
  return out;
}

OperatorTransform fourier_nonabelian(const WeightFunction& theta, const FiniteGroup& g,
                                     const std::vector<Irrep>& irreps) {
  const int n = g.order();
  if (static_cast<int>(theta.size()) != n) throw ParseError("weight length != group order");
  OperatorTransform out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (const auto& rho : irreps) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rho.dim, rho.dim);
    for (int x = 0; x < n; ++x) m += theta[x] * rho.mats[x].conjugate();
    out.blocks.push_back(m * scale);
  }
  return out;
}

bool is_even(const WeightFunction& theta, const FiniteGroup& g, double tol) {
  for (int x = 0; x < g.order(); ++x)
    if (std::abs(theta[x] - theta[g.inv(x)]) > tol) return false;
  return true;
}

std::string Admissibility::describe() const {
  std::ostringstream os;
  switch (violation) {
    case Violation::none: os << "admissible"; break;
    case Violation::negative_value:
      os << "theta(" << witness << ") = " << value << " < 0"; break;
    case Violation::not_even:
      os << "theta not even at element " << witness; break;
    case Violation::negative_dual:
      os << "theta^vee(" << witness << ") = " << value << " < 0"; break;
    case Violation::negative_operator:
      os << "theta^vee on irrep " << witness << " has eigenvalue " << value << " < 0"; break;
  }
  return os.str();
}

Admissibility is_admissible(const WeightFunction& theta, const FiniteGroup& g, double tol) {
  Admissibility r;
  if (static_cast<int>(theta.size()) != g.order())
    throw ParseError("weight length != group order");
  double scale = 0.0;
  for (double v : theta) scale = std::max(scale, std::abs(v));
  const double eps = tol * std::max(1.0, scale);

  for (int x = 0; x < g.order(); ++x) {
    if (theta[x] < -eps) {
      r.violation = Admissibility::Violation::negative_value;
      r.witness = x;
      r.value = theta[x];
      return r;
    }
  }
  for (int x = 0; x < g.order(); ++x) {
    if (std::abs(theta[x] - theta[g.inv(x)]) > eps) {
      r.violation = Admissibility::Violation::not_even;
      r.witness = x;
      r.value = theta[x] - theta[g.inv(x)];
      return r;
    }
  }

  if (g.is_abelian()) {
    auto t = fourier_abelian(theta, g.abelian());
    for (size_t i = 0; i < t.size(); ++i) {
      if (t[i].real() < -eps) {
        r.violation = Admissibility::Violation::negative_dual;
        r.witness = static_cast<int>(i);
        r.value = t[i].real();
        return r;
      }
    }
  } else {
    auto irreps = irreducibles(g);
    auto t = fourier_nonabelian(theta, g, irreps);
    for (size_t i = 0; i < t.blocks.size(); ++i) {
      // Evenness makes the block self-adjoint; symmetrize against rounding.
      Eigen::MatrixXcd h = (t.blocks[i] + t.blocks[i].adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      double lmin = es.eigenvalues().minCoeff();
      if (lmin < -eps) {
        r.violation = Admissibility::Violation::negative_operator;
        r.witness = static_cast<int>(i);
        r.value = lmin;
        return r;
      }
    }
  }

  r.admissible = true;
  return r;
}

}  // namespace latdual
